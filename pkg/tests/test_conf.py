import json

import pytest
from hypothesis import given, settings, strategies as st

from equistab.concrete import ConcreteGSet
from equistab.conf import (CSGAssembler, bredon_h0_presentation, census_closed_form, components_of_fixed_config,
                           cs_decomposition, discrete_config_oracle, geometric_module, homology_of_CSG,
                           homology_of_CSG_all, kunneth, parse_descriptor, rho_model, stability_range_check,
                           stabilize_component, synthetic_table)
from equistab.conf.kunneth import chain_model, kunneth_all, lift_map, tensor_complex
from equistab.errors import DomainError, ResourceBoundError
from equistab.groups import FiniteAbelianGroup
from equistab.gsets import OrbitTypes, enumerate_gsets_upto
from equistab.intlinalg import FgAbGroup, homology, homology_basis, induced_map, matrix

C2 = FiniteAbelianGroup((2,))

groups = st.builds(lambda f, t: FgAbGroup.from_orders(f, t), st.integers(0, 2),
                   st.lists(st.sampled_from([2, 3, 4, 6]), max_size=2))
gradings = st.lists(groups, min_size=3, max_size=3)


@settings(max_examples=80, deadline=None)
@given(gradings, gradings)
def test_kunneth_matches_tensor_of_chain_models(A, B):
    top = 2
    T = tensor_complex(chain_model(A).complex, chain_model(B).complex, top + 1)
    assert homology(T.complex)[:top + 1] == kunneth_all(A, B, top)


@settings(max_examples=60, deadline=None)
@given(gradings, gradings, gradings)
def test_kunneth_order_independent(A, B, C):
    AB_C = kunneth_all(kunneth_all(A, B, 2), C, 2)
    A_BC = kunneth_all(A, kunneth_all(B, C, 2), 2)
    CB_A = kunneth_all(kunneth_all(C, B, 2), A, 2)
    assert AB_C == A_BC == CB_A


def test_kunneth_small_cases():
    Z, Z2 = FgAbGroup(1), FgAbGroup(0, (2,))
    # RP^2 x RP^2 in degree 3: Tor(Z/2, Z/2)
    rp2 = [Z, Z2, FgAbGroup()]
    assert kunneth(rp2, rp2, 2) == Z2
    assert kunneth(rp2 + [FgAbGroup()], rp2 + [FgAbGroup()], 3) == Z2
    with pytest.raises(DomainError):
        kunneth([Z], [Z], 1)


def test_lift_map_induces_the_given_maps():
    A = [FgAbGroup(1), FgAbGroup(1, (2,))]
    B = [FgAbGroup(1), FgAbGroup(1, (4,))]
    maps = [matrix([[1]]), matrix([[3, 0], [0, 2]])]
    src, tgt = chain_model(A), chain_model(B)
    f = lift_map(src, tgt, maps)
    for d in range(2):
        F = induced_map(homology_basis(src.complex, d), homology_basis(tgt.complex, d), f[d])
        assert F.tolist() == maps[d].tolist()
    with pytest.raises(DomainError):
        lift_map(chain_model([FgAbGroup(0, (2,))]), chain_model([FgAbGroup(1)]), [matrix([[1]])])


def test_components_and_decomposition():
    M = rho_model(C2)
    comps = components_of_fixed_config(M, 3)
    assert [S.label() for S in comps] == ["3[G/G]", "[G/e] + [G/G]"]
    dec = cs_decomposition(comps[1], M)
    assert dec.describe() == "C_1(M_(e)/G) x C_1(M_(G)/G)"
    st_ = stabilize_component(comps[1], C2.trivial, M)
    assert st_.target.label() == "2[G/e] + [G/G]" and st_.k_before == 1


def test_empty_stratum_is_a_domain_error():
    data = {"group": [2], "strata": [{"subgroup": "e", "nonempty": True, "connected": True, "stabilizable": True},
                                     {"subgroup": "G", "nonempty": False}]}
    M = parse_descriptor(data)
    S = OrbitTypes.of(C2).orbit(C2.whole)
    assert components_of_fixed_config(M, 1) == []
    with pytest.raises(DomainError, match="empty"):
        cs_decomposition(S, M)
    with pytest.raises(DomainError):
        stabilize_component(S, C2.whole, M)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2,), (3,), (4,), (2, 2), (6,)]), st.data())
def test_census_matches_closed_form(factors, data):
    G = FiniteAbelianGroup(factors)
    X = data.draw(st.sampled_from([S for S in enumerate_gsets_upto(G, 8) if S.cardinality]))
    cx = ConcreteGSet.from_class(X)
    for n in range(len(cx) + 1):
        assert discrete_config_oracle(cx, n).as_dict() == census_closed_form(X, n).as_dict()


def test_oracle_bounds():
    X = OrbitTypes.of(C2).orbit(C2.trivial, 11)
    with pytest.raises(ResourceBoundError):
        discrete_config_oracle(ConcreteGSet.from_class(X), 2)
    with pytest.raises(DomainError):
        discrete_config_oracle(ConcreteGSet.from_class(OrbitTypes.of(C2).orbit(C2.trivial)), 3)


def synthetic_c2():
    return rho_model(C2, 1, {C2.trivial: synthetic_table(8, 2), C2.whole: synthetic_table(8, 2)})


def test_homology_of_components_from_tables():
    M = synthetic_c2()
    types = OrbitTypes.of(C2)
    S = types.orbit(C2.trivial, 3) + types.orbit(C2.whole, 1)
    # factors C_3 (Z, Z+Z/2, Z^2) and C_1 (Z, Z^2, Z^2)
    H = homology_of_CSG_all(S, M, 2)
    assert H[0] == FgAbGroup(1)
    assert H[1] == FgAbGroup(3, (2,))
    assert H == kunneth_all(kunneth_all([FgAbGroup(1)] + [FgAbGroup()] * 2,
                                        [M.table(C2.trivial).entry(3, d) for d in range(3)], 2),
                            [M.table(C2.whole).entry(1, d) for d in range(3)], 2)


def test_stabilization_maps_chain_level():
    M = synthetic_c2()
    types = OrbitTypes.of(C2)
    asm = CSGAssembler(M, 1)
    S = types.orbit(C2.trivial, 2) + types.orbit(C2.whole, 2)
    res = asm.stabilization(S, C2.trivial)
    assert res.source_group == homology_of_CSG(S, M, 1)
    assert res.target_group == homology_of_CSG(res.target, M, 1)
    assert res.is_isomorphism  # k = 2 >= 2d
    res = asm.stabilization(types.orbit(C2.trivial, 1), C2.trivial)
    assert not res.is_isomorphism  # k = 1 < 2d


def test_missing_tables_are_reported():
    M = rho_model(C2)
    S = OrbitTypes.of(C2).orbit(C2.trivial, 2)
    assert homology_of_CSG(S, M, 0) == FgAbGroup(1)  # connected strata force H_0
    with pytest.raises(DomainError, match="missing table"):
        homology_of_CSG(S, M, 1)


def test_range_check_small():
    rep = stability_range_check(synthetic_c2(), C2.trivial, 2, 6)
    assert rep.confirmed and not rep.table_violations
    assert all(e.iso for e in rep.entries if e.in_range)
    assert any(not e.iso for e in rep.entries)


def test_descriptor_round_trip(tmp_path):
    M = synthetic_c2()
    data = json.loads(json.dumps(M.to_json()))
    M2 = parse_descriptor(data)
    assert M2.to_json() == data
    assert M2.restrict(C2.trivial).ambient == C2.trivial


def test_h0_presentation_c2():
    P = bredon_h0_presentation(rho_model(C2), 6)
    assert [r["derived_exponent"] for r in P.free_orbit_relations()] == [2, 4, 6]
    assert [r["orbit_count_exponent"] for r in P.free_orbit_relations()] == [1, 2, 3]
    # H_0 at every cardinality: y[n] and the x[G; T] modulo y = 2x
    for n in range(7):
        gens = P.generators[n]
        assert P.module.pieces[n].group() == FgAbGroup(1, (2,) * (len(gens) - 2))


def test_geometric_module_degree_zero():
    mod = geometric_module(rho_model(FiniteAbelianGroup((2, 2))), 0, 6)
    assert all(mod.pieces[g].group() == FgAbGroup(1) for g in mod.grades)
    assert len(mod.operators) == 5
