
import pytest
from hypothesis import given, settings, strategies as st

from equistab.errors import DomainError, ValidationError
from equistab.groups import FiniteAbelianGroup
from equistab.intlinalg import FgAbGroup, Presentation, identity, matrix, zeros
from equistab.stability import (GradedSequence, Monomial, MultigradedModule, Operator, check_stabilization,
                                cokernel_profile, fg_check_multigraded, fg_witness_from_stability, parse_module,
                                restrict_polynomial, validate_generators)
from seq_corpus import corpus

SMALL = [(2,), (3,), (4,), (2, 2), (6,), (8,), (2, 4), (2, 2, 2)]


def test_stable_sequence_report_and_witness():
    groups = [FgAbGroup(), FgAbGroup(1)] + [FgAbGroup(1, (2,))] * 4
    maps = [zeros(1, 0), matrix([[1], [0]])] + [identity(2)] * 3
    seq = GradedSequence(groups, maps)
    rep = check_stabilization(seq, window=2)
    assert rep.stable and rep.stable_from == 2 and rep.failing == (0, 1)
    prof = cokernel_profile(seq)
    assert prof[1] == FgAbGroup(1) and prof[2] == FgAbGroup(0, (2,)) and prof[3] == FgAbGroup()
    w = fg_witness_from_stability(seq, rep)
    assert w.validated and [n for n, _ in w.generators] == [1, 2]
    assert validate_generators(seq, [(1, (1,))]) == [2, 3, 4, 5]


def test_unstable_sequence():
    seq = GradedSequence([FgAbGroup(1)] * 5, [matrix([[2]])] * 4)
    rep = check_stabilization(seq)
    assert not rep.stable and rep.to_json()["not_stable_up_to"] == 4
    with pytest.raises(DomainError):
        fg_witness_from_stability(seq)
    with pytest.raises(DomainError):
        check_stabilization(seq, window=5)


def test_sequence_validation():
    with pytest.raises(ValidationError):
        GradedSequence([FgAbGroup(0, (2,)), FgAbGroup(1)], [matrix([[1]])])  # torsion to free
    with pytest.raises(ValidationError):
        GradedSequence([FgAbGroup(1), FgAbGroup(1)], [])
    seq = GradedSequence([FgAbGroup(1), FgAbGroup(0, (3,))], [matrix([[1]])])
    assert GradedSequence.from_json(seq.to_json()).to_json() == seq.to_json()


def test_stabilization_agrees_with_single_variable_fg():
    for _family, seq, expected in corpus(seed=7, per_family=6):
        rep = check_stabilization(seq)
        fg = fg_check_multigraded(seq.to_module(), window=1)
        assert rep.stable == fg.finitely_generated == expected


def _toy_module():
    """Z[a, b] truncated at total degree 2, with a, b of shift 1."""
    grades = [(i, j) for i in range(3) for j in range(3) if i + j <= 2]
    card = {g: sum(g) for g in grades}
    pieces = {g: Presentation.free(1) for g in grades}
    a = Operator("a", "a", 1, {g: ((g[0] + 1, g[1]), identity(1)) for g in grades if sum(g) < 2})
    b = Operator("b", "b", 1, {g: ((g[0], g[1] + 1), identity(1)) for g in grades if sum(g) < 2})
    return MultigradedModule(grades, card, pieces, [a, b], 2, {g: f"{g[0]},{g[1]}" for g in grades})


def test_fg_toy_polynomial_ring():
    mod = _toy_module()
    rep = fg_check_multigraded(mod)
    assert rep.finitely_generated and rep.max_generator_cardinality == 0
    only_a = fg_check_multigraded(mod, [Monomial.single(mod.operators["a"])])
    assert not only_a.finitely_generated
    assert parse_module(mod.to_json()).to_json() == mod.to_json()


def test_bad_operators_rejected():
    grades = [0, 1, 2]
    card = {0: 0, 1: 1, 2: 2}
    pieces = {0: Presentation.free(1), 1: Presentation.free(2), 2: Presentation.free(1)}
    a = Operator("a", "a", 1, {0: (1, matrix([[1], [0]])), 1: (2, matrix([[1, 0]]))})
    b = Operator("b", "b", 1, {0: (1, matrix([[0], [1]])), 1: (2, matrix([[1, 0]]))})
    with pytest.raises(ValidationError, match="commute"):
        MultigradedModule(grades, card, pieces, [a, b], 2)
    b_ok = Operator("b", "b", 1, {0: (1, matrix([[0], [1]])), 1: (2, matrix([[0, 1]]))})
    MultigradedModule(grades, card, pieces, [a, b_ok], 2)
    wrong_shift = Operator("c", "c", 2, {0: (1, matrix([[1], [0]]))})
    with pytest.raises(ValidationError, match="wrong amount"):
        MultigradedModule(grades, card, pieces, [wrong_shift], 2)


@settings(max_examples=30, deadline=None)
@given(st.permutations(list(range(6))))
def test_fg_invariant_under_grade_order(perm):
    mod = _toy_module()
    data = mod.to_json()
    order = [perm.index(i) for i in range(6)]
    grades = [None] * 6
    for i, g in enumerate(data["grades"]):
        grades[order[i]] = g
    ops = [{**op, "maps": [{**m, "from": order[m["from"]], "to": order[m["to"]]} for m in op["maps"]]}
           for op in data["operators"]]
    shuffled = parse_module({**data, "grades": grades, "operators": ops})
    a, b = fg_check_multigraded(mod), fg_check_multigraded(shuffled)
    assert a.finitely_generated == b.finitely_generated
    assert [(g.cardinality, g.group) for g in a.generators] == [(g.cardinality, g.group) for g in b.generators]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_restrict_polynomial_composes(factors, data):
    G = FiniteAbelianGroup(factors)
    subs = G.subgroups()
    K = data.draw(st.sampled_from(subs))
    L = data.draw(st.sampled_from([H for H in subs if H <= K]))
    direct = restrict_polynomial(G, L)
    via = restrict_polynomial(G, K).compose(restrict_polynomial(G, L, K))
    assert {H: direct.image(H) for H in subs} == via


def test_restrict_polynomial_errors():
    G = FiniteAbelianGroup((4,))
    C2 = [H for H in G.subgroups() if H.order == 2][0]
    with pytest.raises(DomainError):
        restrict_polynomial(G, G.whole, C2)
