from itertools import combinations

import pytest

from equistab.errors import ResourceBoundError, ValidationError
from equistab.groups import FiniteAbelianGroup, containment, enumerate_subgroups, lattice_ops, parse_group


def brute_subgroups(G):
    """All subsets containing 0 and closed under addition (finite, so subgroups)."""
    others = [g for g in G.elements if g != G.identity]
    out = set()
    for r in range(len(others) + 1):
        for combo in combinations(others, r):
            S = set(combo) | {G.identity}
            if all(G.add(a, b) in S for a in S for b in S):
                out.add(frozenset(S))
    return out


@pytest.mark.parametrize("factors", [(2,), (4,), (6,), (2, 2), (2, 4), (8,)])
def test_subgroups_match_brute_force(factors):
    G = FiniteAbelianGroup(factors)
    subs = enumerate_subgroups(G)
    assert {frozenset(H.elements) for H in subs} == brute_subgroups(G)
    assert len(set(subs)) == len(subs)


def test_subgroup_counts(small_group):
    known = {(): 1, (2,): 2, (3,): 2, (4,): 3, (2, 2): 5, (5,): 2, (6,): 4, (7,): 2, (8,): 4,
             (2, 4): 8, (2, 2, 2): 16}
    assert len(small_group.subgroups()) == known[small_group.invariant_factors]


def test_order_refines_inclusion(small_group):
    subs = small_group.subgroups()
    for i, j in containment(subs):
        assert i <= j


def test_lattice_ops():
    G = FiniteAbelianGroup((2, 4))
    for H in G.subgroups():
        for K in G.subgroups():
            ops = lattice_ops(G, H, K)
            assert set(ops.meet.elements) == set(H.elements) & set(K.elements)
            assert ops.join.order * ops.meet.order == H.order * K.order
            assert ops.index * H.order == G.order
            assert ops.quotient.group.order == G.order // H.order


def test_parse_group_and_bounds():
    assert parse_group("[2,3]") == FiniteAbelianGroup((6,))
    assert parse_group({"invariant_factors": [4, 2]}) == FiniteAbelianGroup((2, 4))
    with pytest.raises(ValidationError):
        parse_group("[2,")
    with pytest.raises(ValidationError):
        FiniteAbelianGroup((4, 2))
    with pytest.raises(ResourceBoundError):
        enumerate_subgroups(FiniteAbelianGroup((2, 2, 2, 2, 2, 2, 2)))
    with pytest.raises(ResourceBoundError):
        enumerate_subgroups(FiniteAbelianGroup((8,)), bound=4)
    assert len(enumerate_subgroups(FiniteAbelianGroup((2, 2, 2, 2)), bound=16)) == 67


def test_parse_subgroup_element_forms():
    from equistab.groups import parse_subgroup
    C2 = FiniteAbelianGroup((2,))
    assert parse_subgroup(C2, [0]) == C2.trivial
    assert parse_subgroup(C2, [[0], [1]]) == C2.whole
    assert parse_subgroup(C2, {"generators": [[1]]}) == C2.whole
    with pytest.raises(ValidationError):
        parse_subgroup(FiniteAbelianGroup((2, 2)), [0])
    with pytest.raises(ValidationError):
        parse_subgroup(C2, [["x"]])
