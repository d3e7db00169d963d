import numpy as np

from equistab.groups import FiniteAbelianGroup
from equistab.reps import (fixed_dim, is_stabilizable, isotropy_strata, parse_representation,
                           regular_rep, summands)


def real_matrices(V, g):
    """Block-diagonal real matrices of g, built numerically from the characters."""
    G = V.group
    blocks = []
    for c in summands(V):
        angle = 2 * np.pi * sum(ci * gi / d for ci, gi, d in zip(c, g, G.invariant_factors))
        cos, sin = np.cos(angle), np.sin(angle)
        if all((2 * ci) % d == 0 for ci, d in zip(c, G.invariant_factors)):
            blocks.append(np.array([[cos]]))
        else:
            blocks.append(np.array([[cos, -sin], [sin, cos]]))
    n = sum(b.shape[0] for b in blocks)
    out, i = np.zeros((n, n)), 0
    for b in blocks:
        k = b.shape[0]
        out[i:i + k, i:i + k] = b
        i += k
    return out


def numeric_fixed_dim(V, H):
    P = sum(real_matrices(V, h) for h in H.elements) / H.order
    return int(round(np.trace(P)))


def test_fixed_dims_against_numeric_projector(small_group):
    V = regular_rep(small_group)
    assert V.dim == small_group.order
    for H in small_group.subgroups():
        assert fixed_dim(V, H) == small_group.order // H.order
        assert numeric_fixed_dim(V, H) == fixed_dim(V, H)


def test_regular_rep_stabilizable_everywhere(small_group):
    V = regular_rep(small_group, 2)
    assert all(is_stabilizable(V, H) for H in small_group.subgroups())
    assert len(isotropy_strata(V)) == len(small_group.subgroups())


def test_sign_representation():
    G = FiniteAbelianGroup((2,))
    V = parse_representation(G, {"characters": [{"coeffs": [1]}]})
    assert V.dim == 1
    assert is_stabilizable(V, G.trivial)
    assert not is_stabilizable(V, G.whole)
    assert [s.subgroup for s in isotropy_strata(V)] == [G.trivial, G.whole]


def test_rotation_rep_of_c4():
    G = FiniteAbelianGroup((4,))
    V = parse_representation(G, {"characters": [{"coeffs": [1]}, {"coeffs": [2]}]})
    assert V.dim == 3
    C2 = [H for H in G.subgroups() if H.order == 2][0]
    assert fixed_dim(V, C2) == numeric_fixed_dim(V, C2) == 1
    assert is_stabilizable(V, C2)
    assert fixed_dim(V, G.whole) == 0
    assert not is_stabilizable(V, G.whole)
