import random

import pytest
from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors as sympy_invariant_factors

from equistab.bredon import (assemble_bredon_complex, bredon_homology, fixed_point_complex,
                             free_orbit, parse_gcw, point, sign_disk, sign_sphere)
from equistab.errors import DomainError, ValidationError
from equistab.groups import FiniteAbelianGroup
from equistab.intlinalg import FgAbGroup, matrix
from equistab.mackey import burnside_mackey, constant_Z, parse_mackey, verify_mackey_axioms

C2 = FiniteAbelianGroup((2,))
Z = FgAbGroup(1)


def cokernel_oracle(rows):
    """coker of an integer matrix via sympy, as an FgAbGroup."""
    M = Matrix(rows)
    facs = [abs(int(x)) for x in sympy_invariant_factors(M) if x != 0]
    return FgAbGroup(M.rows - len(facs), tuple(f for f in facs if f > 1))


def test_constant_and_burnside_are_mackey(small_group):
    assert verify_mackey_axioms(constant_Z(small_group)).ok
    assert verify_mackey_axioms(burnside_mackey(small_group)).ok


def test_broken_transfer_is_detected():
    G = FiniteAbelianGroup((4,))
    M = constant_Z(G)
    H = [K for K in G.subgroups() if K.order == 2][0]
    M.tr[(G.trivial, H)] = matrix([[3]])
    rep = verify_mackey_axioms(M)
    assert not rep.ok and rep.failure


def test_mackey_json_round_trip():
    G = FiniteAbelianGroup((2, 2))
    A = burnside_mackey(G)
    B = parse_mackey(A.to_json())
    assert B.to_json()["transfers"] == A.to_json()["transfers"]


def test_point_and_free_orbit():
    for G in [C2, FiniteAbelianGroup((3,)), FiniteAbelianGroup((2, 2))]:
        assert bredon_homology(point(G), constant_Z(G)) == [Z]
        assert bredon_homology(free_orbit(G), constant_Z(G)) == [Z]
        assert bredon_homology(point(G), burnside_mackey(G)) == [FgAbGroup(len(G.subgroups()))]
        assert bredon_homology(free_orbit(G), burnside_mackey(G)) == [Z]


def test_disk_matches_point_in_all_degrees():
    for M in (constant_Z(C2), burnside_mackey(C2)):
        assert bredon_homology(sign_disk(), M) == bredon_homology(point(C2), M) + [FgAbGroup()]


def test_sign_sphere_against_cofiber_oracle():
    H = bredon_homology(sign_sphere(), constant_Z(C2))
    # two fixed points joined by a free arc: H_0 = Z + coker(Z --x2--> Z)
    coker = cokernel_oracle([[2]])
    assert coker == FgAbGroup(0, (2,))
    assert H == [FgAbGroup(1, coker.torsion), FgAbGroup()]
    # same answer from the assembled boundary matrix through sympy
    C = assemble_bredon_complex(sign_sphere(), constant_Z(C2))
    assert cokernel_oracle(C.d(1).tolist()) == H[0]


def test_fixed_points_of_sign_sphere():
    assert fixed_point_complex(sign_sphere(), C2.whole).homology() == [FgAbGroup(2), FgAbGroup()]
    assert fixed_point_complex(sign_sphere(), C2.trivial).homology() == [Z, Z]


def test_cell_order_does_not_matter():
    X = sign_sphere()
    rng = random.Random(1)
    for _ in range(5):
        perm = list(range(len(X.cells)))
        rng.shuffle(perm)
        assert bredon_homology(X.relabeled(perm), constant_Z(C2)) == bredon_homology(X, constant_Z(C2))


def test_invalid_complexes():
    data = sign_sphere().to_json()
    data["boundary"] += [{"from": 2, "to": 1, "coset": [0], "coeff": 2},
                         {"from": 2, "to": 0, "coset": [0], "coeff": -2}]
    # attaching map of degree 3 at both ends: coker(Z --(6,-6)--> Z^2)
    assert bredon_homology(parse_gcw(data), constant_Z(C2))[0] == FgAbGroup(1, (6,))
    bad = {"group": [2], "cells": [{"dim": 0, "isotropy": "e"}, {"dim": 1, "isotropy": "G"}],
           "boundary": [{"from": 1, "to": 0}]}
    with pytest.raises(ValidationError):
        parse_gcw(bad)
    with pytest.raises(DomainError):
        bredon_homology(sign_sphere(), constant_Z(FiniteAbelianGroup((3,))))
