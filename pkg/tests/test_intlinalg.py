import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors as sympy_invariant_factors

from equistab.errors import DomainError, ValidationError
from equistab.intlinalg import (FgAbGroup, IntChainComplex, Presentation, analyze_hom, homology, homology_basis,
                                induced_map, integer_kernel, invariant_factors, matmul, matrix, smith_normal_form,
                                zeros)

small_matrices = st.integers(0, 5).flatmap(lambda m: st.integers(0, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)
    .map(lambda rows, m=m, n=n: matrix(rows, shape=(m, n)))))


def sympy_factors(A):
    if A.size == 0:
        return []
    return [abs(int(x)) for x in sympy_invariant_factors(Matrix(A.tolist())) if x != 0]


@settings(max_examples=200, deadline=None)
@given(small_matrices)
def test_snf_matches_sympy_and_transforms(A):
    snf = smith_normal_form(A)
    assert snf.diagonal == sympy_factors(A)
    assert all(b % a == 0 for a, b in zip(snf.diagonal, snf.diagonal[1:]))
    assert np.array_equal(snf.U @ A @ snf.V, snf.diagonal_matrix())
    m, n = A.shape
    assert np.array_equal(snf.U @ snf.U_inv, np.eye(m, dtype=int).astype(object))
    assert np.array_equal(snf.V @ snf.V_inv, np.eye(n, dtype=int).astype(object))


@settings(max_examples=200, deadline=None)
@given(small_matrices)
def test_presentation_group_matches_sympy(R):
    m = R.shape[0]
    P = Presentation(m, R)
    facs = sympy_factors(R)
    expect = FgAbGroup(m - len(facs), tuple(f for f in facs if f > 1))
    assert P.group() == expect
    cb = P.canonical()
    # relations map to zero, canonical generators are nonzero
    for j in range(R.shape[1]):
        assert cb.is_zero(R[:, j:j + 1])
    for j in range(cb.group.ngens):
        assert not cb.is_zero(cb.from_canon[:, j:j + 1])


def test_big_entries_use_exact_arithmetic():
    A = matrix([[2**40, 3], [5, 2**41]])
    B = matrix([[2**40, 1], [1, 2**40]])
    assert matmul(A, B)[0, 0] == 2**80 + 3
    assert invariant_factors(matrix([[2**70, 0], [0, 3**45]])) == [1, 2**70 * 3**45]


def test_integer_kernel():
    A = matrix([[1, 2, 3], [2, 4, 6]])
    K = integer_kernel(A)
    assert K.shape == (3, 2)
    assert not any((A @ K).flat)


def test_homology_of_standard_complexes():
    # circle: one vertex, one edge
    assert homology(IntChainComplex([1, 1], {1: matrix([[0]])})) == [FgAbGroup(1), FgAbGroup(1)]
    # real projective plane, minimal cell structure
    rp2 = IntChainComplex([1, 1, 1], {1: matrix([[0]]), 2: matrix([[2]])})
    assert homology(rp2) == [FgAbGroup(1), FgAbGroup(0, (2,)), FgAbGroup()]
    with pytest.raises(DomainError):
        homology(IntChainComplex([1, 1, 1], {1: matrix([[1]]), 2: matrix([[1]])}))


def test_induced_map_degree_two_on_circle():
    C = IntChainComplex([1, 1], {1: matrix([[0]])})
    hb = homology_basis(C, 1)
    F = induced_map(hb, hb, matrix([[2]]))
    assert F.tolist() == [[2]]


def test_analyze_hom():
    Z, Z2 = Presentation.of_group(FgAbGroup(1)), Presentation.of_group(FgAbGroup(0, (2,)))
    assert analyze_hom(matrix([[1]]), Z, Z2).surjective
    assert not analyze_hom(matrix([[1]]), Z, Z2).injective
    assert not analyze_hom(matrix([[1]]), Z2, Z).well_defined
    assert analyze_hom(matrix([[-1]]), Z, Z).isomorphism
    with pytest.raises(ValidationError):
        analyze_hom(matrix([[1, 0]]), Z, Z)


def test_fg_ab_group_canonical_form():
    assert FgAbGroup.from_orders(0, [2, 3]) == FgAbGroup(0, (6,))
    assert FgAbGroup.from_orders(1, [4, 6, 1]) == FgAbGroup(1, (2, 12))
    assert str(FgAbGroup(2, (2,))) == "Z^2 + Z/2"
    with pytest.raises(ValidationError):
        FgAbGroup(0, (2, 3))
    assert FgAbGroup.from_json(FgAbGroup(3, (2, 4)).to_json()) == FgAbGroup(3, (2, 4))
    assert zeros(0, 3).shape == (0, 3)
