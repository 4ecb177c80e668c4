import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commgraph.arith import GF, QQ
from commgraph.errors import HypothesisViolated, InvalidArgument, ShapeMismatch, SingularMatrix
from commgraph.matrix import (
    Polynomial,
    SquareMatrix,
    char_poly,
    commutant_basis,
    commute,
    companion,
    conjugate,
    direct_sum,
    identical_cell_form,
    intertwiner_basis,
    irreducible_polynomials,
    is_irreducible,
    is_nonderogatory,
    is_scalar,
    joint_commutant_basis,
    min_poly,
)


def poly(coeffs, f=QQ):
    return Polynomial(coeffs, f)


def all_matrices(p, n):
    for entries in itertools.product(range(p), repeat=n * n):
        yield SquareMatrix.from_vec(entries, n, GF(p))


def invertible_random(n, f, rng):
    while True:
        T = SquareMatrix.random(n, f, rng)
        if T.is_invertible():
            return T


# polynomials and companions


def test_companion_examples():
    assert companion(poly([1, 0, 1])) == SquareMatrix(((0, -1), (1, 0)))
    assert companion(poly([-5, 1])) == SquareMatrix(((5,),))
    m = poly([2, 1, 0, 0, 0, 0, 0, 1], GF(3))
    assert min_poly(companion(m)) == m
    with pytest.raises(InvalidArgument):
        companion(poly([1, 2]))  # 2x + 1 is not monic


def test_min_poly_examples():
    assert min_poly(SquareMatrix.identity(3)) == poly([-1, 1])
    C = companion(poly([1, 1, 1], GF(2)))
    assert min_poly(direct_sum(C, C)) == min_poly(C)


def test_irreducibility():
    # x^7 + x + 2 has the root 2 over F_3
    assert not is_irreducible(poly([2, 1, 0, 0, 0, 0, 0, 1], GF(3)))
    assert is_irreducible(poly([1, 1, 1], GF(2)))
    # number of monic irreducible cubics over F_3 is (27 - 3)/3 = 8
    assert len(list(irreducible_polynomials(3, 3))) == 8
    assert len(list(irreducible_polynomials(2, 4))) == 3


def test_polynomial_arithmetic():
    f = GF(5)
    a, b = poly([1, 2, 3], f), poly([4, 0, 1], f)
    q, r = divmod(a * b + poly([1], f), b)
    assert q == a and r == poly([1], f)
    assert a.gcd(a * b) == a.monic()


# commutants


def test_commutant_examples():
    assert commutant_basis(SquareMatrix(((0, 0, 0), (0, 0, 0), (0, 0, 1)))).dim == 5
    assert commutant_basis(SquareMatrix.scalar(3, 3)).dim == 9
    C = companion(poly([1, 1, 0, 1], GF(2)))
    assert commutant_basis(C).dim == 3


def test_joint_commutant_trivial_cases():
    A = SquareMatrix(((1, 2), (3, 4)))
    assert joint_commutant_basis(A, SquareMatrix.identity(2)) == commutant_basis(A)
    assert joint_commutant_basis(A, A) == commutant_basis(A)


def test_joint_commutant_against_enumeration():
    f = GF(2)
    A = direct_sum(companion(poly([0, 0, 1], f)), SquareMatrix.zero(1, f))
    B = SquareMatrix(((1, 0, 1), (1, 1, 0), (0, 1, 0)), f)
    assert not commute(A, B)
    both = [X for X in all_matrices(2, 3) if commute(X, A) and commute(X, B)]
    J = joint_commutant_basis(A, B)
    assert 2**J.dim == len(both)
    assert all(J.contains(X) for X in both)


def test_intertwiner_basis_identity_case():
    A = SquareMatrix(((0, 1), (2, 3)), GF(5))
    assert intertwiner_basis(A, A) == commutant_basis(A)


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2)])
def test_commutant_exhaustive(p, n):
    mats = list(all_matrices(p, n))
    sample = mats if p**(n * n) <= 81 else random.Random(1).sample(mats, 40)
    for A in sample:
        cb = commutant_basis(A)
        count = sum(commute(A, X) for X in mats)
        assert p**cb.dim == count
        assert cb.contains(SquareMatrix.identity(n, GF(p)))
        assert cb.dim >= n
        assert (cb.dim == n) == (min_poly(A).degree == n) == is_nonderogatory(A)


def test_commute_and_scalar_examples():
    A = SquareMatrix(((1, 2), (3, 4)))
    assert commute(A, A @ A)
    assert is_scalar(SquareMatrix.identity(4))
    assert not is_scalar(companion(poly([1, 0, 1])))
    assert not commute(SquareMatrix(((0, 1), (0, 0))), SquareMatrix(((0, 0), (1, 0))))
    with pytest.raises(ShapeMismatch):
        commute(A, SquareMatrix.identity(3))


def test_conjugate_and_direct_sum():
    rng = random.Random(3)
    A = SquareMatrix.random(3, QQ, rng)
    assert conjugate(SquareMatrix.identity(3), A) == A
    T = invertible_random(3, QQ, rng)
    assert min_poly(conjugate(T, A)) == min_poly(A)
    assert commutant_basis(conjugate(T, A)).dim == commutant_basis(A).dim
    assert direct_sum(SquareMatrix.identity(2), SquareMatrix.identity(3)).n == 5


def test_inverse_and_singular():
    A = SquareMatrix(((2, 1), (1, 1)))
    assert A @ A.inverse() == SquareMatrix.identity(2)
    with pytest.raises(SingularMatrix):
        SquareMatrix(((1, 2), (2, 4))).inverse()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([QQ, GF(2), GF(3), GF(7)]), st.integers(1, 5))
def test_cayley_hamilton(seed, f, n):
    A = SquareMatrix.random(n, f, random.Random(seed))
    assert char_poly(A)(A) == SquareMatrix.zero(n, f)
    assert (char_poly(A) % min_poly(A)).is_zero()


# identical-cell form


def test_identical_cell_trivial():
    C = companion(poly([1, 1, 1], GF(2)))
    X = direct_sum(C, C)
    T, C2 = identical_cell_form(X)
    assert C2 == C
    assert T.inverse() @ direct_sum(C2, C2) @ T == X


def test_identical_cell_roundtrip():
    rng = random.Random(7)
    f = GF(3)
    m = next(irreducible_polynomials(3, 3))
    C = companion(m)
    P = invertible_random(6, f, rng)
    X = P.inverse() @ direct_sum(C, C) @ P
    T, C2 = identical_cell_form(X)
    assert C2 == companion(min_poly(X))
    assert T.inverse() @ direct_sum(C2, C2) @ T == X


def test_identical_cell_rejects_reducible():
    with pytest.raises(HypothesisViolated):
        identical_cell_form(SquareMatrix(((1, 0), (0, 2)), GF(3)))


def test_json_roundtrip():
    A = SquareMatrix(((1, -2), (3, 4))).scale(QQ("1/3"))
    assert SquareMatrix.from_json(A.to_json()) == A
    B = SquareMatrix.from_array(np.array([[1, 2], [0, 1]]), GF(5))
    assert SquareMatrix.from_json(B.to_json()) == B


@settings(max_examples=80)
@given(st.lists(st.lists(st.integers(0, 1), min_size=7, max_size=7), max_size=12))
def test_gf2_rank_fast_path(rows):
    from commgraph.linalg import rank, rref

    assert rank(rows, 7, GF(2)) == len(rref(rows, 7, GF(2))[1])
