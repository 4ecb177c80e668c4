import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commgraph.arith import GF, QQ
from commgraph.errors import HypothesisViolated
from commgraph.graph import distance_at_most_2, verify_chain
from commgraph.matrix import (
    Polynomial,
    SquareMatrix,
    commutant_basis,
    commute,
    companion,
    irreducible_polynomials,
    is_scalar,
)
from commgraph.witness import (
    CyclicFieldData,
    build_bundle,
    build_S,
    check_U,
    cyclic_field_fp,
    cyclic_field_q29,
    direct_sum_rank,
    distance_lower_probe,
    find_U,
    frame_pair,
    frobenius_twist_space,
    noncommutation_probe,
    normalize_matrix,
    random_commuting_chain,
    random_frame_nonderogatory,
    reduce_chain,
    reduce_matrix,
    witness_chain,
)


@pytest.fixture(scope="module")
def bundle():
    return build_bundle(3, 7, seed=0)


def Q(rows):
    return SquareMatrix(rows, QQ)


def test_twist_space_dimension_over_f3():
    x = Polynomial.x(GF(3))
    for m in irreducible_polynomials(3, 7, limit=3):
        assert frobenius_twist_space(companion(m), x.pow_mod(3, m)).dim == 7


def test_twist_space_identity_action_is_commutant():
    m = next(irreducible_polynomials(3, 7, limit=1))
    C = companion(m)
    assert frobenius_twist_space(C, Polynomial.x(GF(3))) == commutant_basis(C)


def test_twist_space_rejects_reducible():
    m = Polynomial([2, 1, 0, 0, 0, 0, 0, 1], GF(3))
    with pytest.raises(HypothesisViolated):
        frobenius_twist_space(companion(m), Polynomial.x(GF(3)).pow_mod(3, m))


def test_cyclic_field_checks():
    data = cyclic_field_fp(3, 7)
    data.check()
    bad = CyclicFieldData(data.field, data.m, Polynomial.x(GF(3)))
    with pytest.raises(HypothesisViolated):
        bad.check()


def test_U_properties(bundle):
    C, U, q = bundle.C, bundle.U, bundle.q
    checks = check_U(C, U)
    assert checks.ok and checks.failures() == []
    assert is_scalar(U**7)
    I = SquareMatrix.identity(q, bundle.field)
    assert (U @ (I + U)).is_invertible()
    assert direct_sum_rank(C, U) == 49
    # U x = σ(x) U on the basis I, C, ..., C^{q-1} of K
    X = I
    for _ in range(q):
        assert U @ X == bundle.data.sigma(X) @ U
        X = X @ C


def test_find_U_rejects_characteristic_two():
    data = cyclic_field_fp(2, 7)
    with pytest.raises(HypothesisViolated):
        find_U(data.C, data.g, 7)


def test_find_U_is_seeded():
    data = cyclic_field_fp(3, 7)
    assert find_U(data.C, data.g, seed=4) == find_U(data.C, data.g, seed=4)


def test_build_S(bundle):
    S, q = bundle.S, bundle.q
    assert S.is_invertible()
    assert S.block(0, 0, q) == SquareMatrix.identity(q, bundle.field)
    assert S.block(0, q, q) == bundle.U
    assert S.inverse() @ S == SquareMatrix.identity(2 * q, bundle.field)
    assert S.det() != 0


def test_build_S_rejects_bad_U():
    U = SquareMatrix.scalar(2, 3, GF(3))  # I + U = 0
    with pytest.raises(HypothesisViolated):
        build_S(U)


def test_noncommutation_probe_small(bundle):
    r = noncommutation_probe(bundle, trials=40, seed=3)
    assert r.commuting_pairs == 0
    assert r.to_json()["trials"] == 40


def test_noncommutation_probe_filters_scalars_and_threads():
    b = build_bundle(3, 3, seed=0)
    r1 = noncommutation_probe(b, trials=200, seed=0)
    r2 = noncommutation_probe(b, trials=200, seed=0, threads=3)
    assert r1.rejected_scalar > 0
    assert r1.commuting_pairs == 0
    assert r1.to_json() == r2.to_json()


def test_distance_lower_probe(bundle):
    A = random_frame_nonderogatory(bundle, seed=0)
    rep = distance_lower_probe(bundle, A)
    assert rep.joint_commutant_dim == 1 and not rep.at_most_2
    A1, _ = frame_pair(bundle, A)
    assert distance_lower_probe(bundle, A, B=A1).joint_commutant_dim == 14
    P = A1 @ A1 + A1
    assert commute(A1, P) and distance_at_most_2(A1, P)


def test_distance_probe_through_conjugated_frame(bundle):
    rng = random.Random(2)
    A = random_frame_nonderogatory(bundle, seed=1)
    from commgraph.matrix import direct_sum

    CC = direct_sum(bundle.C, bundle.C)
    while True:
        P = SquareMatrix.random(14, bundle.field, rng)
        if P.is_invertible():
            break
    Pi = P.inverse()
    rep = distance_lower_probe(bundle, Pi @ A @ P, X=Pi @ CC @ P)
    assert rep.joint_commutant_dim == 1


def test_witness_chain(bundle):
    A = random_frame_nonderogatory(bundle, seed=0)
    chain = witness_chain(bundle, A)
    assert len(chain) == 7 and verify_chain(chain)


def test_rational_cyclic_field():
    data = cyclic_field_q29()
    data.check()
    assert data.q == 7 and all(c.denominator == 1 for c in data.m.coeffs)
    U = find_U(data.C, data.g, 7, seed=0)
    assert check_U(data.C, U).ok


# chain reduction


def test_normalize_examples():
    N = Q(((0, 1), (0, 0)))
    assert normalize_matrix(N, 2) == N
    X = SquareMatrix.scalar(2, 2, QQ) + N.scale(4)
    assert reduce_matrix(normalize_matrix(X, 2), 2) == SquareMatrix(((0, 1), (0, 0)), GF(2))
    Y = Q(((Fraction(1, 3), 0), (0, 2)))
    assert normalize_matrix(Y, 3) == Q(((1, 0), (0, 6)))
    with pytest.raises(HypothesisViolated):
        normalize_matrix(SquareMatrix.scalar(5, 2, QQ), 5)


def test_reduce_chain_examples():
    A = Q(((1, 1), (0, 2)))
    red = reduce_chain([A, A @ A, A + A @ A], 3)
    assert verify_chain(red) and red[0] == reduce_matrix(A, 3)
    N = Q(((0, 1), (0, 0)))
    X = SquareMatrix.scalar(2, 2, QQ) + N.scale(4)
    red = reduce_chain([N, X, N], 2)
    assert red[1] == SquareMatrix(((0, 1), (0, 0)), GF(2)) and verify_chain(red)
    with pytest.raises(HypothesisViolated):
        reduce_chain([A, SquareMatrix.identity(2, QQ), A], 3)


small = st.integers(-20, 20)


@settings(max_examples=60, deadline=None)
@given(st.lists(small, min_size=9, max_size=9), st.sampled_from([2, 3, 5]), st.integers(0, 4), small)
def test_normalize_terminates_and_preserves_commutant(entries, p, k, lam):
    X = SquareMatrix.from_vec(entries, 3, QQ)
    if is_scalar(X):
        return
    Y = SquareMatrix.scalar(lam, 3, QQ) + X.scale(Fraction(p) ** k)
    Z = normalize_matrix(Y, p)
    assert not is_scalar(reduce_matrix(Z, p))
    assert commutant_basis(Z) == commutant_basis(Y)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5, 7]))
def test_reduction_transports_commutation(seed, p):
    rng = random.Random(seed)
    A = SquareMatrix.random(3, QQ, rng, 6)
    B = A @ A - A.scale(rng.randint(-3, 3))
    assert commute(reduce_matrix(A, p), reduce_matrix(B, p))


def test_random_chains_reduce():
    rng = random.Random(21)
    for p in (2, 3, 5):
        for _ in range(10):
            chain = random_commuting_chain(rng, p)
            red = reduce_chain(chain, p)
            assert len(red) == len(chain) and verify_chain(red)
