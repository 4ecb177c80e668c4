"""Explicit matrices behind the diameter-6 construction, and mod-p chain reduction.

A cyclic degree-q field K = F[C] (C a companion matrix) with Galois generator
C -> g(C) yields a twist matrix U (U C = g(C) U) and the 2q x 2q matrix
S = [[I, U], [U, -U^3]].  For nonscalar F, G in M_2(K) ⊂ M_2q(F), F never
commutes with S^-1 G S; the probes here check that mechanism at desk scale.
"""

from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .arith import GF, QQ, Field, PrimeField, reduce_mod_p, require_prime, vp
from .errors import HypothesisViolated, InvalidArgument, NotFound
from .graph import distance_at_most_2, verify_chain
from .matrix import (
    Polynomial,
    SquareMatrix,
    Subspace,
    commute,
    companion,
    direct_sum,
    identical_cell_form,
    intertwiner_basis,
    irreducible_polynomials,
    is_irreducible,
    is_scalar,
    joint_commutant_basis,
    min_poly,
)


@dataclass(frozen=True)
class CyclicFieldData:
    field: Field
    m: Polynomial
    g: Polynomial

    @property
    def q(self) -> int:
        return self.m.degree

    @property
    def C(self) -> SquareMatrix:
        return companion(self.m)

    def sigma(self, X: SquareMatrix) -> SquareMatrix:
        """Galois action on an element X of F[C], X = h(C) -> h(g(C))."""
        h = polynomial_in(X, self.C)
        return h(self.g(self.C))

    def check(self) -> None:
        C = self.C
        if isinstance(self.field, PrimeField) and not is_irreducible(self.m):
            raise HypothesisViolated(f"{self.m!r} is reducible over F_{self.field.p}")
        G = self.g(C)
        if min_poly(G) != self.m:
            raise HypothesisViolated("g(C) is not a root of m")
        cur = C
        for k in range(1, self.q + 1):
            cur = self.g(cur)
            if (cur == C) != (k == self.q):
                raise HypothesisViolated(f"g does not generate a cyclic action of order {self.q}")


def polynomial_in(X: SquareMatrix, C: SquareMatrix) -> Polynomial:
    """h with X = h(C), for X in F[C] (C nonderogatory)."""
    f = C.field
    q = C.n
    powers = []
    cur = SquareMatrix.identity(q, f)
    for _ in range(q):
        powers.append(cur.vec())
        cur = cur @ C
    coeffs = linalg.solve_in_span(powers, X.vec(), f)
    if coeffs is None:
        raise HypothesisViolated("matrix is not a polynomial in C")
    return Polynomial(coeffs, f)


def cyclic_field_fp(p: int, q: int, seed: int | None = None) -> CyclicFieldData:
    """F_p[C] = F_{p^q}; Frobenius C -> C^p.

    Without a seed m is the lexicographically first irreducible polynomial.
    """
    require_prime(p)
    require_prime(q, "q")
    rng = None if seed is None else random.Random(seed)
    m = next(irreducible_polynomials(p, q, limit=1, rng=rng))
    x = Polynomial.x(GF(p))
    return CyclicFieldData(GF(p), m, x.pow_mod(p, m))


def cyclic_field_q29() -> CyclicFieldData:
    """Degree-7 subfield of Q(ζ_29), generated by a Gaussian period of length 4.

    Arithmetic is exact in Q[x]/Φ_29; σ: ζ -> ζ^2 moves η_0 to η_1.
    """
    ell, q = 29, 7
    phi = Polynomial([1] * ell, QQ)
    gen = 2  # primitive root mod 29
    H = [pow(gen, q * k, ell) for k in range((ell - 1) // q)]

    def period(j):
        c = [0] * ell
        for h in H:
            c[pow(gen, j, ell) * h % ell] += 1
        return Polynomial(c, QQ) % phi

    eta0, eta1 = period(0), period(1)
    dim = ell - 1

    def vec(poly):
        return list(poly.coeffs) + [Fraction(0)] * (dim - len(poly.coeffs))

    powers = [Polynomial([1], QQ)]
    for _ in range(q):
        powers.append(powers[-1] * eta0 % phi)
    basis = [vec(pw) for pw in powers[:q]]
    c = linalg.solve_in_span(basis, vec(powers[q]), QQ)
    g = linalg.solve_in_span(basis, vec(eta1), QQ)
    if c is None or g is None:  # pragma: no cover
        raise HypothesisViolated("period does not generate a degree-7 field")
    m = Polynomial([-x for x in c] + [1], QQ)
    return CyclicFieldData(QQ, m, Polynomial(g, QQ))


# ---------------------------------------------------------------------------


def frobenius_twist_space(C: SquareMatrix, g: Polynomial) -> Subspace:
    """{U : U C = g(C) U}."""
    if isinstance(C.field, PrimeField) and not is_irreducible(min_poly(C)):
        raise HypothesisViolated("C must have an irreducible minimal polynomial")
    G = g(C)
    if min_poly(G) != min_poly(C):
        raise HypothesisViolated("g(C) is not conjugate to C")
    space = intertwiner_basis(G, C)
    if space.dim == 0:
        raise HypothesisViolated("no nonzero twist matrix: K/F is not cyclic via g")
    return space


@dataclass
class UChecks:
    invertible: bool
    power_scalar: bool
    one_plus_invertible: bool
    direct_sum_rank: int
    q: int

    @property
    def ok(self) -> bool:
        return self.invertible and self.power_scalar and self.one_plus_invertible and self.direct_sum_rank == self.q**2

    def failures(self) -> list[str]:
        out = []
        if not self.invertible:
            out.append("U singular")
        if not self.power_scalar:
            out.append("U^q not scalar")
        if not self.one_plus_invertible:
            out.append("U(I+U) singular")
        if self.direct_sum_rank != self.q**2:
            out.append("sum of K U^j not direct")
        return out


def direct_sum_rank(C: SquareMatrix, U: SquareMatrix) -> int:
    """Rank of the q^2 coordinate vectors of C^i U^j, 0 <= i, j < q."""
    q, f = C.n, C.field
    vecs = []
    Ci = SquareMatrix.identity(q, f)
    Upow = [SquareMatrix.identity(q, f)]
    for _ in range(q - 1):
        Upow.append(Upow[-1] @ U)
    for _ in range(q):
        for Uj in Upow:
            vecs.append((Ci @ Uj).vec())
        Ci = Ci @ C
    return linalg.rank(vecs, q * q, f)


def check_U(C: SquareMatrix, U: SquareMatrix) -> UChecks:
    q, f = C.n, C.field
    I = SquareMatrix.identity(q, f)
    inv = U.is_invertible()
    return UChecks(
        invertible=inv,
        power_scalar=is_scalar(U**q),
        one_plus_invertible=(U @ (I + U)).is_invertible(),
        direct_sum_rank=direct_sum_rank(C, U) if inv else 0,
        q=q,
    )


def find_U(C: SquareMatrix, g: Polynomial, q: int | None = None, seed: int = 0,
           max_tries: int = 200, coeff_bound: int = 3) -> SquareMatrix:
    """A twist matrix U with U, U(I+U) invertible, U^q scalar and M_q(F) = ⊕ K U^j.

    Candidates are seeded random combinations of the twist-space basis;
    every candidate is checked directly against all four properties.
    """
    q = C.n if q is None else q
    if C.n != q:
        raise InvalidArgument(f"C is {C.n}x{C.n}, expected q={q}")
    if C.field.characteristic == 2:
        raise HypothesisViolated("characteristic 2 is excluded")
    f = C.field
    space = frobenius_twist_space(C, g)
    rng = random.Random(seed)
    fails: Counter = Counter()
    basis = space.basis
    for _ in range(max_tries):
        if isinstance(f, PrimeField):
            coeffs = [rng.randrange(f.p) for _ in basis]
        else:
            coeffs = [rng.randint(-coeff_bound, coeff_bound) for _ in basis]
        U = SquareMatrix.zero(q, f)
        for c, B in zip(coeffs, basis):
            if c:
                U = U + B.scale(c)
        checks = check_U(C, U)
        if checks.ok:
            return U
        fails.update(checks.failures())
    worst = fails.most_common(1)[0][0] if fails else "none"
    raise NotFound(f"no valid U in {max_tries} tries; most frequent failure: {worst} ({dict(fails)})")


def build_S(U: SquareMatrix) -> SquareMatrix:
    """[[I, U], [U, -U^3]]."""
    q, f = U.n, U.field
    I = SquareMatrix.identity(q, f)
    U3 = U @ U @ U
    rows = [a + b for a, b in zip(I.rows, U.rows)] + [a + b for a, b in zip(U.rows, (-U3).rows)]
    S = SquareMatrix(tuple(rows), f)
    if not S.is_invertible():
        raise HypothesisViolated("S is singular: U fails the invertibility checks")
    return S


@dataclass
class WitnessBundle:
    data: CyclicFieldData
    U: SquareMatrix
    S: SquareMatrix
    seed: int

    @property
    def C(self) -> SquareMatrix:
        return self.data.C

    @property
    def q(self) -> int:
        return self.data.q

    @property
    def field(self) -> Field:
        return self.data.field

    def embed(self, blocks) -> SquareMatrix:
        """2x2 matrix over K = F[C] given as polynomials (a, b, c, d) -> 2q x 2q block matrix."""
        a, b, c, d = (h(self.C) for h in blocks)
        top = [r + s for r, s in zip(a.rows, b.rows)]
        bot = [r + s for r, s in zip(c.rows, d.rows)]
        return SquareMatrix(tuple(top + bot), self.field)

    def S_inv(self) -> SquareMatrix:
        return self.S.inverse()


def build_bundle(p: int = 3, q: int = 7, seed: int = 0, rational: bool = False) -> WitnessBundle:
    if rational:
        data = cyclic_field_q29()
        if q != data.q:
            raise InvalidArgument("the rational cyclic field has q = 7")
    else:
        if p == 2:
            raise HypothesisViolated("characteristic 2 is excluded")
        data = cyclic_field_fp(p, q)
    data.check()
    U = find_U(data.C, data.g, data.q, seed=seed)
    return WitnessBundle(data, U, build_S(U), seed)


# ---------------------------------------------------------------------------
# probes


def _random_poly(rng: random.Random, field: Field, q: int) -> Polynomial:
    if isinstance(field, PrimeField):
        return Polynomial([rng.randrange(field.p) for _ in range(q)], field)
    return Polynomial([rng.randint(-3, 3) for _ in range(q)], field)


def _random_block(rng, bundle: WitnessBundle, kind: str) -> tuple:
    f, q = bundle.field, bundle.q
    zero = Polynomial([], f)
    if kind == "k-scalar":
        k = _random_poly(rng, f, q)
        return (k, zero, zero, k)
    return tuple(_random_poly(rng, f, q) for _ in range(4))


@dataclass
class ProbeReport:
    trials: int
    seed: int
    commuting_pairs: int
    rejected_scalar: int
    by_kind: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "commuting_pairs": self.commuting_pairs,
            "rejected_scalar": self.rejected_scalar,
            "by_kind": dict(sorted(self.by_kind.items())),
        }


KINDS = ("general", "F k-scalar", "G k-scalar", "G = F")


def noncommutation_probe(bundle: WitnessBundle, trials: int = 1000, seed: int = 0, threads: int = 1) -> ProbeReport:
    """Sample nonscalar F, G in M_2(K) and count pairs where F commutes with S^-1 G S.

    Trials cycle through four kinds: general F, G; F scalar over K; G scalar
    over K; G = F.  Scalar draws (over F) are rejected and redrawn.  Samples
    are drawn sequentially, so ``threads`` does not change the report.
    """
    rng = random.Random(seed)
    S, Si = bundle.S, bundle.S_inv()
    report = ProbeReport(trials, seed, 0, 0, {k: 0 for k in KINDS})

    def draw(kind):
        while True:
            M = bundle.embed(_random_block(rng, bundle, kind))
            if not is_scalar(M):
                return M
            report.rejected_scalar += 1

    samples = []
    for t in range(trials):
        kind = KINDS[t % len(KINDS)]
        F = draw("k-scalar" if kind == "F k-scalar" else "general")
        G = F if kind == "G = F" else draw("k-scalar" if kind == "G k-scalar" else "general")
        samples.append((kind, F, G))

    def commutes(sample):
        _, F, G = sample
        H = Si @ G @ S
        return F @ H == H @ F

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(commutes, samples))
    else:
        results = [commutes(s) for s in samples]
    for t, ((kind, F, G), hit) in enumerate(zip(samples, results)):
        if hit:
            report.commuting_pairs += 1
            report.by_kind[kind] += 1
            report.failures.append((t, F, G))
    return report


lemma33_probe = noncommutation_probe  # operation name used by the published interface


def random_frame_nonderogatory(bundle: WitnessBundle, seed: int = 0, max_tries: int = 500) -> SquareMatrix:
    """A nonderogatory 2q x 2q matrix in M_2(K), i.e. commuting with C ⊕ C."""
    rng = random.Random(seed)
    n = 2 * bundle.q
    for _ in range(max_tries):
        A = bundle.embed(_random_block(rng, bundle, "general"))
        if min_poly(A).degree == n:
            return A
    raise NotFound("no nonderogatory element of M_2(K) found")


@dataclass
class DistanceProbeReport:
    joint_commutant_dim: int
    at_most_2: bool
    commutant_dim_A1: int
    commutant_dim_B1: int

    def to_json(self) -> dict:
        return {
            "joint_commutant_dim": self.joint_commutant_dim,
            "distance_at_most_2": self.at_most_2,
            "commutant_dim_A1": self.commutant_dim_A1,
            "commutant_dim_B1": self.commutant_dim_B1,
        }


def frame_pair(bundle: WitnessBundle, A: SquareMatrix, X: SquareMatrix | None = None):
    """(A1, B1) = (T A T^-1, S^-1 A1 S), T from the identical-cell form of X.

    Without X, A is taken to commute with C ⊕ C already (T = I).
    """
    q = bundle.q
    if A.n != 2 * q or A.field != bundle.field:
        raise InvalidArgument(f"A must be {2 * q}x{2 * q} over {bundle.field}")
    if X is None:
        A1 = A
    else:
        if not commute(A, X):
            raise HypothesisViolated("X must commute with A")
        T, C = identical_cell_form(X)
        if C != bundle.C:
            raise HypothesisViolated("X is not conjugate to C ⊕ C for the bundle's C")
        A1 = T @ A @ T.inverse()
    if min_poly(A1).degree != 2 * q:
        raise HypothesisViolated("A is derogatory")
    CC = direct_sum(bundle.C, bundle.C)
    if not commute(A1, CC):
        raise HypothesisViolated("A1 does not commute with C ⊕ C")
    return A1, bundle.S_inv() @ A1 @ bundle.S


def distance_lower_probe(bundle: WitnessBundle, A: SquareMatrix, X: SquareMatrix | None = None,
                         B: SquareMatrix | None = None) -> DistanceProbeReport:
    """Joint commutant of A1 and B1 = S^-1 A1 S; dimension 1 means d(A1, B1) >= 3.

    ``B`` overrides B1 (sanity inversions).
    """
    A1, B1 = frame_pair(bundle, A, X)
    if B is not None:
        B1 = B
    from .matrix import commutant_basis

    J = joint_commutant_basis(A1, B1)
    return DistanceProbeReport(
        joint_commutant_dim=J.dim,
        at_most_2=distance_at_most_2(A1, B1),
        commutant_dim_A1=commutant_basis(A1).dim,
        commutant_dim_B1=commutant_basis(B1).dim,
    )


def witness_chain(bundle: WitnessBundle, A1: SquareMatrix) -> list[SquareMatrix]:
    """A commuting chain A1 - C⊕C - Y - R - Z - S^-1(C⊕C)S - S^-1 A1 S of length 6.

    R is the elementary nilpotent E_01; Y and Z are nonscalar elements of
    the joint commutants of R with C⊕C and with its S-conjugate.
    """
    f = bundle.field
    n = 2 * bundle.q
    S, Si = bundle.S, bundle.S_inv()
    CC = direct_sum(bundle.C, bundle.C)
    CCs = Si @ CC @ S
    R = SquareMatrix(tuple(tuple(f.one if (i, j) == (0, 1) else f.zero for j in range(n)) for i in range(n)), f)

    def nonscalar_in(space: Subspace) -> SquareMatrix:
        for M in space.basis:
            if not is_scalar(M):
                return M
        raise NotFound("joint commutant has no nonscalar element")

    Y = nonscalar_in(joint_commutant_basis(CC, R))
    Z = nonscalar_in(joint_commutant_basis(CCs, R))
    return [A1, CC, Y, R, Z, CCs, Si @ A1 @ S]


# ---------------------------------------------------------------------------
# chain reduction mod p


def _min_valuation(X: SquareMatrix, p: int):
    return min(vp(x, p) for x in X.vec())


def _nonscalarity(X: SquareMatrix, p: int):
    """Least valuation among off-diagonal entries and diagonal differences."""
    n = X.n
    vals = [vp(X.rows[i][j], p) for i in range(n) for j in range(n) if i != j]
    vals += [vp(X.rows[i][i] - X.rows[0][0], p) for i in range(1, n)]
    return min(vals)


def _scale_to_unit(X: SquareMatrix, p: int) -> SquareMatrix:
    k = _min_valuation(X, p)
    return X.scale(Fraction(p) ** (-k))


def reduce_matrix(X: SquareMatrix, p: int) -> SquareMatrix:
    """Entrywise reduction of a p-integral rational matrix."""
    if X.field != QQ:
        raise InvalidArgument("reduction mod p takes a matrix over Q")
    return SquareMatrix(tuple(tuple(reduce_mod_p(x, p).value for x in r) for r in X.rows), GF(p))


def normalize_matrix(X: SquareMatrix, p: int) -> SquareMatrix:
    """Rescale and shift X by scalars until its reduction mod p is nonscalar.

    Scale so the least entry valuation is 0; while the reduction is a scalar
    λ, replace X by (X - λI)/p^l with l the least valuation of X - λI
    (λ lifted to [0, p)).  Only scalar multiples and scalar shifts are used,
    so the commutant of X is unchanged.
    """
    require_prime(p)
    if X.field != QQ:
        raise InvalidArgument("normalize_matrix takes a matrix over Q")
    if is_scalar(X):
        raise HypothesisViolated("scalar matrices cannot be normalized")
    X = _scale_to_unit(X, p)
    # each pass lowers the nonscalarity valuation by l >= 1 and stops at 0
    budget = _nonscalarity(X, p)
    for _ in range(int(budget) + 1):
        red = reduce_matrix(X, p)
        if not is_scalar(red):
            return X
        lam = red.rows[0][0]
        X = _scale_to_unit(X - SquareMatrix.scalar(lam, X.n, QQ), p)
    raise AssertionError("normalization failed to terminate")  # pragma: no cover


def reduce_chain(chain, p: int) -> list[SquareMatrix]:
    """Reduce a commuting chain over Q to one over F_p of the same length.

    Endpoints are only rescaled to least valuation 0; interior entries are
    fully normalized.
    """
    require_prime(p)
    chain = list(chain)
    if not chain:
        return []
    check = verify_chain(chain)
    if not check:
        raise HypothesisViolated(f"input is not a commuting chain at entry {check.failure_index}: {check.reason}")
    out = []
    last = len(chain) - 1
    for i, X in enumerate(chain):
        if X.field != QQ:
            raise InvalidArgument("chain entries must be matrices over Q")
        if is_scalar(X):
            raise HypothesisViolated(f"chain entry {i} is scalar")
        if i in (0, last):
            red = reduce_matrix(_scale_to_unit(X, p), p)
            if is_scalar(red):
                raise HypothesisViolated(f"endpoint {i} reduces to a scalar mod {p}")
        else:
            red = reduce_matrix(normalize_matrix(X, p), p)
        out.append(red)
    return out


def random_commuting_chain(rng: random.Random, p: int, n: int = 4, length: int = 5,
                           perturb: float = 0.7, max_exp: int = 3) -> list[SquareMatrix]:
    """Commuting chain over Q alternating polynomials in block-diagonal integer matrices
    and a bridging idempotent; interior entries are perturbed to λI + p^l Y and rescaled.
    """
    k = n // 2
    E = direct_sum(SquareMatrix.identity(k, QQ), SquareMatrix.zero(n - k, QQ))

    def block_poly():
        while True:
            M = direct_sum(SquareMatrix.random(k, QQ, rng, 4), SquareMatrix.random(n - k, QQ, rng, 4))
            h = Polynomial([rng.randint(-3, 3) for _ in range(3)] + [rng.choice([1, 2, 3])], QQ)
            X = h(M)
            if not is_scalar(X):
                return X

    while True:
        chain = []
        for i in range(length):
            if i % 2 == 1:
                X = E.scale(rng.randint(1, 5)) + SquareMatrix.scalar(rng.randint(-3, 3), n, QQ)
            else:
                X = block_poly()
            if 0 < i < length - 1 and rng.random() < perturb:
                lam = rng.randrange(1, p) if p > 2 else 1
                X = SquareMatrix.scalar(lam, n, QQ) + X.scale(Fraction(p) ** rng.randint(1, max_exp))
                X = X.scale(Fraction(p) ** rng.randint(-2, 2))
            chain.append(X)
        ends_ok = all(not is_scalar(reduce_matrix(_scale_to_unit(chain[i], p), p)) for i in (0, length - 1))
        if ends_ok and verify_chain(chain):
            return chain


__all__ = [
    "CyclicFieldData",
    "DistanceProbeReport",
    "ProbeReport",
    "UChecks",
    "WitnessBundle",
    "build_S",
    "build_bundle",
    "check_U",
    "cyclic_field_fp",
    "cyclic_field_q29",
    "direct_sum_rank",
    "distance_lower_probe",
    "find_U",
    "frame_pair",
    "frobenius_twist_space",
    "lemma33_probe",
    "noncommutation_probe",
    "normalize_matrix",
    "polynomial_in",
    "random_commuting_chain",
    "random_frame_nonderogatory",
    "reduce_chain",
    "reduce_matrix",
    "witness_chain",
]
