"""Finite extensions of Q_p, described only through their invariants.

Nothing here touches field elements: each predicate is a congruence or
divisibility test on (p, n, q), returned together with the evidence that
decided it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .arith import factorize, is_power_of, is_prime, prime_divisors, require_prime
from .errors import InvalidArgument


def _require_n(n: int, lo: int = 2) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or n < lo:
        raise InvalidArgument(f"n must be an integer >= {lo}, got {n!r}")
    return n


@dataclass(frozen=True)
class ExtensionInvariants:
    """Tower K ⊆ K' ⊆ K'' ⊆ L over a base K of degree h over Q_p.

    K'/K unramified of degree f, K''/K' tame totally ramified of degree e,
    L/K'' of degree p**k.  Up to conjugation K'' = K(ζ, (πζ^r)^(1/e)) with ζ a
    primitive (p^(hf) - 1)-th root of unity and π a uniformizer of K.
    """

    p: int
    h: int
    f: int
    e: int
    k: int = 0
    r: int = 0

    def __post_init__(self):
        require_prime(self.p)
        for name in ("h", "f", "e"):
            if getattr(self, name) < 1:
                raise InvalidArgument(f"{name} must be >= 1")
        if self.k < 0:
            raise InvalidArgument("wild exponent must be >= 0")
        if self.e % self.p == 0:
            raise InvalidArgument(f"tame index e={self.e} is divisible by p={self.p}")
        g = math.gcd(self.e, self.p ** (self.h * self.f) - 1)
        if not 0 <= self.r < g:
            raise InvalidArgument(f"r must lie in [0, {g})")

    @property
    def degree(self) -> int:
        """[L : K]"""
        return self.f * self.e * self.p**self.k


@dataclass(frozen=True)
class SubextensionCondition:
    tag: str
    params: dict
    holds: bool
    evidence: list = field(default_factory=list)

    def recompute(self) -> bool:
        """Re-derive ``holds`` from the evidence lines alone."""
        if self.tag == "a":
            q = self.params["q"]
            return all(residue % q != 0 for _, residue in self.evidence)
        if self.tag == "b":
            (residue,) = (r for _, r in self.evidence)
            return residue == 1 % self.params["q"]
        if self.tag == "c":
            (residue,) = (r for _, r in self.evidence)
            return residue != 0
        raise InvalidArgument(f"unknown tag {self.tag!r}")

    def to_json(self) -> dict:
        return {"tag": self.tag, "params": self.params, "holds": self.holds,
                "evidence": [list(e) for e in self.evidence]}


def primitive_extension_exists(p: int, n: int) -> bool:
    """Q_p has a degree-n extension with no intermediate field iff n is prime or a power of p."""
    require_prime(p)
    _require_n(n)
    return is_prime(n) or is_power_of(n, p)


def is_connected(p: int, n: int) -> bool:
    """Connectivity of Γ(Q_p, n)."""
    require_prime(p)
    _require_n(n)
    if n == 2:
        return False
    return not primitive_extension_exists(p, n)


def _check_q(p: int, n: int, q: int) -> None:
    require_prime(p)
    _require_n(n)
    require_prime(q, "q")
    if n % q:
        raise InvalidArgument(f"q={q} does not divide n={n}")
    if q == p:
        raise InvalidArgument("q must differ from p")
    if q * q >= n:
        raise InvalidArgument(f"need q^2 < n, got q={q}, n={n}")


def condition_a(p: int, n: int, q: int) -> SubextensionCondition:
    """For every f | n with q ∤ f, q ∤ p^f - 1.  Evidence: (f, (p^f - 1) mod q)."""
    _check_q(p, n, q)
    evidence = []
    for f in range(1, n + 1):
        if n % f == 0 and f % q != 0:
            evidence.append((f, (pow(p, f, q) - 1) % q))
    holds = all(res != 0 for _, res in evidence)
    return SubextensionCondition("a", {"p": p, "n": n, "q": q}, holds, evidence)


def condition_b(p: int, q: int) -> SubextensionCondition:
    """p ≡ 1 (mod q).  Evidence: ('p mod q', residue)."""
    require_prime(p)
    require_prime(q, "q")
    res = p % q
    return SubextensionCondition("b", {"p": p, "q": q}, res == 1 % q, [("p mod q", res)])


def condition_c(p: int, n: int) -> SubextensionCondition:
    """p ∤ n.  Evidence: ('n mod p', residue)."""
    require_prime(p)
    _require_n(n, 1)
    res = n % p
    return SubextensionCondition("c", {"p": p, "n": n}, res != 0, [("n mod p", res)])


def congruence_candidates(p: int, n: int) -> list[int]:
    """Prime divisors q of n with q != p and q^2 < n, ascending."""
    return [q for q in prime_divisors(n) if q != p and q * q < n]


def first_congruence_witness(p: int, n: int) -> tuple[int, SubextensionCondition] | None:
    """The first (q, condition) that guarantees a degree-q subextension, trying a, b, c per q."""
    for q in congruence_candidates(p, n):
        for cond in (condition_a(p, n, q), condition_b(p, q), condition_c(p, n)):
            if cond.holds:
                return q, cond
    return None


def small_prime_factor_criterion(p: int, n: int) -> bool:
    """Largest prime factor of n is below sqrt(n), and n is not a power of p."""
    require_prime(p)
    _require_n(n)
    largest = max(factorize(n))
    return largest * largest < n and not is_power_of(n, p)


def count_ramified_quadratic(d: int) -> int:
    """Ramified quadratic extensions of the degree-d unramified extension of Q_2.

    |K*/K*^2| = 2^(d+2) for such K; one nontrivial class gives the unramified
    quadratic extension and one is trivial, leaving 2^(d+2) - 2.
    """
    if not isinstance(d, int) or d < 1:
        raise InvalidArgument(f"degree must be >= 1, got {d!r}")
    return 2 ** (d + 2) - 2


def count_quadratic(d: int) -> int:
    """All quadratic extensions of the degree-d unramified extension of Q_2."""
    return count_ramified_quadratic(d) + 1


def galois_subgroup_hypotheses(order_G: int, index_K: int, index_H_in_K: int, maximal: bool,
                               normal: bool = True) -> bool:
    """Bookkeeping check of supplied subgroup data H ≤ K ⊴ G.

    Accepts iff [G:K] is a prime >= 7, [K:H] = 2, K is normal and H lies in no
    other proper subgroup of G.  An index [G:K] not dividing |G| is an error.
    """
    if order_G < 1 or index_K < 1 or index_H_in_K < 1:
        raise InvalidArgument("orders and indices must be positive")
    if order_G % index_K:
        raise InvalidArgument(f"[G:K]={index_K} does not divide |G|={order_G}")
    if (order_G // index_K) % index_H_in_K:
        return False
    return is_prime(index_K) and index_K >= 7 and index_H_in_K == 2 and normal and maximal


theorem31_group_hypotheses = galois_subgroup_hypotheses  # operation name used by the published interface

# wreath product C2 ≀ C7 = C2^7 ⋊ C7: |G| = 2^7 * 7, K = C2^7, H of index 2 in K
WREATH_C2_C7 = {"order_G": 2**7 * 7, "index_K": 7, "index_H_in_K": 2, "maximal": True}

# degree-14 polynomial over Q_2 whose splitting field has group C2 ≀ C7
# (LMFDB p-adic field 2.14.14.13); shipped as provenance only
LMFDB_2_14_14_13 = (1, 0, 0, 2, 2, 0, 0, 0, 0, 0, 2, 2, -1, 0, 1)  # constant term first

# degree-n fields where no subfield of degree < sqrt(n) exists (LMFDB lookups),
# recorded as notes only
SQRT_N_EXCEPTIONS = {
    (2, 6): "LMFDB p-adic field 2.6.6.4",
    (2, 10): "LMFDB p-adic field 2.10.10.15",
    (3, 15): "LMFDB p-adic field 3.15.15.51",
}


def explain_lines(p: int, n: int) -> list[str]:
    """Human-readable evidence for every predicate at (p, n)."""
    require_prime(p)
    _require_n(n)
    lines = [
        f"n = {n} = " + " * ".join(f"{q}^{e}" if e > 1 else str(q) for q, e in sorted(factorize(n).items())),
        f"n prime: {is_prime(n)}",
        f"n a power of p={p}: {is_power_of(n, p)}",
        f"primitive degree-{n} extension of Q_{p} exists: {primitive_extension_exists(p, n)}",
        f"Γ(Q_{p},{n}) connected: {is_connected(p, n)}",
    ]
    largest = max(factorize(n))
    lines.append(
        f"small prime factor: largest prime factor {largest}, {largest}^2 = {largest * largest} "
        f"{'<' if largest * largest < n else '>='} {n}; criterion {small_prime_factor_criterion(p, n)}"
    )
    cands = congruence_candidates(p, n)
    if not cands:
        lines.append(f"congruence: no prime q | {n} with q != {p} and q^2 < {n}")
    for q in cands:
        a = condition_a(p, n, q)
        ev = ", ".join(f"f={f}: (p^f-1) mod q = {r}" for f, r in a.evidence)
        lines.append(f"q={q} condition (a): {a.holds} [{ev}]")
        b = condition_b(p, q)
        lines.append(f"q={q} condition (b): {b.holds} [p mod q = {b.evidence[0][1]}]")
        c = condition_c(p, n)
        lines.append(f"q={q} condition (c): {c.holds} [n mod p = {c.evidence[0][1]}]")
    if (p, n) in SQRT_N_EXCEPTIONS:
        lines.append(f"note: a degree-{n} field without small subfields exists ({SQRT_N_EXCEPTIONS[(p, n)]})")
    return lines
