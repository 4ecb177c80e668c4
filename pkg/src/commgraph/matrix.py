"""Dense exact matrices and polynomials over Q or F_p.

Companion matrices, minimal and characteristic polynomials, commutants,
identical-cell (rational) forms, direct sums and similarity transforms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .arith import QQ, Field, GF, PrimeField, field_from_descriptor, prime_divisors
from .errors import HypothesisViolated, InvalidArgument, ShapeMismatch, SingularMatrix


class Polynomial:
    """Univariate polynomial; ``coeffs[i]`` is the coefficient of x**i.

    The zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, coeffs: Iterable, field: Field = QQ):
        c = [field(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)

    @classmethod
    def x(cls, field: Field = QQ) -> "Polynomial":
        return cls([0, 1], field)

    @classmethod
    def constant(cls, c, field: Field = QQ) -> "Polynomial":
        return cls([c], field)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    def monic(self) -> "Polynomial":
        if not self.coeffs:
            raise ZeroDivisionError("zero polynomial has no monic associate")
        inv = self.field.inv(self.lc)
        return Polynomial([self.field.mul(c, inv) for c in self.coeffs], self.field)

    def _check(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial([other], self.field)
        if other.field != self.field:
            raise InvalidArgument("polynomials over different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Polynomial([f.add(x, b[i]) if i < len(b) else x for i, x in enumerate(a)], f)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([self.field.neg(c) for c in self.coeffs], self.field)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        f = self.field
        if not self.coeffs or not other.coeffs:
            return Polynomial([], f)
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = f.add(out[i + j], f.mul(a, b))
        return Polynomial(out, f)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial([1], self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other):
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        dq = other.degree
        inv = f.inv(other.lc)
        quo = [f.zero] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = f.mul(rem[k], inv)
            if c == 0:
                continue
            quo[k - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] = f.sub(rem[k - dq + j], f.mul(c, b))
        return Polynomial(quo, f), Polynomial(rem[:dq], f)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def pow_mod(self, k: int, modulus: "Polynomial") -> "Polynomial":
        out = Polynomial([1], self.field) % modulus
        base = self % modulus
        while k:
            if k & 1:
                out = out * base % modulus
            base = base * base % modulus
            k >>= 1
        return out

    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic gcd (zero if both are zero)."""
        a, b = self, self._check(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def __call__(self, arg):
        """Evaluate at a scalar or at a :class:`SquareMatrix` (Horner)."""
        if isinstance(arg, SquareMatrix):
            if arg.field != self.field:
                raise InvalidArgument("matrix and polynomial over different fields")
            out = SquareMatrix.zero(arg.n, arg.field)
            ident = SquareMatrix.identity(arg.n, arg.field)
            for c in reversed(self.coeffs):
                out = out @ arg + ident.scale(c)
            return out
        f = self.field
        x = f(arg)
        out = f.zero
        for c in reversed(self.coeffs):
            out = f.add(f.mul(out, x), c)
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.field == other.field and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.field.descriptor, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            cs = self.field.fmt(c)
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(cs)
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{cs}*{mono}")
        return " + ".join(terms)


def is_irreducible(m: Polynomial) -> bool:
    """Rabin's irreducibility test over F_p.

    m of degree d is irreducible iff m divides x^(p^d) - x and
    gcd(x^(p^(d/r)) - x, m) = 1 for every prime r | d.
    """
    if not isinstance(m.field, PrimeField):
        raise InvalidArgument("irreducibility is only decided over F_p")
    d = m.degree
    if d < 1:
        return False
    if d == 1:
        return True
    p = m.field.p
    x = Polynomial.x(m.field)
    if not ((x.pow_mod(p**d, m) - x) % m).is_zero():
        return False
    for r in prime_divisors(d):
        h = x.pow_mod(p ** (d // r), m) - x
        if h.gcd(m).degree > 0:
            return False
    return True


def irreducible_polynomials(p: int, d: int, limit: int | None = None, rng: random.Random | None = None):
    """Monic irreducible polynomials of degree d over F_p.

    Without ``rng`` the polynomials come in lexicographic order of the
    coefficient vector (constant term first); with ``rng`` they are sampled.
    """
    field = GF(p)
    found = 0
    if rng is None:
        for idx in range(p**d):
            coeffs = []
            k = idx
            for _ in range(d):
                coeffs.append(k % p)
                k //= p
            m = Polynomial(coeffs + [1], field)
            if is_irreducible(m):
                yield m
                found += 1
                if limit is not None and found >= limit:
                    return
    else:
        while limit is None or found < limit:
            m = Polynomial([rng.randrange(p) for _ in range(d)] + [1], field)
            if is_irreducible(m):
                yield m
                found += 1


@dataclass(frozen=True, eq=False)
class SquareMatrix:
    """An n x n matrix over an exact field, immutable.

    Entries are raw representatives: Fractions over Q, ints in [0, p) over F_p.
    """

    rows: tuple
    field: Field = QQ

    def __post_init__(self):
        rows = tuple(tuple(self.field(x) for x in r) for r in self.rows)
        n = len(rows)
        if n < 1 or any(len(r) != n for r in rows):
            raise ShapeMismatch("matrix must be square and nonempty")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    # -- constructors -------------------------------------------------------

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "SquareMatrix":
        return cls(tuple(tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)), field)

    @classmethod
    def zero(cls, n: int, field: Field = QQ) -> "SquareMatrix":
        return cls(tuple((field.zero,) * n for _ in range(n)), field)

    @classmethod
    def scalar(cls, c, n: int, field: Field = QQ) -> "SquareMatrix":
        return cls.identity(n, field).scale(c)

    @classmethod
    def from_vec(cls, vec: Sequence, n: int, field: Field = QQ) -> "SquareMatrix":
        return cls(tuple(tuple(vec[i * n:(i + 1) * n]) for i in range(n)), field)

    @classmethod
    def from_array(cls, arr, field: Field) -> "SquareMatrix":
        return cls(tuple(tuple(int(x) for x in row) for row in np.asarray(arr)), field)

    @classmethod
    def random(cls, n: int, field: Field, rng: random.Random, bound: int = 5) -> "SquareMatrix":
        """Uniform over F_p; integer entries in [-bound, bound] over Q."""
        if isinstance(field, PrimeField):
            return cls(tuple(tuple(rng.randrange(field.p) for _ in range(n)) for _ in range(n)), field)
        return cls(tuple(tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(n)), field)

    # -- views --------------------------------------------------------------

    def vec(self) -> list:
        return [x for r in self.rows for x in r]

    def to_array(self) -> np.ndarray:
        if not isinstance(self.field, PrimeField):
            raise InvalidArgument("numpy view only for F_p matrices")
        return np.array(self.rows, dtype=np.int64)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def block(self, i0: int, j0: int, size: int) -> "SquareMatrix":
        return SquareMatrix(tuple(r[j0:j0 + size] for r in self.rows[i0:i0 + size]), self.field)

    # -- arithmetic ---------------------------------------------------------

    def _same(self, other: "SquareMatrix"):
        if not isinstance(other, SquareMatrix):
            raise InvalidArgument(f"expected SquareMatrix, got {type(other).__name__}")
        if other.n != self.n or other.field != self.field:
            raise ShapeMismatch(f"{self.n}x{self.n}/{self.field} vs {other.n}x{other.n}/{other.field}")

    def __add__(self, other):
        self._same(other)
        f = self.field
        return SquareMatrix(tuple(tuple(f.add(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), f)

    def __sub__(self, other):
        self._same(other)
        f = self.field
        return SquareMatrix(tuple(tuple(f.sub(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), f)

    def __neg__(self):
        f = self.field
        return SquareMatrix(tuple(tuple(f.neg(a) for a in r) for r in self.rows), f)

    def scale(self, c) -> "SquareMatrix":
        f = self.field
        c = f(c)
        return SquareMatrix(tuple(tuple(f.mul(c, a) for a in r) for r in self.rows), f)

    def __matmul__(self, other):
        self._same(other)
        f = self.field
        cols = list(zip(*other.rows))
        if isinstance(f, PrimeField):
            p = f.p
            return SquareMatrix(
                tuple(tuple(sum(a * b for a, b in zip(r, c)) % p for c in cols) for r in self.rows), f
            )
        return SquareMatrix(tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows), f)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = SquareMatrix.identity(self.n, self.field)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    @property
    def T(self) -> "SquareMatrix":
        return SquareMatrix(tuple(zip(*self.rows)), self.field)

    def trace(self):
        f = self.field
        out = f.zero
        for i in range(self.n):
            out = f.add(out, self.rows[i][i])
        return out

    def rank(self) -> int:
        return linalg.rank(self.rows, self.n, self.field)

    def is_invertible(self) -> bool:
        return self.rank() == self.n

    def inverse(self) -> "SquareMatrix":
        n, f = self.n, self.field
        aug = [list(r) + [f.one if i == j else f.zero for j in range(n)] for i, r in enumerate(self.rows)]
        red, piv = linalg.rref(aug, 2 * n, f)
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise SingularMatrix("matrix is singular")
        return SquareMatrix(tuple(tuple(r[n:]) for r in red), f)

    def det(self):
        f = self.field
        m = [list(r) for r in self.rows]
        n = self.n
        d = f.one
        for c in range(n):
            k = next((i for i in range(c, n) if m[i][c] != 0), None)
            if k is None:
                return f.zero
            if k != c:
                m[c], m[k] = m[k], m[c]
                d = f.neg(d)
            d = f.mul(d, m[c][c])
            inv = f.inv(m[c][c])
            for i in range(c + 1, n):
                if m[i][c] != 0:
                    g = f.mul(m[i][c], inv)
                    m[i] = [f.sub(x, f.mul(g, y)) for x, y in zip(m[i], m[c])]
        return d

    # -- predicates ---------------------------------------------------------

    def is_scalar(self) -> bool:
        return is_scalar(self)

    def commutes_with(self, other: "SquareMatrix") -> bool:
        return commute(self, other)

    # -- equality / io ------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.field == other.field and self.rows == other.rows

    def __hash__(self):
        return hash((self.field.descriptor, self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.fmt(x) for x in r) for r in self.rows)
        return f"SquareMatrix[{self.field}]({body})"

    def to_json(self) -> dict:
        return {
            "field": self.field.descriptor,
            "n": self.n,
            "entries": [[self.field.fmt(x) for x in r] for r in self.rows],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SquareMatrix":
        try:
            field = field_from_descriptor(obj["field"])
            n = int(obj["n"])
            entries = obj["entries"]
        except (KeyError, TypeError) as exc:
            raise InvalidArgument(f"malformed matrix JSON: {exc}") from exc
        if len(entries) != n or any(len(r) != n for r in entries):
            raise ShapeMismatch(f"entries do not form a {n}x{n} array")
        return cls(tuple(tuple(field.parse(str(x)) for x in r) for r in entries), field)


# ---------------------------------------------------------------------------


def is_scalar(A: SquareMatrix) -> bool:
    d = A.rows[0][0]
    for i, r in enumerate(A.rows):
        for j, x in enumerate(r):
            if x != (d if i == j else 0):
                return False
    return True


def commute(A: SquareMatrix, B: SquareMatrix) -> bool:
    A._same(B)
    return A @ B == B @ A


def direct_sum(*blocks: SquareMatrix) -> SquareMatrix:
    if not blocks:
        raise InvalidArgument("direct_sum of nothing")
    f = blocks[0].field
    if any(b.field != f for b in blocks):
        raise ShapeMismatch("direct_sum over mixed fields")
    n = sum(b.n for b in blocks)
    rows = []
    off = 0
    for b in blocks:
        for r in b.rows:
            rows.append((f.zero,) * off + tuple(r) + (f.zero,) * (n - off - b.n))
        off += b.n
    return SquareMatrix(tuple(rows), f)


def conjugate(T: SquareMatrix, A: SquareMatrix) -> SquareMatrix:
    """T^-1 A T.  Raises :class:`SingularMatrix` for singular T."""
    return T.inverse() @ A @ T


def companion(m: Polynomial) -> SquareMatrix:
    """Companion matrix: ones on the subdiagonal, last column -c_0..-c_{n-1}."""
    if not m.is_monic() or m.degree < 1:
        raise InvalidArgument(f"companion needs a monic polynomial of degree >= 1, got {m!r}")
    f = m.field
    n = m.degree
    rows = []
    for i in range(n):
        row = [f.one if j == i - 1 else f.zero for j in range(n)]
        row[n - 1] = f.neg(m.coeffs[i])
        rows.append(tuple(row))
    return SquareMatrix(tuple(rows), f)


def min_poly(A: SquareMatrix) -> Polynomial:
    """Least-degree monic m with m(A) = 0, from the first linear dependency among I, A, A^2, ..."""
    f = A.field
    powers = [SquareMatrix.identity(A.n, f).vec()]
    cur = SquareMatrix.identity(A.n, f)
    for k in range(1, A.n + 1):
        cur = cur @ A
        c = linalg.solve_in_span(powers, cur.vec(), f)
        if c is not None:
            return Polynomial([f.neg(x) for x in c] + [f.one], f)
        powers.append(cur.vec())
    raise AssertionError("Cayley-Hamilton violated")  # pragma: no cover


def char_poly(A: SquareMatrix) -> Polynomial:
    """det(xI - A), via reduction to upper Hessenberg form."""
    f = A.field
    n = A.n
    H = [list(r) for r in A.rows]
    for m in range(1, n - 1):
        i = next((i for i in range(m, n) if H[i][m - 1] != 0), None)
        if i is None:
            continue
        if i != m:
            H[i], H[m] = H[m], H[i]
            for r in H:
                r[i], r[m] = r[m], r[i]
        t = f.inv(H[m][m - 1])
        for i in range(m + 1, n):
            u = f.mul(H[i][m - 1], t)
            if u == 0:
                continue
            H[i] = [f.sub(a, f.mul(u, b)) for a, b in zip(H[i], H[m])]
            for r in H:
                r[m] = f.add(r[m], f.mul(u, r[i]))
    x = Polynomial.x(f)
    polys = [Polynomial([1], f)]
    for m in range(n):
        pm = (x - Polynomial([H[m][m]], f)) * polys[m]
        prod = f.one
        for i in range(m - 1, -1, -1):
            prod = f.mul(prod, H[i + 1][i])
            coeff = f.mul(H[i][m], prod)
            if coeff != 0:
                pm = pm - polys[i] * Polynomial([coeff], f)
        polys.append(pm)
    return polys[n]


def is_nonderogatory(A: SquareMatrix) -> bool:
    return min_poly(A).degree == A.n


# ---------------------------------------------------------------------------
# commutants


@dataclass(frozen=True, eq=False)
class Subspace:
    """Linear subspace of M_n(F), stored as the RREF of the n^2-dim coordinate vectors."""

    field: Field
    n: int
    vectors: tuple

    @classmethod
    def from_vectors(cls, vectors, n: int, field: Field) -> "Subspace":
        red, _ = linalg.rref(list(vectors), n * n, field) if vectors else ([], [])
        return cls(field, n, tuple(tuple(v) for v in red))

    @classmethod
    def span(cls, mats: Sequence[SquareMatrix]) -> "Subspace":
        if not mats:
            raise InvalidArgument("span of nothing: supply field/n via from_vectors")
        return cls.from_vectors([m.vec() for m in mats], mats[0].n, mats[0].field)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    @cached_property
    def basis(self) -> list[SquareMatrix]:
        return [SquareMatrix.from_vec(v, self.n, self.field) for v in self.vectors]

    @cached_property
    def key(self) -> bytes:
        head = f"{self.field.descriptor}|{self.n}|".encode()
        if isinstance(self.field, PrimeField):
            arr = np.array(self.vectors, dtype=np.int64).reshape(-1, self.n * self.n)
            return head + arr.tobytes()
        return head + repr([[(x.numerator, x.denominator) for x in v] for v in self.vectors]).encode()

    def contains(self, M: SquareMatrix) -> bool:
        if M.n != self.n or M.field != self.field:
            raise ShapeMismatch("matrix does not live in this ambient space")
        if not self.vectors:
            return all(x == 0 for x in M.vec())
        return linalg.solve_in_span(list(self.vectors), M.vec(), self.field) is not None

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Subspace(dim={self.dim} in M_{self.n}({self.field}))"


def _intertwiner_rows(L: SquareMatrix, R: SquareMatrix) -> list[list]:
    """Rows of the n^2 x n^2 matrix of X -> LX - XR on row-major vec(X)."""
    f = L.field
    n = L.n
    rows = []
    for i in range(n):
        for j in range(n):
            row = [f.zero] * (n * n)
            for l in range(n):
                a = L.rows[i][l]
                if a != 0:
                    row[l * n + j] = f.add(row[l * n + j], a)
                b = R.rows[l][j]
                if b != 0:
                    row[i * n + l] = f.sub(row[i * n + l], b)
            rows.append(row)
    return rows


def _commutation_rows(A: SquareMatrix) -> list[list]:
    return _intertwiner_rows(A, A)


def intertwiner_basis(L: SquareMatrix, R: SquareMatrix) -> Subspace:
    """{X : LX = XR}."""
    L._same(R)
    return Subspace.from_vectors(linalg.nullspace(_intertwiner_rows(L, R), L.n * L.n, L.field), L.n, L.field)


def commutant_basis(A: SquareMatrix) -> Subspace:
    """{X : AX = XA}, solved as an n^2-variable homogeneous system."""
    return Subspace.from_vectors(linalg.nullspace(_commutation_rows(A), A.n * A.n, A.field), A.n, A.field)


def joint_commutant_basis(A: SquareMatrix, B: SquareMatrix) -> Subspace:
    A._same(B)
    rows = _commutation_rows(A) + _commutation_rows(B)
    return Subspace.from_vectors(linalg.nullspace(rows, A.n * A.n, A.field), A.n, A.field)


def identical_cell_form(X: SquareMatrix) -> tuple[SquareMatrix, SquareMatrix]:
    """(T, C) with X = T^-1 (C + ... + C) T and C the companion of min_poly(X).

    Requires the minimal polynomial to be irreducible of degree dividing n.
    Irreducibility is checked over F_p; over Q only the necessary condition
    char_poly(X) = min_poly(X)^(n/d) is checked.
    """
    n, f = X.n, X.field
    m = min_poly(X)
    d = m.degree
    if n % d:
        raise HypothesisViolated(f"minimal polynomial degree {d} does not divide {n}")
    if isinstance(f, PrimeField) and not is_irreducible(m):
        raise HypothesisViolated(f"minimal polynomial {m!r} is reducible")
    if char_poly(X) != m ** (n // d):
        raise HypothesisViolated(f"minimal polynomial {m!r} is reducible")
    C = companion(m)
    Xt = X.rows
    cols: list[list] = []
    for e in range(n):
        if len(cols) == n:
            break
        v = [f.one if i == e else f.zero for i in range(n)]
        if cols and linalg.solve_in_span(cols, v, f) is not None:
            continue
        for _ in range(d):
            cols.append(v)
            v = [_dot(r, v, f) for r in Xt]
    P = SquareMatrix(tuple(zip(*cols)), f)
    T = P.inverse()
    return T, C


def _dot(r, v, f: Field):
    out = f.zero
    for a, b in zip(r, v):
        if a != 0 and b != 0:
            out = f.add(out, f.mul(a, b))
    return out


__all__ = [
    "Polynomial",
    "SquareMatrix",
    "Subspace",
    "char_poly",
    "commutant_basis",
    "commute",
    "companion",
    "conjugate",
    "direct_sum",
    "identical_cell_form",
    "intertwiner_basis",
    "irreducible_polynomials",
    "is_irreducible",
    "is_nonderogatory",
    "is_scalar",
    "joint_commutant_basis",
    "min_poly",
]
