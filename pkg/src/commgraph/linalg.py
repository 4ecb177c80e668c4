"""Row reduction over an exact field.

Vectors are lists of raw field representatives (see :mod:`commgraph.arith`).
Pivots are always the first nonzero entry in row order, so results are
reproducible bit for bit.  Over F_p with small p the elimination runs on
int64 numpy arrays; over Q it runs on Fractions.
"""

from __future__ import annotations

import numpy as np

from .arith import Field, PrimeField

_NUMPY_PMAX = 1 << 31


def _use_numpy(field: Field) -> bool:
    return isinstance(field, PrimeField) and field.p < _NUMPY_PMAX


def rref_fp(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of an int array mod p.  Returns (nonzero rows, pivots)."""
    a = np.array(a, dtype=np.int64) % p
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = a[r] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            a[rows] = (a[rows] - np.outer(col[rows], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rref(rows, ncols: int, field: Field) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; zero rows dropped."""
    if _use_numpy(field):
        if not rows:
            return [], []
        red, piv = rref_fp(np.asarray(rows, dtype=np.int64).reshape(len(rows), ncols), field.p)
        return [[int(x) for x in row] for row in red], piv
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        k = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(x, inv) for x in m[r]]
        pr = m[r]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], pr)]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def _rank_gf2(rows) -> int:
    basis: dict[int, int] = {}  # leading bit -> reduced row
    for row in rows:
        v = 0
        for x in row:
            v = (v << 1) | (int(x) & 1)
        while v:
            top = v.bit_length()
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return len(basis)


def rank(rows, ncols: int, field: Field) -> int:
    if getattr(field, "p", None) == 2:
        return _rank_gf2(rows)
    return len(rref(rows, ncols, field)[1])


def nullspace(rows, ncols: int, field: Field) -> list[list]:
    """Basis of {x : rows . x = 0}, returned in reduced row echelon form."""
    red, pivots = rref(rows, ncols, field)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [field.zero] * ncols
        v[f] = field.one
        for row, c in zip(red, pivots):
            if row[f] != 0:
                v[c] = field.neg(row[f])
        basis.append(v)
    if not basis:
        return []
    return rref(basis, ncols, field)[0]


def solve_in_span(basis, target, field: Field):
    """Coefficients c with sum c_i basis_i == target, or None."""
    k = len(basis)
    ncols = len(target)
    # columns are basis vectors: augmented system [B^T | target]
    aug = [[basis[i][j] for i in range(k)] + [target[j]] for j in range(ncols)]
    red, pivots = rref(aug, k + 1, field)
    if k in pivots:
        return None
    coeffs = [field.zero] * k
    for row, c in zip(red, pivots):
        coeffs[c] = row[k]
    return coeffs
