"""Exhaustive commuting graphs Γ(F_p, n) at desk scale.

Every nonscalar matrix over F_p is a vertex.  Two vertices with the same
commutant have the same closed neighbourhood, so the graph is compressed to
one node per distinct commutant ("class"); classes are cliques and class
distances equal vertex distances.  Eccentricities on the quotient come from a
bit-parallel multi-source BFS (64 sources per uint64 word).

Vertex codes: entry k of the row-major entry list is base-p digit N-1-k,
N = n*n, so codes enumerate matrices lexicographically with values 0..p-1.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .arith import GF, PrimeField, require_prime
from .errors import BudgetExceeded, InvalidArgument, ShapeMismatch
from . import linalg
from .matrix import SquareMatrix, _commutation_rows, commute, is_scalar

DEFAULT_MAX_VERTICES = 1 << 20
_CHUNK = 1 << 14
_BFS_BYTES = 64 << 20


@dataclass(frozen=True)
class Budget:
    max_vertices: int = DEFAULT_MAX_VERTICES
    threads: int = 1


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("COMMGRAPH_THREADS", "1")))
    except ValueError:
        return 1


def check_budget(p: int, n: int, budget: Budget | None = None) -> None:
    budget = budget or Budget()
    total = p ** (n * n)
    if total > budget.max_vertices:
        raise BudgetExceeded(
            f"Γ(F_{p},{n}) has {p}^{n * n} matrices, above the exhaustive ceiling of "
            f"{budget.max_vertices}; refusing rather than sampling"
        )


# ---------------------------------------------------------------------------
# encoding


def _weights(p: int, N: int) -> np.ndarray:
    return p ** np.arange(N - 1, -1, -1, dtype=np.int64)


def encode(A: SquareMatrix) -> int:
    p = A.field.p
    code = 0
    for x in A.vec():
        code = code * p + x
    return code


def decode(code: int, p: int, n: int) -> SquareMatrix:
    N = n * n
    digits = [0] * N
    for k in range(N - 1, -1, -1):
        code, digits[k] = divmod(code, p)
    return SquareMatrix.from_vec(digits, n, GF(p))


def _digits(codes: np.ndarray, p: int, N: int) -> np.ndarray:
    return (codes[:, None] // _weights(p, N)[None, :]) % p


def scalar_codes(p: int, n: int) -> np.ndarray:
    eye = np.eye(n, dtype=np.int64).reshape(-1)
    w = _weights(p, n * n)
    return np.array([int((lam * eye * w).sum()) for lam in range(p)], dtype=np.int64)


# ---------------------------------------------------------------------------
# F_2 bit rows


def pack_rows(A: SquareMatrix) -> tuple[int, ...]:
    """F_2 matrix as a tuple of n-bit row masks (column 0 is the high bit)."""
    n = A.n
    return tuple(sum(b << (n - 1 - j) for j, b in enumerate(r)) for r in A.rows)


def gf2_matmul_packed(a: tuple[int, ...], b: tuple[int, ...], n: int) -> tuple[int, ...]:
    """Product of bit-row matrices: entry (i,j) = popcount(row_i(a) & col_j(b)) mod 2."""
    cols = [sum(((b[k] >> (n - 1 - j)) & 1) << (n - 1 - k) for k in range(n)) for j in range(n)]
    return tuple(
        sum((bin(r & c).count("1") & 1) << (n - 1 - j) for j, c in enumerate(cols)) for r in a
    )


def gf2_commute_packed(a, b, n: int) -> bool:
    return gf2_matmul_packed(a, b, n) == gf2_matmul_packed(b, a, n)


# ---------------------------------------------------------------------------
# batched commutant keys


def _constraint_tensors(digits: np.ndarray, p: int, n: int) -> np.ndarray:
    """Matrices of X -> AX - XA for a batch of A, shape (B, N, N)."""
    A = digits.reshape(-1, n, n)
    eye = np.eye(n, dtype=np.int64)
    # row (i, j), column (l, m): A_il δ_jm - δ_il A_mj
    M = np.einsum("bil,jm->bijlm", A, eye) - np.einsum("il,bmj->bijlm", eye, A)
    N = n * n
    return (M.reshape(-1, N, N)) % p


def _batched_rref_gf2(R: np.ndarray, N: int) -> np.ndarray:
    """RREF of a batch of packed GF(2) systems, rows as uint64 masks."""
    B = R.shape[0]
    rank = np.zeros(B, dtype=np.int64)
    rows = np.arange(R.shape[1])
    ar = np.arange(B)
    for col in range(N):
        bit = np.uint64(1 << (N - 1 - col))
        elig = ((R & bit) != 0) & (rows[None, :] >= rank[:, None])
        has = elig.any(axis=1)
        bs = ar[has]
        if bs.size == 0:
            continue
        piv = elig[bs].argmax(axis=1)
        r = rank[bs]
        rowp = R[bs, piv].copy()
        R[bs, piv] = R[bs, r]
        R[bs, r] = rowp
        mask = (R[bs] & bit) != 0
        mask[np.arange(bs.size), r] = False
        R[bs] ^= np.where(mask, rowp[:, None], np.uint64(0))
        rank[bs] += 1
    return R


def _batched_rref_fp(R: np.ndarray, p: int) -> np.ndarray:
    B, nrows, ncols = R.shape
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    rank = np.zeros(B, dtype=np.int64)
    rows = np.arange(nrows)
    ar = np.arange(B)
    for col in range(ncols):
        elig = (R[:, :, col] != 0) & (rows[None, :] >= rank[:, None])
        has = elig.any(axis=1)
        bs = ar[has]
        if bs.size == 0:
            continue
        piv = elig[bs].argmax(axis=1)
        r = rank[bs]
        rowp = R[bs, piv].copy()
        R[bs, piv] = R[bs, r]
        rowp = rowp * inv[rowp[:, col]][:, None] % p
        R[bs, r] = rowp
        factors = R[bs, :, col].copy()
        factors[np.arange(bs.size), r] = 0
        R[bs] = (R[bs] - factors[:, :, None] * rowp[:, None, :]) % p
        rank[bs] += 1
    return R


def commutant_keys(codes: np.ndarray, p: int, n: int) -> np.ndarray:
    """Canonical commutant keys for a batch of vertex codes.

    The key is the RREF of the constraint system of X -> AX - XA; equal row
    spaces mean equal kernels, so equal keys mean equal commutants.  Returned
    as a 2-D integer array, one row per code.
    """
    N = n * n
    out = []
    for start in range(0, codes.size, _CHUNK):
        chunk = codes[start:start + _CHUNK]
        M = _constraint_tensors(_digits(chunk, p, n * n), p, n)
        if p == 2 and N <= 64:
            w = (np.uint64(1) << np.arange(N - 1, -1, -1, dtype=np.uint64))
            R = (M.astype(np.uint64) * w[None, None, :]).sum(axis=2, dtype=np.uint64)
            out.append(_batched_rref_gf2(R, N))
        else:
            out.append(_batched_rref_fp(M, p).reshape(chunk.size, N * N))
    return np.concatenate(out) if out else np.zeros((0, 1), dtype=np.int64)


def _key_to_system(key: np.ndarray, p: int, N: int) -> np.ndarray:
    if p == 2 and key.size == N and key.dtype == np.uint64:
        return ((key[:, None] >> np.arange(N - 1, -1, -1, dtype=np.uint64)) & np.uint64(1)).astype(np.int64)
    return key.reshape(N, N).astype(np.int64)


def _nullspace_from_rref(R: np.ndarray, p: int) -> np.ndarray:
    nrows, ncols = R.shape
    pivots = []
    for r in range(nrows):
        nz = np.flatnonzero(R[r])
        if nz.size == 0:
            break
        pivots.append(int(nz[0]))
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, c in enumerate(pivots):
            basis[k, c] = (-R[r, f]) % p
    return basis


# ---------------------------------------------------------------------------
# quotient graph


@dataclass
class QuotientGraph:
    """Vertices grouped by identical commutant.

    ``class_of[code]`` is the class id of a vertex code (-1 for scalars);
    classes are numbered by their lexicographically first member.
    """

    p: int
    n: int
    class_of: np.ndarray
    class_sizes: np.ndarray
    class_rep: np.ndarray
    class_dim: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray

    @property
    def class_count(self) -> int:
        return int(self.class_sizes.size)

    @property
    def vertex_count(self) -> int:
        return int(self.class_sizes.sum())

    def neighbors(self, c: int) -> np.ndarray:
        return self.indices[self.indptr[c]:self.indptr[c + 1]]

    def adjacency(self) -> csr_matrix:
        K = self.class_count
        data = np.ones(self.indices.size, dtype=np.int8)
        return csr_matrix((data, self.indices, self.indptr), shape=(K, K))


def build_quotient(p: int, n: int, budget: Budget | None = None) -> QuotientGraph:
    require_prime(p)
    if n < 2:
        raise InvalidArgument("commuting graphs need n >= 2")
    check_budget(p, n, budget)
    return _build_quotient(p, n)


@lru_cache(maxsize=8)
def _build_quotient(p: int, n: int) -> QuotientGraph:
    N = n * n
    total = p**N
    codes = np.arange(total, dtype=np.int64)
    keys = commutant_keys(codes, p, n)
    scal = scalar_codes(p, n)
    is_vertex = np.ones(total, dtype=bool)
    is_vertex[scal] = False

    vkeys = keys[is_vertex]
    vcodes = codes[is_vertex]
    _, first_idx, inverse = np.unique(vkeys, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    # renumber classes by first member code
    order = np.argsort(vcodes[first_idx], kind="stable")
    rank_of = np.empty_like(order)
    rank_of[order] = np.arange(order.size)
    cls = rank_of[inverse]
    K = order.size

    class_of = np.full(total, -1, dtype=np.int64)
    class_of[vcodes] = cls
    class_sizes = np.bincount(cls, minlength=K)
    class_rep = vcodes[first_idx[order]]

    # commutant of each representative, enumerated
    w = _weights(p, N)
    bases = []
    dims = np.zeros(K, dtype=np.int64)
    for c in range(K):
        key = vkeys[first_idx[order[c]]]
        basis = _nullspace_from_rref(_key_to_system(key, p, N), p)
        bases.append(basis)
        dims[c] = basis.shape[0]

    src_parts, dst_parts = [], []
    for d in np.unique(dims):
        members = np.flatnonzero(dims == d)
        grid = np.array(np.meshgrid(*[np.arange(p)] * int(d), indexing="ij")).reshape(int(d), -1).T
        for start in range(0, members.size, 256):
            ms = members[start:start + 256]
            B = np.stack([bases[c] for c in ms])  # (m, d, N)
            elems = np.einsum("ed,mdk->mek", grid, B) % p
            ecodes = elems @ w
            ecls = class_of[ecodes]
            src = np.repeat(ms, ecls.shape[1])
            dst = ecls.reshape(-1)
            keep = (dst >= 0) & (dst != src)
            src_parts.append(src[keep])
            dst_parts.append(dst[keep])
    src = np.concatenate(src_parts) if src_parts else np.zeros(0, dtype=np.int64)
    dst = np.concatenate(dst_parts) if dst_parts else np.zeros(0, dtype=np.int64)
    pairs = np.unique(src * K + dst)
    src, dst = pairs // K, pairs % K
    indptr = np.zeros(K + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=K), out=indptr[1:])
    return QuotientGraph(p, n, class_of, class_sizes, class_rep, dims, indptr, dst.astype(np.int64))


# ---------------------------------------------------------------------------
# bit-parallel BFS


def _bfs_batch(q: QuotientGraph, sources: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eccentricity and reached-class count for each source class."""
    K = q.class_count
    S = sources.size
    W = (S + 63) // 64
    visited = np.zeros((K, W), dtype=np.uint64)
    for s_idx, s in enumerate(sources):
        visited[s, s_idx // 64] |= np.uint64(1) << np.uint64(s_idx % 64)
    frontier = visited.copy()
    ecc = np.zeros(S, dtype=np.int64)
    nonempty = np.flatnonzero(np.diff(q.indptr) > 0)
    starts = q.indptr[nonempty]
    bitpos = np.arange(64, dtype=np.uint64)
    level = 0
    while True:
        level += 1
        nxt = np.zeros_like(frontier)
        if nonempty.size:
            nxt[nonempty] = np.bitwise_or.reduceat(frontier[q.indices], starts, axis=0)
        new = nxt & ~visited
        if not new.any():
            break
        visited |= new
        frontier = new
        hit = np.bitwise_or.reduce(new, axis=0)
        flags = ((hit[:, None] >> bitpos[None, :]) & np.uint64(1)).astype(bool).reshape(-1)[:S]
        ecc[flags] = level
    counts = np.zeros(S, dtype=np.int64)
    for word in range(W):
        col = visited[:, word]
        for b in range(min(64, S - 64 * word)):
            counts[64 * word + b] = int(((col >> np.uint64(b)) & np.uint64(1)).sum())
    return ecc, counts


def class_eccentricities(q: QuotientGraph, sources=None, threads: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Quotient eccentricities (within the source's component) and component class counts."""
    sources = np.arange(q.class_count) if sources is None else np.asarray(sources, dtype=np.int64)
    E = max(int(q.indices.size), 1)
    words = max(1, min(16, _BFS_BYTES // (8 * E)))
    batch = 64 * words
    chunks = [sources[i:i + batch] for i in range(0, sources.size, batch)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(lambda c: _bfs_batch(q, c), chunks))
    else:
        results = [_bfs_batch(q, c) for c in chunks]
    if not results:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.concatenate([r[0] for r in results]), np.concatenate([r[1] for r in results])


# ---------------------------------------------------------------------------
# public API


@dataclass
class CommutingGraphSummary:
    p: int
    n: int
    vertex_count: int
    class_count: int
    component_count: int
    component_sizes: list[int]
    component_diameters: list[int]
    all_components_cliques: bool
    diameter: float  # math.inf when disconnected
    wall_time: float = field(default=0.0, compare=False)

    @property
    def connected(self) -> bool:
        return self.component_count == 1

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "p": self.p,
            "n": self.n,
            "vertex_count": self.vertex_count,
            "class_count": self.class_count,
            "connected": self.connected,
            "component_count": self.component_count,
            "component_sizes": self.component_sizes,
            "component_diameters": self.component_diameters,
            "all_components_cliques": self.all_components_cliques,
            "diameter": "inf" if math.isinf(self.diameter) else int(self.diameter),
        }
        if timing:
            out["wall_time"] = self.wall_time
        return out


def ff_graph_summary(p: int, n: int, budget: Budget | None = None) -> CommutingGraphSummary:
    """Exact component structure and diameter of Γ(F_p, n)."""
    budget = budget or Budget(threads=default_threads())
    t0 = time.perf_counter()
    q = build_quotient(p, n, budget)
    K = q.class_count
    ncomp, labels = connected_components(q.adjacency(), directed=False)
    # number components by their first class (= first vertex)
    first = np.full(ncomp, K, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(K))
    order = np.argsort(first, kind="stable")
    relabel = np.empty(ncomp, dtype=np.int64)
    relabel[order] = np.arange(ncomp)
    labels = relabel[labels]

    ecc, _ = class_eccentricities(q, threads=budget.threads)
    vecc = np.maximum(ecc, (q.class_sizes > 1).astype(np.int64))
    comp_sizes = np.bincount(labels, weights=q.class_sizes, minlength=ncomp).astype(np.int64)
    comp_classes = np.bincount(labels, minlength=ncomp)
    comp_diam = np.zeros(ncomp, dtype=np.int64)
    np.maximum.at(comp_diam, labels, vecc)
    degrees = np.diff(q.indptr)
    cliques = bool(np.all(degrees == comp_classes[labels] - 1))
    diameter = float(comp_diam[0]) if ncomp == 1 else math.inf
    return CommutingGraphSummary(
        p=p,
        n=n,
        vertex_count=q.vertex_count,
        class_count=K,
        component_count=int(ncomp),
        component_sizes=[int(x) for x in comp_sizes],
        component_diameters=[int(x) for x in comp_diam],
        all_components_cliques=cliques,
        diameter=diameter,
        wall_time=time.perf_counter() - t0,
    )


def _require_vertex(A: SquareMatrix):
    if not isinstance(A.field, PrimeField):
        raise InvalidArgument("ff_distance works over F_p only")
    if is_scalar(A):
        raise InvalidArgument("scalar matrices are not vertices of the commuting graph")


def ff_distance(A: SquareMatrix, B: SquareMatrix, budget: Budget | None = None) -> float:
    """Exact distance in Γ(F_p, n); math.inf across components."""
    A._same(B)
    _require_vertex(A)
    _require_vertex(B)
    if A == B:
        return 0
    if commute(A, B):
        return 1
    q = build_quotient(A.field.p, A.n, budget)
    ca = int(q.class_of[encode(A)])
    cb = int(q.class_of[encode(B)])
    d = _class_distances(q.p, q.n, ca)[cb]
    return math.inf if d < 0 else int(d)


@lru_cache(maxsize=4096)
def _class_distances(p: int, n: int, s: int) -> np.ndarray:
    dist = _single_source(_build_quotient(p, n), s)
    dist.setflags(write=False)
    return dist


def clear_caches() -> None:
    """Drop memoized quotient graphs and BFS results."""
    _class_distances.cache_clear()
    _build_quotient.cache_clear()


def _single_source(q: QuotientGraph, s: int) -> np.ndarray:
    dist = np.full(q.class_count, -1, dtype=np.int64)
    dist[s] = 0
    frontier = np.array([s])
    level = 0
    while frontier.size:
        level += 1
        nb = np.concatenate([q.neighbors(c) for c in frontier]) if frontier.size else np.zeros(0, np.int64)
        nb = np.unique(nb)
        nb = nb[dist[nb] < 0]
        dist[nb] = level
        frontier = nb
    return dist


def distance_at_most_2(A: SquareMatrix, B: SquareMatrix) -> bool:
    """True iff some nonscalar matrix commutes with both A and B (or A, B commute)."""
    A._same(B)
    if is_scalar(A) or is_scalar(B):
        raise InvalidArgument("scalar matrices are not vertices of the commuting graph")
    rows = _commutation_rows(A) + _commutation_rows(B)
    N = A.n * A.n
    return N - linalg.rank(rows, N, A.field) >= 2


def distance_at_most_2_codes(p: int, n: int, a_codes, b_codes) -> np.ndarray:
    """Batched ``distance_at_most_2`` on vertex codes: dim of the joint commutant >= 2."""
    a_codes = np.asarray(a_codes, dtype=np.int64).reshape(-1)
    b_codes = np.asarray(b_codes, dtype=np.int64).reshape(-1)
    if a_codes.shape != b_codes.shape:
        raise ShapeMismatch("code arrays differ in length")
    N = n * n
    out = np.zeros(a_codes.size, dtype=bool)
    for start in range(0, a_codes.size, _CHUNK):
        sl = slice(start, start + _CHUNK)
        Ma = _constraint_tensors(_digits(a_codes[sl], p, N), p, n)
        Mb = _constraint_tensors(_digits(b_codes[sl], p, N), p, n)
        R = _batched_rref_fp(np.concatenate([Ma, Mb], axis=1), p)
        rank = (R != 0).any(axis=2).sum(axis=1)
        out[sl] = N - rank >= 2
    return out


def class_distance_matrix(q: QuotientGraph) -> np.ndarray:
    """All-pairs class distances, -1 across components (small graphs only)."""
    return np.stack([_single_source(q, s) for s in range(q.class_count)])


@dataclass(frozen=True)
class ChainCheck:
    ok: bool
    failure_index: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def verify_chain(chain) -> ChainCheck:
    """Every entry nonscalar and every adjacent pair commuting."""
    chain = list(chain)
    for i, X in enumerate(chain):
        if is_scalar(X):
            return ChainCheck(False, i, "scalar entry")
    for i in range(len(chain) - 1):
        try:
            ok = commute(chain[i], chain[i + 1])
        except ShapeMismatch:
            return ChainCheck(False, i, "shape or field mismatch")
        if not ok:
            return ChainCheck(False, i, "adjacent pair does not commute")
    return ChainCheck(True)
