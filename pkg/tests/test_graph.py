import itertools
import math
import random

import networkx as nx
import numpy as np
import pytest

from commgraph.arith import GF, QQ
from commgraph.errors import BudgetExceeded, InvalidArgument
from commgraph.graph import (
    Budget,
    build_quotient,
    check_budget,
    class_distance_matrix,
    commutant_keys,
    decode,
    distance_at_most_2,
    distance_at_most_2_codes,
    encode,
    ff_distance,
    ff_graph_summary,
    gf2_commute_packed,
    gf2_matmul_packed,
    pack_rows,
    verify_chain,
)
from commgraph.matrix import SquareMatrix, commutant_basis, commute


def brute_graph(p, n):
    """Vertex-level commuting graph by direct matrix products."""
    mats = np.array(list(itertools.product(range(p), repeat=n * n)), dtype=np.int64).reshape(-1, n, n)
    scalar = np.array([np.array_equal(M, M[0, 0] * np.eye(n, dtype=np.int64)) for M in mats])
    V = np.flatnonzero(~scalar)
    A = mats[V]
    AB = np.einsum("aij,bjk->abik", A, A) % p
    comm = np.all(AB == AB.transpose(1, 0, 2, 3), axis=(2, 3))
    G = nx.Graph()
    G.add_nodes_from(V.tolist())
    ii, jj = np.nonzero(np.triu(comm, 1))
    G.add_edges_from(zip(V[ii].tolist(), V[jj].tolist()))
    return G


def is_clique(G, nodes):
    k = len(nodes)
    return G.subgraph(nodes).number_of_edges() == k * (k - 1) // 2


@pytest.fixture(scope="module", params=[(2, 2), (3, 2), (2, 3)])
def small_case(request):
    p, n = request.param
    return p, n, brute_graph(p, n), ff_graph_summary(p, n)


def test_summary_matches_brute_force(small_case):
    p, n, G, s = small_case
    comps = sorted(nx.connected_components(G), key=min)
    assert s.vertex_count == G.number_of_nodes()
    assert s.component_count == len(comps)
    assert s.component_sizes == [len(c) for c in comps]
    assert s.component_diameters == [nx.diameter(G.subgraph(c)) for c in comps]
    assert s.all_components_cliques == all(is_clique(G, c) for c in comps)
    assert math.isinf(s.diameter)


def test_quotient_classes_are_twins(small_case):
    p, n, G, _ = small_case
    q = build_quotient(p, n)
    for c in range(q.class_count):
        members = np.flatnonzero(q.class_of == c)
        closed = [set(G[v]) | {v} for v in members.tolist()]
        assert all(x == closed[0] for x in closed)


def test_quotient_distances_match_vertex_distances():
    p, n = 2, 3
    G = brute_graph(p, n)
    q = build_quotient(p, n)
    D = class_distance_matrix(q)
    rng = random.Random(0)
    for v in rng.sample(sorted(G.nodes), 40):
        lengths = nx.single_source_shortest_path_length(G, v)
        for u in G.nodes:
            expected = lengths.get(u, -1)
            cu, cv = q.class_of[u], q.class_of[v]
            got = 0 if u == v else (1 if cu == cv else D[cv, cu])
            assert got == expected


def test_gf2_two_by_two_structure():
    s = ff_graph_summary(2, 2)
    assert s.component_count == 7 and s.component_sizes == [2] * 7
    assert s.all_components_cliques
    s3 = ff_graph_summary(3, 2)
    assert s3.all_components_cliques and not s3.connected


def test_gf2_four_connected_diameter_four():
    s = ff_graph_summary(2, 4)
    assert s.vertex_count == 65534
    assert s.connected and s.diameter == 4


def test_gf2_four_quotient_spot_checks():
    q = build_quotient(2, 4)
    rng = random.Random(11)
    codes = np.flatnonzero(q.class_of >= 0)
    picks = rng.sample(codes.tolist(), 60)
    # commutant keys agree with the exact-arithmetic commutant
    for a, b in zip(picks[::2], picks[1::2]):
        A, B = decode(a, 2, 4), decode(b, 2, 4)
        same = commutant_basis(A) == commutant_basis(B)
        assert same == (q.class_of[a] == q.class_of[b])
    # quotient edges agree with direct commutation
    for a in picks[:20]:
        A = decode(a, 2, 4)
        for b in rng.sample(codes.tolist(), 50):
            ca, cb = q.class_of[a], q.class_of[b]
            edge = ca == cb or cb in set(q.neighbors(ca).tolist())
            assert edge == commute(A, decode(b, 2, 4))


def test_diameter_bounds_random_eccentricities():
    q = build_quotient(2, 3)
    s = ff_graph_summary(2, 3)
    D = class_distance_matrix(q)
    for c in random.Random(2).sample(range(q.class_count), 10):
        assert D[c].max() <= max(s.component_diameters)


def test_commutant_keys_gf2_and_fp_paths_agree():
    codes = np.arange(2**9)
    k2 = commutant_keys(codes, 2, 3)
    # the generic elimination over F_2 must induce the same partition
    from commgraph.graph import _batched_rref_fp, _constraint_tensors, _digits

    kf = _batched_rref_fp(_constraint_tensors(_digits(codes, 2, 9), 2, 3), 2).reshape(codes.size, -1)
    _, inv2 = np.unique(k2, axis=0, return_inverse=True)
    _, invf = np.unique(kf, axis=0, return_inverse=True)
    pairs = set(zip(inv2.ravel().tolist(), invf.ravel().tolist()))
    assert len(pairs) == len(set(inv2.ravel().tolist())) == len(set(invf.ravel().tolist()))


def test_encode_decode_order():
    A = SquareMatrix(((1, 0), (1, 1)), GF(2))
    assert encode(A) == 0b1011
    assert decode(encode(A), 2, 2) == A
    assert decode(0, 3, 2) == SquareMatrix.zero(2, GF(3))


def test_packed_gf2_products():
    rng = random.Random(4)
    for _ in range(50):
        A = SquareMatrix.random(4, GF(2), rng)
        B = SquareMatrix.random(4, GF(2), rng)
        assert gf2_matmul_packed(pack_rows(A), pack_rows(B), 4) == pack_rows(A @ B)
        assert gf2_commute_packed(pack_rows(A), pack_rows(B), 4) == commute(A, B)


def test_budget_refusal():
    with pytest.raises(BudgetExceeded):
        check_budget(2, 15)
    with pytest.raises(BudgetExceeded):
        ff_graph_summary(3, 4, Budget(max_vertices=1000))


def test_ff_distance_examples():
    f = GF(2)
    A = SquareMatrix(((1, 1), (0, 1)), f)
    assert ff_distance(A, A) == 0
    B = SquareMatrix(((1, 1, 0), (0, 1, 0), (0, 0, 0)), f)
    assert ff_distance(B, B @ B) == 1
    C = SquareMatrix(((1, 0), (0, 0)), f)
    assert ff_distance(A, C) == math.inf
    with pytest.raises(InvalidArgument):
        ff_distance(SquareMatrix.identity(2, f), A)


def test_conjugation_invariance():
    rng = random.Random(9)
    f = GF(2)
    q = build_quotient(2, 3)
    codes = np.flatnonzero(q.class_of >= 0).tolist()
    for _ in range(15):
        A, B = (decode(c, 2, 3) for c in rng.sample(codes, 2))
        while True:
            T = SquareMatrix.random(3, f, rng)
            if T.is_invertible():
                break
        Ti = T.inverse()
        assert ff_distance(A, B) == ff_distance(Ti @ A @ T, Ti @ B @ T)


def test_distance_at_most_2_examples():
    A = SquareMatrix(((1, 2), (3, 4)))
    assert distance_at_most_2(A, A @ A)
    f = GF(2)
    assert not distance_at_most_2(SquareMatrix(((1, 1), (0, 1)), f), SquareMatrix(((1, 0), (0, 0)), f))
    with pytest.raises(InvalidArgument):
        distance_at_most_2(SquareMatrix.identity(2, QQ), A)


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (2, 3)])
def test_batched_distance_at_most_2_exhaustive(p, n):
    q = build_quotient(p, n)
    D = class_distance_matrix(q)
    vc = np.flatnonzero(q.class_of >= 0)
    a, b = (x.ravel() for x in np.meshgrid(vc, vc, indexing="ij"))
    ca, cb = q.class_of[a], q.class_of[b]
    d = np.where(a == b, 0, np.where(ca == cb, 1, D[ca, cb]))
    assert np.array_equal(distance_at_most_2_codes(p, n, a, b), (d >= 0) & (d <= 2))


def test_batched_matches_scalar_oracle():
    rng = random.Random(5)
    q = build_quotient(3, 2)
    vc = np.flatnonzero(q.class_of >= 0).tolist()
    a = rng.choices(vc, k=300)
    b = rng.choices(vc, k=300)
    fast = distance_at_most_2_codes(3, 2, a, b)
    for x, y, r in zip(a, b, fast):
        assert distance_at_most_2(decode(x, 3, 2), decode(y, 3, 2)) == r


def test_verify_chain_examples():
    A = SquareMatrix(((1, 2), (3, 4)))
    assert verify_chain([A, A @ A, A])
    B = SquareMatrix(((0, 1), (0, 0)))
    res = verify_chain([A, B])
    assert not res and res.failure_index == 0
    res = verify_chain([A, SquareMatrix.identity(2)])
    assert not res and res.failure_index == 1


def test_summary_json_is_deterministic():
    a = ff_graph_summary(2, 3, Budget(threads=1)).to_json()
    b = ff_graph_summary(2, 3, Budget(threads=3)).to_json()
    assert a == b and a["diameter"] == "inf"
