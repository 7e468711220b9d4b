import itertools

import numpy as np
import pytest

from tensorring import (
    DegenerateComponentError,
    DomainError,
    GraphFamily,
    GraphTensor,
    ShapeError,
    TensorGraph,
    TRTensor,
    chorded_cycle_family,
    cycle_path_cover,
    dense_norm,
    extract_cycle_tensor,
    g_truncate,
    graph_to_dense,
    greedy_graph_select,
    insert_graph_edge,
    skip_chain_family,
    tr_add,
    tr_round,
)
import tensorring.graph as graph_mod
from tensorring.graph import CoverElement, CyclePathCover

from conftest import rel_err


def random_graph_tensor(rng, g: TensorGraph) -> GraphTensor:
    return GraphTensor(g, [rng.standard_normal(g.core_shape(v)) for v in range(g.d)])


def test_graph_validation():
    with pytest.raises(ShapeError):
        TensorGraph((2, 2), {(0, 0): 1})
    with pytest.raises(ShapeError):
        TensorGraph((2, 2), {(0, 1): 1, (1, 0): 2})
    with pytest.raises(ShapeError):
        TensorGraph((2, 2), {(0, 1): 0})
    g = TensorGraph((2, 3, 4), {(0, 1): 2, (1, 2): 3})
    with pytest.raises(ShapeError):
        GraphTensor(g, [np.zeros((2, 2)), np.zeros((3, 3, 2)), np.zeros((4, 3))])


def test_core_mode_count(rng):
    g = TensorGraph((2, 3, 2, 2), {(0, 1): 2, (1, 2): 3, (2, 3): 2, (0, 3): 2, (0, 2): 2})
    gt = random_graph_tensor(rng, g)
    for v in range(4):
        assert gt.cores[v].ndim == 1 + g.degree(v)


def test_cycle_graph_matches_tr(rng):
    T = TRTensor.random((3, 2, 4, 2), (2, 3, 2, 2), rng)
    gt = GraphTensor.from_tr(T)
    np.testing.assert_allclose(graph_to_dense(gt), T.full(), atol=1e-13)
    np.testing.assert_allclose(gt.to_tr().full(), T.full(), atol=1e-13)
    assert gt.storage == T.storage


def test_edgeless_is_outer_product(rng):
    g = TensorGraph((2, 3, 4), {})
    gt = random_graph_tensor(rng, g)
    np.testing.assert_allclose(gt.full(), np.einsum("i,j,k->ijk", *gt.cores))


def test_cycle_with_chord_loop_oracle(rng):
    g = TensorGraph((2, 2, 3, 2), {(0, 1): 2, (1, 2): 2, (2, 3): 3, (0, 3): 2, (0, 2): 2})
    gt = random_graph_tensor(rng, g)
    G0, G1, G2, G3 = gt.cores  # G0: (n, r01, r02, r03) ...
    D = np.zeros(g.mode_sizes)
    for idx in itertools.product(*map(range, g.mode_sizes)):
        s = 0.0
        for a, b, c, e, f in itertools.product(range(2), range(2), range(3), range(2), range(2)):
            # a:(0,1) b:(1,2) c:(2,3) e:(0,3) f:(0,2)
            s += G0[idx[0], a, f, e] * G1[idx[1], a, b] * G2[idx[2], f, b, c] * G3[idx[3], e, c]
        D[idx] = s
    np.testing.assert_allclose(gt.full(), D, atol=1e-12)
    assert gt.norm() == pytest.approx(dense_norm(D), rel=1e-12)


def test_cover_plain_cycle_and_chain():
    ring = TensorGraph.ring((2,) * 5, (2,) * 6)
    cov = cycle_path_cover(ring)
    assert [e.kind for e in cov.elements] == ["cycle"]
    chain = TensorGraph.chain((2,) * 5, (1, 2, 2, 2, 2, 1))
    cov = cycle_path_cover(chain)
    assert [e.kind for e in cov.elements] == ["path"]
    assert cov.elements[0].vertices == (0, 1, 2, 3, 4)


@pytest.mark.parametrize("chord", [(0, 2), (1, 4), (0, 3)])
def test_cover_cycle_with_chord(chord):
    edges = {(k, (k + 1) % 5) if k < 4 else (0, 4): 2 for k in range(5)}
    edges[chord] = 2
    g = TensorGraph((2,) * 5, edges)
    cov = cycle_path_cover(g)
    cov.validate(g)
    seen = cov.edges()
    assert len(seen) == len(set(seen)) and set(seen) == set(g.edges)
    assert cov.elements[0].kind == "cycle"
    assert chord in cov.elements[0].edges


def test_cover_validate_rejects():
    g = TensorGraph.ring((2,) * 4, (2,) * 5)
    with pytest.raises(ShapeError):
        CyclePathCover([CoverElement("path", (0, 1, 2))]).validate(g)


def test_extract_plain_cycle(rng):
    T = TRTensor.random((3, 2, 4), (2, 3, 2), rng)
    gt = GraphTensor.from_tr(T)
    E = extract_cycle_tensor(gt, [0, 1, 2])
    for a, b in zip(E.cores, T.cores):
        np.testing.assert_array_equal(a, b)


def test_extract_grouped_mode_sizes(rng):
    # 8 vertices (0-based): cycle {1,2,5,6} with pendants
    edges = {(1, 2): 2, (2, 5): 2, (5, 6): 2, (1, 6): 2, (0, 1): 3, (4, 5): 2, (2, 3): 2, (6, 7): 3, (3, 7): 2}
    g = TensorGraph((2, 3, 2, 2, 2, 3, 2, 2), edges)
    gt = random_graph_tensor(rng, g)
    E = extract_cycle_tensor(gt, [1, 2, 5, 6])
    assert E.shape == (3 * 3, 2 * 2, 3 * 2, 2 * 3)


def test_extract_rejects_non_cycle(rng):
    gt = GraphTensor.from_tr(TRTensor.random((2, 2, 2, 2), (2, 2, 2, 2), rng))
    with pytest.raises(DomainError):
        extract_cycle_tensor(gt, [0, 1, 2])


def test_extract_reinsert_identity(rng):
    g = TensorGraph((2, 3, 2, 2), {(0, 1): 2, (1, 2): 2, (2, 3): 2, (0, 3): 2, (0, 2): 3})
    gt = random_graph_tensor(rng, g)
    out = g_truncate(gt, 0.0)
    np.testing.assert_allclose(out.full(), gt.full(), atol=1e-10 * dense_norm(gt.full()))


def test_g_truncate_plain_cycle_equals_tr_round(rng):
    T = TRTensor.random((3, 2, 3, 2), (2, 2, 2, 2), rng)
    S = tr_add(T, T)
    a = g_truncate(GraphTensor.from_tr(S), 1e-6).to_tr()
    b = tr_round(S, 1e-6)
    assert a.ranks == b.ranks
    np.testing.assert_allclose(a.full(), b.full(), atol=1e-12)


def test_g_truncate_minimal_unchanged(rng):
    T = TRTensor.random((4, 4, 4, 4), (2, 2, 2, 2), rng)
    gt = GraphTensor.from_tr(T)
    out = g_truncate(gt, 0.0)
    assert out.graph.edges == gt.graph.edges


def inflated_chorded(rng, d, r):
    T = TRTensor.random((3,) * d, (r,) * d, rng)
    gt = GraphTensor.from_tr(tr_add(T, T))
    return insert_graph_edge(gt, [0, 1, 2], 2)


@pytest.mark.parametrize("d", [4, 5, 6])
def test_g_truncate_error_bound(rng, d):
    gt = inflated_chorded(rng, d, 2)
    D = gt.full()
    out = g_truncate(gt, 1e-8)
    assert dense_norm(out.full() - D) <= 1e-8 * dense_norm(D)
    assert out.storage < gt.storage
    for e, r in out.graph.edges.items():
        assert r <= gt.graph.edges[e]


def test_g_truncate_zero_tensor(rng):
    g = TensorGraph.ring((2, 2, 2), (2, 2, 2, 2))
    gt = GraphTensor(g, [np.zeros(g.core_shape(v)) for v in range(3)])
    out = g_truncate(gt, 1e-3)
    assert all(r == 1 for r in out.graph.edges.values())
    assert np.all(out.full() == 0)


def test_g_truncate_errors(rng):
    gt = GraphTensor.from_tr(TRTensor.random((2, 2, 2), (2, 2, 2), rng))
    with pytest.raises(DomainError):
        g_truncate(gt, -1.0)


def test_zero_pendant_core_gives_zero(rng):
    g = TensorGraph((2, 2, 2, 2), {(0, 1): 2, (1, 2): 2, (0, 2): 2, (2, 3): 2})
    gt = random_graph_tensor(rng, g)
    gt.cores[3][:] = 0.0
    out = g_truncate(gt, 1e-3)
    assert np.all(out.full() == 0)


def test_degenerate_component_raises(rng, monkeypatch):
    g = TensorGraph((2, 2, 2, 2), {(0, 1): 2, (1, 2): 2, (0, 2): 2, (2, 3): 2})
    gt = random_graph_tensor(rng, g)
    monkeypatch.setattr(graph_mod, "_norm_sq", lambda gt, comp: 0.0)
    monkeypatch.setattr(graph_mod, "graph_norm", lambda gt: 1.0)
    with pytest.raises(DegenerateComponentError):
        g_truncate(gt, 1e-3)


@pytest.mark.parametrize("path,rho", [([0, 1, 2], 2), ([0, 1, 2], 4), ([2, 1, 0], 2), ([1, 2, 3, 4], 2), ([4, 0, 1, 2], 2)])
def test_insert_graph_edge_exact(rng, path, rho):
    T = TRTensor.random((3, 2, 2, 3, 2), (4, 4, 2, 2, 4), rng)
    gt = GraphTensor.from_tr(T)
    if gt.graph.rank(path[0], path[1]) % rho:
        pytest.skip("rank not divisible")
    out = insert_graph_edge(gt, path, rho)
    assert out.graph.has_edge(path[0], path[-1])
    assert out.graph.rank(path[0], path[-1]) == rho
    D = T.full()
    assert np.abs(out.full() - D).max() <= 1e-13 * dense_norm(D)


def test_insert_graph_edge_errors(rng):
    gt = GraphTensor.from_tr(TRTensor.random((2,) * 4, (2,) * 4, rng))
    with pytest.raises(DomainError):
        insert_graph_edge(gt, [0, 1], 1)
    with pytest.raises(DomainError):
        insert_graph_edge(gt, [0, 2, 1], 1)


def test_families():
    fam = chorded_cycle_family(5)
    ring = TensorGraph.ring((2,) * 5, (1,) * 6)
    assert fam.contains(ring)
    assert fam.candidates(ring) == [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]
    with_chord = TensorGraph(ring.mode_sizes, {**ring.edges, (0, 2): 1})
    assert fam.contains(with_chord)
    assert fam.candidates(with_chord) == []
    sk = skip_chain_family(5)
    chain = TensorGraph.chain((2,) * 5, (1,) * 6)
    assert sk.contains(chain) and not sk.contains(ring)
    assert sk.candidates(chain) == [(0, 2), (2, 4)]


def test_greedy_singleton_returns_initial(rng):
    T = TRTensor.random((3, 3, 3, 3), (2, 2, 2, 2), rng)
    X = T.full()
    from tensorring import reduced_storage_tr_svd

    init = GraphTensor.from_tr(reduced_storage_tr_svd(X, 1e-10))
    fam = GraphFamily.singleton(init.graph)
    g, gt = greedy_graph_select(init, fam, eps=1e-10)
    assert g == init.graph
    np.testing.assert_array_equal(gt.full(), init.full())


def test_greedy_skip_chain_trace_decreasing():
    x = np.linspace(0, 1, 6)
    grid = np.meshgrid(*([x] * 5), indexing="ij")
    X = grid[0] * grid[2] + grid[2] * grid[4]
    hist = []
    g, gt = greedy_graph_select(X, skip_chain_family(5), eps=1e-9, history=hist)
    costs = [c for _, c in hist]
    assert all(b < a for a, b in zip(costs, costs[1:]))
    assert len(hist) > 1
    assert skip_chain_family(5).contains(g)
    assert rel_err(gt.full(), X) <= 1e-9


def test_greedy_errors():
    with pytest.raises(DomainError):
        greedy_graph_select(np.ones((2, 2, 2, 2)), None)
