import numpy as np
import pytest

from treejacobi.cover import (
    BallBudgetError,
    apply_H,
    build_ball,
    ground_state_identity,
    lanczos_top,
    lift_psi,
    lifted,
)
from treejacobi.graphs import cycle_graph, free_model, rg_model
from treejacobi.spectral import perron

from conftest import random_params


def dense_ball_matrix(ball):
    """Explicit matrix of the ball compression, for small balls only."""
    n = ball.n_nodes
    mat = np.zeros((n, n))
    mat[np.arange(n), np.arange(n)] = ball.b_node
    for x in range(1, n):
        p = ball.parent[x]
        mat[x, p] += ball.a_par[x]
        mat[p, x] += ball.a_par[x]
    return mat


def test_ball_sizes_free_model():
    graph, params = free_model(3)
    for radius in (0, 1, 2, 5):
        ball = build_ball(graph, params, "v0", radius)
        # d-regular tree: 1 + d + d(d-1) + ... nodes
        expect = 1 + sum(3 * 2 ** (k - 1) for k in range(1, radius + 1))
        assert ball.n_nodes == expect
        assert ball.depth.max() == (radius if radius else 0)


def test_ball_sizes_rg_model():
    graph, params = rg_model(3, 2)
    ball = build_ball(graph, params, "r0", 4)
    # (3,2)-biregular tree from a red root: 1, 2, 2*2, 4*1... levels
    # alternate branching g then (r-1)/(g-1)
    levels = np.bincount(ball.depth)
    assert levels[0] == 1 and levels[1] == 2
    assert levels[2] == levels[1] * 2  # green nodes branch into r-1 = 2
    assert levels[3] == levels[2] * 1  # red nodes branch into g-1 = 1
    assert ball.n_nodes == levels.sum()


def test_ball_is_nonbacktracking(q3):
    graph, params = q3
    ball = build_ball(graph, params, "v0", 6)
    # no child continues along the reversal of its entering edge
    for x in range(1, ball.n_nodes):
        p = ball.parent[x]
        if p == 0:
            continue
        assert ball.ein[x] != ball.ein[p] ^ 1
    # every interior node has full base degree inside the ball
    interior = ball.depth < ball.radius
    degs = ball.ball_degrees()
    base_deg = np.array([graph.degree(v) for v in graph.vertices])
    assert np.array_equal(degs[interior], base_deg[ball.proj[interior]])


def test_ball_projection_respects_edges(q3):
    graph, params = q3
    ball = build_ball(graph, params, "v3", 5)
    for x in range(1, ball.n_nodes):
        eid, u, v = graph.edges[ball.ein[x] // 2]
        ends = {graph.vertices[ball.proj[x]], graph.vertices[ball.proj[ball.parent[x]]]}
        assert ends == {u, v}


def test_ball_budget_guard(q3):
    graph, params = q3
    with pytest.raises(BallBudgetError):
        build_ball(graph, params, "v0", 40)
    # explicit budget
    with pytest.raises(BallBudgetError):
        build_ball(graph, params, "v0", 8, node_budget=100)


def test_cycle_cover_is_line():
    graph, params = cycle_graph(4)
    ball = build_ball(graph, params, "v0", 10)
    assert ball.n_nodes == 21  # the line: 2R + 1 nodes
    assert np.bincount(ball.depth).tolist() == [1] + [2] * 10


def test_apply_H_matches_dense(q3):
    graph, _ = q3
    rng = np.random.default_rng(17)
    params = random_params(graph, rng)
    ball = build_ball(graph, params, "v0", 5)
    mat = dense_ball_matrix(ball)
    vals = rng.standard_normal(ball.n_nodes)
    vals[ball.depth >= 5] = 0.0
    v = lifted(vals)
    out = apply_H(ball, v)
    assert np.abs(out.values - mat @ vals).max() < 1e-12


def test_apply_H_rejects_boundary_support(q3):
    graph, params = q3
    ball = build_ball(graph, params, "v0", 3)
    vals = np.zeros(ball.n_nodes)
    vals[-1] = 1.0  # deepest node lives on the boundary shell
    with pytest.raises(ValueError, match="boundary"):
        apply_H(ball, lifted(vals))


def test_lift_psi_constant_on_fibers(q3):
    graph, _ = q3
    params = random_params(graph, np.random.default_rng(2))
    pair = perron(graph, params)
    ball = build_ball(graph, params, "v0", 6)
    lv = lift_psi(ball, pair.psi)
    for v in graph.vertices:
        fiber = lv.values[ball.proj == graph.index(v)]
        assert np.ptp(fiber) == 0.0
        assert fiber[0] == pair.psi[v]


def test_lanczos_matches_dense_on_small_balls(q3, petersen):
    rng = np.random.default_rng(41)
    for graph, _ in (q3, petersen):
        params = random_params(graph, rng)
        ball = build_ball(graph, params, "v0", 4)
        top = lanczos_top(ball)
        dense_top = np.linalg.eigvalsh(dense_ball_matrix(ball)).max()
        assert top == pytest.approx(dense_top, abs=1e-10)


def test_lanczos_single_node():
    graph, params = free_model(3)
    ball = build_ball(graph, params, "v0", 0)
    assert lanczos_top(ball) == params.b["v0"]


def test_lanczos_monotone_in_radius():
    graph, params = free_model(3)
    tops = []
    for radius in range(1, 12):
        ball = build_ball(graph, params, "v0", radius)
        tops.append(lanczos_top(ball))
    diffs = np.diff(tops)
    assert (diffs >= -1e-12).all()
    assert tops[-1] < 2 * np.sqrt(2)  # compression stays below the sup


def test_ground_state_identity_exact(q3, petersen):
    rng = np.random.default_rng(4)
    for graph, _ in (q3, petersen):
        for _ in range(3):
            params = random_params(graph, rng)
            pair = perron(graph, params)
            ball = build_ball(graph, params, "v0", 5)
            f = rng.standard_normal(ball.n_nodes)
            f[ball.depth > 3] = 0.0
            lhs, rhs = ground_state_identity(ball, pair.psi, lifted(f), pair.sigma)
            assert lhs == pytest.approx(rhs, rel=1e-12)


def test_ground_state_identity_rejects_deep_support(q3):
    graph, params = q3
    pair = perron(graph, params)
    ball = build_ball(graph, params, "v0", 3)
    f = np.ones(ball.n_nodes)
    with pytest.raises(ValueError, match="depth"):
        ground_state_identity(ball, pair.psi, lifted(f), pair.sigma)
