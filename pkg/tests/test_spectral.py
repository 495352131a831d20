import numpy as np
import pytest

from treejacobi.graphs import assemble_jacobi, cycle_graph, negate_b
from treejacobi.spectral import (
    eigen_sym,
    gershgorin_bound,
    perron,
    perron_minus,
)

from conftest import random_params


def test_eigen_sym_matches_lapack_on_random_matrices():
    """The rotation solver and LAPACK must agree to near machine precision."""
    rng = np.random.default_rng(11)
    for n in (1, 2, 3, 5, 8, 13):
        m = rng.standard_normal((n, n))
        m = (m + m.T) / 2
        spec = eigen_sym(m)
        ref = np.linalg.eigvalsh(m)
        assert np.allclose(spec.eigenvalues, ref, rtol=0, atol=1e-12 * (1 + np.abs(ref).max()))
        # residuals of the eigenpairs
        res = m @ spec.eigenvectors - spec.eigenvectors * spec.eigenvalues
        assert np.abs(res).max() < 1e-12 * (1 + np.abs(m).max())
        # orthonormal columns
        gram = spec.eigenvectors.T @ spec.eigenvectors
        assert np.abs(gram - np.eye(n)).max() < 1e-12


def test_eigen_sym_input_checks():
    with pytest.raises(ValueError, match="square"):
        eigen_sym(np.zeros((2, 3)))
    m = np.array([[0.0, 1.0], [0.5, 0.0]])
    with pytest.raises(ValueError, match="symmetric"):
        eigen_sym(m)


def test_eigen_sym_sign_convention():
    m = np.diag([2.0, -1.0])
    spec = eigen_sym(m)
    # each column's largest entry is positive
    assert (spec.eigenvectors.max(axis=0) > 0).all()
    assert spec.top == 2.0 and spec.bottom == -1.0


def test_gershgorin_bound_dominates_spectrum(q3):
    graph, _ = q3
    rng = np.random.default_rng(5)
    for _ in range(5):
        params = random_params(graph, rng, a_spread=2.0, b_spread=3.0)
        bound = gershgorin_bound(graph, params)
        w = np.linalg.eigvalsh(assemble_jacobi(graph, params))
        assert np.abs(w).max() <= bound + 1e-12


def test_perron_on_regular_graphs(q3, petersen, k4):
    for graph, params in (q3, petersen, k4):
        pair = perron(graph, params)
        # unit-weight regular graph: sigma = degree, psi constant
        assert pair.sigma == pytest.approx(3.0, abs=1e-12)
        vec = pair.vector(graph)
        assert np.all(vec > 0)
        assert np.ptp(vec) < 1e-12
        assert np.linalg.norm(vec) == pytest.approx(1.0, abs=1e-12)


def test_perron_matches_dense_top(q3, petersen):
    rng = np.random.default_rng(23)
    for graph, _ in (q3, petersen):
        for _ in range(3):
            params = random_params(graph, rng)
            pair = perron(graph, params)
            jmat = assemble_jacobi(graph, params)
            top = np.linalg.eigvalsh(jmat).max()
            assert pair.sigma == pytest.approx(top, abs=1e-12)
            vec = pair.vector(graph)
            assert np.abs(jmat @ vec - pair.sigma * vec).max() < 1e-10


def test_perron_minus_matches_dense_bottom(q3, petersen, k4):
    rng = np.random.default_rng(29)
    for graph, _ in (q3, petersen, k4):
        for _ in range(3):
            params = random_params(graph, rng)
            sm, vec = perron_minus(graph, params)
            jmat = assemble_jacobi(graph, params)
            bottom = np.linalg.eigvalsh(jmat).min()
            assert sm == pytest.approx(bottom, abs=1e-11)
            assert np.abs(jmat @ vec - sm * vec).max() < 1e-9


def test_perron_minus_survives_odd_cycles():
    """All-ones starts fail on odd cycles; the seeded start must not."""
    graph, params = cycle_graph(5)
    sm, _ = perron_minus(graph, params)
    # C5 spectrum: 2cos(2 pi k / 5); bottom = 2cos(4 pi / 5)
    assert sm == pytest.approx(2 * np.cos(4 * np.pi / 5), abs=1e-11)


def test_bipartite_sign_flip_relation(q3):
    graph, _ = q3
    rng = np.random.default_rng(31)
    for _ in range(5):
        params = random_params(graph, rng)
        sm, vec = perron_minus(graph, params)
        flipped = perron(graph, negate_b(params))
        assert abs(sm + flipped.sigma) < 1e-12
        # eigenvector magnitudes match the flipped Perron vector
        assert np.abs(np.abs(vec) - flipped.vector(graph)).max() < 1e-10
