"""Dense symmetric eigensolver and Perron-Frobenius eigenpairs.

``eigen_sym`` is the deterministic full-spectrum oracle (cyclic Jacobi
rotations); ``perron`` computes the top eigenpair of the finite Jacobi
matrix by shifted power iteration, which keeps the route to sigma
independent of the dense solver so the two can be cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graphs import FiniteGraph, JacobiParams, assemble_jacobi, is_bipartite, negate_b


@dataclass(frozen=True)
class PerronPair:
    """Top eigenvalue sigma with its strictly positive unit eigenvector."""

    sigma: float
    psi: dict[str, float]

    def vector(self, graph: FiniteGraph) -> np.ndarray:
        return np.array([self.psi[v] for v in graph.vertices])


@dataclass(frozen=True)
class SpectrumFinite:
    """All eigenvalues (ascending, with multiplicity) and eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def top(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def bottom(self) -> float:
        return float(self.eigenvalues[0])


def eigen_sym(mat: np.ndarray) -> SpectrumFinite:
    """Full spectrum of a real symmetric matrix via cyclic Jacobi rotations.

    The sweep stops once the off-diagonal Frobenius norm is below
    1e-13 times the Frobenius norm of the input.  Eigenvector signs are
    normalized so each column's largest-magnitude entry is positive.
    """
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("eigen_sym needs a square matrix")
    scale = np.abs(mat).max()
    if not np.all(np.abs(mat - mat.T) <= 1e-12 * (1.0 + scale)):
        raise ValueError("eigen_sym needs a symmetric matrix")
    w, v = _kernels.jacobi_eigh(mat)
    flip = np.take_along_axis(v, np.abs(v).argmax(axis=0)[None, :], axis=0)[0] < 0
    v = np.where(flip[None, :], -v, v)
    return SpectrumFinite(eigenvalues=w, eigenvectors=v)


def gershgorin_bound(graph: FiniteGraph, params: JacobiParams) -> float:
    """max |b| + max incident-edge weight sum.

    Bounds the spectral radius of both the finite matrix and its lift
    (interior tree nodes have the same incident weight sums as their
    projections).
    """
    rowsum = {v: 0.0 for v in graph.vertices}
    for eid, u, v in graph.edges:
        rowsum[u] += params.a[eid]
        rowsum[v] += params.a[eid]
    return max(abs(x) for x in params.b.values()) + max(rowsum.values())


def _shift_constant(graph: FiniteGraph, params: JacobiParams) -> float:
    return gershgorin_bound(graph, params) + 1.0


def _power_iterate(mat: np.ndarray, start: np.ndarray, tol: float = 1e-14,
                   max_iter: int = 10**6) -> tuple[np.ndarray, bool]:
    v = start / np.linalg.norm(start)
    for _ in range(max_iter):
        w = mat @ v
        w /= np.linalg.norm(w)
        if np.linalg.norm(w - v) < tol:
            return w, True
        v = w
    return v, False


def perron(graph: FiniteGraph, params: JacobiParams, tol: float = 1e-14,
           max_iter: int = 10**6) -> PerronPair:
    """Perron-Frobenius eigenpair of the finite Jacobi matrix.

    Power iteration on J + c*Id with c = max|b| + max incident weight sum
    + 1: the shift makes the iteration matrix entrywise nonnegative with
    positive diagonal and irreducible (the graph is connected), hence
    primitive, so iterates from the all-ones vector converge to the unique
    positive top eigenvector.  sigma is the Rayleigh quotient of J.
    """
    jmat = assemble_jacobi(graph, params)
    c = _shift_constant(graph, params)
    shifted = jmat + c * np.eye(graph.p)
    v, converged = _power_iterate(shifted, np.ones(graph.p), tol, max_iter)
    if not converged:
        raise RuntimeError(f"perron power iteration did not converge in {max_iter} steps")
    sigma = float(v @ jmat @ v)
    return PerronPair(sigma=sigma, psi={name: float(x) for name, x in zip(graph.vertices, v)})


def perron_minus(graph: FiniteGraph, params: JacobiParams, tol: float = 1e-14,
                 max_iter: int = 10**6) -> tuple[float, np.ndarray]:
    """Lowest eigenvalue of J and an eigenvector.

    The eigenvalue comes from power iteration on c*Id - J (top eigenvalue
    c - sigma_minus), started from a fixed pseudorandom vector: the matrix
    is no longer entrywise nonnegative, so the all-ones vector can be
    exactly orthogonal to the target eigenspace (odd cycles do this) while
    a generic start is not.  On bipartite graphs the returned eigenvector
    is the sign-flipped Perron vector of (a, -b); the eigenvalue still
    comes from the independent power-iteration route.
    """
    jmat = assemble_jacobi(graph, params)
    c = _shift_constant(graph, params)
    start = np.random.default_rng(20).standard_normal(graph.p)
    v, _ = _power_iterate(c * np.eye(graph.p) - jmat, start, tol, max_iter)
    sigma_minus = float(v @ jmat @ v)
    part = is_bipartite(graph)
    if part.is_bipartite:
        flipped = perron(graph, negate_b(params), tol, max_iter)
        v = part.sign_vector(graph) * flipped.vector(graph)
    else:
        if v[np.abs(v).argmax()] < 0:
            v = -v
    return sigma_minus, v
