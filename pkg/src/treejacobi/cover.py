"""Truncated universal covers (tree balls) and the lifted operator H.

A ball of radius R around a base vertex enumerates all non-backtracking
paths of length <= R in breadth-first order, storing parent links instead
of path strings.  The lifted operator acts exactly on vectors supported on
interior nodes, which is what the ground-state identity and the Lanczos
lower bounds on the spectral supremum need.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import _kernels
from .graphs import FiniteGraph, JacobiParams, indexed


class BallBudgetError(Exception):
    """Ball construction would exceed the node budget."""


@dataclass(frozen=True)
class TreeBall:
    """Radius-R piece of the universal cover around ``base``.

    Nodes are numbered in breadth-first order (the root is node 0); node n
    projects to base-graph vertex index ``proj[n]``, hangs off ``parent[n]``
    (-1 at the root) through directed edge ``ein[n]``, and sits at depth
    ``depth[n]``.  ``level_ptr[d]:level_ptr[d+1]`` slices out depth d.
    ``a_par`` and ``b_node`` are the lifted parameters (edge weight toward
    the parent, potential at the node).
    """

    graph: FiniteGraph
    base: str
    radius: int
    proj: np.ndarray
    parent: np.ndarray
    ein: np.ndarray
    depth: np.ndarray
    level_ptr: np.ndarray
    a_par: np.ndarray
    b_node: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.proj.shape[0]

    @property
    def interior(self) -> np.ndarray:
        """Mask of nodes at depth < R (their ball neighborhoods are complete)."""
        return self.depth < self.radius

    def projection_id(self, node: int) -> str:
        return self.graph.vertices[self.proj[node]]

    def edge_id(self, node: int) -> str | None:
        """Base-graph edge id used from the parent (None at the root)."""
        if self.ein[node] < 0:
            return None
        return self.graph.edges[self.ein[node] // 2][0]

    def ball_degrees(self) -> np.ndarray:
        """Degree of each node inside the ball (parent link + children)."""
        deg = np.bincount(self.parent[1:], minlength=self.n_nodes)
        deg[1:] += 1
        return deg


@dataclass(frozen=True)
class LiftedVector:
    """Real vector on ball nodes with an explicit support index set."""

    values: np.ndarray
    support: np.ndarray


def lifted(values: np.ndarray) -> LiftedVector:
    values = np.asarray(values, dtype=float)
    return LiftedVector(values=values, support=np.flatnonzero(values))


def build_ball(graph: FiniteGraph, params: JacobiParams, base: str, radius: int,
               node_budget: int = 5_000_000) -> TreeBall:
    """Breadth-first non-backtracking enumeration out to the given radius.

    The root expands along every incident edge; every other node expands
    along every incident edge of its projection except the one it was
    reached through (parallel edges are distinct continuations).
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    ig = indexed(graph, params)
    order = np.argsort(ig.tail, kind="stable")
    out_ptr = np.zeros(graph.p + 1, dtype=np.int64)
    np.cumsum(np.bincount(ig.tail, minlength=graph.p), out=out_ptr[1:])
    base_idx = graph.index(base)

    proj_lvl = [np.array([base_idx], dtype=np.int64)]
    ein_lvl = [np.array([-1], dtype=np.int64)]
    parent_lvl = [np.array([-1], dtype=np.int64)]
    level_ptr = [0, 1]
    total = 1
    for _ in range(radius):
        parent_pos, edge = _kernels.expand_frontier(
            proj_lvl[-1], ein_lvl[-1], out_ptr, order, ig.head)
        if edge.shape[0] == 0:
            break
        total += edge.shape[0]
        if total > node_budget:
            raise BallBudgetError(
                f"ball around {base!r} exceeds the node budget "
                f"({total} > {node_budget}) at depth {len(level_ptr) - 1}")
        proj_lvl.append(ig.head[edge])
        ein_lvl.append(edge)
        parent_lvl.append(level_ptr[-2] + parent_pos)
        level_ptr.append(total)

    proj = np.concatenate(proj_lvl)
    ein = np.concatenate(ein_lvl)
    parent = np.concatenate(parent_lvl)
    depth = np.repeat(np.arange(len(proj_lvl), dtype=np.int64), np.diff(level_ptr))
    a_par = np.zeros(total)
    a_par[1:] = ig.a[ein[1:] // 2]
    return TreeBall(
        graph=graph, base=base, radius=radius, proj=proj, parent=parent,
        ein=ein, depth=depth, level_ptr=np.asarray(level_ptr, dtype=np.int64),
        a_par=a_par, b_node=ig.b[proj],
    )


def _matvec(ball: TreeBall, v: np.ndarray) -> np.ndarray:
    out = ball.b_node * v
    if ball.n_nodes > 1:
        ap = ball.a_par[1:]
        par = ball.parent[1:]
        out[1:] += ap * v[par]
        out += np.bincount(par, weights=ap * v[1:], minlength=ball.n_nodes)
    return out


def apply_H(ball: TreeBall, v: LiftedVector) -> LiftedVector:
    """Action of the lifted operator; exact for interior-supported input.

    (Hv)(x) = b(x) v(x) + sum over ball edges at x of a * v(neighbor).
    Raises when the support touches the boundary shell, where truncation
    would make the result differ from the infinite-tree action.
    """
    if v.support.size and np.any(ball.depth[v.support] >= ball.radius):
        raise ValueError("support touches the boundary shell; result would be truncated")
    return lifted(_matvec(ball, v.values))


def lift_psi(ball: TreeBall, psi: Mapping[str, float]) -> LiftedVector:
    """Pull a base-graph vector back through the covering projection."""
    table = np.array([psi[v] for v in ball.graph.vertices])
    return lifted(table[ball.proj])


def lanczos_top(ball: TreeBall, max_iter: int = 300, ritz_tol: float = 1e-12) -> float:
    """Largest eigenvalue of the ball compression of H.

    Lanczos with full reorthogonalization from the all-ones vector, stopping
    on Ritz-value stabilization, iteration cap, or invariant-subspace
    breakdown.  A compression of H is bounded above by it, so the result is
    a lower bound for the spectral supremum, nondecreasing in the radius.
    """
    n = ball.n_nodes
    if n == 1:
        return float(ball.b_node[0])
    scale = np.abs(ball.b_node).max() + np.abs(ball.a_par).max() + 1.0
    q = np.full(n, 1.0 / np.sqrt(n))
    basis = [q]
    alphas: list[float] = []
    betas: list[float] = []
    top = -np.inf
    for k in range(min(max_iter, n)):
        w = _matvec(ball, q)
        alphas.append(float(q @ w))
        for _ in range(2):  # two Gram-Schmidt passes keep full orthogonality
            for qi in basis:
                w -= (qi @ w) * qi
        tmat = np.diag(alphas)
        if betas:
            off = np.arange(len(betas))
            tmat[off, off + 1] = betas
            tmat[off + 1, off] = betas
        new_top = float(np.linalg.eigvalsh(tmat)[-1])
        stable = abs(new_top - top) < ritz_tol
        top = new_top
        if stable:
            break
        beta = float(np.linalg.norm(w))
        if beta < 1e-14 * scale:
            break  # invariant subspace: the Ritz value is exact
        betas.append(beta)
        q = w / beta
        basis.append(q)
    return top


def ground_state_identity(ball: TreeBall, psi: Mapping[str, float],
                          f: LiftedVector, sigma: float) -> tuple[float, float]:
    """Both sides of the weighted Dirichlet-form identity.

    lhs = <f psi, (sigma - H)(f psi)>; rhs = sum over ball edges of
    a * psi_x * psi_y * (f_x - f_y)^2.  For f supported at depth <= R-2
    both are exact (the operator never sees the truncation), so they agree
    to rounding for a genuine eigenpair (sigma, psi).
    """
    if f.support.size and np.any(ball.depth[f.support] > ball.radius - 2):
        raise ValueError("f must be supported on nodes of depth <= R-2")
    psil = lift_psi(ball, psi).values
    fpsi = f.values * psil
    hfpsi = apply_H(ball, lifted(fpsi)).values
    lhs = float(sigma * (fpsi @ fpsi) - fpsi @ hfpsi)
    par = ball.parent[1:]
    diffs = f.values[1:] - f.values[par]
    rhs = float(np.sum(ball.a_par[1:] * psil[1:] * psil[par] * diffs * diffs))
    return lhs, rhs
