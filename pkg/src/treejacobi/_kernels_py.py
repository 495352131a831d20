"""Pure NumPy implementations of the numerical kernels.

Semantics match the compiled extension ``treejacobi._core`` exactly; this
module is what the package falls back to when the extension is missing or
``TREEJACOBI_PURE`` is set.  The hot loop (the damped half-tree recursion)
is vectorized over the energy grid with active-set compaction so that
converged energies drop out of the batch.
"""

from __future__ import annotations

import numpy as np


def m_fixed_point(z, b, tail, head, a2_dir, theta, tol, max_iter, m0=None):
    """Damped fixed-point iteration for the half-tree Green's functions.

    Parameters
    ----------
    z : (nz,) complex array of spectral parameters.
    b : (p,) vertex potentials.
    tail, head : (2q,) int64 endpoints of the directed edges; directed edge
        ``e ^ 1`` is the reversal of ``e``.
    a2_dir : (2q,) squared edge weights per directed edge.
    theta : damping weight on the new iterate.
    tol : relative per-component update tolerance; an energy is converged
        once every update satisfies ``|dm| <= tol * (1 + |m|)``.
    max_iter : iteration cap.
    m0 : optional (nz, 2q) starting values; default is ``-1/z`` everywhere.

    Returns
    -------
    m : (nz, 2q) complex final iterates.
    S : (nz, p) complex vertex sums ``S[v] = sum a^2 m`` over directed
        edges with tail ``v`` (so the full-tree diagonal Green's function
        is ``1 / (b - z - S)``).
    niter : (nz,) iterations consumed per energy.
    ok : (nz,) convergence flags.
    """
    z = np.ascontiguousarray(z, dtype=np.complex128)
    nz = z.shape[0]
    ndir = tail.shape[0]
    p = b.shape[0]
    rev = np.arange(ndir) ^ 1
    bh = b[head]
    agg = np.zeros((ndir, p))
    agg[np.arange(ndir), tail] = 1.0
    if m0 is None:
        with np.errstate(divide="ignore", invalid="ignore"):
            mall = np.repeat((-1.0 / z)[:, None], ndir, axis=1)
    else:
        mall = np.array(m0, dtype=np.complex128, copy=True)
    niter = np.full(nz, 0, dtype=np.int64)
    ok = np.zeros(nz, dtype=bool)
    active = np.arange(nz)
    m_act = mall[active].copy()
    z_act = z[active]
    it = 0
    while active.size and it < max_iter:
        it += 1
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            s = (m_act * a2_dir) @ agg
            denom = bh[None, :] - z_act[:, None] - s[:, head] + a2_dir * m_act[:, rev]
            m_new = (1.0 - theta) * m_act + theta / denom
            good = np.abs(m_new - m_act) <= tol * (1.0 + np.abs(m_new))
        rowdone = good.all(axis=1)
        m_act = m_new
        if rowdone.any():
            idx = active[rowdone]
            mall[idx] = m_act[rowdone]
            niter[idx] = it
            ok[idx] = True
            keep = ~rowdone
            active = active[keep]
            m_act = m_act[keep]
            z_act = z_act[keep]
    if active.size:
        mall[active] = m_act
        niter[active] = it
    with np.errstate(invalid="ignore", over="ignore"):
        s_final = (mall * a2_dir) @ agg
    return mall, s_final, niter, ok


def jacobi_eigh(mat, tol_scale=1e-13, max_sweeps=60):
    """Cyclic-by-row Jacobi rotation eigensolver for a real symmetric matrix.

    Sweeps rotate every strictly-upper pair in row order until the
    off-diagonal Frobenius norm falls below ``tol_scale`` times the
    Frobenius norm of the input.  Returns eigenvalues in ascending order
    and the orthogonal matrix whose columns are the eigenvectors.
    """
    a = np.array(mat, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    norm = np.linalg.norm(a)
    if norm == 0.0 or n == 1:
        order = np.argsort(np.diag(a), kind="stable")
        return np.diag(a)[order], v[:, order]
    thresh = tol_scale * norm
    skip = 0.1 * thresh / (n * n)
    for _ in range(max_sweeps):
        # sum only the off-diagonal squares; subtracting the diagonal from
        # the full Frobenius norm would leave cancellation noise far above
        # the threshold long after the rotations have converged
        upper = np.triu(a, 1)
        off2 = 2.0 * np.sum(upper * upper)
        if off2 <= thresh * thresh:
            break
        for i in range(n - 1):
            for j in range(i + 1, n):
                apq = a[i, j]
                if abs(apq) <= skip:
                    continue
                tau = (a[j, j] - a[i, i]) / (2.0 * apq)
                t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0.0 else 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                row_i, row_j = a[i, :].copy(), a[j, :].copy()
                a[i, :] = c * row_i - s * row_j
                a[j, :] = s * row_i + c * row_j
                col_i, col_j = a[:, i].copy(), a[:, j].copy()
                a[:, i] = c * col_i - s * col_j
                a[:, j] = s * col_i + c * col_j
                a[i, j] = a[j, i] = 0.0
                vi, vj = v[:, i].copy(), v[:, j].copy()
                v[:, i] = c * vi - s * vj
                v[:, j] = s * vi + c * vj
    else:
        raise RuntimeError("jacobi rotations failed to converge")
    eig = np.diag(a).copy()
    order = np.argsort(eig, kind="stable")
    return eig[order], v[:, order]


def expand_frontier(proj, ein, out_ptr, out_edge, head):
    """Expand one level of the non-backtracking ball BFS.

    ``proj`` holds the base-graph projections of the current frontier nodes
    and ``ein`` the directed edge each node was entered through (-1 at the
    root).  Children are all directed edges leaving the projection except
    the reversal of the entering edge.  Returns ``(parent_pos, edge)``
    arrays: positions into the frontier and the directed edge leading to
    each child (whose projection is ``head[edge]``).
    """
    proj = np.asarray(proj, dtype=np.int64)
    ein = np.asarray(ein, dtype=np.int64)
    starts = out_ptr[proj]
    counts = out_ptr[proj + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    parent_pos = np.repeat(np.arange(proj.shape[0], dtype=np.int64), counts)
    offsets = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(counts) - counts, counts)
    cand = out_edge[starts[parent_pos] + offsets]
    keep = cand != (ein[parent_pos] ^ 1)
    return parent_pos[keep], cand[keep]
