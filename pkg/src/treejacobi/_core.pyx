# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: damped half-tree recursion, Jacobi rotations, ball BFS.

Drop-in replacements for ``treejacobi._kernels_py`` with identical call
signatures and return conventions.  The fixed-point kernel iterates each
energy independently in tight C loops, so cheap energies exit early instead
of riding along with the stiffest one in the batch.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, hypot, sqrt

cnp.import_array()


def m_fixed_point(z, b, tail, head, a2_dir, double theta, double tol,
                  long max_iter, m0=None):
    """See ``treejacobi._kernels_py.m_fixed_point``."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zz = \
        np.ascontiguousarray(z, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bb = \
        np.ascontiguousarray(b, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] tl = \
        np.ascontiguousarray(tail, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] hd = \
        np.ascontiguousarray(head, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a2 = \
        np.ascontiguousarray(a2_dir, dtype=np.float64)
    cdef Py_ssize_t nz = zz.shape[0]
    cdef Py_ssize_t ndir = tl.shape[0]
    cdef Py_ssize_t p = bb.shape[0]

    cdef cnp.ndarray[cnp.complex128_t, ndim=2] m_out = \
        np.empty((nz, ndir), dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] s_out = \
        np.zeros((nz, p), dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] niter = np.zeros(nz, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] ok = np.zeros(nz, dtype=np.uint8)

    cdef cnp.ndarray[cnp.complex128_t, ndim=2] m0a
    cdef bint have_m0 = m0 is not None
    if have_m0:
        m0a = np.ascontiguousarray(m0, dtype=np.complex128)

    cdef double complex[::1] cur = np.empty(ndir, dtype=np.complex128)
    cdef double complex[::1] nxt = np.empty(ndir, dtype=np.complex128)
    cdef double complex[::1] svec = np.empty(p, dtype=np.complex128)

    cdef Py_ssize_t i, k, v
    cdef long it
    cdef bint bad
    cdef double complex zi, denom, mn, diff
    cdef double one_minus = 1.0 - theta

    for i in range(nz):
        zi = zz[i]
        if have_m0:
            for k in range(ndir):
                cur[k] = m0a[i, k]
        else:
            for k in range(ndir):
                cur[k] = -1.0 / zi
        it = 0
        while it < max_iter:
            it += 1
            for v in range(p):
                svec[v] = 0
            for k in range(ndir):
                svec[tl[k]] = svec[tl[k]] + a2[k] * cur[k]
            bad = 0
            for k in range(ndir):
                denom = bb[hd[k]] - zi - svec[hd[k]] + a2[k] * cur[k ^ 1]
                mn = one_minus * cur[k] + theta / denom
                diff = mn - cur[k]
                if not (hypot(diff.real, diff.imag)
                        <= tol * (1.0 + hypot(mn.real, mn.imag))):
                    bad = 1
                nxt[k] = mn
            cur, nxt = nxt, cur
            if not bad:
                break
        for k in range(ndir):
            m_out[i, k] = cur[k]
            s_out[i, tl[k]] = s_out[i, tl[k]] + a2[k] * cur[k]
        niter[i] = it
        ok[i] = not bad

    return m_out, s_out, niter, ok.view(np.bool_)


def jacobi_eigh(mat, double tol_scale=1e-13, int max_sweeps=60):
    """See ``treejacobi._kernels_py.jacobi_eigh``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] a = np.array(mat, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] v = np.eye(n)
    cdef double norm = np.linalg.norm(a)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] eig
    cdef cnp.ndarray[cnp.int64_t, ndim=1] order
    if norm == 0.0 or n == 1:
        eig = np.diag(a).copy()
        order = np.argsort(eig, kind="stable")
        return eig[order], v[:, order]
    cdef double thresh = tol_scale * norm
    cdef double skip = 0.1 * thresh / (n * n)
    cdef double off2, apq, tau, t, c, s, xi, xj
    cdef Py_ssize_t i, j, k
    cdef int sweep
    cdef bint converged = 0
    for sweep in range(max_sweeps):
        off2 = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off2 += 2.0 * a[i, j] * a[i, j]
        if off2 <= thresh * thresh:
            converged = 1
            break
        for i in range(n - 1):
            for j in range(i + 1, n):
                apq = a[i, j]
                if fabs(apq) <= skip:
                    continue
                tau = (a[j, j] - a[i, i]) / (2.0 * apq)
                if tau != 0.0:
                    t = (1.0 if tau > 0.0 else -1.0) / (fabs(tau) + hypot(1.0, tau))
                else:
                    t = 1.0
                c = 1.0 / hypot(1.0, t)
                s = t * c
                for k in range(n):
                    xi = a[i, k]
                    xj = a[j, k]
                    a[i, k] = c * xi - s * xj
                    a[j, k] = s * xi + c * xj
                for k in range(n):
                    xi = a[k, i]
                    xj = a[k, j]
                    a[k, i] = c * xi - s * xj
                    a[k, j] = s * xi + c * xj
                a[i, j] = 0.0
                a[j, i] = 0.0
                for k in range(n):
                    xi = v[k, i]
                    xj = v[k, j]
                    v[k, i] = c * xi - s * xj
                    v[k, j] = s * xi + c * xj
    if not converged:
        off2 = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off2 += 2.0 * a[i, j] * a[i, j]
        if off2 > thresh * thresh:
            raise RuntimeError("jacobi rotations failed to converge")
    eig = np.diag(a).copy()
    order = np.argsort(eig, kind="stable")
    return eig[order], v[:, order]


def expand_frontier(proj, ein, out_ptr, out_edge, head):
    """See ``treejacobi._kernels_py.expand_frontier``."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] pr = \
        np.ascontiguousarray(proj, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] en = \
        np.ascontiguousarray(ein, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ptr = \
        np.ascontiguousarray(out_ptr, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] oe = \
        np.ascontiguousarray(out_edge, dtype=np.int64)
    cdef Py_ssize_t nf = pr.shape[0]
    cdef Py_ssize_t i, j, total = 0
    for i in range(nf):
        total += ptr[pr[i] + 1] - ptr[pr[i]]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] parent_pos = np.empty(total, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] edge = np.empty(total, dtype=np.int64)
    cdef Py_ssize_t out = 0
    cdef long back, e
    for i in range(nf):
        back = en[i] ^ 1
        for j in range(ptr[pr[i]], ptr[pr[i] + 1]):
            e = oe[j]
            if e != back:
                parent_pos[out] = i
                edge[out] = e
                out += 1
    return parent_pos[:out], edge[:out]
