"""Self-consistent half-tree Green's functions, DOS, and spectra.

The diagonal resolvent of a periodic Jacobi operator on a tree factors
through half-tree resolvents, one per directed edge of the base graph;
periodicity closes them into a 2q-dimensional fixed-point system.  Solving
it (damped iteration plus a Newton fallback for stiff energies near band
edges) makes the infinite-tree spectrum a finite computation: the scan
extrapolates smoothed densities of states in the broadening parameter,
locates point masses from the eps*Im G limit, and refines band edges by
bisection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .graphs import FiniteGraph, IndexedGraph, JacobiParams, indexed
from .spectral import gershgorin_bound, perron


class SolverError(RuntimeError):
    """Fixed point and Newton fallback both failed, or too many grid failures."""


@dataclass(frozen=True)
class MVector:
    """Half-tree resolvents at spectral parameter z.

    ``m`` is keyed by (edge id, head vertex id): the value for the directed
    copy of that edge oriented toward the given vertex, i.e. the diagonal
    resolvent at the head of the half-tree obtained by cutting the edge
    back toward the tail.  Herglotz: Im m > 0 whenever Im z > 0.
    """

    z: complex
    m: dict[tuple[str, str], complex]


@dataclass(frozen=True)
class SpectrumReport:
    """Bands, point masses, and the spectral extrema of the tree operator.

    ``grid_x``/``grid_density`` hold the extrapolated (atom-subtracted)
    scan profile; ``grid_density_eps`` keeps the raw smoothed densities per
    broadening for serialization and diagnostics.
    """

    bands: tuple[tuple[float, float], ...]
    point_masses: tuple[tuple[float, float], ...]
    Sigma: float
    Sigma_minus: float
    grid_x: np.ndarray = field(repr=False, compare=False, default=None)
    grid_density: np.ndarray = field(repr=False, compare=False, default=None)
    grid_density_eps: dict = field(repr=False, compare=False, default=None)


# ---------------------------------------------------------------------------
# solver core


def _newton(ig: IndexedGraph, z: complex, m0: np.ndarray, tol: float,
            max_steps: int = 60) -> tuple[np.ndarray, bool]:
    """Newton's method on the residual F_e = m_e * D_e(m) - 1.

    D_e is the denominator of the recursion at the head of e.  The Jacobian
    couples e to the directed edges leaving its head (minus the reversal),
    a dense 2q x 2q complex system small enough to solve directly.
    """
    ndir = m0.shape[0]
    rev = np.arange(ndir) ^ 1
    tail, head, a2 = ig.tail, ig.head, ig.a2_dir
    couple = head[:, None] == tail[None, :]
    couple[np.arange(ndir), rev] = False

    def residual(mv):
        s = np.zeros(ig.p, dtype=np.complex128)
        np.add.at(s, tail, a2 * mv)
        d = ig.b[head] - z - s[head] + a2 * mv[rev]
        return mv * d - 1.0, d

    def at_floor(mv, fv):
        # |mD - 1| cannot round below eps * (size of the summands in mD);
        # a residual at that floor is as converged as the arithmetic allows,
        # even when the line search can no longer decrease it strictly.
        mmax = np.abs(mv).max()
        scale = 1.0 + mmax * (abs(z) + np.abs(ig.b).max()
                              + (1.0 + a2.max() * mmax) * (1.0 + ndir))
        return np.abs(fv).max() <= 256.0 * np.finfo(float).eps * scale

    m = m0.copy()
    if not np.all(np.isfinite(m)):
        m = np.full(ndir, -1.0 / (z if z != 0 else 1e-3j), dtype=np.complex128)
    f, d = residual(m)
    for _ in range(max_steps):
        if at_floor(m, f):
            return m, True
        jac = np.diag(d) - (m[:, None] * a2[None, :]) * couple
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return m, False
        fnorm = np.abs(f).max()
        alpha = 1.0
        for _ in range(30):
            trial = m + alpha * step
            f_new, d_new = residual(trial)
            if np.abs(f_new).max() < fnorm:
                break
            alpha *= 0.5
        else:
            return m, False
        m, f, d = trial, f_new, d_new
        if alpha == 1.0 and np.all(np.abs(step) <= tol * (1.0 + np.abs(m))):
            return m, True
    return m, at_floor(m, f)


def _scatter_s(ig: IndexedGraph, m: np.ndarray) -> np.ndarray:
    s = np.zeros(ig.p, dtype=np.complex128)
    np.add.at(s, ig.tail, ig.a2_dir * m)
    return s


def _grid_solve(ig: IndexedGraph, zs: np.ndarray, theta: float = 0.5,
                tol: float = 1e-13, max_iter: int = 100_000,
                ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Solve the directed-edge system at every z; Newton rescues stragglers.

    Returns (m, S, ok) where S[v] sums a^2 m over edges leaving v.  When
    Im z > 0 the Herglotz property (Im m > 0) is part of "ok".
    """
    zs = np.ascontiguousarray(zs, dtype=np.complex128)
    m, s, _, ok = _kernels.m_fixed_point(
        zs, ig.b, ig.tail, ig.head, ig.a2_dir, theta, tol, max_iter)
    ok = np.array(ok, dtype=bool)
    for i in np.flatnonzero(~ok):
        mi, success = _newton(ig, complex(zs[i]), m[i], tol)
        if success:
            m[i] = mi
            s[i] = _scatter_s(ig, mi)
            ok[i] = True
    upper = zs.imag > 0
    if upper.any():
        herglotz = (m.imag > 0).all(axis=1)
        ok &= herglotz | ~upper
    return m, s, ok


def solve_m(graph: FiniteGraph, params: JacobiParams, z: complex, *,
            theta: float = 0.5, tol: float = 1e-13,
            max_iter: int = 100_000) -> MVector:
    """Half-tree resolvents at a single z with Im z > 0 or real z off spectrum.

    Damped fixed-point iteration (new = (1-theta) old + theta F(old)) from
    m = -1/z, converged when every update is below tol relative to
    1 + |m|; Newton on the full directed-edge system is the fallback when
    the iteration cap runs out near band edges.
    """
    ig = indexed(graph, params)
    m, _, ok = _grid_solve(ig, np.array([z], dtype=np.complex128), theta, tol, max_iter)
    if not ok[0]:
        raise SolverError(f"half-tree recursion did not converge at z = {z}")
    values: dict[tuple[str, str], complex] = {}
    for k, (eid, _, _) in enumerate(graph.edges):
        values[(eid, graph.vertices[ig.head[2 * k]])] = complex(m[0, 2 * k])
        values[(eid, graph.vertices[ig.head[2 * k + 1]])] = complex(m[0, 2 * k + 1])
    return MVector(z=complex(z), m=values)


def green_diag(graph: FiniteGraph, params: JacobiParams, z: complex,
               vertex: str, **solver_kw) -> complex:
    """Diagonal Green's function G_v(z) = <delta_v, (H - z)^-1 delta_v>.

    Assembled from the half-tree resolvents over the edges leaving v.
    """
    mv = solve_m(graph, params, z, **solver_kw)
    acc = 0.0 + 0.0j
    for eid, u, w in graph.edges:
        for here, there in ((u, w), (w, u)):
            if here == vertex:
                acc += params.a[eid] ** 2 * mv.m[(eid, there)]
    return 1.0 / (params.b[vertex] - mv.z - acc)


def _densities(ig: IndexedGraph, zs: np.ndarray, s: np.ndarray) -> np.ndarray:
    g = 1.0 / (ig.b[None, :] - zs[:, None] - s)
    return g.imag.sum(axis=1) / (ig.p * np.pi)


def dos_density(graph: FiniteGraph, params: JacobiParams, x: float,
                eps: float) -> float:
    """Smoothed density of states: (1/p) sum_v Im G_v(x + i eps) / pi."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    ig = indexed(graph, params)
    zs = np.array([x + 1j * eps], dtype=np.complex128)
    _, s, ok = _grid_solve(ig, zs)
    if not ok[0]:
        raise SolverError(f"solver failed at z = {x} + {eps}i")
    return float(_densities(ig, zs, s)[0])


# ---------------------------------------------------------------------------
# spectrum scan


def _grid_density_with_failures(ig, xs, eps):
    zs = xs + 1j * eps
    _, s, ok = _grid_solve(ig, zs)
    dens = _densities(ig, zs, s)
    if not ok.all():
        good = np.flatnonzero(ok)
        bad = np.flatnonzero(~ok)
        if good.size:
            dens[bad] = np.interp(xs[bad], xs[good], dens[good])
    return dens, ok


def _solve_density_at(ig, xvals, eps_pair, atoms):
    """Atom-corrected two-point extrapolated density at arbitrary points."""
    xvals = np.asarray(xvals, dtype=float)
    e1, e2 = max(eps_pair), min(eps_pair)
    out = {}
    for eps in (e1, e2):
        zs = xvals + 1j * eps
        _, s, ok = _grid_solve(ig, zs)
        if not ok.all():
            bad = xvals[~ok]
            raise SolverError(
                f"solver failed during refinement at {bad[:5]} (eps={eps})")
        d = _densities(ig, zs, s)
        for x0, w in atoms:
            d -= (w / np.pi) * eps / ((xvals - x0) ** 2 + eps ** 2)
        out[eps] = d
    return out[e2] + (out[e2] - out[e1]) * e2 / (e1 - e2)


def _refine_atom(ig, lo, hi, eps, steps=60):
    """Ternary search for the peak of the smoothed density (atom center)."""
    for _ in range(steps):
        x1 = lo + (hi - lo) / 3.0
        x2 = hi - (hi - lo) / 3.0
        zs = np.array([x1 + 1j * eps, x2 + 1j * eps])
        _, s, ok = _grid_solve(ig, zs)
        if not ok.all():
            raise SolverError(f"solver failed while locating a point mass near {lo}")
        d = _densities(ig, zs, s)
        if d[0] < d[1]:
            lo = x1
        else:
            hi = x2
        if hi - lo < 1e-10:
            break
    return 0.5 * (lo + hi)


def _atom_weight(ig, x0, eps):
    """Richardson limit of eps * pi * density, i.e. (1/p) sum eps Im G_v."""
    vals = []
    for e in (eps, eps / 10.0):
        zs = np.array([x0 + 1j * e])
        _, s, ok = _grid_solve(ig, zs)
        if not ok[0]:
            raise SolverError(f"solver failed at point-mass candidate {x0}")
        vals.append(e * np.pi * _densities(ig, zs, s)[0])
    w1, w2 = vals
    return (10.0 * w2 - w1) / 9.0


def _runs(mask):
    """(start, stop) index pairs of maximal True runs."""
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate([[idx[0]], idx[breaks + 1]])
    stops = np.concatenate([idx[breaks], [idx[-1]]])
    return list(zip(starts, stops))


def spectrum_scan(graph: FiniteGraph, params: JacobiParams,
                  x_range: tuple[float, float] | None = None,
                  resolution: int = 2001,
                  eps_schedule: tuple[float, ...] = (1e-2, 1e-3, 1e-4), *,
                  band_threshold: float = 1e-6, edge_tol: float = 1e-6,
                  atom_threshold: float = 0.02,
                  refine_eps: tuple[float, float] = (1e-5, 1e-6),
                  max_failure_fraction: float = 0.01) -> SpectrumReport:
    """Locate the spectrum of the lifted operator on the covering tree.

    Smoothed densities of states are computed on a grid for every eps in
    the schedule and the two smallest are linearly extrapolated to eps=0.
    Point masses announce themselves through eps*Im G tending to a positive
    limit; their Lorentzian profile is subtracted before thresholding the
    extrapolated density into bands, whose edges are then bisected down to
    ``edge_tol`` using a finer eps pair (the coarse pair's extrapolation
    tail would bias edges outward by more than the advertised accuracy).
    Sigma and Sigma_minus are read off the band ends and point masses.
    """
    if resolution < 10:
        raise ValueError("resolution must be at least 10")
    if len(eps_schedule) < 2:
        raise ValueError("eps schedule needs at least two values")
    sigma = perron(graph, params).sigma
    bound = gershgorin_bound(graph, params)
    if x_range is None:
        x_range = (-bound - 1.0, bound + 1.0)
    lo, hi = float(x_range[0]), float(x_range[1])
    if lo > -sigma - 1.0 + 1e-9 or hi < sigma + 1.0 - 1e-9:
        raise ValueError(
            f"scan range [{lo}, {hi}] must contain [{-sigma - 1:.6g}, {sigma + 1:.6g}]")

    ig = indexed(graph, params)
    xs = np.linspace(lo, hi, resolution)
    schedule = sorted((float(e) for e in eps_schedule), reverse=True)
    dens: dict[float, np.ndarray] = {}
    failures = 0
    for eps in schedule:
        d, ok = _grid_density_with_failures(ig, xs, eps)
        failures += int((~ok).sum())
        dens[eps] = d
    if failures > max_failure_fraction * resolution * len(schedule):
        raise SolverError(
            f"solver failed on {failures} of {resolution * len(schedule)} "
            f"grid evaluations; spectrum scan aborted")

    e_big, e_mid, e_small = schedule[0], schedule[-2], schedule[-1]

    # point masses: the eps*Im G limit survives smoothing at the largest eps
    atoms: list[tuple[float, float]] = []
    h = xs[1] - xs[0]
    signal = e_big * np.pi * dens[e_big]
    for start, stop in _runs(signal > atom_threshold):
        center = xs[start + int(np.argmax(signal[start:stop + 1]))]
        x0 = _refine_atom(ig, center - h, center + h, e_small)
        w = _atom_weight(ig, x0, e_small)
        if w > atom_threshold:
            atoms.append((float(x0), float(w)))

    # subtract atom Lorentzians, extrapolate, threshold into candidate bands
    corrected = {}
    for eps in (e_mid, e_small):
        d = dens[eps].copy()
        for x0, w in atoms:
            d -= (w / np.pi) * eps / ((xs - x0) ** 2 + eps ** 2)
        corrected[eps] = d
    extrapolated = corrected[e_small] + (
        corrected[e_small] - corrected[e_mid]) * e_small / (e_mid - e_small)
    mask = extrapolated > band_threshold
    atom_window = 0.02
    for x0, _ in atoms:
        mask &= np.abs(xs - x0) > atom_window

    spans = [(s, t) for s, t in _runs(mask) if xs[t] - xs[s] >= 2 * h]
    if not spans and not atoms:
        raise SolverError("no spectrum found in the scan range")

    # bisection refinement of every band edge with the finer eps pair
    brackets = []  # [outside x, inside x] per edge
    limits = []    # furthest the inside end may be walked (other end of run)
    for s, t in spans:
        brackets.append([xs[max(s - 1, 0)], xs[s]])
        limits.append(xs[t])
        brackets.append([xs[min(t + 1, resolution - 1)], xs[t]])
        limits.append(xs[s])
    brackets = np.array(brackets, dtype=float)
    if brackets.size:
        # The refinement indicator uses a firmer threshold than the band
        # mask: right at a sharp (inverse-square-root) edge the fine pair's
        # cubic extrapolation tail still clears 1e-6 a few 1e-4 into the
        # gap, which would park the bisection short of the true edge.
        refine_thr = max(band_threshold, 1e-4)

        def _fine_inside(x):
            return _solve_density_at(ig, np.array([x]), refine_eps, atoms)[0] > refine_thr

        # Re-anchor the brackets first: the coarse pair's tail leaks past
        # sharp edges by a distance set by eps (not by the grid step), so
        # the coarse mask can over- or undershoot an edge by several cells
        # and leave the crossing outside the bracket.  Walk geometrically
        # until the ends disagree under the fine indicator.
        for bk, lim in zip(brackets, limits):
            out_x, in_x = bk
            step = in_x - out_x  # points from outside the band toward it
            probe = step
            for _ in range(8):
                if not _fine_inside(out_x):
                    break
                out_x, in_x = out_x - probe, out_x
                probe *= 2
            probe = step
            for _ in range(8):
                if in_x == lim or _fine_inside(in_x):
                    break
                nxt = in_x + probe
                if (nxt - lim) * step > 0:
                    nxt = lim
                out_x, in_x = in_x, nxt
                probe *= 2
            bk[0], bk[1] = out_x, in_x
        while np.abs(brackets[:, 1] - brackets[:, 0]).max() > edge_tol:
            mids = 0.5 * (brackets[:, 0] + brackets[:, 1])
            inside = _solve_density_at(ig, mids, refine_eps, atoms) > refine_thr
            brackets[np.arange(len(mids)), inside.astype(int)] = mids
    bands = []
    for k, (s, t) in enumerate(spans):
        left = 0.5 * (brackets[2 * k][0] + brackets[2 * k][1])
        right = 0.5 * (brackets[2 * k + 1][0] + brackets[2 * k + 1][1])
        bands.append((float(left), float(right)))

    tops = [b[1] for b in bands] + [x for x, _ in atoms]
    bottoms = [b[0] for b in bands] + [x for x, _ in atoms]
    return SpectrumReport(
        bands=tuple(bands),
        point_masses=tuple(sorted(atoms)),
        Sigma=float(max(tops)),
        Sigma_minus=float(min(bottoms)),
        grid_x=xs,
        grid_density=extrapolated,
        grid_density_eps={eps: dens[eps] for eps in schedule},
    )
