"""The radially symmetric kernel eigenfunction of the biregular tree.

On the (r,g)-biregular tree centered at a red vertex, the vector that is
(-1/(r-1))^k on even levels 2k and zero on odd levels is square-summable
and annihilated by H; it generates the point mass at zero energy.  This
module builds it on finite balls, checks the norm identity, the kernel
equation, the Green's function residue at zero, and the DOS weight.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cover import apply_H, build_ball, lifted
from .graphs import rg_model
from .green_models import LimitInconsistencyError, RGModel, _evaluate_raw, _richardson


def _check_rg(r: int, g: int) -> None:
    if not (isinstance(r, int) and isinstance(g, int) and r > g >= 2):
        raise ValueError("need integers r > g >= 2")


@dataclass(frozen=True)
class RgEigenfunction:
    """Radial profile of the kernel vector on levels 0..2K.

    ``values[l]`` is the common value on level l (zero on odd levels) and
    ``counts[l]`` the level population of the tree centered at a red
    vertex: level 2k-1 holds g[(r-1)(g-1)]^(k-1) nodes and level 2k holds
    g(r-1)[(r-1)(g-1)]^(k-1) (k >= 1).
    """

    r: int
    g: int
    K: int
    values: np.ndarray
    counts: np.ndarray


def build_u(r: int, g: int, K: int) -> RgEigenfunction:
    """Radial kernel eigenfunction truncated at level 2K."""
    _check_rg(r, g)
    if K < 1:
        raise ValueError("need K >= 1")
    values = np.zeros(2 * K + 1)
    counts = np.zeros(2 * K + 1, dtype=np.int64)
    counts[0] = 1
    values[0] = 1.0
    for k in range(1, K + 1):
        branch = ((r - 1) * (g - 1)) ** (k - 1)
        counts[2 * k - 1] = g * branch
        counts[2 * k] = g * (r - 1) * branch
        values[2 * k] = (-1.0 / (r - 1)) ** k
    return RgEigenfunction(r=r, g=g, K=K, values=values, counts=counts)


def u_norm_sq(r: int, g: int, K: int) -> tuple[float, float]:
    """Partial squared norm through level 2K and its closed-form limit.

    The even-level contributions form a geometric series with ratio
    (g-1)/(r-1), so the limit is 1 + g/(r-g) = r/(r-g).
    """
    u = build_u(r, g, K)
    partial = float(np.sum(u.counts * u.values**2))
    return partial, r / (r - g)


def verify_Hu_zero(r: int, g: int, K: int) -> float:
    """Max |Hu| over nodes of depth <= 2K-2 on the depth-2K ball.

    The vector is truncated to the ball interior before applying the
    operator (its shell level 2K is even and nonzero), which leaves the
    action exact at all reported depths.
    """
    _check_rg(r, g)
    if K < 2:
        raise ValueError("need K >= 2")
    graph, params = rg_model(r, g)
    ball = build_ball(graph, params, "r0", 2 * K)
    u = build_u(r, g, K)
    vals = u.values[ball.depth]
    vals[ball.depth >= 2 * K] = 0.0
    hu = apply_H(ball, lifted(vals)).values
    return float(np.abs(hu[ball.depth <= 2 * K - 2]).max())


def residue_check(r: int, g: int) -> tuple[float, float]:
    """Residue of the red-site Green's function at z = 0 vs -(r-g)/r.

    The residue is the limit of z*G_r(z) along z = i*10^-k, k = 2..8,
    Richardson-extrapolated; the expected value is -1/norm^2 with the
    kernel eigenfunction normalized to 1 at the root.
    """
    _check_rg(r, g)
    model = RGModel(r, g, "red")
    samples = []
    for k in range(2, 9):
        z = 1j * 10.0 ** (-k)
        samples.append(z * _evaluate_raw(model, z, "I"))
    res, check = _richardson(samples)
    if abs(res - check) > 1e-8 * (1.0 + abs(res)):
        raise LimitInconsistencyError(
            f"residue limit along the imaginary axis is inconsistent: {res} vs {check}")
    return float(res.real), -(r - g) / r


def dos_zero_weight(r: int, g: int) -> float:
    """DOS point mass at zero via residues: (r*w_red + g*w_green)/(r+g).

    w_site = -residue of G_site at 0; the green residue vanishes (the
    Green's function is regular there) but is computed, not assumed.
    """
    _check_rg(r, g)
    weights = []
    for site in ("red", "green"):
        model = RGModel(r, g, site)
        samples = [1j * 10.0 ** (-k) * _evaluate_raw(model, 1j * 10.0 ** (-k), "I")
                   for k in range(2, 9)]
        res, check = _richardson(samples)
        if abs(res - check) > 1e-8 * (1.0 + abs(res)):
            raise LimitInconsistencyError(
                f"residue limit for the {site} site is inconsistent: {res} vs {check}")
        weights.append(-res.real)
    return (r * weights[0] + g * weights[1]) / (r + g)
