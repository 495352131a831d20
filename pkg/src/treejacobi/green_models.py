"""Closed-form Green's functions of the three solvable covering models.

Each model's diagonal Green's function is algebraic: a rational expression
in z plus a radical.  Sheet I is the branch on which the radical behaves
like +z (or +z^2 for the quartic) as z -> +infinity along the real axis,
which is the Herglotz/resolvent branch; sheet II flips the radical's sign
and continues the function through the bands, where antibound states show
up as real poles outside the spectrum.

Radicals are assembled from products of sqrt(z - c) * sqrt(z + c) with the
principal square root, which places the branch cuts exactly on the
spectral bands and keeps evaluation stable near z = 0.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

_SHEETS = ("I", "II")


class PoleEvaluationError(ZeroDivisionError):
    """Evaluation requested exactly at a pole of the chosen sheet."""


class LimitInconsistencyError(RuntimeError):
    """The numeric limit sequence failed its consistency check."""


@dataclass(frozen=True)
class SheetedPoint:
    z: complex
    sheet: str = "I"

    def __post_init__(self):
        if self.sheet not in _SHEETS:
            raise ValueError(f"sheet must be 'I' or 'II', not {self.sheet!r}")


@dataclass(frozen=True)
class FreeModel:
    """Homogeneous degree-d tree, zero potential."""

    d: int

    def __post_init__(self):
        if self.d < 3:
            raise ValueError("free model needs d >= 3")


@dataclass(frozen=True)
class RGModel:
    """(r,g)-biregular tree; ``site`` picks the red (degree g) or green
    (degree r) vertex class."""

    r: int
    g: int
    site: str = "red"

    def __post_init__(self):
        if not (self.r > self.g >= 2):
            raise ValueError("rg model needs r > g >= 2")
        if self.site not in ("red", "green"):
            raise ValueError("site must be 'red' or 'green'")


@dataclass(frozen=True)
class AltBModel:
    """Degree-3 tree with alternating potential; ``site`` is the sign of b
    at the evaluation vertex."""

    b: float
    site: str = "plus"

    def __post_init__(self):
        if self.site not in ("plus", "minus"):
            raise ValueError("site must be 'plus' or 'minus'")


def _cut_sqrt(z: complex, c: float) -> complex:
    """sqrt(z^2 - c^2) with branch cut exactly [-c, c], ~ +z at infinity."""
    return cmath.sqrt(z - c) * cmath.sqrt(z + c)


def _sign(sheet: str) -> float:
    return 1.0 if sheet == "I" else -1.0


def _free_parts(d: int, z: complex, sheet: str) -> tuple[complex, complex]:
    radical = _sign(sheet) * d * _cut_sqrt(z, 2.0 * cmath.sqrt(d - 1.0).real)
    return (2.0 - d) * z + radical, 2.0 * (d * d - z * z)


def _rg_parts(r: int, g: int, site: str, z: complex, sheet: str) -> tuple[complex, complex]:
    eta_minus = abs(cmath.sqrt(r - 1.0).real - cmath.sqrt(g - 1.0).real)
    eta_plus = cmath.sqrt(r - 1.0).real + cmath.sqrt(g - 1.0).real
    root_phi = _sign(sheet) * _cut_sqrt(z, eta_minus) * _cut_sqrt(z, eta_plus)
    if site == "red":
        num = (2.0 - g) * z * z - g * ((r - g) - root_phi)
    else:
        num = (2.0 - r) * z * z - r * ((g - r) - root_phi)
    return num, 2.0 * z * (r * g - z * z)


def _alt_parts(b: float, site: str, z: complex, sheet: str) -> tuple[complex, complex]:
    top = cmath.sqrt(b * b + 8.0).real
    root_delta = _sign(sheet) * _cut_sqrt(z, abs(b)) * _cut_sqrt(z, top)
    num = (b * b - z * z) + 3.0 * root_delta
    linear = z - b if site == "plus" else z + b
    return num, 2.0 * linear * (9.0 - z * z + b * b)


def _parts(model, z: complex, sheet: str) -> tuple[complex, complex]:
    if isinstance(model, FreeModel):
        return _free_parts(model.d, z, sheet)
    if isinstance(model, RGModel):
        return _rg_parts(model.r, model.g, model.site, z, sheet)
    if isinstance(model, AltBModel):
        return _alt_parts(model.b, model.site, z, sheet)
    raise TypeError(f"unknown model {model!r}")


def _denominator_zeros(model) -> tuple[float, ...]:
    """Real zeros of the denominator: where poles or removable points live."""
    if isinstance(model, FreeModel):
        return (float(model.d), -float(model.d))
    if isinstance(model, RGModel):
        s = cmath.sqrt(model.r * model.g).real
        return (0.0, s, -s)
    sigma = cmath.sqrt(model.b * model.b + 9.0).real
    edge = model.b if model.site == "plus" else -model.b
    return (sigma, -sigma, float(edge))


def _richardson(values: list[complex]) -> tuple[complex, complex]:
    """Neville elimination for samples at h = 10^-2..10^-8.

    Returns the two most refined diagonal estimates so callers can check
    their consistency.
    """
    tableau = [list(values)]
    for j in range(1, len(values)):
        factor = 10.0 ** j
        prev = tableau[-1]
        tableau.append([
            (factor * prev[i + 1] - prev[i]) / (factor - 1.0)
            for i in range(len(prev) - 1)
        ])
    return tableau[-1][0], tableau[-2][-1]


def _evaluate_raw(model, z: complex, sheet: str) -> complex:
    num, den = _parts(model, z, sheet)
    return num / den


def _fill_limit(model, z0: float, sheet: str) -> complex:
    samples = [_evaluate_raw(model, z0 + 10.0 ** (-k), sheet) for k in range(2, 9)]
    best, check = _richardson(samples)
    if abs(best - check) > 1e-6:
        raise LimitInconsistencyError(
            f"limit of G at z0={z0} (sheet {sheet}) is inconsistent: "
            f"{best} vs {check}")
    return best


def evaluate(model, point: SheetedPoint) -> complex:
    """Sheeted evaluation with removable singularities filled by limits.

    A vanishing denominator is either a removable point (the numerator
    vanishes with it; the value is the Richardson limit along z0 + 10^-k)
    or a genuine pole of the chosen sheet, which raises.
    """
    z, sheet = complex(point.z), point.sheet
    z0 = min(_denominator_zeros(model), key=lambda c: abs(z - c))
    if abs(z - z0) >= 1e-8:
        num, den = _parts(model, z, sheet)
        return num / den
    num0, _ = _parts(model, complex(z0), sheet)
    if abs(num0) > 1e-7 * (1.0 + abs(z0)) ** 4:
        raise PoleEvaluationError(f"G has a pole at z = {z0} on sheet {sheet}")
    return _fill_limit(model, float(z0), sheet)


def eval_free(d: int, point: SheetedPoint) -> complex:
    """Green's function of the degree-d tree, b = 0, a = 1."""
    return evaluate(FreeModel(d), point)


def eval_rg(r: int, g: int, site: str, point: SheetedPoint) -> complex:
    """Green's function of the biregular tree at a red or green vertex."""
    return evaluate(RGModel(r, g, site), point)


def eval_alt(b: float, site: str, point: SheetedPoint) -> complex:
    """Green's function of the alternating-potential degree-3 tree."""
    return evaluate(AltBModel(b, site), point)


@dataclass(frozen=True)
class SheetFinding:
    """Behavior of one sheet at a candidate energy."""

    kind: str  # "pole" | "removable" | "regular"
    residue: complex | None
    value: complex | None


@dataclass(frozen=True)
class PoleAudit:
    z0: float
    sheet_I: SheetFinding
    sheet_II: SheetFinding


def _classify_sheet(model, z0: float, sheet: str) -> SheetFinding:
    hs = [10.0 ** (-k) for k in range(2, 9)]
    res_samples = [h * _evaluate_raw(model, z0 + h, sheet) for h in hs]
    res, res_check = _richardson(res_samples)
    if abs(res - res_check) > 1e-6 * (1.0 + abs(res)):
        raise LimitInconsistencyError(
            f"residue sequence at z0={z0} (sheet {sheet}) is inconsistent: "
            f"{res} vs {res_check}")
    if abs(res) > 1e-7:
        return SheetFinding(kind="pole", residue=res, value=None)
    value = _fill_limit(model, z0, sheet)
    at_den_zero = min(abs(z0 - c) for c in _denominator_zeros(model)) < 1e-8
    kind = "removable" if at_den_zero else "regular"
    return SheetFinding(kind=kind, residue=None, value=value)


def pole_audit(model, z0: float) -> PoleAudit:
    """Classify a candidate energy on both sheets by numeric limits.

    On each sheet the limit of (z - z0) * G along z = z0 + 10^-k decides
    between a pole (nonzero residue) and a removable/regular point, with
    the filled value reported in the latter cases.  Inconsistent limit
    sequences raise rather than misclassify.
    """
    return PoleAudit(
        z0=float(z0),
        sheet_I=_classify_sheet(model, float(z0), "I"),
        sheet_II=_classify_sheet(model, float(z0), "II"),
    )
