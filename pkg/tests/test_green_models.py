import numpy as np
import pytest

from treejacobi.green_models import (
    AltBModel,
    FreeModel,
    LimitInconsistencyError,
    PoleEvaluationError,
    RGModel,
    SheetedPoint,
    eval_alt,
    eval_free,
    eval_rg,
    evaluate,
    pole_audit,
)

SQRT10 = np.sqrt(10.0)


def test_sheeted_point_validates_sheet():
    SheetedPoint(1j, "I")
    SheetedPoint(1j, "II")
    with pytest.raises(ValueError):
        SheetedPoint(1j, "three")


def test_model_constructors_validate():
    with pytest.raises(ValueError):
        FreeModel(2)
    with pytest.raises(ValueError):
        RGModel(2, 2, "red")
    with pytest.raises(ValueError):
        RGModel(3, 2, "blue")
    with pytest.raises(ValueError):
        AltBModel(1.0, "both")


def test_free_known_value():
    # closed form at z=4, d=3: (-2*4 + 3*sqrt(8)) / (2*(9-16))
    got = eval_free(3, SheetedPoint(4.0 + 0j))
    assert got == pytest.approx(-0.32037724101704075, abs=1e-15)
    # odd symmetry off the spectrum
    assert eval_free(3, SheetedPoint(-4.0 + 0j)) == pytest.approx(-got, abs=1e-15)


def test_free_asymptotics_minus_one_over_z():
    for d in (3, 4, 7):
        for z in (1e5 + 0j, 1e5j, -2e5 + 3e4j):
            g = eval_free(d, SheetedPoint(z))
            assert abs(g * z + 1.0) < 1e-8


def test_herglotz_on_first_sheet():
    zs = [0.1 + 0.2j, -2.5 + 1e-3j, 2.8 + 1e-5j, 1j]
    for z in zs:
        assert eval_free(3, SheetedPoint(z)).imag > 0
        assert eval_rg(3, 2, "red", SheetedPoint(z)).imag > 0
        assert eval_rg(3, 2, "green", SheetedPoint(z)).imag > 0
        assert eval_alt(1.0, "plus", SheetedPoint(z)).imag > 0
        assert eval_alt(1.0, "minus", SheetedPoint(z)).imag > 0


def test_cut_sits_on_the_bands():
    """Discontinuity across the real axis exactly on bands, not off them."""
    for x, on_band in ((2.0, True), (2 * np.sqrt(2) + 0.2, False), (4.0, False)):
        up = eval_free(3, SheetedPoint(x + 1e-9j))
        dn = eval_free(3, SheetedPoint(x - 1e-9j))
        jump = abs(up - dn)
        if on_band:
            assert jump > 0.1
            assert up == pytest.approx(np.conj(dn), abs=1e-6)
        else:
            assert jump < 1e-6


def test_alt_b_zero_reduces_to_free_three():
    for z in (3.5 + 0j, 0.4 + 0.9j, -1.2 + 0.3j, 5j):
        for site in ("plus", "minus"):
            assert eval_alt(0.0, site, SheetedPoint(z)) == pytest.approx(
                eval_free(3, SheetedPoint(z)), abs=1e-13)


def test_rg_sites_disagree_but_share_poles():
    z = SheetedPoint(0.5 + 0.5j)
    gr = eval_rg(3, 2, "red", z)
    gg = eval_rg(3, 2, "green", z)
    assert gr != gg


def test_evaluate_at_true_pole_raises():
    with pytest.raises(PoleEvaluationError):
        eval_rg(3, 2, "red", SheetedPoint(0.0 + 0j))
    with pytest.raises(PoleEvaluationError):
        evaluate(FreeModel(3), SheetedPoint(3.0 + 0j, "II"))


def test_removable_point_fills_by_limit():
    # z = d is a zero of the free denominator but the numerator vanishes too
    got = eval_free(3, SheetedPoint(3.0 + 0j))
    # the 0/0 fill loses ~half the mantissa to cancellation near the point
    assert got == pytest.approx(-2.0 / 3.0, abs=1e-7)
    # the fill agrees with direct evaluation just off the point
    near = eval_free(3, SheetedPoint(3.0 + 1e-5 + 0j))
    assert abs(got - near) < 1e-4


def test_alt_removable_fill_at_sqrt10():
    got = eval_alt(1.0, "plus", SheetedPoint(SQRT10 + 0j))
    assert got == pytest.approx(-2.0 / (SQRT10 - 1.0), abs=1e-7)


def test_alt_band_edge_blows_up_inconsistently():
    # the plus-site function diverges like an inverse square root at z=b,
    # so no consistent finite limit exists there
    with pytest.raises((LimitInconsistencyError, PoleEvaluationError)):
        eval_alt(1.0, "plus", SheetedPoint(1.0 + 0j))


def test_sheet_two_free_audit():
    audit = pole_audit(FreeModel(3), 3.0)
    assert audit.sheet_I.kind == "removable"
    assert audit.sheet_I.value == pytest.approx(-2.0 / 3.0, abs=1e-7)
    assert audit.sheet_II.kind == "pole"
    assert audit.sheet_II.residue.real == pytest.approx(0.5, abs=1e-6)


@pytest.mark.parametrize("d", [3, 4, 5, 8])
def test_sheet_two_residue_scales_with_degree(d):
    audit = pole_audit(FreeModel(d), float(d))
    assert audit.sheet_II.kind == "pole"
    assert audit.sheet_II.residue.real == pytest.approx((d - 2) / 2, abs=1e-6)


def test_alt_antibound_audit():
    audit = pole_audit(AltBModel(1.0, "plus"), SQRT10)
    assert audit.sheet_I.kind == "removable"
    assert audit.sheet_II.kind == "pole"
    assert audit.sheet_II.residue.real == pytest.approx(4.5 / (10 - SQRT10), abs=1e-6)


def test_rg_zero_energy_audit_both_sites():
    red = pole_audit(RGModel(3, 2, "red"), 0.0)
    assert red.sheet_I.kind == "pole"
    assert red.sheet_I.residue.real == pytest.approx(-1.0 / 3.0, abs=1e-8)
    assert red.sheet_II.kind == "removable"
    green = pole_audit(RGModel(3, 2, "green"), 0.0)
    assert green.sheet_I.kind == "removable"
    assert green.sheet_II.kind == "pole"


def test_rg_sheet_two_residue_at_sqrt_rg():
    audit = pole_audit(RGModel(3, 2, "red"), np.sqrt(6.0))
    assert audit.sheet_I.kind == "removable"
    assert audit.sheet_II.kind == "pole"
    assert audit.sheet_II.residue.real == pytest.approx(1.0 / 6.0, abs=1e-6)


def test_regular_point_audit():
    audit = pole_audit(FreeModel(3), 5.0)
    assert audit.sheet_I.kind == "regular"
    assert audit.sheet_II.kind == "regular"
    assert audit.sheet_I.value == pytest.approx(
        eval_free(3, SheetedPoint(5.0 + 0j)), abs=1e-10)


def test_sheets_differ_off_the_cut():
    # crossing to sheet II flips the radical: the two sheets differ
    z = SheetedPoint(4.0 + 0j, "II")
    one = eval_free(3, SheetedPoint(4.0 + 0j, "I"))
    two = eval_free(3, z)
    assert abs(one - two) > 0.1
