"""Tests for the zero-energy kernel vector on the biregular tree."""

import numpy as np
import pytest

from treejacobi.cover import build_ball
from treejacobi.graphs import rg_model
from treejacobi.rgmodel import (
    build_u,
    dos_zero_weight,
    residue_check,
    u_norm_sq,
    verify_Hu_zero,
)


def test_build_u_values_and_counts_explicit():
    u = build_u(3, 2, 4)
    assert list(u.counts) == [1, 2, 4, 4, 8, 8, 16, 16, 32]
    even = u.values[0::2]
    assert even == pytest.approx([1, -0.5, 0.25, -0.125, 0.0625])
    assert np.all(u.values[1::2] == 0.0)


@pytest.mark.parametrize("r,g,K", [(3, 2, 3), (4, 3, 2), (5, 2, 2)])
def test_counts_match_ball_level_populations(r, g, K):
    # the claimed level populations are exactly the cover ball's
    graph, params = rg_model(r, g)
    ball = build_ball(graph, params, "r0", 2 * K)
    pops = np.bincount(ball.depth, minlength=2 * K + 1)
    assert np.array_equal(pops, build_u(r, g, K).counts)


@pytest.mark.parametrize("r,g", [(3, 2), (4, 2), (5, 3), (7, 2)])
@pytest.mark.parametrize("K", [1, 4, 9])
def test_partial_norm_matches_geometric_series(r, g, K):
    partial, limit = u_norm_sq(r, g, K)
    q = (g - 1) / (r - 1)
    assert partial == pytest.approx(1 + g * (1 - q**K) / (r - g), rel=1e-14)
    assert limit == r / (r - g)


def test_partial_norm_known_values():
    assert u_norm_sq(3, 2, 4)[0] == pytest.approx(2.875, abs=1e-15)
    assert u_norm_sq(3, 2, 6)[0] == pytest.approx(2.96875, abs=1e-15)
    assert u_norm_sq(3, 2, 6)[1] == 3.0


@pytest.mark.parametrize("r,g,K", [(3, 2, 3), (3, 2, 5), (4, 3, 2), (5, 2, 2)])
def test_kernel_equation_holds_on_ball_interior(r, g, K):
    assert verify_Hu_zero(r, g, K) < 1e-14


@pytest.mark.parametrize("r,g", [(3, 2), (4, 3), (5, 2)])
def test_zero_energy_residue_matches_norm_reciprocal(r, g):
    res, expected = residue_check(r, g)
    assert expected == -(r - g) / r
    assert res == pytest.approx(expected, abs=1e-8)


@pytest.mark.parametrize("r,g", [(3, 2), (4, 3), (5, 2)])
def test_dos_atom_weight(r, g):
    assert dos_zero_weight(r, g) == pytest.approx((r - g) / (r + g), abs=1e-8)


def test_input_validation():
    with pytest.raises(ValueError, match="r > g"):
        build_u(2, 2, 3)
    with pytest.raises(ValueError, match="r > g"):
        residue_check(2, 3)
    with pytest.raises(ValueError, match="K >= 1"):
        build_u(3, 2, 0)
    with pytest.raises(ValueError, match="K >= 2"):
        verify_Hu_zero(3, 2, 1)
