import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catgen import fock, wigner
from catgen.channel import GaussianChannel
from catgen.conditional import decompose
from catgen.errors import NumericalError, PhysicalityError
from catgen.opo import OpoParams

PROBES = np.linspace(-3.0, 3.0, 5)


def _phi_density(c2, c0, dim=40):
    vec = np.zeros(dim, dtype=complex)
    vec[2], vec[0] = c2, c0
    return fock.density(vec)


def test_chi_phi_trivial_values():
    u, v = np.array([0.3, -1.2]), np.array([0.8, 0.1])
    assert np.allclose(wigner.chi_phi(u, v, 0.0, 1.0), wigner.chi_vacuum(u, v))
    assert wigner.chi_phi(0.0, 0.0, 1.0, 0.0) == 1.0


@pytest.mark.parametrize("c2,c0", [(1 / math.sqrt(2), 1 / math.sqrt(2)), (0.6, -0.8), (1.0, 0.0), (0.2, 0.98)])
def test_chi_phi_vs_displacement_matrix_oracle(c2, c0):
    nrm = math.hypot(c2, c0)
    c2, c0 = c2 / nrm, c0 / nrm
    uu, vv = np.meshgrid(np.linspace(-2.5, 2.5, 7), np.linspace(-2.5, 2.5, 7))
    brute = fock.characteristic(_phi_density(c2, c0), uu, vv)
    assert np.max(np.abs(brute.imag)) < 1e-14
    assert np.allclose(wigner.chi_phi(uu, vv, c2, c0), brute.real, atol=1e-13)


def test_chi_plus_trace_and_large_separation():
    p = OpoParams.from_ratio(0.27)
    dec, ch = wigner.plus_state(1.4, p)
    assert wigner.chi_plus(0.0, 0.0, dec, ch) == pytest.approx(1.0, abs=1e-14)
    dec, ch = wigner.plus_state(40.0, p)
    u, v = 0.7, -0.4
    sx, sp = math.sqrt(ch.fx - ch.gx**2), math.sqrt(ch.fp - ch.gp**2)
    two = wigner.chi_phi(ch.gx * u, ch.gp * v, 1.0, 0.0) * wigner.chi_vacuum(sx * u, sp * v)
    zero = wigner.chi_vacuum(math.sqrt(ch.fx) * u, math.sqrt(ch.fp) * v)
    assert wigner.chi_plus(u, v, dec, ch) == pytest.approx(0.5 * (two + zero), abs=1e-8)


def test_chi_plus_rejects_unphysical_noise():
    dec = decompose(1.0, OpoParams.from_ratio(0.3))
    bad = GaussianChannel("plus", 1.2, 0.8, 1.0, 0.64)
    with pytest.raises(PhysicalityError):
        wigner.chi_plus(0.1, 0.1, dec, bad)


@pytest.mark.parametrize("delta", wigner.FIG5_DELTAS)
def test_closed_form_matches_numeric_transform(delta):
    dec, ch = wigner.plus_state(delta, OpoParams.from_ratio(wigner.FIG5_RATIO))
    closed = wigner.w_plus_grid(PROBES, PROBES, dec, ch).values
    numeric = wigner.w_plus_numeric(PROBES, PROBES, dec, ch).values
    assert closed.size == 25
    assert np.max(np.abs(closed - numeric)) < 1e-6


@pytest.mark.parametrize("delta", [0.0, 0.7, 2.4])
def test_closed_form_with_identity_channel_matches_fock_wigner(delta):
    dec = decompose(delta, OpoParams.from_ratio(0.3))
    ch = GaussianChannel.identity()
    xx, pp = np.meshgrid(np.linspace(-3, 3, 9), np.linspace(-2, 2, 7), indexing="ij")
    rho = np.zeros((10, 10))
    rho[:3, :3] = dec.pre_channel_density
    assert np.allclose(wigner.w_plus_closed(xx, pp, dec, ch), fock.wigner_point(rho, xx, pp), atol=1e-13)


def test_closed_form_with_noiseless_squeezer_matches_fock_route():
    dec = decompose(1.4, OpoParams.from_ratio(0.27))
    s = 0.4
    ch = GaussianChannel("plus", math.exp(s), math.exp(-s), math.exp(2 * s), math.exp(-2 * s))
    dim = 80
    rho = np.zeros((dim, dim), dtype=complex)
    rho[:3, :3] = dec.pre_channel_density
    sq = fock.squeeze_operator(ch.r, dim)
    rho = sq @ rho @ sq.T
    xx, pp = np.meshgrid(np.linspace(-3, 3, 7), np.linspace(-1.5, 1.5, 5), indexing="ij")
    assert np.allclose(wigner.w_plus_closed(xx, pp, dec, ch), fock.wigner_point(rho, xx, pp), atol=1e-10)


@pytest.mark.parametrize("delta", wigner.FIG5_DELTAS)
def test_wigner_normalisation_and_symmetry(delta):
    dec, ch = wigner.plus_state(delta, OpoParams.from_ratio(wigner.FIG5_RATIO))
    axis = np.linspace(-8, 8, 401)
    grid = wigner.w_plus_grid(axis, axis, dec, ch)
    assert grid.integral() == pytest.approx(1.0, abs=1e-5)
    assert np.allclose(grid.values, grid.values[::-1, :], atol=1e-10)
    assert np.allclose(grid.values, grid.values[:, ::-1], atol=1e-10)
    purity = grid.overlap(grid)
    assert 0 < purity <= 1 + 1e-4


def test_default_figure_box_truncates_real_tail_mass():
    # [-6, 6]^2 cuts off ~4e-5 of a state with F_X ~ 2.6; the missing mass is physical
    dec, ch = wigner.plus_state(2.4, OpoParams.from_ratio(wigner.FIG5_RATIO))
    narrow = wigner.w_plus_grid(np.linspace(-6, 6, 301), np.linspace(-6, 6, 301), dec, ch).integral()
    wide = wigner.w_plus_grid(np.linspace(-12, 12, 601), np.linspace(-12, 12, 601), dec, ch).integral()
    assert wide == pytest.approx(1.0, abs=1e-9)
    assert 1e-5 < 1 - narrow < 1e-4


def test_numeric_transform_symmetry_and_norm():
    dec, ch = wigner.plus_state(1.4, OpoParams.from_ratio(wigner.FIG5_RATIO))
    axis = np.linspace(-8, 8, 161)
    grid = wigner.w_plus_numeric(axis, axis, dec, ch)
    assert np.allclose(grid.values, grid.values[::-1, ::-1], atol=1e-10)
    assert grid.integral() == pytest.approx(1.0, abs=1e-5)


def test_aliasing_guard():
    dec = decompose(1.0, OpoParams.from_ratio(0.3))
    with pytest.raises(NumericalError):
        wigner.w_plus_numeric(PROBES, PROBES, dec, wigner.plus_state(1.0, OpoParams.from_ratio(0.3))[1],
                              edge_tol=1e-300)


def test_zero_separation_shows_negativity():
    dec, ch = wigner.plus_state(0.0, OpoParams.from_ratio(0.27))
    axis = np.linspace(-3, 3, 121)
    assert wigner.w_plus_grid(axis, axis, dec, ch).values.min() < 0


@pytest.mark.parametrize("alpha", [0.3, 1.0, math.sqrt(2.6)])
def test_cat_wigner_matches_fock_route(alpha):
    rho = fock.density(fock.cat_state(alpha, "even", 60))
    xx, pp = np.meshgrid(np.linspace(-4, 4, 9), np.linspace(-2, 2, 9), indexing="ij")
    assert np.allclose(wigner.cat_wigner(xx, pp, alpha), fock.wigner_point(rho, xx, pp), atol=1e-8)


def test_odd_cat_wigner_matches_fock_route():
    rho = fock.density(fock.cat_state(1.2, "odd", 60))
    xx, pp = np.meshgrid(np.linspace(-3, 3, 7), np.linspace(-2, 2, 5), indexing="ij")
    assert np.allclose(wigner.cat_wigner(xx, pp, 1.2, "odd"), fock.wigner_point(rho, xx, pp), atol=1e-8)


def test_cat_wigner_limits_and_self_overlap():
    assert wigner.cat_wigner(0.3, -0.2, 1e-8) == pytest.approx(math.exp(-0.13) / math.pi, rel=1e-10)
    alpha = 1.5
    shift = math.sqrt(2) * alpha
    assert wigner.cat_wigner(shift, 0.0, alpha) > wigner.cat_wigner(shift + 0.2, 0.0, alpha)
    axis = np.linspace(-9, 9, 481)
    xx, pp = np.meshgrid(axis, axis, indexing="ij")
    grid = wigner.WignerGrid(axis, axis, wigner.cat_wigner(xx, pp, alpha))
    assert grid.integral() == pytest.approx(1.0, abs=1e-9)
    assert grid.overlap(grid) == pytest.approx(1.0, abs=1e-9)


def test_headline_fidelity():
    dec, ch = wigner.plus_state(1.4, OpoParams.from_ratio(0.27))
    assert wigner.fidelity_to_cat(dec, ch, math.sqrt(2.6)) == pytest.approx(0.946, abs=0.01)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.02, 0.6), st.floats(0.0, 5.0), st.floats(0.3, 2.0))
def test_fidelity_is_bounded(ratio, delta, alpha):
    dec, ch = wigner.plus_state(delta, OpoParams.from_ratio(ratio))
    assert 0.0 <= wigner.fidelity_to_cat(dec, ch, alpha) <= 1.0


@pytest.mark.parametrize("delta", [0.0, 0.5, 1.4, 3.0])
@pytest.mark.parametrize("alpha_sq", [1.0, 2.6])
def test_fock_route_agrees_in_weak_pump_regime(delta, alpha_sq):
    dec, ch = wigner.plus_state(delta, OpoParams.from_ratio(0.05))
    assert ch.n_bar < 1e-3
    alpha = math.sqrt(alpha_sq)
    assert abs(wigner.fidelity_to_cat(dec, ch, alpha) - wigner.fidelity_fock_route(dec, ch, alpha)) < 0.005


def test_refinement_failure_raises():
    dec, ch = wigner.plus_state(1.4, OpoParams.from_ratio(0.27))
    with pytest.raises(NumericalError):
        wigner.fidelity_to_cat(dec, ch, 1.0, tol=1e-300, max_refine=1)
    with pytest.raises(ValueError):
        wigner.fidelity_to_cat(dec, ch, 1.0, max_refine=0)


def test_sweep_peaks_move_right_with_cat_size():
    deltas = np.arange(0.0, 4.0001, 0.1)
    alphas = [math.sqrt(a) for a in (2.0, 2.5, 3.0, 3.5)]
    table = wigner.fidelity_sweep(deltas, OpoParams.from_ratio(0.27), alphas, workers=1)
    peaks = deltas[np.argmax(table, axis=0)]
    assert np.all(np.diff(peaks) > 0)


def test_sweep_parallel_matches_serial():
    deltas = np.linspace(0.2, 2.0, 10)
    p = OpoParams.from_ratio(0.27)
    assert np.array_equal(wigner.fidelity_sweep(deltas, p, [1.3], workers=1),
                          wigner.fidelity_sweep(deltas, p, [1.3], workers=3))
