import math
import warnings

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catgen import fock, single_mode as sm
from catgen.errors import NumericalError


@pytest.mark.parametrize("r", [0.2, 0.5, 1.0])
def test_one_photon_subtraction_is_squeezed_single_photon(r):
    # squeezing at r = 1 populates levels past 100 at the 1e-12 level
    sub = sm.n_photon_subtracted(r, 1, dim=160)
    ref = fock.squeeze(fock.basis(1, 160), -r)
    assert fock.fidelity_pure(sub, ref) > 1 - 1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("r", [0.2, 0.5, 1.0])
def test_subtraction_routes_agree(n, r):
    operator_route = sm.n_photon_subtracted(r, n, dim=160)
    spec = sm.subtracted_superposition(r, n)
    assert fock.fidelity_pure(operator_route, spec.state(160)) > 1 - 1e-10


@pytest.mark.parametrize("r", [0.1, 0.7])
def test_two_ps_closed_coefficients(r):
    spec = sm.subtracted_superposition(r, 2)
    assert np.allclose(spec.coeffs, sm.two_ps_coeffs(r), atol=1e-14)


def test_subtraction_parity():
    state = sm.n_photon_subtracted(0.4, 3, dim=40)
    assert np.allclose(state[0::2], 0)


def test_subtraction_errors():
    with pytest.raises(ValueError):
        sm.n_photon_subtracted(0.0, 2)
    with pytest.raises(ValueError):
        sm.SuperpositionSpec(2, (1.0,), 0.3)
    with pytest.raises(ValueError):
        sm.SuperpositionSpec(2, (1.0, 1.0), 0.3)


def _hermite_oracle(alpha, r, m):
    lam = mp.tanh(r)
    x = mp.sqrt((1 - lam**2) / (2 * lam)) * alpha
    pref = (1 - lam**2) ** mp.mpf(0.25) * mp.exp(-(1 - lam) * alpha**2 / 2)
    return pref * (lam / 2) ** (mp.mpf(m) / 2) * mp.hermite(m, x) / mp.sqrt(mp.factorial(m))


@pytest.mark.parametrize("alpha,r", [(0.5, 0.2), (1.3, 0.6), (2.0, 1.0)])
def test_hermite_recurrence_matches_direct_polynomials(alpha, r):
    mp.mp.dps = 30
    amps = sm.squeezed_coherent_amplitudes(alpha, r, 25)
    ref = np.array([float(_hermite_oracle(mp.mpf(alpha), mp.mpf(r), m)) for m in range(25)])
    assert np.allclose(amps, ref, rtol=1e-11, atol=1e-16)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("r", [0.2, 0.5, 1.0])
def test_hermite_route_matches_operator_squeezing(alpha, r):
    dim = 80
    op = fock.squeeze(fock.coherent_state(alpha, dim), r)
    herm = sm.squeezed_coherent_hermite(alpha, r, dim)
    assert fock.fidelity_pure(op, herm) > 1 - 1e-8


def test_hermite_unrenormalised_is_normalised():
    amps = sm.squeezed_coherent_hermite(1.2, 0.4, 60, renormalize=False)
    assert abs(fock.norm(amps) - 1) < 1e-12


def test_hermite_r_zero_limit_is_coherent():
    amps = sm.squeezed_coherent_amplitudes(0.9, 1e-12, 30)
    assert np.allclose(amps, fock.coherent_state(0.9, 30).real, atol=1e-10)


def test_psi2_zero_coefficient_is_squeezed_vacuum():
    r = 0.3
    lam = math.tanh(r)
    alpha = math.sqrt(lam / (1 - lam**2))
    c2, c0 = sm.psi2_coeffs(alpha, r)
    assert abs(c2) < 1e-14 and c0 == pytest.approx(1.0)
    assert fock.fidelity_pure(sm.psi2_state(alpha, r, 60), fock.squeeze(fock.vacuum(60), -r)) > 1 - 1e-12


def test_psi2_is_the_projection_of_the_squeezed_cat():
    alpha, r = 1.4, 0.35
    amps = sm.squeezed_cat_amplitudes(alpha, r, 3)
    proj = np.array([amps[2], amps[0]])
    proj /= np.linalg.norm(proj)
    assert np.allclose(sm.psi2_coeffs(alpha, r), proj, atol=1e-14)


@pytest.mark.parametrize("variant", ["2PS", "psi2"])
def test_two_term_fidelity_matches_fock_inner_product(variant):
    alpha, r = 1.0, 0.4
    dim = 60
    state = sm.two_ps_state(r, dim) if variant == "2PS" else sm.psi2_state(alpha, r, dim)
    brute = fock.fidelity_pure(fock.cat_state(alpha, "even", dim), state)
    fn = sm.fidelity_2ps if variant == "2PS" else sm.fidelity_psi2
    assert fn(alpha, r) == pytest.approx(brute, abs=1e-12)


def test_fock_truncation_convergence_protocol():
    alpha, r = 1.5, 0.5
    vals = []
    for dim in (40, 80):
        vals.append(fock.fidelity_pure(fock.cat_state(alpha, "even", dim), sm.psi2_state(alpha, r, dim)))
    assert abs(vals[0] - vals[1]) < 1e-8
    assert abs(vals[1] - sm.fidelity_psi2(alpha, r)) < 1e-10


def test_optimal_fidelity_small_alpha_is_near_one():
    pt = sm.optimal_fidelity(0.1, "psi2")
    assert pt.fidelity > 1 - 1e-8


def test_psi2_beats_0p9_at_alpha_sq_2p5():
    pt = sm.optimal_fidelity(math.sqrt(2.5), "psi2")
    assert pt.fidelity > 0.9


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 2.2))
def test_psi2_never_worse_than_2ps(alpha):
    assert sm.optimal_fidelity(alpha, "psi2").fidelity >= sm.optimal_fidelity(alpha, "2PS").fidelity - 1e-12


def test_maximize_widens_bracket_with_warning():
    with pytest.warns(RuntimeWarning):
        r, f = sm.maximize_over_r(lambda r: -(r - 2.7) ** 2)
    assert r == pytest.approx(2.7, abs=1e-6)


def test_maximize_rejects_nonfinite():
    with pytest.raises(NumericalError):
        sm.maximize_over_r(lambda r: np.nan)


def test_optimal_curve_is_ordered_and_parallel_safe():
    alphas = np.linspace(0.3, 2.0, 12)
    serial = sm.optimal_fidelity_curve(alphas, "2PS", workers=1)
    par = sm.optimal_fidelity_curve(alphas, "2PS", workers=3)
    assert [p.alpha for p in par] == list(alphas)
    assert [p.fidelity for p in par] == [p.fidelity for p in serial]
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        with pytest.raises(ValueError):
            sm.optimal_fidelity_curve([0.0, 1.0], "psi2")
