"""Degenerate-OPO spectra and the temporal-mode scalars of two-click heralding.

Frequencies and times are in units where the OPO half-bandwidth zeta0 is
usually 1, so ``delta`` is the dimensionless click separation zeta0*Delta.
Click times are placed symmetrically at t1 = -delta/2, t2 = +delta/2.

Fourier convention: f(t) = (1/2pi) int dOmega f(Omega) exp(-i Omega t).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Literal

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import ModeUndefinedError, NumericalError

Method = Literal["closed", "quad"]
Branch = Literal["plus", "minus"]

QUAD_RTOL = 1e-11
FAR_LIMIT = 1e8


@dataclass(frozen=True)
class OpoParams:
    """Below-threshold OPO: half-bandwidth zeta0 and pump parameter epsilon."""

    epsilon: float
    zeta0: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.epsilon < self.zeta0:
            raise ValueError(f"need 0 < epsilon < zeta0, got epsilon={self.epsilon}, zeta0={self.zeta0}")

    @classmethod
    def from_ratio(cls, ratio: float, zeta0: float = 1.0) -> "OpoParams":
        return cls(epsilon=ratio * zeta0, zeta0=zeta0)

    @property
    def ratio(self) -> float:
        return self.epsilon / self.zeta0

    @property
    def zeta_plus(self) -> float:
        return self.zeta0 + self.epsilon

    @property
    def zeta_minus(self) -> float:
        return self.zeta0 - self.epsilon


def _denominator(omega, params: OpoParams):
    return np.sqrt((params.zeta_plus**2 + omega**2) * (params.zeta_minus**2 + omega**2))


def mu(omega, params: OpoParams):
    """Complex Bogoliubov coefficient mu(Omega) of the OPO output."""
    omega = np.asarray(omega, dtype=float)
    z0, e = params.zeta0, params.epsilon
    return (z0**2 + e**2 + omega**2) / ((z0 - 1j * omega) ** 2 - e**2)


def nu(omega, params: OpoParams):
    omega = np.asarray(omega, dtype=float)
    z0, e = params.zeta0, params.epsilon
    return 2 * z0 * e / ((z0 - 1j * omega) ** 2 - e**2)


def mu_bar(omega, params: OpoParams):
    """mu(Omega) with its phase removed; real, even and >= 1."""
    omega = np.asarray(omega, dtype=float)
    return (params.zeta0**2 + params.epsilon**2 + omega**2) / _denominator(omega, params)


def nu_bar(omega, params: OpoParams):
    omega = np.asarray(omega, dtype=float)
    return 2 * params.zeta0 * params.epsilon / _denominator(omega, params)


def theta(omega, params: OpoParams):
    """Phase of mu(Omega) on the continuous branch with theta(0) = 0.

    atan2 keeps the branch continuous: the real part vanishes only where
    the imaginary part does not, so theta runs 0 -> pi over Omega >= 0.
    """
    omega = np.asarray(omega, dtype=float)
    z0, e = params.zeta0, params.epsilon
    return np.arctan2(2 * z0 * omega, z0**2 - e**2 - omega**2)


def cosine_integral(f: Callable[[float], float], delta: float, scale: float = 1.0,
                    offset: float = 0.0, amplitude: float = 1.0, rtol: float = QUAD_RTOL) -> float:
    """(1/pi) int_0^inf f(Omega) [offset + amplitude cos(delta Omega)] dOmega.

    ``f`` must be even and decay at least like Omega^-2. ``scale`` is the
    frequency scale of f's structure. The interval [0, 40 scale] is cut at
    oscillation nodes and integrated piecewise; beyond it the constant part
    uses Omega = scale tan(phi) and the oscillatory part QUADPACK's Fourier
    integrator.
    """
    cutoff = 40.0 * scale
    oscillating = amplitude != 0.0 and delta != 0.0
    if not oscillating:
        weight = offset + amplitude

        def body(w):
            return weight * f(w)
    elif offset == -amplitude:
        # 1 - cos written as 2 sin^2 to avoid cancellation at small delta
        def body(w):
            return 2 * offset * np.sin(0.5 * delta * w) ** 2 * f(w)
    else:
        def body(w):
            return (offset + amplitude * np.cos(delta * w)) * f(w)

    if oscillating:
        period = 2 * np.pi / abs(delta)
        n_chunks = max(1, int(np.ceil(cutoff / (4 * period))))
        edges = np.linspace(0.0, cutoff, n_chunks + 1)
    else:
        edges = np.array([0.0, scale, cutoff])

    with warnings.catch_warnings():
        # convergence is judged from the accumulated error estimate below
        warnings.simplefilter("ignore", IntegrationWarning)
        total, err = _integrate_pieces(f, body, edges, delta, scale, offset, amplitude,
                                       oscillating, cutoff, rtol)
    if not np.isfinite(total) or err > max(1e3 * rtol * abs(total), 1e-13):
        raise NumericalError(f"quadrature did not converge: value {total:.3e}, error estimate {err:.3e}")
    return total / np.pi


def _integrate_pieces(f, body, edges, delta, scale, offset, amplitude, oscillating, cutoff, rtol):
    total, err = 0.0, 0.0
    mapped_body = False
    if oscillating and abs(delta) * cutoff < 2 * np.pi:
        # slow oscillation: carry the full weight out to the first period,
        # where QUADPACK's Fourier integrator is well conditioned
        far = 2 * np.pi / abs(delta)
        if far > FAR_LIMIT * scale:
            # the first period lies where f is negligible; finish with the mapped body
            far, mapped_body = FAR_LIMIT * scale, True
        n_log = max(1, int(np.ceil(np.log10(far / cutoff))) * 2)
        edges = np.concatenate([edges[:-1], np.geomspace(cutoff, far, n_log + 1)])
        cutoff = far
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, e = quad(body, lo, hi, epsabs=0.0, epsrel=rtol, limit=200)
        total += val
        err += e
    if mapped_body:
        val, e = quad(lambda phi: body(scale * np.tan(phi)) * scale / np.cos(phi) ** 2,
                      np.arctan(cutoff / scale), np.pi / 2, epsabs=1e-15, epsrel=rtol, limit=200)
        return total + val, err + e

    const = offset + (0.0 if oscillating else amplitude)
    if const != 0.0:
        phi0 = np.arctan(cutoff / scale)

        def mapped(phi):
            t = np.tan(phi)
            return f(scale * t) * scale * (1 + t * t)

        val, e = quad(mapped, phi0, np.pi / 2, epsabs=0.0, epsrel=rtol, limit=200)
        total += const * val
        err += abs(const) * e
    if oscillating:
        val, e = quad(f, cutoff, np.inf, weight="cos", wvar=abs(delta), epsabs=1e-15, limlst=100)
        total += amplitude * val
        err += abs(amplitude) * e
    return total, err


def n_nu(params: OpoParams) -> float:
    """Normalisation (zeta0 eps / 2)(1/zeta_- - 1/zeta_+) of the heralded wavepacket."""
    return 0.5 * params.zeta0 * params.epsilon * (1 / params.zeta_minus - 1 / params.zeta_plus)


@lru_cache(maxsize=64)
def n_nu_quad(params: OpoParams, rtol: float = QUAD_RTOL) -> float:
    """Parseval integral (1/2pi) int nu_bar^2 dOmega."""
    return cosine_integral(lambda w: nu_bar(w, params) ** 2, 0.0, params.zeta0, rtol=rtol)


def _check_delta(delta: float):
    if delta < 0:
        raise ValueError(f"click separation must be non-negative, got {delta}")


def i_delta_closed(delta: float, params: OpoParams) -> float:
    zm, zp = params.zeta_minus, params.zeta_plus
    return (np.exp(-zm * delta) / zm - np.exp(-zp * delta) / zp) / (1 / zm - 1 / zp)


def one_minus_i_delta(delta: float, params: OpoParams) -> float:
    """1 - I_Delta without cancellation as delta -> 0.

    Writes (1 - e^{-z d})/z as sum_k (-z)^k d^{k+1}/(k+1)! so the zeta_-/zeta_+
    difference is taken term by term.
    """
    zm, zp = params.zeta_minus, params.zeta_plus
    if delta > 0.5:
        return 1.0 - i_delta_closed(delta, params)
    total, fact = 0.0, 1.0
    for k in range(1, 40):
        fact *= k + 1
        term = (-1) ** k * delta ** (k + 1) * (zm**k - zp**k) / fact
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total / (1 / zm - 1 / zp)


@lru_cache(maxsize=4096)
def i_delta_quad(delta: float, params: OpoParams, rtol: float = QUAD_RTOL) -> float:
    val = cosine_integral(lambda w: nu_bar(w, params) ** 2, delta, params.zeta0, rtol=rtol)
    return val / n_nu(params)


def i_delta(delta: float, params: OpoParams, method: Method = "closed") -> float:
    """Overlap int psi(t - t2) psi(t - t1) dt of the two click wavepackets."""
    _check_delta(delta)
    if method == "closed":
        return float(i_delta_closed(delta, params))
    return i_delta_quad(float(delta), params)


def f_delta_closed(delta: float, params: OpoParams) -> float:
    # mu_bar nu_bar = zeta0 eps [1/(zeta_-^2 + W^2) + 1/(zeta_+^2 + W^2)]
    zm, zp = params.zeta_minus, params.zeta_plus
    return 0.5 * params.zeta0 * params.epsilon * (np.exp(-zm * delta) / zm + np.exp(-zp * delta) / zp)


@lru_cache(maxsize=4096)
def f_delta_quad(delta: float, params: OpoParams, rtol: float = QUAD_RTOL) -> float:
    return cosine_integral(lambda w: mu_bar(w, params) * nu_bar(w, params), delta, params.zeta0, rtol=rtol)


def f_delta(delta: float, params: OpoParams, method: Method = "closed") -> float:
    """Cross integral int mu_bar(t - t2) nu_bar(t - t1) dt (vacuum amplitude)."""
    _check_delta(delta)
    if method == "closed":
        return float(f_delta_closed(delta, params))
    return f_delta_quad(float(delta), params)


@lru_cache(maxsize=4096)
def _psi_scalar(t: float, params: OpoParams) -> float:
    val = cosine_integral(lambda w: nu_bar(w, params), t, params.zeta0)
    return val / np.sqrt(n_nu(params))


def psi_t(t, params: OpoParams):
    """Normalised single-click wavepacket psi(t) by numerical inverse Fourier transform."""
    t = np.asarray(t, dtype=float)
    out = np.vectorize(lambda s: _psi_scalar(abs(float(s)), params), otypes=[float])(t)
    return out if out.ndim else float(out)


def psi_mode(t, delta: float, params: OpoParams, branch: Branch = "plus"):
    """Symmetric (plus) or antisymmetric (minus) orthonormal temporal mode."""
    _check_delta(delta)
    sign = 1.0 if branch == "plus" else -1.0
    if branch == "minus" and delta == 0:
        raise ModeUndefinedError("antisymmetric mode is undefined at zero click separation")
    t = np.asarray(t, dtype=float)
    norm = 1 + i_delta(delta, params) if branch == "plus" else one_minus_i_delta(delta, params)
    return (psi_t(t - delta / 2, params) + sign * psi_t(t + delta / 2, params)) / np.sqrt(2 * norm)


def psi_pm(t, delta: float, params: OpoParams):
    return psi_mode(t, delta, params, "plus"), psi_mode(t, delta, params, "minus")


def mode_spectra(omega, delta: float, params: OpoParams):
    """Psi_plus(Omega), Psi_minus(Omega) with the click times centred on zero."""
    if delta == 0:
        raise ModeUndefinedError("antisymmetric mode is undefined at zero click separation")
    omega = np.asarray(omega, dtype=float)
    overlap = i_delta(delta, params)
    base = nu_bar(omega, params) / np.sqrt(n_nu(params))
    plus = base * 2 * np.cos(omega * delta / 2) / np.sqrt(2 * (1 + overlap))
    minus = base * 2j * np.sin(omega * delta / 2) / np.sqrt(2 * one_minus_i_delta(delta, params))
    return plus, minus


def mode_coupling(delta: float, params: OpoParams) -> tuple[complex, complex]:
    """(1/2pi) int k(Omega) Psi_+^* Psi_- dOmega for k = mu_bar and k = nu_bar.

    Both vanish when the OPO leaves the two temporal modes uncoupled.
    """
    out = []
    for kernel in (mu_bar, nu_bar):
        def integrand(w, part):
            plus, minus = mode_spectra(w, delta, params)
            val = kernel(w, params) * np.conj(plus) * minus
            return float(val.imag if part else val.real)

        re = quad(integrand, -np.inf, np.inf, args=(0,), limit=400)[0]
        im = quad(integrand, -np.inf, np.inf, args=(1,), limit=400)[0]
        out.append(complex(re, im) / (2 * np.pi))
    return out[0], out[1]


@dataclass(frozen=True)
class TemporalPair:
    delta: float
    n_nu: float
    i_delta: float
    f_delta: float


def temporal_pair(delta: float, params: OpoParams, method: Method = "closed") -> TemporalPair:
    return TemporalPair(float(delta), n_nu(params), i_delta(delta, params, method), f_delta(delta, params, method))
