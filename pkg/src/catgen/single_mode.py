"""Single-mode photon subtraction and squeezed cat-state synthesis.

Covers the n-photon-subtracted squeezed vacuum a^n S(-r)|0>, the Hermite
expansion of squeezed coherent states, the two-term squeezed superposition
that best approximates an even cat, and the r-optimised fidelity curves.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Literal, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import fock
from .errors import NumericalError
from .parallel import ordered_map

Variant = Literal["2PS", "psi2"]

R_BRACKET = (1e-4, 2.0)
R_CEILING = 4.0
FIG1_ALPHAS = np.round(np.arange(0.1, 2.2 + 1e-9, 0.02), 10)


@dataclass(frozen=True)
class SuperpositionSpec:
    """S(-r)(c_n|n> + c_{n-2}|n-2> + ...), coefficients listed from |n> down."""

    n: int
    coeffs: tuple[float, ...]
    r: float

    def __post_init__(self):
        if len(self.coeffs) != self.n // 2 + 1:
            raise ValueError(f"expected {self.n // 2 + 1} coefficients for n={self.n}")
        total = sum(abs(c) ** 2 for c in self.coeffs)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"coefficients not normalised (sum |c|^2 = {total!r})")

    def state(self, dim: int = fock.DEFAULT_DIM) -> np.ndarray:
        vec = np.zeros(dim, dtype=complex)
        for i, c in enumerate(self.coeffs):
            vec[self.n - 2 * i] = c
        return fock.squeeze(vec, -self.r)


def bogoliubov_coeffs(r: float, n: int) -> np.ndarray:
    """Fock amplitudes of (a cosh r + a^dag sinh r)^n |0>, unnormalised.

    This is a^n S(-r)|0> with the squeezer pulled to the left. Only levels
    0..n can be reached, so an (n+1)-dimensional space is exact.
    """
    dim = n + 2
    a = fock.annihilation_op(dim)
    b = np.cosh(r) * a + np.sinh(r) * a.T
    vec = np.zeros(dim)
    vec[0] = 1.0
    for _ in range(n):
        vec = b @ vec
    return vec[: n + 1]


def subtracted_superposition(r: float, n: int) -> SuperpositionSpec:
    coeffs = bogoliubov_coeffs(r, n)
    coeffs = coeffs / np.linalg.norm(coeffs)
    return SuperpositionSpec(n, tuple(float(coeffs[k]) for k in range(n, -1, -2)), r)


def n_photon_subtracted(r: float, n: int, dim: int = fock.DEFAULT_DIM) -> np.ndarray:
    """Normalised a^n S(-r)|0> computed by direct operator application."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if r <= 0 and n > 0:
        raise ValueError("photon subtraction needs r > 0")
    state = fock.annihilate(fock.squeeze(fock.vacuum(dim), -r), n)
    if fock.norm(state) == 0.0:
        raise NumericalError("subtracted state vanished")
    return fock.normalize(state)


def two_ps_coeffs(r: float) -> tuple[float, float]:
    """(c2, c0) of the two-photon-subtracted state, normalised.

    a^2 S(-r)|0> = S(-r) sinh r (sqrt(2) sinh r |2> + cosh r |0>).
    """
    c2, c0 = np.sqrt(2.0) * np.sinh(r), np.cosh(r)
    nrm = np.hypot(c2, c0)
    return c2 / nrm, c0 / nrm


def squeezed_coherent_amplitudes(alpha: float, r: float, dim: int = fock.DEFAULT_DIM) -> np.ndarray:
    """<m|S(r)|alpha> for m < dim via the Hermite-polynomial expansion.

    The terms (lambda/2)^{m/2} H_m(x)/sqrt(m!) with lambda = tanh r and
    x = sqrt((1 - lambda^2)/(2 lambda)) alpha are generated by the Hermite
    three-term recurrence rescaled so that lambda -> 0 stays finite:

        h_{m+1} = (sqrt(1 - lambda^2) alpha h_m - lambda sqrt(m) h_{m-1}) / sqrt(m+1).

    The prefactor (1 - lambda^2)^{1/4} exp[-(1 - lambda) alpha^2 / 2] makes the
    full series normalised.
    """
    lam = np.tanh(r)
    s = np.sqrt(1.0 - lam**2)
    h = np.zeros(dim)
    h[0] = np.sqrt(s) * np.exp(-(1.0 - lam) * alpha**2 / 2.0)
    if dim > 1:
        h[1] = s * alpha * h[0]
    for m in range(1, dim - 1):
        h[m + 1] = (s * alpha * h[m] - lam * np.sqrt(m) * h[m - 1]) / np.sqrt(m + 1)
    return h


def squeezed_coherent_hermite(alpha: float, r: float, dim: int = fock.DEFAULT_DIM,
                              renormalize: bool = True) -> np.ndarray:
    amps = squeezed_coherent_amplitudes(alpha, r, dim).astype(complex)
    return fock.normalize(amps) if renormalize else amps


def squeezed_cat_amplitudes(alpha: float, r: float, dim: int = fock.DEFAULT_DIM) -> np.ndarray:
    """<m|S(r)|C_+> for the even cat, exact up to index dim-1."""
    plus = squeezed_coherent_amplitudes(alpha, r, dim)
    minus = squeezed_coherent_amplitudes(-alpha, r, dim)
    return (plus + minus) / np.sqrt(fock.cat_norm(alpha, "even"))


def psi2_coeffs(alpha: float, r: float) -> tuple[float, float]:
    """Normalised (c2, c0) of the optimal two-term superposition.

    Proportional to (((1 - lambda^2) alpha^2 - lambda)/sqrt(2), 1).
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    lam = np.tanh(r)
    c2 = ((1.0 - lam**2) * alpha**2 - lam) / np.sqrt(2.0)
    nrm = np.hypot(c2, 1.0)
    return c2 / nrm, 1.0 / nrm


def psi2_state(alpha: float, r: float, dim: int = fock.DEFAULT_DIM) -> np.ndarray:
    c2, c0 = psi2_coeffs(alpha, r)
    vec = np.zeros(dim, dtype=complex)
    vec[2], vec[0] = c2, c0
    return fock.squeeze(vec, -r)


def two_ps_state(r: float, dim: int = fock.DEFAULT_DIM) -> np.ndarray:
    c2, c0 = two_ps_coeffs(r)
    vec = np.zeros(dim, dtype=complex)
    vec[2], vec[0] = c2, c0
    return fock.squeeze(vec, -r)


def _two_term_fidelity(alpha: float, r: float, c2: float, c0: float) -> float:
    # <C+|S(-r)|k> = <k|S(r)|C+>, both real here
    amps = squeezed_cat_amplitudes(alpha, r, 3)
    return float((c2 * amps[2] + c0 * amps[0]) ** 2)


def fidelity_2ps(alpha: float, r: float) -> float:
    """|<C_+(alpha)|2PS(r)>|^2 without Fock truncation."""
    return _two_term_fidelity(alpha, r, *two_ps_coeffs(r))


def fidelity_psi2(alpha: float, r: float) -> float:
    """|<C_+(alpha)|psi_2(alpha, r)>|^2 without Fock truncation."""
    return _two_term_fidelity(alpha, r, *psi2_coeffs(alpha, r))


_FIDELITY: dict[str, Callable[[float, float], float]] = {"2PS": fidelity_2ps, "psi2": fidelity_psi2}


@dataclass(frozen=True)
class FidelityPoint:
    alpha: float
    fidelity: float
    r_opt: float


def maximize_over_r(fn: Callable[[float], float], bracket=R_BRACKET, xtol: float = 1e-8,
                    n_scan: int = 201) -> tuple[float, float]:
    """Maximise ``fn`` over r in ``bracket``.

    A coarse scan localises the best cell, then bounded Brent refinement
    (golden-section steps with parabolic acceleration) polishes it to
    ``xtol``. If the optimum sits on the upper edge the bracket is doubled
    up to ``R_CEILING`` with a warning. Returns (r_opt, f_max).
    """
    lo, hi = bracket
    while True:
        grid = np.linspace(lo, hi, n_scan)
        vals = np.array([fn(r) for r in grid])
        if not np.all(np.isfinite(vals)):
            raise NumericalError(f"non-finite objective on bracket [{lo}, {hi}]")
        k = int(np.argmax(vals))
        if k == n_scan - 1 and hi < R_CEILING:
            warnings.warn(f"optimum at bracket edge r={hi}; widening", RuntimeWarning, stacklevel=2)
            hi = min(2 * hi, R_CEILING)
            continue
        break
    a, b = grid[max(k - 1, 0)], grid[min(k + 1, n_scan - 1)]
    res = minimize_scalar(lambda r: -fn(r), bounds=(a, b), method="bounded",
                          options={"xatol": xtol, "maxiter": 500})
    if not res.success:
        raise NumericalError(f"r optimisation failed in [{a:.6g}, {b:.6g}]: {res.message}")
    r_best, f_best = float(res.x), -float(res.fun)
    if vals[k] > f_best:
        # scan node on the physical edge r -> 0 beats the interior polish
        r_best, f_best = float(grid[k]), float(vals[k])
    return r_best, f_best


def optimal_fidelity(alpha: float, variant: Variant) -> FidelityPoint:
    fn = _FIDELITY[variant]
    r_opt, f_opt = maximize_over_r(lambda r: fn(alpha, r))
    return FidelityPoint(float(alpha), f_opt, r_opt)


def _optimal_2ps(alpha):
    return optimal_fidelity(alpha, "2PS")


def _optimal_psi2(alpha):
    return optimal_fidelity(alpha, "psi2")


def optimal_fidelity_curve(alpha_grid: Sequence[float], variant: Variant,
                           workers: int | None = None) -> list[FidelityPoint]:
    """r-optimised fidelity to C_+(alpha) for each alpha, in grid order."""
    if variant not in _FIDELITY:
        raise ValueError(f"unknown variant {variant!r}")
    alphas = [float(a) for a in alpha_grid]
    if any(a <= 0 for a in alphas):
        raise ValueError("alpha grid must be positive")
    fn = _optimal_2ps if variant == "2PS" else _optimal_psi2
    return ordered_map(fn, alphas, workers)
