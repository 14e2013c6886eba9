"""The OPO acting on one heralded temporal mode, as a single-mode Gaussian channel.

For mode Psi_+ or Psi_- the OPO is described by S = diag(G_X, G_P) and
the noise matrix Y = diag(F_X - G_X^2, F_P - G_P^2) in shot-noise units.
G and F are spectral averages of g(Omega) = mu_bar + nu_bar and g^2 (and
their inverses) over |Psi(Omega)|^2.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ModeUndefinedError, PhysicalityError
from .opo import Branch, OpoParams, QUAD_RTOL, cosine_integral, i_delta, n_nu, one_minus_i_delta

PHYS_TOL = 1e-10


def _sign(branch: Branch) -> float:
    if branch not in ("plus", "minus"):
        raise ValueError(f"unknown branch {branch!r}")
    return 1.0 if branch == "plus" else -1.0


def _mode_prefactor(delta: float, params: OpoParams, branch: Branch) -> float:
    """4 zeta0^2 eps^2 / (N_nu (1 +/- I_Delta)); |Psi|^2 = this * (1 +/- cos) / denominators."""
    if delta < 0:
        raise ValueError("click separation must be non-negative")
    if branch == "minus" and delta == 0:
        raise ModeUndefinedError("antisymmetric mode is undefined at zero click separation")
    weight = 1 + i_delta(delta, params) if _sign(branch) > 0 else one_minus_i_delta(delta, params)
    return 4 * params.zeta0**2 * params.epsilon**2 / (n_nu(params) * weight)


def _spectral_average(delta, params, branch, power_plus, power_minus, rtol):
    zp2, zm2 = params.zeta_plus**2, params.zeta_minus**2
    s = _sign(branch)

    def kernel(w):
        w2 = w * w
        return 1.0 / ((zp2 + w2) ** power_plus * (zm2 + w2) ** power_minus)

    val = cosine_integral(kernel, delta, params.zeta0, offset=1.0, amplitude=s, rtol=rtol)
    return _mode_prefactor(delta, params, branch) * val


@lru_cache(maxsize=8192)
def g_integrals(delta: float, params: OpoParams, branch: Branch = "plus",
                rtol: float = QUAD_RTOL) -> tuple[float, float]:
    """Amplitude gains (G_X, G_P) of the channel, by quadrature."""
    gx = _spectral_average(delta, params, branch, 0.5, 1.5, rtol)
    gp = _spectral_average(delta, params, branch, 1.5, 0.5, rtol)
    return gx, gp


def f_integrals(delta: float, params: OpoParams, branch: Branch = "plus") -> tuple[float, float]:
    """Output vacuum variances (F_X, F_P) in closed form.

    (1/2pi) int (1 +/- cos(Delta W)) / (z^2 + W^2)^2 dW = [1 +/- (1 + z Delta) e^{-z Delta}] / (4 z^3).
    """
    pref = _mode_prefactor(delta, params, branch) / 4
    s = _sign(branch)
    out = []
    for z in (params.zeta_minus, params.zeta_plus):
        x = z * delta
        num = 1 + (1 + x) * np.exp(-x) if s > 0 else _one_minus_poly_exp(x)
        out.append(pref * num / z**3)
    return out[0], out[1]


def _one_minus_poly_exp(x: float) -> float:
    """1 - (1 + x) e^{-x}, by its series sum_k (-1)^k (k-1) x^k / k! for small x."""
    if x > 0.5:
        return 1 - (1 + x) * np.exp(-x)
    total, fact = 0.0, 1.0
    for k in range(2, 40):
        fact *= k
        term = (-1) ** k * (k - 1) * x**k / fact
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total


def f_integrals_quad(delta: float, params: OpoParams, branch: Branch = "plus",
                     rtol: float = QUAD_RTOL) -> tuple[float, float]:
    """(F_X, F_P) from their definitions (1/2pi) int g^{+-2} |Psi|^2 dOmega."""
    fx = _spectral_average(delta, params, branch, 0.0, 2.0, rtol)
    fp = _spectral_average(delta, params, branch, 2.0, 0.0, rtol)
    return fx, fp


def vacuum_covariance() -> np.ndarray:
    return 0.5 * np.eye(2)


@dataclass(frozen=True)
class GaussianChannel:
    branch: str
    gx: float
    gp: float
    fx: float
    fp: float

    @property
    def s(self) -> np.ndarray:
        return np.diag([self.gx, self.gp])

    @property
    def y(self) -> np.ndarray:
        return np.diag([self.fx - self.gx**2, self.fp - self.gp**2])

    def apply(self, cov: np.ndarray) -> np.ndarray:
        """Map a covariance matrix (vacuum = I/2).

        ``y`` is quoted in shot-noise units (vacuum = 1), so the noise added
        to quadrature variances is y/2; the vacuum goes to diag(F_X, F_P)/2.
        """
        s = self.s
        return s.T @ np.asarray(cov) @ s + 0.5 * self.y

    @property
    def r(self) -> float:
        return -0.5 * np.log(self.gx / self.gp)

    @property
    def n_bar(self) -> float:
        return self.gx * self.gp - 1.0

    @classmethod
    def identity(cls, branch: str = "plus") -> "GaussianChannel":
        return cls(branch, 1.0, 1.0, 1.0, 1.0)


def channel(delta: float, params: OpoParams, branch: Branch = "plus",
            rtol: float = QUAD_RTOL, tol: float = PHYS_TOL) -> GaussianChannel:
    """Assemble the channel and check that it is physical."""
    gx, gp = g_integrals(float(delta), params, branch, rtol)
    fx, fp = f_integrals(delta, params, branch)
    ch = GaussianChannel(branch, gx, gp, fx, fp)
    y = np.diag(ch.y)
    if np.any(y < -tol) or ch.n_bar < -tol:
        raise PhysicalityError(
            f"unphysical {branch} channel at delta={delta}, eps={params.ratio}: "
            f"diag(Y)={y}, n_bar={ch.n_bar:.3e}"
        )
    return ch


def effective_params(ch: GaussianChannel) -> tuple[float, float]:
    """Effective squeezing -1/2 ln(G_X/G_P) and thermal photons G_X G_P - 1."""
    return ch.r, ch.n_bar
