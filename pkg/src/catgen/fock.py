"""Single-mode states and operators in a truncated photon-number basis.

States are plain complex numpy arrays indexed by photon number; density
operators are square complex arrays. Quadratures follow

    X = (a + a^dag)/sqrt(2),   P = (a - a^dag)/(i sqrt(2)),

so the vacuum has <X^2> = <P^2> = 1/2 and characteristic function
exp[-(u^2 + v^2)/4].
"""
from __future__ import annotations

import warnings
from functools import lru_cache
from typing import Literal

import numpy as np
from scipy.linalg import expm
from scipy.special import eval_genlaguerre, gammaln

from .errors import NumericalError, TruncationWarning

DEFAULT_DIM = 40
TRUNCATION_TOL = 1e-10

Parity = Literal["even", "odd"]


def basis(n: int, dim: int = DEFAULT_DIM) -> np.ndarray:
    """Number state |n> as a length-``dim`` vector."""
    if not 0 <= n < dim:
        raise ValueError(f"photon number {n} outside truncation {dim}")
    vec = np.zeros(dim, dtype=complex)
    vec[n] = 1.0
    return vec


def vacuum(dim: int = DEFAULT_DIM) -> np.ndarray:
    return basis(0, dim)


def norm(state: np.ndarray) -> float:
    return float(np.sqrt(np.vdot(state, state).real))


def normalize(state: np.ndarray) -> np.ndarray:
    nrm = norm(state)
    if nrm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return state / nrm


def tail_mass(state: np.ndarray, width: int = 4) -> float:
    """Probability carried by the top ``width`` Fock levels."""
    return float(np.sum(np.abs(state[-width:]) ** 2))


@lru_cache(maxsize=32)
def _ladder(dim: int) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)
    a.setflags(write=False)
    return a


def annihilation_op(dim: int = DEFAULT_DIM) -> np.ndarray:
    return _ladder(dim).copy()


def creation_op(dim: int = DEFAULT_DIM) -> np.ndarray:
    return _ladder(dim).T.copy()


def number_op(dim: int = DEFAULT_DIM) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float))


def quadrature_ops(dim: int = DEFAULT_DIM) -> tuple[np.ndarray, np.ndarray]:
    """Truncated X and P matrices."""
    a = _ladder(dim)
    x = (a + a.T) / np.sqrt(2)
    p = (a - a.T) / (1j * np.sqrt(2))
    return x.astype(complex), p


def quadrature_variances(state: np.ndarray) -> tuple[float, float]:
    """<X^2> and <P^2> of a pure state.

    Built from a^2, a^dag^2 and the exact number operator so the top Fock
    level does not pick up the truncation artefact of squaring X directly.
    """
    dim = state.size
    a = _ladder(dim)
    a2 = a @ a
    n = np.arange(dim, dtype=float)
    psi = np.asarray(state, dtype=complex)
    mean_a2 = np.vdot(psi, a2 @ psi)
    mean_n = float(np.sum(n * np.abs(psi) ** 2))
    nrm2 = np.vdot(psi, psi).real
    cross = 2.0 * mean_a2.real
    vx = (cross + 2 * mean_n + nrm2) / 2 / nrm2
    vp = (-cross + 2 * mean_n + nrm2) / 2 / nrm2
    return float(vx), float(vp)


def mean_photon_number(state: np.ndarray) -> float:
    n = np.arange(state.size)
    return float(np.sum(n * np.abs(state) ** 2) / np.sum(np.abs(state) ** 2))


def coherent_state(alpha: complex, dim: int = DEFAULT_DIM, tol: float = TRUNCATION_TOL) -> np.ndarray:
    """Coherent state |alpha>, warning when the truncation drops more than ``tol``."""
    if dim < 1:
        raise ValueError("dim must be at least 1")
    n = np.arange(dim)
    log_mag = -0.5 * abs(alpha) ** 2 - 0.5 * gammaln(n + 1)
    if alpha == 0:
        amps = np.zeros(dim, dtype=complex)
        amps[0] = 1.0
        return amps
    amps = np.exp(log_mag + n * np.log(abs(alpha))) * np.exp(1j * n * np.angle(alpha))
    missing = 1.0 - float(np.sum(np.abs(amps) ** 2))
    if missing > tol:
        warnings.warn(
            f"coherent state |alpha|={abs(alpha):.3g} loses {missing:.2e} beyond dim={dim}",
            TruncationWarning,
            stacklevel=2,
        )
    return amps


def cat_norm(alpha: float, parity: Parity = "even") -> float:
    """Normalisation 2(1 +/- exp(-2 alpha^2)) of |alpha> +/- |-alpha>."""
    sign = 1.0 if parity == "even" else -1.0
    return 2.0 * (1.0 + sign * np.exp(-2.0 * alpha**2))


def cat_state(alpha: float, parity: Parity = "even", dim: int = DEFAULT_DIM) -> np.ndarray:
    """Normalised cat state (|alpha> +/- |-alpha>)/sqrt(N).

    Uses the analytic normalisation; only the parity-allowed Fock levels are
    populated, so the result is exact up to the truncation.
    """
    if parity not in ("even", "odd"):
        raise ValueError(f"unknown parity {parity!r}")
    if alpha < 0:
        raise ValueError("alpha is taken real and non-negative")
    if parity == "odd" and alpha == 0:
        raise ValueError("odd cat state with alpha=0 is the zero vector")
    if alpha == 0:
        return vacuum(dim)
    coh = coherent_state(alpha, dim)
    n = np.arange(dim)
    keep = (n % 2 == 0) if parity == "even" else (n % 2 == 1)
    # |alpha> + s|-alpha> has amplitude (1 + s(-1)^n) c_n = 2 c_n on kept levels
    return np.where(keep, 2.0 * coh, 0.0) / np.sqrt(cat_norm(alpha, parity))


@lru_cache(maxsize=256)
def squeeze_operator(r: float, dim: int = DEFAULT_DIM) -> np.ndarray:
    """exp[(r/2)(a^2 - a^dag^2)] in the truncated basis (read-only, cached)."""
    a = _ladder(dim)
    gen = 0.5 * r * (a @ a - a.T @ a.T)
    op = expm(gen)
    resid = np.max(np.abs(op.T @ op - np.eye(dim)))
    if resid > 1e-10:
        raise NumericalError(f"squeeze exponential not orthogonal: residual {resid:.2e} (r={r}, dim={dim})")
    op.setflags(write=False)
    return op


def squeeze(state: np.ndarray, r: float) -> np.ndarray:
    """Apply S(r); positive r squeezes X, negative r squeezes P."""
    if r == 0:
        return np.array(state, dtype=complex)
    return squeeze_operator(float(r), state.size) @ state


def annihilate(state: np.ndarray, n_times: int = 1) -> np.ndarray:
    """Apply the annihilation operator ``n_times`` (no renormalisation)."""
    out = np.asarray(state, dtype=complex)
    for _ in range(n_times):
        out = np.append(out[1:] * np.sqrt(np.arange(1, out.size)), 0.0)
    return out


def fidelity_pure(a: np.ndarray, b: np.ndarray) -> float:
    return float(abs(np.vdot(a, b)) ** 2)


def density(state: np.ndarray) -> np.ndarray:
    return np.outer(state, np.conj(state))


def fidelity_mixed_pure(rho: np.ndarray, target: np.ndarray) -> float:
    """<target|rho|target>."""
    return float(np.vdot(target, rho @ target).real)


def displacement_elements(beta, dim: int = DEFAULT_DIM) -> np.ndarray:
    """Matrix elements <m|D(beta)|n> for every m, n < dim.

    ``beta`` may be an array; the returned array has shape
    ``beta.shape + (dim, dim)``. Uses the associated-Laguerre closed form,
    which is exact (no truncation of D itself).
    """
    beta = np.asarray(beta, dtype=complex)
    x = np.abs(beta) ** 2
    gauss = np.exp(-x / 2)
    out = np.zeros(beta.shape + (dim, dim), dtype=complex)
    lf = gammaln(np.arange(dim) + 1.0)
    for m in range(dim):
        for n in range(m + 1):
            k = m - n
            lag = eval_genlaguerre(n, k, x)
            ratio = np.exp(0.5 * (lf[n] - lf[m]))
            out[..., m, n] = ratio * beta**k * gauss * lag
            if k:
                out[..., n, m] = ratio * (-np.conj(beta)) ** k * gauss * lag
    return out


def characteristic(rho: np.ndarray, u, v) -> np.ndarray:
    """Symmetric characteristic function Tr[rho exp(i(uX + vP))]."""
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    beta = (1j * u - v) / np.sqrt(2)
    d = displacement_elements(beta, rho.shape[0])
    return np.einsum("mn,...nm->...", rho, d)


def wigner_point(rho: np.ndarray, x, p) -> np.ndarray:
    """Wigner function W(x, p) of a density matrix.

    Evaluated as (1/pi) Tr[rho D(2g) Parity] with g = (x + ip)/sqrt(2),
    which keeps every matrix element exact. Accepts broadcastable arrays.
    """
    x, p = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(p, dtype=float))
    dim = rho.shape[0]
    beta = np.sqrt(2.0) * (x + 1j * p)
    xx = np.abs(beta) ** 2
    gauss = np.exp(-xx / 2)
    lf = gammaln(np.arange(dim) + 1.0)
    total = np.zeros(x.shape, dtype=complex)
    # <n|D(beta) Parity|m> = (-1)^m <n|D(beta)|m>
    for m in range(dim):
        for n in range(dim):
            rho_mn = rho[m, n]
            if rho_mn == 0:
                continue
            lo, hi = min(m, n), max(m, n)
            k = hi - lo
            base = np.exp(0.5 * (lf[lo] - lf[hi])) * gauss * eval_genlaguerre(lo, k, xx)
            if n >= m:
                elem = base * beta**k
            else:
                elem = base * (-np.conj(beta)) ** k
            total += rho_mn * (-1) ** m * elem
    return total.real / np.pi
