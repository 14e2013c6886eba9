"""Phase-space description of the heralded symmetric-mode state.

The state C_phi S+(|phi><phi|) + C_v S+(|0><0|) has characteristic function

    chi_+(u, v) = C_phi chi_phi(G_X u, G_P v) chi_0(sqrt(F_X - G_X^2) u, sqrt(F_P - G_P^2) v)
                + C_v chi_0(sqrt(F_X) u, sqrt(F_P) v)

and a closed-form Wigner function. Fidelity with an even cat is the
phase-space overlap 2 pi int W_+ W_cat.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fock
from .channel import GaussianChannel, channel
from .conditional import ConditionalDecomposition, decompose
from .errors import NumericalError, PhysicalityError
from .opo import Method, OpoParams
from .parallel import ordered_map

SQRT2 = np.sqrt(2.0)
FIG5_DELTAS = (0.0, 1.4, 2.4)
FIG5_RATIO = 0.27


def chi_vacuum(u, v):
    return np.exp(-0.25 * (np.asarray(u) ** 2 + np.asarray(v) ** 2))


def chi_phi(u, v, c2: float, c0: float):
    """Characteristic function of c2|2> + c0|0> (real amplitudes).

    From <m|D|n> with |beta|^2 = (u^2 + v^2)/2:
    {1 - c2^2 (u^2+v^2) - (c0 c2/sqrt2)(u^2 - v^2) + (c2^2/8)(u^2+v^2)^2} exp[-(u^2+v^2)/4].
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    s = u**2 + v**2
    poly = 1.0 - c2**2 * s - c0 * c2 * (u**2 - v**2) / SQRT2 + c2**2 * s**2 / 8.0
    return poly * np.exp(-0.25 * s)


def _noise_roots(ch: GaussianChannel, tol: float = 1e-10) -> tuple[float, float]:
    nx, np_ = ch.fx - ch.gx**2, ch.fp - ch.gp**2
    if nx < -tol or np_ < -tol:
        raise PhysicalityError(f"negative added noise ({nx:.3e}, {np_:.3e})")
    return np.sqrt(max(nx, 0.0)), np.sqrt(max(np_, 0.0))


def chi_plus(u, v, decomp: ConditionalDecomposition, ch_plus: GaussianChannel):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    sx, sp = _noise_roots(ch_plus)
    pure = chi_phi(ch_plus.gx * u, ch_plus.gp * v, decomp.c2, decomp.c0) * chi_vacuum(sx * u, sp * v)
    vac = chi_vacuum(np.sqrt(ch_plus.fx) * u, np.sqrt(ch_plus.fp) * v)
    return decomp.C_phi * pure + decomp.C_v * vac


def w_plus_closed(x, p, decomp: ConditionalDecomposition, ch_plus: GaussianChannel):
    """Closed-form Wigner function of the symmetric-mode state."""
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    gx, gp, fx, fp = ch_plus.gx, ch_plus.gp, ch_plus.fx, ch_plus.fp
    c2, c0, cphi = decomp.c2, decomp.c0, decomp.C_phi
    qx, qp = 2 * x**2 - fx, 2 * p**2 - fp
    bracket = (
        -1.5 * c2**2 * (gx**4 / fx**2 + gp**4 / fp**2)
        + gx**2 / fx**2 * (SQRT2 * c2 * (c0 + SQRT2 * c2) - 3 * c2**2 * gx**2 / fx) * qx
        - gp**2 / fp**2 * (SQRT2 * c2 * (c0 - SQRT2 * c2) + 3 * c2**2 * gp**2 / fp) * qp
        + c2**2 * gx**2 * gp**2 / (fx**2 * fp**2) * qx * qp
        + 2 * c2**2 * (gx**4 / fx**4 * x**4 + gp**4 / fp**4 * p**4)
    )
    return (1 + cphi * bracket) * np.exp(-x**2 / fx - p**2 / fp) / (np.pi * np.sqrt(fx * fp))


def trapezoid_weights(axis: np.ndarray) -> np.ndarray:
    if axis.size < 2:
        raise ValueError("need at least two grid points")
    h = np.diff(axis)
    w = np.empty_like(axis)
    w[1:-1] = 0.5 * (h[:-1] + h[1:])
    w[0], w[-1] = 0.5 * h[0], 0.5 * h[-1]
    return w


@dataclass(frozen=True)
class WignerGrid:
    x: np.ndarray
    p: np.ndarray
    values: np.ndarray  # indexed [x, p]

    @property
    def weights(self) -> np.ndarray:
        return np.outer(trapezoid_weights(self.x), trapezoid_weights(self.p))

    def integral(self) -> float:
        return float(np.sum(self.weights * self.values))

    def overlap(self, other: "WignerGrid") -> float:
        """2 pi int W1 W2 on a shared grid (= Tr[rho1 rho2])."""
        if self.values.shape != other.values.shape:
            raise ValueError("grids differ")
        return float(2 * np.pi * np.sum(self.weights * self.values * other.values))

    def rows(self):
        """Long-format (x, p, W) triplets, x-major."""
        xx, pp = np.meshgrid(self.x, self.p, indexing="ij")
        return np.column_stack([xx.ravel(), pp.ravel(), self.values.ravel()])


def w_plus_grid(x_axis, p_axis, decomp, ch_plus) -> WignerGrid:
    x_axis = np.asarray(x_axis, dtype=float)
    p_axis = np.asarray(p_axis, dtype=float)
    xx, pp = np.meshgrid(x_axis, p_axis, indexing="ij")
    return WignerGrid(x_axis, p_axis, w_plus_closed(xx, pp, decomp, ch_plus))


def w_plus_numeric(x_axis, p_axis, decomp: ConditionalDecomposition, ch_plus: GaussianChannel,
                   edge_tol: float = 1e-10) -> WignerGrid:
    """Wigner function as a direct 2-D Fourier transform of chi_+.

    W(x, p) = (1/4pi^2) int int chi_+(u, v) cos(ux) cos(vp) du dv, using that
    chi_+ is even in u and in v. The frequency box is sized from the
    Gaussian envelope exp[-(F_X u^2 + F_P v^2)/4] and the step from the
    requested x, p extent so that periodic images stay negligible.
    """
    x_axis = np.asarray(x_axis, dtype=float)
    p_axis = np.asarray(p_axis, dtype=float)
    fx, fp = ch_plus.fx, ch_plus.fp
    u_max = np.sqrt(180.0 / fx)
    v_max = np.sqrt(180.0 / fp)
    reach = max(np.max(np.abs(x_axis)), np.max(np.abs(p_axis))) + 12 * np.sqrt(max(fx, fp))
    h = min(0.1, np.pi / reach)
    u = np.arange(-u_max, u_max + h / 2, h)
    v = np.arange(-v_max, v_max + h / 2, h)
    chi = chi_plus(u[:, None], v[None, :], decomp, ch_plus)
    edge = max(np.max(np.abs(chi[[0, -1], :])), np.max(np.abs(chi[:, [0, -1]])))
    if edge > edge_tol:
        raise NumericalError(f"characteristic function not decayed at the box edge ({edge:.2e})")
    wu, wv = trapezoid_weights(u), trapezoid_weights(v)
    cx = np.cos(np.outer(x_axis, u)) * wu
    cp = np.cos(np.outer(v, p_axis)) * wv[:, None]
    values = cx @ chi @ cp / (4 * np.pi**2)
    return WignerGrid(x_axis, p_axis, values)


def cat_wigner(x, p, alpha: float, parity: fock.Parity = "even"):
    """Wigner function of (|alpha> +/- |-alpha>)/sqrt(N) for real alpha.

    Lobes sit at x = +/- sqrt(2) alpha; the interference term is
    +/- 2 exp(-x^2 - p^2) cos(2 sqrt(2) alpha p).
    """
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    sign = 1.0 if parity == "even" else -1.0
    shift = SQRT2 * alpha
    lobes = np.exp(-((x - shift) ** 2) - p**2) + np.exp(-((x + shift) ** 2) - p**2)
    fringe = 2 * sign * np.exp(-(x**2) - p**2) * np.cos(2 * shift * p)
    return (lobes + fringe) / (np.pi * fock.cat_norm(alpha, parity))


def _overlap_on_box(decomp, ch_plus, alpha, half_width, n):
    axis = np.linspace(-half_width, half_width, n)
    xx, pp = np.meshgrid(axis, axis, indexing="ij")
    w_state = w_plus_closed(xx, pp, decomp, ch_plus)
    w_cat = cat_wigner(xx, pp, alpha)
    weights = np.outer(trapezoid_weights(axis), trapezoid_weights(axis))
    return float(2 * np.pi * np.sum(weights * w_state * w_cat))


def fidelity_to_cat(decomp: ConditionalDecomposition, ch_plus: GaussianChannel, alpha: float,
                    tol: float = 1e-4, max_refine: int = 4) -> float:
    """<C_+|rho_+|C_+> as a phase-space overlap, refined until stable to ``tol``.

    The spacing is halved until two successive values differ by less than
    ``tol``; the box covers the cat lobes and the widest state quadrature.
    """
    if max_refine < 1:
        raise ValueError("max_refine must be at least 1")
    spread = np.sqrt(max(ch_plus.fx, ch_plus.fp, 1.0))
    half_width = SQRT2 * alpha + 9.0 * spread
    n = 121
    prev = _overlap_on_box(decomp, ch_plus, alpha, half_width, n)
    for _ in range(max_refine):
        n = 2 * n - 1
        cur = _overlap_on_box(decomp, ch_plus, alpha, half_width, n)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    raise NumericalError(f"phase-space fidelity did not settle (last change {abs(cur - prev):.2e})")


def fidelity_fock_route(decomp: ConditionalDecomposition, ch_plus: GaussianChannel, alpha: float,
                        dim: int = 60) -> float:
    """Fidelity with the channel replaced by the unitary squeeze S(r_+).

    Only meaningful where the channel adds negligible thermal noise.
    """
    rho = np.zeros((dim, dim), dtype=complex)
    rho[:3, :3] = decomp.pre_channel_density
    sq = fock.squeeze_operator(float(ch_plus.r), dim)
    rho = sq @ rho @ sq.T
    return fock.fidelity_mixed_pure(rho, fock.cat_state(alpha, "even", dim))


def plus_state(delta: float, params: OpoParams, method: Method = "closed",
               rtol: float | None = None) -> tuple[ConditionalDecomposition, GaussianChannel]:
    """Decomposition and symmetric-mode channel for one click separation."""
    dec = decompose(delta, params, method)
    ch = channel(delta, params, "plus") if rtol is None else channel(delta, params, "plus", rtol=rtol)
    return dec, ch


def _fidelity_row(job):
    delta, ratio, alphas, rtol = job
    dec, ch = plus_state(delta, OpoParams.from_ratio(ratio), rtol=rtol)
    return [fidelity_to_cat(dec, ch, a) for a in alphas]


def fidelity_sweep(delta_grid, params: OpoParams, alphas, workers: int | None = None,
                   rtol: float | None = None) -> np.ndarray:
    """Fidelity to C_+(alpha), shape (len(delta_grid), len(alphas))."""
    jobs = [(float(d), params.ratio, tuple(float(a) for a in alphas), rtol) for d in delta_grid]
    return np.array(ordered_map(_fidelity_row, jobs, workers))
