"""The heralded two-mode state and its reduction to the symmetric mode.

After clicks at t1 and t2 the output is S_A applied to

    N_nu (1+I)/sqrt(2) |2+,0-> - N_nu (1-I)/sqrt(2) |0+,2-> + F |0+,0->,

so tracing out the antisymmetric mode leaves a mixture of c2|2> + c0|0>
(weight C_phi) and vacuum (weight C_v), each passed through the plus-mode
channel.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .opo import Method, OpoParams, f_delta, i_delta, n_nu


@dataclass(frozen=True)
class ConditionalDecomposition:
    delta: float
    c2: float
    c0: float
    C_phi: float
    C_v: float
    N: float
    N_phi: float
    n_nu: float
    i_delta: float
    f_delta: float

    def two_mode_amplitudes(self) -> np.ndarray:
        """Normalised amplitudes on (|2+,0->, |0+,2->, |0+,0->)."""
        amps = np.array([self.n_nu * (1 + self.i_delta) / np.sqrt(2),
                         -self.n_nu * (1 - self.i_delta) / np.sqrt(2),
                         self.f_delta])
        return amps / np.sqrt(self.N)

    @property
    def pre_channel_density(self) -> np.ndarray:
        """C_phi |phi><phi| + C_v |0><0| on Fock levels 0..2."""
        phi = np.array([self.c0, 0.0, self.c2])
        rho = self.C_phi * np.outer(phi, phi)
        rho[0, 0] += self.C_v
        return rho


def decompose(delta: float, params: OpoParams, method: Method = "closed") -> ConditionalDecomposition:
    """Mixture weights and |phi> amplitudes of the symmetric-mode state.

    At delta = 0 the antisymmetric term vanishes and C_v = 0 exactly.
    """
    if delta < 0:
        raise ValueError("click separation must be non-negative")
    nn = n_nu(params)
    ov = i_delta(delta, params, method)
    fd = f_delta(delta, params, method)
    a2 = nn * (1 + ov) / np.sqrt(2)
    n_phi = a2**2 + fd**2
    n_vac = (nn * (1 - ov)) ** 2 / 2
    total = n_phi + n_vac
    c_phi = n_phi / total
    c_v = 0.0 if delta == 0 else n_vac / total
    return ConditionalDecomposition(
        delta=float(delta), c2=a2 / np.sqrt(n_phi), c0=fd / np.sqrt(n_phi),
        C_phi=1.0 - c_v if delta == 0 else c_phi, C_v=c_v,
        N=total, N_phi=n_phi, n_nu=nn, i_delta=ov, f_delta=fd,
    )


def mixing_curves(delta_grid, params: OpoParams, method: Method = "closed") -> np.ndarray:
    """Rows (delta, C_phi, C_v, c2^2, c0^2)."""
    rows = []
    for d in delta_grid:
        dec = decompose(float(d), params, method)
        rows.append((float(d), dec.C_phi, dec.C_v, dec.c2**2, dec.c0**2))
    return np.array(rows)


@dataclass(frozen=True)
class InterferenceDecomposition:
    """|rho_cw> = sigma_+ |gamma_+>|0-> - sigma_- |0+>|gamma_->, up to the squeezer.

    ``gamma_plus`` and ``gamma_minus`` hold normalised (|2>, |0>) amplitudes.
    """

    delta: float
    gamma_plus: tuple[float, float]
    gamma_minus: tuple[float, float]
    sigma_plus: float
    sigma_minus: float

    def two_mode_amplitudes(self) -> np.ndarray:
        """Normalised amplitudes on (|2+,0->, |0+,2->, |0+,0->).

        Both branches carry a |0+,0-> component, so the vacuum amplitude is
        the difference of the two branch vacua.
        """
        sp_, sm_ = self.sigma_plus, self.sigma_minus
        amps = np.array([
            sp_ * self.gamma_plus[0],
            -sm_ * self.gamma_minus[0],
            sp_ * self.gamma_plus[1] - sm_ * self.gamma_minus[1],
        ])
        return amps / np.linalg.norm(amps)


def interference_decompose(delta: float, params: OpoParams) -> InterferenceDecomposition:
    """Closed-form branch states from splitting A(t2)A(t1) into (A_t+^2 - A_t-^2)/2."""
    if delta < 0:
        raise ValueError("click separation must be non-negative")
    zm, zp = params.zeta_minus, params.zeta_plus
    out = {}
    for s, name in ((1.0, "plus"), (-1.0, "minus")):
        em = (1 + s * np.exp(-zm * delta)) / zm
        ep = (1 + s * np.exp(-zp * delta)) / zp
        two, zero = np.sqrt(2) * (em - ep), em + ep
        sigma = np.hypot(two, zero)
        if sigma == 0.0:
            # delta -> 0 limit of the minus branch: two ~ eps delta^2, zero ~ 2 delta
            out[name] = ((0.0, 1.0), 0.0)
            continue
        out[name] = ((two / sigma, zero / sigma), sigma)
    return InterferenceDecomposition(float(delta), out["plus"][0], out["minus"][0],
                                     out["plus"][1], out["minus"][1])


@dataclass(frozen=True)
class SmallEpsilonDecomposition:
    """Leading-order-in-eps/zeta0 picture of the symmetric-mode state.

    The pure part is S_+[(eps delta_+/zeta0) A_+^dag^2 + 1]|0> - tanh(zeta0 Delta/2) S_+|0>.
    """

    delta: float
    c2: float
    c0: float
    C_phi: float
    C_v: float
    sigma_plus: float
    sigma_minus: float
    delta_plus: float
    delta_minus: float
    vacuum_offset: float


def small_epsilon(delta: float, params: OpoParams) -> SmallEpsilonDecomposition:
    if delta < 0:
        raise ValueError("click separation must be non-negative")
    x = params.zeta0 * delta
    eps = params.ratio
    decay = np.exp(-x)
    sig_p, sig_m = (1 + decay) / 2, (1 - decay) / 2
    d_plus = 1 + x * decay / (1 + decay)
    d_minus = 1 - x * decay / (1 - decay) if x > 0 else np.nan
    offset = np.tanh(x / 2)
    # <2|A^dag^2|0> = sqrt(2)
    two, zero = np.sqrt(2) * eps * d_plus, 1.0 - offset
    nrm = np.hypot(two, zero)
    overlap = (1 + x) * decay  # I_Delta at eps -> 0
    c_v = 0.5 * eps**2 * (1 - overlap) ** 2 / (eps**2 * (1 + overlap**2) + np.exp(-2 * x))
    return SmallEpsilonDecomposition(float(delta), two / nrm, zero / nrm, 1 - c_v, c_v,
                                     sig_p, sig_m, d_plus, d_minus, offset)
