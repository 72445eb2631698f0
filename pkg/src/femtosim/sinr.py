"""Instantaneous SINR for the four link classes, and the rate map.

Forward slot (macro-DL / femto-UL):
  * macro user k receives its zero-forced stream at per-stream power
    P0/K over interference from every femto user plus unit noise;
  * femto-BS f sees its own user through the MMSE quadratic form
    P_f h^H Sigma_f^-1 h with h the pathloss-scaled own channel.

Reverse slot (macro-UL / femto-DL), same vectors with swapped roles:
  * the macro-BS filters user k with its forward precoder; inter-user
    terms vanish by zero forcing and are therefore not accumulated;
  * femto user f receives its own base station's beam over interference
    from all other femto-BS beams and all macro user transmissions.

Rates are log2(1 + SINR) in bit/s/Hz.

The per-node functions here are straightforward transcriptions used by
tests and the single-slot inspector; :func:`dual_link_gains` precomputes
the full gain tables once so that iterative power control can reevaluate
all SINRs per iteration at a few matrix-vector products.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .beamforming import BeamformerSet, femto_interference_covariance
from .channel import ChannelRealization, Scenario


def rate(sinr) -> float:
    """Spectral efficiency log2(1 + SINR) in bit/s/Hz."""
    sinr = np.asarray(sinr, dtype=float)
    if np.any(sinr < 0):
        raise ValueError("SINR must be nonnegative")
    return np.log2(1.0 + sinr) if sinr.ndim else float(np.log2(1.0 + sinr))


def own_channel_effective(real: ChannelRealization, f: int) -> np.ndarray:
    """Pathloss-scaled own channel of femtocell f."""
    return np.sqrt(real.gains.femto_bs_femto_ut[f, f]) * real.h_cross[f, f]


def sinr_macro_dl(k: int, real: ChannelRealization, bf: BeamformerSet,
                  femto_powers: np.ndarray, scenario: Scenario) -> float:
    """Forward-slot SINR of macro user k under zero-forcing precoding."""
    gains = real.gains
    n_streams = bf.v.shape[0]
    signal = gains.macro_bs_ut[k] * abs(np.vdot(real.h_mc[k], bf.v[k])) ** 2 \
        * scenario.macro_power / n_streams
    interference = float(np.sum(
        gains.macro_ut_femto_ut[k] * np.abs(real.h_kf[k]) ** 2 * femto_powers))
    return signal / (1.0 + interference)


def sinr_femto_ul(f: int, real: ChannelRealization, bf: BeamformerSet,
                  femto_powers: np.ndarray, scenario: Scenario) -> float:
    """Forward-slot SINR of femtocell f's uplink under MMSE reception."""
    sigma = femto_interference_covariance(f, real, scenario, femto_powers, bf.v)
    h_own = own_channel_effective(real, f)
    quad = np.real(np.vdot(h_own, linalg.hermitian_solve(sigma, h_own)))
    return float(femto_powers[f] * quad)


def sinr_macro_ul(k: int, real: ChannelRealization, bf: BeamformerSet,
                  femto_dual_powers: np.ndarray, macro_dual_powers: np.ndarray,
                  scenario: Scenario) -> float:
    """Reverse-slot SINR of macro user k at the macro-BS.

    The receive filter is the forward precoder v_k; inter-user terms are
    zero by the zero-forcing construction and are omitted.
    """
    gains = real.gains
    signal = gains.macro_bs_ut[k] * macro_dual_powers[k] \
        * abs(np.vdot(bf.v[k], real.h_mc[k])) ** 2
    interference = 0.0
    for f in range(real.H_f0.shape[0]):
        beam = real.H_f0[f] @ bf.u[f]
        interference += gains.macro_bs_femto_bs[f] * femto_dual_powers[f] \
            * abs(np.vdot(bf.v[k], beam)) ** 2
    return signal / (1.0 + interference)


def sinr_femto_dl(f: int, real: ChannelRealization, bf: BeamformerSet,
                  femto_dual_powers: np.ndarray, macro_dual_powers: np.ndarray,
                  scenario: Scenario) -> float:
    """Reverse-slot SINR of femtocell f's user."""
    gains = real.gains
    signal = gains.femto_bs_femto_ut[f, f] * femto_dual_powers[f] \
        * abs(np.vdot(real.h_cross[f, f], bf.u[f])) ** 2
    interference = 0.0
    for j in range(real.h_cross.shape[0]):
        if j == f:
            continue
        interference += gains.femto_bs_femto_ut[j, f] * femto_dual_powers[j] \
            * abs(np.vdot(real.h_cross[j, f], bf.u[j])) ** 2
    interference += float(np.sum(
        gains.macro_ut_femto_ut[:, f] * np.abs(real.h_kf[:, f]) ** 2
        * macro_dual_powers))
    return signal / (1.0 + interference)


@dataclass
class DualLinkGains:
    """Scalar link gains of the reverse slot for fixed beamformers.

    With these tables the reverse-slot SINRs are bilinear in the powers:

        sinr_femto[f] = own_femto[f] q_f[f] /
            (1 + sum_j cross_femto[j, f] q_f[j] + sum_k macro_to_femto[k, f] q_m[k])
        sinr_macro[k] = own_macro[k] q_m[k] / (1 + sum_f femto_to_macro[k, f] q_f[f])

    ``cross_femto[f, j]`` equals the forward-slot gain of femto user j into
    femto-BS f's filter, reused transposed on the reverse slot; this exact
    reuse is what makes the two slot directions duals of each other.
    """

    own_femto: np.ndarray       # (F2,)
    own_macro: np.ndarray       # (K,)
    cross_femto: np.ndarray     # (F2, F2), zero diagonal
    macro_to_femto: np.ndarray  # (K, F2)
    femto_to_macro: np.ndarray  # (K, F2)


def dual_link_gains(real: ChannelRealization, bf: BeamformerSet,
                    scenario: Scenario) -> DualLinkGains:
    """Precompute all reverse-slot link gains for fixed beamformers."""
    gains = real.gains
    f2 = real.h_cross.shape[0]
    # femto-BS j's vector against femto user f's channel, all ordered pairs
    dots = np.einsum("jfl,jl->jf", real.h_cross_conj, bf.u)
    cross = gains.femto_bs_femto_ut * np.abs(dots) ** 2
    if f2:
        own_femto = cross[np.arange(f2), np.arange(f2)].copy()
        cross = cross.copy()
        cross[np.arange(f2), np.arange(f2)] = 0.0
    else:
        own_femto = np.zeros(0)
    own_macro = gains.macro_bs_ut * np.abs(
        np.einsum("km,km->k", bf.v.conj(), real.h_mc)) ** 2
    macro_to_femto = gains.macro_ut_femto_ut * np.abs(real.h_kf) ** 2
    beams = np.einsum("fml,fl->fm", real.H_f0, bf.u)   # (F2, M)
    femto_to_macro = gains.macro_bs_femto_bs[None, :] * np.abs(
        bf.v.conj() @ beams.T) ** 2
    return DualLinkGains(own_femto=own_femto, own_macro=own_macro,
                         cross_femto=cross, macro_to_femto=macro_to_femto,
                         femto_to_macro=femto_to_macro)


def evaluate_dual_sinrs(g: DualLinkGains, q_femto: np.ndarray,
                        q_macro: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All reverse-slot SINRs at the given powers, vectorized."""
    den_f = 1.0 + q_femto @ g.cross_femto + q_macro @ g.macro_to_femto
    den_k = 1.0 + g.femto_to_macro @ q_femto
    return g.own_femto * q_femto / den_f, g.own_macro * q_macro / den_k


def evaluate_macro_dl_sinrs(real: ChannelRealization, bf: BeamformerSet,
                            femto_powers: np.ndarray,
                            scenario: Scenario) -> np.ndarray:
    """Forward-slot macro SINRs for all scheduled users, vectorized."""
    gains = real.gains
    n_streams = bf.v.shape[0]
    signal = gains.macro_bs_ut * np.abs(
        np.einsum("km,km->k", real.h_mc.conj(), bf.v)) ** 2 \
        * scenario.macro_power / n_streams
    interference = (gains.macro_ut_femto_ut * np.abs(real.h_kf) ** 2) @ femto_powers
    return signal / (1.0 + interference)
