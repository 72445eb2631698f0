"""Zero-forcing precoders, MMSE receive filters, and the duality swap.

The macro-BS uses linear zero-forcing beamforming: precoder i is the i-th
column of the conjugated pseudo-inverse of the stacked user channel
matrix, normalized to unit norm, so that user k's channel is orthogonal
to every other user's precoder.  Each femto-BS runs a linear MMSE receive
filter, proportional to (interference-plus-noise covariance)^-1 times its
own effective channel.  For the reverse slot the same vectors are reused
with swapped roles: femto receive filters become transmit precoders and
macro precoders become receive filters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .channel import ChannelRealization, Scenario, complex_normal


@dataclass
class BeamformerSet:
    """Unit-norm macro vectors v (K, M) and femto vectors u (F2, L).

    ``swapped`` is False on the slot the vectors were computed for
    (macro-DL / femto-UL) and True after :func:`duality_swap`, when v acts
    as macro receive filters and u as femto transmit precoders.
    """

    v: np.ndarray
    u: np.ndarray
    swapped: bool = False


def align_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate a vector so its largest-magnitude entry is real nonnegative.

    Fixes the per-vector phase ambiguity, making outputs deterministic and
    directly comparable across algebraically equivalent formulas.
    """
    idx = int(np.argmax(np.abs(vec)))
    pivot = vec[idx]
    mag = abs(pivot)
    if mag == 0.0:
        return vec
    return vec * (pivot.conj() / mag)


def _normalize(vec: np.ndarray) -> np.ndarray:
    nrm = np.linalg.norm(vec)
    if nrm == 0.0:
        raise ValueError("cannot normalize a zero vector")
    return align_phase(vec / nrm)


def lzfb_precoders(h_mc_matrix: np.ndarray) -> np.ndarray:
    """Zero-forcing precoders for the stacked channel matrix (M, K).

    Column k of the input is user k's channel.  Returns a (K, M) array
    whose row i is the unit-norm precoder for user i, orthogonal to every
    other user's channel.  Raises RankDeficientError on degenerate draws;
    the caller resamples the fading.
    """
    h = np.asarray(h_mc_matrix, dtype=complex)
    pinv = linalg.pseudo_inverse(h)
    k = h.shape[1]
    v = np.empty((k, h.shape[0]), dtype=complex)
    for i in range(k):
        v[i] = _normalize(pinv[i].conj())
    return v


def femto_interference_covariance(f: int, real: ChannelRealization,
                                  scenario: Scenario, femto_powers: np.ndarray,
                                  v: np.ndarray) -> np.ndarray:
    """Interference-plus-noise covariance at femto-BS f's array.

    Identity (noise) plus one rank-one term per interfering femto user,
    weighted by its pathloss and transmit power, plus the macro downlink
    contribution through the precoders v at per-stream power P0/K.
    Reference implementation for a single cell; the engine uses the
    batched :func:`femto_interference_covariances` with identical output.
    """
    gains = real.gains
    l_ant = scenario.femto_antennas
    k = v.shape[0]
    sigma = np.eye(l_ant, dtype=complex)
    for j in range(real.h_cross.shape[1]):
        if j == f:
            continue
        w = gains.femto_bs_femto_ut[f, j] * femto_powers[j]
        if w:
            sigma = linalg.rank_one_update(sigma, real.h_cross[f, j], w)
    d = real.H_f0[f].conj().T @ v.T            # (L, K), columns H^H v_k
    macro = (gains.macro_bs_femto_bs[f] * scenario.macro_power / k) * (d @ d.conj().T)
    sigma = sigma + 0.5 * (macro + macro.conj().T)
    return sigma


def femto_interference_covariances(real: ChannelRealization, scenario: Scenario,
                                   femto_powers: np.ndarray,
                                   v: np.ndarray) -> np.ndarray:
    """Batched (F2, L, L) interference-plus-noise covariances, all cells."""
    f2 = real.h_cross.shape[0]
    l_ant = scenario.femto_antennas
    k = v.shape[0]
    weights = real.gains.femto_bs_femto_ut * np.asarray(femto_powers)[None, :]
    if f2:
        idx = np.arange(f2)
        weights = weights.copy()
        weights[idx, idx] = 0.0
    sigma = (real.h_cross_t * weights[:, None, :]) @ real.h_cross_conj
    d = np.einsum("fml,km->flk", real.H_f0.conj(), v)
    scale = real.gains.macro_bs_femto_bs * scenario.macro_power / k
    sigma += scale[:, None, None] * (d @ np.swapaxes(d, 1, 2).conj())
    sigma += np.eye(l_ant, dtype=complex)[None, :, :]
    return 0.5 * (sigma + np.swapaxes(sigma, 1, 2).conj())


def mmse_receiver(sigma: np.ndarray, h_own_eff: np.ndarray) -> np.ndarray:
    """Unit-norm MMSE receive filter  u ~ sigma^-1 h  for one femtocell.

    ``h_own_eff`` is the pathloss-scaled own channel; the filter direction
    is invariant to its positive scaling.
    """
    return _normalize(linalg.hermitian_solve(sigma, h_own_eff))


def mmse_receiver_from_samples(sigma: np.ndarray, h_own_eff: np.ndarray,
                               own_power: float, n_samples: int,
                               rng: np.random.Generator) -> np.ndarray:
    """MMSE filter estimated from a sample covariance of received vectors.

    Simulates n_samples received vectors (own signal at ``own_power`` plus
    Gaussian interference-plus-noise with covariance ``sigma``), forms the
    sample covariance of the received signal, and inverts it against the
    own channel.  Converges to :func:`mmse_receiver` as n_samples grows,
    because the received-signal covariance equals sigma plus the own-signal
    rank-one term and adding that term does not change the filter direction.
    """
    l_ant = sigma.shape[0]
    chol = np.linalg.cholesky(sigma)
    # rows are received vectors y^T with y = x h + chol z, z white
    noise = complex_normal(rng, (n_samples, l_ant)) @ chol.T
    symbols = complex_normal(rng, (n_samples,)) * np.sqrt(own_power)
    received = symbols[:, None] * h_own_eff[None, :] + noise
    sample_cov = received.T @ received.conj() / n_samples
    sample_cov = 0.5 * (sample_cov + sample_cov.conj().T)
    return _normalize(np.linalg.solve(sample_cov, h_own_eff))


def duality_swap(bf: BeamformerSet) -> BeamformerSet:
    """Reinterpret the beamformers for the reverse slot; vectors unchanged."""
    return BeamformerSet(v=bf.v, u=bf.u, swapped=not bf.swapped)
