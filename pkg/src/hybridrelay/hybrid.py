"""Relay processing: phase-only analog beamformers, digital MRC/MRT stage,
power normalization, and the quantized-phase variants of all three."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .channel import ChannelRealization
from .config import SystemConfig


class DegenerateChannelError(RuntimeError):
    """Raised when the relay power normalization is undefined for a draw."""


@dataclass(frozen=True)
class QuantizationSpec:
    """Uniform phase codebook with 2**bits codewords, spaced 2*pi/2**bits."""

    bits: int

    def __post_init__(self) -> None:
        if self.bits < 1:
            raise ValueError("bits must be a positive integer")

    @property
    def step(self) -> float:
        """Half the codeword spacing: quantization error lies in [-step, step)."""
        return math.pi / 2 ** self.bits


@dataclass(frozen=True)
class HybridProcessor:
    """Analog + digital processing state for one channel realization."""

    f1: np.ndarray  # K_r x N analog combiner, constant magnitude 1/sqrt(N)
    f2: np.ndarray  # K_t x N analog precoder, constant magnitude 1/sqrt(N)
    w: np.ndarray   # K_t x K_r digital matrix, alpha * a2 @ a1^H
    alpha: float    # power normalization scalar
    a1: np.ndarray  # f1 @ g1, effective receive channel (K_r x K)
    a2: np.ndarray  # f2 @ g2, effective transmit channel (K_t x K)


@dataclass(frozen=True)
class FullDigitalProcessor:
    """Factored form of the full-digital MRC/MRT matrix alpha * g2 @ g1^H.

    The N x N matrix itself is never materialized; consumers contract the
    factors right-to-left.
    """

    g1: np.ndarray
    g2: np.ndarray
    alpha: float


def quantize_phase(
    phi: Union[float, np.ndarray], quant: QuantizationSpec
) -> Union[float, np.ndarray]:
    """Snap a phase in radians to the nearest codeword of the uniform codebook.

    The input is reduced modulo 2*pi first.  A value exactly midway between
    two codewords snaps to the higher one, so the circular error
    (reduced phase - result) always lies in [-step, +step).  The returned
    codeword may equal 2*pi, which is the zero codeword expressed without
    wrapping past the input.
    """
    spacing = 2.0 * quant.step
    reduced = np.mod(phi, 2.0 * np.pi)
    return np.floor(reduced / spacing + 0.5) * spacing


def build_analog(
    g: np.ndarray, n_chains: int, quant: Optional[QuantizationSpec] = None
) -> np.ndarray:
    """Phase-matched analog beamformer for a channel matrix.

    Row i conjugate-matches the phases of channel column i at constant
    amplitude: entry (i, j) is exp(-1j * angle(g[j, i])) / sqrt(N).  With
    `quant` set, the channel phase is snapped to the codebook before
    negation.  Only the first n_chains columns of g are used; requesting
    more chains than channel columns is an error because the remaining rows
    would have no channel to match.
    """
    g = np.asarray(g)
    n = g.shape[0]
    if not 1 <= n_chains <= g.shape[1]:
        raise ValueError(
            f"n_chains must be in [1, {g.shape[1]}] for a channel with "
            f"{g.shape[1]} columns, got {n_chains}"
        )
    phases = np.angle(g[:, :n_chains]).T.copy()
    if quant is not None:
        phases = quantize_phase(phases, quant)
    return np.exp(-1j * phases) / math.sqrt(n)


def compute_alpha(
    a1: np.ndarray,
    a2: np.ndarray,
    f1: np.ndarray,
    f2: np.ndarray,
    p_user: float,
    p_relay: float,
    var_relay_noise: float,
) -> float:
    """Normalization making the average relay transmit power equal p_relay.

        alpha = sqrt(p_relay / (p_user * ||F2^H A2 A1^H A1||_F^2
                                + var_nR * ||F2^H A2 A1^H F1||_F^2))

    The noise-forwarding norm is evaluated through chain-sized Gram matrices
    (||X F1||_F^2 = tr((X^H X)(F1 F1^H))), so no N x N product is formed.
    """
    t = a2 @ a1.conj().T
    y = f2.conj().T @ (t @ a1)
    signal_term = float(np.sum(np.abs(y) ** 2))
    x = f2.conj().T @ t
    gram_x = x.conj().T @ x
    gram_f1 = f1 @ f1.conj().T
    noise_term = float(np.trace(gram_x @ gram_f1).real)
    den = p_user * signal_term + var_relay_noise * noise_term
    if not np.isfinite(den) or den <= 0.0:
        raise DegenerateChannelError(
            "relay power normalization undefined: zero or non-finite "
            "forwarded power"
        )
    return math.sqrt(p_relay / den)


def build_processor(
    real: ChannelRealization, config: SystemConfig
) -> HybridProcessor:
    """Assemble the full hybrid processing chain for one realization.

    The quantized path is taken iff config.quant_bits is set; alpha is
    recomputed per realization (instantaneous power constraint).
    """
    quant = (
        QuantizationSpec(config.quant_bits)
        if config.quant_bits is not None
        else None
    )
    f1 = build_analog(real.g1, config.n_rx_chains, quant)
    f2 = build_analog(real.g2, config.n_tx_chains, quant)
    a1 = f1 @ real.g1
    a2 = f2 @ real.g2
    alpha = compute_alpha(
        a1, a2, f1, f2,
        config.p_user, config.p_relay, config.var_relay_noise,
    )
    w = alpha * (a2 @ a1.conj().T)
    return HybridProcessor(f1=f1, f2=f2, w=w, alpha=alpha, a1=a1, a2=a2)


def build_full_digital(
    real: ChannelRealization, config: SystemConfig
) -> FullDigitalProcessor:
    """Reference processor with one RF chain per antenna and no analog stage.

        W_full = alpha_full * g2 @ g1^H
        alpha_full = sqrt(p_relay / (p_user * ||G2 G1^H G1||_F^2
                                     + var_nR * ||G2 G1^H||_F^2))

    ||G2 G1^H||_F^2 is evaluated as tr((G2^H G2)(G1^H G1)).
    """
    g1, g2 = real.g1, real.g2
    c1 = g1.conj().T @ g1
    signal_term = float(np.sum(np.abs(g2 @ c1) ** 2))
    c2 = g2.conj().T @ g2
    noise_term = float(np.trace(c2 @ c1).real)
    den = config.p_user * signal_term + config.var_relay_noise * noise_term
    if not np.isfinite(den) or den <= 0.0:
        raise DegenerateChannelError(
            "relay power normalization undefined: zero or non-finite "
            "forwarded power"
        )
    return FullDigitalProcessor(g1=g1, g2=g2, alpha=math.sqrt(config.p_relay / den))


def sinc_penalty(quant: Optional[QuantizationSpec]) -> float:
    """Beamforming-gain penalty sin(step)/step of a quantized phase stage.

    Tends to 1 as bits grow; None (continuous phases) gives exactly 1.
    """
    if quant is None:
        return 1.0
    return float(np.sinc(quant.step / np.pi))
