"""Numerical checks that the analog stage approaches its large-array limits.

Two instruments:
  * orthonormality of the analog combiner rows (F F^H against the identity),
  * alignment of F with the raw fading (F H against a scaled identity).
Both shrink like 1/sqrt(N) and are reported against a 5/sqrt(N) envelope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import channel
from .config import SystemConfig
from .hybrid import QuantizationSpec, build_analog, sinc_penalty

METRICS = ("orthonormality", "fh_convergence")

# Row norms of the analog stage are exact by construction; only float
# accumulation separates them from 1.
DIAG_TOL = 1e-12


@dataclass(frozen=True)
class ConvergenceReport:
    """Outcome of one deviation measurement at one array size."""

    n_antennas: int
    metric_name: str
    deviation: float
    bound: float
    passed: bool


def orthonormality_parts(f: np.ndarray) -> Tuple[float, float]:
    """(max |diag(F F^H) - 1|, max off-diagonal |F F^H|)."""
    p = f @ f.conj().T
    diag = np.abs(np.diagonal(p) - 1.0)
    off = np.abs(p - np.diag(np.diagonal(p)))
    return float(diag.max()), float(off.max())


def fh_parts(
    f: np.ndarray,
    h: np.ndarray,
    n: int,
    quant: Optional[QuantizationSpec] = None,
) -> Tuple[float, float, float]:
    """Deviation of F H / sqrt(N pi/4) from c * I, c = sinc(step) (1 unquantized).

    The target identity covers the first r = min(chains, columns) diagonal
    entries; everything else converges to zero.  Returns (max diagonal
    deviation, max other-entry magnitude, mean real part of the diagonal).
    """
    target = sinc_penalty(quant)
    m = (f @ h) / math.sqrt(n * math.pi / 4.0)
    r = min(m.shape)
    idx = np.arange(r)
    diag = m[idx, idx]
    diag_dev = float(np.abs(diag - target).max())
    rest = m.copy()
    rest[idx, idx] = 0.0
    off_dev = float(np.abs(rest).max()) if rest.size > r else 0.0
    return diag_dev, off_dev, float(diag.real.mean())


def check_orthonormality(f: np.ndarray, n: int) -> ConvergenceReport:
    """Check F F^H against the identity.

    Diagonals must match 1 to DIAG_TOL (each row is an exact average of N
    unit-magnitude entries); off-diagonals are empirical means of N random
    unit phasors and are held to 5/sqrt(N).
    """
    diag_dev, off_dev = orthonormality_parts(f)
    bound = 5.0 / math.sqrt(n)
    return ConvergenceReport(
        n_antennas=n,
        metric_name="orthonormality",
        deviation=max(diag_dev, off_dev),
        bound=bound,
        passed=bool(diag_dev <= DIAG_TOL and off_dev <= bound),
    )


def check_fh_convergence(
    f: np.ndarray,
    h: np.ndarray,
    n: int,
    quant: Optional[QuantizationSpec] = None,
) -> ConvergenceReport:
    """Check F H / sqrt(N pi/4) against sinc(step) times the identity."""
    diag_dev, off_dev, _ = fh_parts(f, h, n, quant)
    bound = 5.0 / math.sqrt(n)
    deviation = max(diag_dev, off_dev)
    return ConvergenceReport(
        n_antennas=n,
        metric_name="fh_convergence",
        deviation=deviation,
        bound=bound,
        passed=bool(deviation <= bound),
    )


def convergence_sweep(
    n_list: Sequence[int],
    config: SystemConfig,
    metric: str,
) -> List[ConvergenceReport]:
    """Measure one deviation metric over ascending array sizes.

    Each size draws fresh fading from the (config.seed, n) diagnostic
    stream, so repeated sizes reproduce identical deviations and the whole
    sweep is deterministic for a given seed.  The quantized analog stage is
    used iff config.quant_bits is set.
    """
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")
    if len(n_list) == 0:
        raise ValueError("n_list must not be empty")
    if any(b > a for a, b in zip(n_list[1:], n_list)):
        raise ValueError("n_list must be non-decreasing")
    quant = (
        QuantizationSpec(config.quant_bits)
        if config.quant_bits is not None
        else None
    )
    reports = []
    for n in n_list:
        if n < config.n_rx_chains:
            raise ValueError("array size below the chain count")
        rng = channel.lemma_rng(config.seed, n)
        h = channel.sample_small_scale(n, config.n_pairs, rng)
        f = build_analog(h, config.n_rx_chains, quant)
        if metric == "orthonormality":
            reports.append(check_orthonormality(f, n))
        else:
            reports.append(check_fh_convergence(f, h, n, quant))
    return reports
