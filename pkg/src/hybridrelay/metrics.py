"""Exact per-pair SINRs, per-realization sum rate, and the Monte-Carlo engine."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import channel, hybrid
from .channel import ChannelRealization
from .config import SystemConfig
from .hybrid import FullDigitalProcessor, HybridProcessor

MODES = ("hybrid", "full_digital")

# A run aborts if more than this fraction of trials hits a degenerate
# channel (undefined power normalization).
_MAX_DEGENERATE_FRACTION = 0.01


@dataclass(frozen=True)
class RatePoint:
    """Monte-Carlo estimate of the half-duplex sum spectral efficiency."""

    mean_rate: float              # bits/s/Hz, averaged over non-degenerate trials
    std_error: float              # sample std of per-trial rates / sqrt(n_trials)
    n_trials: int                 # trials that entered the average
    per_pair_mean_sinr: np.ndarray  # length-K trial-average of linear SINRs
    n_degenerate: int = 0         # trials skipped for degenerate channels


def _hybrid_rows(real: ChannelRealization, proc: HybridProcessor) -> np.ndarray:
    """All K effective rows g2k^H F2^H W F1, via A2 = F2 G2 (K x N)."""
    return (proc.a2.conj().T @ proc.w) @ proc.f1


def _full_digital_rows(
    real: ChannelRealization, proc: FullDigitalProcessor
) -> np.ndarray:
    """All K effective rows g2k^H W_full, contracted right-to-left (K x N)."""
    return proc.alpha * ((real.g2.conj().T @ real.g2) @ real.g1.conj().T)


def _sinrs_from_rows(
    rows: np.ndarray, g1: np.ndarray, config: SystemConfig
) -> np.ndarray:
    """Per-pair SINR given the effective destination rows.

    Row k combines with source column i through rows @ g1; the diagonal is
    the desired gain, off-diagonal entries are inter-pair interference, and
    the row norm carries the forwarded relay noise.
    """
    s = rows @ g1
    power = np.abs(s) ** 2
    desired = config.p_user * np.diagonal(power)
    interference = config.p_user * (power.sum(axis=1) - np.diagonal(power))
    relay_noise = config.var_relay_noise * np.sum(np.abs(rows) ** 2, axis=1)
    return desired / (interference + relay_noise + config.var_dest_noise)


def _check_pair_index(k: int, config: SystemConfig) -> None:
    if not 0 <= k < config.n_pairs:
        raise ValueError(f"pair index must be in [0, {config.n_pairs}), got {k}")


def sinr_exact(
    real: ChannelRealization,
    proc: HybridProcessor,
    config: SystemConfig,
    k: int,
) -> float:
    """Exact instantaneous SINR of pair k under hybrid processing.

    Numerator p_user |g2k^H F2^H W F1 g1k|^2 over interference from the
    other pairs, forwarded relay noise, and destination noise.  The
    effective row vector is computed once and reused across all terms.
    Pair indices are 0-based.
    """
    _check_pair_index(k, config)
    rows = _hybrid_rows(real, proc)
    return float(_sinrs_from_rows(rows, real.g1, config)[k])


def sinr_full_digital(
    real: ChannelRealization,
    proc: FullDigitalProcessor,
    config: SystemConfig,
    k: int,
) -> float:
    """Exact instantaneous SINR of pair k under the full-digital reference."""
    _check_pair_index(k, config)
    rows = _full_digital_rows(real, proc)
    return float(_sinrs_from_rows(rows, real.g1, config)[k])


def rate_of_realization(sinrs: np.ndarray) -> float:
    """Half-duplex sum rate 0.5 * sum_k log2(1 + SINR_k) for one realization."""
    sinrs = np.asarray(sinrs, dtype=float)
    if sinrs.size == 0 or np.any(~np.isfinite(sinrs)) or np.any(sinrs < 0):
        raise ValueError("SINRs must be a non-empty vector of finite values >= 0")
    return float(0.5 * np.sum(np.log2(1.0 + sinrs)))


def _trial_sinrs(
    config: SystemConfig,
    trial: int,
    mode: str,
    drop: Optional[Tuple[np.ndarray, np.ndarray]],
) -> Optional[np.ndarray]:
    """SINR vector for one trial, or None when the draw is degenerate."""
    real = channel.sample_realization(config, trial, drop=drop)
    try:
        if mode == "full_digital":
            fd = hybrid.build_full_digital(real, config)
            rows = _full_digital_rows(real, fd)
        else:
            proc = hybrid.build_processor(real, config)
            rows = _hybrid_rows(real, proc)
    except hybrid.DegenerateChannelError:
        return None
    return _sinrs_from_rows(rows, real.g1, config)


def _worker_count(n_trials: int, max_workers: Optional[int]) -> int:
    limit = max_workers if max_workers is not None else os.cpu_count() or 1
    env = os.environ.get("SIM_THREADS")
    if env:
        try:
            limit = min(limit, max(1, int(env)))
        except ValueError:
            pass
    return max(1, min(limit, n_trials))


def monte_carlo_rate(
    config: SystemConfig,
    n_trials: int,
    mode: str = "hybrid",
    drop: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    max_workers: Optional[int] = None,
) -> RatePoint:
    """Average spectral efficiency over seeded Monte-Carlo trials.

    Each trial is a pure function of (config.seed, trial index), and the
    reduction always runs in ascending trial order, so the result is
    bit-identical for any worker count (capped by the SIM_THREADS
    environment variable).  `drop`, when given, pins the large-scale gains
    for every trial; otherwise each trial redraws the user placement.
    Noise enters through its statistics only; no noise samples are drawn.

    Degenerate draws are skipped and counted, and the run aborts if they
    exceed 1% of n_trials.
    """
    if n_trials < 2:
        raise ValueError("n_trials must be at least 2")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if drop is not None:
        drop = channel._validated_drop(drop, config.n_pairs)

    k = config.n_pairs
    sinr_table = np.full((n_trials, k), np.nan)

    def run_block(lo: int, hi: int) -> None:
        for trial in range(lo, hi):
            sinrs = _trial_sinrs(config, trial, mode, drop)
            if sinrs is not None:
                sinr_table[trial] = sinrs

    workers = _worker_count(n_trials, max_workers)
    if workers == 1:
        run_block(0, n_trials)
    else:
        block = max(1, -(-n_trials // (workers * 4)))
        bounds = [(lo, min(lo + block, n_trials)) for lo in range(0, n_trials, block)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for future in [pool.submit(run_block, lo, hi) for lo, hi in bounds]:
                future.result()

    valid = ~np.isnan(sinr_table[:, 0])
    n_degenerate = int(n_trials - valid.sum())
    if n_degenerate > _MAX_DEGENERATE_FRACTION * n_trials:
        raise RuntimeError(
            f"{n_degenerate} of {n_trials} trials degenerate (> "
            f"{_MAX_DEGENERATE_FRACTION:.0%}); configuration unusable"
        )
    kept = sinr_table[valid]
    if kept.shape[0] < 2:
        raise RuntimeError("fewer than two usable trials")
    rates = 0.5 * np.sum(np.log2(1.0 + kept), axis=1)
    n_used = int(kept.shape[0])
    return RatePoint(
        mean_rate=float(np.mean(rates)),
        std_error=float(np.std(rates, ddof=1) / np.sqrt(n_used)),
        n_trials=n_used,
        per_pair_mean_sinr=kept.mean(axis=0),
        n_degenerate=n_degenerate,
    )
