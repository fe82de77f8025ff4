"""Shared fixtures and small helpers for the test suite."""

import numpy as np
import pytest

from hybridrelay import build_processor, sample_small_scale
from hybridrelay.channel import ChannelRealization
from hybridrelay.config import SystemConfig


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_channels(rng, n, k, eta1=None, eta2=None):
    """Random realization with optional fixed large-scale gains."""
    h1 = sample_small_scale(n, k, rng)
    h2 = sample_small_scale(n, k, rng)
    e1 = np.ones(k) if eta1 is None else np.asarray(eta1, dtype=float)
    e2 = np.ones(k) if eta2 is None else np.asarray(eta2, dtype=float)
    return ChannelRealization(
        h1=h1,
        h2=h2,
        eta1=e1,
        eta2=e2,
        g1=h1 * np.sqrt(e1),
        g2=h2 * np.sqrt(e2),
    )


def make_processor(rng, n, k, config=None, quant_bits=None):
    cfg = config or SystemConfig(
        n_antennas=n, n_pairs=k, n_rx_chains=k, n_tx_chains=k, quant_bits=quant_bits
    )
    real = make_channels(rng, n, k)
    return real, build_processor(real, cfg)
