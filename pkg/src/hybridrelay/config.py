"""Scenario configuration shared by every stage of the simulator."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class SystemConfig:
    """All parameters of one relaying scenario.

    Powers and noise variances are linear quantities. dB values are
    converted at the command-line boundary and never stored here.
    """

    n_antennas: int                   # relay antennas per array (N)
    n_pairs: int = 10                 # source/destination pairs (K)
    n_rx_chains: int = 10             # receive RF chains (K_r)
    n_tx_chains: int = 10             # transmit RF chains (K_t)
    p_user: float = 1.0               # per-source transmit power
    p_relay: float = 1.0              # relay transmit power budget
    var_relay_noise: float = 1.0      # noise variance at the relay array
    var_dest_noise: float = 1.0       # noise variance at each destination
    quant_bits: Optional[int] = None  # phase-shifter bits; None = continuous
    cell_radius_m: float = 1000.0
    guard_radius_m: float = 100.0
    pathloss_exp: float = 3.8
    shadow_std_db: float = 8.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_antennas < 1:
            raise ValueError("n_antennas must be a positive integer")
        if self.n_pairs < 1:
            raise ValueError("n_pairs must be a positive integer")
        if not 1 <= self.n_rx_chains <= self.n_antennas:
            raise ValueError("n_rx_chains must satisfy 1 <= n_rx_chains <= n_antennas")
        if not 1 <= self.n_tx_chains <= self.n_antennas:
            raise ValueError("n_tx_chains must satisfy 1 <= n_tx_chains <= n_antennas")
        if self.p_user < 0 or self.p_relay < 0:
            raise ValueError("transmit powers must be non-negative")
        if self.var_relay_noise <= 0 or self.var_dest_noise <= 0:
            raise ValueError("noise variances must be positive")
        if self.quant_bits is not None and self.quant_bits < 1:
            raise ValueError("quant_bits must be a positive integer or None")
        if not 0 < self.guard_radius_m < self.cell_radius_m:
            raise ValueError("require 0 < guard_radius_m < cell_radius_m")
        if self.pathloss_exp < 0:
            raise ValueError("pathloss_exp must be non-negative")
        if self.shadow_std_db < 0:
            raise ValueError("shadow_std_db must be non-negative")
