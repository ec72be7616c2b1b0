"""Synthetic coincidence-count datasets versus delay-stage position.

Counts at each stage position are Poisson draws around the expected
coincidence rate times the integration time.  Every point owns an
independent random stream: numpy's Philox4x64-10 counter-based bit
generator keyed by ``SeedSequence([rng_seed, point_index])``.  Points can
therefore be simulated in any order, or in parallel, and still give the
same dataset.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .coupled_mode import CouplerSpec, coupler_coefficients
from .exceptions import ConfigError
from .fock_interference import (
    OverlapModel,
    hom_coincidence_probability,
    modified_coincidence_probability,
    overlap,
)

__all__ = [
    "STANDARD",
    "MODIFIED",
    "ExperimentConfig",
    "CoincidenceRecord",
    "stage_scan",
    "expected_coincidence_rate",
    "point_generator",
    "simulate",
    "records_arrays",
]

STANDARD = "standard"
MODIFIED = "modified"
MAX_MEAN_COUNTS = 1e12


class CoincidenceRecord(NamedTuple):
    stage_position_um: float
    counts: int
    integration_time_s: float


def stage_scan(start_um: float, stop_um: float, points: int) -> tuple[float, ...]:
    """Evenly spaced stage positions, endpoints included."""
    if points < 2:
        raise ConfigError("a stage scan needs at least 2 points")
    return tuple(float(v) for v in np.linspace(start_um, stop_um, points))


@dataclass(frozen=True)
class ExperimentConfig:
    coupler: CouplerSpec
    overlap: OverlapModel
    stage_positions_um: tuple[float, ...]
    pair_rate_hz: float = 7000.0
    efficiency_arm1: float = 0.3
    efficiency_arm2: float = 0.3
    integration_time_s: float = 1.0
    configuration: str = STANDARD
    visibility_cap: float = 1.0
    rng_seed: int = 0
    background_rate_hz: float = 0.0
    _amps: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "stage_positions_um", tuple(float(v) for v in self.stage_positions_um))
        if not self.pair_rate_hz > 0:
            raise ConfigError("pair_rate_hz must be > 0")
        for name in ("efficiency_arm1", "efficiency_arm2", "visibility_cap"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {value!r}")
        if not self.integration_time_s > 0:
            raise ConfigError("integration_time_s must be > 0")
        if not self.background_rate_hz >= 0:
            raise ConfigError("background_rate_hz must be >= 0")
        if self.configuration not in (STANDARD, MODIFIED):
            raise ConfigError(f"configuration must be {STANDARD!r} or {MODIFIED!r}, got {self.configuration!r}")
        pos = np.asarray(self.stage_positions_um)
        if pos.size == 0 or not np.all(np.isfinite(pos)):
            raise ConfigError("stage_positions_um must be a non-empty list of finite numbers")
        if np.any(np.diff(pos) <= 0):
            raise ConfigError("stage_positions_um must be strictly increasing")
        if not (isinstance(self.rng_seed, (int, np.integer)) and 0 <= self.rng_seed < 2**64):
            raise ConfigError("rng_seed must be an integer in [0, 2**64)")
        object.__setattr__(self, "_amps", coupler_coefficients(self.coupler))


def expected_coincidence_rate(config: ExperimentConfig, stage_position_um: float) -> float:
    """Mean coincidence rate in Hz at one stage position."""
    x = config.visibility_cap * overlap(config.overlap, stage_position_um)
    if config.configuration == STANDARD:
        p = hom_coincidence_probability(config._amps, x)
    else:
        p = modified_coincidence_probability(config._amps, x)
    return config.pair_rate_hz * config.efficiency_arm1 * config.efficiency_arm2 * p + config.background_rate_hz


def point_generator(rng_seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(rng_seed), int(index)])))


def _simulate_point(config: ExperimentConfig, index: int) -> CoincidenceRecord:
    position = config.stage_positions_um[index]
    mean = expected_coincidence_rate(config, position) * config.integration_time_s
    counts = point_generator(config.rng_seed, index).poisson(mean)
    return CoincidenceRecord(position, int(counts), config.integration_time_s)


def simulate(config: ExperimentConfig, workers: int = 1) -> list[CoincidenceRecord]:
    """Draw one Poisson-noisy coincidence scan.

    ``workers > 1`` evaluates points on a thread pool; output order and
    values are identical to the sequential run.
    """
    means = [expected_coincidence_rate(config, p) * config.integration_time_s
             for p in config.stage_positions_um]
    worst = max(means)
    if not math.isfinite(worst) or worst > MAX_MEAN_COUNTS:
        raise ConfigError(f"expected counts per point ({worst:.3g}) exceed {MAX_MEAN_COUNTS:.0e}")
    indices = range(len(config.stage_positions_um))
    if workers <= 1:
        return [_simulate_point(config, i) for i in indices]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda i: _simulate_point(config, i), indices))


def records_arrays(records: Sequence[CoincidenceRecord]):
    """Split records into ``(positions, counts, integration_times)`` arrays."""
    pos = np.array([rec.stage_position_um for rec in records], dtype=np.float64)
    counts = np.array([rec.counts for rec in records], dtype=np.float64)
    times = np.array([rec.integration_time_s for rec in records], dtype=np.float64)
    return pos, counts, times
