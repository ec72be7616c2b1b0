"""Post-selected two-photon states and coincidence probabilities.

One photon enters each input port of a symmetric coupler ``(r, t)``.
Events where a photon is lost are discarded, so all amplitudes here are
unnormalized post-selected amplitudes.  Partial distinguishability enters
through a single overlap ``x`` in [0, 1] that weights the two-photon
interference term (0: distinguishable, 1: identical wavepackets).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .coupled_mode import ScatteringAmplitudes
from .exceptions import ConfigError, DegenerateError

__all__ = [
    "TwoPhotonOutput",
    "OverlapModel",
    "scatter_two_photons",
    "hom_coincidence_probability",
    "same_port_probability",
    "modified_coincidence_probability",
    "overlap",
]

_SQRT2 = math.sqrt(2.0)


class TwoPhotonOutput(NamedTuple):
    amp_20: complex
    amp_02: complex
    amp_11: complex

    @property
    def norm2(self) -> float:
        return abs(self.amp_20) ** 2 + abs(self.amp_02) ** 2 + abs(self.amp_11) ** 2

    def probabilities(self) -> tuple[float, float, float]:
        """Normalized ``(p20, p02, p11)`` within the post-selected subspace."""
        n = self.norm2
        if n == 0.0:
            raise DegenerateError("no post-selected events")
        return abs(self.amp_20) ** 2 / n, abs(self.amp_02) ** 2 / n, abs(self.amp_11) ** 2 / n


@dataclass(frozen=True)
class OverlapModel:
    """Gaussian wavepacket overlap versus delay-stage position.

    ``coherence_length_um`` is c divided by the photon bandwidth, expressed
    as optical path; the stage position is the optical path difference.
    """

    coherence_length_um: float
    center_offset_um: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.coherence_length_um) and self.coherence_length_um > 0):
            raise ConfigError(f"coherence_length_um must be > 0, got {self.coherence_length_um!r}")
        if not math.isfinite(self.center_offset_um):
            raise ConfigError("center_offset_um must be finite")


def scatter_two_photons(amps: ScatteringAmplitudes) -> TwoPhotonOutput:
    r, t = amps
    if r == 0 and t == 0:
        raise DegenerateError("no post-selected events: r = t = 0")
    bunched = _SQRT2 * r * t
    return TwoPhotonOutput(bunched, bunched, r * r + t * t)


def _check_x(x):
    if not 0.0 <= x <= 1.0:
        raise ConfigError(f"overlap must lie in [0, 1], got {x!r}")


def hom_coincidence_probability(amps: ScatteringAmplitudes, overlap_x: float) -> float:
    """Probability the two photons leave by different ports."""
    _check_x(overlap_x)
    r, t = amps
    r2 = r * r
    t2 = t * t
    return abs(r) ** 4 + abs(t) ** 4 + 2.0 * overlap_x * (r2 * t2.conjugate()).real


def same_port_probability(amps: ScatteringAmplitudes, overlap_x: float) -> float:
    """Probability that both photons leave by one given output port.

    Identical for either port because the coupler is symmetric.
    """
    _check_x(overlap_x)
    return abs(amps.r * amps.t) ** 2 * (1.0 + overlap_x)


def modified_coincidence_probability(amps: ScatteringAmplitudes, overlap_x: float) -> float:
    """Twofold coincidence after port 2 feeds an ideal 50/50 splitter."""
    return 0.5 * same_port_probability(amps, overlap_x)


def overlap(model: OverlapModel, stage_position_um):
    """Gaussian overlap ``exp(-((dL - center) / L_c)**2)``; accepts scalars or arrays."""
    u = (np.asarray(stage_position_um, dtype=np.float64) - model.center_offset_um) / model.coherence_length_um
    x = np.exp(-u * u)
    return float(x) if x.ndim == 0 else x
