"""Scattering coefficients of a lossy two-waveguide directional coupler.

Light in the coupling section is a superposition of the symmetric and
anti-symmetric supermodes.  Their effective indices ``n1`` and ``n2`` set
the beat length (real parts) and the differential decay (loss parts).
Lengths and wavelengths are in micrometers throughout; ``k0`` is in rad/um.

Loss convention: a mode with ``loss_part = k`` has amplitude
``exp(-k * k0 * L)`` after a length ``L``.  Complex literals such as
``1.318-0.00426j`` are accepted and the magnitude of the imaginary part is
taken as the loss.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import _accel
from .exceptions import ConfigError, DegenerateError

__all__ = [
    "ComplexIndex",
    "CouplerSpec",
    "ScatteringAmplitudes",
    "SplitRatio",
    "SweepPoint",
    "coupler_coefficients",
    "bunching_probability",
    "splitting_ratio",
    "find_5050_lengths",
    "first_5050_lengths",
    "sweep_bunching_vs_length",
    "DLSPPW_INDICES",
    "METAL_STRIP_INDICES",
]

BALANCE_TOL = 1e-9


@dataclass(frozen=True)
class ComplexIndex:
    """Effective index of one coupler supermode."""

    real_part: float
    loss_part: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.real_part) and self.real_part > 0):
            raise ConfigError(f"real_part must be a positive finite number, got {self.real_part!r}")
        if not (math.isfinite(self.loss_part) and self.loss_part >= 0):
            raise ConfigError(f"loss_part must be >= 0 (passive mode), got {self.loss_part!r}")

    @classmethod
    def from_complex(cls, value: complex | str) -> "ComplexIndex":
        """Build from a complex number or a literal like ``"1.318-0.00426i"``.

        A negative imaginary part is read as a loss of the same magnitude and
        triggers a ``UserWarning`` so the sign convention is never silent.
        """
        if isinstance(value, str):
            text = value.strip().replace(" ", "").replace("i", "j")
            try:
                value = complex(text)
            except ValueError as exc:
                raise ConfigError(f"cannot parse complex index {value!r}") from exc
        z = complex(value)
        if z.imag < 0:
            warnings.warn(
                f"index {z.real:g}{z.imag:+g}i: negative imaginary part taken as loss {abs(z.imag):g}",
                UserWarning,
                stacklevel=2,
            )
        return cls(z.real, abs(z.imag))

    @property
    def as_complex(self) -> complex:
        # n = real + i*loss makes exp(i n k0 L) decay
        return complex(self.real_part, self.loss_part)

    def lossless(self) -> "ComplexIndex":
        return ComplexIndex(self.real_part, 0.0)


@dataclass(frozen=True)
class CouplerSpec:
    n_symmetric: ComplexIndex
    n_antisymmetric: ComplexIndex
    wavelength_um: float
    length_um: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.wavelength_um) and self.wavelength_um > 0):
            raise ConfigError(f"wavelength_um must be > 0, got {self.wavelength_um!r}")
        if not (math.isfinite(self.length_um) and self.length_um >= 0):
            raise ConfigError(f"length_um must be >= 0, got {self.length_um!r}")

    @property
    def k0(self) -> float:
        return 2.0 * math.pi / self.wavelength_um

    @property
    def delta_n(self) -> complex:
        return self.n_symmetric.as_complex - self.n_antisymmetric.as_complex

    def with_length(self, length_um: float) -> "CouplerSpec":
        return CouplerSpec(self.n_symmetric, self.n_antisymmetric, self.wavelength_um, length_um)

    def lossless(self) -> "CouplerSpec":
        return CouplerSpec(self.n_symmetric.lossless(), self.n_antisymmetric.lossless(),
                           self.wavelength_um, self.length_um)


class ScatteringAmplitudes(NamedTuple):
    """Bar-state amplitude ``r`` and cross-state amplitude ``t``."""

    r: complex
    t: complex


class SplitRatio(NamedTuple):
    reflectance: float
    transmittance: float
    throughput: float


class SweepPoint(NamedTuple):
    length_um: float
    reflectance: float
    transmittance: float
    throughput: float
    P: float
    ok: bool


# Indices as quoted for the two plasmonic couplers at 1550 nm.
DLSPPW_INDICES = (ComplexIndex(1.318, 0.00426), ComplexIndex(1.150, 0.00437))
METAL_STRIP_INDICES = (ComplexIndex(2.036, 0.02), ComplexIndex(1.841, 0.01))


def coupler_coefficients(spec: CouplerSpec) -> ScatteringAmplitudes:
    """Return ``(r, t)`` for the coupler described by ``spec``.

    ``r = (e1 + e2) / 2`` and ``t = (e1 - e2) / 2`` with
    ``e_k = exp(i n_k k0 L)``, which is the common phase/decay factor of the
    anti-symmetric mode times ``(g +- 1) / 2`` with ``g`` the relative
    supermode propagator.
    """
    phase = spec.k0 * spec.length_um
    f = cmath.exp(1j * spec.n_antisymmetric.as_complex * phase)
    g = cmath.exp(1j * spec.delta_n * phase)
    return ScatteringAmplitudes(0.5 * f * (g + 1.0), 0.5 * f * (g - 1.0))


def bunching_probability(amps: ScatteringAmplitudes) -> float:
    """Post-selected probability that both particles leave by the same port."""
    r, t = amps
    rt2 = 4.0 * abs(r * t) ** 2
    denom = rt2 + abs(r * r + t * t) ** 2
    if denom == 0.0:
        raise DegenerateError("no post-selected events: r = t = 0")
    return rt2 / denom


def splitting_ratio(amps: ScatteringAmplitudes) -> SplitRatio:
    refl = abs(amps.r) ** 2
    trans = abs(amps.t) ** 2
    return SplitRatio(refl, trans, refl + trans)


def find_5050_lengths(
    n1: ComplexIndex,
    n2: ComplexIndex,
    wavelength_um: float,
    max_length_um: float,
    tol: float = BALANCE_TOL,
) -> list[float]:
    """All balanced-split coupling lengths in ``(0, max_length_um]``.

    Balanced points sit where the supermode beat phase is an odd multiple of
    pi/2.  They do not depend on the loss parts.  Each candidate is checked
    against ``tol`` on ``||r| - |t|| / max(|r|, |t|)``.
    """
    if not max_length_um > 0:
        raise ConfigError(f"max_length_um must be > 0, got {max_length_um!r}")
    d_re = abs(n1.real_part - n2.real_part)
    if d_re == 0.0:
        raise DegenerateError("no mode beating; coupler never splits")
    spec = CouplerSpec(n1, n2, wavelength_um)
    quarter = wavelength_um / (4.0 * d_re)
    count = int(math.floor((max_length_um / quarter - 1.0) / 2.0)) + 1
    lengths = []
    for m in range(max(count, 0)):
        length = (2 * m + 1) * quarter
        if length > max_length_um:
            break
        r, t = coupler_coefficients(spec.with_length(length))
        big = max(abs(r), abs(t))
        if big == 0.0:
            break  # both amplitudes underflowed; nothing further is meaningful
        if abs(abs(r) - abs(t)) / big > tol:
            raise ArithmeticError(f"branch {m} at {length} um misses balance tolerance {tol}")
        lengths.append(length)
    return lengths


def first_5050_lengths(n1: ComplexIndex, n2: ComplexIndex, wavelength_um: float, count: int) -> list[float]:
    """The first ``count`` balanced-split lengths, shortest first."""
    if count < 1:
        raise ConfigError(f"count must be >= 1, got {count!r}")
    d_re = abs(n1.real_part - n2.real_part)
    if d_re == 0.0:
        raise DegenerateError("no mode beating; coupler never splits")
    last = (2 * count - 1) * wavelength_um / (4.0 * d_re)
    return find_5050_lengths(n1, n2, wavelength_um, last * (1.0 + 1e-12))[:count]


def sweep_bunching_vs_length(
    n1: ComplexIndex,
    n2: ComplexIndex,
    wavelength_um: float,
    lengths: Sequence[float],
) -> list[SweepPoint]:
    """Evaluate splitting and bunching over many coupling lengths.

    Points where every pair is lost (``r = t = 0`` numerically) come back
    with ``ok=False`` and ``P = nan`` instead of aborting the sweep.
    """
    arr = np.asarray(lengths, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ConfigError("lengths must be a non-empty 1-d sequence")
    if np.any(~np.isfinite(arr)) or np.any(arr < 0):
        raise ConfigError("lengths must be finite and >= 0")
    k0 = 2.0 * math.pi / wavelength_um
    r, t, p, throughput = _accel.coupler_sweep(
        n1.real_part, n1.loss_part, n2.real_part, n2.loss_part, k0, arr
    )
    refl = np.abs(r) ** 2
    trans = np.abs(t) ** 2
    return [
        SweepPoint(float(arr[i]), float(refl[i]), float(trans[i]), float(throughput[i]),
                   float(p[i]), bool(np.isfinite(p[i])))
        for i in range(arr.size)
    ]
