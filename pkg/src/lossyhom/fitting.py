"""Gaussian dip/peak fitting of coincidence scans.

The model is ``C * [1 -/+ V * exp(-((x - x0) / L_c)**2)]`` with a dip for the
standard two-port interferometer and a peak for the modified one.  It is
fitted by weighted least squares (Poisson weights ``1 / max(counts, 1)``)
with a bounded Levenberg-Marquardt loop and a central-difference Jacobian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _accel
from .exceptions import ConfigError, LossyHomError, NoFeatureError

__all__ = [
    "DIP",
    "PEAK",
    "DipModel",
    "FitResult",
    "fit_dip",
    "fit_counts",
    "initial_guess",
    "visibility_v1",
    "visibility_v2",
    "coherence_length_from_fit",
]

DIP = "dip"
PEAK = "peak"
PARAM_NAMES = ("baseline_C", "visibility_V", "coherence_length_um", "center_um")

V_MAX = 1.2
_TINY = 1e-300
LAMBDA0 = 1e-3
LAMBDA_MAX = 1e16
RTOL_COST = 1e-10
MAX_ITER = 200


def _sign(polarity: str) -> float:
    if polarity == DIP:
        return -1.0
    if polarity == PEAK:
        return 1.0
    raise ConfigError(f"polarity must be {DIP!r} or {PEAK!r}, got {polarity!r}")


@dataclass(frozen=True)
class DipModel:
    baseline_C: float
    visibility_V: float
    coherence_length_um: float
    center_um: float = 0.0
    polarity: str = DIP

    def __post_init__(self):
        _sign(self.polarity)
        if not self.coherence_length_um > 0:
            raise ConfigError("coherence_length_um must be > 0")

    def as_array(self) -> np.ndarray:
        return np.array([self.baseline_C, self.visibility_V, self.coherence_length_um, self.center_um])

    def __call__(self, positions_um, scale=None):
        x = np.atleast_1d(np.asarray(positions_um, dtype=np.float64))
        scale = np.ones_like(x) if scale is None else np.asarray(scale, dtype=np.float64)
        return _accel.dip_model(x, self.as_array(), _sign(self.polarity), scale)

    @property
    def extremes(self) -> tuple[float, float]:
        """``(c_max, c_min)`` of the fitted curve."""
        far = self.baseline_C
        centre = self.baseline_C * (1.0 + _sign(self.polarity) * self.visibility_V)
        return max(far, centre), min(far, centre)


@dataclass(frozen=True)
class FitResult:
    params: DipModel
    std_errors: dict
    rss: float
    iterations: int
    converged: bool
    grad_norm: float
    dof: int
    message: str = ""


def visibility_v1(c_max: float, c_min: float) -> float:
    """Dip contrast ``(c_max - c_min) / c_max``."""
    if not c_max > 0:
        raise ConfigError("visibility_v1 is undefined for c_max <= 0")
    if c_min < 0 or c_min > c_max:
        raise ConfigError("visibility_v1 needs 0 <= c_min <= c_max")
    return (c_max - c_min) / c_max


def visibility_v2(c_max: float, c_min: float) -> float:
    """Peak contrast ``(c_max - c_min) / c_min``; equals 1 when the peak doubles the wings."""
    if not c_min > 0:
        raise ConfigError("visibility_v2 is undefined for c_min <= 0")
    if c_max < c_min:
        raise ConfigError("visibility_v2 needs c_max >= c_min")
    return (c_max - c_min) / c_min


def _project(p: np.ndarray) -> np.ndarray:
    q = p.copy()
    q[0] = max(q[0], _TINY)
    q[1] = min(max(q[1], 0.0), V_MAX)
    q[2] = max(q[2], _TINY)
    return q


def initial_guess(x: np.ndarray, y: np.ndarray, polarity: str) -> np.ndarray:
    """Starting point from the wings, the extremum and the half-depth width."""
    sign = _sign(polarity)
    n = x.size
    k = max(1, int(round(0.1 * n)))
    c0 = float(np.mean(np.concatenate([y[:k], y[-k:]])))
    smooth = np.convolve(y, np.ones(3) / 3.0, mode="same")
    smooth[0], smooth[-1] = y[0], y[-1]
    i0 = int(np.argmax(sign * smooth))
    x0 = float(x[i0])
    if c0 <= 0:
        c0 = max(float(np.max(y)), 1.0)
    depth = sign * (smooth[i0] - c0)
    v0 = min(max(depth / c0, 0.0), 1.0)

    half = c0 + sign * 0.5 * depth
    inside = sign * (smooth - half) >= 0

    def edge(step):
        i = i0
        while 0 <= i + step < n and inside[i + step]:
            i += step
        j = i + step
        if not 0 <= j < n:
            return float(x[i])
        # linear interpolation between the last inside and first outside sample
        yi, yj = smooth[i], smooth[j]
        frac = 0.5 if yi == yj else (yi - half) / (yi - yj)
        return float(x[i] + frac * (x[j] - x[i]))

    hwhm = 0.5 * (edge(1) - edge(-1))
    spacing = float(np.min(np.diff(x))) if n > 1 else 1.0
    lc0 = max(hwhm, spacing) / math.sqrt(math.log(2.0))
    return np.array([c0, v0, lc0, x0])


def fit_counts(
    positions_um,
    counts,
    polarity: str = DIP,
    integration_times_s=None,
    p0=None,
    max_iter: int = MAX_ITER,
) -> FitResult:
    """Fit the dip/peak model to raw arrays.

    Counts may be non-integer (e.g. noiseless model curves).  When
    integration times differ between points, the baseline refers to the
    first point's integration time.
    """
    sign = _sign(polarity)
    x = np.asarray(positions_um, dtype=np.float64)
    y = np.asarray(counts, dtype=np.float64)
    if x.ndim != 1 or x.shape != y.shape:
        raise ConfigError("positions and counts must be 1-d arrays of equal length")
    if x.size < 5:
        raise ConfigError(f"need at least 5 points to fit, got {x.size}")
    if np.any(~np.isfinite(x)) or np.any(~np.isfinite(y)) or np.any(y < 0):
        raise ConfigError("positions must be finite and counts finite and >= 0")
    if integration_times_s is None:
        scale = np.ones_like(x)
    else:
        times = np.asarray(integration_times_s, dtype=np.float64)
        if times.shape != x.shape or np.any(~(times > 0)):
            raise ConfigError("integration times must be positive, one per point")
        scale = times / times[0]
    order = np.argsort(x, kind="stable")
    x, y, scale = x[order], y[order], scale[order]
    if np.ptp(y / scale) == 0.0:
        raise NoFeatureError("no interference feature detected")

    sw = 1.0 / np.sqrt(np.maximum(y, 1.0))
    p = _project(np.asarray(p0, dtype=np.float64) if p0 is not None else initial_guess(x, y / scale, polarity))

    def residuals(q):
        return (y - _accel.dip_model(x, q, sign, scale)) * sw

    res = residuals(p)
    cost = float(res @ res)
    lam = LAMBDA0
    converged = False
    message = "maximum iterations reached"
    it = 0
    g = np.zeros(4)
    for it in range(1, max_iter + 1):
        jac = _accel.dip_jacobian(x, p, sign, scale) * sw[:, None]
        a = jac.T @ jac
        g = jac.T @ res
        if cost == 0.0:
            converged, message = True, "exact fit"
            break
        d = np.diag(a).copy()
        d = np.maximum(d, 1e-12 * max(float(d.max()), _TINY))
        accepted = False
        while lam <= LAMBDA_MAX:
            try:
                step = np.linalg.solve(a + lam * np.diag(d), g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            trial = _project(p + step)
            res_t = residuals(trial)
            cost_t = float(res_t @ res_t)
            if np.isfinite(cost_t) and cost_t < cost:
                accepted = True
                break
            lam *= 10.0
        if not accepted:
            converged, message = True, "no further decrease possible"
            break
        rel = (cost - cost_t) / cost
        p, res, cost = trial, res_t, cost_t
        lam = max(lam / 10.0, 1e-12)
        if rel < RTOL_COST:
            converged, message = True, "relative cost change below tolerance"
            break

    jac = _accel.dip_jacobian(x, p, sign, scale) * sw[:, None]
    g = jac.T @ res
    dof = max(x.size - 4, 1)
    cov = np.linalg.pinv(jac.T @ jac) * (cost / dof)
    errs = {name: float(math.sqrt(max(cov[i, i], 0.0))) for i, name in enumerate(PARAM_NAMES)}
    model = DipModel(float(p[0]), float(p[1]), float(p[2]), float(p[3]), polarity)
    return FitResult(model, errs, cost, it, converged, float(np.linalg.norm(g)), dof, message)


def fit_dip(records: Sequence, polarity: str = DIP, **kwargs) -> FitResult:
    """Fit a list of ``CoincidenceRecord`` (or compatible triples)."""
    if len(records) < 5:
        raise ConfigError(f"need at least 5 records to fit, got {len(records)}")
    pos = [float(rec[0]) for rec in records]
    counts = [float(rec[1]) for rec in records]
    times = [float(rec[2]) for rec in records]
    return fit_counts(pos, counts, polarity, integration_times_s=times, **kwargs)


def coherence_length_from_fit(result: FitResult) -> tuple[float, float]:
    """``(L_c, 1-sigma error)`` in micrometers from a converged fit."""
    if not result.converged:
        raise LossyHomError("fit did not converge; coherence length is not reliable")
    return result.params.coherence_length_um, result.std_errors["coherence_length_um"]
