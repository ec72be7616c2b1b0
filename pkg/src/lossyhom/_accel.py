"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba kernels are used when numba imports cleanly, unless the
environment variable ``LOSSYHOM_DISABLE_NUMBA`` is set to a truthy value
before the package is imported.  Both variants are always importable
under explicit names (``*_numpy`` / ``*_numba``) so they can be compared.
"""

import os

import numpy as np

_DISABLE = os.environ.get("LOSSYHOM_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _DISABLE
BACKEND = "numba" if USE_NUMBA else "numpy"


def _njit(func):
    if numba is None:  # pragma: no cover
        return func
    return numba.njit(cache=True, fastmath=False)(func)


# --------------------------------------------------------------------------
# coupler sweep: r, t, P and throughput over an array of coupling lengths
# --------------------------------------------------------------------------

def coupler_sweep_numpy(re1, loss1, re2, loss2, k0, lengths):
    lengths = np.asarray(lengths, dtype=np.float64)
    phase = k0 * lengths
    e1 = np.exp((1j * re1 - loss1) * phase)
    e2 = np.exp((1j * re2 - loss2) * phase)
    r = 0.5 * (e1 + e2)
    t = 0.5 * (e1 - e2)
    rt2 = 4.0 * np.abs(r * t) ** 2
    same = np.abs(r * r + t * t) ** 2
    denom = rt2 + same
    with np.errstate(invalid="ignore", divide="ignore"):
        p = np.where(denom > 0.0, rt2 / np.where(denom > 0.0, denom, 1.0), np.nan)
    throughput = np.abs(r) ** 2 + np.abs(t) ** 2
    return r, t, p, throughput


def _coupler_sweep_loop(re1, loss1, re2, loss2, k0, lengths):
    n = lengths.shape[0]
    r = np.empty(n, dtype=np.complex128)
    t = np.empty(n, dtype=np.complex128)
    p = np.empty(n, dtype=np.float64)
    throughput = np.empty(n, dtype=np.float64)
    for i in range(n):
        phase = k0 * lengths[i]
        e1 = np.exp(complex(-loss1 * phase, re1 * phase))
        e2 = np.exp(complex(-loss2 * phase, re2 * phase))
        ri = 0.5 * (e1 + e2)
        ti = 0.5 * (e1 - e2)
        rt2 = 4.0 * abs(ri * ti) ** 2
        same = abs(ri * ri + ti * ti) ** 2
        denom = rt2 + same
        p[i] = rt2 / denom if denom > 0.0 else np.nan
        throughput[i] = abs(ri) ** 2 + abs(ti) ** 2
        r[i] = ri
        t[i] = ti
    return r, t, p, throughput


_coupler_sweep_jit = _njit(_coupler_sweep_loop)


def coupler_sweep_numba(re1, loss1, re2, loss2, k0, lengths):
    return _coupler_sweep_jit(
        float(re1), float(loss1), float(re2), float(loss2), float(k0),
        np.ascontiguousarray(lengths, dtype=np.float64),
    )


# --------------------------------------------------------------------------
# Gaussian dip/peak model and its finite-difference Jacobian
# params = [baseline, visibility, coherence_length, center]
# --------------------------------------------------------------------------

def dip_model_numpy(x, params, sign, scale):
    c, v, lc, x0 = params
    u = (x - x0) / lc
    return c * scale * (1.0 + sign * v * np.exp(-u * u))


def _dip_model_loop(x, params, sign, scale):
    c = params[0]
    v = params[1]
    lc = params[2]
    x0 = params[3]
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        u = (x[i] - x0) / lc
        out[i] = c * scale[i] * (1.0 + sign * v * np.exp(-u * u))
    return out


_dip_model_jit = _njit(_dip_model_loop)


def _fd_steps(params):
    # cube root of machine epsilon balances truncation vs rounding for central differences
    h = np.empty(params.shape[0])
    for j in range(params.shape[0]):
        h[j] = 6.055454452393343e-06 * max(abs(params[j]), 1.0)
    return h


def dip_jacobian_numpy(x, params, sign, scale):
    params = np.asarray(params, dtype=np.float64)
    h = _fd_steps(params)
    jac = np.empty((x.shape[0], params.shape[0]))
    for j in range(params.shape[0]):
        up = params.copy()
        dn = params.copy()
        up[j] += h[j]
        dn[j] -= h[j]
        jac[:, j] = (dip_model_numpy(x, up, sign, scale) - dip_model_numpy(x, dn, sign, scale)) / (up[j] - dn[j])
    return jac


_fd_steps_jit = _njit(_fd_steps)


def _dip_jacobian_loop(x, params, sign, scale):
    npar = params.shape[0]
    h = _fd_steps_jit(params)
    jac = np.empty((x.shape[0], npar))
    for j in range(npar):
        up = params.copy()
        dn = params.copy()
        up[j] += h[j]
        dn[j] -= h[j]
        fu = _dip_model_jit(x, up, sign, scale)
        fd = _dip_model_jit(x, dn, sign, scale)
        width = up[j] - dn[j]
        for i in range(x.shape[0]):
            jac[i, j] = (fu[i] - fd[i]) / width
    return jac


_dip_jacobian_jit = _njit(_dip_jacobian_loop)


def dip_model_numba(x, params, sign, scale):
    return _dip_model_jit(np.ascontiguousarray(x, dtype=np.float64),
                          np.ascontiguousarray(params, dtype=np.float64),
                          float(sign), np.ascontiguousarray(scale, dtype=np.float64))


def dip_jacobian_numba(x, params, sign, scale):
    return _dip_jacobian_jit(np.ascontiguousarray(x, dtype=np.float64),
                             np.ascontiguousarray(params, dtype=np.float64),
                             float(sign), np.ascontiguousarray(scale, dtype=np.float64))


if USE_NUMBA:
    coupler_sweep = coupler_sweep_numba
    dip_model = dip_model_numba
    dip_jacobian = dip_jacobian_numba
else:
    coupler_sweep = coupler_sweep_numpy
    dip_model = dip_model_numpy
    dip_jacobian = dip_jacobian_numpy
