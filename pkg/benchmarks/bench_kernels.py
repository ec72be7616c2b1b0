"""Compare the numba kernels with their numpy fallbacks.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``.  JIT
compilation happens in a warm-up call and is reported separately.
"""

import argparse
import math
import time
import timeit

import numpy as np

from lossyhom import _accel


def _best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def cases():
    k0 = 2 * math.pi / 1.55
    lengths = np.linspace(0.0, 200.0, 200_000)
    x = np.linspace(-500.0, 500.0, 61)
    x_big = np.linspace(-500.0, 500.0, 100_000)
    params = np.array([567.0, 0.955, 162.6, 3.0])
    ones, ones_big = np.ones_like(x), np.ones_like(x_big)
    yield ("coupler sweep (200k lengths)",
           lambda f: f(1.318, 0.00426, 1.150, 0.00437, k0, lengths), "coupler_sweep", 5)
    yield ("dip model (61 points)", lambda f: f(x, params, -1.0, ones), "dip_model", 2000)
    yield ("dip jacobian (61 points)", lambda f: f(x, params, -1.0, ones), "dip_jacobian", 2000)
    yield ("dip jacobian (100k points)", lambda f: f(x_big, params, -1.0, ones_big), "dip_jacobian", 5)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'kernel':<30}{'numpy':>12}{'numba':>12}{'speedup':>10}{'jit (s)':>10}")
    for label, call, name, number in cases():
        fast = getattr(_accel, f"{name}_numba")
        slow = getattr(_accel, f"{name}_numpy")
        t0 = time.perf_counter()
        call(fast)
        jit = time.perf_counter() - t0
        got, want = call(fast), call(slow)
        for a, b in (zip(got, want) if isinstance(want, tuple) else [(got, want)]):
            scale = np.nanmax(np.abs(b), axis=0) if np.ndim(b) == 2 else np.nanmax(np.abs(b))
            np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-9 * np.max(scale), equal_nan=True)
        t_np = _best(lambda: call(slow), args.repeat, number)
        t_nb = _best(lambda: call(fast), args.repeat, number)
        print(f"{label:<30}{t_np * 1e3:>10.3f}ms{t_nb * 1e3:>10.3f}ms{t_np / t_nb:>9.1f}x{jit:>10.2f}")


if __name__ == "__main__":
    main()
