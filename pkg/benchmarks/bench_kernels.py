"""Benchmark the numba-compiled kernels against their numpy twins.

Run from the repository root:

    python benchmarks/bench_kernels.py

Both implementations are always importable regardless of the
VARBESOV_BACKEND setting, so this script times them side by side and also
times a full mixed-norm solve under each backend.
"""

import math
import os
import subprocess
import sys
import time

import numpy as np

from varbesov import _kernels as K

N = 4096
REPS = 400


def make_inputs():
    rng = np.random.default_rng(7)
    af = np.abs(rng.normal(size=N)) * np.exp(-np.linspace(-4, 4, N) ** 2)
    af[::57] = 0.0
    with np.errstate(divide="ignore"):
        log_af = np.log(af)
    p = 1.0 + 2.0 * rng.random(N)
    p[::41] = np.inf
    q = 1.0 + 3.0 * rng.random(N)
    rq = 1.0 / q
    coords = np.linspace(-16.0, 16.0, N, endpoint=False)[:, None].copy()
    return log_af, p, rq, q, coords


def bench(fn, *args, reps=REPS):
    fn(*args)  # warm up / JIT
    t0 = time.perf_counter()
    for _ in range(reps):
        fn(*args)
    return (time.perf_counter() - t0) / reps


def main():
    log_af, p, rq, q, coords = make_inputs()
    cell = 32.0 / N
    anchors = np.arange(0, N, 16, dtype=np.int64)

    print(f"numba available: {K.USE_NUMBA} (active backend: {K.BACKEND})")
    print(f"array size {N}, {REPS} repetitions per timing\n")

    if not K.USE_NUMBA:
        print("numba missing: compiled column would be the raw python loop; "
              "only the numpy twins are timed")
    af = np.exp(log_af)
    g_samples = np.cos(coords[:, 0] / 3)
    rows = [
        ("scaled_modular", REPS,
         lambda: K._scaled_modular_impl(log_af, p, rq, 0.0, -0.3, cell, 0.0),
         lambda: K._scaled_modular_np(log_af, p, rq, 0.0, -0.3, cell, 0.0)),
        ("plain_modular", REPS,
         lambda: K._plain_modular_impl(af, p, cell),
         lambda: K._plain_modular_np(af, p, cell)),
        ("esssup_modular", REPS,
         lambda: K._esssup_modular_impl(log_af, q, 0.1),
         lambda: K._esssup_modular_np(log_af, q, 0.1)),
        ("log_holder_max", 4,
         lambda: K._log_holder_max_impl(g_samples, coords, anchors, 32.0),
         lambda: K._log_holder_max_np(g_samples, coords, anchors, 32.0)),
    ]
    print(f"{'kernel':<18}{'compiled':>14}{'numpy':>14}{'speedup':>10}",
          flush=True)
    for name, reps, loop_fn, np_fn in rows:
        t_loop = bench(loop_fn, reps=reps) if K.USE_NUMBA else math.nan
        t_np = bench(np_fn, reps=reps)
        speed = t_np / t_loop if K.USE_NUMBA else math.nan
        print(f"{name:<18}{t_loop * 1e6:>11.1f} us{t_np * 1e6:>11.1f} us"
              f"{speed:>9.2f}x", flush=True)

    print("\nend-to-end mixed norm (desk scale, 9 levels):", flush=True)
    code = (
        "import time, numpy as np;"
        "from varbesov.grid import default_grid;"
        "from varbesov.exponents import log_smooth_exponent, cos_bump_exponent;"
        "from varbesov.mixed import mixed_norm;"
        "from varbesov.random_fields import band_limited_sequence;"
        "g = default_grid(1);"
        "fs = band_limited_sequence(g, 9, 64, 3);"
        "p = log_smooth_exponent(g, 2.0, 1.5);"
        "q = cos_bump_exponent(g, 1.5, 1.0);"
        "mixed_norm(fs, p, q);"
        "t0 = time.perf_counter();"
        "[mixed_norm(fs, p, q) for _ in range(5)];"
        "print('  %-6s %7.1f ms' % "
        "(__import__('os').environ.get('VARBESOV_BACKEND', 'auto'),"
        " (time.perf_counter() - t0) / 5 * 1e3))"
    )
    for backend in ("numba", "numpy"):
        env = dict(os.environ, VARBESOV_BACKEND=backend)
        subprocess.run([sys.executable, "-c", code], env=env, check=True)


if __name__ == "__main__":
    main()
