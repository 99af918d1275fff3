#!/usr/bin/env python3
"""Benchmark the batched-FK kernel paths (compiled vs plain numpy).

Run from the repository root::

    python3 benchmarks/bench_kernels.py [--samples 1000000] [--repeats 3]

The same joint batch is pushed through both implementations and timed; the
report shows per-path wall time, throughput, and the max elementwise
disagreement (which should sit at float rounding noise).
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from armkit import _kernels, model


def _time(fn, rows: np.ndarray, qb: np.ndarray, repeats: int) -> tuple[float, np.ndarray]:
    out = fn(rows, qb)  # warm-up (and JIT compile for the numba path)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(rows, qb)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    arm = model.default_arm()
    rows = model.dh_params(arm)
    lim = model.limits_array(arm)
    rng = np.random.default_rng(args.seed)
    qb = rng.uniform(lim[:, 0], lim[:, 1], size=(args.samples, 6))

    print(f"samples: {args.samples:,}   repeats: {args.repeats} (best shown)")
    print(f"compiled path available: {_kernels.HAS_NUMBA}")

    t_np, out_np = _time(_kernels.fk_points_numpy, rows, qb, args.repeats)
    print(f"numpy   : {t_np * 1e3:9.1f} ms   "
          f"{args.samples / t_np / 1e6:7.2f} Mpts/s")

    if _kernels.HAS_NUMBA:
        t_nb, out_nb = _time(_kernels.fk_points, rows, qb, args.repeats)
        print(f"numba   : {t_nb * 1e3:9.1f} ms   "
              f"{args.samples / t_nb / 1e6:7.2f} Mpts/s")
        print(f"speedup : {t_np / t_nb:9.2f}x")
        print(f"max |diff|: {float(np.max(np.abs(out_nb - out_np))):.3e}")
    else:
        print("numba   : unavailable (or ARMKIT_PURE_NUMPY=1); skipped")


if __name__ == "__main__":
    main()
