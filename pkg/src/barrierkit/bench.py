"""Timing harness: compiled path kernel vs the NumPy fallback.

Run as `python -m barrierkit.bench`. Both kernels consume identical
precomputed draws and must return identical results; the table reports
wall time and speedup for a few path/step budgets, and fails loudly if
the outputs ever differ.
"""

from __future__ import annotations

import time

import numpy as np

from .model import BarrierCurve, BarrierSet, MarketParams
from .pricing.engine import HAVE_COMPILED_KERNEL, simulate_paths

CASES = (
    (20_000, 50),
    (100_000, 365),
    (200_000, 365),
)


def _run(force_numpy: bool, paths: int, steps: int):
    params = MarketParams(mu=0.10, sigma=0.30, r=0.10, T=0.25)
    barriers = BarrierSet(lower=BarrierCurve.flat(70.0), upper=BarrierCurve.flat(130.0))
    t0 = time.perf_counter()
    res = simulate_paths(
        params, barriers, 100.0,
        paths=paths, steps_per_year=steps, seed=7, chunk=32_768,
        force_numpy_kernel=force_numpy,
    )
    return time.perf_counter() - t0, res


def main() -> None:
    if not HAVE_COMPILED_KERNEL:
        print("compiled kernel not available; nothing to compare")
        return
    print(f"{'paths':>8} {'steps/yr':>8} {'compiled':>10} {'numpy':>10} {'speedup':>8}")
    for paths, steps in CASES:
        t_c, res_c = _run(False, paths, steps)
        t_n, res_n = _run(True, paths, steps)
        if not (
            np.array_equal(res_c.status, res_n.status)
            and np.array_equal(res_c.x_final, res_n.x_final)
        ):
            raise AssertionError("kernel outputs differ; bit-compatibility is broken")
        print(f"{paths:>8} {steps:>8} {t_c:>9.3f}s {t_n:>9.3f}s {t_n / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
