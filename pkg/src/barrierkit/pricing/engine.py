"""Deterministic bridged path engine shared by pricing and breach estimation.

Reproducibility design: every path owns a fixed, pre-sized block of
words in a single counter-based random stream (Philox keyed by the
seed). A path's block holds its normal increments, one bridge uniform
per step and barrier side, and a small reserve used only if both sides
fire within one step. Chunks of paths map to counter offsets, so the
draws a path sees depend only on (seed, path index, layout), never on
chunk size or worker count; per-path outputs land at fixed offsets of
preallocated arrays and are reduced once at the end. Re-chunking or
adding workers therefore cannot change a single bit of the result.

The per-step scan runs in a compiled kernel when available and in a
NumPy twin otherwise; all transcendentals (quantile transform, logs for
bridge thresholds) happen up front in NumPy either way, so the two
kernels are bit-identical by construction.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from ..model import BarrierSet, DomainError, MarketParams

try:
    from .. import _pathkernel as _kernel

    HAVE_COMPILED_KERNEL = True
except ImportError:
    from .. import _pathkernel_np as _kernel

    HAVE_COMPILED_KERNEL = False

from .. import _pathkernel_np

RESERVE_WORDS = 8
_U_SHIFT = 2.0**-54
_U_MAX = 1.0 - 2.0**-53
_WORD_BUDGET = 2**48

STATUS_ALIVE = 0
STATUS_LOWER = 1
STATUS_UPPER = 2
STATUS_TIE = 3


def n_steps_for(steps_per_year: int, T: float) -> int:
    return max(1, math.ceil(steps_per_year * T - 1e-12))


def words_per_path(n_steps: int, has_l: bool, has_u: bool) -> int:
    w = n_steps * (1 + int(has_l) + int(has_u)) + RESERVE_WORDS
    return ((w + 3) // 4) * 4  # counter advances 4 words at a time


@dataclass
class PathResult:
    """Terminal state of every simulated path."""

    status: np.ndarray  # uint8, codes above (ties already resolved)
    x_final: np.ndarray  # log-price at expiry, valid where alive
    n_steps: int
    dt: float


def _barrier_logs(curve, n: int, dt: float, T: float) -> np.ndarray:
    return np.array([math.log(curve.value_at(i * dt, T)) for i in range(n + 1)])


def _path_words(seed: int, path: int, wpp: int) -> np.ndarray:
    gen = np.random.Generator(np.random.Philox(key=seed, counter=(path * wpp) // 4))
    return gen.random(wpp)


def _resolve_tie(
    r: np.ndarray,
    xa: float,
    xb: float,
    sigma: float,
    dt: float,
    bl: np.ndarray | None,
    bu: np.ndarray | None,
    step: int,
) -> int:
    """Order two same-step crossings by subdividing the step once.

    The step is split at its Brownian-bridge midpoint (reserve word 0);
    each half is then tested per side with its own reserve bridge word,
    in time order. Whichever side fires in the earlier half wins; a tie
    inside one half (or a refinement that fires in neither) falls back
    to the lower side, deterministically.
    """
    vol = sigma * math.sqrt(dt)
    xm = 0.5 * (xa + xb) + 0.5 * vol * ndtri(min(r[0] + _U_SHIFT, _U_MAX))
    quarter_var = 0.25 * sigma * sigma * dt

    def half_hits(x_lo: float, x_hi: float, frac0: float, frac1: float, wl: float, wu: float):
        hl = hu = False
        if bl is not None:
            b0 = (1.0 - frac0) * bl[step] + frac0 * bl[step + 1]
            b1 = (1.0 - frac1) * bl[step] + frac1 * bl[step + 1]
            w = -quarter_var * math.log(wl + _U_SHIFT)
            hl = (x_hi <= b1) or ((x_lo - b0) * (x_hi - b1) < w)
        if bu is not None:
            b0 = (1.0 - frac0) * bu[step] + frac0 * bu[step + 1]
            b1 = (1.0 - frac1) * bu[step] + frac1 * bu[step + 1]
            w = -quarter_var * math.log(wu + _U_SHIFT)
            hu = (x_hi >= b1) or ((b0 - x_lo) * (b1 - x_hi) < w)
        return hl, hu

    hl1, hu1 = half_hits(xa, xm, 0.0, 0.5, r[1], r[2])
    hl2, hu2 = half_hits(xm, xb, 0.5, 1.0, r[3], r[4])
    first_l = 1 if hl1 else (2 if hl2 else 3)
    first_u = 1 if hu1 else (2 if hu2 else 3)
    return STATUS_LOWER if first_l <= first_u else STATUS_UPPER


def simulate_paths(
    params: MarketParams,
    barriers: BarrierSet,
    s0: float,
    paths: int,
    steps_per_year: int,
    seed: int,
    chunk: int,
    workers: int = 1,
    bridge: bool = True,
    force_numpy_kernel: bool = False,
) -> PathResult:
    """Scan `paths` exact-lognormal paths against the barrier set.

    Monitoring is discrete on the step grid with a Brownian-bridge
    crossing test between nodes (disabled when bridge=False, which
    leaves the draw layout untouched so runs stay pairwise comparable).
    Assumes s0 is strictly inside the barriers at t=0; callers handle
    knocked-at-inception states before simulating.
    """
    if paths < 1:
        raise DomainError(f"paths must be >= 1, got {paths}")
    n = n_steps_for(steps_per_year, params.T)
    has_l = barriers.lower is not None
    has_u = barriers.upper is not None
    wpp = words_per_path(n, has_l, has_u)
    if paths * wpp > _WORD_BUDGET:
        raise DomainError(f"paths*steps budget exceeded: {paths} x {wpp} words per path")
    dt = params.T / n
    drift = (params.mu - 0.5 * params.sigma**2) * dt
    vol = params.sigma * math.sqrt(dt)
    x0 = math.log(s0)
    bl = _barrier_logs(barriers.lower, n, dt, params.T) if has_l else None
    bu = _barrier_logs(barriers.upper, n, dt, params.T) if has_u else None
    dummy1 = np.zeros(1)
    dummy2 = np.zeros((1, 1))

    status = np.zeros(paths, dtype=np.uint8)
    x_final = np.empty(paths, dtype=np.float64)
    tie_step = np.full(paths, -1, dtype=np.int64)
    tie_x0 = np.zeros(paths, dtype=np.float64)
    tie_x1 = np.zeros(paths, dtype=np.float64)

    kern = _pathkernel_np if force_numpy_kernel else _kernel
    half_var_dt = 0.5 * params.sigma**2 * dt

    def run_chunk(lo: int, hi: int) -> None:
        m = hi - lo
        gen = np.random.Generator(np.random.Philox(key=seed, counter=(lo * wpp) // 4))
        u = gen.random((m, wpp))
        z = ndtri(np.minimum(u[:, :n] + _U_SHIFT, _U_MAX))
        col = n
        wl = wu = dummy2
        if has_l:
            if bridge:
                wl = -half_var_dt * np.log(u[:, col : col + n] + _U_SHIFT)
            else:
                wl = np.zeros((m, n))
            col += n
        if has_u:
            if bridge:
                wu = -half_var_dt * np.log(u[:, col : col + n] + _U_SHIFT)
            else:
                wu = np.zeros((m, n))
            col += n
        kern.run_paths(
            x0, drift, vol, z,
            has_l, bl if has_l else dummy1, wl,
            has_u, bu if has_u else dummy1, wu,
            status[lo:hi], x_final[lo:hi],
            tie_step[lo:hi], tie_x0[lo:hi], tie_x1[lo:hi],
        )

    bounds = [(lo, min(lo + chunk, paths)) for lo in range(0, paths, chunk)]
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda b: run_chunk(*b), bounds))
    else:
        for lo, hi in bounds:
            run_chunk(lo, hi)

    reserve_base = n * (1 + int(has_l) + int(has_u))
    for p in np.flatnonzero(status == STATUS_TIE):
        r = _path_words(seed, int(p), wpp)[reserve_base : reserve_base + RESERVE_WORDS]
        status[p] = _resolve_tie(
            r, tie_x0[p], tie_x1[p], params.sigma, dt, bl, bu, int(tie_step[p])
        )

    return PathResult(status=status, x_final=x_final, n_steps=n, dt=dt)
