"""Rank mod p: numba kernel vs numpy fallback.

Matrices come from real window systems (Ledrappier boxes and half-space
windows of its higher-block recoding) plus random dense matrices.  Every case
checks that both paths return the same rank before timing is reported.

    python3 benchmarks/bench_rank.py [--repeat 3] [--sizes 10,20,30]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from entgeom import _kernels
from entgeom.entropy import halfspace_window
from entgeom.fpsolve import build_system
from entgeom.laurent import parse_poly
from entgeom.shiftsys import higher_block, principal, region_box


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def cases(sizes):
    x1 = principal(2, parse_poly("1 + u1 + u2", 2, 2), "X1")
    for n in sizes:
        yield f"X1 box {n}x{n}", build_system(x1, region_box([n, n])).dense(), 2
    rec = higher_block(x1, 1)
    for L in (4, 8):
        win = halfspace_window(rec, (1, 1), L, L)
        yield f"X1[r=1] window {L},{L}", build_system(rec, win.ambient).dense(), 2
    rng = np.random.default_rng(0)
    for n in (200, 400):
        for p in (2, 3):
            yield f"random {n}x{n} mod {p}", rng.integers(0, p, size=(n, n)), p


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--sizes", default="10,20,30")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if not _kernels.USE_NUMBA:
        print("numba disabled or missing: only the numpy path is timed")
    # compile outside the timed region
    _kernels.rank_mod_p(np.eye(3, dtype=np.int64), 2, use_numba=_kernels.USE_NUMBA)

    print(f"{'case':<28} {'shape':>11} {'rank':>6} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for name, M, p in cases(sizes):
        r_np = _kernels.rank_mod_p(M, p, use_numba=False)
        t_np = _best(lambda: _kernels.rank_mod_p(M, p, use_numba=False), args.repeat)
        if _kernels.USE_NUMBA:
            r_nb = _kernels.rank_mod_p(M, p, use_numba=True)
            if r_nb != r_np:
                raise SystemExit(f"rank mismatch on {name}: numpy {r_np}, numba {r_nb}")
            t_nb = _best(lambda: _kernels.rank_mod_p(M, p, use_numba=True), args.repeat)
            speed = f"{t_np / t_nb:8.1f}x"
            nb = f"{t_nb:10.4f}"
        else:
            nb, speed = f"{'-':>10}", f"{'-':>8}"
        shape = f"{M.shape[0]}x{M.shape[1]}"
        print(f"{name:<28} {shape:>11} {r_np:>6} {t_np:10.4f} {nb} {speed}")


if __name__ == "__main__":
    main()
