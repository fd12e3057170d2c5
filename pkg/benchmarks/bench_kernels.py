"""Compare the numba and numpy backends of the integer hot loops.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5] [--batch 20000]

Both backends are called directly by name, so the environment flag
QUADRIC_BUNDLES_BACKEND does not matter here.  Outputs are checked for
equality before timing.
"""

import argparse
import time

import numpy as np

from quadric_bundles import _kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_verdicts(batch, repeat, rng):
    k, s = 40, 24
    c0 = rng.integers(-20, 21, size=(batch, k))
    c1 = rng.integers(-6, 7, size=(batch, k))
    dec = rng.random(k) < 0.3
    degree = rng.integers(-9, 10, size=batch)
    num = rng.integers(-40, 10, size=(batch, s))
    den = rng.integers(1, 5, size=(batch, s))
    args = (c0, c1, dec, degree, 3, num, den)
    assert (_kernels.verdict_codes_numpy(*args) == _kernels.verdict_codes_numba(*args)).all()
    return (
        best_of(lambda: _kernels.verdict_codes_numpy(*args), repeat),
        best_of(lambda: _kernels.verdict_codes_numba(*args), repeat),
    )


def bench_rank(count, repeat, rng):
    mats = [rng.integers(0, _kernels.PRIME, size=(6, 6)) * (rng.random((6, 6)) < 0.6) for _ in range(count)]
    assert [_kernels.rank_mod_p_numpy(m) for m in mats] == [_kernels.rank_mod_p_numba(m) for m in mats]
    return (
        best_of(lambda: [_kernels.rank_mod_p_numpy(m) for m in mats], repeat),
        best_of(lambda: [_kernels.rank_mod_p_numba(m) for m in mats], repeat),
    )


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--batch", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not _kernels.NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed; nothing to compare")
    rng = np.random.default_rng(args.seed)
    rows = [
        ("verdict_codes", *bench_verdicts(args.batch, args.repeat, rng)),
        ("rank_mod_p (6x6)", *bench_rank(args.batch // 20, args.repeat, rng)),
    ]
    print(f"{'kernel':<20} {'numpy [s]':>10} {'numba [s]':>10} {'speedup':>8}")
    for name, t_np, t_nb in rows:
        print(f"{name:<20} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
