"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Also runs the demo detection stage once per backend. Results are checked
for equality before timing so a fast but wrong kernel does not go unnoticed.
"""
import argparse
import tempfile
import time
from importlib import resources
from pathlib import Path

import numpy as np

from nameshift import _kernels as K
from nameshift.pipeline import Pipeline, load_config


def best_of(fn, repeat):
    fn()  # warm-up, includes jit compilation
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def workloads(rng):
    starts = np.sort(rng.integers(0, 200_000, size=20_000))
    ends = starts + rng.integers(0, 3, size=starts.size)
    sets = [set(rng.choice(400, size=rng.integers(1, 4), replace=False).tolist()) for _ in range(1_500)]
    bits = K.pack_sets(sets, 400)
    query = rng.random(2_000)
    rows = rng.random((300, 2_000))
    return {
        "window_pairs (20k spans)": (K.window_pairs_numpy, K.window_pairs_numba, (starts, ends, 10)),
        "subset_matrix (1.5k terms)": (K.subset_matrix_numpy, K.subset_matrix_numba, (bits,)),
        "cosine_scores (300x2000)": (K.cosine_scores_numpy, K.cosine_scores_numba, (query, rows)),
    }


def bench_demo(repeat):
    demo = resources.files("nameshift") / "data" / "demo"
    base = load_config(Path(str(demo)) / "demo.conf")
    out = {}
    for name, flag in (("numpy", False), ("numba", True)):
        K.USE_NUMBA = flag

        def run():
            with tempfile.TemporaryDirectory() as tmp:
                Pipeline(base.updated(output=Path(tmp))).detect()
        out[name] = best_of(run, repeat)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not K.HAS_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':30s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for name, (slow, fast, a) in workloads(rng).items():
        if not np.allclose(slow(*a), fast(*a)):
            raise SystemExit(f"{name}: backends disagree")
        t_np, t_nb = best_of(lambda: slow(*a), args.repeat), best_of(lambda: fast(*a), args.repeat)
        print(f"{name:30s} {t_np * 1e3:9.2f}ms {t_nb * 1e3:9.2f}ms {t_np / t_nb:7.1f}x")
    demo = bench_demo(max(1, args.repeat // 2))
    print(f"{'demo detect (5 queries)':30s} {demo['numpy'] * 1e3:9.2f}ms {demo['numba'] * 1e3:9.2f}ms "
          f"{demo['numpy'] / demo['numba']:7.1f}x")


if __name__ == "__main__":
    main()
