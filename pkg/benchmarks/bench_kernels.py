"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--paths 50]

Prints per-kernel timings at the experiment size (4000 steps) and the
end-to-end time of a reduced Table-3 ensemble under each backend.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from mrtrend import _fallback
from mrtrend.spectral import _unit_circle

try:
    from mrtrend import _kernels
except ImportError:
    _kernels = None

N = 4000

END_TO_END = """
import time
from mrtrend import BACKEND
from mrtrend.harness import preset_configs, run_experiment
cfg = preset_configs("table3", n_paths={paths})["base"]
t = time.perf_counter()
run_experiment(cfg, write=False)
print(BACKEND, time.perf_counter() - t)
"""


def kernel_cases():
    rng = np.random.default_rng(0)
    mu = 7.0 + 0.2 * np.sin(np.arange(N) / 50)
    z = rng.standard_normal(N)
    y = mu + 0.05 * z.cumsum()
    ct, st = _unit_circle(N)
    bins = np.array([0, 32, 64, 144, 160, 192, 208, 240, 256, 320], dtype=np.int64)
    amps = rng.uniform(0.05, 0.2, bins.size)
    phases = rng.uniform(-3, 3, bins.size)
    return {
        "euler_path": lambda m: m.euler_path(7.0, mu, z, 20.0, 1.1, 0, 1 / 250),
        "hp_solve": lambda m: m.hp_solve(y, 40000.0),
        "cosine_synthesis": lambda m: m.cosine_synthesis(bins, amps, phases, ct, st, N + 1),
    }


def best_of(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--paths", type=int, default=50)
    args = ap.parse_args()

    print(f"{'kernel':<18}{'compiled':>14}{'python':>14}{'speedup':>10}")
    for name, call in kernel_cases().items():
        py = best_of(lambda: call(_fallback), args.repeat)
        if _kernels is None:
            print(f"{name:<18}{'n/a':>14}{py * 1e6:>12.1f}us{'':>10}")
            continue
        c = best_of(lambda: call(_kernels), args.repeat)
        print(f"{name:<18}{c * 1e6:>12.1f}us{py * 1e6:>12.1f}us{py / c:>9.1f}x")

    print(f"\nend to end, {args.paths} paths x {N} steps (table 3 config):")
    times = {}
    for flag in ("0", "1"):
        env = dict(os.environ, MRTREND_PURE_PYTHON=flag)
        out = subprocess.run([sys.executable, "-c", END_TO_END.format(paths=args.paths)],
                             env=env, capture_output=True, text=True, check=True).stdout.split()
        times[out[0]] = float(out[1])
        print(f"  {out[0]:<10}{float(out[1]):8.2f}s")
    if len(times) == 2:
        print(f"  speedup   {times['python'] / times['compiled']:8.1f}x")


if __name__ == "__main__":
    main()
