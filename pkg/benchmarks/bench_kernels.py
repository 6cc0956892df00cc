"""Compare the compiled and numpy kernel backends.

Run ``python3 benchmarks/bench_kernels.py``. Prints the best-of-N wall time
per workload and backend, and checks that both backends give identical
norms.
"""

import argparse
import timeit

from morreytrunc import kernels, testbank
from morreytrunc.core import QuadratureSpec, SpaceParams, sample
from morreytrunc.norms_diff import besov_morrey_norm, morrey_norm, tlm_norm


def workloads(n1, n2):
    box1, box2 = [(0.0, 1.0)], [(0.0, 1.0)] * 2
    g1 = sample(testbank.random_smooth(0, 1, box1), box1, n1)
    g2 = sample(testbank.random_smooth(0, 2, box2), box2, n2)
    p1, p2 = SpaceParams(0.5, 1, 2, 2, 1), SpaceParams(0.5, 1, 2, 2, 2)
    s2 = QuadratureSpec.for_grid(g2)
    return {
        f"morrey d=2 n={n2}": lambda: morrey_norm(g2, 1.0, 2.0, s2).total,
        f"besov d=1 n={n1}": lambda: besov_morrey_norm(g1, p1).total,
        f"tlm d=1 n={n1}": lambda: tlm_norm(g1, p1).total,
        f"tlm d=2 n={n2}": lambda: tlm_norm(g2, p2).total,
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n1", type=int, default=1024)
    ap.add_argument("--n2", type=int, default=48)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available_backends()
    previous = kernels.backend()
    print(f"{'workload':<22}" + "".join(f"{b:>12}" for b in backends) + "   speedup  equal")
    for name, fn in workloads(args.n1, args.n2).items():
        times, values = [], []
        for b in backends:
            kernels.use_backend(b)
            values.append(fn())
            times.append(min(timeit.repeat(fn, number=1, repeat=args.repeat)))
        speed = times[-1] / times[0] if len(times) > 1 else 1.0
        print(f"{name:<22}" + "".join(f"{t * 1e3:10.1f}ms" for t in times)
              + f"{speed:9.1f}x  {len(set(values)) == 1}")
    kernels.use_backend(previous)


if __name__ == "__main__":
    main()
