"""Compare the compiled and pure-Python Monte Carlo kernels.

Runs the same chains on both backends, checks that the estimates are
bit-identical and prints wall time per backend and the speed-up.

    python benchmarks/bench_kernels.py [--samples N] [--repeat R]
"""

import argparse
import time

from stabtherm.montecarlo import McConfig, run_metropolis, run_wolff
from stabtherm.pauli import build_canonical_hamiltonian
from stabtherm.structures import Kind, StructureSpec, build_structure


def cases(samples):
    yield "wolff s3 k=4 T=1.0", lambda cfg: run_wolff(build_structure(StructureSpec(Kind.S3, 4)), 1.0, cfg)
    yield "wolff s1 k=5 T=0.8", lambda cfg: run_wolff(build_structure(StructureSpec(Kind.S1, 5)), 0.8, cfg)
    yield "metropolis canonical k=3 T=1.0", lambda cfg: run_metropolis(build_canonical_hamiltonian(3), 1.0, cfg)


def timed(fn, cfg, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(cfg)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'case':<34} {'cython_s':>9} {'python_s':>9} {'speedup':>8}  identical")
    for name, fn in cases(args.samples):
        runs = {}
        for backend in ("cython", "python"):
            cfg = McConfig(n_samples=args.samples, equilibration=200, seed=7, backend=backend)
            runs[backend] = timed(fn, cfg, args.repeat)
        (tc, a), (tp, b) = runs["cython"], runs["python"]
        print(f"{name:<34} {tc:9.3f} {tp:9.3f} {tp / tc:8.1f}  {a == b}")


if __name__ == "__main__":
    main()
