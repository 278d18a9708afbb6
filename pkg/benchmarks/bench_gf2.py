"""Compare the compiled GF(2) kernel with the pure-Python fallback.

    python3 benchmarks/bench_gf2.py
    python3 benchmarks/bench_gf2.py --sizes 256 1024 --repeat 5

The resolution timing runs each backend in a subprocess so that the import-time
backend choice is honoured.
"""
import argparse
import os
import random
import subprocess
import sys
import timeit

from sseqbench import _gf2_py

try:
    from sseqbench import _gf2_core
except ImportError:
    _gf2_core = None


def random_rows(n, density, seed):
    rng = random.Random(seed)
    rows = []
    for _ in range(n):
        r = 0
        for j in range(n):
            if rng.random() < density:
                r |= 1 << j
        rows.append(r)
    return rows


def bench_kernels(sizes, repeat):
    print(f"{'n':>6} {'op':>10} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in sizes:
        rows = random_rows(n, 0.3, n)
        for op in ("rank", "echelonize", "kernel"):
            args = (rows, n) if op == "kernel" else (rows,)
            tp = min(timeit.repeat(lambda: getattr(_gf2_py, op)(*args), number=1, repeat=repeat))
            if _gf2_core is None:
                print(f"{n:>6} {op:>10} {tp:>10.4f} {'-':>10} {'-':>8}")
                continue
            tc = min(timeit.repeat(lambda: getattr(_gf2_core, op)(*args), number=1, repeat=repeat))
            print(f"{n:>6} {op:>10} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")


RES = (
    "import time;from sseqbench import gf2;from sseqbench.resolution import minimal_resolution;"
    "from sseqbench.steenrod import algebra_by_name;a=algebra_by_name('{alg}');t=time.perf_counter();"
    "minimal_resolution(a,{stems},{filt});print(gf2.BACKEND, time.perf_counter()-t)"
)


def bench_resolution(alg, stems, filt):
    print(f"\nminimal resolution over {alg}, stems <= {stems}, filtrations <= {filt}")
    for pure in ("0", "1"):
        env = dict(os.environ, SSEQBENCH_PURE_PYTHON=pure)
        out = subprocess.run([sys.executable, "-c", RES.format(alg=alg, stems=stems, filt=filt)],
                             env=env, capture_output=True, text=True, check=True).stdout.split()
        print(f"  {out[0]:>7}: {float(out[1]):.3f}s")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[128, 512, 1024])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--algebra", default="A2")
    ap.add_argument("--stems", type=int, default=40)
    ap.add_argument("--filtration", type=int, default=20)
    args = ap.parse_args()
    bench_kernels(args.sizes, args.repeat)
    bench_resolution(args.algebra, args.stems, args.filtration)


if __name__ == "__main__":
    main()
