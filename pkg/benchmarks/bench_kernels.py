"""Compiled versus pure-Python kernels.

Times each kernel on the same random inputs with both backends, checks the
results agree, then times a few end-to-end workloads in fresh interpreters
with and without ``MEALYSYNC_PURE_PYTHON``.

    python benchmarks/bench_kernels.py [--repeat N] [--seed S] [--no-e2e]
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from mealysync import _kernels_py

try:
    from mealysync import _ckernels
except ImportError:
    _ckernels = None


def random_machine(rng, n, k):
    delta = [rng.randrange(n) for _ in range(n * k)]
    out = []
    for _ in range(n):
        row = list(range(k))
        rng.shuffle(row)
        out.extend(row)
    return delta, out


def cases(rng):
    n, k = 400, 2
    delta, out = random_machine(rng, n, k)
    labels = [rng.randrange(2) for _ in range(n)]
    d2, o2 = random_machine(rng, 300, 2)
    small, _ = random_machine(rng, 14, 2)
    word = [rng.randrange(2) for _ in range(2000)]
    # the adding machine: state 0 carries, state 1 is the identity
    add_d, add_o = [1, 0, 1, 1], [1, 0, 0, 1]
    return {
        "refine (n=400)": ("refine", (delta, labels, n, k)),
        "compose (300 x 400)": ("compose", (d2, o2, delta, out, k, 10**6)),
        "subsets (n=14)": ("subsets", (small, 14, 2, (1 << 14) - 1)),
        "transduce (|w|=2000)": ("transduce", (delta, out, k, 0, word)),
        "orbit_length (odometer, |w|=12)": ("orbit_length", (add_d, add_o, 2, 0, [0] * 12, 5000)),
    }


def bench_kernels(repeat, seed):
    rng = random.Random(seed)
    print(f"{'kernel':34} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for name, (fn, args) in cases(rng).items():
        py = getattr(_kernels_py, fn)
        t_py = min(timeit.repeat(lambda: py(*args), number=1, repeat=repeat)) * 1e3
        if _ckernels is None:
            print(f"{name:34} {t_py:10.2f} {'-':>10} {'-':>8}")
            continue
        cy = getattr(_ckernels, fn)
        if py(*args) != cy(*args):
            raise SystemExit(f"backends disagree on {name}")
        t_cy = min(timeit.repeat(lambda: cy(*args), number=1, repeat=repeat)) * 1e3
        print(f"{name:34} {t_py:10.2f} {t_cy:10.2f} {t_py / t_cy:7.1f}x")


WORKLOADS = {
    "lamplighter k=2 Z2": "from mealysync.families import *; "
                          "lamplighter_suite(2, FiniteGroupTable.cyclic(2))",
    "group order, 3-state nilpotent": "from mealysync import groups; from mealysync.automata import Dfa; "
                                      "from mealysync.mealy import color; "
                                      "d = Dfa('abc', '01', [[1, 2], [2, 2], [2, 2]]); "
                                      "[groups.enumerate_group(color(d, c)) for c in groups.ColoringEnumerator(d)]",
    "certify C_5 with its ideal": "from mealysync import reset; from mealysync.families import *; "
                                  "reset.gap_classify(cerny_machine(5), cerny_ideal(5))",
    "element cap 3000, adding machine": "from mealysync import groups; from mealysync.mealy import adding_machine; "
                                        "groups.enumerate_group(adding_machine(), element_cap=3000)",
}


def run_workload(code, pure):
    env = dict(os.environ)
    env.pop("MEALYSYNC_PURE_PYTHON", None)
    if pure:
        env["MEALYSYNC_PURE_PYTHON"] = "1"
    prog = ("import time; t = time.perf_counter(); " + code +
            "; print(time.perf_counter() - t)")
    p = subprocess.run([sys.executable, "-c", prog], env=env, capture_output=True, text=True,
                       check=True)
    return float(p.stdout.split()[-1])


def bench_workloads(repeat):
    print(f"\n{'workload':34} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, code in WORKLOADS.items():
        t_py = min(run_workload(code, True) for _ in range(repeat))
        t_cy = min(run_workload(code, False) for _ in range(repeat))
        print(f"{name:34} {t_py:10.3f} {t_cy:10.3f} {t_py / t_cy:7.1f}x")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--no-e2e", action="store_true", help="skip the end-to-end workloads")
    args = ap.parse_args(argv)
    print(f"compiled kernels: {'available' if _ckernels else 'not built'}\n")
    bench_kernels(args.repeat, args.seed)
    if not args.no_e2e and _ckernels is not None:
        bench_workloads(max(1, args.repeat // 2))


if __name__ == "__main__":
    main()
