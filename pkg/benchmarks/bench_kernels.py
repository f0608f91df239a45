"""Compare the compiled kernels with the numpy fallback.

Run with ``python benchmarks/bench_kernels.py``. Both backends are called
directly on identical inputs, and the script checks that they agree before
reporting timings.
"""

import argparse
import math
import timeit

import numpy as np

from lp_lab import _backend
from lp_lab.instances import lp_gamma, random_instance
from lp_lab.model import build_symmetric_pd
from lp_lab.numerics import StandardPolyhedron
from lp_lab.oracle import PIVOT_TOL
from lp_lab.pdhg import restarted_solve, step_sizes


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_enumeration(kernels, repeat):
    out = []
    rng = np.random.default_rng(7)
    for m, n in ((3, 10), (5, 14), (7, 16)):
        A = rng.standard_normal((m, n))
        poly = StandardPolyhedron(A, A @ rng.uniform(0.5, 1.5, n))
        args = (poly.M, poly.h, PIVOT_TOL, 1e-9)
        ref = None
        row = [f"enumerate_bases n={n} m={m}"]
        for name, kern in kernels.items():
            res = kern.enumerate_bases(*args)
            if ref is None:
                ref = res
            else:
                assert np.allclose(ref, res), "backends disagree"
            row.append(_best(lambda: kern.enumerate_bases(*args), repeat))
        out.append(row)
    return out


def bench_pdhg(kernels, repeat):
    out = []
    cases = [("lp_gamma(pi/6) eps=1e-8", build_symmetric_pd(lp_gamma(math.pi / 6)), 1e-8),
             ("random 4x12 eps=1e-6", build_symmetric_pd(random_instance(3, 4, 12)), 1e-6)]
    for label, pd, eps in cases:
        steps = step_sizes(pd)
        row = [f"restarted_solve {label}"]
        iters = None
        for name, kern in kernels.items():
            log = restarted_solve(pd, steps, eps, max_iter=200_000, kernels=kern)
            if iters is None:
                iters = log.total_iterations
            else:
                assert log.total_iterations == iters, "backends disagree"
            row.append(_best(lambda: restarted_solve(pd, steps, eps, max_iter=200_000, kernels=kern), repeat))
        out.append(row)
    return out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    kernels = {"python": _backend.fallback}
    if _backend.compiled is not None:
        kernels["cython"] = _backend.compiled
    else:
        print("compiled extension not built; timing the fallback only")
    rows = bench_enumeration(kernels, args.repeat) + bench_pdhg(kernels, args.repeat)
    head = f"{'kernel':<44}" + "".join(f"{k:>12}" for k in kernels)
    if len(kernels) == 2:
        head += f"{'speedup':>10}"
    print(head)
    for label, *times in rows:
        line = f"{label:<44}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            line += f"{times[0] / times[1]:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
