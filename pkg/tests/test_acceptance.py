"""Acceptance criteria 1-10.

Each test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary and also when this file is run as a script.
"""

import math
import time

import numpy as np
import pytest

from lp_lab.instances import default_gamma_grid, lp_gamma
from lp_lab.measures import b_star_bound, sharpness_exact, sharpness_sampled
from lp_lab.model import build_symmetric_pd
from lp_lab.numerics import project_polyhedron, singular_extremes
from lp_lab.oracle import enumerate_vertices, solve_exact
from lp_lab.pdhg import curly_l_from_values, pdhg_iterate, restarted_solve, step_sizes
from lp_lab.suites import gamma_corpus, gamma_sweep, random_corpus, run_suite
from oracles import affine_mesh_projection, mp_singular_extremes

SEED = 0
COUNT = 50
RESULTS = {}
REPORTS = {}


def record(number, ok, text):
    RESULTS[number] = f"{'PASS' if ok else 'FAIL'} criterion {number}: {text}"
    assert ok, RESULTS[number]


def _variation(values):
    return max(values) / min(values) - 1.0


def test_criterion_01_sharpness_law():
    t0 = time.perf_counter()
    worst_p, worst_d = 0.0, 0.0
    for g in default_gamma_grid():
        pd = build_symmetric_pd(lp_gamma(g))
        face = solve_exact(pd)
        worst_d = max(worst_d, abs(sharpness_exact(pd, face, "dual") - 1.0))
        if 0 < g <= math.pi / 12:
            worst_p = max(worst_p, abs(sharpness_exact(pd, face, "primal") - math.sin(g)))
    dt = time.perf_counter() - t0
    ok = worst_p <= 1e-6 and worst_d <= 1e-9 and dt < 1.0
    record(1, ok, f"max|mu_p - sin g| = {worst_p:.2e} (g in (0, pi/12]), max|mu_d - 1| = {worst_d:.2e}, {dt:.2f} s")


def test_criterion_02_gamma_constancy():
    t0 = time.perf_counter()
    rows = gamma_sweep(seed=SEED)
    dt = time.perf_counter() - t0
    keys = ("theta_p_hat", "theta_d_hat", "dist0_X_rel", "dist0_S_rel")
    var = {k: _variation([r[k] for r in rows]) for k in keys}
    ok = all(v <= 0.05 for v in var.values()) and dt < 30.0
    detail = ", ".join(f"{k} {100 * v:.1f}%" for k, v in var.items())
    record(2, ok, f"variation over the full grid: {detail}; {dt:.1f} s")


def test_criterion_03_theorem_certificate():
    t0 = time.perf_counter()
    rows, entries = run_suite("theorem", seed=SEED, count=COUNT, reports=REPORTS)
    dt = time.perf_counter() - t0
    bad = [r for r in rows if not r.passed]
    n_rand = sum(1 for k in entries if k.startswith("uniq"))
    ok = not bad and dt < 120.0 and n_rand == COUNT
    record(3, ok, f"{len(rows)} rows on {n_rand} random + {len(entries) - n_rand} LP_gamma, "
                  f"{len(bad)} failures, {dt:.1f} s")


def test_criterion_04_b_star_certificate():
    rows, _ = run_suite("bstar", seed=SEED, count=COUNT, reports=REPORTS)
    more, _ = run_suite("bstar", seed=SEED, count=COUNT, corpus=random_corpus(SEED, COUNT, unique=True),
                        reports=REPORTS)
    rows += more
    bad = [r for r in rows if not r.passed]
    worst = 0.0
    for g in default_gamma_grid():
        if g > 0:
            pd = build_symmetric_pd(lp_gamma(g))
            worst = max(worst, abs(b_star_bound(pd, solve_exact(pd).primal_vertices[0], 0.0) - math.sqrt(6)))
    ok = not bad and worst <= 1e-9
    record(4, ok, f"{len(rows)} rows, {len(bad)} failures; max|B* - sqrt6| on LP_gamma (g > 0) = {worst:.1e}")


def test_criterion_05_rr_certificate():
    rows, entries = run_suite("rr", seed=SEED, count=COUNT)
    bad = [r for r in rows if not r.passed]
    extended = sum(1 for r in rows if math.isnan(r.value))
    ok = not bad
    record(5, ok, f"{len(rows)} rows over {len(entries)} instances ({extended} extended-value rows), "
                  f"{len(bad)} failures")


def test_criterion_06_sandwich_certificate():
    rows, entries = run_suite("sandwich", seed=SEED, count=COUNT)
    more, _ = run_suite("sandwich", corpus=random_corpus(SEED, COUNT, unique=True))
    rows += more
    bad = [r for r in rows if not r.passed]
    record(6, not bad, f"{len(rows)} bounded-dual-face instances, {len(bad)} failures")


def test_criterion_07_pdhg_correctness():
    pd = build_symmetric_pd(lp_gamma(math.pi / 6))
    face = solve_exact(pd)
    log = restarted_solve(pd, step_sizes(pd), 1e-6, face)
    x_star, s_star = face.primal_vertices[0], face.dual_vertices[0]
    err = max(np.linalg.norm(log.x - x_star), np.linalg.norm(log.s - s_star))
    x1, y1 = pdhg_iterate(pd, (np.zeros(3), np.zeros(1)), step_sizes(pd))
    one = max(np.max(np.abs(x1 - [0.35355, 0, 0])), abs(y1[0] - 0.29588))
    ok = log.terminated_by == "eps" and err <= 1e-6 and one <= 1e-5
    record(7, ok, f"E_d = {err:.2e} after {log.total_iterations} iterations; first step off by {one:.1e}")


def test_criterion_08_bound_domination():
    t0 = time.perf_counter()
    rows, entries = run_suite("pdhg-bound", seed=SEED, count=COUNT, reports=REPORTS)
    dt = time.perf_counter() - t0
    bad = [r for r in rows if not r.passed]
    used = len({r.instance_id for r in rows})
    ratio = max(r.value / r.upper for r in rows)
    ok = not bad and dt < 300.0
    record(8, ok, f"{len(rows)} rows on {used} instances with exact sharpness, {len(bad)} failures, "
                  f"max T/bound = {ratio:.2e}, {dt:.1f} s")


def test_criterion_09_step_identity_and_l_arithmetic():
    worst = 0.0
    corpus = random_corpus(SEED, COUNT, unique=True) + random_corpus(SEED, COUNT, mixed=True) + gamma_corpus()
    for e in corpus:
        mu = []
        for side in ("primal", "dual"):
            fs = e.face.side(side)
            mu.append(sharpness_exact(e.pd, e.face, side) if fs.unique else sharpness_sampled(e.pd, e.face, side))
        for s in (step_sizes(e.pd), step_sizes(e.pd, "optimized", *mu)):
            worst = max(worst, abs(s.tau * s.sigma * e.pd.lambda_max**2 - 0.25))
    kw = dict(kappa=1.0, mu_p=1.0, mu_d=1.0, theta_p=1.0, theta_d=1.0, rel_x=1.0, rel_c=1.0, rel_s=1.0, n=4)
    spots = tuple(curly_l_from_values(v, **kw).value for v in ("easy", "smart", "easy_replaced"))
    ok = worst <= 1e-12 and spots == (68.0, 64.0, 102.0)
    record(9, ok, f"max|tau sigma lmax^2 - 1/4| = {worst:.1e} on {len(corpus)} instances; L spots = {spots}")


def test_criterion_10_numerics_oracles():
    rng = np.random.default_rng(SEED)
    proj_err = 0.0
    cases = 0
    # 2-D polygons (n=4, two equalities) and 3-D polytopes (n=4, one equality), cut by e^T x = 4
    for k in range(12):
        m = 1 + k % 2
        A = np.vstack([rng.standard_normal((m, 4)), np.ones((1, 4))])
        b = A @ rng.uniform(0.2, 1.5, 4)
        V = enumerate_vertices(A, b)
        x = V.mean(axis=0) + 2.0 * rng.standard_normal(4)
        _, d = project_polyhedron(x, A, b)
        _, d_ref = affine_mesh_projection(x, A, b, V)
        proj_err = max(proj_err, abs(d - d_ref))
        cases += 1
    sv_err = 0.0
    for _ in range(100):
        m, n = rng.integers(1, 6, size=2)
        A = rng.integers(-5, 6, size=(m, n)).astype(float)
        if not A.any():
            continue
        hi, lo = mp_singular_extremes(A)
        ext = singular_extremes(A)
        sv_err = max(sv_err, abs(ext.sigma_max_plus - hi) / max(1, hi), abs(ext.sigma_min_plus - lo) / max(1, hi))
    ok = proj_err <= 1e-4 and sv_err <= 1e-10
    record(10, ok, f"projection vs mesh {proj_err:.1e} on {cases} polytopes; singular values vs eigsy {sv_err:.1e}")


def summary_lines():
    return [RESULTS[k] for k in sorted(RESULTS)]


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
