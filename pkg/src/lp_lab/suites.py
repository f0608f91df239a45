"""Certificate suites over seeded instance corpora.

Each suite returns :class:`SuiteRow` records, ordered by instance id, so the
CSV written from them is byte-stable for a given seed and count.
"""

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import AssumptionViolation, GenerationFailed, NotApplicable
from .instances import boundary_instance, default_gamma_grid, lp_gamma, random_instance, random_shape
from .measures import RR_GRID, build_condition_report, check_rr_inequality, sandwich_check
from .model import build_symmetric_pd
from .oracle import face_geometry, solve_exact
from .pdhg import curly_l, distance_to_optima_error, iteration_bound_t, restarted_solve, step_sizes

SUITES = ("rr", "theorem", "bstar", "sandwich", "pdhg-bound")
CERT_TOL = 1e-7
PDHG_EPS = (1e-4, 1e-6)
MAX_ITER_CAP = 10_000_000
_DRAWS = 50


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    instance: object
    pd: object
    face: object


@dataclass(frozen=True)
class SuiteRow:
    instance_id: str
    check: str
    passed: bool
    lower: float
    value: float
    upper: float
    detail: str = ""


def _entry(ident, inst):
    pd = build_symmetric_pd(inst)
    return CorpusEntry(ident, inst, pd, solve_exact(pd))


def gamma_corpus(include_zero=True):
    grid = default_gamma_grid()
    return [_entry(f"gamma={g:.12g}", lp_gamma(g)) for g in grid if include_zero or g > 0]


def random_corpus(seed, count, *, unique=False, mixed=False, n_max=8):
    """``count`` seeded random instances.

    ``unique`` keeps drawing until both optima are unique; ``mixed`` makes
    every other instance degenerate so that non-unique faces appear.
    """
    out = []
    prefix = "uniq" if unique else "rand"
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        degenerate = mixed and i % 2 == 1
        for _ in range(_DRAWS):
            m, n = random_shape(rng, n_max)
            try:
                entry = _entry(f"{prefix}-{seed}-{i:03d}", random_instance(None, m, n, degenerate=degenerate, rng=rng))
            except (AssumptionViolation, GenerationFailed):
                continue
            if unique and not (entry.face.primal_unique and entry.face.dual_unique):
                continue
            out.append(entry)
            break
        else:
            raise GenerationFailed(f"corpus draw {i} failed for seed {seed}")
    return out


def suite_corpus(suite, seed, count):
    if suite == "rr":
        return random_corpus(seed, count, mixed=True) + gamma_corpus() + [_entry("boundary", boundary_instance())]
    if suite in ("theorem", "pdhg-bound"):
        return random_corpus(seed, count, unique=True) + gamma_corpus()
    return random_corpus(seed, count, mixed=True) + gamma_corpus()


def _le_row(ident, check, value, upper, tol=CERT_TOL, detail=""):
    passed = value <= upper + tol or math.isinf(upper)
    return SuiteRow(ident, check, bool(passed), -math.inf, value, upper, detail)


def rr_rows(entry, grid=RR_GRID):
    return [
        SuiteRow(entry.id, "rr", row.passed, row.lower, row.value, row.upper, row.detail)
        for row in (check_rr_inequality(entry.pd, entry.face, e, d) for e in grid for d in grid)
    ]


def theorem_rows(entry, report):
    rows = []
    if report.thm31_rhs is not None:
        rows.append(_le_row(entry.id, "theta_p<=thm_rhs", report.theta_p_hat, report.thm31_rhs))
    if report.cor32_rhs is not None:
        rows.append(_le_row(entry.id, "theta_d<=cor_rhs", report.theta_d_hat, report.cor32_rhs))
    return rows


def bstar_rows(entry, report):
    if not math.isfinite(report.b_star):
        return []
    return [_le_row(entry.id, "theta_p<=b_star", report.theta_p_hat, report.b_star)]


def sandwich_rows(entry):
    geom = face_geometry(entry.face, entry.pd)
    try:
        row = sandwich_check(geom, "dual")
    except NotApplicable:
        return []
    return [SuiteRow(entry.id, "sandwich", row.passed, row.lower, row.value, row.upper, row.detail)]


POLICY_VARIANTS = {"standard": ("easy", "easy_replaced"), "optimized": ("smart", "smart_replaced")}


def pdhg_bound_rows(entry, report, eps_list=PDHG_EPS):
    """Observed iteration counts against every applicable bound variant.

    Only instances whose sharpness values are exact qualify; otherwise the
    step sizes and bounds would rest on estimates.
    """
    if report.sharpness_exact_flags != {"primal": "exact", "dual": "exact"}:
        return []
    pd, face = entry.pd, entry.face
    e0 = distance_to_optima_error(np.zeros(pd.n), pd.c, face)
    rows = []
    for policy, variants in POLICY_VARIANTS.items():
        steps = step_sizes(pd, policy, report.mu_p, report.mu_d)
        for eps in eps_list:
            bounds = {}
            for var in variants:
                try:
                    L = curly_l(report, pd, var)
                except NotApplicable:
                    continue
                bounds[var] = iteration_bound_t(pd, L, e0, eps, policy, report.mu_p, report.mu_d)
            cap = min(MAX_ITER_CAP, int(math.ceil(max(bounds.values()))) + 1)
            log = restarted_solve(pd, steps, eps, face, max_iter=cap)
            for var, T in bounds.items():
                ok = log.terminated_by == "eps" and log.total_iterations <= T
                rows.append(SuiteRow(entry.id, f"T<=bound[{policy},{var}]", bool(ok), -math.inf,
                                     float(log.total_iterations), T, f"eps={eps:g}"))
    return rows


def run_suite(suite, seed=0, count=50, corpus=None, reports=None):
    """Run one suite; returns ``(rows, entries_by_id)``.

    ``reports`` is an optional dict of condition reports by instance id,
    filled in as reports are built so later suites can reuse them.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    entries = suite_corpus(suite, seed, count) if corpus is None else corpus
    rows = []
    for entry in entries:
        if suite == "rr":
            rows += rr_rows(entry)
        elif suite == "sandwich":
            rows += sandwich_rows(entry)
        else:
            report = None if reports is None else reports.get(entry.id)
            if report is None:
                report = build_condition_report(entry.pd, seed=seed, face=entry.face)
                if reports is not None:
                    reports[entry.id] = report
            if suite == "theorem":
                rows += theorem_rows(entry, report)
            elif suite == "bstar":
                rows += bstar_rows(entry, report)
            else:
                rows += pdhg_bound_rows(entry, report)
    order = {e.id: k for k, e in enumerate(sorted(entries, key=lambda e: e.id))}
    rows.sort(key=lambda r: order[r.instance_id])
    return rows, {e.id: e for e in entries}


def fmt(v):
    return f"{v:.12g}"


def rows_to_csv(rows, suite):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["instance", "suite", "check", "passed", "lower", "value", "upper", "detail"])
    for r in rows:
        w.writerow([r.instance_id, suite, r.check, "PASS" if r.passed else "FAIL",
                    fmt(r.lower), fmt(r.value), fmt(r.upper), r.detail])
    return buf.getvalue()


SWEEP_COLUMNS = ("gamma", "mu_p", "mu_d", "theta_p_hat", "theta_d_hat", "dist0_X_rel", "dist0_S_rel", "b_star")


def gamma_sweep(grid=None, seed=0):
    """Condition measures of the ``lp_gamma`` family, one dict per grid value."""
    grid = default_gamma_grid() if grid is None else list(grid)
    rows = []
    for g in grid:
        rep = build_condition_report(build_symmetric_pd(lp_gamma(g)), seed=seed)
        rows.append({
            "gamma": g, "mu_p": rep.mu_p, "mu_d": rep.mu_d,
            "theta_p_hat": rep.theta_p_hat, "theta_d_hat": rep.theta_d_hat,
            "dist0_X_rel": rep.dist0_X_rel, "dist0_S_rel": rep.dist0_S_rel, "b_star": rep.b_star,
        })
    return rows


def sweep_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([fmt(r[k]) for k in SWEEP_COLUMNS])
    return buf.getvalue()
