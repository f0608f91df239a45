"""Condition measures and certificate checks.

Sharpness at a unique optimum
-----------------------------
Every feasible point has the form ``x* + t d`` with ``d`` in the tangent cone
``T`` at ``x*``, and the sharpness ratio ``c^T (x - x*) / (||c|| ||x - x*||)``
does not depend on ``t``. So the infimum is taken over unit directions of
``T``. For ``d = sum_i l_i u_i`` with generators ``u_i`` and ``l >= 0``,

    c^T d / ||d||  >=  sum_i l_i c^T u_i / sum_i l_i ||u_i||  >=  min_i c^T u_i / ||u_i||,

using ``||d|| <= sum_i l_i ||u_i||`` and ``c^T u_i >= 0``. The minimum over
the cone is therefore attained at a generator, and :func:`sharpness_exact`
evaluates it there.

Limiting error ratio
--------------------
No finite algorithm is known for the limit of suprema, so
:func:`limiting_error_ratio_estimate` samples each neighbourhood and reports
the per-radius curve next to the estimate.
"""

import itertools
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InfeasibleSet, NotApplicable, NotOnAffine, NotUnique
from .model import dist_to_orthant
from .numerics import StandardPolyhedron, minimize_scalar_quasiconvex
from .oracle import FaceGeometry, face_geometry, solve_exact, solve_standard, tangent_cone_generators

EPS_LEVELS = tuple(10.0 ** (-e) for e in (1.0, 1.5, 2.0, 2.5, 3.0))
PROBE_SCALES = tuple(10.0 ** (-e) for e in (0.0, 0.5, 1.0, 1.5))
RR_GRID = (0.0, 1e-3, 1e-2, 1e-1, 1.0)
N_DIRECTIONS = 200
N_SAMPLES = 64
CERT_TOL = 1e-7
B_STAR_LO = 1e-4
_OUTSIDE = 1e300


def error_ratio(pd, x, side="primal", polyhedron=None):
    """``Dist(x, F) / Dist(x, R^n_+)`` for ``x`` on the affine set, and 1 on ``F``.

    Raises ``NotOnAffine`` if ``x`` violates the side's equality constraints.
    """
    sd = pd.side(side)
    x = np.asarray(x, dtype=float)
    if not sd.on_affine(x):
        raise NotOnAffine(f"point is not on the {side} affine set")
    neg = dist_to_orthant(x)
    if neg <= 1e-12 * (1.0 + np.linalg.norm(x)):
        return 1.0
    poly = polyhedron if polyhedron is not None else StandardPolyhedron(sd.M, sd.h)
    return poly.project(x)[1] / neg


def _base_points(fs, rng, extra=4):
    pts = list(fs.vertices)
    if len(fs.vertices) > 1:
        W = rng.dirichlet(np.ones(len(fs.vertices)), size=extra)
        pts += list(W @ fs.vertices)
    for ray in fs.rays:
        pts.append(fs.vertices[0] + ray)
    return np.array(pts)


def _probe_directions(sd, vertex, max_subset=6):
    n = sd.n
    zero = np.flatnonzero(vertex <= 1e-9 * (1.0 + np.max(np.abs(vertex))))
    sets = [[i] for i in range(n)]
    if len(zero) <= max_subset:
        for k in range(2, len(zero) + 1):
            sets += [list(S) for S in itertools.combinations(zero, k)]
    elif len(zero):
        sets.append(list(zero))
    dirs = []
    for S in sets:
        e = np.zeros(n)
        e[S] = 1.0
        d = -sd.project_subspace(e)
        nd = np.linalg.norm(d)
        if nd > 1e-12:
            dirs.append(d / nd)
    return dirs


def limiting_error_ratio_estimate(pd, face, side="primal", seed=0, n_dirs=N_DIRECTIONS, levels=EPS_LEVELS):
    """Sampled lower estimate of the error-ratio supremum near the optimal face.

    For each radius in ``levels`` the maximum error ratio is taken over
    ``n_dirs`` seeded random points ``x* + r d`` (``x*`` on the face, ``d`` a
    unit direction of the affine set, ``r <= eps``) plus deterministic probes
    along negated projected coordinate directions.

    Returns
    -------
    estimate : float
        Maximum over the two smallest radii.
    curve : list of (eps, sup_theta)
    """
    fs = face.side(side)
    sd = pd.side(side)
    rng = np.random.default_rng(seed)
    poly = StandardPolyhedron(sd.M, sd.h)
    bases = _base_points(fs, rng)
    probes = [(v, d) for v in fs.vertices[:8] for d in _probe_directions(sd, v)]
    k = sd.basis.shape[1]
    curve = []
    for eps in levels:
        best = 1.0
        D = rng.standard_normal((n_dirs, k)) @ sd.basis.T
        D /= np.linalg.norm(D, axis=1, keepdims=True)
        radii = eps * (1.0 - rng.uniform(size=n_dirs))
        which = rng.integers(len(bases), size=n_dirs)
        points = bases[which] + radii[:, None] * D
        for v, d in probes:
            points = np.vstack([points, [v + eps * f * d for f in PROBE_SCALES]])
        for x in points:
            best = max(best, error_ratio(pd, x, side, polyhedron=poly))
        curve.append((float(eps), float(best)))
    estimate = max(val for _, val in curve[-2:])
    return estimate, curve


def sharpness_exact(pd, face, side="primal"):
    """Sharpness of a side with a unique optimum, from tangent-cone generators.

    Raises ``NotUnique`` when the side's optimal face is not a single point.
    """
    fs = face.side(side)
    if not fs.unique:
        raise NotUnique(f"{side} optimum is not unique")
    sd = pd.side(side)
    gens = tangent_cone_generators(pd, fs.vertices[0], side)
    return float(np.min(gens @ sd.objective) / sd.objective_norm)


def sharpness_sampled(pd, face, side="primal", seed=0, n_samples=N_SAMPLES):
    """Upper estimate of the sharpness infimum over sampled feasible points.

    Candidates are the non-optimal vertices, seeded random convex
    combinations of the vertices, points along non-optimal rays, and
    midpoints between each non-optimal vertex and its projection onto the
    optimal face.
    """
    fs = face.side(side)
    sd = pd.side(side)
    w = sd.objective
    rng = np.random.default_rng(seed)
    V = fs.feasible_vertices
    tol = 1e-9 * (1.0 + abs(fs.value))
    nonopt = V[V @ w > fs.value + tol]
    cands = list(nonopt)
    if len(V) > 1:
        cands += list(rng.dirichlet(np.ones(len(V)), size=n_samples) @ V)
    for ray in fs.feasible_rays:
        if ray @ w > 1e-10:
            cands += [V[0] + t * ray for t in (1.0, 10.0)]
    cands += [0.5 * (v + fs.project(v)) for v in nonopt]
    best = np.inf
    for x in cands:
        dist = fs.distance(x)
        if dist <= 1e-9 * (1.0 + np.linalg.norm(x)):
            continue
        best = min(best, (w @ x - fs.value) / (sd.objective_norm * dist))
    if not np.isfinite(best):
        raise NotApplicable(f"no non-optimal {side} feasible point to sample")
    return float(best)


def _lifted_interior(sd, value=None, slack=None):
    """``max t`` s.t. ``z`` on the side's affine set, ``z >= t e``, ``t >= 0`` and optionally ``w^T z <= value + slack``.

    Variables are ``(u, t[, sigma])`` with ``z = u + t e``.
    """
    n = sd.n
    e = np.ones(n)
    rows = np.hstack([sd.M, (sd.M @ e)[:, None]])
    rhs = sd.h.copy()
    if slack is not None and np.isfinite(slack):
        rows = np.hstack([rows, np.zeros((rows.shape[0], 1))])
        obj_row = np.concatenate([sd.objective, [sd.objective @ e, 1.0]])
        rows = np.vstack([rows, obj_row])
        rhs = np.concatenate([rhs, [value + slack]])
    cost = np.zeros(rows.shape[1])
    cost[n] = -1.0
    sol = solve_standard(rows, rhs, cost)
    if sol.unbounded:
        return np.inf
    return max(-sol.value, 0.0) + 0.0


def r_delta(pd, face, delta):
    """Largest ``min_i x_i`` over the primal ``delta``-optimal level set (``delta = inf`` drops the level constraint)."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    return _lifted_interior(pd.primal, face.primal.value, delta)


def big_r_eps(pd, face, eps):
    """Largest ``||s||_1`` over the dual ``eps``-optimal level set, ``+inf`` if unbounded."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    sd = pd.dual
    n = sd.n
    rows = np.vstack([
        np.hstack([sd.M, np.zeros((sd.M.shape[0], 1))]),
        np.concatenate([sd.objective, [1.0]]),
    ])
    rhs = np.concatenate([sd.h, [face.dual.value + eps]])
    cost = np.concatenate([-np.ones(n), [0.0]])
    sol = solve_standard(rows, rhs, cost)
    if sol.unbounded:
        return np.inf
    return float(-sol.value)


def b_star_bound(pd, x_star, R):
    """Infimum over ``r > 0`` of ``(R + d(r)) / r``, ``d(r) = Dist(x_star, {x in V_p : x >= r e})``.

    ``R = 0`` is accepted for a unique optimum (the bound's limit as the ball
    radius shrinks). Returns ``+inf`` when ``V_p`` has no strictly positive
    point.
    """
    sd = pd.primal
    x_star = np.asarray(x_star, dtype=float)
    r_max = _lifted_interior(sd)
    if r_max <= 1e-12:
        return np.inf
    hi = r_max if np.isfinite(r_max) else 1e3 * (1.0 + np.linalg.norm(x_star) + R)
    poly = StandardPolyhedron(sd.M, sd.h)
    e = np.ones(sd.n)

    def ratio(r):
        try:
            d = poly.shifted(r * e).project(x_star - r * e)[1]
        except InfeasibleSet:
            # rounding can empty the shifted set right at r_max
            return _OUTSIDE
        return (R + d) / r

    # projection rounding is divided by r, so the search stays away from 0;
    # any evaluated ratio is still a valid upper bound
    _, val = minimize_scalar_quasiconvex(ratio, B_STAR_LO * hi, hi)
    return float(val)


@dataclass(frozen=True)
class CertificateRow:
    name: str
    passed: bool
    lower: float
    value: float
    upper: float
    detail: str = ""


def _within(lower, value, upper, tol):
    return (lower <= value + tol) and (value <= upper + tol)


def check_rr_inequality(pd, face, eps, delta, tol=CERT_TOL):
    """``min(eps, delta) <= R_eps * r_delta <= eps + delta``, with the infinite cases checked as equivalences."""
    R = big_r_eps(pd, face, eps)
    r = r_delta(pd, face, delta)
    lo, hi = min(eps, delta), eps + delta
    t = tol * (1.0 + eps + delta)
    zero = 1e-9
    if math.isinf(R):
        passed, value = r <= zero, math.nan
    elif R <= zero:
        passed, value = math.isinf(r), math.nan
    elif math.isinf(r):
        passed, value = False, math.inf
    else:
        value = R * r
        passed = _within(lo, value, hi, t)
    return CertificateRow("rr", bool(passed), lo, value, hi, f"eps={eps:g} delta={delta:g} R={R:.12g} r={r:.12g}")


def theorem_bound_rhs(pd, face, geometry, side="primal", mu=None):
    """Right-hand side of the error-ratio bound for a side with a unique optimum.

    Primal: ``sqrt(n) / mu_p * (Dist(0, S*) + Diam(S*)) / Dist(0, V_d)``;
    the dual swaps the roles. ``+inf`` when the opposite face is unbounded.
    """
    if not face.side(side).unique:
        raise NotApplicable(f"{side} optimum is not unique")
    if mu is None:
        mu = sharpness_exact(pd, face, side)
    if side == "primal":
        spread = geometry.dist0_dual + geometry.diam_dual
        norm = pd.dist0_vd
    else:
        spread = geometry.dist0_primal + geometry.diam_primal
        norm = pd.dist0_vp
    if math.isinf(spread):
        return math.inf
    return math.sqrt(pd.n) / mu * spread / norm


def sandwich_check(geometry, side="dual", tol=CERT_TOL):
    """``max ||s*|| <= Dist(0, S*) + Diam(S*) <= 3 max ||s*||`` on a bounded face."""
    if side == "dual":
        big, d0, diam = geometry.max_norm_dual, geometry.dist0_dual, geometry.diam_dual
    else:
        big, d0, diam = geometry.max_norm_primal, geometry.dist0_primal, geometry.diam_primal
    if math.isinf(big) or math.isinf(diam):
        raise NotApplicable(f"{side} optimal face is unbounded")
    mid = d0 + diam
    t = tol * (1.0 + big)
    return CertificateRow("sandwich", _within(big, mid, 3.0 * big, t), big, mid, 3.0 * big, side)


@dataclass(frozen=True)
class RrRow:
    eps: float
    delta: float
    r_delta: float
    R_eps: float


@dataclass
class ConditionReport:
    n: int
    f_star: float
    mu_p: float
    mu_d: float
    theta_p_hat: float
    theta_d_hat: float
    b_star: float
    kappa: float
    geometry: FaceGeometry
    thm31_rhs: float | None
    cor32_rhs: float | None
    rr_table: list
    sharpness_exact_flags: dict
    primal_unique: bool
    dual_unique: bool
    dist0_vp: float
    dist0_vd: float
    theta_p_curve: list = field(default_factory=list)
    theta_d_curve: list = field(default_factory=list)
    seed: int = 0

    @property
    def dist0_X_rel(self):
        return self.geometry.dist0_primal / self.dist0_vp

    @property
    def dist0_S_rel(self):
        return self.geometry.dist0_dual / self.dist0_vd

    def to_dict(self):
        doc = {k: v for k, v in asdict(self).items()}
        doc["rr_table"] = [asdict(r) for r in self.rr_table]
        doc["dist0_X_rel"] = self.dist0_X_rel
        doc["dist0_S_rel"] = self.dist0_S_rel
        return _encode(doc)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _encode(obj):
    """Replace non-finite floats with string sentinels so the output is strict JSON."""
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "+inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def decode_float(v):
    if isinstance(v, str):
        return {"+inf": math.inf, "-inf": -math.inf, "nan": math.nan}[v]
    return v


def b_star_center(face):
    """Centre and covering radius used for ``B*``: vertex centroid and farthest vertex."""
    fs = face.primal
    if not fs.bounded:
        return None, math.inf
    x_star = fs.vertices.mean(axis=0)
    if fs.unique:
        return fs.vertices[0], 0.0
    return x_star, float(np.max(np.linalg.norm(fs.vertices - x_star, axis=1)))


def build_condition_report(pd, seed=0, face=None, rr_grid=RR_GRID):
    """Solve the instance exactly and compute every measure on both sides."""
    if face is None:
        face = solve_exact(pd)
    geom = face_geometry(face, pd)
    mus, flags, thetas, curves = {}, {}, {}, {}
    for side in ("primal", "dual"):
        if face.side(side).unique:
            mus[side] = sharpness_exact(pd, face, side)
            flags[side] = "exact"
        else:
            mus[side] = sharpness_sampled(pd, face, side, seed=seed)
            flags[side] = "sampled"
        thetas[side], curves[side] = limiting_error_ratio_estimate(pd, face, side, seed=seed)
    x_star, R = b_star_center(face)
    b_star = math.inf if x_star is None else b_star_bound(pd, x_star, R)
    thm = theorem_bound_rhs(pd, face, geom, "primal", mus["primal"]) if face.primal_unique else None
    cor = theorem_bound_rhs(pd, face, geom, "dual", mus["dual"]) if face.dual_unique else None
    rs = {d: r_delta(pd, face, d) for d in rr_grid}
    Rs = {e: big_r_eps(pd, face, e) for e in rr_grid}
    table = [RrRow(e, d, rs[d], Rs[e]) for e in rr_grid for d in rr_grid]
    return ConditionReport(
        n=pd.n,
        f_star=face.f_star,
        mu_p=mus["primal"],
        mu_d=mus["dual"],
        theta_p_hat=thetas["primal"],
        theta_d_hat=thetas["dual"],
        b_star=b_star,
        kappa=pd.kappa,
        geometry=geom,
        thm31_rhs=thm,
        cor32_rhs=cor,
        rr_table=table,
        sharpness_exact_flags=flags,
        primal_unique=face.primal_unique,
        dual_unique=face.dual_unique,
        dist0_vp=pd.dist0_vp,
        dist0_vd=pd.dist0_vd,
        theta_p_curve=curves["primal"],
        theta_d_curve=curves["dual"],
        seed=seed,
    )
