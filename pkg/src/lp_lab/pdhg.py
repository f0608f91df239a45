"""Restarted PDHG with the standard and sharpness-aware step sizes.

The iteration works on the multiplier form ``min c^T x, A x = b, x >= 0``
with the projected objective ``c``:

    x' = max(x - tau (c - A^T y), 0)
    y' = y + sigma (b - A (2 x' - x))

and the dual slack is ``s = c - A^T y``. Iterates are averaged within each
epoch; an epoch ends, restarting from its average, once the weighted
fixed-point residual of the average has fallen to ``1/e`` of its value at
the epoch start, or once the epoch is four times as long as the previous one.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import InvalidParameter, MissingParameter, NotApplicable

BETA = 1.0 / math.e
GROWTH = 4
CHUNK = 512


@dataclass(frozen=True)
class StepSizes:
    tau: float
    sigma: float
    policy: str
    mu_p: float | None = None
    mu_d: float | None = None


def step_sizes(pd, policy="standard", mu_p=None, mu_d=None):
    """Primal and dual step sizes; both policies give ``tau sigma lambda_max^2 = 1/4``."""
    nq, nc = pd.dist0_vp, pd.dist0_vd
    kappa, lmax, lmin = pd.kappa, pd.lambda_max, pd.lambda_min
    if policy == "standard":
        return StepSizes(nq / (2.0 * kappa * nc), nc / (2.0 * nq * lmax * lmin), policy)
    if policy == "optimized":
        if mu_p is None or mu_d is None:
            raise MissingParameter("optimized step sizes need both mu_p and mu_d")
        if not (mu_p > 0 and mu_d > 0):
            raise InvalidParameter("sharpness values must be positive")
        tau = mu_d * nq / (2.0 * kappa * mu_p * nc)
        sigma = mu_p * nc / (2.0 * mu_d * nq * lmax * lmin)
        return StepSizes(tau, sigma, policy, float(mu_p), float(mu_d))
    raise InvalidParameter(f"unknown step-size policy {policy!r}")


def pdhg_iterate(pd, z, steps):
    """One PDHG step from ``z = (x, y)``; returns ``(x', y')``."""
    A = pd.instance.A
    x, y = (np.asarray(v, dtype=float) for v in z)
    xn = np.maximum(x - steps.tau * (pd.c - A.T @ y), 0.0)
    yn = y + steps.sigma * (pd.instance.b - A @ (2.0 * xn - x))
    return xn, yn


def distance_to_optima_error(x, s, face):
    """``max(Dist(x, X*), Dist(s, S*))``."""
    return max(face.primal.distance(x), face.dual.distance(s))


def kkt_error(pd, x, y):
    """Relative primal infeasibility, dual infeasibility and gap, whichever is largest."""
    A, b, c = pd.instance.A, pd.instance.b, pd.c
    s = c - A.T @ y
    pobj, dobj = c @ x, b @ y
    return max(
        np.linalg.norm(A @ x - b) / (1.0 + np.linalg.norm(b)),
        np.linalg.norm(np.minimum(s, 0.0)) / (1.0 + np.linalg.norm(c)),
        abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj)),
    )


@dataclass
class SolveLog:
    x: np.ndarray
    y: np.ndarray
    s: np.ndarray
    total_iterations: int
    terminated_by: str
    restart_indices: list
    e_d_trace: list = field(default_factory=list)
    gap_trace: list = field(default_factory=list)
    iterates: list | None = None
    final_error: float = math.nan
    steps: StepSizes | None = None
    backend: str = ""

    def to_dict(self):
        return {
            "x": self.x.tolist(),
            "y": self.y.tolist(),
            "s": self.s.tolist(),
            "total_iterations": self.total_iterations,
            "terminated_by": self.terminated_by,
            "restart_indices": list(self.restart_indices),
            "final_error": self.final_error,
            "policy": self.steps.policy if self.steps else None,
            "tau": self.steps.tau if self.steps else None,
            "sigma": self.steps.sigma if self.steps else None,
            "e_d_trace": list(self.e_d_trace),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def trace_csv(self):
        """``iteration,E_d,gap,restart`` rows with 12 significant digits."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "E_d", "gap", "restart"])
        restarts = set(self.restart_indices)
        for k, gap in enumerate(self.gap_trace):
            ed = self.e_d_trace[k] if k < len(self.e_d_trace) else math.nan
            w.writerow([k, f"{ed:.12g}", f"{gap:.12g}", int(k in restarts)])
        return buf.getvalue()


class _FaceDistance:
    """Distances of many iterates to one optimal face, skipping projections a cheap bound rules out."""

    def __init__(self, fs):
        self.fs = fs
        self.unique = fs.unique
        if self.unique:
            self.point = fs.vertices[0]

    def lower(self, Z):
        if self.unique:
            return np.linalg.norm(Z - self.point, axis=1)
        return np.linalg.norm(Z[:, self.fs.zero_set], axis=1)

    def exact(self, z):
        return self.fs.distance(z)


def _chunk_errors(pd, face_d, X, Y, eps, full):
    """Per-row ``E_d``; rows whose lower bound exceeds ``eps`` keep the bound unless ``full``."""
    S = pd.c - Y @ pd.instance.A
    px, ps = face_d
    ex, es = px.lower(X), ps.lower(S)
    err = np.maximum(ex, es)
    if px.unique and ps.unique:
        return err
    for i in range(len(X)):
        if full or err[i] <= eps:
            dx = ex[i] if px.unique else px.exact(X[i])
            ds = es[i] if ps.unique else ps.exact(S[i])
            err[i] = max(dx, ds)
    return err


def restarted_solve(pd, steps, eps, face=None, max_iter=100_000, trace=False, store_iterates=False,
                    chunk=CHUNK, kernels=None):
    """Run restarted PDHG from the origin until ``E_d <= eps`` (or the KKT error without a face).

    Termination is tested on both the current and the epoch-averaged iterate
    after every step; the first one to qualify is returned.

    Parameters
    ----------
    face : OptimalFace, optional
        Exact optimal faces. Without one the relative KKT error is used.
    trace : bool
        Record ``E_d`` (exact, one projection per step) and the duality gap
        of the current iterate at every step.
    kernels : module, optional
        Override the kernel backend.
    """
    if not eps > 0:
        raise InvalidParameter("eps must be positive")
    kern = _backend.kernels if kernels is None else kernels
    A = np.ascontiguousarray(pd.instance.A, dtype=float)
    b = np.ascontiguousarray(pd.instance.b, dtype=float)
    c = np.ascontiguousarray(pd.c, dtype=float)
    m, n = A.shape
    x, y = np.zeros(n), np.zeros(m)
    face_d = (_FaceDistance(face.primal), _FaceDistance(face.dual)) if face is not None else None

    def errors(X, Y, full=False):
        if face_d is not None:
            return _chunk_errors(pd, face_d, X, Y, eps, full)
        return np.array([kkt_error(pd, xx, yy) for xx, yy in zip(X, Y)])

    log = SolveLog(x, y, c.copy(), 0, "max_iter", [], steps=steps, backend=getattr(kern, "__name__", ""))
    if store_iterates:
        log.iterates = [(x.copy(), y.copy(), c.copy())]
    e0 = errors(x[None], y[None], full=True)[0]
    if trace:
        log.e_d_trace.append(float(e0) if face_d is not None else math.nan)
        log.gap_trace.append(0.0)
    if e0 <= eps:
        log.terminated_by = "eps"
        log.final_error = float(e0)
        return log

    sx, sy = np.zeros(n), np.zeros(m)
    istate = np.zeros(3, dtype=np.int64)
    fstate = np.array([kern.fixed_point_residual(A, b, c, steps.tau, steps.sigma, x, y)])
    done = 0
    while done < max_iter:
        k = min(chunk, max_iter - done)
        cur_x, cur_y = np.empty((k, n)), np.empty((k, m))
        avg_x, avg_y = np.empty((k, n)), np.empty((k, m))
        restarted = np.zeros(k, dtype=np.int8)
        kern.pdhg_advance(A, b, c, steps.tau, steps.sigma, BETA, GROWTH, x, y, sx, sy,
                          istate, fstate, k, cur_x, cur_y, avg_x, avg_y, restarted)
        e_cur = errors(cur_x, cur_y, full=trace)
        e_avg = errors(avg_x, avg_y)
        hit = np.flatnonzero((e_cur <= eps) | (e_avg <= eps))
        stop = int(hit[0]) + 1 if len(hit) else k
        for j in np.flatnonzero(restarted[:stop]):
            log.restart_indices.append(done + int(j) + 1)
        if trace:
            log.e_d_trace += [float(v) if face_d is not None else math.nan for v in e_cur[:stop]]
            log.gap_trace += [float(c @ xx - b @ yy) for xx, yy in zip(cur_x[:stop], cur_y[:stop])]
        if store_iterates:
            log.iterates += [(xx.copy(), yy.copy(), c - A.T @ yy) for xx, yy in zip(cur_x[:stop], cur_y[:stop])]
        if len(hit):
            j = int(hit[0])
            use_cur = e_cur[j] <= eps
            xf, yf = (cur_x[j], cur_y[j]) if use_cur else (avg_x[j], avg_y[j])
            log.x, log.y = xf.copy(), yf.copy()
            log.s = c - A.T @ yf
            log.total_iterations = done + j + 1
            log.terminated_by = "eps"
            log.final_error = float(e_cur[j] if use_cur else e_avg[j])
            return log
        done += k
    log.x, log.y = cur_x[-1].copy(), cur_y[-1].copy()
    log.s = c - A.T @ log.y
    log.total_iterations = done
    log.final_error = float(errors(log.x[None], log.y[None], full=True)[0])
    return log


VARIANTS = ("easy", "smart", "easy_replaced", "smart_replaced")


@dataclass(frozen=True)
class CurlyL:
    value: float
    variant: str
    finite: bool = True


def curly_l_from_values(variant, *, kappa, mu_p, mu_d, theta_p=None, theta_d=None,
                        rel_x=None, rel_c=None, rel_s=None, n=None):
    """Evaluate one of the iteration-bound scalars from its ingredients.

    ``rel_x = Dist(0, X*)/Dist(0, V_p)``, ``rel_c = Dist(c, S*)/Dist(0, V_d)``
    and ``rel_s = Dist(0, S*)/Dist(0, V_d)``.
    """
    if variant == "easy":
        val = 8.5 * kappa * (1 / mu_p + 1 / mu_d) * (theta_p + theta_d + rel_x + rel_c)
    elif variant == "smart":
        val = 16 * kappa * (theta_p / mu_p + theta_d / mu_d + rel_c / mu_p + rel_x / mu_d)
    elif variant == "easy_replaced":
        val = 8.5 * kappa * (math.sqrt(n) + 1) * (1 / mu_p + 1 / mu_d) * (rel_s / mu_p + rel_x / mu_d)
    elif variant == "smart_replaced":
        val = 16 * kappa * (math.sqrt(n) + 1) * (rel_s / mu_p**2 + rel_x / mu_d**2)
    else:
        raise InvalidParameter(f"unknown variant {variant!r}")
    val = float(val)
    return CurlyL(val, variant, math.isfinite(val))


def curly_l(report, pd, variant="easy"):
    """The scalar ``L`` for ``variant`` from a condition report.

    The limiting error ratios enter through their sampled estimates. The
    ``*_replaced`` variants need unique optima on both sides.
    """
    if variant.endswith("_replaced") and not (report.primal_unique and report.dual_unique):
        raise NotApplicable("replaced variants need unique primal and dual optima")
    g = report.geometry
    return curly_l_from_values(
        variant,
        kappa=report.kappa,
        mu_p=report.mu_p,
        mu_d=report.mu_d,
        theta_p=report.theta_p_hat,
        theta_d=report.theta_d_hat,
        rel_x=g.dist0_primal / pd.dist0_vp,
        rel_c=g.dist_c_dual / pd.dist0_vd,
        rel_s=g.dist0_dual / pd.dist0_vd,
        n=pd.n,
    )


def bound_from_values(L, e_d0, eps, kappa, norm_c, norm_q, mu_p=1.0, mu_d=1.0):
    """``9e L ln(16e L (E_d0/eps)(1 + kappa a)(1 + 1/a)) + 1`` with ``a = mu_p ||c|| / (mu_d ||q||)``."""
    if not eps > 0:
        raise InvalidParameter("eps must be positive")
    if not math.isfinite(L):
        return math.inf
    a = mu_p * norm_c / (mu_d * norm_q)
    return 9 * math.e * L * math.log(16 * math.e * L * (e_d0 / eps) * (1 + kappa * a) * (1 + 1 / a)) + 1


def iteration_bound_t(pd, L, e_d0, eps, steps_policy="standard", mu_p=None, mu_d=None):
    """Worst-case iteration count for reaching ``E_d <= eps`` under ``steps_policy``."""
    value = L.value if isinstance(L, CurlyL) else float(L)
    if steps_policy == "standard":
        mu_p = mu_d = 1.0
    elif steps_policy == "optimized":
        if mu_p is None or mu_d is None:
            raise MissingParameter("optimized bound needs mu_p and mu_d")
    else:
        raise InvalidParameter(f"unknown step-size policy {steps_policy!r}")
    return bound_from_values(value, e_d0, eps, pd.kappa, pd.dist0_vd, pd.dist0_vp, mu_p, mu_d)
