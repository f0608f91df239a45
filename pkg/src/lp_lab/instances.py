"""Instance generators and JSON (de)serialization."""

import json
import math

import numpy as np

from .errors import AssumptionViolation, GenerationFailed, InvalidParameter, ParseError
from .model import LpInstance, build_symmetric_pd

SQRT3 = math.sqrt(3.0)
_U = np.array([-1.0, -1.0, 2.0]) / math.sqrt(6.0)
_V = np.array([-1.0, 1.0, 0.0]) / math.sqrt(2.0)
LP_GAMMA_BASIS = (_U, _V)

_RETRIES = 50


def lp_gamma(gamma):
    """The three-variable simplex family whose primal sharpness vanishes like ``sin(gamma)``."""
    gamma = float(gamma)
    if not 0.0 <= gamma < math.pi / 2:
        raise InvalidParameter(f"gamma must lie in [0, pi/2), got {gamma}")
    c = math.cos(gamma) * _U + math.sin(gamma) * _V
    return LpInstance(np.full((1, 3), SQRT3 / 3.0), np.array([1.0]), c)


def default_gamma_grid():
    """``pi/2 * 10**(-k/2)`` for ``k = 1..8`` plus ``gamma = 0``, ascending.

    ``k = 0`` would give ``pi/2`` itself, which lies outside the family.
    """
    return [0.0] + sorted(math.pi / 2 * 10.0 ** (-k / 2) for k in range(1, 9))


def random_instance(seed, m, n, *, degenerate=False, rng=None):
    """Random feasible, bounded standard-form instance.

    ``A`` is Gaussian with full row rank and ``b = A x0`` for a nonnegative
    ``x0``. The objective is ``A^T y + s`` with ``s >= 0``, so the dual is
    feasible and the primal bounded. With ``degenerate=True`` both ``x0`` and
    ``s`` get zero patterns, which produces degenerate vertices and
    non-unique optimal faces.
    """
    if not (1 <= m < n <= 12):
        raise InvalidParameter(f"need 1 <= m < n <= 12, got m={m}, n={n}")
    rng = np.random.default_rng(seed) if rng is None else rng
    for _ in range(_RETRIES):
        A = rng.standard_normal((m, n))
        if np.linalg.matrix_rank(A) < m:
            continue
        if degenerate:
            x0 = rng.uniform(0.5, 1.5, n) * (rng.uniform(size=n) < 0.5)
            if not x0.any():
                x0[rng.integers(n)] = 1.0
            s = rng.uniform(0.1, 1.1, n) * (rng.uniform(size=n) < 0.6)
            s[x0 > 0] *= rng.uniform(size=int((x0 > 0).sum())) < 0.3
        else:
            x0 = rng.uniform(0.5, 1.5, n)
            s = rng.uniform(0.1, 1.1, n)
        y = rng.standard_normal(m)
        inst = LpInstance(A, A @ x0, A.T @ y + s)
        try:
            build_symmetric_pd(inst)
        except AssumptionViolation:
            continue
        return inst
    raise GenerationFailed(f"no valid instance after {_RETRIES} draws (seed={seed}, m={m}, n={n})")


def random_shape(rng, n_max=8):
    n = int(rng.integers(2, n_max + 1))
    m = int(rng.integers(1, n))
    return m, n


def boundary_instance():
    """Feasible set pinned to the face ``x1 = x2 = 0``.

    No strictly positive point exists, so ``r_delta = 0`` for every ``delta``
    and the dual optimal face is unbounded (``R_eps = +inf``).
    """
    A = np.array([[1.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 1.0]])
    b = np.array([0.0, 1.0])
    c = np.array([0.3, -0.1, 1.0, -1.0])
    return LpInstance(A, b, c)


def instance_to_dict(inst):
    return {"A": inst.A.tolist(), "b": inst.b.tolist(), "c": inst.c_raw.tolist()}


def dump_instance(inst):
    """Canonical JSON text; ``dump_instance(parse_instance(t)) == t`` for canonical ``t``."""
    return json.dumps(instance_to_dict(inst), separators=(", ", ": ")) + "\n"


def _real(v, path):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(path, "expected a real number")
    v = float(v)
    if not math.isfinite(v):
        raise ParseError(path, "expected a finite number")
    return v


def _vector(v, path):
    if not isinstance(v, list) or not v:
        raise ParseError(path, "expected a non-empty list")
    return [_real(x, f"{path}[{i}]") for i, x in enumerate(v)]


def parse_instance(text):
    """Parse ``{"A": [[...]], "b": [...], "c": [...]}`` into an :class:`LpInstance`.

    Raises ``ParseError`` naming the offending path, e.g. ``A[1]``.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("$", f"invalid JSON: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ParseError("$", "expected an object")
    for key in ("A", "b", "c"):
        if key not in doc:
            raise ParseError(key, "missing")
    rows = doc["A"]
    if not isinstance(rows, list) or not rows:
        raise ParseError("A", "expected a non-empty list of rows")
    A = [_vector(r, f"A[{i}]") for i, r in enumerate(rows)]
    width = len(A[0])
    for i, r in enumerate(A):
        if len(r) != width:
            raise ParseError(f"A[{i}]", f"row has {len(r)} entries, expected {width}")
    b = _vector(doc["b"], "b")
    if len(b) != len(A):
        raise ParseError("b", f"length {len(b)} does not match {len(A)} rows of A")
    c = _vector(doc["c"], "c")
    if len(c) != width:
        raise ParseError("c", f"length {len(c)} does not match {width} columns of A")
    return LpInstance(np.array(A), np.array(b), np.array(c))


def parse_grid(text):
    """Sweep manifest: ``{"gamma": [...]}`` or a bare list."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("$", f"invalid JSON: {exc.msg}") from exc
    if isinstance(doc, dict):
        if "gamma" not in doc:
            raise ParseError("gamma", "missing")
        doc = doc["gamma"]
        path = "gamma"
    else:
        path = "$"
    if not isinstance(doc, list):
        raise ParseError(path, "expected a list")
    return [_real(g, f"{path}[{i}]") for i, g in enumerate(doc)]
