"""Condition measures, exact oracles and restarted PDHG for small linear programs."""

from ._backend import NAME as BACKEND
from .errors import (
    AssumptionViolation,
    InstanceTooLarge,
    InvalidParameter,
    LpLabError,
    NotApplicable,
    NotOnAffine,
    NotUnique,
    ParseError,
)
from .instances import boundary_instance, lp_gamma, parse_instance, random_instance
from .measures import ConditionReport, build_condition_report
from .model import LpInstance, SymmetricPd, build_symmetric_pd
from .oracle import OptimalFace, solve_exact
from .pdhg import SolveLog, StepSizes, curly_l, iteration_bound_t, restarted_solve, step_sizes

__version__ = "0.1.0"
