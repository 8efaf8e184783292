"""Exact counting of weighted Eulerian orientations over Q(i, sqrt 2)."""
from __future__ import annotations

from .classify import ClassReport, classify, membership_A, membership_P, purity, typed_eom_class
from .deciders import Verdict, decide, decide_arity4, decide_pure, decide_rebalancing
from .errors import BudgetExceeded, InvariantViolation, Undecided, WalkCycled
from .exact import ExactComplex
from .grid import EOGrid, brute_force_value, load, parse, serialize
from .pipelines import EvalResult, ZeroCertificate, active_reduce, evaluate, passive_reduce
from .rebalance import is_rebalancing, rebalance_witness
from .signature import Signature, SignatureError

__all__ = [
    "BudgetExceeded",
    "ClassReport",
    "EOGrid",
    "EvalResult",
    "ExactComplex",
    "InvariantViolation",
    "Signature",
    "SignatureError",
    "Undecided",
    "Verdict",
    "WalkCycled",
    "ZeroCertificate",
    "active_reduce",
    "brute_force_value",
    "classify",
    "decide",
    "decide_arity4",
    "decide_pure",
    "decide_rebalancing",
    "evaluate",
    "is_rebalancing",
    "load",
    "membership_A",
    "membership_P",
    "parse",
    "passive_reduce",
    "purity",
    "rebalance_witness",
    "serialize",
    "typed_eom_class",
]
