"""Exact evaluation: forced-value propagation, cycle pinning and backend dispatch."""
from __future__ import annotations

import warnings
from collections.abc import Mapping
from dataclasses import dataclass, field

from .classify import (
    all_one_variables,
    first_eom_pairing,
    is_eom,
    membership_A,
    membership_P,
)
from .csp import affine_csp_value, product_csp_value
from .deciders import set_purity, set_rebalancing, set_typing
from .errors import BudgetExceeded, InvariantViolation, Undecided, WalkCycled
from .exact import ONE, ZERO, ExactComplex
from .grid import BRUTE_FORCE_BUDGET, EOGrid, brute_force_value, dual_grid, flatten_to_csp
from .rebalance import (
    DEFAULT_STATE_BUDGET,
    RebalanceWitness,
    first_level_ok,
    rebalance_witness,
    restriction_mapping,
)
from .signature import Pairing, Signature, SignatureError, canonical_pairing, project

STRATEGIES = ("auto", "brute", "active", "passive")


@dataclass
class ZeroCertificate:
    """The partition function is zero: a forced assignment killed vertex ``vertex``."""

    vertex: int
    reason: str
    steps: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"zero": True, "vertex": self.vertex, "reason": self.reason}


@dataclass
class Reduction:
    """A grid with the same value whose vertex ``v`` has support inside ``EOM[pairings[v]]``."""

    grid: EOGrid
    pairings: dict[int, Pairing]
    steps: list[dict]


class _Work:
    """Private working copy: per-vertex current tables and recorded unequal pairs."""

    def __init__(self, g: EOGrid) -> None:
        self.grid = g
        self.nb = g.neighbor()
        self.cur = [g.signature_of(v) for v in range(len(g.vertices))]
        # pairs[v]: slot -> partner, both directions
        self.pairs: list[dict[int, int]] = [{} for _ in g.vertices]
        self.fixed: list[dict[int, int]] = [{} for _ in g.vertices]

    def restrict(self, v: int, assignment: Mapping[int, int]) -> None:
        self.cur[v] = self.cur[v].restrict_values(assignment)
        self.fixed[v].update(assignment)

    def pair(self, v: int, a: int, b: int) -> None:
        self.pairs[v][a] = b
        self.pairs[v][b] = a

    def residual(self, v: int) -> tuple[Signature, list[int]]:
        """Table on the unpaired slots (pairs pinned) and those slots in order."""
        f = self.cur[v]
        pinned = {s: self.fixed[v][s] for s in self.pairs[v]}
        free = [s for s in range(1, f.arity + 1) if s not in self.pairs[v]]
        return f.fix(pinned), free

    def finish(self, steps: list[dict], tag: str) -> Reduction:
        pairings = {}
        for v, f in enumerate(self.cur):
            pairs = {(a, b) for a, b in self.pairs[v].items() if a < b}
            free = [s for s in range(1, f.arity + 1) if s not in self.pairs[v]]
            if free:
                shadow = Signature(len(free), {project(a, [s - 1 for s in free]): ONE for a in f.rows})
                rest = first_eom_pairing(shadow)
                if rest is None:
                    raise InvariantViolation(f"vertex {v} left without an EOM pairing")
                pairs |= {(free[i - 1], free[j - 1]) for i, j in rest}
            pairing = canonical_pairing(pairs)
            if not f.in_eom(pairing):
                raise InvariantViolation(f"vertex {v} support leaves EOM{list(pairing)}")
            pairings[v] = pairing
        changed = {v: f for v, f in enumerate(self.cur) if f != self.grid.signature_of(v)}
        return Reduction(self.grid.with_signatures(changed, tag), pairings, steps)


# -- forced-value propagation (pure-up sets) --------------------------------------

def active_reduce(g: EOGrid) -> Reduction | ZeroCertificate:
    """Propagate forced values from all-1 variables until every vertex is EOM.

    A chain starts at the first fresh all-1 slot of the first non-EOM vertex.
    Each arrival fixes the entered slot to 0; an EOM vertex then forces its
    partner to 1 (lowest index first), a non-EOM vertex sends out one of its own
    all-1 slots. The chain closes when it pairs with its open starting slot.
    """
    work = _Work(g)
    steps: list[dict] = []
    n = len(g.vertices)
    while True:
        origin = None
        for v in range(n):
            res, _ = work.residual(v)
            if not is_eom(res):
                origin = v
                break
        if origin is None:
            break
        res, free = work.residual(origin)
        ones = [free[k - 1] for k in all_one_variables(res)]
        if not ones:
            raise SignatureError(f"input not pure-up: vertex {origin} is not EOM and has no all-1 variable")
        x1 = ones[0]
        work.restrict(origin, {x1: 1})
        steps.append({"step": "all-one-variable", "vertex": origin, "slot": x1, "indicator": {str(x1): 1}})
        at = (origin, x1)
        while True:
            u, z = work.nb[at]
            if (u, z) == (origin, x1):
                # the chain would force the open slot to 0 while it is forced to 1
                steps.append({"step": "forced-zero", "vertex": u, "slot": z})
                return ZeroCertificate(u, f"slot {z} of vertex {u} forced to both 0 and 1", steps)
            if z in work.fixed[u]:
                raise InvariantViolation(f"propagation re-entered fixed slot {z} of vertex {u}")
            work.restrict(u, {z: 0})
            res, free = work.residual(u)
            if res.is_zero():
                steps.append({"step": "forced-zero", "vertex": u, "slot": z})
                return ZeroCertificate(u, f"forced value 0 at slot {z} empties vertex {u}", steps)
            open_here = u == origin and x1 not in work.pairs[origin]
            if is_eom(res):
                cands = [free[k - 1] for k in all_one_variables(res) if free[k - 1] != z]
                if not cands:
                    raise InvariantViolation(f"EOM vertex {u} has no partner for slot {z}")
                p = cands[0]
                work.pair(u, z, p)
                if open_here and p == x1:
                    steps.append({"step": "forced-propagation", "vertex": u, "pair": [z, p],
                                  "indicator": {str(z): 0}, "closes": True})
                    break
                work.restrict(u, {p: 1})
                steps.append({"step": "forced-propagation", "vertex": u, "pair": [z, p],
                              "indicator": {str(z): 0, str(p): 1}})
                at = (u, p)
                continue
            if open_here:
                work.pair(u, z, x1)
                steps.append({"step": "all-one-pinning", "vertex": u, "pair": [z, x1],
                              "indicator": {str(z): 0}, "closes": True})
                break
            ones = [free[k - 1] for k in all_one_variables(res) if free[k - 1] != z]
            if not ones:
                raise SignatureError(f"input not pure-up: vertex {u} is not EOM and has no all-1 variable")
            y1 = ones[0]
            work.pair(u, z, y1)
            work.restrict(u, {y1: 1})
            steps.append({"step": "all-one-pinning", "vertex": u, "pair": [z, y1],
                          "indicator": {str(z): 0, str(y1): 1}})
            at = (u, y1)
    return work.finish(steps, "a")


# -- cycle pinning (0-rebalancing sets) ---------------------------------------------

class _Witnesses:
    """Root bit-0 witnesses of the current tables, rebuilt when a table changes."""

    def __init__(self, work: _Work, budget: int) -> None:
        self.work = work
        self.budget = budget
        self.cache: dict[int, tuple[Signature, RebalanceWitness]] = {}

    def root(self, v: int) -> RebalanceWitness:
        f = self.work.cur[v]
        hit = self.cache.get(v)
        if hit is not None and hit[0] == f:
            return hit[1]
        w = rebalance_witness(f, 0, self.budget)
        if w is None:
            raise InvariantViolation(f"vertex {v} is not 0-rebalancing")
        self.cache[v] = (f, w)
        return w


def _walk(work: _Work, wit: _Witnesses, s: int, j: int, open_slots: set[int]) -> int:
    """Slot of ``s`` where the walk leaving ``(s, j)`` with value 1 comes back with 0."""
    nodes: dict[int, RebalanceWitness] = {}
    at = (s, j)
    bounced = {j}
    limit = 2 * len(work.nb) + 2
    for _ in range(limit):
        u, z = work.nb[at]
        if u == s:
            if z in open_slots:
                return z
            partner = work.pairs[s].get(z)
            if partner is None or partner in bounced:
                raise WalkCycled(f"walk from slot {j} of vertex {s} revisited slot {z}")
            bounced.add(partner)
            at = (s, partner)
            continue
        w = nodes.get(u) or wit.root(u)
        if z not in w.psi:
            raise WalkCycled(f"walk from slot {j} of vertex {s} re-entered slot {z} of vertex {u}")
        nodes[u] = w.child(z)
        at = (u, w.psi[z])
    raise WalkCycled(f"walk from slot {j} of vertex {s} did not return")


def theta_mapping(
    g: EOGrid, s: int, budget: int = DEFAULT_STATE_BUDGET
) -> dict[int, int]:
    """Outside mapping of vertex ``s``: where each slot's walk comes back."""
    work = _Work(g)
    wit = _Witnesses(work, budget)
    slots = set(range(1, g.arity(s) + 1))
    return {j: _walk(work, wit, s, j, slots) for j in sorted(slots)}


def _cycle_edge(psi: Mapping[int, int], theta: Mapping[int, int], start: int) -> tuple[int, int]:
    """First 0-to-1 edge on the cycle reached from ``start`` in the literal graph.

    Nodes are ``('s', i)`` (slot i at 0) and ``('t', i)`` (slot i at 1); the
    0-to-1 edges follow ``psi``, the 1-to-0 edges follow ``theta``.
    """
    seen: dict[int, int] = {}
    order: list[int] = []
    i = start
    while i not in seen:
        seen[i] = len(order)
        order.append(i)
        i = theta[psi[i]]
    cycle = order[seen[i]:]
    p = cycle[0]
    return p, psi[p]


def passive_reduce(g: EOGrid, budget: int = DEFAULT_STATE_BUDGET) -> Reduction | ZeroCertificate:
    """Pin unequal pairs found on cycles of the literal graph, vertex by vertex."""
    work = _Work(g)
    wit = _Witnesses(work, budget)
    steps: list[dict] = []
    for s in range(len(g.vertices)):
        open_slots = set(range(1, g.arity(s) + 1))
        while open_slots:
            f = work.cur[s]
            if f.is_zero():
                return ZeroCertificate(s, f"vertex {s} table is empty", steps)
            allowed = {
                x: (open_slots - {x}) if x in open_slots else {work.pairs[s][x]}
                for x in range(1, f.arity + 1)
            }
            w = rebalance_witness(f, 0, budget, allowed)
            if w is None:
                raise InvariantViolation(f"vertex {s}: no first-level mapping within its unpaired slots")
            psi = {x: w.psi[x] for x in open_slots}
            theta = {}
            degenerate = None
            for j in sorted(open_slots):
                back = _walk(work, wit, s, j, open_slots)
                if back == j:
                    degenerate = j
                    break
                theta[j] = back
            if degenerate is not None:
                work.restrict(s, {degenerate: 0})
                steps.append({"step": "walk-returns-to-start", "vertex": s, "slot": degenerate,
                              "indicator": {str(degenerate): 0}})
                continue
            p, q = _cycle_edge(psi, theta, min(open_slots))
            new = f.restrict_unequal(p, q)
            for alpha in new.rows:
                if ((alpha >> (p - 1)) ^ (alpha >> (q - 1))) & 1 == 0:
                    raise InvariantViolation(f"pair ({p}, {q}) of vertex {s} not unequal after restriction")
            fast = restriction_mapping(w, p, q)
            if not new.is_zero() and not first_level_ok(new, 0, fast):
                raise InvariantViolation(f"vertex {s}: constructive mapping after pinning ({p}, {q}) is invalid")
            work.cur[s] = new
            work.pair(s, p, q)
            open_slots -= {p, q}
            steps.append({"step": "cycle-pinning", "vertex": s, "pair": [p, q],
                          "indicator": f"[x{p} != x{q}]", "psi": {str(k): v for k, v in sorted(psi.items())},
                          "theta": {str(k): v for k, v in sorted(theta.items())}})
            if new.is_zero():
                return ZeroCertificate(s, f"pinning ({p}, {q}) empties vertex {s}", steps)
    return work.finish(steps, "p")


# -- dispatch ---------------------------------------------------------------------

@dataclass
class EvalResult:
    value: ExactComplex
    strategy: str
    steps: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    pairings: dict[int, Pairing] | None = None

    def to_json(self) -> dict:
        out: dict = {
            "value": str(self.value),
            "strategy": self.strategy,
            "steps": self.steps,
            "warnings": self.warnings,
        }
        if self.pairings is not None:
            out["pairings"] = {str(v): [list(p) for p in pr] for v, pr in sorted(self.pairings.items())}
        return out


def _backend_value(g: EOGrid, kind: str) -> ExactComplex:
    csp = flatten_to_csp(g)
    return affine_csp_value(csp) if kind == "A" else product_csp_value(csp)


def _check_typing(red: Reduction, kind: str) -> None:
    test = membership_A if kind == "A" else membership_P
    for v in range(len(red.grid.vertices)):
        if test(red.grid.signature_of(v)) is None:
            raise InvariantViolation(f"reduced vertex {v} is not in the {kind} family")


def _run_reduction(g: EOGrid, which: str, kind: str, dual: bool, budget: int) -> EvalResult:
    work_grid = dual_grid(g) if dual else g
    steps: list[dict] = []
    if dual:
        steps.append({"step": "dualize", "reason": "bit-flipped grid has the same value"})
    red = active_reduce(work_grid) if which == "active" else passive_reduce(work_grid, budget)
    if isinstance(red, ZeroCertificate):
        steps += red.steps
        steps.append({"step": "zero-certificate", **red.to_json()})
        return EvalResult(ZERO, which, steps)
    steps += red.steps
    _check_typing(red, kind)
    steps.append({"step": "backend", "family": "affine" if kind == "A" else "product"})
    return EvalResult(_backend_value(red.grid, kind), which, steps, pairings=red.pairings)


def _brute(g: EOGrid, budget: int, warn: list[str]) -> EvalResult:
    return EvalResult(brute_force_value(g, budget), "brute",
                      [{"step": "brute-force", "combinations_budget": budget}], warn)


def evaluate(
    g: EOGrid,
    strategy: str = "auto",
    budget: int = BRUTE_FORCE_BUDGET,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> EvalResult:
    """Exact partition function with a provenance trail.

    Raises :class:`Undecided` when the requested strategy does not apply or a
    budget is exhausted.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "brute":
        return _brute(g, budget, [])
    sigs = g.used_signatures()
    if strategy == "auto":
        if sigs and all(membership_A(f) is not None for f in sigs.values()):
            return EvalResult(_backend_value(g, "A"), "affine-backend",
                              [{"step": "backend", "family": "affine"}])
        if sigs and all(membership_P(f) is not None for f in sigs.values()):
            return EvalResult(_backend_value(g, "P"), "product-backend",
                              [{"step": "backend", "family": "product"}])
    eo = all(f.is_eo() for f in sigs.values())
    kind = None
    if eo and sigs:
        try:
            kind, _ = set_typing(sigs)
        except Undecided:
            kind = None
    if strategy in ("auto", "active") and kind is not None:
        try:
            side = set_purity(sigs)
        except Undecided:
            side = None
        if side is not None:
            return _run_reduction(g, "active", kind, side == "down", state_budget)
    if strategy == "active":
        raise Undecided("active pipeline needs a pure, uniformly typed signature set")
    if strategy in ("auto", "passive") and kind is not None:
        bit = set_rebalancing(sigs, state_budget)
        if bit is not None:
            try:
                return _run_reduction(g, "passive", kind, bit == 1, state_budget)
            except WalkCycled as exc:
                msg = f"outside-mapping walk cycled ({exc}); fell back to brute force"
                warnings.warn(msg, RuntimeWarning, stacklevel=2)
                return _brute(g, budget, [msg])
    if strategy == "passive":
        raise Undecided("passive pipeline needs a rebalancing, uniformly typed signature set")
    try:
        return _brute(g, budget, [])
    except BudgetExceeded as exc:
        raise Undecided(f"no polynomial pipeline applies and brute force refused: {exc.reason}") from exc
