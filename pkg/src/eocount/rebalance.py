"""Exact recognition of 0-/1-rebalancing signatures with lazily expanded witnesses.

The search works on the support only. A state is the set of still-alive
support rows plus, for every unpinned variable, its "hot" column: the alive
rows on which the variable equals the rebalancing bit. Variables with equal
hot columns are interchangeable, so the memo key is the alive mask together
with the sorted multiset of hot columns.

Pinning ``x = bit, y = 1 - bit`` for an admissible pair (no alive row with both
hot) keeps exactly the alive rows where ``x`` is hot.
"""
from __future__ import annotations

from collections.abc import Collection, Mapping

from .errors import BudgetExceeded, InvariantViolation
from .signature import Signature, SignatureError, columns

DEFAULT_STATE_BUDGET = 10**6

State = tuple[int, tuple[int, ...]]


class RebalanceSearch:
    """Memoized exists/for-all search shared by a witness and all of its children."""

    def __init__(self, f: Signature, bit: int, budget: int = DEFAULT_STATE_BUDGET) -> None:
        if bit not in (0, 1):
            raise ValueError("bit must be 0 or 1")
        if not f.is_eo():
            raise SignatureError("rebalancing is defined for EO signatures")
        self.f = f
        self.bit = bit
        self.budget = budget
        self.rows = f.support()
        self.full = (1 << len(self.rows)) - 1
        cols = columns(f, self.rows)
        self.hot = [c if bit else self.full & ~c for c in cols]
        self.memo: dict[State, bool] = {}

    @property
    def states(self) -> int:
        return len(self.memo)

    def root(self) -> tuple[int, dict[int, int]]:
        """Alive mask and ``{1-based variable: hot column}`` of the unpinned signature."""
        return self.full, {k + 1: h for k, h in enumerate(self.hot)}

    def succeeds(self, alive: int, hots: tuple[int, ...]) -> bool:
        if not alive or not hots:
            return True
        key = (alive, hots)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if len(self.memo) >= self.budget:
            raise BudgetExceeded(f"rebalancing search exceeded {self.budget} states")
        # provisional entry guards the budget count against deep recursion
        self.memo[key] = False
        kinds = sorted(set(hots))
        ok = all(self._has_partner(alive, hots, tx, kinds) for tx in kinds)
        self.memo[key] = ok
        return ok

    def _has_partner(self, alive: int, hots: tuple[int, ...], tx: int, kinds: list[int]) -> bool:
        for ty in kinds:
            if tx & ty:
                continue
            if ty == tx and hots.count(tx) < 2:
                continue
            if self.succeeds(*self.child_state(alive, hots, tx, ty)):
                return True
        return False

    @staticmethod
    def child_state(alive: int, hots: tuple[int, ...], tx: int, ty: int) -> State:
        rest = list(hots)
        rest.remove(tx)
        rest.remove(ty)
        nxt = alive & tx
        return nxt, tuple(sorted(h & nxt for h in rest))


class RebalanceWitness:
    """First-level mapping ``psi`` of a (pinned) signature with lazy children.

    Variables keep the labels of the top-level signature, so ``child(x)``
    certifies the signature with ``x`` and ``psi[x]`` pinned, and its mapping
    is expressed in the same 1-based labels.
    """

    def __init__(
        self,
        search: RebalanceSearch,
        alive: int,
        hots: Mapping[int, int],
        allowed: Mapping[int, Collection[int]] | None = None,
    ) -> None:
        self.search = search
        self.bit = search.bit
        self.alive = alive
        self.hots = {v: h & alive for v, h in hots.items()}
        self.psi = self._choose(allowed)
        self._children: dict[int, RebalanceWitness] = {}

    @property
    def variables(self) -> list[int]:
        return sorted(self.hots)

    def _key(self, hots: Mapping[int, int], alive: int) -> State:
        return alive, tuple(sorted(h & alive for h in hots.values()))

    def _choose(self, allowed: Mapping[int, Collection[int]] | None) -> dict[int, int]:
        psi: dict[int, int] = {}
        if not self.alive:
            # zero signature: every pair is admissible
            vs = self.variables
            for k, x in enumerate(vs):
                options = [y for y in vs if y != x and (allowed is None or y in allowed[x])]
                if not options:
                    raise InvariantViolation(f"no admissible partner for variable {x}")
                psi[x] = options[0]
            return psi
        for x in self.variables:
            y = self.partner(x, None if allowed is None else allowed[x])
            if y is None:
                raise InvariantViolation(f"no admissible partner for variable {x}")
            psi[x] = y
        return psi

    def partner(self, x: int, options: Collection[int] | None = None) -> int | None:
        """Smallest variable ``y`` completing a valid first-level step at ``x``."""
        hx = self.hots[x]
        for y in self.variables:
            if y == x or (options is not None and y not in options):
                continue
            if self.alive and hx & self.hots[y]:
                continue
            if self.search.succeeds(*self.pinned_key(x, y)):
                return y
        return None

    def pinned_key(self, x: int, y: int) -> State:
        nxt = self.alive & self.hots[x]
        rest = {v: h for v, h in self.hots.items() if v not in (x, y)}
        return self._key(rest, nxt)

    def child(self, x: int, y: int | None = None) -> RebalanceWitness:
        """Witness for the signature pinned at ``x`` and ``y`` (default ``psi[x]``)."""
        y = self.psi[x] if y is None else y
        key = (x, y)
        if key not in self._children:
            if self.alive and self.hots[x] & self.hots[y]:
                raise InvariantViolation(f"({x}, {y}) is not an admissible pair")
            nxt = self.alive & self.hots[x]
            rest = {v: h for v, h in self.hots.items() if v not in (x, y)}
            self._children[key] = RebalanceWitness(self.search, nxt, rest)
        return self._children[key]

    def to_json(self, depth: int = 1) -> dict:
        out: dict = {"bit": self.bit, "psi": {str(x): y for x, y in sorted(self.psi.items())}}
        if depth > 1:
            out["children"] = {str(x): self.child(x).to_json(depth - 1) for x in self.variables}
        return out


def rebalance_witness(
    f: Signature,
    bit: int,
    budget: int = DEFAULT_STATE_BUDGET,
    allowed: Mapping[int, Collection[int]] | None = None,
) -> RebalanceWitness | None:
    """Witness that ``f`` is ``bit``-rebalancing, or None when it is not.

    ``allowed`` optionally restricts the first-level partner of each variable;
    the answer is then None when no mapping within those limits exists.
    Raises :class:`BudgetExceeded` when the memo grows beyond ``budget`` states.
    """
    search = RebalanceSearch(f, bit, budget)
    alive, hots = search.root()
    if allowed is None:
        if not search.succeeds(alive, tuple(sorted(hots.values()))):
            return None
        return RebalanceWitness(search, alive, hots)
    try:
        return RebalanceWitness(search, alive, hots, allowed)
    except InvariantViolation:
        return None


def is_rebalancing(f: Signature, bit: int, budget: int = DEFAULT_STATE_BUDGET) -> bool:
    return rebalance_witness(f, bit, budget) is not None


def first_level_ok(f: Signature, bit: int, psi: Mapping[int, int]) -> bool:
    """The first-level condition: ``psi(x) != x`` and no support row has both equal to ``bit``."""
    if sorted(psi) != list(range(1, f.arity + 1)):
        return False
    for x, y in psi.items():
        if x == y or not 1 <= y <= f.arity:
            return False
        mx, my = 1 << (x - 1), 1 << (y - 1)
        for alpha in f.rows:
            if bool(alpha & mx) == bit and bool(alpha & my) == bit:
                return False
    return True


def jumper_mapping(w: RebalanceWitness, s: int, t: int) -> dict[int, int]:
    """Mapping for ``f`` with ``s`` and ``t`` joined by a disequality, built from ``w``.

    Uses ``psi(x)`` when it avoids the loop, else the second-level mapping at
    the looped partner. Labels stay those of ``f``.
    """
    out = {}
    for x in w.variables:
        if x in (s, t):
            continue
        y = w.psi[x]
        if y == s:
            y = w.child(x).psi[t]
        elif y == t:
            y = w.child(x).psi[s]
        out[x] = y
    return out


def restriction_mapping(w: RebalanceWitness, p: int, q: int) -> dict[int, int]:
    """Mapping for ``f`` restricted to ``p != q``, built from a witness ``w`` of ``f``."""
    out = jumper_mapping(w, p, q)
    out[p] = q
    out[q] = p
    return out


def relabel(mapping: Mapping[int, int], kept: list[int]) -> dict[int, int]:
    """Rewrite a mapping over ``kept`` labels onto ``1..len(kept)``."""
    pos = {v: k + 1 for k, v in enumerate(kept)}
    return {pos[x]: pos[y] for x, y in mapping.items()}
