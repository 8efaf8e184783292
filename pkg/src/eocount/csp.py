"""Counting CSP instances and their exact evaluators."""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from . import kernels
from .classify import membership_A, membership_P
from .exact import ONE, ZERO, ExactComplex, i_power, omega_power, sqrt2_power
from .signature import Signature, project

ENUMERATION_VAR_CAP = 24


class CSPError(ValueError):
    pass


@dataclass(frozen=True)
class CSPInstance:
    """``num_vars`` Boolean variables (0-based) and clauses ``(signature, scope)``."""

    num_vars: int
    clauses: tuple[tuple[Signature, tuple[int, ...]], ...]

    def __init__(self, num_vars: int, clauses: Iterable[tuple[Signature, Sequence[int]]]) -> None:
        fixed = []
        for sig, scope in clauses:
            scope = tuple(scope)
            if len(scope) != sig.arity:
                raise CSPError(f"clause arity {sig.arity} does not match scope {scope}")
            if any(not 0 <= v < num_vars for v in scope):
                raise CSPError(f"scope {scope} references variables outside 0..{num_vars - 1}")
            fixed.append((sig, scope))
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "clauses", tuple(fixed))

    def weight(self, x: int) -> ExactComplex:
        out = ONE
        for sig, scope in self.clauses:
            out = out * sig.value(project(x, scope))
            if not out:
                break
        return out


def enumerate_value(c: CSPInstance) -> ExactComplex:
    """Direct sum over all ``2**n`` assignments (the oracle)."""
    if c.num_vars > ENUMERATION_VAR_CAP:
        raise CSPError(f"enumeration refused above {ENUMERATION_VAR_CAP} variables")
    return kernels.sum_assignments(
        c.num_vars, [(scope, dict(sig.rows)) for sig, scope in c.clauses]
    )


# -- quadratic phase sums ---------------------------------------------------

def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass
class QuadraticPhaseSystem:
    """``scalar * sum over x with every (mask, rhs) parity constraint of i^phase(x)``.

    ``phase(x) = constant + sum linear[v] x_v + 2 * sum_{(u,v) in quadratic} x_u x_v (mod 4)``.
    """

    num_vars: int
    constraints: list[tuple[int, int]] = field(default_factory=list)
    constant: int = 0
    linear: dict[int, int] = field(default_factory=dict)
    quadratic: set[tuple[int, int]] = field(default_factory=set)
    scalar: ExactComplex = ONE

    def add_linear(self, v: int, c: int) -> None:
        c = (self.linear.get(v, 0) + c) % 4
        if c:
            self.linear[v] = c
        else:
            self.linear.pop(v, None)

    def toggle_quadratic(self, u: int, v: int) -> None:
        """Add ``2 x_u x_v``; a square collapses to ``2 x_u``."""
        if u == v:
            self.add_linear(u, 2)
        else:
            self.quadratic ^= {_pair(u, v)}

    def add_lifted_parity(self, ys: Sequence[int], k: int) -> None:
        """Add ``k * lift(y_1 xor ... xor y_m)`` using ``lift = sum y + 2 sum_{i<j} y_i y_j`` mod 4."""
        k %= 4
        if not k:
            return
        for y in ys:
            self.add_linear(y, k)
        if k % 2:
            for a in range(len(ys)):
                for b in range(a + 1, len(ys)):
                    self.toggle_quadratic(ys[a], ys[b])

    def phase(self, x: int) -> int:
        e = self.constant
        for v, c in self.linear.items():
            e += c * ((x >> v) & 1)
        for u, v in self.quadratic:
            e += 2 * ((x >> u) & (x >> v) & 1)
        return e % 4

    def brute_value(self) -> ExactComplex:
        total = ZERO
        for x in range(1 << self.num_vars):
            if all(bin(x & m).count("1") % 2 == r for m, r in self.constraints):
                total = total + i_power(self.phase(x))
        return self.scalar * total


def _bits(mask: int) -> list[int]:
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


def _substitute(q: QuadraticPhaseSystem, p: int, ys: list[int], rhs: int) -> None:
    """Eliminate ``x_p = rhs xor (xor of ys)`` from the phase."""
    lp = q.linear.pop(p, 0)
    partners = []
    for pair in [pr for pr in q.quadratic if p in pr]:
        q.quadratic.discard(pair)
        partners.append(pair[0] if pair[1] == p else pair[1])
    if lp:
        if lp % 2 == 0:
            q.constant += 2 * rhs
            for y in ys:
                q.add_linear(y, 2)
        else:
            # lift(1 xor Y) = 1 - lift(Y)
            if rhs:
                q.constant += lp
            q.add_lifted_parity(ys, -lp if rhs else lp)
    for k in partners:
        # 2 * x_p * x_k only sees x_p mod 2
        if rhs:
            q.add_linear(k, 2)
        for y in ys:
            q.toggle_quadratic(y, k)
    q.constant %= 4


def gauss_sum(system: QuadraticPhaseSystem) -> ExactComplex:
    q = QuadraticPhaseSystem(
        system.num_vars,
        [],
        system.constant % 4,
        {v: c % 4 for v, c in system.linear.items() if c % 4},
        set(system.quadratic),
        system.scalar,
    )
    free = set(range(q.num_vars))
    half_twos = 0  # accumulated sqrt2 exponent
    omega = 0

    pending = [(m, r & 1) for m, r in system.constraints]
    while pending:
        mask, rhs = pending.pop()
        if not mask:
            if rhs:
                return ZERO
            continue
        p = (mask & -mask).bit_length() - 1
        ys = _bits(mask ^ (1 << p))
        _substitute(q, p, ys, rhs)
        free.discard(p)
        pending = [(m ^ mask, r ^ rhs) if (m >> p) & 1 else (m, r) for m, r in pending]

    while free:
        x = min(free)
        free.discard(x)
        lx = q.linear.pop(x, 0)
        cross = []
        for pair in [pr for pr in q.quadratic if x in pr]:
            q.quadratic.discard(pair)
            cross.append(pair[0] if pair[1] == x else pair[1])
        if lx % 2 == 0:
            half_twos += 2
            if not cross:
                if lx == 2:
                    return ZERO
                continue
            # sum over x of i^(lx x) (-1)^(x A) forces A = lx/2
            p = cross[0]
            _substitute(q, p, cross[1:], lx // 2)
            free.discard(p)
        elif lx == 1:
            half_twos += 1
            omega += 1
            q.add_lifted_parity(cross, 3)
        else:
            half_twos += 1
            omega -= 1
            q.add_lifted_parity(cross, 1)
    return q.scalar * sqrt2_power(half_twos) * omega_power(omega) * i_power(q.constant)


# -- backends ---------------------------------------------------------------

def affine_system(c: CSPInstance) -> QuadraticPhaseSystem | None:
    """Compose clause witnesses into one system; None when a clause is zero."""
    q = QuadraticPhaseSystem(c.num_vars)
    for sig, scope in c.clauses:
        wit = membership_A(sig)
        if wit is None:
            raise CSPError(f"clause over {scope} is not affine")
        if wit.support is None:
            return None
        q.scalar = q.scalar * wit.scalar
        for mask, rhs in wit.support.constraints():
            inst = 0
            for k in _bits(mask):
                inst ^= 1 << scope[k]
            q.constraints.append((inst, rhs))
        for v, coef in wit.linear.items():
            q.add_linear(scope[v - 1], coef)
        for u, v in wit.quadratic:
            q.toggle_quadratic(scope[u - 1], scope[v - 1])
    return q


def affine_csp_value(c: CSPInstance) -> ExactComplex:
    q = affine_system(c)
    return ZERO if q is None else gauss_sum(q)


class _ParityUnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.parity = [0] * n

    def find(self, v: int) -> tuple[int, int]:
        path = []
        while self.parent[v] != v:
            path.append(v)
            v = self.parent[v]
        root = v
        # path compression, recomputing parities from the root down
        acc = 0
        for u in reversed(path):
            acc ^= self.parity[u]
            self.parity[u] = acc
            self.parent[u] = root
        return root, (self.parity[path[0]] if path else 0)

    def union(self, u: int, v: int, diff: int) -> bool:
        ru, pu = self.find(u)
        rv, pv = self.find(v)
        if ru == rv:
            return (pu ^ pv) == diff
        self.parent[rv] = ru
        self.parity[rv] = pu ^ pv ^ diff
        return True


def product_csp_value(c: CSPInstance) -> ExactComplex:
    uf = _ParityUnionFind(c.num_vars)
    scalar = ONE
    unaries: list[tuple[int, ExactComplex, ExactComplex]] = []
    for sig, scope in c.clauses:
        dec = membership_P(sig)
        if dec is None:
            raise CSPError(f"clause over {scope} is not of product type")
        scalar = scalar * dec.scalar
        if not scalar:
            return ZERO
        for fac in dec.factors:
            u = scope[fac.u - 1]
            if fac.kind == "unary":
                unaries.append((u, fac.w0, fac.w1))
            elif not uf.union(u, scope[fac.v - 1], 0 if fac.kind == "equal" else 1):
                return ZERO
    weights: dict[int, list[ExactComplex]] = {}
    for v in range(c.num_vars):
        weights.setdefault(uf.find(v)[0], [ONE, ONE])
    for v, w0, w1 in unaries:
        root, par = uf.find(v)
        w = weights[root]
        w[0] = w[0] * (w1 if par else w0)
        w[1] = w[1] * (w0 if par else w1)
    out = scalar
    for w0, w1 in weights.values():
        out = out * (w0 + w1)
    return out
