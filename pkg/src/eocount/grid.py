"""Signature grids: vertices carry signatures, every edge is a binary disequality."""
from __future__ import annotations

import json
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from itertools import product as cartesian

from . import kernels
from .csp import CSPInstance
from .errors import BudgetExceeded
from .exact import ONE, ExactComplex
from .signature import NEQ2, Pairing, Signature, SignatureError, bits_to_int, check_pairing, int_to_bits

BRUTE_FORCE_BUDGET = 2 * 10**7
MAX_KERNEL_ARITY = 64

Endpoint = tuple[int, int]  # (vertex index, 1-based slot)
Edge = tuple[Endpoint, Endpoint]


class GridFormatError(ValueError):
    """Malformed or inconsistent grid text; ``where`` locates the problem."""

    def __init__(self, message: str, where: str) -> None:
        super().__init__(f"{where}: {message}")
        self.where = where


def _norm_edge(e: Iterable[Iterable[int]]) -> Edge:
    a, b = (tuple(int(x) for x in end) for end in e)
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class EOGrid:
    signatures: Mapping[str, Signature]
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __init__(
        self,
        signatures: Mapping[str, Signature],
        vertices: Sequence[str],
        edges: Iterable[Iterable[Iterable[int]]],
    ) -> None:
        object.__setattr__(self, "signatures", dict(signatures))
        object.__setattr__(self, "vertices", tuple(vertices))
        object.__setattr__(self, "edges", tuple(_norm_edge(e) for e in edges))

    def signature_of(self, v: int) -> Signature:
        return self.signatures[self.vertices[v]]

    def arity(self, v: int) -> int:
        return self.signature_of(v).arity

    def used_signatures(self) -> dict[str, Signature]:
        return {n: self.signatures[n] for n in sorted(set(self.vertices))}

    def neighbor(self) -> dict[Endpoint, Endpoint]:
        """Other endpoint of the edge at each ``(vertex, slot)``."""
        out = {}
        for a, b in self.edges:
            out[a] = b
            out[b] = a
        return out

    def validate(self) -> None:
        for k, name in enumerate(self.vertices):
            if name not in self.signatures:
                raise GridFormatError(f"unknown signature name {name!r}", f"vertices[{k}].sig")
        seen: dict[Endpoint, int] = {}
        for k, (a, b) in enumerate(self.edges):
            if a == b:
                raise GridFormatError("edge joins a slot to itself", f"edges[{k}]")
            for end in (a, b):
                v, slot = end
                if not 0 <= v < len(self.vertices):
                    raise GridFormatError(f"vertex {v} does not exist", f"edges[{k}]")
                if not 1 <= slot <= self.arity(v):
                    raise GridFormatError(
                        f"slot coverage: slot {slot} outside 1..{self.arity(v)} of vertex {v}",
                        f"edges[{k}]",
                    )
                if end in seen:
                    raise GridFormatError(
                        f"slot coverage: slot {slot} of vertex {v} used by edges {seen[end]} and {k}",
                        f"edges[{k}]",
                    )
                seen[end] = k
        for v in range(len(self.vertices)):
            missing = [s for s in range(1, self.arity(v) + 1) if (v, s) not in seen]
            if missing:
                raise GridFormatError(
                    f"slot coverage: vertex {v} has {self.arity(v)} slots but slots {missing} have no edge",
                    f"vertices[{v}]",
                )

    def with_signatures(self, new: Mapping[int, Signature], tag: str = "r") -> EOGrid:
        """Copy with per-vertex replacement signatures (fresh names ``<tag><vertex>``)."""
        sigs = dict(self.signatures)
        verts = list(self.vertices)
        for v, f in new.items():
            name = f"{tag}{v}"
            while name in sigs and sigs[name] != f:
                name += "_"
            sigs[name] = f
            verts[v] = name
        keep = set(verts)
        return EOGrid({n: s for n, s in sigs.items() if n in keep}, verts, self.edges)


# -- codec ------------------------------------------------------------------

def signature_to_json(f: Signature) -> dict:
    return {
        "arity": f.arity,
        "rows": [{"bits": int_to_bits(a, f.arity), "value": str(v)} for a, v in sorted(
            f.rows.items(), key=lambda kv: int_to_bits(kv[0], f.arity))],
    }


def signature_from_json(obj: object, where: str) -> Signature:
    if not isinstance(obj, dict):
        raise GridFormatError("signature must be an object", where)
    arity = obj.get("arity")
    if not isinstance(arity, int) or isinstance(arity, bool) or arity < 0:
        raise GridFormatError("arity must be a non-negative integer", f"{where}.arity")
    rows = obj.get("rows")
    if not isinstance(rows, list):
        raise GridFormatError("rows must be a list", f"{where}.rows")
    table: dict[int, ExactComplex] = {}
    for k, row in enumerate(rows):
        here = f"{where}.rows[{k}]"
        if not isinstance(row, dict) or not isinstance(row.get("bits"), str):
            raise GridFormatError("row needs a 'bits' string", here)
        bits = row["bits"]
        if len(bits) != arity or set(bits) - {"0", "1"}:
            raise GridFormatError(f"bits {bits!r} do not form a {arity}-bit string", f"{here}.bits")
        value = row.get("value")
        if not isinstance(value, str):
            raise GridFormatError("value must be a four-rational string", f"{here}.value")
        try:
            number = ExactComplex.parse(value)
        except ValueError as exc:
            raise GridFormatError(f"malformed number: {exc}", f"{here}.value") from None
        alpha = bits_to_int(bits)
        if alpha in table:
            raise GridFormatError(f"duplicate row {bits}", here)
        table[alpha] = number
    return Signature(arity, table)


def grid_to_json(g: EOGrid) -> dict:
    return {
        "signatures": {n: signature_to_json(g.signatures[n]) for n in sorted(g.signatures)},
        "vertices": [{"sig": n} for n in g.vertices],
        "edges": [[list(a), list(b)] for a, b in sorted(g.edges)],
    }


def serialize(g: EOGrid) -> str:
    """Canonical text: sorted names, rows and edges; two-space indent; trailing newline."""
    return json.dumps(grid_to_json(g), indent=2, sort_keys=True) + "\n"


def parse(text: str, validate: bool = True) -> EOGrid:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GridFormatError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(obj, dict):
        raise GridFormatError("top level must be an object", "$")
    sigs_obj = obj.get("signatures", {})
    if not isinstance(sigs_obj, dict):
        raise GridFormatError("signatures must be an object", "signatures")
    sigs = {name: signature_from_json(s, f"signatures.{name}") for name, s in sigs_obj.items()}
    verts_obj = obj.get("vertices", [])
    if not isinstance(verts_obj, list):
        raise GridFormatError("vertices must be a list", "vertices")
    verts = []
    for k, v in enumerate(verts_obj):
        if not isinstance(v, dict) or not isinstance(v.get("sig"), str):
            raise GridFormatError("vertex needs a 'sig' name", f"vertices[{k}]")
        verts.append(v["sig"])
    edges_obj = obj.get("edges", [])
    if not isinstance(edges_obj, list):
        raise GridFormatError("edges must be a list", "edges")
    edges = []
    for k, e in enumerate(edges_obj):
        ok = (
            isinstance(e, list)
            and len(e) == 2
            and all(
                isinstance(end, list)
                and len(end) == 2
                and all(isinstance(x, int) and not isinstance(x, bool) for x in end)
                for end in e
            )
        )
        if not ok:
            raise GridFormatError("edge must be [[vertex, slot], [vertex, slot]]", f"edges[{k}]")
        edges.append(e)
    g = EOGrid(sigs, verts, edges)
    if validate:
        g.validate()
    return g


def load(path: str, validate: bool = True) -> EOGrid:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), validate)


# -- evaluation by enumeration ----------------------------------------------

def _bfs_order(g: EOGrid) -> list[int]:
    nb = g.neighbor()
    adj: dict[int, set[int]] = {v: set() for v in range(len(g.vertices))}
    for (u, _), (v, _) in ((a, b) for a, b in nb.items()):
        adj[u].add(v)
    order, seen = [], set()
    for start in range(len(g.vertices)):
        if start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        while queue:
            v = queue.popleft()
            order.append(v)
            for u in sorted(adj[v]):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
    return order


def support_product(g: EOGrid) -> int:
    total = 1
    for v in range(len(g.vertices)):
        total *= len(g.signature_of(v).rows)
    return total


def brute_force_value(g: EOGrid, budget: int = BRUTE_FORCE_BUDGET) -> ExactComplex:
    """Exact partition function by enumerating one support row per vertex."""
    size = support_product(g)
    if size > budget:
        raise BudgetExceeded(f"brute force needs {size} support combinations, budget is {budget}")
    if not g.vertices:
        return ONE
    if any(g.arity(v) > MAX_KERNEL_ARITY for v in range(len(g.vertices))):
        raise BudgetExceeded(f"brute force handles arities up to {MAX_KERNEL_ARITY}")
    order = _bfs_order(g)
    pos = {v: k for k, v in enumerate(order)}
    vertex_rows = [sorted(g.signature_of(v).rows.items()) for v in order]
    checks: list[list[tuple[int, int, int]]] = [[] for _ in order]
    for (u, a), (v, b) in g.edges:
        pu, pv = pos[u], pos[v]
        if pu < pv:
            checks[pv].append((b - 1, pu, a - 1))
        else:
            checks[pu].append((a - 1, pv, b - 1))
    return kernels.sum_row_combinations(vertex_rows, checks)


def naive_value(g: EOGrid) -> ExactComplex:
    """Sum over all 2^edges orientations; only for tiny grids."""
    nb_edges = list(g.edges)
    total = ExactComplex(0)
    for bits in cartesian((0, 1), repeat=len(nb_edges)):
        assign: dict[Endpoint, int] = {}
        for (a, b), bit in zip(nb_edges, bits):
            assign[a] = bit
            assign[b] = 1 - bit
        term = ONE
        for v in range(len(g.vertices)):
            f = g.signature_of(v)
            alpha = sum(assign[(v, s)] << (s - 1) for s in range(1, f.arity + 1))
            term = term * f.value(alpha)
            if not term:
                break
        total = total + term
    return total


# -- transforms -------------------------------------------------------------

def dual_grid(g: EOGrid) -> EOGrid:
    return EOGrid({n: f.dual() for n, f in g.signatures.items()}, g.vertices, g.edges)


def slot_variables(g: EOGrid) -> dict[Endpoint, int]:
    out = {}
    for v in range(len(g.vertices)):
        for s in range(1, g.arity(v) + 1):
            out[(v, s)] = len(out)
    return out


def flatten_to_csp(g: EOGrid) -> CSPInstance:
    """One variable per slot, a clause per vertex and a disequality clause per edge."""
    var = slot_variables(g)
    clauses = []
    for v in range(len(g.vertices)):
        f = g.signature_of(v)
        clauses.append((f, tuple(var[(v, s)] for s in range(1, f.arity + 1))))
    for a, b in g.edges:
        clauses.append((NEQ2, (var[a], var[b])))
    return CSPInstance(len(var), clauses)


def pi_transform(h: Signature) -> Signature:
    """``pi(h)(x_1, y_1, ..., x_d, y_d) = h(x) * prod [x_i != y_i]``."""
    d = h.arity
    rows = {}
    for alpha, v in h.rows.items():
        beta = 0
        for k in range(d):
            beta |= (1 << (2 * k)) if (alpha >> k) & 1 else (1 << (2 * k + 1))
        rows[beta] = v
    return Signature(2 * d, rows)


def tau_set(f: Signature, pairing: Iterable[Iterable[int]]) -> list[Signature]:
    """Half-arity readings of ``f``: one representative per pair, partner negated."""
    pairs: Pairing = check_pairing(pairing, f.arity)
    if not f.in_eom(pairs):
        raise SignatureError(f"support is not inside EOM{list(pairs)}")
    out: list[Signature] = []
    for choice in cartesian((0, 1), repeat=len(pairs)):
        reps = [p[c] - 1 for p, c in zip(pairs, choice)]
        g = Signature(len(pairs), {
            sum(((alpha >> r) & 1) << k for k, r in enumerate(reps)): v
            for alpha, v in f.rows.items()
        })
        if g not in out:
            out.append(g)
    return out


def csp_as_eo(c: CSPInstance) -> tuple[EOGrid, int]:
    """Grid of ``pi`` images whose value times ``2**unused`` equals the CSP value.

    Each clause becomes one vertex carrying ``pi`` of its signature. The
    occurrences of a variable are joined in a ring, the ``y`` slot of one
    occurrence wired to the ``x`` slot of the next, so all copies agree.
    """
    sigs: dict[str, Signature] = {}
    names: dict[Signature, str] = {}
    verts = []
    occurrences: dict[int, list[tuple[int, int]]] = {}
    for k, (sig, scope) in enumerate(c.clauses):
        p = pi_transform(sig)
        if p not in names:
            names[p] = f"pi{len(names)}"
            sigs[names[p]] = p
        verts.append(names[p])
        for i, var in enumerate(scope):
            occurrences.setdefault(var, []).append((k, i))
    edges = []
    for occ in occurrences.values():
        for j, (k, i) in enumerate(occ):
            k2, i2 = occ[(j + 1) % len(occ)]
            edges.append(((k, 2 * i + 2), (k2, 2 * i2 + 1)))
    return EOGrid(sigs, verts, edges), c.num_vars - len(occurrences)


def two_vertex_grid(f: Signature, name: str = "f") -> EOGrid:
    """Two copies of ``f`` joined slot ``k`` to slot ``k``."""
    return EOGrid({name: f}, [name, name], [((0, k), (1, k)) for k in range(1, f.arity + 1)])


def self_loop_grid(f: Signature, pairs: Sequence[tuple[int, int]], name: str = "f") -> EOGrid:
    return EOGrid({name: f}, [name], [((0, a), (0, b)) for a, b in pairs])
