"""Named signatures and grids, plus seeded generators for every tested family.

Every generator returns a :class:`Generated` carrying the object and the
certificate it was built from, so callers can check membership independently.
"""
from __future__ import annotations

import random
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .classify import typed_eom_class
from .exact import ONE, ExactComplex, i_power
from .grid import EOGrid, two_vertex_grid
from .rebalance import rebalance_witness
from .signature import (
    DELTA0,
    DELTA1,
    Signature,
    SignatureError,
    neq,
    neq_weighted,
    popcount,
    sixv,
    tensor_all,
)

# -- support matrices --------------------------------------------------------

H0 = ("0", "0", "0", "0", "0")
H2 = ("1111000000", "1000111000", "0100100110", "0010010101", "0001001011")
H4 = ("01111", "10111", "11011", "11101", "11110")
BLOCKS = {"H0": H0, "H2": H2, "H4": H4}


def support_matrix(blocks: Sequence[tuple[str, int]]) -> list[str]:
    """Rows of the 5-row matrix concatenating ``count`` copies of each named block."""
    return ["".join(BLOCKS[name][r] * count for name, count in blocks) for r in range(5)]


F40_BLOCKS = (("H2", 3), ("H4", 2))
F56_BLOCKS = (("H0", 1), ("H2", 4), ("H4", 3))


def from_support_matrix(rows: Sequence[str], value=1) -> Signature:
    return Signature.from_strings({r: value for r in rows})


def f40() -> Signature:
    return from_support_matrix(support_matrix(F40_BLOCKS))


def f56() -> Signature:
    return from_support_matrix(support_matrix(F56_BLOCKS))


def mixed_affine4(a=1, b=1) -> Signature:
    """Quaternary signature 0101 -> 1, 0110 -> a, 1001 -> b, 1010 -> -ab."""
    a = ExactComplex.coerce(a)
    b = ExactComplex.coerce(b)
    return Signature.from_strings({"0101": 1, "0110": a, "1001": b, "1010": -(a * b)})


def delta_pair() -> Signature:
    """``Delta1 (x) Delta0``: the binary signature supported on 10."""
    return DELTA1.tensor(DELTA0)


# -- builtin table -----------------------------------------------------------

def _num(p: str | int | Fraction | ExactComplex) -> ExactComplex:
    if isinstance(p, ExactComplex):
        return p
    if isinstance(p, (int, Fraction)):
        return ExactComplex(p)
    text = str(p).strip()
    if text in ("i", "+i"):
        return ExactComplex(0, 0, 1)
    if text == "-i":
        return ExactComplex(0, 0, -1)
    if " " in text:
        return ExactComplex.parse(text)
    return ExactComplex(Fraction(text))


def _int(p) -> int:
    return int(str(p))


@dataclass(frozen=True)
class Builtin:
    build: Callable[..., Signature | EOGrid]
    params: str
    doc: str
    expected: dict = field(default_factory=dict)


BUILTINS: dict[str, Builtin] = {
    "f40": Builtin(lambda: f40(), "", "arity 40, support [H2 x3 | H4 x2], 0-1 weighted",
                   {"is_eo": True, "purity": "neither", "rebalancing_0": True, "is_eom": False}),
    "f56": Builtin(lambda: f56(), "", "arity 56, support [H0 | H2 x4 | H4 x3], 0-1 weighted",
                   {"is_eo": True, "rebalancing_0": False, "rebalancing_1": False, "is_eom": False}),
    "neq": Builtin(lambda r=2: neq(_int(r)), "arity", "disequality of even arity",
                   {"is_eo": True, "is_eom": True, "in_A": True, "in_P": True,
                    "rebalancing_0": True, "rebalancing_1": True}),
    "neq_weighted": Builtin(lambda r, a, b: neq_weighted(_int(r), _num(a), _num(b)), "arity a b",
                            "generalized disequality, a on 1..10..0 and b on its complement",
                            {"is_eo": True, "is_eom": True, "in_P": True}),
    "sixv": Builtin(lambda a=1, b=1, c=1: sixv(_num(a), _num(b), _num(c)), "a b c",
                    "quaternary on 1100, 1010, 1001",
                    {"is_eo": True, "purity": "pure_up", "is_eom": False, "rebalancing_0": True}),
    "sixv_dual": Builtin(lambda a=1, b=1, c=1: sixv(_num(a), _num(b), _num(c)).dual(), "a b c",
                         "quaternary on 0011, 0101, 0110",
                         {"is_eo": True, "purity": "pure_down", "is_eom": False, "rebalancing_1": True}),
    "delta_pair": Builtin(delta_pair, "", "Delta1 tensor Delta0",
                          {"is_eo": True, "is_eom": True, "in_A": True, "in_P": True}),
    "mixed_affine4": Builtin(lambda a=1, b=1: mixed_affine4(_num(a), _num(b)), "a b",
                             "affine but not product type for a = b = 1",
                             {"is_eo": True, "in_A": True, "in_P": False, "is_eom": True}),
}

GRID_BUILTINS = {"two_vertex_grid", "self_loop_grid"}


def gen_builtin(name: str, params: Sequence = ()) -> Signature | EOGrid:
    """Build a named signature, or ``two_vertex_grid <name> [params]`` for a grid."""
    if name == "two_vertex_grid":
        if not params:
            raise SignatureError("two_vertex_grid needs a signature name")
        inner = gen_builtin(params[0], params[1:])
        return two_vertex_grid(inner, params[0])
    if name == "self_loop_grid":
        if not params:
            raise SignatureError("self_loop_grid needs a signature name")
        inner = gen_builtin(params[0], params[1:])
        r = inner.arity
        return EOGrid({params[0]: inner}, [params[0]],
                      [((0, k), (0, k + r // 2)) for k in range(1, r // 2 + 1)])
    entry = BUILTINS.get(name)
    if entry is None:
        raise SignatureError(f"unknown builtin {name!r}")
    try:
        return entry.build(*params)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SignatureError(f"bad parameters for {name!r} ({entry.params}): {exc}") from None


# -- random families -----------------------------------------------------------

UNITS = (ExactComplex(1), ExactComplex(0, 0, 1), ExactComplex(-1), ExactComplex(0, 0, -1))
GENERAL = (
    ExactComplex(1), ExactComplex(2), ExactComplex(3), ExactComplex(-1), ExactComplex(-2),
    ExactComplex(Fraction(1, 2)), ExactComplex(0, 0, 1), ExactComplex(1, 0, 1),
    ExactComplex(0, 1), ExactComplex(2, 0, -1),
)


@dataclass
class Generated:
    obj: Signature | EOGrid
    family: str
    certificate: dict


def _value(rng: random.Random, pool: Sequence[ExactComplex]) -> ExactComplex:
    return rng.choice(pool)


def random_affine_member(rng: random.Random, arity: int) -> Generated:
    """``lam * chi[Ax = b] * i^(sum_j L_j(x))`` with random affine forms ``L_j``."""
    while True:
        x0 = rng.randrange(1 << arity)
        ncons = rng.randint(0, max(0, arity - 1))
        cons = []
        for _ in range(ncons):
            m = rng.randrange(1 << arity)
            cons.append((m, popcount(m & x0) & 1))
        forms = [(rng.randrange(1 << arity), rng.randint(0, 1)) for _ in range(rng.randint(0, 4))]
        lam = _value(rng, GENERAL)
        rows = {}
        for x in range(1 << arity):
            if all(popcount(x & m) & 1 == r for m, r in cons):
                e = sum((popcount(x & m) & 1) ^ c for m, c in forms)
                rows[x] = lam * i_power(e)
        if len(rows) >= 2:
            return Generated(Signature(arity, rows), "A-member",
                             {"scalar": str(lam), "constraints": cons, "forms": forms})


def random_product_member(rng: random.Random, arity: int) -> Generated:
    """Product of unary, equality and disequality factors with two weighted blocks."""
    if arity < 2:
        raise SignatureError("product members need arity >= 2")
    while True:
        perm = list(range(arity))
        rng.shuffle(perm)
        cut = sorted(rng.sample(range(1, arity), rng.randint(1, arity - 1)))
        blocks = [perm[a:b] for a, b in zip([0] + cut, cut + [arity])]
        weights = []
        for _ in blocks:
            if rng.random() < 0.25:
                w = [ExactComplex(0), _value(rng, GENERAL)]
                rng.shuffle(w)
            else:
                w = [_value(rng, GENERAL), _value(rng, GENERAL)]
            weights.append(w)
        if sum(1 for w in weights if w[0] and w[1]) >= 2:
            break
    links = [[rng.randint(0, 1) for _ in blk[1:]] for blk in blocks]
    rows = {}
    for x in range(1 << arity):
        val = ONE
        for blk, w, lk in zip(blocks, weights, links):
            root = (x >> blk[0]) & 1
            if any(((x >> v) & 1) != root ^ flip for v, flip in zip(blk[1:], lk)):
                val = None
                break
            val = val * w[root]
        if val:
            rows[x] = val
    cert = {"blocks": [[v + 1 for v in b] for b in blocks],
            "unequal": [[v + 1 for v, f in zip(b[1:], lk) if f] for b, lk in zip(blocks, links)],
            "weights": [[str(a), str(b)] for a, b in weights]}
    return Generated(Signature(arity, rows), "P-member", cert)


def random_pairing(rng: random.Random, arity: int) -> tuple[tuple[int, int], ...]:
    vs = list(range(1, arity + 1))
    rng.shuffle(vs)
    return tuple(sorted(tuple(sorted(vs[k:k + 2])) for k in range(0, arity, 2)))


def random_eom(rng: random.Random, arity: int, pool=GENERAL) -> Generated:
    pairing = random_pairing(rng, arity)
    d = arity // 2
    rows = {}
    for bits in range(1 << d):
        if rng.random() < 0.5:
            continue
        alpha = 0
        for k, (i, j) in enumerate(pairing):
            alpha |= 1 << ((i if (bits >> k) & 1 else j) - 1)
        rows[alpha] = _value(rng, pool)
    return Generated(Signature(arity, rows), "EOM", {"pairing": [list(p) for p in pairing]})


def _pure_up_block(rng: random.Random, pool) -> Signature:
    kind = rng.choice(("q1", "q1", "delta", "neq2", "neq4"))
    if kind == "q1":
        rows = [s for s in ("1100", "1010", "1001") if rng.random() < 0.75] or ["1100"]
        return Signature.from_strings({s: _value(rng, pool) for s in rows}, 4)
    if kind == "delta":
        return delta_pair().scale(_value(rng, pool))
    r = 2 if kind == "neq2" else 4
    return neq_weighted(r, _value(rng, pool), _value(rng, pool))


def _permuted(rng: random.Random, f: Signature) -> Signature:
    order = list(range(1, f.arity + 1))
    rng.shuffle(order)
    return f.permute(order)


def random_pure_up(rng: random.Random, max_arity: int = 6, typing: str | None = None) -> Generated:
    """Tensor of small pure-up blocks, shuffled, with the requested uniform typing."""
    pool = UNITS if typing == "A" else GENERAL
    while True:
        blocks = []
        total = 0
        while True:
            b = _pure_up_block(rng, pool)
            if total + b.arity > max_arity:
                break
            blocks.append(b)
            total += b.arity
            if rng.random() < 0.4:
                break
        if not blocks:
            continue
        f = _permuted(rng, tensor_all(blocks))
        in_a, in_p = typed_eom_class(f)
        if typing == "A" and not in_a or typing == "P" and not in_p:
            continue
        if typing is None and not (in_a or in_p):
            continue
        return Generated(f, "pure-up", {"blocks": len(blocks), "eom_A": in_a, "eom_P": in_p})


def eo_strings(arity: int) -> list[int]:
    return [a for a in range(1 << arity) if popcount(a) * 2 == arity]


def random_rebalancing(rng: random.Random, max_arity: int = 6, typing: str | None = None,
                       bit: int = 0) -> Generated:
    """Rejection sample EO supports until the ``bit``-rebalancing verifier and the typing pass."""
    pool = UNITS if typing == "A" else GENERAL
    while True:
        arity = rng.choice([r for r in (2, 4, 6) if r <= max_arity])
        strings = eo_strings(arity)
        mode = rng.random()
        if mode < 0.2:
            f = random_eom(rng, arity, pool).obj
        else:
            k = rng.randint(1, min(len(strings), 6))
            f = Signature(arity, {a: _value(rng, pool) for a in rng.sample(strings, k)})
        if f.is_zero() or rebalance_witness(f, bit) is None:
            continue
        in_a, in_p = typed_eom_class(f)
        if typing == "A" and not in_a or typing == "P" and not in_p:
            continue
        if typing is None and not (in_a or in_p):
            continue
        return Generated(f, "rebalancing", {"bit": bit, "eom_A": in_a, "eom_P": in_p})


def random_arity4_case(rng: random.Random, case: str) -> Generated:
    """A member of the tractable quaternary families a-d."""
    affine = case in ("b", "d")
    pool = UNITS if affine else GENERAL
    if rng.random() < 0.5:
        rows = [s for s in ("1100", "1010", "1001") if rng.random() < 0.7] or ["1010"]
        f = _permuted(rng, Signature.from_strings({s: _value(rng, pool) for s in rows}, 4))
    elif affine:
        f = mixed_affine4(*(rng.choice(UNITS) for _ in range(2)))
    else:
        f = neq_weighted(2, _value(rng, pool), _value(rng, pool)).tensor(
            neq_weighted(2, _value(rng, pool), _value(rng, pool)))
    if case in ("c", "d"):
        f = f.dual()
    return Generated(f, f"arity4-case-{case}", {"case": case})


def perturb(rng: random.Random, f: Signature, factor=3) -> Signature:
    """Scale one support value by ``factor``."""
    alpha = rng.choice(f.support())
    rows = dict(f.rows)
    rows[alpha] = rows[alpha] * factor
    return Signature(f.arity, rows)


def random_grid(rng: random.Random, sigs: Sequence[Signature], max_vertices: int = 6,
                budget: int = 2 * 10**6) -> EOGrid:
    """Random grid over ``sigs``: vertices drawn until total arity is even, slots matched at random."""
    while True:
        nv = rng.randint(1, max_vertices)
        picks = [rng.randrange(len(sigs)) for _ in range(nv)]
        total = sum(sigs[k].arity for k in picks)
        if total % 2:
            continue
        size = 1
        for k in picks:
            size *= max(1, len(sigs[k].rows))
        if size > budget:
            continue
        slots = [(v, s) for v, k in enumerate(picks) for s in range(1, sigs[k].arity + 1)]
        rng.shuffle(slots)
        edges = [(slots[j], slots[j + 1]) for j in range(0, len(slots), 2)]
        names = {k: f"s{k}" for k in set(picks)}
        return EOGrid({names[k]: sigs[k] for k in names}, [names[k] for k in picks], edges)


FAMILIES = (
    "A-member", "P-member", "EOM", "pure-up-typed", "rebalancing-typed",
    "arity4-case-a", "arity4-case-b", "arity4-case-c", "arity4-case-d",
    "adversarial-perturbed", "grid-pure-up", "grid-rebalancing",
)


def gen_random(family: str, seed: int = 0, arity: int = 4, typing: str | None = None,
               count: int = 2, max_vertices: int = 6) -> Generated:
    rng = random.Random(f"{family}:{seed}:{arity}:{typing}")
    if family == "A-member":
        return random_affine_member(rng, arity)
    if family == "P-member":
        return random_product_member(rng, arity)
    if family == "EOM":
        if arity % 2:
            raise SignatureError("EOM signatures need even arity")
        return random_eom(rng, arity)
    if family == "pure-up-typed":
        return random_pure_up(rng, arity, typing)
    if family == "rebalancing-typed":
        return random_rebalancing(rng, arity, typing)
    if family.startswith("arity4-case-") and family[-1] in "abcd":
        return random_arity4_case(rng, family[-1])
    if family == "adversarial-perturbed":
        base = random_affine_member(rng, arity)
        return Generated(perturb(rng, base.obj), family, {"base": base.certificate, "factor": 3})
    if family in ("grid-pure-up", "grid-rebalancing"):
        typing = typing or rng.choice("AP")
        make = random_pure_up if family == "grid-pure-up" else random_rebalancing
        sigs = [make(rng, min(arity, 6), typing).obj for _ in range(rng.randint(1, count))]
        return Generated(random_grid(rng, sigs, max_vertices), family, {"typing": typing})
    raise SignatureError(f"unknown family {family!r}")
