"""Membership tests, with witnesses, for the signature families the deciders use."""
from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .affine import AffineSpace, affine_span
from .errors import Undecided
from .exact import ONE, ZERO, ExactComplex, i_power
from .signature import (
    Pairing,
    columns as _columns,
    Signature,
    SignatureError,
    all_pairings,
    canonical_pairing,
    popcount,
)

DENSE_PAIRING_ARITY_CAP = 12
SPARSE_SUPPORT_CAP = 14
PURITY_SPAN_CAP = 20


# -- the affine family -------------------------------------------------

@dataclass(frozen=True)
class AWitness:
    """``scalar * i^(phase)`` on an affine support; phase over the pivot variables.

    ``linear`` maps a 1-based variable to its coefficient in Z4 and ``quadratic``
    lists variable pairs carrying coefficient 2. A zero signature has
    ``scalar == 0`` and no support.
    """

    arity: int
    scalar: ExactComplex
    support: AffineSpace | None
    linear: dict[int, int] = field(default_factory=dict)
    quadratic: frozenset[tuple[int, int]] = frozenset()

    def phase(self, alpha: int) -> int:
        e = 0
        for v, c in self.linear.items():
            if (alpha >> (v - 1)) & 1:
                e += c
        for u, v in self.quadratic:
            if (alpha >> (u - 1)) & 1 and (alpha >> (v - 1)) & 1:
                e += 2
        return e % 4

    def reconstruct(self) -> Signature:
        if self.support is None or not self.scalar:
            return Signature.zero(self.arity)
        return Signature(
            self.arity,
            {a: self.scalar * i_power(self.phase(a)) for a in self.support.elements()},
        )

    def to_json(self) -> dict:
        if self.support is None:
            return {"scalar": str(self.scalar), "support": None}
        return {
            "scalar": str(self.scalar),
            "support": self.support.describe(),
            "linear": {str(v): c for v, c in sorted(self.linear.items())},
            "quadratic": sorted([list(p) for p in self.quadratic]),
        }


def membership_A(f: Signature) -> AWitness | None:
    if f.is_zero():
        return AWitness(f.arity, ZERO, None)
    support = f.support()
    space = affine_span(support, f.arity)
    if space.size != len(support):
        return None
    lam = f.value(space.base_point)
    k = space.dimension
    exps = [0] * (1 << k)
    for t in range(1 << k):
        e = (f.value(space.point(t)) / lam).power_of_i()
        if e is None:
            return None
        exps[t] = e
    # Moebius transform over subsets, mod 4: multilinear coefficients of the phase
    coeffs = exps[:]
    for j in range(k):
        bit = 1 << j
        for t in range(1 << k):
            if t & bit:
                coeffs[t] = (coeffs[t] - coeffs[t ^ bit]) % 4
    pivots = space.pivots
    linear: dict[int, int] = {}
    quadratic = set()
    for t, c in enumerate(coeffs):
        if not c or t == 0:
            continue
        size = popcount(t)
        if size >= 3 or (size == 2 and c % 2):
            return None
        members = [pivots[j] + 1 for j in range(k) if (t >> j) & 1]
        if size == 1:
            linear[members[0]] = c
        else:
            quadratic.add(tuple(members))
    return AWitness(f.arity, lam, space, linear, frozenset(quadratic))


def ratios_in_units(values: list[ExactComplex]) -> bool:
    """Every quotient of two of ``values`` lies in {1, i, -1, -i}."""
    if not values:
        return True
    first = values[0]
    return all((v / first).power_of_i() is not None for v in values[1:])


# -- the product family ------------------------------------------------

@dataclass(frozen=True)
class PFactor:
    kind: str  # "unary" | "equal" | "unequal"
    u: int
    v: int | None = None
    w0: ExactComplex = ONE
    w1: ExactComplex = ONE

    def to_json(self) -> dict:
        if self.kind == "unary":
            return {"kind": "unary", "var": self.u, "w0": str(self.w0), "w1": str(self.w1)}
        return {"kind": self.kind, "vars": [self.u, self.v]}


@dataclass(frozen=True)
class PDecomposition:
    arity: int
    scalar: ExactComplex
    factors: tuple[PFactor, ...]

    def value(self, alpha: int) -> ExactComplex:
        out = self.scalar
        for fac in self.factors:
            bu = (alpha >> (fac.u - 1)) & 1
            if fac.kind == "unary":
                out = out * (fac.w1 if bu else fac.w0)
            else:
                bv = (alpha >> (fac.v - 1)) & 1
                if (bu == bv) != (fac.kind == "equal"):
                    return ZERO
            if not out:
                return ZERO
        return out

    def reconstruct(self) -> Signature:
        return Signature(self.arity, {a: self.value(a) for a in range(1 << self.arity)})

    def to_json(self) -> dict:
        return {"scalar": str(self.scalar), "factors": [f.to_json() for f in self.factors]}


def membership_P(f: Signature) -> PDecomposition | None:
    if f.is_zero():
        return PDecomposition(f.arity, ZERO, ())
    if f.arity == 0:
        return PDecomposition(0, f.value(0), ())
    rows = f.support()
    full = (1 << len(rows)) - 1
    cols = _columns(f, rows)
    # variables forced equal or unequal on the support share a block
    blocks: dict[int, list[int]] = {}
    for k, c in enumerate(cols):
        blocks.setdefault(min(c, c ^ full), []).append(k)
    block_list = list(blocks.values())
    patterns = []
    expected = 1
    for blk in block_list:
        pats = {tuple((a >> k) & 1 for k in blk) for a in rows}
        patterns.append(pats)
        expected *= len(pats)
    if expected != len(rows):
        return None
    ref = rows[0]
    c = f.value(ref)
    m = len(block_list)

    def replaced(blk: list[int], pat: tuple[int, ...]) -> int:
        a = ref
        for k, b in zip(blk, pat):
            a = (a | (1 << k)) if b else (a & ~(1 << k))
        return a

    h = [{pat: f.value(replaced(blk, pat)) for pat in pats} for blk, pats in zip(block_list, patterns)]
    c_pow = c ** (m - 1)
    for a in rows:
        rhs = ONE
        for blk, hb in zip(block_list, h):
            rhs = rhs * hb[tuple((a >> k) & 1 for k in blk)]
        if f.value(a) * c_pow != rhs:
            return None
    factors: list[PFactor] = []
    for blk, hb in zip(block_list, h):
        root = blk[0]
        for k in blk[1:]:
            kind = "equal" if cols[k] == cols[root] else "unequal"
            factors.append(PFactor(kind, root + 1, k + 1))
        w = [ZERO, ZERO]
        for pat, val in hb.items():
            w[pat[0]] = val
        factors.append(PFactor("unary", root + 1, None, w[0], w[1]))
    return PDecomposition(f.arity, c ** (1 - m), tuple(factors))


# -- pairwise opposite (EOM) structure ----------------------------------

def compatibility(f: Signature) -> list[int]:
    """``compat[k]``: bitmask of variables (0-based) unequal to ``k`` on every support row."""
    r = f.arity
    allv = (1 << r) - 1
    compat = [allv & ~(1 << k) for k in range(r)]
    for alpha in f.rows:
        ones = alpha
        zeros = allv & ~alpha
        for k in range(r):
            compat[k] &= zeros if (alpha >> k) & 1 else ones
    return compat


def iter_eom_pairings(f: Signature) -> Iterator[Pairing]:
    """Lazily enumerate pairings ``P`` with ``supp(f)`` inside EOM[P]."""
    if f.arity % 2:
        raise SignatureError("EOM pairings need even arity")
    compat = compatibility(f)

    @lru_cache(maxsize=None)
    def completable(mask: int) -> bool:
        if not mask:
            return True
        low = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << low)
        cand = compat[low] & rest
        while cand:
            j = cand & -cand
            if completable(rest & ~j):
                return True
            cand ^= j
        return False

    def rec(mask: int) -> Iterator[list[tuple[int, int]]]:
        if not mask:
            yield []
            return
        low = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << low)
        cand = compat[low] & rest
        while cand:
            j = cand & -cand
            sub = rest & ~j
            if completable(sub):
                for tail in rec(sub):
                    yield [(low + 1, j.bit_length())] + tail
            cand ^= j

    for pairs in rec((1 << f.arity) - 1):
        yield canonical_pairing(pairs)


def eom_pairings(f: Signature) -> list[Pairing]:
    return list(iter_eom_pairings(f))


def first_eom_pairing(f: Signature) -> Pairing | None:
    return next(iter_eom_pairings(f), None)


def is_eom(f: Signature) -> bool:
    return first_eom_pairing(f) is not None


# -- EOM[A] / EOM[P] typing ------------------------------------------------

def _in_A(f: Signature) -> bool:
    return membership_A(f) is not None


def _in_P(f: Signature) -> bool:
    return membership_P(f) is not None


def pairing_restrictions(f: Signature) -> Iterator[Signature]:
    """Distinct restrictions ``f|EOM[P]`` over all pairings ``P`` of the variables.

    Small arities enumerate every pairing; otherwise subsets of the (small)
    support are tested for realizability by a pairing.
    """
    if f.arity % 2:
        raise SignatureError("typing needs even arity")
    rows = f.support()
    if f.arity <= DENSE_PAIRING_ARITY_CAP:
        seen = set()
        for pairing in all_pairings(range(1, f.arity + 1)):
            g = f.restrict_pairing(pairing)
            key = frozenset(g.rows)
            if key not in seen:
                seen.add(key)
                yield g
        return
    if len(rows) > SPARSE_SUPPORT_CAP:
        raise Undecided(
            f"pairing typing refused: arity {f.arity} with {len(rows)} support rows exceeds caps"
        )
    realizer = _SubsetRealizer(f, rows)
    for size in range(len(rows), -1, -1):
        for subset in combinations(range(len(rows)), size):
            mask = sum(1 << r for r in subset)
            if realizer.realizable(mask):
                yield f.restrict_support(rows[r] for r in subset)


class _SubsetRealizer:
    """Decide whether exactly the rows in a mask survive some pairing restriction."""

    def __init__(self, f: Signature, rows: list[int]) -> None:
        self.full = (1 << len(rows)) - 1
        cols = _columns(f, rows)
        counts: dict[int, int] = {}
        for c in cols:
            counts[c] = counts.get(c, 0) + 1
        self.types = sorted(counts)
        self.counts = tuple(counts[t] for t in self.types)

    def realizable(self, keep: int) -> bool:
        need = self.full & ~keep
        types = self.types
        memo: dict[tuple[tuple[int, ...], int], bool] = {}

        def go(counts: tuple[int, ...], killed: int) -> bool:
            key = (counts, killed)
            if key in memo:
                return memo[key]
            first = next((i for i, n in enumerate(counts) if n), None)
            if first is None:
                ok = killed & need == need
            else:
                ok = False
                base = list(counts)
                base[first] -= 1
                for j, n in enumerate(base):
                    if not n:
                        continue
                    diff = types[first] ^ types[j]
                    if diff & keep != keep:
                        continue
                    nxt = base[:]
                    nxt[j] -= 1
                    if go(tuple(nxt), killed | (need & ~diff)):
                        ok = True
                        break
            memo[key] = ok
            return ok

        return go(self.counts, 0)


def typed_eom_class(f: Signature) -> tuple[bool, bool]:
    """``(is EOM[A], is EOM[P])``: every pairing restriction lies in A (resp. P)."""
    in_a = in_p = True
    for g in pairing_restrictions(f):
        if in_a and not _in_A(g):
            in_a = False
        if in_p and not _in_P(g):
            in_p = False
        if not (in_a or in_p):
            break
    return in_a, in_p


# -- purity ------------------------------------------------------------------

PURE_UP = "pure_up"
PURE_DOWN = "pure_down"
PURE_BOTH = "both"
PURE_NEITHER = "neither"


def purity(f: Signature) -> str:
    if not f.is_eo():
        raise SignatureError("purity is defined for EO signatures")
    if f.is_zero():
        return PURE_BOTH
    space = affine_span(f.support(), f.arity)
    if space.dimension > PURITY_SPAN_CAP:
        raise Undecided(f"undecided: span too large (dimension {space.dimension})")
    half = f.arity // 2
    up = down = True
    for alpha in space.elements():
        w = popcount(alpha)
        if w < half:
            up = False
        elif w > half:
            down = False
        if not (up or down):
            return PURE_NEITHER
    if up and down:
        return PURE_BOTH
    return PURE_UP if up else PURE_DOWN


def is_pure_up(f: Signature) -> bool:
    return purity(f) in (PURE_UP, PURE_BOTH)


def is_pure_down(f: Signature) -> bool:
    return purity(f) in (PURE_DOWN, PURE_BOTH)


def all_one_variables(f: Signature) -> list[int]:
    """Variables equal to 1 on every support row (1-based)."""
    if f.is_zero():
        return list(range(1, f.arity + 1))
    mask = (1 << f.arity) - 1
    for alpha in f.rows:
        mask &= alpha
    return [k + 1 for k in range(f.arity) if (mask >> k) & 1]


# -- quaternary families -------------------------------------------------------

@dataclass(frozen=True)
class Arity4Flags:
    m_delta1: bool
    mdual_delta0: bool
    ma_delta1: bool
    madual_delta0: bool

    def to_json(self) -> dict:
        return {
            "M_x_Delta1": self.m_delta1,
            "Mdual_x_Delta0": self.mdual_delta0,
            "MA_x_Delta1": self.ma_delta1,
            "MAdual_x_Delta0": self.madual_delta0,
        }


def _in_m_delta1(f: Signature) -> bool:
    if f.is_zero():
        return True
    if any(popcount(a) != 2 for a in f.rows):
        return False
    return bool(all_one_variables(f))


def arity4_class(f: Signature) -> Arity4Flags:
    if f.arity != 4:
        raise SignatureError("arity-4 families need a quaternary signature")
    units = ratios_in_units(f.nonzero_values())
    m1 = _in_m_delta1(f)
    m0 = _in_m_delta1(f.dual())
    return Arity4Flags(m1, m0, m1 and units, m0 and units)


# -- reports -------------------------------------------------------------------

@dataclass
class ClassReport:
    name: str
    arity: int
    is_eo: bool
    in_A: bool
    in_P: bool
    eom_pairings: list[Pairing] | None
    is_eom_A: bool | None
    is_eom_P: bool | None
    purity: str | None
    rebalancing_0: bool | None
    rebalancing_1: bool | None
    arity4: Arity4Flags | None
    a_witness: AWitness | None = None
    p_witness: PDecomposition | None = None
    restriction_witnesses: list[tuple[Signature, AWitness | None, PDecomposition | None]] = field(
        default_factory=list
    )
    notes: list[str] = field(default_factory=list)

    @property
    def pure_up(self) -> bool | None:
        return None if self.purity is None else self.purity in (PURE_UP, PURE_BOTH)

    @property
    def pure_down(self) -> bool | None:
        return None if self.purity is None else self.purity in (PURE_DOWN, PURE_BOTH)

    @property
    def is_eom(self) -> bool | None:
        return None if self.eom_pairings is None else bool(self.eom_pairings)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "arity": self.arity,
            "is_eo": self.is_eo,
            "in_A": self.in_A,
            "in_P": self.in_P,
            "is_eom": self.is_eom,
            "eom_pairings": None
            if self.eom_pairings is None
            else [[list(p) for p in pairing] for pairing in self.eom_pairings],
            "is_eom_A": self.is_eom_A,
            "is_eom_P": self.is_eom_P,
            "purity": self.purity,
            "pure_up": self.pure_up,
            "pure_down": self.pure_down,
            "rebalancing_0": self.rebalancing_0,
            "rebalancing_1": self.rebalancing_1,
            "arity4": None if self.arity4 is None else self.arity4.to_json(),
            "A_witness": None if self.a_witness is None else self.a_witness.to_json(),
            "P_witness": None if self.p_witness is None else self.p_witness.to_json(),
            "restriction_witnesses": [
                {
                    "support": g.support_strings(),
                    "A_witness": None if a is None else a.to_json(),
                    "P_witness": None if p is None else p.to_json(),
                }
                for g, a, p in self.restriction_witnesses
            ],
            "notes": self.notes,
        }


MAX_LISTED_PAIRINGS = 64


def classify(f: Signature, name: str = "", budget: int | None = None) -> ClassReport:
    from .rebalance import DEFAULT_STATE_BUDGET, rebalance_witness

    notes: list[str] = []
    eo = f.is_eo()
    a_wit = membership_A(f)
    p_wit = membership_P(f)
    pairings = None
    typed: tuple[bool | None, bool | None] = (None, None)
    pure = None
    reb = [None, None]
    if f.arity % 2 == 0:
        pairings = []
        for k, p in enumerate(iter_eom_pairings(f)):
            if k >= MAX_LISTED_PAIRINGS:
                notes.append(f"pairing list truncated at {MAX_LISTED_PAIRINGS}")
                break
            pairings.append(p)
        try:
            typed = typed_eom_class(f)
        except Undecided as exc:
            notes.append(exc.reason)
    restricted = []
    if typed[0] or typed[1]:
        for k, g in enumerate(pairing_restrictions(f)):
            if k >= MAX_LISTED_PAIRINGS:
                notes.append(f"restriction witnesses truncated at {MAX_LISTED_PAIRINGS}")
                break
            restricted.append((g, membership_A(g) if typed[0] else None,
                               membership_P(g) if typed[1] else None))
    if eo:
        try:
            pure = purity(f)
        except Undecided as exc:
            notes.append(exc.reason)
        for bit in (0, 1):
            try:
                reb[bit] = rebalance_witness(f, bit, budget or DEFAULT_STATE_BUDGET) is not None
            except Undecided as exc:
                notes.append(f"rebalancing-{bit}: {exc.reason}")
    return ClassReport(
        name=name,
        arity=f.arity,
        is_eo=eo,
        in_A=a_wit is not None,
        in_P=p_wit is not None,
        eom_pairings=pairings,
        is_eom_A=typed[0],
        is_eom_P=typed[1],
        purity=pure,
        rebalancing_0=reb[0],
        rebalancing_1=reb[1],
        arity4=arity4_class(f) if f.arity == 4 else None,
        a_witness=a_wit,
        p_witness=p_wit,
        restriction_witnesses=restricted,
        notes=notes,
    )
