"""Set-level verdicts: quaternary dichotomy, pure dichotomy, rebalancing tractability."""
from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from .classify import (
    PURE_BOTH,
    PURE_DOWN,
    PURE_UP,
    arity4_class,
    membership_A,
    membership_P,
    purity,
    typed_eom_class,
)
from .errors import Undecided
from .rebalance import DEFAULT_STATE_BUDGET, is_rebalancing
from .signature import Signature, SignatureError

TRACTABLE = "tractable"
HARD = "hard"
UNDECIDED = "undecided"


@dataclass
class Verdict:
    outcome: str
    tag: str
    reason: str
    pipeline: str | None = None
    evidence: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"outcome": self.outcome, "tag": self.tag, "reason": self.reason,
               "evidence": self.evidence}
        if self.pipeline is not None:
            out["pipeline"] = self.pipeline
        return out


def _named(sigs: Sequence[Signature] | Mapping[str, Signature]) -> dict[str, Signature]:
    if isinstance(sigs, Mapping):
        return dict(sigs)
    return {f"f{k}": s for k, s in enumerate(sigs)}


# -- arity <= 4 ----------------------------------------------------------------

@dataclass(frozen=True)
class _Flags:
    A: bool
    P: bool
    M1: bool
    MA1: bool
    M0: bool
    MA0: bool

    @property
    def s1(self) -> bool:
        return self.P or self.M1

    @property
    def s2(self) -> bool:
        return self.A or self.MA1

    @property
    def s1_dual(self) -> bool:
        return self.P or self.M0

    @property
    def s2_dual(self) -> bool:
        return self.A or self.MA0


def _flags(f: Signature) -> _Flags:
    a = membership_A(f) is not None
    p = membership_P(f) is not None
    if f.arity == 4:
        m = arity4_class(f)
        return _Flags(a, p, m.m_delta1, m.ma_delta1, m.mdual_delta0, m.madual_delta0)
    return _Flags(a, p, False, False, False, False)


CASES = (
    ("a", "s1", "product type or M x Delta1"),
    ("b", "s2", "affine or M_A x Delta1"),
    ("c", "s1_dual", "product type or dual M x Delta0"),
    ("d", "s2_dual", "affine or dual M_A x Delta0"),
)


def decide_arity4(sigs) -> Verdict:
    named = _named(sigs)
    for name, f in named.items():
        if f.arity > 4 or not f.is_eo():
            raise SignatureError(f"{name}: quaternary decider needs EO signatures of arity <= 4")
    flags = {n: _flags(f) for n, f in named.items()}
    for tag, attr, text in CASES:
        if all(getattr(fl, attr) for fl in flags.values()):
            return Verdict(TRACTABLE, tag, f"every signature is {text}", "auto",
                           {"members": sorted(flags)})
    for n, fl in flags.items():
        if not (fl.A or fl.P or fl.M1 or fl.M0):
            return Verdict(HARD, "single-signature",
                           f"{n} is neither affine, product type, M x Delta1 nor dual M x Delta0",
                           evidence={"signature": n})
    up = {n for n, fl in flags.items() if fl.s1 or fl.s2}
    down = {n for n, fl in flags.items() if fl.s1_dual or fl.s2_dual}
    if len(up) < len(flags) and len(down) < len(flags):
        f = sorted(up - down)[0]
        g = sorted(down - up)[0]
        return Verdict(HARD, "delta1-delta0-mixing",
                       f"{f} lies only on the Delta1 side and {g} only on the Delta0 side",
                       evidence={"delta1_side": f, "delta0_side": g})
    dual = len(up) < len(flags)
    first = "s1_dual" if dual else "s1"
    second = "s2_dual" if dual else "s2"
    only_first = sorted(n for n, fl in flags.items() if getattr(fl, first) and not getattr(fl, second))
    only_second = sorted(n for n, fl in flags.items() if getattr(fl, second) and not getattr(fl, first))
    g = only_second[0]
    f = only_first[0]
    if flags[f].P and not flags[f].A:
        return Verdict(HARD, "affine-product-mixing",
                       f"{g} is affine but not product type while {f} is product type but not affine",
                       evidence={"affine_only": g, "product_only": f})
    return Verdict(HARD, "affine-m-mixing",
                   f"{g} is affine but not product type while {f} is an M-family member "
                   "whose value ratios leave {1, i, -1, -i}",
                   evidence={"affine_only": g, "m_only": f})


# -- pure sets -------------------------------------------------------------------

def set_purity(named: Mapping[str, Signature]) -> str | None:
    """'up' or 'down' when every signature shares that purity, else None."""
    kinds = {}
    for n, f in named.items():
        if not f.is_eo():
            return None
        kinds[n] = purity(f)
    if all(k in (PURE_UP, PURE_BOTH) for k in kinds.values()):
        return "up"
    if all(k in (PURE_DOWN, PURE_BOTH) for k in kinds.values()):
        return "down"
    return None


def set_typing(named: Mapping[str, Signature]) -> tuple[str | None, dict[str, tuple[bool, bool]]]:
    """Uniform pairing-restriction type ('A', 'P' or None) and the per-signature flags."""
    typed = {n: typed_eom_class(f) for n, f in named.items()}
    if all(a for a, _ in typed.values()):
        return "A", typed
    if all(p for _, p in typed.values()):
        return "P", typed
    return None, typed


def _typing_evidence(typed: Mapping[str, tuple[bool, bool]]) -> dict:
    return {n: {"eom_A": a, "eom_P": p} for n, (a, p) in sorted(typed.items())}


def decide_pure(sigs) -> Verdict:
    named = _named(sigs)
    try:
        side = set_purity(named)
    except Undecided as exc:
        return Verdict(UNDECIDED, "purity-undecided", exc.reason)
    if side is None:
        return Verdict(UNDECIDED, "not-pure", "not a pure set")
    try:
        kind, typed = set_typing(named)
    except Undecided as exc:
        return Verdict(UNDECIDED, "typing-undecided", exc.reason)
    ev = {"side": side, "typing": _typing_evidence(typed)}
    if kind is not None:
        return Verdict(TRACTABLE, f"pure-{side}-eom-{kind}",
                       f"pure-{side} set whose pairing restrictions are all "
                       f"{'affine' if kind == 'A' else 'product type'}", "active", ev)
    return Verdict(HARD, "pure-typing-mixed",
                   "pure set that is neither uniformly EOM[A] nor uniformly EOM[P]", evidence=ev)


# -- rebalancing sets ------------------------------------------------------------

def set_rebalancing(named: Mapping[str, Signature], budget: int = DEFAULT_STATE_BUDGET) -> int | None:
    """The bit every signature is rebalancing for (0 preferred), else None."""
    for bit in (0, 1):
        if all(f.is_eo() and is_rebalancing(f, bit, budget) for f in named.values()):
            return bit
    return None


def decide_rebalancing(sigs, budget: int = DEFAULT_STATE_BUDGET) -> Verdict:
    named = _named(sigs)
    if not all(f.is_eo() for f in named.values()):
        return Verdict(UNDECIDED, "not-eo", "rebalancing needs EO signatures")
    try:
        bit = set_rebalancing(named, budget)
    except Undecided as exc:
        return Verdict(UNDECIDED, "verifier-budget", exc.reason)
    if bit is None:
        flags = {}
        for n, f in sorted(named.items()):
            flags[n] = {"rebalancing_0": is_rebalancing(f, 0, budget),
                        "rebalancing_1": is_rebalancing(f, 1, budget)}
        return Verdict(UNDECIDED, "not-rebalancing",
                       "no uniform rebalancing bit; no hardness result is known for such sets, "
                       "so the complexity is left open", evidence={"rebalancing": flags})
    try:
        kind, typed = set_typing(named)
    except Undecided as exc:
        return Verdict(UNDECIDED, "typing-undecided", exc.reason)
    ev = {"bit": bit, "typing": _typing_evidence(typed)}
    if kind is None:
        return Verdict(UNDECIDED, "typing-mixed",
                       f"{bit}-rebalancing but not uniformly EOM[A] or EOM[P]", evidence=ev)
    return Verdict(TRACTABLE, f"rebalancing-{bit}-eom-{kind}",
                   f"every signature is {bit}-rebalancing with "
                   f"{'affine' if kind == 'A' else 'product type'} pairing restrictions", "passive", ev)


def decide(sigs, budget: int = DEFAULT_STATE_BUDGET) -> Verdict:
    """Pick the quaternary, pure or rebalancing decider by the shape of the set."""
    named = _named(sigs)
    if not named:
        return Verdict(TRACTABLE, "empty", "empty signature set", "auto")
    for n, f in named.items():
        if not f.is_eo():
            return Verdict(UNDECIDED, "not-eo", f"{n} is not an EO signature")
    if all(f.arity <= 4 for f in named.values()):
        return decide_arity4(named)
    try:
        side = set_purity(named)
    except Undecided:
        side = None
    if side is not None:
        return decide_pure(named)
    return decide_rebalancing(named, budget)
