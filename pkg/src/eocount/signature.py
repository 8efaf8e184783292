"""Signatures and the gadget calculus over binary disequality edges.

A signature of arity ``r`` maps ``{0,1}^r`` to :class:`ExactComplex`. Tables are
stored sparsely as ``{packed input: nonzero value}``; this keeps the
five-row, arity-56 signatures cheap while small signatures stay small too.

Variables are 1-based (``x_1 .. x_r``). A packed input keeps ``x_i`` in bit
``i - 1``; the textual form ``"b_1 b_2 ... b_r"`` lists ``x_1`` first.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from typing import Union

from .exact import ONE, ZERO, ExactComplex, Number

Bits = Union[str, int]
Pairing = tuple[tuple[int, int], ...]

DENSE_ARITY_CAP = 24


class SignatureError(ValueError):
    pass


def bits_to_int(bits: str) -> int:
    value = 0
    for k, ch in enumerate(bits):
        if ch == "1":
            value |= 1 << k
        elif ch != "0":
            raise SignatureError(f"bad bit string {bits!r}")
    return value


def int_to_bits(alpha: int, width: int) -> str:
    return "".join("1" if (alpha >> k) & 1 else "0" for k in range(width))


def popcount(x: int) -> int:
    return bin(x).count("1")


def project(alpha: int, keep: Sequence[int]) -> int:
    """Gather bits ``keep[0], keep[1], ...`` (0-based) of ``alpha`` into a new word."""
    out = 0
    for k, pos in enumerate(keep):
        if (alpha >> pos) & 1:
            out |= 1 << k
    return out


def columns(f: Signature, rows: Sequence[int]) -> list[int]:
    """Column of each variable of ``f`` as a bitmask over the positions of ``rows``."""
    cols = [0] * f.arity
    for r, alpha in enumerate(rows):
        k = 0
        while alpha:
            if alpha & 1:
                cols[k] |= 1 << r
            alpha >>= 1
            k += 1
    return cols


def canonical_pairing(pairs: Iterable[Iterable[int]]) -> Pairing:
    out = []
    for p in pairs:
        i, j = tuple(p)
        out.append((i, j) if i < j else (j, i))
    return tuple(sorted(out))


def all_pairings(variables: Sequence[int]) -> Iterator[Pairing]:
    """Every perfect pairing of ``variables`` ((2d-1)!! of them)."""
    variables = list(variables)
    if len(variables) % 2:
        raise SignatureError("pairings need an even number of variables")

    def rec(rest: list[int]) -> Iterator[list[tuple[int, int]]]:
        if not rest:
            yield []
            return
        first = rest[0]
        for k in range(1, len(rest)):
            partner = rest[k]
            remaining = rest[1:k] + rest[k + 1:]
            for tail in rec(remaining):
                yield [(first, partner)] + tail

    for pairs in rec(variables):
        yield canonical_pairing(pairs)


def check_pairing(pairing: Iterable[Iterable[int]], arity: int) -> Pairing:
    pairing = canonical_pairing(pairing)
    seen = sorted(v for pair in pairing for v in pair)
    if seen != list(range(1, arity + 1)):
        raise SignatureError(f"pairing {pairing} does not cover variables 1..{arity} exactly once")
    return pairing


class Signature:
    """Immutable sparse signature."""

    __slots__ = ("arity", "_rows", "_hash")

    def __init__(self, arity: int, rows: Mapping[int, Number] | None = None) -> None:
        if arity < 0:
            raise SignatureError("arity must be non-negative")
        self.arity = arity
        clean: dict[int, ExactComplex] = {}
        limit = 1 << arity
        for alpha, value in (rows or {}).items():
            if not 0 <= alpha < limit:
                raise SignatureError(f"input {alpha} out of range for arity {arity}")
            v = ExactComplex.coerce(value)
            if v:
                clean[alpha] = v
        self._rows = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def from_strings(cls, rows: Mapping[str, Number], arity: int | None = None) -> Signature:
        widths = {len(s) for s in rows}
        if arity is None:
            if len(widths) != 1:
                raise SignatureError("cannot infer arity from rows")
            arity = widths.pop()
        elif widths - {arity}:
            raise SignatureError(f"row width does not match arity {arity}")
        return cls(arity, {bits_to_int(s): v for s, v in rows.items()})

    @classmethod
    def symmetric(cls, values: Sequence[Number]) -> Signature:
        """``[f_0, ..., f_r]``: value depends only on the Hamming weight."""
        r = len(values) - 1
        if r > DENSE_ARITY_CAP:
            raise SignatureError("symmetric form limited to small arity")
        vals = [ExactComplex.coerce(v) for v in values]
        return cls(r, {a: vals[popcount(a)] for a in range(1 << r) if vals[popcount(a)]})

    @classmethod
    def constant(cls, value: Number) -> Signature:
        return cls(0, {0: value})

    @classmethod
    def zero(cls, arity: int) -> Signature:
        return cls(arity)

    # -- basic queries ------------------------------------------------
    @property
    def rows(self) -> Mapping[int, ExactComplex]:
        return self._rows

    def support(self) -> list[int]:
        return sorted(self._rows)

    def support_strings(self) -> list[str]:
        return [int_to_bits(a, self.arity) for a in self.support()]

    def items(self) -> list[tuple[int, ExactComplex]]:
        return sorted(self._rows.items())

    def is_zero(self) -> bool:
        return not self._rows

    def value(self, alpha: Bits) -> ExactComplex:
        if isinstance(alpha, str):
            if len(alpha) != self.arity:
                raise SignatureError(f"input width {len(alpha)} != arity {self.arity}")
            alpha = bits_to_int(alpha)
        elif not 0 <= alpha < (1 << self.arity):
            raise SignatureError(f"input {alpha} out of range for arity {self.arity}")
        return self._rows.get(alpha, ZERO)

    __call__ = value

    def nonzero_values(self) -> list[ExactComplex]:
        return [v for _, v in self.items()]

    def is_eo(self) -> bool:
        if self.arity % 2:
            return not self._rows
        half = self.arity // 2
        return all(popcount(a) == half for a in self._rows)

    def table(self) -> list[ExactComplex]:
        """Dense table indexed by the input read as a binary number, ``x_1`` most significant."""
        if self.arity > DENSE_ARITY_CAP:
            raise SignatureError(f"dense table refused above arity {DENSE_ARITY_CAP}")
        r = self.arity
        out = [ZERO] * (1 << r)
        for alpha, v in self._rows.items():
            out[_reverse_bits(alpha, r)] = v
        return out

    def column(self, var: int) -> list[int]:
        k = self._index(var)
        return [(a >> k) & 1 for a in self.support()]

    def _index(self, var: int) -> int:
        if not 1 <= var <= self.arity:
            raise SignatureError(f"variable {var} out of range 1..{self.arity}")
        return var - 1

    def _pair_index(self, x: int, y: int) -> tuple[int, int]:
        if x == y:
            raise SignatureError(f"variables must differ (got {x} twice)")
        return self._index(x), self._index(y)

    # -- equality -----------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Signature):
            return NotImplemented
        return self.arity == other.arity and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.arity, frozenset(self._rows.items())))
        return self._hash

    def __repr__(self) -> str:
        if len(self._rows) <= 8:
            body = ", ".join(f"{int_to_bits(a, self.arity)}: {v}" for a, v in self.items())
        else:
            body = f"{len(self._rows)} rows"
        return f"Signature(arity={self.arity}, {{{body}}})"

    # -- transforms ---------------------------------------------------
    def scale(self, c: Number) -> Signature:
        c = ExactComplex.coerce(c)
        return Signature(self.arity, {a: v * c for a, v in self._rows.items()})

    def dual(self) -> Signature:
        mask = (1 << self.arity) - 1
        return Signature(self.arity, {a ^ mask: v for a, v in self._rows.items()})

    def tensor(self, other: Signature) -> Signature:
        shift = self.arity
        rows = {}
        for a, u in self._rows.items():
            for b, w in other._rows.items():
                rows[a | (b << shift)] = u * w
        return Signature(self.arity + other.arity, rows)

    def permute(self, order: Sequence[int]) -> Signature:
        """New signature whose variable ``k`` is old variable ``order[k-1]``."""
        if sorted(order) != list(range(1, self.arity + 1)):
            raise SignatureError("order must be a permutation of the variables")
        keep = [v - 1 for v in order]
        return Signature(self.arity, {project(a, keep): v for a, v in self._rows.items()})

    def _without(self, drop: Iterable[int]) -> list[int]:
        dropped = set(drop)
        return [k for k in range(self.arity) if k not in dropped]

    def fix(self, assignment: Mapping[int, int]) -> Signature:
        """Keep rows agreeing with ``assignment`` (var -> bit), then drop those variables."""
        idx = {self._index(v): b for v, b in assignment.items()}
        keep = self._without(idx)
        want = 0
        mask = 0
        for k, b in idx.items():
            mask |= 1 << k
            if b:
                want |= 1 << k
        return Signature(
            len(keep),
            {project(a, keep): v for a, v in self._rows.items() if a & mask == want},
        )

    def restrict_values(self, assignment: Mapping[int, int]) -> Signature:
        """Multiply by the indicators ``[x_v = b]``; arity is unchanged."""
        want = 0
        mask = 0
        for v, b in assignment.items():
            k = self._index(v)
            mask |= 1 << k
            if b:
                want |= 1 << k
        return Signature(self.arity, {a: v for a, v in self._rows.items() if a & mask == want})

    def restrict_support(self, keep: Iterable[int]) -> Signature:
        keep = set(keep)
        return Signature(self.arity, {a: v for a, v in self._rows.items() if a in keep})

    def pin_pair(self, x: int, y: int) -> Signature:
        """``f^{x=1, y=0}``."""
        self._pair_index(x, y)
        return self.fix({x: 1, y: 0})

    def pin(self, x: int, y: int, bit: int) -> Signature:
        """``f^{x=bit, y=1-bit}``."""
        self._pair_index(x, y)
        return self.fix({x: bit, y: 1 - bit})

    def self_loop(self, x: int, y: int) -> Signature:
        """Join ``x`` and ``y`` through a disequality edge."""
        kx, ky = self._pair_index(x, y)
        keep = self._without((kx, ky))
        rows: dict[int, ExactComplex] = {}
        for a, v in self._rows.items():
            if ((a >> kx) ^ (a >> ky)) & 1:
                key = project(a, keep)
                rows[key] = rows.get(key, ZERO) + v
        return Signature(len(keep), rows)

    def restrict_unequal(self, p: int, q: int) -> Signature:
        kp, kq = self._pair_index(p, q)
        return Signature(
            self.arity,
            {a: v for a, v in self._rows.items() if ((a >> kp) ^ (a >> kq)) & 1},
        )

    def restrict_pairing(self, pairing: Iterable[Iterable[int]]) -> Signature:
        pairing = check_pairing(pairing, self.arity)
        masks = [(1 << (i - 1), 1 << (j - 1)) for i, j in pairing]
        return Signature(
            self.arity,
            {
                a: v
                for a, v in self._rows.items()
                if all(bool(a & mi) != bool(a & mj) for mi, mj in masks)
            },
        )

    def in_eom(self, pairing: Iterable[Iterable[int]]) -> bool:
        """True when the support lies inside EOM[pairing]."""
        return self.restrict_pairing(pairing) == self

    def connect(self, other: Signature, pairs: Sequence[tuple[int, int]]) -> Signature:
        """Wire ``self`` variable ``i`` to ``other`` variable ``j`` for each ``(i, j)``.

        Every wire carries a disequality. The result's variables are the unmatched
        variables of ``self`` in ascending order followed by those of ``other``.
        """
        fi = [self._index(i) for i, _ in pairs]
        gj = [other._index(j) for _, j in pairs]
        if len(set(fi)) != len(fi) or len(set(gj)) != len(gj):
            raise SignatureError("connected variables must be distinct")
        keep_f = self._without(fi)
        keep_g = other._without(gj)
        shift = len(keep_f)
        rows: dict[int, ExactComplex] = {}
        for a, u in self._rows.items():
            want = [(a >> k) & 1 for k in fi]
            key_f = project(a, keep_f)
            for b, w in other._rows.items():
                if all(((b >> k) & 1) != bit for k, bit in zip(gj, want)):
                    key = key_f | (project(b, keep_g) << shift)
                    rows[key] = rows.get(key, ZERO) + u * w
        return Signature(shift + len(keep_g), rows)

    def signature_matrix(self, row_vars: Sequence[int]) -> list[list[ExactComplex]]:
        """Matrix with rows indexed by ``row_vars`` (in order) and columns by the rest."""
        if len(set(row_vars)) != len(row_vars):
            raise SignatureError("duplicate row variables")
        if self.arity > DENSE_ARITY_CAP:
            raise SignatureError(f"matrix form refused above arity {DENSE_ARITY_CAP}")
        rk = [self._index(v) for v in row_vars]
        ck = self._without(rk)
        m = [[ZERO] * (1 << len(ck)) for _ in range(1 << len(rk))]
        for a, v in self._rows.items():
            r = _reverse_bits(project(a, rk), len(rk))
            c = _reverse_bits(project(a, ck), len(ck))
            m[r][c] = v
        return m


def _reverse_bits(x: int, width: int) -> int:
    out = 0
    for _ in range(width):
        out = (out << 1) | (x & 1)
        x >>= 1
    return out


# -- common signatures -------------------------------------------------

def neq(arity: int = 2) -> Signature:
    """Disequality ``x_1 = .. = x_d != x_{d+1} = .. = x_{2d}``."""
    return neq_weighted(arity, 1, 1)


def neq_weighted(arity: int, a: Number, b: Number) -> Signature:
    """Generalized disequality: ``a`` on ``1..10..0``, ``b`` on its complement."""
    if arity < 2 or arity % 2:
        raise SignatureError("disequality needs positive even arity")
    d = arity // 2
    low = (1 << d) - 1
    full = (1 << arity) - 1
    return Signature(arity, {low: a, full ^ low: b})


def eq(arity: int = 2) -> Signature:
    return Signature(arity, {0: 1, (1 << arity) - 1: 1})


def unary(w0: Number, w1: Number) -> Signature:
    return Signature(1, {0: w0, 1: w1})


DELTA0 = unary(1, 0)
DELTA1 = unary(0, 1)
NEQ2 = neq(2)


def sixv(a: Number, b: Number, c: Number) -> Signature:
    """Quaternary signature on ``{1100, 1010, 1001}`` with values ``a, b, c``."""
    return Signature.from_strings({"1100": a, "1010": b, "1001": c})


def tensor_all(sigs: Iterable[Signature]) -> Signature:
    out = Signature.constant(ONE)
    for s in sigs:
        out = out.tensor(s)
    return out
