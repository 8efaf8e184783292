"""Affine subspaces of F2^n with vectors packed into Python ints."""
from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from .signature import int_to_bits, popcount


def reduce_basis(vectors: Iterable[int]) -> list[int]:
    """Reduced row echelon basis: each vector's lowest set bit is a pivot absent from the others."""
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            if v & (b & -b):
                v ^= b
        if v:
            pivot = v & -v
            basis = [b ^ v if b & pivot else b for b in basis]
            basis.append(v)
    basis.sort(key=lambda b: b & -b)
    return basis


def reduce_vector(v: int, basis: list[int]) -> int:
    for b in basis:
        if v & (b & -b):
            v ^= b
    return v


@dataclass(frozen=True)
class AffineSpace:
    width: int
    offset: int
    basis: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return 1 << len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        """0-based coordinates that parameterize the space."""
        return tuple((b & -b).bit_length() - 1 for b in self.basis)

    @property
    def base_point(self) -> int:
        """The member that is zero on every pivot coordinate."""
        return reduce_vector(self.offset, list(self.basis))

    def __contains__(self, alpha: int) -> bool:
        return reduce_vector(alpha ^ self.offset, list(self.basis)) == 0

    def point(self, coords: int) -> int:
        """Member whose pivot coordinates are the bits of ``coords``."""
        p = self.base_point
        for k, b in enumerate(self.basis):
            if (coords >> k) & 1:
                p ^= b
        return p

    def coordinates(self, alpha: int) -> int:
        return sum(1 << k for k, piv in enumerate(self.pivots) if (alpha >> piv) & 1)

    def elements(self) -> Iterator[int]:
        for t in range(self.size):
            yield self.point(t)

    def constraints(self) -> list[tuple[int, int]]:
        """Linear equations ``(mask, rhs)`` with ``parity(alpha & mask) == rhs`` cutting out the space.

        One equation per non-pivot coordinate ``m``: ``x_m = base_m + sum_j basis_j[m] x_{pivot_j}``.
        """
        base = self.base_point
        pivots = self.pivots
        pivot_set = set(pivots)
        out = []
        for m in range(self.width):
            if m in pivot_set:
                continue
            mask = 1 << m
            for piv, b in zip(pivots, self.basis):
                if (b >> m) & 1:
                    mask |= 1 << piv
            out.append((mask, (base >> m) & 1))
        return out

    def describe(self) -> dict:
        return {
            "width": self.width,
            "offset": int_to_bits(self.offset, self.width),
            "basis": [int_to_bits(b, self.width) for b in self.basis],
        }


def affine_span(strings: Iterable[int], width: int) -> AffineSpace:
    strings = list(strings)
    if not strings:
        raise ValueError("affine span of an empty set is undefined")
    a0 = strings[0]
    basis = reduce_basis(s ^ a0 for s in strings[1:])
    return AffineSpace(width, a0, tuple(basis))


def is_affine(strings: Iterable[int], width: int) -> bool:
    strings = set(strings)
    if not strings:
        return True
    span = affine_span(strings, width)
    return span.size == len(strings)


def parity(x: int) -> int:
    return popcount(x) & 1
