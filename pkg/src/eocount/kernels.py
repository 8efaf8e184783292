"""Enumeration kernels behind the brute-force oracles.

The compiled module ``_kernels`` is used when it imports; otherwise, or when
``EOCOUNT_FORCE_PYTHON`` is set to a non-empty value other than ``0``, the
pure-Python twin in ``_kernels_py`` runs. Both walk the combinations and emit
rows of small integer value ids; exact products are taken here, once per
distinct multiset of ids.
"""
from __future__ import annotations

import os
from collections import Counter
from collections.abc import Sequence

import numpy as np

from .exact import ONE, ZERO, ExactComplex

if os.environ.get("EOCOUNT_FORCE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

CHUNK = 1 << 16


class _ValueTable:
    def __init__(self) -> None:
        self.values: list[ExactComplex] = []
        self.ids: dict[ExactComplex, int] = {}

    def id(self, v: ExactComplex) -> int:
        k = self.ids.get(v)
        if k is None:
            k = self.ids[v] = len(self.values)
            self.values.append(v)
        return k


def _accumulate(chunks: Counter, block: np.ndarray) -> None:
    if not len(block):
        return
    block = np.sort(block, axis=1)
    uniq, counts = np.unique(block, axis=0, return_counts=True)
    for row, n in zip(uniq, counts):
        chunks[tuple(int(v) for v in row)] += int(n)


def _total(groups: Counter, values: list[ExactComplex]) -> ExactComplex:
    total = ZERO
    for ids, n in groups.items():
        term = ONE
        for k in ids:
            term = term * values[k]
        total = total + term * n
    return total


def sum_row_combinations(
    vertex_rows: Sequence[Sequence[tuple[int, ExactComplex]]],
    checks: Sequence[Sequence[tuple[int, int, int]]],
) -> ExactComplex:
    """Sum of value products over row choices, one row per vertex, passing every check.

    ``checks[v]`` lists ``(bit of v, earlier-or-same vertex u, bit of u)`` triples
    whose bits must differ. Rows are packed inputs below ``2**64``.
    """
    nv = len(vertex_rows)
    if nv == 0:
        return ONE
    table = _ValueTable()
    rows, vids, offsets = [], [], [0]
    for vr in vertex_rows:
        for alpha, v in vr:
            rows.append(alpha)
            vids.append(table.id(v))
        offsets.append(len(rows))
    chk_offsets = [0]
    cs, cu, ck = [], [], []
    for v in range(nv):
        for k, u, ku in checks[v]:
            cs.append(k)
            cu.append(u)
            ck.append(ku)
        chk_offsets.append(len(cs))
    args = (
        np.array(rows, dtype=np.uint64),
        np.array(offsets, dtype=np.int64),
        np.array(vids, dtype=np.int32),
        np.array(chk_offsets, dtype=np.int64),
        np.array(cs, dtype=np.int32),
        np.array(cu, dtype=np.int32),
        np.array(ck, dtype=np.int32),
    )
    state = np.full(nv + 1, -1, dtype=np.int64)
    state[0] = 0
    groups: Counter = Counter()
    done = False
    while not done:
        block, done = _impl.row_combinations(*args, state, CHUNK)
        _accumulate(groups, np.asarray(block))
    return _total(groups, table.values)


def sum_assignments(
    nvars: int,
    clauses: Sequence[tuple[Sequence[int], dict[int, ExactComplex]]],
) -> ExactComplex:
    """Sum over all ``2**nvars`` assignments of the product of clause values.

    Each clause is ``(scope, rows)`` with ``rows`` mapping a packed clause input
    (scope position ``t`` in bit ``t``) to its nonzero value.
    """
    if not clauses:
        return ExactComplex(2) ** nvars
    table = _ValueTable()
    var_offsets, scope_flat, table_offsets, tables = [0], [], [0], []
    for scope, rows in clauses:
        scope_flat.extend(scope)
        var_offsets.append(len(scope_flat))
        dense = [-1] * (1 << len(scope))
        for alpha, v in rows.items():
            dense[alpha] = table.id(v)
        tables.extend(dense)
        table_offsets.append(len(tables))
    args = (
        nvars,
        np.array(var_offsets, dtype=np.int64),
        np.array(scope_flat, dtype=np.int32),
        np.array(table_offsets, dtype=np.int64),
        np.array(tables, dtype=np.int32),
    )
    state = np.zeros(1, dtype=np.int64)
    groups: Counter = Counter()
    done = False
    while not done:
        block, done = _impl.assignment_values(*args, state, CHUNK)
        _accumulate(groups, np.asarray(block))
    return _total(groups, table.values)
