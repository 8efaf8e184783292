"""Pure-Python twins of the compiled loops in ``_kernels.pyx``; same arguments, same results."""
from __future__ import annotations

import numpy as np


def row_combinations(rows, offsets, value_ids, chk_offsets, chk_self, chk_other,
                     chk_other_slot, state, max_out):
    nv = len(offsets) - 1
    rows = [int(r) for r in rows]
    offsets = [int(o) for o in offsets]
    idx = [int(v) for v in state[1:]]
    d = int(state[0])
    checks = [
        [(int(chk_self[c]), int(chk_other[c]), int(chk_other_slot[c]))
         for c in range(chk_offsets[v], chk_offsets[v + 1])]
        for v in range(nv)
    ]
    out = []
    done = True
    while d >= 0:
        idx[d] += 1
        if idx[d] >= offsets[d + 1] - offsets[d]:
            d -= 1
            continue
        row = rows[offsets[d] + idx[d]]
        if any(((row >> k) & 1) == ((rows[offsets[u] + idx[u]] >> ku) & 1)
               for k, u, ku in checks[d]):
            continue
        if d == nv - 1:
            out.append([int(value_ids[offsets[j] + idx[j]]) for j in range(nv)])
            if len(out) == max_out:
                done = False
                break
        else:
            d += 1
            idx[d] = -1
    state[0] = d
    state[1:] = idx
    return np.array(out, dtype=np.int32).reshape(len(out), nv), done


def assignment_values(nvars, var_offsets, clause_vars, table_offsets, tables, state, max_out):
    nc = len(var_offsets) - 1
    scopes = [[int(v) for v in clause_vars[var_offsets[c]:var_offsets[c + 1]]] for c in range(nc)]
    bases = [int(table_offsets[c]) for c in range(nc)]
    x = int(state[0])
    limit = 1 << nvars
    out = []
    while x < limit:
        row = []
        for scope, base in zip(scopes, bases):
            key = 0
            for t, v in enumerate(scope):
                key |= ((x >> v) & 1) << t
            vid = int(tables[base + key])
            if vid < 0:
                break
            row.append(vid)
        else:
            out.append(row)
        x += 1
        if len(out) == max_out:
            break
    state[0] = x
    return np.array(out, dtype=np.int32).reshape(len(out), nc), x >= limit
