# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration loops; see kernels.py for the contract."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.uint64_t u64
ctypedef cnp.int64_t i64
ctypedef cnp.int32_t i32


def row_combinations(
    const u64[:] rows,
    const i64[:] offsets,
    const i32[:] value_ids,
    const i64[:] chk_offsets,
    const i32[:] chk_self,
    const i32[:] chk_other,
    const i32[:] chk_other_slot,
    i64[:] state,
    i64 max_out,
):
    cdef Py_ssize_t nv = offsets.shape[0] - 1
    cdef i64[:] idx = state[1:]
    cdef i64 d = state[0]
    cdef i64 out_n = 0
    cdef i64 c, k, u
    cdef u64 row, other
    cdef bint ok
    out = np.empty((max_out, nv), dtype=np.int32)
    cdef i32[:, :] buf = out
    cdef Py_ssize_t j
    while d >= 0:
        idx[d] += 1
        if idx[d] >= offsets[d + 1] - offsets[d]:
            d -= 1
            continue
        row = rows[offsets[d] + idx[d]]
        ok = True
        for c in range(chk_offsets[d], chk_offsets[d + 1]):
            u = chk_other[c]
            other = rows[offsets[u] + idx[u]]
            if ((row >> chk_self[c]) & 1) == ((other >> chk_other_slot[c]) & 1):
                ok = False
                break
        if not ok:
            continue
        if d == nv - 1:
            for j in range(nv):
                buf[out_n, j] = value_ids[offsets[j] + idx[j]]
            out_n += 1
            if out_n == max_out:
                state[0] = d
                return out, False
        else:
            d += 1
            idx[d] = -1
    state[0] = d
    return out[:out_n], True


def assignment_values(
    int nvars,
    const i64[:] var_offsets,
    const i32[:] clause_vars,
    const i64[:] table_offsets,
    const i32[:] tables,
    i64[:] state,
    i64 max_out,
):
    cdef Py_ssize_t nc = var_offsets.shape[0] - 1
    cdef i64 x = state[0]
    cdef i64 limit = (<i64>1) << nvars
    cdef i64 out_n = 0
    cdef i64 key, t
    cdef Py_ssize_t c, j
    cdef i32 vid
    cdef bint ok
    out = np.empty((max_out, nc), dtype=np.int32)
    cdef i32[:, :] buf = out
    while x < limit:
        ok = True
        for c in range(nc):
            key = 0
            t = 0
            for j in range(var_offsets[c], var_offsets[c + 1]):
                key |= ((x >> clause_vars[j]) & 1) << t
                t += 1
            vid = tables[table_offsets[c] + key]
            if vid < 0:
                ok = False
                break
            buf[out_n, c] = vid
        x += 1
        if ok:
            out_n += 1
            if out_n == max_out:
                state[0] = x
                return out, x >= limit
    state[0] = x
    return out[:out_n], True
