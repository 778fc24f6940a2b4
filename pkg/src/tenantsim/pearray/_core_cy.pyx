# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled fold simulation kernel; same contract as _core_py.simulate."""

import numpy as np

cimport numpy as cnp

BACKEND_NAME = "cython"


def simulate(int total_cols, int n_slots, assignments):
    cdef int n = len(assignments)
    cdef int i, x, y, c, s, p, d, rel
    cdef long long contrib

    slots_l = [a[0] for a in assignments]
    col_starts_l = [a[1] for a in assignments]
    weights = [np.ascontiguousarray(a[2], dtype=np.int64) for a in assignments]
    inputs = [np.ascontiguousarray(a[3], dtype=np.int64) for a in assignments]

    cdef cnp.ndarray[cnp.int64_t, ndim=1] slots = np.array(slots_l, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] col_starts = np.array(col_starts_l, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] r_fs = np.array([w.shape[0] for w in weights], dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] c_fs = np.array([w.shape[1] for w in weights], dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ts = np.array([xx.shape[0] for xx in inputs], dtype=np.int64)
    cdef int rmax = int(r_fs.max())

    cdef cnp.ndarray[cnp.int64_t, ndim=1] slot_map = np.full(n_slots, -1, dtype=np.int64)
    for i in range(n):
        slot_map[slots[i]] = i

    cdef cnp.ndarray[cnp.int64_t, ndim=1] owner = np.full(total_cols, -1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] lr = np.zeros((rmax, total_cols), dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] active = np.zeros((rmax, total_cols), dtype=np.uint8)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] wi
    cdef int tmax = int(ts.max())
    cdef cnp.ndarray[cnp.int64_t, ndim=3] inputs_pad = np.zeros((n, tmax, rmax), dtype=np.int64)
    for i in range(n):
        wi = weights[i]
        inputs_pad[i, : ts[i], : r_fs[i]] = inputs[i]
        for y in range(col_starts[i], col_starts[i] + c_fs[i]):
            if y >= total_cols:
                raise ValueError("assignment tile exceeds grid columns")
            if owner[y] != -1:
                raise ValueError("overlapping assignment tiles")
            owner[y] = i
            for x in range(r_fs[i]):
                lr[x, y] = wi[x, y - col_starts[i]]
                active[x, y] = 1

    cdef cnp.ndarray[cnp.int64_t, ndim=2] mac_ops = np.zeros((n, 1), dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] pass_hops = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] feed_reads = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] drain_writes = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] macs = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] last_drain = np.zeros(n, dtype=np.int64)

    cdef cnp.ndarray[cnp.int64_t, ndim=2] h_val = np.zeros((rmax, total_cols), dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] h_pix = np.full((rmax, total_cols), -1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] h_own = np.full((rmax, total_cols), -1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] v_val = np.zeros((rmax, total_cols), dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] v_pix = np.full((rmax, total_cols), -1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] v_val_out = np.zeros((rmax, total_cols), dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] v_pix_out = np.full((rmax, total_cols), -1, dtype=np.int64)

    outputs = [np.zeros((ts[i], c_fs[i]), dtype=np.int64) for i in range(n)]
    out_views = outputs

    cdef int last_inject = 0
    for i in range(n):
        c = n_slots * (ts[i] - 1) + slots[i] + 1 + (r_fs[i] - 1)
        if c > last_inject:
            last_inject = c
    cdef int end_cycle = last_inject + total_cols

    cdef cnp.ndarray[cnp.int64_t, ndim=2] out_i
    cdef long long own, pix

    for c in range(1, end_cycle + 1):
        # compute phase: MAC / pass-through from registered inputs
        for x in range(rmax):
            for y in range(total_cols):
                pix = h_pix[x, y]
                if pix >= 0:
                    own = h_own[x, y]
                    if own == owner[y] and active[x, y]:
                        v_val_out[x, y] = v_val[x, y] + h_val[x, y] * lr[x, y]
                        v_pix_out[x, y] = pix
                        macs[own] += 1
                    else:
                        v_val_out[x, y] = v_val[x, y]
                        v_pix_out[x, y] = v_pix[x, y]
                        pass_hops[own] += 1
                else:
                    v_val_out[x, y] = v_val[x, y]
                    v_pix_out[x, y] = v_pix[x, y]

        # drain from each owned column's last tile row
        for i in range(n):
            d = r_fs[i] - 1
            out_i = out_views[i]
            for rel in range(c_fs[i]):
                y = col_starts[i] + rel
                pix = v_pix_out[d, y]
                if pix >= 0:
                    out_i[pix, rel] = v_val_out[d, y]
                    drain_writes[i] += 1
                    last_drain[i] = c
                    v_pix_out[d, y] = -1

        # shift partial sums down
        for x in range(rmax - 1, 0, -1):
            for y in range(total_cols):
                v_val[x, y] = v_val_out[x - 1, y]
                v_pix[x, y] = v_pix_out[x - 1, y]
        for y in range(total_cols):
            v_val[0, y] = 0
            v_pix[0, y] = -1

        # shift horizontal values right
        for x in range(rmax):
            for y in range(total_cols - 1, 0, -1):
                h_val[x, y] = h_val[x, y - 1]
                h_pix[x, y] = h_pix[x, y - 1]
                h_own[x, y] = h_own[x, y - 1]
            h_pix[x, 0] = -1
            h_own[x, 0] = -1

        # left-edge injection
        for x in range(rmax):
            s = c - 1 - x
            if s < 0:
                continue
            i = <int> slot_map[s % n_slots]
            if i < 0 or x >= r_fs[i]:
                continue
            p = s // n_slots
            if p >= ts[i]:
                continue
            h_val[x, 0] = inputs_pad[i, p, x]
            h_pix[x, 0] = p
            h_own[x, 0] = i
            feed_reads[i] += 1

    results = []
    for i in range(n):
        counts = {
            "mac_ops": int(macs[i]),
            "lr_writes": int(r_fs[i] * c_fs[i]),
            "pass_hops": int(pass_hops[i]),
            "feed_reads": int(feed_reads[i]),
            "load_reads": int(r_fs[i] * c_fs[i]),
            "drain_writes": int(drain_writes[i]),
        }
        cycles_used = int(r_fs[i] + last_drain[i] - slots[i])
        results.append((outputs[i], cycles_used, counts))
    return results
