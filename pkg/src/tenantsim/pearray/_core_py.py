"""Pure-Python (numpy) fold simulation kernel.

Per-cycle state is held in dense arrays and advanced with whole-array
operations: horizontal values shift right one column per cycle, partial
sums shift down one row, and a PE multiplies only when the value's owner
matches its column's owner. Drop-in equivalent of the compiled kernel.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def simulate(total_cols, n_slots, assignments):
    """Run one fold per assignment on a shared grid, cycle by cycle.

    assignments: list of (slot, col_start, weights, inputs) where weights
    is int64[r_f, c_f] and inputs is int64[t, r_f] (pixel-major). Left-edge
    row links are shared round-robin over n_slots slots; a single
    assignment with n_slots=1 is a standalone partition.

    Returns a list of (outputs int64[t, c_f], cycles_used, counts) in
    assignment order, with counts keyed mac_ops / lr_writes / pass_hops /
    feed_reads / load_reads / drain_writes.
    """
    n = len(assignments)
    slots = [a[0] for a in assignments]
    col_starts = [a[1] for a in assignments]
    weights = [np.asarray(a[2], dtype=np.int64) for a in assignments]
    inputs = [np.asarray(a[3], dtype=np.int64) for a in assignments]
    r_fs = [w.shape[0] for w in weights]
    c_fs = [w.shape[1] for w in weights]
    ts = [x.shape[0] for x in inputs]
    rmax = max(r_fs)
    slot_to_asg = {s: i for i, s in enumerate(slots)}

    owner = np.full(total_cols, -1, dtype=np.int64)
    drain_row = np.zeros(total_cols, dtype=np.int64)
    lr = np.zeros((rmax, total_cols), dtype=np.int64)
    active = np.zeros((rmax, total_cols), dtype=bool)
    for i in range(n):
        cs, ce = col_starts[i], col_starts[i] + c_fs[i]
        if ce > total_cols:
            raise ValueError("assignment tile exceeds grid columns")
        if (owner[cs:ce] != -1).any():
            raise ValueError("overlapping assignment tiles")
        owner[cs:ce] = i
        drain_row[cs:ce] = r_fs[i] - 1
        lr[: r_fs[i], cs:ce] = weights[i]
        active[: r_fs[i], cs:ce] = True

    owner_b = np.broadcast_to(owner, (rmax, total_cols))

    # Weight load: each column chain fills in r_f cycles; one load-buffer
    # read and one final LR placement per weight.
    counts = [
        {"mac_ops": 0, "lr_writes": r_fs[i] * c_fs[i], "pass_hops": 0,
         "feed_reads": 0, "load_reads": r_fs[i] * c_fs[i], "drain_writes": 0}
        for i in range(n)
    ]

    h_val = np.zeros((rmax, total_cols), dtype=np.int64)
    h_pix = np.full((rmax, total_cols), -1, dtype=np.int64)
    h_own = np.full((rmax, total_cols), -1, dtype=np.int64)
    v_val = np.zeros((rmax, total_cols), dtype=np.int64)
    v_pix = np.full((rmax, total_cols), -1, dtype=np.int64)

    outputs = [np.zeros((ts[i], c_fs[i]), dtype=np.int64) for i in range(n)]
    last_drain = [0] * n

    last_inject = max(n_slots * (ts[i] - 1) + slots[i] + 1 + (r_fs[i] - 1)
                      for i in range(n))
    end_cycle = last_inject + total_cols

    col_idx = np.arange(total_cols)

    for c in range(1, end_cycle + 1):
        h_present = h_pix >= 0
        mac = h_present & (h_own == owner_b) & active
        v_out = v_val + np.where(mac, h_val * lr, 0)
        v_pix_out = np.where(mac, h_pix, v_pix)

        # event tallies, attributed to the value's owner
        pass_mask = h_present & ~mac
        for i in range(n):
            counts[i]["mac_ops"] += int((mac & (h_own == i)).sum())
            counts[i]["pass_hops"] += int((pass_mask & (h_own == i)).sum())

        # drain from each owned column's last tile row
        for i in range(n):
            cs, ce = col_starts[i], col_starts[i] + c_fs[i]
            d = r_fs[i] - 1
            pix = v_pix_out[d, cs:ce]
            sel = pix >= 0
            if sel.any():
                vals = v_out[d, cs:ce]
                outputs[i][pix[sel], np.nonzero(sel)[0]] = vals[sel]
                counts[i]["drain_writes"] += int(sel.sum())
                last_drain[i] = c
                v_pix_out[d, cs:ce] = np.where(sel, -1, pix)

        # shift partial sums down, horizontal values right
        v_val[1:] = v_out[:-1]
        v_val[0] = 0
        v_pix[1:] = v_pix_out[:-1]
        v_pix[0] = -1
        h_val[:, 1:] = h_val[:, :-1]
        h_pix[:, 1:] = h_pix[:, :-1]
        h_own[:, 1:] = h_own[:, :-1]
        h_pix[:, 0] = -1
        h_own[:, 0] = -1

        # left-edge injection: row x's slot at this cycle
        for x in range(rmax):
            s = c - 1 - x
            if s < 0:
                continue
            i = slot_to_asg.get(s % n_slots)
            if i is None or x >= r_fs[i]:
                continue
            p = s // n_slots
            if p >= ts[i]:
                continue
            h_val[x, 0] = inputs[i][p, x]
            h_pix[x, 0] = p
            h_own[x, 0] = i
            counts[i]["feed_reads"] += 1

    results = []
    for i in range(n):
        cycles_used = r_fs[i] + last_drain[i] - slots[i]
        results.append((outputs[i], cycles_used, counts[i]))
    return results
