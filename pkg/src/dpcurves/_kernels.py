"""Small-integer lattice kernels used by the recursion's inner loop.

Two interchangeable backends produce bit-identical arrays:

* ``numba``: ``@njit`` depth-first enumeration, used when numba imports.
* ``numpy``: breadth-first vectorised expansion with the same pruning.

Set ``DPCURVES_NUMBA=0`` before import to force the numpy path.  Only
bounded lattice coordinates go through here; curve counts never do (they are
Python ints and can exceed int64).
"""

import os

import numpy as np

_WANT_NUMBA = os.environ.get("DPCURVES_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    if not _WANT_NUMBA:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def _coord_bounds(beta, d1):
    """Per-coordinate [lo, hi] for multiplicities of a part of degree d1."""
    d2 = beta[0] - d1
    m = beta[1:]
    lo = np.maximum(0, m - d2)
    hi = np.minimum(d1, m)
    return lo, hi


# ---------------------------------------------------------------- numpy path

def _splits_numpy(beta, c1beta, prune_genus):
    beta = np.asarray(beta, dtype=np.int64)
    d = int(beta[0])
    k = beta.shape[0] - 1
    blocks = []
    for d1 in range(1, d):
        d2 = d - d1
        s_min = 3 * d1 - c1beta + 1
        s_max = 3 * d1 - 1
        if k == 0:
            if s_min <= 0 <= s_max:
                blocks.append(np.array([[d1]], dtype=np.int64))
            continue
        lo, hi = _coord_bounds(beta, d1)
        if np.any(lo > hi):
            continue
        suf_lo = np.concatenate([np.cumsum(lo[::-1])[::-1], [0]])
        suf_hi = np.concatenate([np.cumsum(hi[::-1])[::-1], [0]])
        g1 = (d1 - 1) * (d1 - 2)
        g2 = (d2 - 1) * (d2 - 2)
        rows = np.zeros((1, 0), dtype=np.int64)
        s = np.zeros(1, dtype=np.int64)
        q1 = np.zeros(1, dtype=np.int64)
        q2 = np.zeros(1, dtype=np.int64)
        for i in range(k):
            vals = np.arange(lo[i], hi[i] + 1, dtype=np.int64)
            n, nv = rows.shape[0], vals.shape[0]
            col = np.tile(vals, n)
            rows = np.concatenate([np.repeat(rows, nv, axis=0), col[:, None]], axis=1)
            s = np.repeat(s, nv) + col
            other = beta[i + 1] - col
            q1 = np.repeat(q1, nv) + col * (col - 1)
            q2 = np.repeat(q2, nv) + other * (other - 1)
            keep = (s + suf_lo[i + 1] <= s_max) & (s + suf_hi[i + 1] >= s_min)
            if prune_genus:
                keep &= (q1 <= g1) & (q2 <= g2)
            rows, s, q1, q2 = rows[keep], s[keep], q1[keep], q2[keep]
            if rows.shape[0] == 0:
                break
        if rows.shape[0]:
            head = np.full((rows.shape[0], 1), d1, dtype=np.int64)
            blocks.append(np.concatenate([head, rows], axis=1))
    if not blocks:
        return np.zeros((0, k + 1), dtype=np.int64)
    return np.concatenate(blocks, axis=0)


def _normalize_numpy(rows):
    rows = np.array(rows, dtype=np.int64, copy=True)
    if rows.ndim != 2 or rows.shape[1] <= 2:
        return rows
    k = rows.shape[1] - 1
    while True:
        rows[:, 1:] = -np.sort(-rows[:, 1:], axis=1)
        if k < 3:
            return rows
        d = rows[:, 0]
        m1, m2, m3 = rows[:, 1], rows[:, 2], rows[:, 3]
        need = m1 + m2 + m3 > d
        if not need.any():
            return rows
        d_, a, b, c = d[need], m1[need], m2[need], m3[need]
        sub = rows[need]
        sub[:, 0] = 2 * d_ - a - b - c
        sub[:, 1] = d_ - b - c
        sub[:, 2] = d_ - a - c
        sub[:, 3] = d_ - a - b
        rows[need] = sub


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True)
    def _walk(beta, c1beta, prune_genus, out, fill):
        d = beta[0]
        k = beta.shape[0] - 1
        count = 0
        m1 = np.zeros(k, dtype=np.int64)
        lo = np.zeros(k, dtype=np.int64)
        hi = np.zeros(k, dtype=np.int64)
        suf_lo = np.zeros(k + 1, dtype=np.int64)
        suf_hi = np.zeros(k + 1, dtype=np.int64)
        ps = np.zeros(k + 1, dtype=np.int64)
        pq1 = np.zeros(k + 1, dtype=np.int64)
        pq2 = np.zeros(k + 1, dtype=np.int64)
        for d1 in range(1, d):
            d2 = d - d1
            s_min = 3 * d1 - c1beta + 1
            s_max = 3 * d1 - 1
            if k == 0:
                if s_min <= 0 and 0 <= s_max:
                    if fill:
                        out[count, 0] = d1
                    count += 1
                continue
            empty = False
            for i in range(k):
                lo[i] = max(0, beta[i + 1] - d2)
                hi[i] = min(d1, beta[i + 1])
                if lo[i] > hi[i]:
                    empty = True
            if empty:
                continue
            suf_lo[k] = 0
            suf_hi[k] = 0
            for i in range(k - 1, -1, -1):
                suf_lo[i] = suf_lo[i + 1] + lo[i]
                suf_hi[i] = suf_hi[i + 1] + hi[i]
            g1 = (d1 - 1) * (d1 - 2)
            g2 = (d2 - 1) * (d2 - 2)
            i = 0
            m1[0] = lo[0] - 1
            while i >= 0:
                m1[i] += 1
                if m1[i] > hi[i]:
                    i -= 1
                    continue
                v = m1[i]
                w = beta[i + 1] - v
                s = ps[i] + v
                q1 = pq1[i] + v * (v - 1)
                q2 = pq2[i] + w * (w - 1)
                if prune_genus and (q1 > g1 or q2 > g2):
                    continue
                if s + suf_lo[i + 1] > s_max or s + suf_hi[i + 1] < s_min:
                    continue
                if i == k - 1:
                    if fill:
                        out[count, 0] = d1
                        for j in range(k):
                            out[count, j + 1] = m1[j]
                    count += 1
                    continue
                ps[i + 1] = s
                pq1[i + 1] = q1
                pq2[i + 1] = q2
                i += 1
                m1[i] = lo[i] - 1
        return count

    @njit(cache=True)
    def _normalize_rows(rows):
        n = rows.shape[0]
        k = rows.shape[1] - 1
        for r in range(n):
            while True:
                # insertion sort, descending
                for a in range(2, k + 1):
                    x = rows[r, a]
                    b = a - 1
                    while b >= 1 and rows[r, b] < x:
                        rows[r, b + 1] = rows[r, b]
                        b -= 1
                    rows[r, b + 1] = x
                if k < 3:
                    break
                d = rows[r, 0]
                p, q, t = rows[r, 1], rows[r, 2], rows[r, 3]
                if p + q + t <= d:
                    break
                rows[r, 0] = 2 * d - p - q - t
                rows[r, 1] = d - q - t
                rows[r, 2] = d - p - t
                rows[r, 3] = d - p - q
        return rows

    def _splits_numba(beta, c1beta, prune_genus):
        beta = np.ascontiguousarray(beta, dtype=np.int64)
        scratch = np.zeros((0, beta.shape[0]), dtype=np.int64)
        n = _walk(beta, c1beta, prune_genus, scratch, False)
        out = np.zeros((n, beta.shape[0]), dtype=np.int64)
        _walk(beta, c1beta, prune_genus, out, True)
        return out

    def _normalize_numba(rows):
        rows = np.array(rows, dtype=np.int64, copy=True)
        if rows.ndim != 2 or rows.shape[1] <= 2:
            return rows
        return _normalize_rows(rows)


def blowup_splits(beta, c1beta, prune_genus=True, backend=None):
    """Parts (d1; m1...) with 1 <= d1 < d of a class on P^2 blown up at k points.

    Rows satisfy 0 <= m1_i <= d1 and 0 <= m_i - m1_i <= d - d1, both parts have
    positive anticanonical degree and, if ``prune_genus``, nonnegative
    arithmetic genus.  Rows come out in lexicographic order.
    """
    backend = backend or BACKEND
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is unavailable")
        return _splits_numba(beta, int(c1beta), bool(prune_genus))
    return _splits_numpy(beta, int(c1beta), bool(prune_genus))


def normalize_blowup_rows(rows, backend=None):
    """Sort multiplicities descending and apply Cremona moves until m1+m2+m3 <= d."""
    backend = backend or BACKEND
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is unavailable")
        return _normalize_numba(rows)
    return _normalize_numpy(rows)


def quadric_splits(beta):
    a, b = int(beta[0]), int(beta[1])
    aa, bb = np.meshgrid(np.arange(a + 1), np.arange(b + 1), indexing="ij")
    rows = np.stack([aa.ravel(), bb.ravel()], axis=1).astype(np.int64)
    keep = ((rows[:, 0] + rows[:, 1]) > 0) & ((rows[:, 0] < a) | (rows[:, 1] < b))
    return rows[keep]
