"""Genus-0 counts n_0(beta) on del Pezzo surfaces.

The main relation comes from WDVV associativity applied to the insertions
(A, B, pt, pt) plus delta-3 further points, for divisors A, B and
delta = c1.beta - 1 >= 3::

    (A.B) n(beta) = sum_{beta1+beta2=beta} n(beta1) n(beta2) (beta1.beta2) (B.beta2)
                    * [ (A.beta1) C(delta-3, delta1-1) - (A.beta2) C(delta-3, delta1-2) ]

Classes with delta <= 2 are seeded as follows:

* (-1)-classes (beta.beta = -1, c1.beta = 1) count 1; the line on P^2 and
  the rulings on the quadric count 1;
* a zero multiplicity is blown down (n is unchanged on Bl_{k-1});
* a multiplicity-one point is traded for an ordinary point condition:
  n_{Bl_k}(d; m, 1) = n_{Bl_{k-1}}(d; m);
* otherwise WDVV with four divisor insertions and delta-1 points
  (:func:`wdvv_four_point`) solves for n.

All counts are Python ints.
"""

import threading
from functools import lru_cache
from math import comb

import numpy as np

from . import _kernels
from .errors import InternalConsistencyError, ValidationError
from .lattice import (
    CurveClass,
    _check,
    arithmetic_genus,
    c1_pairing,
    candidate_filter,
    candidate_mask,
    delta,
    intersect,
    is_exceptional_form,
    make_surface,
    SurfaceKind,
    split_rows,
    weyl_normalize,
)


class MemoTable:
    """Exact genus-0 counts keyed by (surface id, class coordinates).

    ``normalized`` tables key on Weyl normal forms; the unnormalized mode keeps
    raw classes so invariance checks compare genuinely different recursions.
    Reads are lock-free; writes take a lock, and a value once stored never
    changes.
    """

    def __init__(self, normalized=True, prune_genus=True):
        self.normalized = normalized
        self.prune_genus = prune_genus
        self.hits = 0
        self.misses = 0
        self._entries = {}
        self._lock = threading.Lock()

    def get(self, surface_id, key):
        v = self._entries.get((surface_id, tuple(key)))
        if v is None:
            self.misses += 1
        else:
            self.hits += 1
        return v

    def put(self, surface_id, key, value):
        key = (surface_id, tuple(int(x) for x in key))
        value = int(value)
        if value < 0:
            raise InternalConsistencyError(f"negative count {value} for {key}")
        with self._lock:
            old = self._entries.setdefault(key, value)
        if old != value:
            raise InternalConsistencyError(f"memo entry {key} changed from {old} to {value}")

    def entries(self, surface_id=None):
        """{class coords: value}, for one surface or for all (keyed by the pair)."""
        if surface_id is None:
            return dict(self._entries)
        return {k: v for (sid, k), v in self._entries.items() if sid == surface_id}

    def surface_ids(self):
        return sorted({sid for sid, _ in self._entries})

    def __len__(self):
        return len(self._entries)

    def __contains__(self, item):
        return item in self._entries

    def __eq__(self, other):
        return isinstance(other, MemoTable) and self._entries == other._entries

    def __repr__(self):
        return (f"MemoTable({len(self)} entries, normalized={self.normalized}, "
                f"hits={self.hits}, misses={self.misses})")


def _resolve_memo(memo, normalize, prune_genus):
    if memo is None:
        return MemoTable(normalized=True if normalize is None else normalize,
                         prune_genus=True if prune_genus is None else prune_genus)
    if normalize is not None and normalize != memo.normalized:
        raise ValidationError("normalize flag disagrees with the memo table's mode")
    if prune_genus is not None and prune_genus != memo.prune_genus:
        raise ValidationError("prune_genus flag disagrees with the memo table's mode")
    return memo


def binom(n, r):
    if r < 0 or r > n or n < 0:
        return 0
    return comb(n, r)


@lru_cache(maxsize=None)
def kontsevich_p2(d):
    """Kontsevich's count of rational plane curves of degree d through 3d-1 points."""
    if not isinstance(d, int) or d < 1:
        raise ValidationError(f"degree must be a positive integer, got {d!r}")
    if d == 1:
        return 1
    total = 0
    for d1 in range(1, d):
        d2 = d - d1
        total += kontsevich_p2(d1) * kontsevich_p2(d2) * (
            d1 * d1 * d2 * d2 * binom(3 * d - 4, 3 * d1 - 2)
            - d1 ** 3 * d2 * binom(3 * d - 4, 3 * d1 - 1))
    return total


def nodal_members_in_pencil(n):
    """Singular members of a general pencil of plane curves of degree n.

    Euler characteristic of P^2 blown up at the n^2 base points, minus
    chi(P^1) times chi of a smooth fibre; each nodal fibre adds one.
    For cubics this is the count of rational curves in |-K| on a degree-1
    del Pezzo surface.
    """
    genus = (n - 1) * (n - 2) // 2
    chi_total = 3 + n * n
    return chi_total - 2 * (2 - 2 * genus)


def default_pair(surface):
    """Divisor pair with A.B = 1 used to solve the two-point relation."""
    if surface.is_blowup:
        line = surface.line()
        return line, line
    return CurveClass((1, 0)), CurveClass((0, 1))


def divisor_pool(surface):
    """A fixed pool of small divisor classes for overdetermination checks."""
    if not surface.is_blowup:
        return [CurveClass(c) for c in ((1, 0), (0, 1), (1, 1), (2, 1))]
    k = surface.k
    pool = [surface.line()]
    pool += [surface.exceptional(i) for i in range(1, k + 1)]
    pool += [surface.line() + surface.exceptional(i) for i in range(1, min(k, 2) + 1)]
    if k >= 2:
        pool.append(CurveClass((2, 1, 1) + (0,) * (k - 2)))
    if k >= 1:
        pool.append(surface.c1)
    return pool


@lru_cache(maxsize=4096)
def _split_data(surface, beta, normalized, prune_genus):
    beta = CurveClass(beta)
    rows1 = split_rows(surface, beta, prune_genus=prune_genus)
    rows2 = np.array(beta.coords, dtype=np.int64)[None, :] - rows1
    q = surface.pairing_array
    p12 = np.einsum("ij,jk,ik->i", rows1, q, rows2)
    d1 = rows1 @ (q @ np.array(surface.c1.coords, dtype=np.int64)) - 1
    if normalized:
        if surface.is_blowup:
            n1 = _kernels.normalize_blowup_rows(rows1)
            n2 = _kernels.normalize_blowup_rows(rows2)
        else:
            n1 = np.sort(rows1, axis=1)[:, ::-1]
            n2 = np.sort(rows2, axis=1)[:, ::-1]
        # a normal form can leave the candidate cone; its count is then zero
        live = (candidate_mask(surface, n1, prune_genus=prune_genus)
                & candidate_mask(surface, n2, prune_genus=prune_genus))
    else:
        n1, n2 = rows1, rows2
        live = np.ones(rows1.shape[0], dtype=bool)
    keys1 = [tuple(r) for r in n1.tolist()]
    keys2 = [tuple(r) for r in n2.tolist()]
    return rows1, rows2, p12, d1, keys1, keys2, live


def _pair_vectors(surface, rows, cls):
    v = surface.pairing_array @ np.array(cls.coords, dtype=np.int64)
    return rows @ v


def _fetch(surface, key, memo):
    v = memo._entries.get((surface.id, key))
    if v is None:
        return _lookup(surface, key, memo)
    memo.hits += 1
    return v


def wdvv_rhs(surface, beta, A, B, memo=None, *, normalize=None, prune_genus=None):
    """Right-hand side of the two-point WDVV relation; equals (A.B) n(beta)."""
    memo = _resolve_memo(memo, normalize, prune_genus)
    beta = _check(surface, beta)
    A, B = _check(surface, A), _check(surface, B)
    dl = delta(surface, beta)
    if dl < 3:
        raise ValidationError(f"two-point relation needs delta >= 3, class {beta} has {dl}")
    rows1, rows2, p12, d1, keys1, keys2, live = _split_data(
        surface, beta.coords, memo.normalized, memo.prune_genus)
    a1 = _pair_vectors(surface, rows1, A)
    a2 = _pair_vectors(surface, rows2, A)
    b2 = _pair_vectors(surface, rows2, B)
    n = dl - 3
    row = [comb(n, r) for r in range(n + 1)]
    total = 0
    for i in np.flatnonzero(live & (p12 != 0) & (b2 != 0)).tolist():
        e = int(d1[i])
        c = (int(a1[i]) * row[e - 1] if 1 <= e <= n + 1 else 0) - (
            int(a2[i]) * row[e - 2] if 2 <= e <= n + 2 else 0)
        if not c:
            continue
        x = _fetch(surface, keys1[i], memo)
        if not x:
            continue
        y = _fetch(surface, keys2[i], memo)
        total += x * y * int(p12[i]) * int(b2[i]) * c
    return total


def four_point_coefficient(surface, beta, A, B, C, D):
    ab = intersect(surface, A, B)
    cd = intersect(surface, C, D)
    ac = intersect(surface, A, C)
    bd = intersect(surface, B, D)
    pa, pb, pc, pd = (intersect(surface, X, beta) for X in (A, B, C, D))
    return ab * pc * pd + cd * pa * pb - ac * pb * pd - bd * pa * pc


def wdvv_four_point(surface, beta, A, B, C, D, memo=None, *, normalize=None, prune_genus=None):
    """WDVV with divisor insertions A, B | C, D and delta-1 points.

    Returns ``(coefficient, rhs)`` with ``coefficient * n(beta) == rhs``.
    Valid for delta >= 1.
    """
    memo = _resolve_memo(memo, normalize, prune_genus)
    beta = _check(surface, beta)
    dl = delta(surface, beta)
    if dl < 1:
        raise ValidationError(f"four-point relation needs delta >= 1, class {beta} has {dl}")
    rows1, rows2, p12, d1, keys1, keys2, live = _split_data(
        surface, beta.coords, memo.normalized, memo.prune_genus)
    a1, b1, c1, _ = (_pair_vectors(surface, rows1, X) for X in (A, B, C, D))
    _, b2, c2, d2 = (_pair_vectors(surface, rows2, X) for X in (A, B, C, D))
    weight = a1 * (c1 * b2 - b1 * c2) * d2
    n = dl - 1
    total = 0
    for i in np.flatnonzero(live & (p12 != 0) & (weight != 0)).tolist():
        c = binom(n, int(d1[i]))
        if not c:
            continue
        x = _fetch(surface, keys1[i], memo)
        if not x:
            continue
        y = _fetch(surface, keys2[i], memo)
        total += x * y * int(p12[i]) * int(weight[i]) * c
    return four_point_coefficient(surface, beta, A, B, C, D), total


def _four_point_quadruples(surface):
    pool = divisor_pool(surface)
    for X in pool:
        for Y in pool:
            yield X, X, Y, Y
    for A in pool:
        for B in pool:
            for C in pool:
                yield A, B, C, B


def _lower(surface, beta, i):
    """Drop blown-up point i (1-based) from a class on Bl_k."""
    smaller = make_surface(SurfaceKind.P2_BLOWUP, surface.k - 1)
    c = beta.coords
    return smaller, CurveClass(c[:i] + c[i + 1:])


def base_case(surface, beta, memo=None, *, normalize=None, prune_genus=None):
    """Count for classes below the two-point guard (delta <= 2); None otherwise."""
    memo = _resolve_memo(memo, normalize, prune_genus)
    beta = _check(surface, beta)
    dl = delta(surface, beta)
    if dl >= 3:
        return None
    if not candidate_filter(surface, beta, prune_genus=memo.prune_genus):
        return 0
    if intersect(surface, beta, beta) == -1 and dl == 0:
        return 1
    if not surface.is_blowup or surface.k == 0:
        # rulings (1,0), (0,1) and the line are the only candidates here
        return 1 if arithmetic_genus(surface, beta) == 0 else 0
    mults = beta.coords[1:]
    for target in (0, 1):
        if target in mults:
            smaller, reduced = _lower(surface, beta, mults.index(target) + 1)
            return n0(smaller, reduced, memo)
    if dl >= 1:
        for A, B, C, D in _four_point_quadruples(surface):
            coef = four_point_coefficient(surface, beta, A, B, C, D)
            if coef:
                _, rhs = wdvv_four_point(surface, beta, A, B, C, D, memo)
                value, rem = divmod(rhs, coef)
                if rem:
                    raise InternalConsistencyError(
                        f"four-point relation for {beta}: {rhs} not divisible by {coef}")
                return value
        raise InternalConsistencyError(f"no usable four-point relation for {beta}")
    if arithmetic_genus(surface, beta) < 0:
        return 0
    raise InternalConsistencyError(f"unexpected rigid class {beta} on {surface.id}")


def _lookup(surface, key, memo):
    v = memo.get(surface.id, key)
    if v is not None:
        return v
    beta = CurveClass(key)
    if not candidate_filter(surface, beta, prune_genus=memo.prune_genus):
        return 0
    v = _compute(surface, beta, memo)
    memo.put(surface.id, key, v)
    return v


def _compute(surface, beta, memo):
    v = base_case(surface, beta, memo)
    if v is not None:
        return v
    A, B = default_pair(surface)
    ab = intersect(surface, A, B)
    total = wdvv_rhs(surface, beta, A, B, memo)
    v, rem = divmod(total, ab)
    if rem:
        raise InternalConsistencyError(f"WDVV sum {total} for {beta} not divisible by {ab}")
    if v < 0:
        raise InternalConsistencyError(f"negative genus-0 count {v} for {beta} on {surface.id}")
    return v


def n0(surface, beta, memo=None, *, normalize=None, prune_genus=None):
    """Number of rational curves in class ``beta`` through delta(beta) general points."""
    memo = _resolve_memo(memo, normalize, prune_genus)
    beta = _check(surface, beta)
    if not candidate_filter(surface, beta, prune_genus=memo.prune_genus):
        return 0
    key = weyl_normalize(surface, beta) if memo.normalized else beta
    return _lookup(surface, key.coords, memo)


def consistency_check(surface, beta, pairs, memo=None, *, normalize=None, prune_genus=None):
    """Every divisor pair must give the same n(beta) through the two-point relation."""
    memo = _resolve_memo(memo, normalize, prune_genus)
    target = n0(surface, beta, memo)
    for A, B in pairs:
        ab = intersect(surface, A, B)
        if not ab:
            continue
        v, rem = divmod(wdvv_rhs(surface, beta, A, B, memo), ab)
        if rem or v != target:
            return False
    return True


def usable_pairs(surface):
    """All ordered pool pairs with nonzero intersection."""
    pool = divisor_pool(surface)
    return [(A, B) for A in pool for B in pool if intersect(surface, A, B)]
