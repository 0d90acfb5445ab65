"""Intersection lattices of del Pezzo surfaces.

A surface is either P^2 blown up at k <= 8 general points, with H_2 basis
(L, E_1, ..., E_k), or the quadric P^1 x P^1 with basis (F_1, F_2).  A class
on a blowup has coordinates (d; m_1, ..., m_k) meaning dL - sum m_i E_i, so
the exceptional curve E_i itself is (0; ..., -1, ...).  Quadric classes are
bidegrees (a, b).
"""

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import (
    InternalConsistencyError,
    NotDelPezzoError,
    RankMismatchError,
    UnsupportedSurfaceError,
    ValidationError,
)


class SurfaceKind(enum.Enum):
    P2_BLOWUP = "p2blowup"
    QUADRIC = "quadric"


@dataclass(frozen=True)
class CurveClass:
    """An integral homology class, stored as its coordinate tuple."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __add__(self, other):
        other = as_class(other)
        if len(other) != len(self):
            raise RankMismatchError(f"cannot add classes of rank {len(self)} and {len(other)}")
        return CurveClass(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other):
        return self + (-as_class(other))

    def __neg__(self):
        return CurveClass(-a for a in self.coords)

    def is_zero(self):
        return not any(self.coords)

    def __repr__(self):
        return f"CurveClass{self.coords}"


def as_class(beta):
    if isinstance(beta, CurveClass):
        return beta
    if isinstance(beta, np.ndarray):
        beta = beta.tolist()
    return CurveClass(tuple(beta))


def _rational_inverse(mat):
    n = len(mat)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise InternalConsistencyError("intersection pairing is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


@dataclass(frozen=True)
class SurfaceModel:
    kind: SurfaceKind
    k: int
    rank: int
    pairing: tuple
    c1: CurveClass
    cohomology_basis: tuple = field(repr=False)
    inverse_pairing: tuple = field(repr=False)

    @cached_property
    def id(self):
        """Surface identifier used in cache headers: ``p2xK`` or ``quadric``."""
        return "quadric" if self.kind is SurfaceKind.QUADRIC else f"p2x{self.k}"

    @property
    def is_blowup(self):
        return self.kind is SurfaceKind.P2_BLOWUP

    @cached_property
    def pairing_array(self):
        return np.array(self.pairing, dtype=np.int64)

    @cached_property
    def full_pairing(self):
        """Pairing g_ij on the whole cohomology basis (zero unless degrees sum to 4)."""
        n = self.rank + 2
        g = [[0] * n for _ in range(n)]
        g[0][n - 1] = g[n - 1][0] = 1
        for i in range(self.rank):
            for j in range(self.rank):
                g[i + 1][j + 1] = self.pairing[i][j]
        return tuple(tuple(row) for row in g)

    def divisor_basis(self):
        return [CurveClass(tuple(int(i == j) for j in range(self.rank))) for i in range(self.rank)]

    def line(self):
        if not self.is_blowup:
            raise UnsupportedSurfaceError("the line class exists only on blowups of P^2")
        return CurveClass((1,) + (0,) * self.k)

    def exceptional(self, i):
        """E_i for 1 <= i <= k."""
        if not self.is_blowup or not 1 <= i <= self.k:
            raise UnsupportedSurfaceError(f"no exceptional class E_{i} on {self.id}")
        coords = [0] * self.rank
        coords[i] = -1
        return CurveClass(coords)

    def __hash__(self):
        return hash((self.kind, self.k))

    def __eq__(self, other):
        return isinstance(other, SurfaceModel) and (self.kind, self.k) == (other.kind, other.k)


def make_surface(kind, k=0):
    """Build P^2 blown up at ``k`` points, or the quadric (``k`` ignored)."""
    kind = SurfaceKind(kind) if not isinstance(kind, SurfaceKind) else kind
    if kind is SurfaceKind.QUADRIC:
        pairing = ((0, 1), (1, 0))
        c1 = CurveClass((2, 2))
        labels = (("1", 0), ("F1", 2), ("F2", 2), ("pt", 4))
        k = 0
    else:
        if not isinstance(k, (int, np.integer)) or not 0 <= k <= 8:
            raise NotDelPezzoError(
                f"P^2 blown up at {k} points is not a del Pezzo surface (need 0 <= k <= 8)")
        k = int(k)
        n = k + 1
        pairing = tuple(tuple((1 if i == 0 else -1) if i == j else 0 for j in range(n))
                        for i in range(n))
        c1 = CurveClass((3,) + (1,) * k)
        labels = (("1", 0), ("L", 2)) + tuple((f"E{i}", 2) for i in range(1, k + 1)) + (("pt", 4),)
    rank = len(pairing)
    surface = SurfaceModel(
        kind=kind,
        k=k,
        rank=rank,
        pairing=pairing,
        c1=c1,
        cohomology_basis=labels,
        inverse_pairing=(),
    )
    object.__setattr__(surface, "inverse_pairing", _rational_inverse(surface.full_pairing))
    return surface


_SURFACE_RE = re.compile(r"^p2(?:x(-?\d+))?$")


def parse_surface(text):
    """``p2``, ``p2xK`` or ``quadric`` (also ``p1xp1``)."""
    t = text.strip().lower()
    if t in ("quadric", "p1xp1"):
        return make_surface(SurfaceKind.QUADRIC)
    m = _SURFACE_RE.match(t)
    if not m:
        raise ValidationError(f"unknown surface {text!r}; expected p2, p2xK or quadric")
    return make_surface(SurfaceKind.P2_BLOWUP, int(m.group(1) or 0))


_INT = r"-?\d+"
_BLOWUP_CLASS_RE = re.compile(rf"^({_INT});((?:{_INT})(?:,{_INT})*)?$")
_QUADRIC_CLASS_RE = re.compile(rf"^({_INT}),({_INT})$")


def parse_class(surface, text):
    """Parse ``d;m1,...,mk`` (blowups, ``d;`` for P^2) or ``a,b`` (quadric)."""
    if surface.is_blowup:
        m = _BLOWUP_CLASS_RE.match(text)
        if m:
            coords = [int(m.group(1))] + ([int(x) for x in m.group(2).split(",")] if m.group(2) else [])
    else:
        m = _QUADRIC_CLASS_RE.match(text)
        if m:
            coords = [int(m.group(1)), int(m.group(2))]
    if not m:
        raise ValidationError(f"malformed class string {text!r} for surface {surface.id}")
    if len(coords) != surface.rank:
        raise RankMismatchError(
            f"class {text!r} has {len(coords)} coordinates; {surface.id} needs {surface.rank}")
    return CurveClass(coords)


def format_class(surface, beta):
    c = as_class(beta).coords
    if surface.is_blowup:
        return f"{c[0]};" + ",".join(str(x) for x in c[1:])
    return ",".join(str(x) for x in c)


def _check(surface, beta):
    beta = as_class(beta)
    if len(beta) != surface.rank:
        raise RankMismatchError(
            f"class of rank {len(beta)} does not belong to {surface.id} (rank {surface.rank})")
    return beta


def intersect(surface, beta1, beta2):
    b1 = _check(surface, beta1).coords
    b2 = _check(surface, beta2).coords
    q = surface.pairing
    return sum(b1[i] * q[i][j] * b2[j] for i in range(surface.rank) for j in range(surface.rank)
               if q[i][j])


def c1_pairing(surface, beta):
    return intersect(surface, surface.c1, beta)


def delta(surface, beta):
    """Number of generic point conditions cut out on class ``beta``."""
    return c1_pairing(surface, beta) - 1


def arithmetic_genus(surface, beta):
    num = intersect(surface, beta, beta) - c1_pairing(surface, beta) + 2
    if num % 2:
        raise InternalConsistencyError(f"odd genus numerator {num} for {as_class(beta)}")
    return num // 2


def cremona_once(surface, beta):
    """Quadratic Cremona move on the first three multiplicities."""
    beta = _check(surface, beta)
    if not surface.is_blowup or surface.k < 3:
        raise UnsupportedSurfaceError(f"Cremona move needs at least 3 blown-up points, not {surface.id}")
    d, a, b, c, *rest = beta.coords
    return CurveClass((2 * d - a - b - c, d - b - c, d - a - c, d - a - b, *rest))


def weyl_normalize(surface, beta):
    beta = _check(surface, beta)
    if not surface.is_blowup:
        a, b = beta.coords
        return CurveClass((max(a, b), min(a, b)))
    d, *m = beta.coords
    while True:
        m.sort(reverse=True)
        if surface.k < 3 or m[0] + m[1] + m[2] <= d:
            return CurveClass([d] + m)
        a, b, c = m[:3]
        d, m[0], m[1], m[2] = 2 * d - a - b - c, d - b - c, d - a - c, d - a - b


def is_exceptional_form(surface, beta):
    """True for E_i = (0; 0..-1..0) on a blowup."""
    c = as_class(beta).coords
    return (surface.is_blowup and c[0] == 0 and sorted(c[1:]) == [-1] + [0] * (surface.k - 1))


def candidate_filter(surface, beta, *, prune_genus=True):
    """Whether ``beta`` can carry a nonzero genus-0 count.

    ``prune_genus=False`` drops only the g >= 0 requirement; it exists so the
    genus prune itself can be checked against the unpruned recursion.
    """
    beta = _check(surface, beta)
    c = beta.coords
    if surface.is_blowup:
        if c[0] == 0:
            return is_exceptional_form(surface, beta)
        if c[0] < 1 or any(x < 0 or x > c[0] for x in c[1:]):
            return False
    else:
        if c[0] < 0 or c[1] < 0 or beta.is_zero():
            return False
    if delta(surface, beta) < 0:
        return False
    return not prune_genus or arithmetic_genus(surface, beta) >= 0


def split_rows(surface, beta, *, prune_genus=True, backend=None):
    """All first parts beta1 of ordered candidate splits, as an int64 array.

    Rows are sorted lexicographically.  This is the array form behind
    :func:`decompositions`.
    """
    beta = _check(surface, beta)
    arr = np.array(beta.coords, dtype=np.int64)
    if surface.is_blowup:
        body = _kernels.blowup_splits(arr, c1_pairing(surface, beta), prune_genus, backend)
        extra = []
        for i in range(1, surface.k + 1):
            e = np.zeros(surface.rank, dtype=np.int64)
            e[i] = -1
            extra.append(e)
            extra.append(arr - e)
        extra = np.array(extra, dtype=np.int64).reshape(-1, surface.rank)
        rows = np.concatenate([body, _both_candidates(surface, arr, extra, prune_genus)], axis=0)
    else:
        rows = _both_candidates(surface, arr, _kernels.quadric_splits(arr), prune_genus)
    if rows.shape[0] == 0:
        return rows
    order = np.lexsort(rows.T[::-1])
    return rows[order]


def candidate_mask(surface, rows, *, prune_genus=True):
    """Vectorised :func:`candidate_filter` over the rows of an int array."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, surface.rank)
    q = surface.pairing_array
    self_int = np.einsum("ij,jk,ik->i", rows, q, rows)
    c1 = rows @ (q @ np.array(surface.c1.coords, dtype=np.int64))
    ok = c1 >= 1
    if prune_genus:
        ok &= self_int - c1 + 2 >= 0
    if surface.is_blowup:
        d, m = rows[:, 0], rows[:, 1:]
        cone = (d >= 1) & np.all(m >= 0, axis=1) & np.all(m <= d[:, None], axis=1)
        exc = ((d == 0) & (np.sum(m == -1, axis=1) == 1)
               & (np.sum(m == 0, axis=1) == surface.k - 1))
        return exc | (cone & ok)
    return (rows[:, 0] >= 0) & (rows[:, 1] >= 0) & np.any(rows != 0, axis=1) & ok


def _both_candidates(surface, arr, rows, prune_genus):
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, surface.rank)
    ok = (candidate_mask(surface, rows, prune_genus=prune_genus)
          & candidate_mask(surface, arr[None, :] - rows, prune_genus=prune_genus))
    return rows[ok]


def decompositions(surface, beta, *, prune_genus=True):
    """Ordered pairs (beta1, beta2), both nonzero candidates, beta1 + beta2 = beta."""
    beta = _check(surface, beta)
    rows = split_rows(surface, beta, prune_genus=prune_genus)
    return [(CurveClass(r), beta - CurveClass(r)) for r in rows.tolist()]


def pairing_sum_identity(surface, beta):
    """sum_{i,j} g^{ij} (beta.e_i)(beta.e_j) over the full cohomology basis.

    Only divisor basis elements meet a curve class in a number; for the
    degree-0 and degree-4 elements the pairing with beta is taken as zero.
    """
    beta = _check(surface, beta)
    basis = surface.divisor_basis()
    vals = [0] + [intersect(surface, beta, e) for e in basis] + [0]
    ginv = surface.inverse_pairing
    total = sum(ginv[i][j] * vals[i] * vals[j] for i in range(len(vals)) for j in range(len(vals)))
    if total.denominator != 1:
        raise InternalConsistencyError(f"non-integral pairing sum {total}")
    return int(total)


@dataclass(frozen=True)
class DimensionQuery:
    """Constraint data: genus, complex dimension m, marked/unmarked insertion degrees."""

    g: int
    m: int
    alpha_degs: tuple
    gamma_degs: tuple
    beta: CurveClass

    def __post_init__(self):
        object.__setattr__(self, "alpha_degs", tuple(self.alpha_degs))
        object.__setattr__(self, "gamma_degs", tuple(self.gamma_degs))
        object.__setattr__(self, "beta", as_class(self.beta))

    def validate(self):
        if self.g < 0 or self.m < 1:
            raise ValidationError(f"need g >= 0 and m >= 1, got g={self.g}, m={self.m}")
        allowed = set(range(0, 2 * self.m + 1, 2))
        for deg in self.alpha_degs + self.gamma_degs:
            if deg not in allowed:
                raise ValidationError(f"insertion degree {deg} not in {sorted(allowed)}")
        if len(self.alpha_degs) + 2 * self.g < 3:
            raise ValidationError("need k + 2g >= 3 marked points")


def dimension_check(query, surface):
    query.validate()
    m = query.m
    lhs = sum(2 * m - a for a in query.alpha_degs) + sum(2 * m - 2 - c for c in query.gamma_degs)
    rhs = 2 * m * (1 - query.g) + 2 * c1_pairing(surface, query.beta)
    return lhs == rhs


def genus_one_point_query(surface, beta, extra_points=0):
    """One marked point plus delta-1 unmarked points (shifted by ``extra_points``)."""
    n = delta(surface, beta) - 1 + extra_points
    if n < 0:
        raise ValidationError(f"class {as_class(beta)} has too few point conditions for this query")
    return DimensionQuery(g=1, m=2, alpha_degs=(0,), gamma_degs=(0,) * n, beta=beta)


def enumerate_classes(surface, max_c1, *, normal_only=True, prune_genus=True):
    """Candidate classes with c1.beta <= max_c1, in lexicographic order.

    With ``normal_only`` only Weyl normal forms are returned.
    """
    out = []
    if surface.is_blowup:
        k = surface.k
        out.extend(surface.exceptional(i) for i in range(1, k + 1))
        for d in range(1, 3 * max_c1 + 1):
            q_max = (d - 1) * (d - 2) if prune_genus else None
            for m in _multiplicities(k, d, 3 * d - max_c1, q_max, normal_only):
                out.append(CurveClass((d,) + m))
    else:
        for a in range(0, max_c1 // 2 + 1):
            for b in range(0, max_c1 // 2 + 1 - a):
                out.append(CurveClass((a, b)))
    keep = []
    for beta in out:
        if not candidate_filter(surface, beta, prune_genus=prune_genus):
            continue
        if c1_pairing(surface, beta) > max_c1:
            continue
        if normal_only and weyl_normalize(surface, beta) != beta:
            continue
        keep.append(beta)
    return sorted(keep, key=lambda b: b.coords)


def _multiplicities(k, cap, min_sum, q_max, descending):
    """Tuples with 0 <= m_i <= cap, sum >= min_sum and sum m(m-1) <= q_max."""
    if k == 0:
        if min_sum <= 0:
            yield ()
        return
    for first in range(cap + 1):
        q = first * (first - 1)
        if q_max is not None and q > q_max:
            break
        rest_cap = first if descending else cap
        if first + rest_cap * (k - 1) < min_sum:
            continue
        for rest in _multiplicities(k - 1, rest_cap, min_sum - first,
                                    None if q_max is None else q_max - q, descending):
            yield (first,) + rest
