"""Property suites behind ``dpcurves verify``.

Each suite runs at a fixed desk-scale bound and returns a :class:`SuiteResult`
counting individual checks.  Randomised suites take a seed, so reruns are
byte-identical.
"""

import random
from dataclasses import dataclass, field

from .genus1 import aut_order, correction_term, n1j, rt1, rt1_via_pairing
from .gw0 import MemoTable, consistency_check, kontsevich_p2, n0, usable_pairs
from .lattice import (
    CurveClass,
    SurfaceKind,
    c1_pairing,
    candidate_filter,
    cremona_once,
    delta,
    enumerate_classes,
    format_class,
    make_surface,
    weyl_normalize,
)

SUITES = ("p2-oracle", "wdvv-pairs", "blowdown", "weyl", "quadric-bl2", "pipeline-identity")


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def check(self, cond, message):
        self.checks += 1
        if not cond:
            self.failures.append(message)

    def summary(self):
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}: {self.checks} checks, {len(self.failures)} failures"


def blowup(k):
    return make_surface(SurfaceKind.P2_BLOWUP, k)


def all_surfaces():
    return [blowup(k) for k in range(9)] + [make_surface(SurfaceKind.QUADRIC)]


def p2_oracle(max_degree=8):
    res = SuiteResult("p2-oracle")
    p2 = blowup(0)
    memo = MemoTable()
    for d in range(1, max_degree + 1):
        got, want = n0(p2, (d,), memo), kontsevich_p2(d)
        res.check(got == want, f"d={d}: recursion {got} != Kontsevich {want}")
    return res


def overdetermined_classes(max_c1=9):
    """Classes with delta >= 3 on Bl_0..Bl_4 and the quadric."""
    out = []
    for surface in [blowup(k) for k in range(5)] + [make_surface(SurfaceKind.QUADRIC)]:
        for beta in enumerate_classes(surface, max_c1):
            if delta(surface, beta) >= 3:
                out.append((surface, beta))
    return out


def wdvv_pairs(max_c1=9):
    res = SuiteResult("wdvv-pairs")
    memos = {}
    for surface, beta in overdetermined_classes(max_c1):
        memo = memos.setdefault(surface.id, MemoTable())
        res.check(consistency_check(surface, beta, usable_pairs(surface), memo),
                  f"{surface.id} {format_class(surface, beta)}: divisor pairs disagree")
    return res


def _raw_classes(surface, max_c1, rng, per_class=2):
    """Normal forms plus a few random coordinate permutations of each."""
    out = []
    for beta in enumerate_classes(surface, max_c1):
        out.append(beta)
        if surface.is_blowup and surface.k >= 2:
            for _ in range(per_class):
                m = list(beta.coords[1:])
                rng.shuffle(m)
                out.append(CurveClass((beta.coords[0], *m)))
    return out


def blowdown(max_k=5, max_c1=8, seed=0):
    res = SuiteResult("blowdown")
    rng = random.Random(seed)
    memo = MemoTable(normalized=False)
    for k in range(1, max_k + 1):
        big, small = blowup(k), blowup(k - 1)
        for beta in _raw_classes(small, max_c1, rng, per_class=1):
            if beta.coords[0] == 0:
                continue
            lifted = CurveClass(beta.coords + (0,))
            a, b = n0(big, lifted, memo), n0(small, beta, memo)
            res.check(a == b, f"{format_class(big, lifted)}: {a} != {b} on {small.id}")
    return res


def weyl(max_k=5, max_c1=8, seed=0):
    res = SuiteResult("weyl")
    rng = random.Random(seed)
    memo = MemoTable(normalized=False)
    for k in range(2, max_k + 1):
        surface = blowup(k)
        for beta in enumerate_classes(surface, max_c1):
            base = n0(surface, beta, memo)
            m = list(beta.coords[1:])
            rng.shuffle(m)
            perm = CurveClass((beta.coords[0], *m))
            res.check(n0(surface, perm, memo) == base,
                      f"{surface.id} permutation {format_class(surface, perm)} of {format_class(surface, beta)}")
            if k >= 3:
                image = cremona_once(surface, perm)
                res.check(n0(surface, image, memo) == base,
                          f"{surface.id} Cremona image {format_class(surface, image)} of {format_class(surface, perm)}")
                res.check(weyl_normalize(surface, image) == weyl_normalize(surface, beta),
                          f"{surface.id} normal form of Cremona image")
    return res


def quadric_bl2(max_total=6):
    res = SuiteResult("quadric-bl2")
    quadric, bl2 = make_surface(SurfaceKind.QUADRIC), blowup(2)
    memo = MemoTable()
    for a in range(max_total + 1):
        for b in range(max_total + 1 - a):
            if a == b == 0:
                continue
            x, y = n0(quadric, (a, b), memo), n0(bl2, (a + b, a, b), memo)
            res.check(x == y, f"({a},{b}): quadric {x} != Bl2 {y}")
    return res


def random_candidates(count, seed=0, max_c1=6):
    """``count`` (surface, class) pairs spread over all del Pezzo surfaces."""
    rng = random.Random(seed)
    pools = {s.id: (s, _raw_classes(s, max_c1, rng, per_class=1)) for s in all_surfaces()}
    ids = sorted(pools)
    out = []
    while len(out) < count:
        surface, pool = pools[ids[len(out) % len(ids)]]
        beta = rng.choice(pool)
        if candidate_filter(surface, beta):
            out.append((surface, beta))
    return out


def pipeline_identity(count=200, seed=0):
    res = SuiteResult("pipeline-identity")
    memos = {}
    rng = random.Random(seed + 1)
    for surface, beta in random_candidates(count, seed):
        memo = memos.setdefault(surface.id, MemoTable())
        aut = aut_order(rng.choice(["generic", "j1728", "j0"]))
        value, report = n1j(surface, beta, aut, memo)
        count0 = report.n0
        tag = f"{surface.id} {report.class_string} aut={aut}"
        res.check(rt1(surface, beta, count0) == aut * value + correction_term(surface, beta, count0),
                  f"{tag}: RT1 != aut*n1j + CR")
        res.check(rt1_via_pairing(surface, beta, count0) == rt1(surface, beta, count0),
                  f"{tag}: genus reduction mismatch")
        res.check(c1_pairing(surface, beta) - 1 == report.delta, f"{tag}: delta")
    return res


RUNNERS = {
    "p2-oracle": p2_oracle,
    "wdvv-pairs": wdvv_pairs,
    "blowdown": blowdown,
    "weyl": weyl,
    "quadric-bl2": quadric_bl2,
    "pipeline-identity": pipeline_identity,
}


def run_verify_suite(name):
    try:
        runner = RUNNERS[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    return runner()
