"""Genus-one curves with fixed j-invariant.

For a class beta with genus-0 count n0 and delta(beta) point conditions:

    CR   = (c1.beta - 2) n0                   ghost-torus correction
    RT1  = (beta.beta) n0                     genus-one symplectic invariant
    n1j  = RT1 - CR over |Aut|  =  2 g_beta n0 / |Aut|

``n1j`` is kept as a Fraction: the division by |Aut| need not be integral
for the special orders 4 and 6.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalConsistencyError, ValidationError
from .gw0 import n0 as _n0, _resolve_memo
from .lattice import (
    CurveClass,
    _check,
    arithmetic_genus,
    c1_pairing,
    delta,
    format_class,
    intersect,
    pairing_sum_identity,
)

AUT_PRESETS = {"generic": 2, "j1728": 4, "j0": 6}

COLUMNS = ("class", "delta", "genus", "n0", "CR", "RT1", "aut", "n1j")


def aut_order(preset):
    """|Aut| of a pointed genus-one curve: preset name or explicit positive integer."""
    if isinstance(preset, str):
        key = preset.strip().lower()
        if key in AUT_PRESETS:
            return AUT_PRESETS[key]
        try:
            preset = int(key)
        except ValueError:
            raise ValidationError(
                f"unknown automorphism preset {preset!r}; use generic, j1728, j0 or an integer") from None
    if isinstance(preset, bool) or not isinstance(preset, int):
        raise ValidationError(f"automorphism order must be an integer, got {preset!r}")
    if preset < 1:
        raise ValidationError(f"automorphism order must be >= 1, got {preset}")
    return preset


def correction_term(surface, beta, n0_val):
    return (c1_pairing(surface, beta) - 2) * n0_val


def rt1(surface, beta, n0_val):
    return intersect(surface, beta, beta) * n0_val


def rt1_via_pairing(surface, beta, n0_val):
    """RT1 through the genus reduction sum over the full cohomology basis."""
    return n0_val * pairing_sum_identity(surface, beta)


def rt0_with_divisors(surface, beta, ei, ej, n0_val):
    return n0_val * intersect(surface, beta, ei) * intersect(surface, beta, ej)


def format_rational(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class GenusOneReport:
    surface_id: str
    class_string: str
    beta: CurveClass
    delta: int
    genus: int
    n0: int
    correction: int
    rt1: int
    aut_order: int
    n1j: Fraction

    @property
    def integral(self):
        return self.n1j.denominator == 1

    def identity_holds(self):
        return self.rt1 == self.aut_order * self.n1j + self.correction

    def row(self):
        """Values in COLUMNS order, as strings."""
        return [self.class_string, str(self.delta), str(self.genus), str(self.n0),
                str(self.correction), str(self.rt1), str(self.aut_order), format_rational(self.n1j)]

    def as_dict(self):
        return dict(zip(COLUMNS, (self.class_string, self.delta, self.genus, self.n0,
                                  self.correction, self.rt1, self.aut_order,
                                  int(self.n1j) if self.integral else format_rational(self.n1j))))

    def describe(self):
        lines = [f"surface   {self.surface_id}",
                 f"class     {self.class_string}"]
        lines += [f"{name:<9} {value}" for name, value in zip(COLUMNS[1:], self.row()[1:])]
        if not self.integral:
            lines.append("note      n1j is not an integer for this automorphism order")
        return "\n".join(lines)


def n1j(surface, beta, aut, memo=None, *, normalize=None, prune_genus=None):
    """Fixed-j genus-one count as an exact Fraction, with its full report."""
    memo = _resolve_memo(memo, normalize, prune_genus)
    beta = _check(surface, beta)
    aut = aut_order(aut)
    count = _n0(surface, beta, memo)
    g = arithmetic_genus(surface, beta)
    value = Fraction(2 * g * count, aut)
    report = GenusOneReport(
        surface_id=surface.id,
        class_string=format_class(surface, beta),
        beta=beta,
        delta=delta(surface, beta),
        genus=g,
        n0=count,
        correction=correction_term(surface, beta, count),
        rt1=rt1(surface, beta, count),
        aut_order=aut,
        n1j=value,
    )
    if not report.identity_holds():
        raise InternalConsistencyError(
            f"RT1 = |Aut| n1j + CR fails for {report.class_string}: "
            f"{report.rt1} != {aut}*{value} + {report.correction}")
    if report.rt1 != rt1_via_pairing(surface, beta, count):
        raise InternalConsistencyError(f"genus reduction disagrees for {report.class_string}")
    return value, report


def decomposition_identity_check(surface, beta, aut, memo=None, **mode):
    memo = _resolve_memo(memo, mode.get("normalize"), mode.get("prune_genus"))
    beta = _check(surface, beta)
    aut = aut_order(aut)
    count = _n0(surface, beta, memo)
    value = Fraction(2 * arithmetic_genus(surface, beta) * count, aut)
    return rt1(surface, beta, count) == aut * value + correction_term(surface, beta, count)
