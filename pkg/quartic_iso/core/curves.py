"""
Curves Module - quartic curves C1, C2 and Weierstrass curves E1, E2, E3 attached to t

    C1: y^2 = (t^2 + 4)*x^4 - 4            E1: Y^2 = X^3 - 4(t^2 + 4)*X
    C2: y^2 = d^2*(t^2 + 4)*x^4 - 4        E2: Y^2 = X^3 - 4d^2(t^2 + 4)*X
                                           E3: Y^2 = X^3 - 4(t^2 + 4)^3*X

with t^2 + 4 = d*z^2. Odd-index squares u_j = x^2 (resp. u_j = d*x^2) give the integer points
(x, v_j) on C1 (resp. C2). All arithmetic is over exact rationals.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

from quartic_iso.core.arith import factorize, fourth_power_free_part, is_perfect_square, isqrt
from quartic_iso.core.errors import DomainError
from quartic_iso.core.quadfield import (
    FundamentalUnit,
    QuadInt,
    express_as_unit_power,
    fundamental_unit,
)
from quartic_iso.core.sequences import LucasParams, SquareClass, classify_square, iter_terms
from quartic_iso.utils.logging_config import PerformanceTimer, get_logger
from quartic_iso.utils.workers import run_chunks, split_range

logger = get_logger(__name__)

QUARTIC_CONSTANT = -4
POINT_CHUNK = 256


class CurveName(str, Enum):
    C1 = "C1"
    C2 = "C2"
    E1 = "E1"
    E2 = "E2"
    E3 = "E3"


def _check_t(t: int) -> None:
    if t < 1:
        raise DomainError(f"Curve parameter t must be positive, got {t}", {"t": t})


def cofactor_for(t: int, d: int) -> int:
    """z with t^2 + 4 = d*z^2; DomainError when no such integer exists"""
    _check_t(t)
    disc = t * t + 4
    if d < 1 or disc % d != 0:
        raise DomainError(f"t^2 + 4 = {disc} is not d*z^2 for d={d}", {"t": t, "d": d})
    square, z = is_perfect_square(disc // d)
    if not square or z is None:
        raise DomainError(f"t^2 + 4 = {disc} is not d*z^2 for d={d}", {"t": t, "d": d})
    return z


@dataclass(frozen=True, slots=True)
class QuarticCurveSpec:
    """y^2 = A*x^4 + B"""

    name: CurveName
    t: int
    d: int
    A: int
    B: int = QUARTIC_CONSTANT

    @classmethod
    def c1(cls, t: int) -> "QuarticCurveSpec":
        _check_t(t)
        return cls(CurveName.C1, t, 1, t * t + 4)

    @classmethod
    def c2(cls, t: int, d: int) -> "QuarticCurveSpec":
        cofactor_for(t, d)
        return cls(CurveName.C2, t, d, d * d * (t * t + 4))

    def to_json(self) -> dict[str, str]:
        return {"name": self.name.value, "t": str(self.t), "d": str(self.d), "A": str(self.A), "B": str(self.B)}


@dataclass(frozen=True, slots=True)
class WeierstrassCurveSpec:
    """Y^2 = X^3 + a4*X"""

    name: CurveName
    t: int
    d: int
    a4: int

    @classmethod
    def e1(cls, t: int) -> "WeierstrassCurveSpec":
        _check_t(t)
        return cls(CurveName.E1, t, 1, -4 * (t * t + 4))

    @classmethod
    def e2(cls, t: int, d: int) -> "WeierstrassCurveSpec":
        cofactor_for(t, d)
        return cls(CurveName.E2, t, d, -4 * d * d * (t * t + 4))

    @classmethod
    def e3(cls, t: int) -> "WeierstrassCurveSpec":
        _check_t(t)
        return cls(CurveName.E3, t, 1, -4 * (t * t + 4) ** 3)

    def to_json(self) -> dict[str, str]:
        return {"name": self.name.value, "t": str(self.t), "d": str(self.d), "a4": str(self.a4)}


CurveSpec = QuarticCurveSpec | WeierstrassCurveSpec


@dataclass(frozen=True, slots=True)
class RationalPoint:
    """Affine point with exact rational coordinates, or the point at infinity"""

    x: Fraction | None = None
    y: Fraction | None = None

    @classmethod
    def of(cls, x: int | Fraction, y: int | Fraction) -> "RationalPoint":
        return cls(Fraction(x), Fraction(y))

    @classmethod
    def infinity(cls) -> "RationalPoint":
        return cls()

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def coords(self) -> tuple[Fraction, Fraction]:
        if self.x is None or self.y is None:
            raise DomainError("The point at infinity has no affine coordinates")
        return self.x, self.y

    def is_integral(self) -> bool:
        return self.is_infinity or all(c.denominator == 1 for c in self.coords())

    def to_json(self) -> dict[str, Any]:
        if self.is_infinity:
            return {"infinity": True}
        x, y = self.coords()
        return {"x": str(x), "y": str(y)}

    def __str__(self) -> str:
        if self.is_infinity:
            return "O"
        x, y = self.coords()
        return f"({x}, {y})"


def on_curve(spec: CurveSpec, pt: RationalPoint) -> bool:
    if pt.is_infinity:
        # O lies on the Weierstrass models only
        return isinstance(spec, WeierstrassCurveSpec)
    x, y = pt.coords()
    if isinstance(spec, QuarticCurveSpec):
        return y * y == spec.A * x**4 + spec.B
    return y * y == x**3 + spec.a4 * x


def _require_on_curve(spec: CurveSpec, *points: RationalPoint) -> None:
    for pt in points:
        if not on_curve(spec, pt):
            raise DomainError(f"{pt} is not on {spec.name.value}", {"t": spec.t, "point": str(pt)})


def phi_map(which: int, t: int, d: int, pt: RationalPoint) -> RationalPoint:
    """Degree-2 map C_i -> E_i, (x, y) -> (A*x^2, A*x*y)"""
    if which == 1:
        source, target = QuarticCurveSpec.c1(t), WeierstrassCurveSpec.e1(t)
    elif which == 2:
        source, target = QuarticCurveSpec.c2(t, d), WeierstrassCurveSpec.e2(t, d)
    else:
        raise DomainError(f"phi_map is defined for which in {{1, 2}}, got {which}", {"which": which})
    _require_on_curve(source, pt)

    x, y = pt.coords()
    image = RationalPoint(source.A * x * x, source.A * x * y)
    _require_on_curve(target, image)
    return image


def psi_map(t: int, d: int, pt: RationalPoint) -> RationalPoint:
    """Isomorphism E2 -> E3, (X, Y) -> (x0^2*X, x0^3*Y) with t^2 + 4 = x0^2*d"""
    x0 = cofactor_for(t, d)
    source, target = WeierstrassCurveSpec.e2(t, d), WeierstrassCurveSpec.e3(t)
    _require_on_curve(source, pt)
    if pt.is_infinity:
        return pt

    x, y = pt.coords()
    image = RationalPoint(x0 * x0 * x, x0**3 * y)
    _require_on_curve(target, image)
    return image


def ec_neg(spec: WeierstrassCurveSpec, pt: RationalPoint) -> RationalPoint:
    _require_on_curve(spec, pt)
    if pt.is_infinity:
        return pt
    x, y = pt.coords()
    return RationalPoint(x, -y)


def _add_unchecked(a4: int, p: RationalPoint, q: RationalPoint) -> RationalPoint:
    if p.is_infinity:
        return q
    if q.is_infinity:
        return p
    x1, y1 = p.coords()
    x2, y2 = q.coords()
    if x1 == x2:
        if y1 != y2 or y1 == 0:
            return RationalPoint.infinity()
        slope = (3 * x1 * x1 + a4) / (2 * y1)
    else:
        slope = (y2 - y1) / (x2 - x1)
    x3 = slope * slope - x1 - x2
    y3 = slope * (x1 - x3) - y1
    return RationalPoint(x3, y3)


def ec_add(spec: WeierstrassCurveSpec, p: RationalPoint, q: RationalPoint) -> RationalPoint:
    """Chord-tangent addition; O is the identity"""
    _require_on_curve(spec, p, q)
    return _add_unchecked(spec.a4, p, q)


def ec_mul(spec: WeierstrassCurveSpec, k: int, pt: RationalPoint) -> RationalPoint:
    """k*P by double-and-add; negative k multiplies -P"""
    _require_on_curve(spec, pt)
    if k < 0:
        return ec_mul(spec, -k, ec_neg(spec, pt))
    result = RationalPoint.infinity()
    current = pt
    while k:
        if k & 1:
            result = _add_unchecked(spec.a4, result, current)
        current = _add_unchecked(spec.a4, current, current)
        k >>= 1
    return result


def point_order(spec: WeierstrassCurveSpec, pt: RationalPoint, max_order: int = 12) -> int | None:
    """Least k <= max_order with k*P = O, or None"""
    _require_on_curve(spec, pt)
    current = pt
    for k in range(1, max_order + 1):
        if current.is_infinity:
            return k
        current = _add_unchecked(spec.a4, current, pt)
    return None


def torsion_preconditions(t: int, d: int) -> bool:
    """4*d^2*(t^2 + 4) is not a perfect square"""
    if t < 1 or d < 1:
        raise DomainError(f"torsion_preconditions needs t, d >= 1, got t={t}, d={d}", {"t": t, "d": d})
    return not is_perfect_square(4 * d * d * (t * t + 4))[0]


def root_number_E1(t: int) -> int:
    """-1 unless 8 | t"""
    _check_t(t)
    return 1 if t % 8 == 0 else -1


def root_number_E3(t: int) -> int:
    _check_t(t)
    return -1 if t % 2 else 1


def root_number_table(t_max: int) -> list[dict[str, str]]:
    if t_max < 1:
        raise DomainError(f"t_max must be positive, got {t_max}", {"t_max": t_max})
    return [
        {"t": str(t), "E1": str(root_number_E1(t)), "E3": str(root_number_E3(t))}
        for t in range(1, t_max + 1)
    ]


# Local root numbers at infinity and 2 used in the case t = 0 (mod 8)
W_INFINITY = -1
W_TWO = -1


@dataclass
class BsDerivationReport:
    """Consistency checks behind the E1 root number for 8 | t"""

    t: int
    r: int
    s: int
    bad_primes: list[int] = field(default_factory=list)
    image_on_model: bool = False
    discrepancies: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.discrepancies

    def to_json(self) -> dict[str, Any]:
        return {
            "t": str(self.t),
            "r": str(self.r),
            "s": str(self.s),
            "r_mod_16": str(self.r % 16),
            "bad_primes": [str(p) for p in self.bad_primes],
            "w_infinity": str(W_INFINITY),
            "w_2": str(W_TWO),
            "image_on_model": self.image_on_model,
            "discrepancies": list(self.discrepancies),
            "passed": self.passed,
        }


def bs_derivation_check(t: int) -> BsDerivationReport:
    """(t/2)^2 + 1 = r*s^4 must have r = 1 (mod 16) and no prime factor = 3 (mod 4).

    Also pushes (t^2 + 4, t(t^2 + 4)) from E1 to Y^2 = X^3 - r*X by
    (X, Y) -> (X/(2s)^2, Y/(2s)^3) and checks the image lies on that model.
    """
    _check_t(t)
    if t % 8 != 0:
        raise DomainError(f"bs_derivation_check needs t = 0 (mod 8), got {t}", {"t": t})

    r, s = fourth_power_free_part((t // 2) ** 2 + 1)
    report = BsDerivationReport(t=t, r=r, s=s)
    if r % 16 != 1:
        report.discrepancies.append(f"r = {r} is {r % 16} mod 16")

    report.bad_primes = [p for p in factorize(r).primes() if p % 4 == 3]
    if report.bad_primes:
        report.discrepancies.append(f"r has prime factors = 3 (mod 4): {report.bad_primes}")

    disc = t * t + 4
    scale = Fraction(2 * s)
    image = RationalPoint(Fraction(disc) / scale**2, Fraction(t * disc) / scale**3)
    twist = WeierstrassCurveSpec(CurveName.E1, t, 1, -r)
    report.image_on_model = on_curve(twist, image)
    if not report.image_on_model:
        report.discrepancies.append(f"{image} is not on Y^2 = X^3 - {r}X")

    if report.discrepancies:
        logger.warning(
            f"Root number derivation discrepancy for t={t}: {'; '.join(report.discrepancies)}",
            extra={"t": t, "stage": "root-number"},
        )
    return report


def _points_in_chunk(payload: tuple[int, int, int]) -> list[tuple[int, int]]:
    lower, upper, a = payload
    points = []
    for x in range(lower, upper):
        square, y = is_perfect_square(a * x**4 + QUARTIC_CONSTANT)
        if square and y is not None:
            points.append((x, y))
    return points


def integer_points_search(spec: QuarticCurveSpec, x_bound: int, workers: int = 1) -> list[tuple[int, int]]:
    """All (x, y) with 0 <= x <= x_bound, y >= 0 on y^2 = A*x^4 - 4, sorted by x"""
    if x_bound < 1:
        raise DomainError(f"x_bound must be positive, got {x_bound}", {"x_bound": x_bound})
    parts = max(workers, -(-(x_bound + 1) // POINT_CHUNK))
    chunks = [(lower, upper, spec.A) for lower, upper in split_range(0, x_bound + 1, parts)]
    with PerformanceTimer(logger, f"{spec.name.value} point search", t=spec.t, workers=workers):
        found = run_chunks(_points_in_chunk, chunks, workers)
    return [point for chunk in found for point in chunk]


def point_to_index(t: int, pt: RationalPoint, on_c2: bool = False, d: int = 1) -> int | None:
    """Odd j with (y + c*x^2*sqrt(t^2 + 4))/2 = omega^j, c = d on C2 and 1 on C1.

    Inverse of the sequence-to-curve map; None when the point comes from no odd power.
    """
    if pt.is_infinity or not pt.is_integral():
        return None
    params = LucasParams(t)
    x, y = (int(c) for c in pt.coords())
    coefficient = (d if on_c2 else 1) * x * x * params.z
    try:
        alpha = QuadInt(params.field, abs(y), coefficient)
    except DomainError:
        return None
    if not alpha.is_unit():
        return None

    base = FundamentalUnit(elem=params.omega, t=t, nrm=-1)
    decomposition = express_as_unit_power(alpha, base)
    if decomposition is None:
        return None
    sign, j = decomposition
    if sign != 1 or j < 1 or j % 2 == 0:
        return None
    return j


@dataclass(frozen=True, slots=True)
class CorrespondenceEntry:
    j: int
    label: SquareClass
    curve: CurveName
    x: int
    y: int

    def to_json(self) -> dict[str, str]:
        return {
            "j": str(self.j),
            "class": self.label.value,
            "curve": self.curve.value,
            "x": str(self.x),
            "y": str(self.y),
        }


@dataclass
class CorrespondenceReport:
    """Odd-index squares against brute-force integer points on C1 and C2"""

    t: int
    d: int
    max_index: int
    x_bound: int
    omega_fundamental: bool
    entries: list[CorrespondenceEntry] = field(default_factory=list)
    points: dict[str, list[tuple[int, int]]] = field(default_factory=dict)
    beyond_index_range: list[tuple[str, int, int]] = field(default_factory=list)
    unmatched: list[tuple[str, int, int]] = field(default_factory=list)
    missing: list[tuple[str, int, int]] = field(default_factory=list)

    @property
    def claim(self) -> str:
        return "bijection" if self.omega_fundamental else "injection"

    @property
    def passed(self) -> bool:
        if self.missing:
            return False
        return not self.unmatched if self.omega_fundamental else True

    def to_json(self) -> dict[str, Any]:
        def triples(items: list[tuple[str, int, int]]) -> list[dict[str, str]]:
            return [{"curve": c, "x": str(x), "y": str(y)} for c, x, y in items]

        return {
            "t": str(self.t),
            "d": str(self.d),
            "max_index": str(self.max_index),
            "x_bound": str(self.x_bound),
            "omega_fundamental": self.omega_fundamental,
            "claim": self.claim,
            "entries": [entry.to_json() for entry in self.entries],
            "points": {
                name: [{"x": str(x), "y": str(y)} for x, y in pts] for name, pts in sorted(self.points.items())
            },
            "beyond_index_range": triples(self.beyond_index_range),
            "unmatched": triples(self.unmatched),
            "missing": triples(self.missing),
            "passed": self.passed,
        }


def square_point_bijection(
    t: int,
    d: int,
    max_index: int,
    x_bound: int,
    workers: int = 1,
) -> CorrespondenceReport:
    """Pair odd-index squares u_j = x^2 (C1) and u_j = d*x^2 (C2) with their points (x, v_j).

    When omega = (t + sqrt(t^2 + 4))/2 is the fundamental unit every brute-force point within
    x_bound must come from some odd j; otherwise only the injection is checked.
    """
    cofactor_for(t, d)
    if max_index < 0:
        raise DomainError(f"max_index must be nonnegative, got {max_index}", {"max_index": max_index})
    params = LucasParams(t)
    omega_fundamental = fundamental_unit(params.field).elem == params.omega
    report = CorrespondenceReport(t, d, max_index, x_bound, omega_fundamental)

    for pair in iter_terms(params, max_index + 1):
        if pair.j % 2 == 0 or pair.u == 0:
            continue
        label = classify_square(pair.u, d)
        if label is SquareClass.SQUARE:
            report.entries.append(CorrespondenceEntry(pair.j, label, CurveName.C1, isqrt(pair.u), pair.v))
        elif label is SquareClass.D_SQUARE:
            report.entries.append(CorrespondenceEntry(pair.j, label, CurveName.C2, isqrt(pair.u // d), pair.v))

    curves = {CurveName.C1: QuarticCurveSpec.c1(t), CurveName.C2: QuarticCurveSpec.c2(t, d)}
    images = {(entry.curve, entry.x, entry.y) for entry in report.entries}
    for name, spec in curves.items():
        points = integer_points_search(spec, x_bound, workers)
        report.points[name.value] = points
        for x, y in points:
            if (name, x, y) in images:
                continue
            j = point_to_index(t, RationalPoint.of(x, y), on_c2=name is CurveName.C2, d=d)
            if j is not None and j > max_index:
                report.beyond_index_range.append((name.value, x, y))
            else:
                report.unmatched.append((name.value, x, y))

    found = {(name, x, y) for name in curves for x, y in report.points[name.value]}
    for entry in report.entries:
        if entry.x <= x_bound and (entry.curve, entry.x, entry.y) not in found:
            report.missing.append((entry.curve.value, entry.x, entry.y))

    if not report.passed:
        logger.warning(
            f"Square/point correspondence failed for t={t}, d={d}",
            extra={"t": t, "d": d, "stage": "correspondence"},
        )
    return report
