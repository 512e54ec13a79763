"""
Field Isomorphism Module - decides K_m = K_n for the simplest quartic fields

K_n is the splitting field of f_n(x) = x^4 - n*x^3 - 6*x^2 + n*x + 1. Its unique quadratic
subfield is Q(sqrt(n^2 + 16)) = Q(sqrt(d)) with n^2 + 16 = d*y^2, and K_m = K_n exactly when
both share d and alpha = x*y*d*(x*sqrt(d) + m)*(y*sqrt(d) + n) is a square in Q(sqrt(d)).
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from functools import cache
from itertools import combinations
from typing import Any

import sympy

from quartic_iso.core.arith import is_perfect_square, squarefree_part
from quartic_iso.core.errors import DomainError, InvalidIndexError
from quartic_iso.core.quadfield import (
    FundamentalUnit,
    QuadInt,
    QuadraticField,
    express_as_unit_power,
    fundamental_unit,
    sqrt_in_field,
)
from quartic_iso.core.sequences import SquareClass, classify_square
from quartic_iso.utils.logging_config import PerformanceTimer, get_logger, log_stage
from quartic_iso.utils.workers import run_chunks, split_range

logger = get_logger(__name__)

EXCLUDED_INDICES = frozenset({0, 3})


def validate_index(n: int) -> None:
    """Reject indices outside the family: n < 1, or n = 3 where n^2 + 16 is a square"""
    if n < 1 or n in EXCLUDED_INDICES:
        raise InvalidIndexError(f"Index n={n} is not a valid simplest quartic index", {"n": n})


@dataclass(frozen=True, slots=True)
class QuadInvariant:
    """n^2 + 16 = d*y^2 with d squarefree"""

    n: int
    d: int
    y: int

    @property
    def field(self) -> QuadraticField:
        return QuadraticField(self.d)

    def to_json(self) -> dict[str, str]:
        return {"n": str(self.n), "d": str(self.d), "y": str(self.y)}


@cache
def quad_invariant(n: int) -> QuadInvariant:
    """Squarefree d and cofactor y with n^2 + 16 = d*y^2"""
    validate_index(n)
    d, y = squarefree_part(n * n + 16)
    return QuadInvariant(n=n, d=d, y=y)


@dataclass(frozen=True, slots=True)
class QuarticPolynomial:
    """f_n(x) = x^4 - n*x^3 - 6*x^2 + n*x + 1"""

    n: int

    @property
    def coefficients(self) -> tuple[int, int, int, int, int]:
        return (1, -self.n, -6, self.n, 1)

    def as_poly(self, x: sympy.Symbol) -> sympy.Poly:
        return sympy.Poly(list(self.coefficients), x, domain=sympy.QQ)


class EqualityStage(str, Enum):
    SAME_INDEX = "same-index"
    DIFFERENT_D = "different-d"
    NON_SQUARE_ALPHA = "non-square-alpha"
    SQUARE_ALPHA = "square-alpha"


@dataclass(frozen=True, slots=True)
class FieldEquality:
    """Outcome of the Lemma-style test K_m = K_n"""

    m: int
    n: int
    equal: bool
    stage: EqualityStage
    alpha: QuadInt | None = None
    witness: QuadInt | None = None

    def to_json(self) -> dict[str, Any]:
        return {
            "m": str(self.m),
            "n": str(self.n),
            "equal": self.equal,
            "stage": self.stage.value,
            "alpha": self.alpha.to_json() if self.alpha is not None else None,
            "witness": self.witness.to_json() if self.witness is not None else None,
        }


def lemma_alpha(inv_m: QuadInvariant, inv_n: QuadInvariant) -> QuadInt:
    """alpha = x*y*d*(x*sqrt(d) + m)*(y*sqrt(d) + n) for invariants sharing d"""
    if inv_m.d != inv_n.d:
        raise DomainError(
            f"Indices {inv_m.n} and {inv_n.n} have different quadratic subfields",
            {"d_m": inv_m.d, "d_n": inv_n.d},
        )
    k = inv_m.field
    first = k.from_parts(inv_m.n, inv_m.y)
    second = k.from_parts(inv_n.n, inv_n.y)
    return first * second * (inv_m.y * inv_n.y * inv_m.d)


def kummer_radicand(n: int) -> QuadInt:
    """theta_n = 2*(y^2*d + n*y*sqrt(d)); K_n = k_n(sqrt(theta_n))"""
    inv = quad_invariant(n)
    return inv.field.from_parts(2 * inv.y * inv.y * inv.d, 2 * n * inv.y)


def _equality_from_invariants(inv_m: QuadInvariant, inv_n: QuadInvariant) -> FieldEquality:
    if inv_m.d != inv_n.d:
        return FieldEquality(inv_m.n, inv_n.n, False, EqualityStage.DIFFERENT_D)
    alpha = lemma_alpha(inv_m, inv_n)
    witness = sqrt_in_field(alpha)
    if inv_m.n == inv_n.n:
        return FieldEquality(inv_m.n, inv_n.n, True, EqualityStage.SAME_INDEX, alpha, witness)
    if witness is None:
        return FieldEquality(inv_m.n, inv_n.n, False, EqualityStage.NON_SQUARE_ALPHA, alpha)
    return FieldEquality(inv_m.n, inv_n.n, True, EqualityStage.SQUARE_ALPHA, alpha, witness)


def fields_equal(m: int, n: int) -> FieldEquality:
    """Decide K_m = K_n; on equality the witness squares to alpha"""
    result = _equality_from_invariants(quad_invariant(m), quad_invariant(n))
    log_stage(logger, logging.DEBUG, f"K_{m} vs K_{n}: {result.stage.value}", m=m, n=n, stage="lemma")
    return result


def galois_orbit_check(n: int) -> bool:
    """Check sigma: rho -> (rho - 1)/(rho + 1) in Q[x]/(f_n).

    Verifies (x + 1)^4 * f_n((x - 1)/(x + 1)) = 0 mod f_n, that sigma^2 and sigma^3 agree with
    -1/rho and (1 + rho)/(1 - rho), and that sigma^4 is the identity.
    """
    validate_index(n)
    x = sympy.Symbol("x")
    f = QuarticPolynomial(n).as_poly(x)
    one = sympy.Poly(1, x, domain=sympy.QQ)
    rho = sympy.Poly(x, x, domain=sympy.QQ)

    cleared = sympy.Poly(0, x, domain=sympy.QQ)
    for k, coefficient in enumerate(reversed(QuarticPolynomial(n).coefficients)):
        cleared += coefficient * (rho - one) ** k * (rho + one) ** (4 - k)
    if not cleared.rem(f).is_zero:
        return False

    # sigma(rho) as a residue: (rho - 1) * (rho + 1)^(-1) mod f_n
    inverse = (rho + one).invert(f)
    sigma = ((rho - one) * inverse).rem(f)

    def apply(g: sympy.Poly) -> sympy.Poly:
        # g(sigma(rho)) reduced mod f_n
        return g.compose(sigma).rem(f)

    if not f.compose(sigma).rem(f).is_zero:
        return False
    sigma2 = apply(sigma)
    sigma3 = apply(sigma2)
    sigma4 = apply(sigma3)
    checks = (
        (rho * sigma2 + one).rem(f).is_zero,
        ((one - rho) * sigma3 - (one + rho)).rem(f).is_zero,
        (sigma4 - rho).rem(f).is_zero,
    )
    return all(checks)


class HypothesisCase(str, Enum):
    A = "A"
    B = "B"
    NONE = "NONE"


@dataclass(frozen=True, slots=True)
class HypothesisReport:
    n: int
    case: HypothesisCase
    d: int
    trace_t: int
    trace_parity: str
    unit_norm: int

    def to_json(self) -> dict[str, Any]:
        return {
            "n": str(self.n),
            "case": self.case.value,
            "d": str(self.d),
            "trace_t": str(self.trace_t),
            "trace_parity": self.trace_parity,
            "unit_norm": str(self.unit_norm),
        }


def theorem_hypotheses(n: int) -> HypothesisReport:
    """Case A: n = 2 (mod 4). Case B: n = 8 (mod 16) with odd fundamental-unit trace."""
    inv = quad_invariant(n)
    eps = fundamental_unit(inv.field)
    parity = "odd" if eps.t % 2 else "even"
    if n % 4 == 2:
        case = HypothesisCase.A
    elif n % 16 == 8 and parity == "odd":
        case = HypothesisCase.B
    else:
        case = HypothesisCase.NONE
    return HypothesisReport(n, case, inv.d, eps.t, parity, eps.nrm)


def _bucket_chunk(bounds: tuple[int, int]) -> dict[int, list[int]]:
    start, stop = bounds
    buckets: dict[int, list[int]] = defaultdict(list)
    for n in range(start, stop):
        if n in EXCLUDED_INDICES:
            continue
        buckets[quad_invariant(n).d].append(n)
    return dict(buckets)


def duplicate_search(limit: int, workers: int = 1) -> list[tuple[int, int]]:
    """All pairs m < n <= limit with K_m = K_n.

    Indices are bucketed by the squarefree part d of n^2 + 16; only indices sharing a bucket
    are compared. Bucket maps from the worker chunks are merged in chunk order.
    """
    if limit < 2:
        raise DomainError(f"Search limit must be at least 2, got {limit}", {"limit": limit})

    with PerformanceTimer(logger, "duplicate search", stage="search", workers=workers):
        chunks = split_range(1, limit + 1, max(1, workers) * 4)
        merged: dict[int, list[int]] = defaultdict(list)
        for partial in run_chunks(_bucket_chunk, chunks, workers):
            for d, members in partial.items():
                merged[d].extend(members)

        pairs = []
        for d in sorted(merged):
            members = sorted(merged[d])
            if len(members) < 2:
                continue
            log_stage(logger, logging.DEBUG, f"Testing bucket of {len(members)} indices", d=d, stage="bucket")
            for m, n in combinations(members, 2):
                if _equality_from_invariants(quad_invariant(m), quad_invariant(n)).equal:
                    pairs.append((m, n))

    pairs.sort()
    logger.info(f"Found {len(pairs)} duplicate pairs up to {limit}", extra={"stage": "search"})
    return pairs


def d_matched_candidates(d: int, limit: int) -> list[int]:
    """All m <= limit with m^2 + 16 = d*x^2 for some x (m may have a smaller squarefree part)"""
    found = []
    x = 1
    while d * x * x - 16 <= limit * limit:
        value = d * x * x - 16
        if value > 0:
            square, m = is_perfect_square(value)
            if square and m is not None and m != 3 and m <= limit:
                found.append(m)
        x += 1
    return found


def partner_search(n: int, limit: int) -> list[int]:
    """All m <= limit, m != n, with K_m = K_n, scanning only the d-matched candidates"""
    inv = quad_invariant(n)
    partners = []
    for m in d_matched_candidates(inv.d, limit):
        if m == n:
            continue
        if _equality_from_invariants(quad_invariant(m), inv).equal:
            partners.append(m)
    return sorted(partners)


def unit_exponent(n: int, eps: FundamentalUnit | None = None) -> tuple[int, int]:
    """For even n with d = 5 (mod 8): (y*sqrt(d) + n)/4 = eps^s, s odd.

    Returns:
        tuple: (s, u_s) where u_s = y_1 / b_eps and eps = (a_eps + b_eps*sqrt(d))/2
    """
    inv = quad_invariant(n)
    if n % 2 != 0 or inv.d % 8 != 5:
        raise DomainError(
            f"Unit decomposition needs even n with d = 5 (mod 8), got n={n}, d={inv.d}",
            {"n": n, "d": inv.d},
        )
    eps = eps or fundamental_unit(inv.field)
    unit = QuadInt(inv.field, n // 2, inv.y // 2)
    decomposition = express_as_unit_power(unit, eps)
    if decomposition is None or decomposition[0] != 1:
        raise DomainError(f"(y*sqrt(d) + n)/4 is not a power of eps for n={n}", {"n": n})
    s = decomposition[1]
    return s, (inv.y // 2) // eps.elem.b


@dataclass(frozen=True, slots=True)
class ReductionProfile:
    """Exponents r, s and the square class of u_r*u_s for a pair sharing d"""

    m: int
    n: int
    d: int
    r: int
    s: int
    u_r: int
    u_s: int
    product_class: SquareClass

    def to_json(self) -> dict[str, str]:
        return {
            "m": str(self.m),
            "n": str(self.n),
            "d": str(self.d),
            "r": str(self.r),
            "s": str(self.s),
            "u_r": str(self.u_r),
            "u_s": str(self.u_s),
            "product_class": self.product_class.value,
        }


def reduction_profile(m: int, n: int) -> ReductionProfile:
    """u_r*u_s data for two even indices sharing a quadratic subfield with d = 5 (mod 8)"""
    inv_m, inv_n = quad_invariant(m), quad_invariant(n)
    if inv_m.d != inv_n.d:
        raise DomainError(
            f"Indices {m} and {n} have different quadratic subfields",
            {"d_m": inv_m.d, "d_n": inv_n.d},
        )
    eps = fundamental_unit(inv_n.field)
    r, u_r = unit_exponent(m, eps)
    s, u_s = unit_exponent(n, eps)
    return ReductionProfile(m, n, inv_n.d, r, s, u_r, u_s, classify_square(u_r * u_s, inv_n.d))
