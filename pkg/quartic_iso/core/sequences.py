"""
Recurrent Sequences Module - u_j, v_j attached to a unit of trace t and norm -1

    u_0 = 0, u_1 = 1, u_{j+2} = t*u_{j+1} + u_j
    v_0 = 2, v_1 = t, v_{j+2} = t*v_{j+1} + v_j
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

from quartic_iso.core.arith import is_perfect_square, squarefree_part
from quartic_iso.core.errors import DomainError
from quartic_iso.core.quadfield import QuadInt, QuadraticField
from quartic_iso.utils.logging_config import get_logger

logger = get_logger(__name__)

UNIT_NORM = -1


@dataclass(frozen=True)
class LucasParams:
    """Recurrence coefficient t; characteristic polynomial x^2 - t*x - 1"""

    t: int

    def __post_init__(self) -> None:
        if self.t < 1:
            raise DomainError(f"Recurrence coefficient must be positive, got {self.t}", {"t": self.t})

    @property
    def unit_norm(self) -> int:
        return UNIT_NORM

    @property
    def discriminant(self) -> int:
        """t^2 + 4, never a square for t >= 1"""
        return self.t * self.t + 4

    @cached_property
    def _decomposition(self) -> tuple[int, int]:
        return squarefree_part(self.discriminant)

    @property
    def d(self) -> int:
        """Squarefree part of t^2 + 4"""
        return self._decomposition[0]

    @property
    def z(self) -> int:
        """Cofactor with t^2 + 4 = d*z^2"""
        return self._decomposition[1]

    @cached_property
    def field(self) -> QuadraticField:
        return QuadraticField(self.d)

    @cached_property
    def omega(self) -> QuadInt:
        """(t + sqrt(t^2 + 4))/2"""
        return QuadInt(self.field, self.t, self.z)

    def u_via_omega(self, j: int) -> int:
        """(omega^j - conj(omega)^j)/(omega - conj(omega)) computed in the quadratic field"""
        w = self.omega**j
        difference = w - w.conj()  # = B*sqrt(d)/2 with B = difference.b
        # omega - conj(omega) = z*sqrt(d)
        return difference.b // (2 * self.z)


class SquareClass(str, Enum):
    SQUARE = "SQUARE"
    D_SQUARE = "D_SQUARE"
    NEITHER = "NEITHER"


@dataclass(frozen=True, slots=True)
class SequencePair:
    """(u_j, v_j) with v^2 - (t^2 + 4)*u^2 = 4*(-1)^j"""

    params: LucasParams
    j: int
    u: int
    v: int

    def satisfies_conjugate_identity(self) -> bool:
        return self.v * self.v - self.params.discriminant * self.u * self.u == 4 * (-1) ** self.j


def iter_terms(params: LucasParams, count: int) -> list[SequencePair]:
    """Pairs (u_j, v_j) for j = 0 .. count-1"""
    t = params.t
    u_prev, u_cur = 0, 1
    v_prev, v_cur = 2, t
    pairs = []
    for j in range(count):
        pairs.append(SequencePair(params, j, u_prev, v_prev))
        u_prev, u_cur = u_cur, t * u_cur + u_prev
        v_prev, v_cur = v_cur, t * v_cur + v_prev
    return pairs


def uv_terms(params: LucasParams, j: int) -> tuple[int, int]:
    """Exact (u_j, v_j) by iteration"""
    if j < 0:
        raise DomainError(f"Sequence index must be nonnegative, got {j}", {"j": j})
    t = params.t
    u_prev, u_cur = 0, 1
    v_prev, v_cur = 2, t
    for _ in range(j):
        u_prev, u_cur = u_cur, t * u_cur + u_prev
        v_prev, v_cur = v_cur, t * v_cur + v_prev
    return u_prev, v_prev


def u_term(params: LucasParams, j: int) -> int:
    return uv_terms(params, j)[0]


def v_term(params: LucasParams, j: int) -> int:
    return uv_terms(params, j)[1]


Matrix = tuple[int, int, int, int]


def _mat_mul(x: Matrix, y: Matrix, modulus: int) -> Matrix:
    return (
        (x[0] * y[0] + x[1] * y[2]) % modulus,
        (x[0] * y[1] + x[1] * y[3]) % modulus,
        (x[2] * y[0] + x[3] * y[2]) % modulus,
        (x[2] * y[1] + x[3] * y[3]) % modulus,
    )


def uv_mod(params: LucasParams, j: int, modulus: int) -> tuple[int, int]:
    """(u_j mod M, v_j mod M) in O(log j) steps.

    [[t, 1], [1, 0]]^j = [[u_{j+1}, u_j], [u_j, u_{j-1}]] and v_j = 2*u_{j+1} - t*u_j.
    """
    if j < 0:
        raise DomainError(f"Sequence index must be nonnegative, got {j}", {"j": j})
    if modulus < 1:
        raise DomainError(f"Modulus must be positive, got {modulus}", {"modulus": modulus})

    result: Matrix = (1 % modulus, 0, 0, 1 % modulus)
    base: Matrix = (params.t % modulus, 1 % modulus, 1 % modulus, 0)
    exponent = j
    while exponent:
        if exponent & 1:
            result = _mat_mul(result, base, modulus)
        base = _mat_mul(base, base, modulus)
        exponent >>= 1

    u_next, u_j = result[0], result[1]
    return u_j % modulus, (2 * u_next - params.t * u_j) % modulus


def classify_square(value: int, d: int) -> SquareClass:
    """SQUARE if value = k^2, D_SQUARE if value = d*k^2, else NEITHER"""
    if value < 1:
        raise DomainError(f"classify_square needs a positive value, got {value}", {"value": value})
    if d < 2:
        raise DomainError(f"classify_square needs d >= 2, got {d}", {"d": d})
    if is_perfect_square(value)[0]:
        return SquareClass.SQUARE
    if value % d == 0 and is_perfect_square(value // d)[0]:
        return SquareClass.D_SQUARE
    return SquareClass.NEITHER


ODD_SQUARE_FAMILY = "b^2, b odd"


@dataclass(frozen=True, slots=True)
class CohnException:
    """(r, s, a) with P_r(a)*P_s(a) a square, 0 < r < s, a odd"""

    r: int
    s: int
    a: int | None  # None stands for the family a = b^2, b odd

    @property
    def pattern(self) -> str:
        return ODD_SQUARE_FAMILY if self.a is None else str(self.a)

    def matches(self, r: int, s: int, a: int) -> bool:
        if (r, s) != (self.r, self.s) or a % 2 == 0:
            return False
        if self.a is None:
            return is_perfect_square(a)[0]
        return a == self.a


_COHN_TABLE: tuple[CohnException, ...] = (
    CohnException(1, 2, None),
    CohnException(1, 12, 1),
    CohnException(2, 12, 1),
    CohnException(3, 6, 1),
    CohnException(3, 6, 3),
)


def cohn_exceptions() -> list[CohnException]:
    """The five exceptional families of Cohn's theorem (a trusted table)"""
    return list(_COHN_TABLE)


def is_cohn_exception(r: int, s: int, a: int) -> bool:
    return any(entry.matches(r, s, a) for entry in _COHN_TABLE)


def cohn_product(r: int, s: int, a: int) -> int:
    """P_r(a) * P_s(a) for the recurrence with coefficient a"""
    params = LucasParams(a)
    return u_term(params, r) * u_term(params, s)


def find_square_terms(params: LucasParams, max_index: int, d: int) -> list[tuple[int, SquareClass]]:
    """Odd j <= max_index with u_j a square or d times a square"""
    found = []
    for pair in iter_terms(params, max_index + 1):
        if pair.j % 2 == 0:
            continue
        label = classify_square(pair.u, d)
        if label is not SquareClass.NEITHER:
            found.append((pair.j, label))
    return found


def divisibility_residue(params: LucasParams, r1: int, r2: int, p: int) -> int:
    """v_{r2} mod p for r1 | r2 with r2/r1 even; +-2 mod p whenever p | v_{r1}"""
    if r1 < 1 or r2 % r1 != 0 or (r2 // r1) % 2 != 0:
        raise DomainError(
            f"Need r1 | r2 with r2/r1 even, got r1={r1}, r2={r2}",
            {"r1": r1, "r2": r2},
        )
    return uv_mod(params, r2, p)[1]


@dataclass
class IdentityReport:
    """Outcome of the sequence identity checks"""

    t: int
    max_index: int
    checked: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def check_identities(params: LucasParams, max_index: int) -> IdentityReport:
    """Check conjugate, addition, doubling and gcd identities for indices up to max_index"""
    report = IdentityReport(t=params.t, max_index=max_index)
    pairs = iter_terms(params, 2 * max_index + 1)
    u = [pair.u for pair in pairs]
    v = [pair.v for pair in pairs]

    report.checked.append("conjugate")
    for pair in pairs[: max_index + 1]:
        if not pair.satisfies_conjugate_identity():
            report.failures.append(f"conjugate identity fails at j={pair.j}")

    report.checked.append("addition")
    for r in range(max_index + 1):
        for s in range(r, max_index + 1 - r):
            if 2 * u[r + s] != u[r] * v[s] + u[s] * v[r]:
                report.failures.append(f"addition law fails at r={r}, s={s}")

    report.checked.append("doubling")
    for r in range(max_index + 1):
        if u[2 * r] != u[r] * v[r]:
            report.failures.append(f"u doubling fails at r={r}")
        if v[2 * r] != v[r] * v[r] - 2 * UNIT_NORM**r:
            report.failures.append(f"v doubling fails at r={r}")

    report.checked.append("gcd")
    gcd_limit = min(max_index, 60)
    for a in range(1, gcd_limit + 1):
        for b in range(a, gcd_limit + 1):
            if math.gcd(u[a], u[b]) != u[math.gcd(a, b)]:
                report.failures.append(f"gcd law fails at a={a}, b={b}")

    if report.failures:
        logger.warning(
            f"{len(report.failures)} sequence identity failures",
            extra={"t": params.t, "stage": "identities"},
        )
    return report
