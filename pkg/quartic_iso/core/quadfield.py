"""
Quadratic Field Module - exact arithmetic in the ring of integers of Q(sqrt(d)), d > 1
"""

from dataclasses import dataclass
from functools import cache
from typing import Any

from sympy.solvers.diophantine.diophantine import diop_DN

from quartic_iso.core.arith import iroot, is_perfect_square, squarefree_part
from quartic_iso.core.errors import DomainError, FieldMismatchError
from quartic_iso.utils.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class QuadraticField:
    """Real quadratic field Q(sqrt(d)) with d squarefree, d >= 2"""

    d: int

    def __post_init__(self) -> None:
        if self.d < 2:
            raise DomainError(f"Real quadratic field needs d >= 2, got {self.d}", {"d": self.d})
        free, cofactor = squarefree_part(self.d)
        if cofactor != 1:
            raise DomainError(f"d={self.d} is not squarefree", {"d": self.d, "squarefree_part": free})

    @property
    def half_integral(self) -> bool:
        """Whether the ring of integers contains (a + b*sqrt(d))/2 with a, b odd"""
        return self.d % 4 == 1

    def element(self, a: int, b: int) -> "QuadInt":
        """The element (a + b*sqrt(d))/2"""
        return QuadInt(self, a, b)

    def from_parts(self, rational: int, irrational: int) -> "QuadInt":
        """The element rational + irrational*sqrt(d)"""
        return QuadInt(self, 2 * rational, 2 * irrational)

    def one(self) -> "QuadInt":
        return QuadInt(self, 2, 0)

    def zero(self) -> "QuadInt":
        return QuadInt(self, 0, 0)


def _sign_of(a: int, b: int, d: int) -> int:
    """Sign of a + b*sqrt(d) with exact integer comparisons"""
    if a >= 0 and b >= 0:
        return 0 if a == 0 and b == 0 else 1
    if a <= 0 and b <= 0:
        return -1
    diff = a * a - d * b * b
    if a > 0:
        # a > 0 > b
        return (diff > 0) - (diff < 0)
    # a < 0 < b
    return (diff < 0) - (diff > 0)


@dataclass(frozen=True, slots=True)
class QuadInt:
    """The algebraic integer (a + b*sqrt(d))/2 of a real quadratic field"""

    field: QuadraticField
    a: int
    b: int

    def __post_init__(self) -> None:
        if self.field.half_integral:
            if (self.a - self.b) % 2 != 0:
                raise DomainError(
                    f"({self.a} + {self.b}*sqrt({self.field.d}))/2 is not integral",
                    {"a": self.a, "b": self.b, "d": self.field.d},
                )
        elif self.a % 2 != 0 or self.b % 2 != 0:
            raise DomainError(
                f"({self.a} + {self.b}*sqrt({self.field.d}))/2 is not integral",
                {"a": self.a, "b": self.b, "d": self.field.d},
            )

    def _check_field(self, other: "QuadInt") -> None:
        if self.field != other.field:
            raise FieldMismatchError(
                f"Cannot combine elements of Q(sqrt({self.field.d})) and Q(sqrt({other.field.d}))",
                {"left": self.field.d, "right": other.field.d},
            )

    def _coerce(self, other: "QuadInt | int") -> "QuadInt":
        if isinstance(other, int):
            return QuadInt(self.field, 2 * other, 0)
        self._check_field(other)
        return other

    def __add__(self, other: "QuadInt | int") -> "QuadInt":
        other = self._coerce(other)
        return QuadInt(self.field, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self) -> "QuadInt":
        return QuadInt(self.field, -self.a, -self.b)

    def __sub__(self, other: "QuadInt | int") -> "QuadInt":
        return self + (-self._coerce(other))

    def __mul__(self, other: "QuadInt | int") -> "QuadInt":
        if isinstance(other, int):
            return QuadInt(self.field, self.a * other, self.b * other)
        self._check_field(other)
        d = self.field.d
        # ((a1 + b1 r)/2)((a2 + b2 r)/2) = ((a1 a2 + d b1 b2) + (a1 b2 + a2 b1) r)/4
        a = self.a * other.a + d * self.b * other.b
        b = self.a * other.b + other.a * self.b
        return QuadInt(self.field, a // 2, b // 2)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "QuadInt":
        if exponent < 0:
            return self.inverse_unit() ** (-exponent)
        result = self.field.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conj(self) -> "QuadInt":
        return QuadInt(self.field, self.a, -self.b)

    def norm(self) -> int:
        """x * conj(x), an integer for integral x"""
        return (self.a * self.a - self.field.d * self.b * self.b) // 4

    def trace(self) -> int:
        """x + conj(x)"""
        return self.a

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def inverse_unit(self) -> "QuadInt":
        """Inverse of a unit: conj(x) * norm(x)"""
        n = self.norm()
        if abs(n) != 1:
            raise DomainError(f"{self} is not a unit", {"norm": n})
        return self.conj() * n

    def sign(self) -> int:
        """Sign under the embedding sqrt(d) > 0"""
        return _sign_of(self.a, self.b, self.field.d)

    def conj_sign(self) -> int:
        return _sign_of(self.a, -self.b, self.field.d)

    def is_totally_positive(self) -> bool:
        return self.sign() > 0 and self.conj_sign() > 0

    def compare(self, other: "QuadInt") -> int:
        return (self - other).sign()

    def __lt__(self, other: "QuadInt") -> bool:
        return self.compare(other) < 0

    def __le__(self, other: "QuadInt") -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other: "QuadInt") -> bool:
        return self.compare(other) > 0

    def __ge__(self, other: "QuadInt") -> bool:
        return self.compare(other) >= 0

    def __str__(self) -> str:
        if self.a % 2 == 0 and self.b % 2 == 0:
            return f"{self.a // 2} + {self.b // 2}*sqrt({self.field.d})"
        return f"({self.a} + {self.b}*sqrt({self.field.d}))/2"

    def to_json(self) -> dict[str, str]:
        return {"a": str(self.a), "b": str(self.b), "d": str(self.field.d)}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "QuadInt":
        return cls(QuadraticField(int(data["d"])), int(data["a"]), int(data["b"]))


def qi_add(x: QuadInt, y: QuadInt) -> QuadInt:
    return x + y


def qi_neg(x: QuadInt) -> QuadInt:
    return -x


def qi_mul(x: QuadInt, y: QuadInt) -> QuadInt:
    return x * y


def qi_conj(x: QuadInt) -> QuadInt:
    return x.conj()


def qi_norm(x: QuadInt) -> int:
    return x.norm()


def qi_trace(x: QuadInt) -> int:
    return x.trace()


@dataclass(frozen=True, slots=True)
class FundamentalUnit:
    """Smallest unit > 1 of the ring of integers, with its trace and norm"""

    elem: QuadInt
    t: int
    nrm: int

    @property
    def field(self) -> QuadraticField:
        return self.elem.field

    def to_json(self) -> dict[str, Any]:
        return {"elem": self.elem.to_json(), "t": str(self.t), "nrm": str(self.nrm)}


def _pell_unit(d: int) -> tuple[int, int]:
    """Least p + q*sqrt(d) > 1 with p^2 - d q^2 = +-1; the -1 solution is smaller when it exists"""
    solutions = diop_DN(d, -1) or diop_DN(d, 1)
    p, q = min((abs(int(x)), abs(int(y))) for x, y in solutions)
    return p, q


def _half_integral_cube_root(field: QuadraticField, eta: QuadInt) -> QuadInt | None:
    """Unit u = (a + b*sqrt(d))/2 with a, b odd and u^3 = eta, if one exists"""
    # trace(u^3) = a^3 - 3*N(u)*a with N(u) = N(eta)
    nrm = eta.norm()
    target = eta.trace()
    guess = iroot(target, 3)
    for a in (guess - 1, guess, guess + 1, guess + 2):
        if a <= 0 or a % 2 == 0 or a**3 - 3 * nrm * a != target:
            continue
        if (a * a - 4 * nrm) % field.d != 0:
            continue
        square, b = is_perfect_square((a * a - 4 * nrm) // field.d)
        if not square or b is None:
            continue
        candidate = QuadInt(field, a, b)
        if candidate**3 == eta:
            return candidate
    return None


@cache
def fundamental_unit(field: QuadraticField) -> FundamentalUnit:
    """Fundamental unit of the ring of integers of Q(sqrt(d)).

    The unit of Z[sqrt(d)] is the least solution of x^2 - d*y^2 = +-1. For d = 5 (mod 8)
    the ring of integers may hold a half-integral unit whose cube is that unit; it is found
    through the trace relation. The result is the least a + b > 0 solution of a^2 - d*b^2 = +-4.
    """
    p, q = _pell_unit(field.d)
    unit = field.from_parts(p, q)
    if field.d % 8 == 5:
        root = _half_integral_cube_root(field, unit)
        if root is not None:
            unit = root
    logger.debug(f"Fundamental unit of Q(sqrt({field.d})) is {unit}")
    return FundamentalUnit(elem=unit, t=unit.trace(), nrm=unit.norm())


def express_as_unit_power(x: QuadInt, eps: FundamentalUnit) -> tuple[int, int] | None:
    """Write the unit x as sign * eps^k.

    The exponent is located by exact magnitude comparisons against repeated squares of
    eps, then confirmed by exact multiplication.

    Returns:
        tuple: (sign, k), or None when x is not of the form +-eps^k
    """
    if x.field != eps.field:
        raise FieldMismatchError(
            "Unit and fundamental unit live in different fields",
            {"unit_field": x.field.d, "eps_field": eps.field.d},
        )
    if not x.is_unit():
        raise DomainError(f"{x} is not a unit", {"norm": x.norm()})

    sign = x.sign()
    target = x * sign
    one = x.field.one()
    negative = target < one
    if negative:
        target = target.inverse_unit()

    # Squares eps^(2^i) while they stay <= target
    ladder = [eps.elem]
    while ladder[-1] * ladder[-1] <= target:
        ladder.append(ladder[-1] * ladder[-1])

    exponent = 0
    acc = one
    for i in range(len(ladder) - 1, -1, -1):
        step = acc * ladder[i]
        if step <= target:
            acc = step
            exponent += 1 << i

    if acc != target:
        return None
    return sign, -exponent if negative else exponent


def _scaled_square_root(field: QuadraticField, u: int, v: int) -> QuadInt | None:
    """gamma = c + e*sqrt(d) with c, e integers and gamma^2 = u + v*sqrt(d), as (2c + 2e*sqrt(d))/2"""
    d = field.d
    if v == 0:
        square, c = is_perfect_square(u)
        if square and c is not None:
            return field.from_parts(c, 0)
        if u % d == 0:
            square, e = is_perfect_square(u // d)
            if square and e is not None:
                return field.from_parts(0, e)
        return None

    square, s = is_perfect_square(u * u - d * v * v)
    if not square or s is None:
        return None
    for numerator in (u + s, u - s):
        if numerator % 2 != 0:
            continue
        square, c = is_perfect_square(numerator // 2)
        if not square or not c or v % (2 * c) != 0:
            continue
        e = v // (2 * c)
        if c * c + d * e * e == u and 2 * c * e == v:
            return field.from_parts(c, e)
    return None


def sqrt_in_field(x: QuadInt) -> QuadInt | None:
    """Square root of x in the ring of integers, or None when x is not a square.

    x must be totally positive (or zero) to be a square in a real field. With
    4x = U + V*sqrt(d) the root 2*beta = c + e*sqrt(d) has c^2 = (U +- s)/2 where
    s^2 = U^2 - d*V^2. The returned root is positive under sqrt(d) > 0.
    """
    if x.a == 0 and x.b == 0:
        return x
    if not x.is_totally_positive():
        return None

    # 4x = U + V*sqrt(d) with U = 2a, V = 2b
    gamma = _scaled_square_root(x.field, 2 * x.a, 2 * x.b)
    if gamma is None:
        return None
    # beta = gamma / 2, i.e. (c + e*sqrt(d))/2
    c, e = gamma.a // 2, gamma.b // 2
    if x.field.half_integral:
        if (c - e) % 2 != 0:
            return None
    elif c % 2 != 0 or e % 2 != 0:
        return None
    beta = QuadInt(x.field, c, e)
    if beta.sign() < 0:
        beta = -beta
    if beta * beta != x:
        return None
    return beta
