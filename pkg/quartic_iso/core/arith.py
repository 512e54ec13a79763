"""
Integer Kernels - square roots, primality, factorization and power-free decompositions
"""

import math
from collections import Counter
from dataclasses import dataclass, field

from sympy import factorint, integer_nthroot, isprime
from sympy import jacobi_symbol as sympy_jacobi_symbol
from sympy.ntheory import pollard_rho
from sympy.ntheory.primetest import is_square, mr

from quartic_iso.core.errors import DomainError, FactorizationIncompleteError
from quartic_iso.utils.logging_config import get_logger

logger = get_logger(__name__)

DEFAULT_TRIAL_BOUND = 10**6
DEFAULT_RHO_ITERATIONS = 200_000
RHO_RETRIES = 3

# Miller-Rabin with the first 13 primes as witnesses is deterministic below this bound
DETERMINISTIC_PRIME_LIMIT = 3_317_044_064_679_887_385_961_981
MILLER_RABIN_WITNESSES: tuple[int, ...] = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@dataclass(slots=True)
class Factorization:
    """Prime factorization of a positive integer, possibly partial"""

    value: int
    factors: list[tuple[int, int]] = field(default_factory=list)
    complete: bool = True
    unsplit: list[int] = field(default_factory=list)  # composite cofactors left over

    def recompose(self) -> int:
        """Multiply the factors (and unsplit cofactors) back together"""
        product = 1
        for prime, exponent in self.factors:
            product *= prime**exponent
        for cofactor in self.unsplit:
            product *= cofactor
        return product

    def primes(self) -> list[int]:
        return [prime for prime, _ in self.factors]


def isqrt(v: int) -> int:
    """Floor of the square root of a nonnegative integer"""
    if v < 0:
        raise DomainError(f"isqrt of negative number {v}", {"value": v})
    return math.isqrt(v)


def iroot(v: int, k: int) -> int:
    """Floor of the k-th root of a nonnegative integer"""
    if v < 0 or k < 1:
        raise DomainError(f"iroot undefined for v={v}, k={k}", {"value": v, "k": k})
    root, _ = integer_nthroot(v, k)
    return int(root)


def is_perfect_square(v: int) -> tuple[bool, int | None]:
    """Test whether v = k^2 for an integer k >= 0

    Returns:
        tuple: (is_square, k) with k None when v is not a square
    """
    if v < 0 or not is_square(v):
        return False, None
    return True, math.isqrt(v)


def jacobi_symbol(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n; the Legendre symbol when n is prime"""
    if n < 1 or n % 2 == 0:
        raise DomainError(f"Jacobi symbol needs odd positive modulus, got {n}", {"modulus": n})
    return int(sympy_jacobi_symbol(a % n, n))


def is_probable_prime(v: int) -> bool:
    """Miller-Rabin test with a fixed witness set.

    Deterministic for v < DETERMINISTIC_PRIME_LIMIT (about 3.3e24); above it the
    answer means "strong probable prime to every witness in MILLER_RABIN_WITNESSES".
    """
    if v < 2:
        return False
    for p in MILLER_RABIN_WITNESSES:
        if v % p == 0:
            return v == p
    return bool(mr(v, MILLER_RABIN_WITNESSES))


def factorize(
    v: int,
    effort_bound: int = DEFAULT_TRIAL_BOUND,
    rho_iterations: int = DEFAULT_RHO_ITERATIONS,
) -> Factorization:
    """Factor v with sympy's factorint limited to effort_bound.

    factorint leaves a composite base behind when it hits the limit; each one gets a
    seeded Pollard rho run of rho_iterations steps. Cofactors still unsplit are returned
    in Factorization.unsplit with complete=False; that is a result, not an error.
    """
    if v < 1:
        raise DomainError(f"factorize needs a positive integer, got {v}", {"value": v})

    counts: Counter[int] = Counter()
    unsplit: list[int] = []
    pending = [v]

    while pending:
        part = pending.pop()
        for found, exponent in factorint(part, limit=effort_bound).items():
            base = int(found)
            if isprime(base):
                counts[base] += exponent
                continue
            divisor = pollard_rho(base, retries=RHO_RETRIES, max_steps=rho_iterations)
            if divisor is None:
                logger.debug(f"Pollard rho gave up on a {base.bit_length()}-bit cofactor")
                unsplit.extend([base] * exponent)
                continue
            split = int(divisor)
            pending.extend([split, base // split] * exponent)

    return Factorization(
        value=v,
        factors=sorted(counts.items()),
        complete=not unsplit,
        unsplit=sorted(unsplit),
    )


def _power_free_part(v: int, k: int, what: str) -> tuple[int, int]:
    if v < 1:
        raise DomainError(f"{what} needs a positive integer, got {v}", {"value": v})
    factorization = factorize(v)
    if not factorization.complete:
        raise FactorizationIncompleteError(
            f"{what} of {v} needs a complete factorization",
            {"value": v, "unsplit": factorization.unsplit},
        )
    free, root = 1, 1
    for prime, exponent in factorization.factors:
        free *= prime ** (exponent % k)
        root *= prime ** (exponent // k)
    return free, root


def squarefree_part(v: int) -> tuple[int, int]:
    """Write v = d * c^2 with d squarefree; returns (d, c)"""
    return _power_free_part(v, 2, "squarefree_part")


def fourth_power_free_part(v: int) -> tuple[int, int]:
    """Write v = r * s^4 with r fourth-power free; returns (r, s)"""
    return _power_free_part(v, 4, "fourth_power_free_part")


def is_squarefree(v: int) -> bool:
    return v >= 1 and squarefree_part(v)[1] == 1
