import pytest

from quartic_iso.core import arith
from quartic_iso.core.arith import (
    Factorization,
    factorize,
    fourth_power_free_part,
    iroot,
    is_perfect_square,
    is_probable_prime,
    is_squarefree,
    isqrt,
    jacobi_symbol,
    squarefree_part,
)
from quartic_iso.core.errors import DomainError, FactorizationIncompleteError

SMALL_PRIMES = [3, 5, 7, 11, 13, 53, 101, 65537]


@pytest.mark.parametrize(("v", "root"), [(0, 0), (1, 1), (17, 4), (456976, 676), (10**40, 10**20)])
def test_isqrt_examples(v, root):
    assert isqrt(v) == root


def test_isqrt_bounds_on_random_sample(rng):
    for _ in range(500):
        v = rng.randrange(0, 10**60)
        r = isqrt(v)
        assert r * r <= v < (r + 1) * (r + 1)


def test_isqrt_rejects_negative():
    with pytest.raises(DomainError):
        isqrt(-1)


@pytest.mark.parametrize(("v", "k", "root"), [(27, 3, 3), (26, 3, 2), (1331, 3, 11), (2**64, 4, 2**16), (5, 1, 5)])
def test_iroot(v, k, root):
    assert iroot(v, k) == root


def test_is_perfect_square_examples():
    assert is_perfect_square(169) == (True, 13)
    assert is_perfect_square(3600) == (True, 60)
    assert is_perfect_square(5) == (False, None)
    assert is_perfect_square(0) == (True, 0)
    assert is_perfect_square(-4) == (False, None)


@pytest.mark.parametrize(
    ("v", "expected"),
    [(3380, (5, 26)), (20, (5, 2)), (1, (1, 1)), (52, (13, 2)), (212, (53, 2))],
)
def test_squarefree_part(v, expected):
    assert squarefree_part(v) == expected


@pytest.mark.parametrize(("v", "expected"), [(17, (17, 1)), (16, (1, 2)), (48, (3, 2)), (65, (65, 1))])
def test_fourth_power_free_part(v, expected):
    assert fourth_power_free_part(v) == expected


def test_decompositions_recompose(rng):
    for _ in range(200):
        v = rng.randrange(1, 10**9)
        d, c = squarefree_part(v)
        assert d * c * c == v
        assert is_squarefree(d)
        r, s = fourth_power_free_part(v)
        assert r * s**4 == v


@pytest.mark.parametrize("v", [0, -7])
def test_decompositions_reject_nonpositive(v):
    with pytest.raises(DomainError):
        squarefree_part(v)
    with pytest.raises(DomainError):
        fourth_power_free_part(v)


def test_incomplete_factorization_blocks_decomposition(monkeypatch):
    monkeypatch.setattr(arith, "factorize", lambda v: Factorization(v, [], complete=False, unsplit=[v]))
    with pytest.raises(FactorizationIncompleteError):
        squarefree_part(91)


@pytest.mark.parametrize(
    ("a", "n", "expected"),
    [(4, 7, 1), (0, 5, 0), (13 * 1543321 % 53, 53, -1), (2, 7, 1), (3, 7, -1), (6, 9, 0)],
)
def test_jacobi_symbol_examples(a, n, expected):
    assert jacobi_symbol(a, n) == expected


@pytest.mark.parametrize("n", [0, -3, 8])
def test_jacobi_symbol_rejects_bad_modulus(n):
    with pytest.raises(DomainError):
        jacobi_symbol(3, n)


def test_jacobi_symbol_is_multiplicative(rng):
    for p in SMALL_PRIMES:
        for _ in range(30):
            a, b = rng.randrange(1, 10**6), rng.randrange(1, 10**6)
            assert jacobi_symbol(a, p) * jacobi_symbol(b, p) == jacobi_symbol(a * b, p)
            if a % p:
                assert jacobi_symbol(a * a, p) == 1


def test_jacobi_matches_euler_criterion(rng):
    for p in SMALL_PRIMES:
        a = rng.randrange(1, p)
        euler = pow(a, (p - 1) // 2, p)
        assert jacobi_symbol(a, p) == (1 if euler == 1 else -1)


@pytest.mark.parametrize(
    ("v", "expected"),
    [
        (1, False),
        (2, True),
        (53, True),
        (91, False),
        (561, False),
        (64233493, True),
        (408359633417260832077, True),
        (2**89 - 1, True),
    ],
)
def test_is_probable_prime(v, expected):
    assert is_probable_prime(v) is expected


def test_deterministic_limit_is_first_strong_pseudoprime():
    # The limit itself fools every witness; everything below it is decided exactly
    limit = arith.DETERMINISTIC_PRIME_LIMIT
    assert limit == 1287836182261 * 2575672364521
    assert is_probable_prime(limit)


def test_factorize_splits_cofactor_above_trial_bound():
    result = factorize(1000003 * 1000033, effort_bound=10)
    assert result.complete
    assert result.factors == [(1000003, 1), (1000033, 1)]


def test_factorize_squared_cofactor():
    result = factorize(1000003**2 * 7, effort_bound=10)
    assert result.factors == [(7, 1), (1000003, 2)]


@pytest.mark.parametrize(
    ("v", "factors"),
    [
        (3380, [(2, 2), (5, 1), (13, 2)]),
        (53, [(53, 1)]),
        (20, [(2, 2), (5, 1)]),
        (1, []),
        (5564523, [(3, 1), (53, 1), (79, 1), (443, 1)]),
    ],
)
def test_factorize_examples(v, factors):
    result = factorize(v)
    assert result.complete
    assert result.factors == factors


def test_factorize_beyond_trial_bound():
    result = factorize(557337828742169598895, effort_bound=1000)
    assert result.complete
    assert result.factors == [(5, 1), (59, 1), (64233493, 1), (29412704917, 1)]


def test_factorize_recomposes_and_primes_pass(rng):
    for _ in range(100):
        v = rng.randrange(1, 10**15)
        result = factorize(v, effort_bound=10**4)
        assert result.recompose() == v
        primes = result.primes()
        assert primes == sorted(set(primes))
        assert all(is_probable_prime(p) for p in primes)


def test_factorize_reports_unsplit_cofactor():
    v = 1000003 * 1000033
    result = factorize(v, effort_bound=10, rho_iterations=1)
    assert not result.complete
    assert result.unsplit == [v]
    assert result.recompose() == v


def test_factorize_rejects_nonpositive():
    with pytest.raises(DomainError):
        factorize(0)
