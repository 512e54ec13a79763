"""
Certificate Module - issue and verify uniqueness certificates for K_n

A certificate (n, d, t, r0, p) records: n = 2 (mod 4), eps = (n + y*sqrt(d))/4 is the
fundamental unit of Q(sqrt(d)) with trace t, r0 is the least odd index with d | u_r0, and p is
a prime = 1 (mod 4) dividing v_r0 with d*u_r0 a quadratic nonresidue mod p. Together these rule
out every m != n with K_m = K_n.

The "petho-parity" kind covers n = 4 (t = 2, d = 2), where the only odd-index squares u_1, u_7
are taken from Petho's theorem as an external fact. Its fields read differently: r0 holds the
index 7 of the partner square u_7 = 13^2 (eps^7 gives K_4 = K_956) and p is always 0.
"""

import json
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from quartic_iso.core.arith import is_probable_prime, jacobi_symbol
from quartic_iso.core.errors import CertificateFormatError, DomainError
from quartic_iso.core.isotest import fields_equal, quad_invariant, validate_index
from quartic_iso.core.quadfield import (
    QuadInt,
    QuadraticField,
    express_as_unit_power,
    fundamental_unit,
)
from quartic_iso.core.sequences import (
    LucasParams,
    SquareClass,
    find_square_terms,
    iter_terms,
    u_term,
    uv_mod,
    v_term,
)
from quartic_iso.utils.logging_config import PerformanceTimer, get_logger, log_stage
from quartic_iso.utils.workers import iter_chunks, split_range

logger = get_logger(__name__)

CERTIFICATE_VERSION = 1
CERTIFICATE_KEYS: tuple[str, ...] = ("version", "kind", "n", "d", "t", "r0", "p")
INTEGER_KEYS: tuple[str, ...] = ("n", "d", "t", "r0", "p")
_DECIMAL = re.compile(r"0|[1-9][0-9]*")

DEFAULT_PRIME_BOUND = 10**8
DEFAULT_INDEX_CAP = 10**4
PRIME_SCAN_CHUNK = 2_000_000

# Odd-index terms checked for the petho-parity kind
PETHO_SCAN_CAP = 201
PETHO_SQUARE_INDICES: tuple[int, ...] = (1, 7)


class CertificateKind(str, Enum):
    COHN_NONRESIDUE = "cohn-nonresidue"
    PETHO_PARITY = "petho-parity"


class UniquenessCertificate(BaseModel):
    """Uniqueness certificate; integers are serialized as base-10 strings"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    version: int = CERTIFICATE_VERSION
    kind: CertificateKind = CertificateKind.COHN_NONRESIDUE
    n: int = Field(ge=0)
    d: int = Field(ge=0)
    t: int = Field(ge=0)
    r0: int = Field(ge=0)
    p: int = Field(ge=0)

    def to_canonical_dict(self) -> dict[str, Any]:
        return {
            "version": self.version,
            "kind": self.kind.value,
            "n": str(self.n),
            "d": str(self.d),
            "t": str(self.t),
            "r0": str(self.r0),
            "p": str(self.p),
        }

    def to_canonical_json(self) -> str:
        return json.dumps(self.to_canonical_dict(), indent=2) + "\n"

    @classmethod
    def from_canonical_json(cls, text: str) -> "UniquenessCertificate":
        """Parse a certificate, rejecting anything but the canonical rendering"""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise CertificateFormatError(f"Certificate is not valid JSON: {e}") from e

        if not isinstance(data, dict) or tuple(data) != CERTIFICATE_KEYS:
            raise CertificateFormatError(
                "Certificate must be an object with keys " + ", ".join(CERTIFICATE_KEYS),
                {"keys": list(data) if isinstance(data, dict) else None},
            )
        version = data["version"]
        if type(version) is not int or version != CERTIFICATE_VERSION:
            raise CertificateFormatError(f"Unsupported certificate version {version!r}")
        try:
            kind = CertificateKind(data["kind"])
        except ValueError as e:
            raise CertificateFormatError(f"Unknown certificate kind {data['kind']!r}") from e

        values: dict[str, int] = {}
        for key in INTEGER_KEYS:
            raw = data[key]
            if not isinstance(raw, str) or not _DECIMAL.fullmatch(raw):
                raise CertificateFormatError(
                    f"Field {key} must be a base-10 string, got {raw!r}", {"field": key}
                )
            values[key] = int(raw)

        cert = cls(version=version, kind=kind, **values)
        if cert.to_canonical_json() != text:
            raise CertificateFormatError("Certificate is not in canonical form")
        return cert

    @classmethod
    def load(cls, path: str | Path) -> "UniquenessCertificate":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise CertificateFormatError(f"Cannot read certificate {path}: {e}") from e
        return cls.from_canonical_json(text)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_canonical_json(), encoding="utf-8")


@dataclass(frozen=True, slots=True)
class IssueFailure:
    """Structured reason an issuance attempt declined to produce a certificate"""

    n: int
    reason: str
    details: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {
            "n": str(self.n),
            "reason": self.reason,
            "details": {k: str(v) for k, v in self.details.items()},
        }


HYPOTHESIS_NOT_MET = "hypothesis not met"
UNIT_NOT_FUNDAMENTAL = "unit not fundamental"
NO_R0_WITHIN_CAP = "no r0 within index cap"
NO_SUITABLE_P = "no suitable p"


@dataclass(frozen=True, slots=True)
class CheckRecord:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class VerificationResult:
    """Accept/reject decision plus the transcript of every check run"""

    kind: CertificateKind
    transcript: list[CheckRecord] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return bool(self.transcript) and all(record.passed for record in self.transcript)

    @property
    def failed_checks(self) -> list[str]:
        return [record.name for record in self.transcript if not record.passed]

    def record(self, name: str, passed: bool, detail: str = "") -> bool:
        self.transcript.append(CheckRecord(name, passed, detail))
        return passed

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "accepted": self.accepted,
            "transcript": [record.to_json() for record in self.transcript],
        }


def find_r0(params: LucasParams, d: int, index_cap: int) -> int | None:
    """Least odd j <= index_cap with d | u_j, by iterating u_j mod d"""
    if index_cap < 1:
        raise DomainError(f"Index cap must be positive, got {index_cap}", {"index_cap": index_cap})
    if d < 1:
        raise DomainError(f"Modulus must be positive, got {d}", {"d": d})
    t = params.t % d
    u_prev, u_cur = 0, 1 % d
    for j in range(1, index_cap + 1):
        if j % 2 == 1 and u_cur == 0:
            return j
        u_prev, u_cur = u_cur, (t * u_cur + u_prev) % d
    return None


def epsilon_from_index(n: int) -> QuadInt:
    """(n + y*sqrt(d))/4, a unit of norm -1 when n is even"""
    inv = quad_invariant(n)
    if n % 2 != 0 or inv.y % 2 != 0:
        raise DomainError(f"(n + y*sqrt(d))/4 needs even n and y, got n={n}", {"n": n, "y": inv.y})
    return QuadInt(inv.field, n // 2, inv.y // 2)


def _scan_prime_chunk(payload: tuple[int, int, int, int]) -> int | None:
    """Smallest k in [lower, upper), k = 1 (mod 4), prime, k | v, (du/k) = -1"""
    lower, upper, v, du = payload
    k = lower + (1 - lower) % 4
    while k < upper:
        if v % k == 0 and is_probable_prime(k) and jacobi_symbol(du % k, k) == -1:
            return k
        k += 4
    return None


def find_nonresidue_prime(v: int, du: int, prime_bound: int, workers: int = 1) -> int | None:
    """Smallest prime p = 1 (mod 4), p <= prime_bound, p | v with (du/p) = -1"""
    upper = min(prime_bound, v) + 1
    if upper <= 5:
        return None
    parts = max(workers, -(-(upper - 5) // PRIME_SCAN_CHUNK))
    chunks = [(lower, stop, v, du) for lower, stop in split_range(5, upper, parts)]
    results = iter_chunks(_scan_prime_chunk, chunks, workers)
    try:
        for index, hit in enumerate(results):
            if hit is not None:
                log_stage(logger, logging.DEBUG, f"Prime found in chunk {index}", chunk=index, stage="prime-scan")
                return hit
    finally:
        results.close()
    return None


def issue_certificate(
    n: int,
    prime_bound: int = DEFAULT_PRIME_BOUND,
    index_cap: int = DEFAULT_INDEX_CAP,
    workers: int = 1,
) -> UniquenessCertificate | IssueFailure:
    """Try to certify that no m != n has K_m = K_n.

    Hypothesis violations and exhausted bounds come back as IssueFailure; the returned
    p is the smallest passing prime whatever the worker count.
    """
    validate_index(n)
    if n % 4 != 2:
        return IssueFailure(n, HYPOTHESIS_NOT_MET, {"n_mod_4": n % 4})

    inv = quad_invariant(n)
    eps = fundamental_unit(inv.field)
    unit = epsilon_from_index(n)
    if unit != eps.elem:
        log_stage(logger, logging.INFO, "Unit (n + y*sqrt(d))/4 is a proper power", n=n, d=inv.d, stage="issue")
        return IssueFailure(n, UNIT_NOT_FUNDAMENTAL, {"d": inv.d, "unit": unit})

    params = LucasParams(eps.t)
    r0 = find_r0(params, inv.d, index_cap)
    if r0 is None:
        return IssueFailure(n, NO_R0_WITHIN_CAP, {"d": inv.d, "t": eps.t, "index_cap": index_cap})

    u_r0, v_r0 = u_term(params, r0), v_term(params, r0)
    with PerformanceTimer(logger, "prime scan", n=n, d=inv.d, t=eps.t, workers=workers):
        p = find_nonresidue_prime(v_r0, inv.d * u_r0, prime_bound, workers)
    if p is None:
        return IssueFailure(
            n,
            NO_SUITABLE_P,
            {"d": inv.d, "t": eps.t, "r0": r0, "v_r0": v_r0, "prime_bound": prime_bound},
        )

    return UniquenessCertificate(n=n, d=inv.d, t=eps.t, r0=r0, p=p)


def petho_certificate() -> UniquenessCertificate:
    """The n = 4 certificate: r0 holds the index of the partner square u_7 = 13^2"""
    return UniquenessCertificate(
        kind=CertificateKind.PETHO_PARITY,
        n=4,
        d=2,
        t=2,
        r0=PETHO_SQUARE_INDICES[-1],
        p=0,
    )


def _check_unit(result: VerificationResult, cert: UniquenessCertificate) -> LucasParams | None:
    """Invariant, fundamental unit and its trace; returns the recurrence parameters on success"""
    try:
        inv = quad_invariant(cert.n)
    except DomainError as e:
        result.record("invariant", False, e.message)
        return None
    if not result.record("invariant", inv.d == cert.d, f"n^2 + 16 = {inv.d} * {inv.y}^2"):
        return None

    try:
        eps = fundamental_unit(QuadraticField(cert.d))
        unit = epsilon_from_index(cert.n)
    except DomainError as e:
        result.record("fundamental-unit", False, e.message)
        return None
    passed = unit == eps.elem and eps.t == cert.t and eps.nrm == -1
    if not result.record("fundamental-unit", passed, f"eps = {eps.elem}, trace {eps.t}, norm {eps.nrm}"):
        return None
    return LucasParams(cert.t)


def _verify_cohn(result: VerificationResult, cert: UniquenessCertificate) -> None:
    structural = [
        result.record("structure-n", cert.n >= 1 and cert.n % 4 == 2, f"n = {cert.n}"),
        result.record("structure-t", cert.t % 2 == 1, f"t = {cert.t}"),
        result.record("structure-r0", cert.r0 >= 1 and cert.r0 % 2 == 1, f"r0 = {cert.r0}"),
    ]
    if not all(structural):
        return

    params = _check_unit(result, cert)
    if params is None:
        return

    result.record("r0-divisibility", uv_mod(params, cert.r0, cert.d)[0] == 0, f"d | u_{cert.r0}")
    result.record(
        "r0-minimality",
        find_r0(params, cert.d, cert.r0) == cert.r0,
        f"no odd j < {cert.r0} with d | u_j",
    )

    result.record("p-congruence", cert.p % 4 == 1, f"p mod 4 = {cert.p % 4}")
    result.record("p-prime", is_probable_prime(cert.p), f"p = {cert.p}")
    if cert.p < 1:
        return

    u_mod_p, v_mod_p = uv_mod(params, cert.r0, cert.p)
    result.record("p-divides-v", v_mod_p == 0, f"v_{cert.r0} mod p = {v_mod_p}")
    if cert.p % 2 == 0:
        result.record("nonresidue", False, f"Jacobi symbol needs an odd modulus, p = {cert.p}")
        return
    symbol = jacobi_symbol(cert.d * u_mod_p % cert.p, cert.p)
    result.record("nonresidue", symbol == -1, f"(d*u_{cert.r0} / p) = {symbol}")


def _verify_petho(result: VerificationResult, cert: UniquenessCertificate) -> None:
    expected = petho_certificate()
    if not result.record("structure", cert == expected, "petho-parity applies to n=4, d=2, t=2, r0=7, p=0"):
        return

    params = _check_unit(result, cert)
    if params is None:
        return

    squares = find_square_terms(params, PETHO_SCAN_CAP, cert.d)
    found = tuple(j for j, _ in squares)
    result.record(
        "square-terms",
        found == PETHO_SQUARE_INDICES and all(label is SquareClass.SQUARE for _, label in squares),
        f"odd j <= {PETHO_SCAN_CAP} with u_j square: {list(found)}",
    )
    odd_terms_odd = all(pair.u % 2 == 1 for pair in iter_terms(params, PETHO_SCAN_CAP + 1) if pair.j % 2 == 1)
    result.record("odd-index-parity", odd_terms_odd, "u_j odd for odd j, so u_j is never 2*k^2")

    eps = fundamental_unit(QuadraticField(cert.d))
    partner_unit = eps.elem**cert.r0
    partner = 2 * partner_unit.a
    decomposition = express_as_unit_power(partner_unit, eps)
    same_field = fields_equal(cert.n, partner).equal
    result.record(
        "partner",
        decomposition == (1, cert.r0) and same_field,
        f"eps^{cert.r0} gives K_{cert.n} = K_{partner}",
    )


def verify_certificate(cert: UniquenessCertificate) -> VerificationResult:
    """Re-check every claim of the certificate with modular arithmetic only"""
    result = VerificationResult(kind=cert.kind)
    with PerformanceTimer(logger, "certificate verification", n=cert.n, d=cert.d, t=cert.t):
        if not result.record("version", cert.version == CERTIFICATE_VERSION, f"version {cert.version}"):
            return result
        if cert.kind is CertificateKind.PETHO_PARITY:
            _verify_petho(result, cert)
        else:
            _verify_cohn(result, cert)

    if not result.accepted:
        logger.warning(
            f"Certificate rejected: {', '.join(result.failed_checks)}",
            extra={"n": cert.n, "stage": "verify"},
        )
    return result
