import json
import logging

import pytest

from quartic_iso.core.certify import (
    HYPOTHESIS_NOT_MET,
    NO_R0_WITHIN_CAP,
    NO_SUITABLE_P,
    UNIT_NOT_FUNDAMENTAL,
    CertificateKind,
    IssueFailure,
    UniquenessCertificate,
    epsilon_from_index,
    find_nonresidue_prime,
    find_r0,
    issue_certificate,
    petho_certificate,
    verify_certificate,
)
from quartic_iso.core.errors import CertificateFormatError, DomainError, InvalidIndexError
from quartic_iso.core.isotest import partner_search
from quartic_iso.core.quadfield import QuadraticField
from quartic_iso.core.sequences import LucasParams, uv_mod

N6 = UniquenessCertificate(n=6, d=13, t=3, r0=13, p=53)
N14 = UniquenessCertificate(n=14, d=53, t=7, r0=53, p=408359633417260832077)


def test_find_r0():
    assert find_r0(LucasParams(3), 13, 100) == 13
    assert find_r0(LucasParams(1), 5, 100) == 5
    assert find_r0(LucasParams(7), 53, 100) == 53
    assert find_r0(LucasParams(3), 13, 12) is None


def test_find_r0_rejects_bad_bounds():
    with pytest.raises(DomainError):
        find_r0(LucasParams(3), 13, 0)


def test_epsilon_from_index():
    assert epsilon_from_index(6) == QuadraticField(13).element(3, 1)
    assert epsilon_from_index(22) == QuadraticField(5).element(11, 5)
    with pytest.raises(DomainError):
        epsilon_from_index(1)


def test_find_nonresidue_prime():
    v13, du13 = 5564523, 13 * 1543321
    assert find_nonresidue_prime(v13, du13, 10**8) == 53
    assert find_nonresidue_prime(v13, du13, 50) is None
    assert find_nonresidue_prime(11, 5 * 5, 10**8) is None


def test_find_nonresidue_prime_is_worker_independent():
    v13, du13 = 5564523, 13 * 1543321
    assert find_nonresidue_prime(v13, du13, 10**8, workers=2) == 53


def test_issue_certificate_for_six():
    cert = issue_certificate(6)
    assert cert == N6
    assert cert.kind is CertificateKind.COHN_NONRESIDUE
    assert verify_certificate(cert).accepted


@pytest.mark.slow
def test_issue_certificate_for_ten(fixtures_dir):
    cert = issue_certificate(10, workers=2)
    assert cert == UniquenessCertificate(n=10, d=29, t=5, r0=29, p=64233493)
    assert verify_certificate(cert).accepted
    assert cert.to_canonical_json() == (fixtures_dir / "n10.cert.json").read_text(encoding="utf-8")


def test_issue_declines_outside_hypothesis():
    failure = issue_certificate(4)
    assert isinstance(failure, IssueFailure)
    assert failure.reason == HYPOTHESIS_NOT_MET


def test_issue_declines_when_unit_is_a_power():
    # K_22 = K_2, and (22 + 10*sqrt(5))/4 is the fifth power of the golden ratio
    failure = issue_certificate(22)
    assert isinstance(failure, IssueFailure)
    assert failure.reason == UNIT_NOT_FUNDAMENTAL


def test_issue_reports_missing_prime():
    failure = issue_certificate(2)
    assert isinstance(failure, IssueFailure)
    assert failure.reason == NO_SUITABLE_P
    assert failure.details["r0"] == 5
    assert failure.details["v_r0"] == 11
    assert failure.to_json()["details"]["v_r0"] == "11"


def test_issue_reports_exhausted_index_cap():
    failure = issue_certificate(6, index_cap=12)
    assert isinstance(failure, IssueFailure)
    assert failure.reason == NO_R0_WITHIN_CAP


def test_issue_rejects_invalid_index():
    with pytest.raises(InvalidIndexError):
        issue_certificate(3)


@pytest.mark.parametrize("name", ["n6.cert.json", "n10.cert.json", "n14.cert.json", "n4.petho.cert.json"])
def test_fixture_certificates_verify(fixtures_dir, name):
    cert = UniquenessCertificate.load(fixtures_dir / name)
    result = verify_certificate(cert)
    assert result.accepted, result.failed_checks
    assert result.transcript[0].name == "version"


def test_bad_prime_fixture_is_rejected(fixtures_dir):
    cert = UniquenessCertificate.load(fixtures_dir / "n6.bad-p.cert.json")
    result = verify_certificate(cert)
    assert not result.accepted
    assert result.failed_checks == ["p-congruence", "p-divides-v", "nonresidue"]
    details = {record.name: record.detail for record in result.transcript}
    assert details["p-divides-v"] == "v_13 mod p = 56"


def test_prime_checks_all_run_when_p_is_wrong():
    result = verify_certificate(N6.model_copy(update={"p": 2}))
    assert result.failed_checks == ["p-congruence", "p-divides-v", "nonresidue"]
    zero = verify_certificate(N6.model_copy(update={"p": 0}))
    assert zero.failed_checks == ["p-congruence", "p-prime"]


@pytest.mark.parametrize(("t", "d", "r0"), [(1, 5, 5), (3, 13, 13), (5, 29, 29), (7, 53, 53)])
def test_r0_divides_every_odd_index_with_d_dividing_u(t, d, r0):
    params = LucasParams(t)
    assert find_r0(params, d, 1000) == r0
    hits = [r for r in range(1, 2000, 2) if uv_mod(params, r, d)[0] == 0]
    assert hits
    assert all(r % r0 == 0 for r in hits)


def test_r0_divisibility_across_traces():
    for t in range(1, 30):
        params = LucasParams(t)
        r0 = find_r0(params, params.d, 1000)
        if r0 is None:
            continue
        assert all(r % r0 == 0 for r in range(1, 1000, 2) if uv_mod(params, r, params.d)[0] == 0)


@pytest.mark.parametrize("name", ["n6.cert.json", "n10.cert.json", "n14.cert.json"])
def test_certified_index_has_no_partner(fixtures_dir, name):
    cert = UniquenessCertificate.load(fixtures_dir / name)
    assert verify_certificate(cert).accepted
    assert partner_search(cert.n, 10**5) == []


def test_proper_power_unit_is_logged_at_info(caplog):
    with caplog.at_level(logging.INFO, logger="quartic_iso.core.certify"):
        issue_certificate(22)
    assert any(
        record.levelno == logging.INFO and "proper power" in record.getMessage() for record in caplog.records
    )


def test_cohn_transcript_names():
    names = [record.name for record in verify_certificate(N14).transcript]
    assert names == [
        "version",
        "structure-n",
        "structure-t",
        "structure-r0",
        "invariant",
        "fundamental-unit",
        "r0-divisibility",
        "r0-minimality",
        "p-congruence",
        "p-prime",
        "p-divides-v",
        "nonresidue",
    ]


@pytest.mark.parametrize(
    ("changes", "failed"),
    [
        ({"n": 5}, "structure-n"),
        ({"t": 4}, "structure-t"),
        ({"r0": 12}, "structure-r0"),
        ({"d": 17}, "invariant"),
        ({"t": 5}, "fundamental-unit"),
        ({"r0": 39}, "r0-minimality"),
        ({"r0": 11}, "r0-divisibility"),
        ({"p": 57}, "p-prime"),
        ({"p": 61}, "p-divides-v"),
    ],
)
def test_tampered_certificate_is_rejected(changes, failed):
    cert = N6.model_copy(update=changes)
    result = verify_certificate(cert)
    assert not result.accepted
    assert failed in result.failed_checks


def test_unsupported_version_is_rejected():
    result = verify_certificate(N6.model_copy(update={"version": 2}))
    assert result.failed_checks == ["version"]


def test_petho_certificate():
    cert = petho_certificate()
    assert (cert.n, cert.d, cert.t, cert.r0, cert.p) == (4, 2, 2, 7, 0)
    result = verify_certificate(cert)
    assert result.accepted
    assert [record.name for record in result.transcript] == [
        "version",
        "structure",
        "invariant",
        "fundamental-unit",
        "square-terms",
        "odd-index-parity",
        "partner",
    ]


@pytest.mark.parametrize("changes", [{"p": 53}, {"r0": 13}])
def test_petho_fields_hold_partner_index_and_zero_prime(fixtures_dir, changes):
    data = json.loads((fixtures_dir / "n4.petho.cert.json").read_text(encoding="utf-8"))
    assert (data["r0"], data["p"]) == ("7", "0")
    result = verify_certificate(petho_certificate().model_copy(update=changes))
    assert result.failed_checks == ["structure"]


def test_petho_kind_only_covers_four():
    cert = petho_certificate().model_copy(update={"n": 6, "d": 13, "t": 3})
    result = verify_certificate(cert)
    assert result.failed_checks == ["structure"]


def test_canonical_json_round_trip(tmp_path):
    path = tmp_path / "n14.cert.json"
    N14.save(path)
    text = path.read_text(encoding="utf-8")
    assert text.endswith("}\n")
    assert json.loads(text)["p"] == "408359633417260832077"
    assert UniquenessCertificate.load(path) == N14


def test_fixture_matches_canonical_rendering(fixtures_dir):
    text = (fixtures_dir / "n6.cert.json").read_text(encoding="utf-8")
    assert N6.to_canonical_json() == text


def _canonical_data() -> dict:
    return json.loads(N6.to_canonical_json())


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[]",
        json.dumps(_canonical_data()),
        json.dumps({**_canonical_data(), "p": 53}, indent=2) + "\n",
        json.dumps({**_canonical_data(), "p": "053"}, indent=2) + "\n",
        json.dumps({**_canonical_data(), "p": "-53"}, indent=2) + "\n",
        json.dumps({**_canonical_data(), "version": "1"}, indent=2) + "\n",
        json.dumps({**_canonical_data(), "version": 2}, indent=2) + "\n",
        json.dumps({**_canonical_data(), "kind": "other"}, indent=2) + "\n",
        json.dumps({**_canonical_data(), "extra": "1"}, indent=2) + "\n",
        json.dumps(dict(reversed(list(_canonical_data().items()))), indent=2) + "\n",
    ],
)
def test_non_canonical_certificates_are_rejected(text):
    with pytest.raises(CertificateFormatError):
        UniquenessCertificate.from_canonical_json(text)


def test_missing_file_is_a_format_error(tmp_path):
    with pytest.raises(CertificateFormatError):
        UniquenessCertificate.load(tmp_path / "absent.json")
