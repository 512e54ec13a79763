"""
quartic-iso - Field equality, uniqueness certificates and curve reports for simplest quartic fields
"""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from quartic_iso.__version__ import get_app_info
from quartic_iso.config import BoundsConfig, RunConfig, load_bounds_config, resolve_workers
from quartic_iso.core.arith import factorize
from quartic_iso.core.certify import (
    NO_SUITABLE_P,
    IssueFailure,
    UniquenessCertificate,
    issue_certificate,
    petho_certificate,
    verify_certificate,
)
from quartic_iso.core.curves import (
    RationalPoint,
    WeierstrassCurveSpec,
    bs_derivation_check,
    ec_add,
    phi_map,
    point_order,
    psi_map,
    root_number_E1,
    root_number_E3,
    root_number_table,
    square_point_bijection,
    torsion_preconditions,
)
from quartic_iso.core.errors import ErrorCodes, ErrorHandler, QuarticError
from quartic_iso.core.isotest import (
    duplicate_search,
    fields_equal,
    kummer_radicand,
    quad_invariant,
    theorem_hypotheses,
)
from quartic_iso.core.reports import render
from quartic_iso.core.sequences import LucasParams, check_identities, find_square_terms, iter_terms
from quartic_iso.utils.logging_config import get_logger, log_failure, setup_logging

# Configure logging (globally unique)
setup_logging()
logger = get_logger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2

# Identity checks in the sequence report stop at this index
IDENTITY_CHECK_LIMIT = 200

Report = dict[str, Any]


def build_parser(bounds: BoundsConfig) -> argparse.ArgumentParser:
    app_info = get_app_info()
    parser = argparse.ArgumentParser(description=app_info["description"], prog=app_info["name"])
    parser.add_argument("--version", action="version", version=f"{app_info['name']} v{app_info['version']}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json", help="Report format")
    common.add_argument("--out", help="Write the report to this file instead of stdout")
    common.add_argument("--workers", type=int, default=bounds.workers, help="Worker processes (default: physical cores)")
    common.add_argument("--verbose", action="store_true", help="Log progress to stderr")

    sub = parser.add_subparsers(dest="command", required=True)

    search = sub.add_parser("search", parents=[common], help="List all m < n <= max-n with K_m = K_n")
    search.add_argument("--max-n", type=int, default=bounds.search_limit, dest="search_limit")

    iso = sub.add_parser("iso", parents=[common], help="Decide K_m = K_n")
    iso.add_argument("values", type=int, nargs=2, metavar="INDEX")

    certify = sub.add_parser("certify", parents=[common], help="Issue a uniqueness certificate for n")
    certify.add_argument("values", type=int, nargs=1, metavar="N")
    certify.add_argument("--prime-bound", type=int, default=bounds.prime_bound)
    certify.add_argument("--index-cap", type=int, default=bounds.index_cap)
    certify.add_argument("--save-cert", help="Write the canonical certificate file here")

    verify = sub.add_parser("verify-cert", parents=[common], help="Verify a certificate file")
    verify.add_argument("path")

    hypotheses = sub.add_parser("hypotheses", parents=[common], help="Classify indices by theorem case")
    hypotheses.add_argument("values", type=int, nargs="+", metavar="N")

    sequence = sub.add_parser("sequence", parents=[common], help="u_j, v_j terms and square terms for t")
    sequence.add_argument("values", type=int, nargs=1, metavar="T")
    sequence.add_argument("--terms", type=int, default=bounds.terms)

    curves = sub.add_parser("curves", parents=[common], help="Curve points and the square correspondence for t")
    curves.add_argument("values", type=int, nargs=1, metavar="T")
    curves.add_argument("--d", type=int, default=None, help="d with t^2 + 4 = d*z^2 (default: squarefree part)")
    curves.add_argument("--terms", type=int, default=bounds.terms)
    curves.add_argument("--x-bound", type=int, default=bounds.x_bound)

    roots = sub.add_parser("root-number", parents=[common], help="Root numbers of E1 and E3")
    roots.add_argument("values", type=int, nargs="*", metavar="T")
    roots.add_argument("--t-max", type=int, default=64)

    return parser


def parse_config(argv: Sequence[str] | None = None) -> RunConfig:
    bounds = load_bounds_config()
    parser = build_parser(bounds)
    args = parser.parse_args(argv)

    if args.verbose:
        setup_logging(level=logging.INFO, force_reconfigure=True)

    options = {key: value for key, value in vars(args).items() if value is not None and key != "verbose"}
    options["values"] = tuple(options.get("values", ()))
    options["workers"] = resolve_workers(args.workers)
    options.setdefault("trial_bound", bounds.trial_bound)
    options.setdefault("rho_iterations", bounds.rho_iterations)
    try:
        return RunConfig(**options)
    except ValidationError as e:
        errors = [{"field": ".".join(map(str, err["loc"])), "message": err["msg"]} for err in e.errors()]
        payload = ErrorHandler.create_error_payload(ErrorCodes.USAGE_ERROR, "Invalid arguments", {"errors": errors})
        parser.print_usage(sys.stderr)
        sys.stderr.write(render(payload, args.format))
        raise SystemExit(EXIT_USAGE) from e


def _run_search(config: RunConfig) -> tuple[int, Report]:
    pairs = duplicate_search(config.search_limit, config.workers)
    return EXIT_OK, {
        "command": "search",
        "max_n": config.search_limit,
        "pairs": [{"m": m, "n": n} for m, n in pairs],
    }


def _run_iso(config: RunConfig) -> tuple[int, Report]:
    m, n = config.values
    result = fields_equal(m, n)
    report: Report = {
        "command": "iso",
        "decision": "equal" if result.equal else "distinct",
        "result": result.to_json(),
        "invariants": [quad_invariant(m).to_json(), quad_invariant(n).to_json()],
    }
    if result.alpha is not None:
        product = kummer_radicand(m) * kummer_radicand(n)
        report["radicand_product_is_4alpha"] = product == result.alpha * 4
    return (EXIT_OK if result.equal else EXIT_NEGATIVE), report


def _failure_report(config: RunConfig, failure: IssueFailure) -> Report:
    report: Report = {"command": "certify", "issued": False, "failure": failure.to_json()}
    if failure.reason == NO_SUITABLE_P:
        v_r0 = int(failure.details["v_r0"])
        factorization = factorize(v_r0, config.trial_bound, config.rho_iterations)
        report["v_r0_factorization"] = {
            "factors": [{"p": p, "e": e} for p, e in factorization.factors],
            "complete": factorization.complete,
            "unsplit": factorization.unsplit,
        }
    return report


def _run_certify(config: RunConfig) -> tuple[int, Report]:
    (n,) = config.values
    issued = petho_certificate() if n == 4 else issue_certificate(n, config.prime_bound, config.index_cap, config.workers)
    if isinstance(issued, IssueFailure):
        return EXIT_NEGATIVE, _failure_report(config, issued)

    verification = verify_certificate(issued)
    if config.save_cert:
        issued.save(config.save_cert)
    report = {
        "command": "certify",
        "issued": True,
        "certificate": issued.to_canonical_dict(),
        "verification": verification.to_json(),
    }
    return (EXIT_OK if verification.accepted else EXIT_NEGATIVE), report


def _run_verify(config: RunConfig) -> tuple[int, Report]:
    cert = UniquenessCertificate.load(config.path or "")
    verification = verify_certificate(cert)
    report = {
        "command": "verify-cert",
        "decision": "accept" if verification.accepted else "reject",
        "certificate": cert.to_canonical_dict(),
        "verification": verification.to_json(),
    }
    return (EXIT_OK if verification.accepted else EXIT_NEGATIVE), report


def _run_hypotheses(config: RunConfig) -> tuple[int, Report]:
    return EXIT_OK, {
        "command": "hypotheses",
        "reports": [theorem_hypotheses(n).to_json() for n in config.values],
    }


def _run_sequence(config: RunConfig) -> tuple[int, Report]:
    (t,) = config.values
    params = LucasParams(t)
    identities = check_identities(params, min(config.terms, IDENTITY_CHECK_LIMIT))
    report = {
        "command": "sequence",
        "t": t,
        "d": params.d,
        "z": params.z,
        "terms": [{"j": pair.j, "u": pair.u, "v": pair.v} for pair in iter_terms(params, config.terms + 1)],
        "square_terms": [
            {"j": j, "class": label.value} for j, label in find_square_terms(params, config.terms, params.d)
        ],
        "identities": {
            "checked": identities.checked,
            "failures": identities.failures,
            "passed": identities.passed,
        },
    }
    return (EXIT_OK if identities.passed else EXIT_NEGATIVE), report


def _run_curves(config: RunConfig) -> tuple[int, Report]:
    (t,) = config.values
    params = LucasParams(t)
    d = config.d or params.d
    correspondence = square_point_bijection(t, d, config.terms, config.x_bound, config.workers)

    e1 = WeierstrassCurveSpec.e1(t)
    disc = t * t + 4
    base_image = phi_map(1, t, d, RationalPoint.of(1, t))
    two_torsion = RationalPoint.of(0, 0)
    e2 = WeierstrassCurveSpec.e2(t, d)
    report = {
        "command": "curves",
        "correspondence": correspondence.to_json(),
        "phi1_of_base_point": base_image.to_json(),
        "base_plus_torsion": ec_add(e1, RationalPoint.of(disc, t * disc), two_torsion).to_json(),
        "psi_of_torsion": psi_map(t, d, two_torsion).to_json(),
        "torsion_order_E2": point_order(e2, two_torsion),
        "torsion_preconditions": torsion_preconditions(t, d),
        "root_numbers": {"E1": root_number_E1(t), "E3": root_number_E3(t)},
    }
    return (EXIT_OK if correspondence.passed else EXIT_NEGATIVE), report


def _run_root_number(config: RunConfig) -> tuple[int, Report]:
    if config.values:
        rows = [{"t": t, "E1": root_number_E1(t), "E3": root_number_E3(t)} for t in config.values]
        checked = [t for t in config.values if t % 8 == 0]
    else:
        rows = root_number_table(config.t_max)
        checked = list(range(8, config.t_max + 1, 8))
    derivations = [bs_derivation_check(t) for t in checked]
    report = {
        "command": "root-number",
        "table": rows,
        "derivation_checks": [check.to_json() for check in derivations],
    }
    return (EXIT_OK if all(check.passed for check in derivations) else EXIT_NEGATIVE), report


_HANDLERS: dict[str, Callable[[RunConfig], tuple[int, Report]]] = {
    "search": _run_search,
    "iso": _run_iso,
    "certify": _run_certify,
    "verify-cert": _run_verify,
    "hypotheses": _run_hypotheses,
    "sequence": _run_sequence,
    "curves": _run_curves,
    "root-number": _run_root_number,
}


def run(config: RunConfig) -> tuple[int, Report]:
    """Dispatch one command; returns (exit status, report)"""
    return _HANDLERS[config.command](config)


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry function"""
    config = parse_config(argv)
    try:
        status, report = run(config)
    except QuarticError as e:
        log_failure(logger, f"{config.command} failed", e)
        sys.stderr.write(render(ErrorHandler.from_exception(e, config.command), config.format))
        return EXIT_USAGE

    output = render(report, config.format)
    if config.out:
        Path(config.out).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    return status


if __name__ == "__main__":
    sys.exit(main())
