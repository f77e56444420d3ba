"""
Command line for magiclab. Every command prints one JSON document on stdout;
logs go to stderr.

Exit codes: 0 ok, 1 verification failure, 2 input error, 3 resource cap.
"""

import argparse
import json
import os
import sys
from typing import Any, Dict, List, Optional

import numpy as np

from magiclab import __version__
from magiclab.core.config import settings
from magiclab.core.errors import InputError, MagicLabError, VerificationError
from magiclab.core.logging import get_logger, setup_logging
from magiclab.schemas.api import MonomialAction, TestTask
from magiclab.schemas.verification import SuiteName
from magiclab.services.commutant import commutant_summary, enumerate_monomials, gram_matrix, weingarten
from magiclab.services.genpurity import genpurity_report
from magiclab.services.monomial_io import (
    inspect_monomial,
    load_monomial_file,
    normal_form_record,
    transpose_search_record,
    write_basis,
)
from magiclab.services.proptest import property_test_report
from magiclab.services.sre import entropy_response
from magiclab.services.state_loader import load_state
from magiclab.services.verification import VerificationService

logger = get_logger("magiclab.cli")

# Gram and Weingarten matrices up to this size are echoed in the JSON as well
_INLINE_MATRIX_SIZE = 30


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _name_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _dump(model) -> Dict[str, Any]:
    return model.model_dump(mode="json", by_alias=True)


def cmd_entropy(args: argparse.Namespace) -> Dict[str, Any]:
    psi, spec = load_state(args.state)
    return _dump(entropy_response(psi, spec, args.alpha))


def cmd_genpurity(args: argparse.Namespace) -> Dict[str, Any]:
    w = load_monomial_file(args.monomial)
    psi, spec = load_state(args.state)
    payload = _dump(genpurity_report(psi, w))
    payload.update(state=spec.descriptor, seed=spec.seed)
    return payload


def cmd_monomial(args: argparse.Namespace) -> Dict[str, Any]:
    w = load_monomial_file(args.file)
    action = MonomialAction(args.action)
    if action == MonomialAction.INSPECT:
        return _dump(inspect_monomial(w, args.n))
    if action == MonomialAction.NORMAL_FORM:
        return _dump(normal_form_record(w))
    return _dump(transpose_search_record(w))


def _save_matrix(matrix: np.ndarray, path: Optional[str], default_name: str) -> str:
    path = path or os.path.join(settings.OUTPUT_DIR, default_name)
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    np.save(path, matrix)
    logger.info(f"Matrix of shape {matrix.shape} written to {path}")
    return path if path.endswith(".npy") else path + ".npy"


def cmd_commutant(args: argparse.Namespace) -> Dict[str, Any]:
    k, n = args.k, args.n
    payload = _dump(commutant_summary(k))
    if args.action == "enumerate":
        if args.basis_file:
            payload["basis_file"] = write_basis(k, enumerate_monomials(k).elements, args.basis_file)
        return payload

    if args.action == "gram":
        data = gram_matrix(k, n)
        matrix, name = data.W, f"gram_k{k}_n{n}.npy"
    else:
        data = weingarten(k, n)
        matrix, name = data.Winv, f"weingarten_k{k}_n{n}.npy"
        payload.update(rank=data.rank, residual=data.residual)
    payload.update(n=n, size=matrix.shape[0], file=_save_matrix(matrix, args.output, name))
    if matrix.shape[0] <= _INLINE_MATRIX_SIZE:
        payload["matrix"] = matrix.tolist()
    return payload


def cmd_test(args: argparse.Namespace) -> Dict[str, Any]:
    psi, spec = load_state(args.state)
    report = property_test_report(
        psi,
        spec.descriptor,
        TestTask(args.task).value,
        args.k,
        C=args.C,
        shots=args.shots,
        seed=args.seed,
        state_seed=spec.seed,
    )
    return _dump(report)


def cmd_verify(args: argparse.Namespace) -> Dict[str, Any]:
    report = VerificationService().run_sync(SuiteName(args.suite), args.only, golden_file=args.golden_file)
    for result in report.criteria:
        print(f"{result.number:2d} {result.name:<24} {result.status.value:<7} {result.detail}", file=sys.stderr)
    print(f"suite '{report.suite.value}': {'PASSED' if report.passed else 'FAILED'} in {report.elapsed_s:.1f} s", file=sys.stderr)
    return _dump(report)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="magiclab", description="Stabilizer entropies, Pauli monomials and property testing")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="override LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="stabilizer purities and Renyi entropies")
    p.add_argument("--state", required=True, help="state descriptor, e.g. t:n=2 or haar:n=3,seed=7")
    p.add_argument("--alpha", type=_int_list, default=[2], help="comma-separated integer alphas >= 2")
    p.set_defaults(handler=cmd_entropy)

    p = sub.add_parser("genpurity", help="generalized purity of a state for a monomial file")
    p.add_argument("--state", required=True)
    p.add_argument("--monomial", required=True, help="monomial JSON file")
    p.set_defaults(handler=cmd_genpurity)

    p = sub.add_parser("monomial", help="inspect a monomial file")
    p.add_argument("action", choices=[a.value for a in MonomialAction])
    p.add_argument("file")
    p.add_argument(
        "--n", type=int, default=1, help="qubit count for trace_norm, reported as d^(k - projective_order) with d = 2^n"
    )
    p.set_defaults(handler=cmd_monomial)

    p = sub.add_parser("commutant", help="basis, Gram and Weingarten matrices of the Clifford commutant")
    p.add_argument("action", choices=["enumerate", "gram", "weingarten"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--output", default=None, help=".npy path for gram/weingarten")
    p.add_argument("--basis-file", default=None, help="JSON path for the enumerated basis")
    p.set_defaults(handler=cmd_commutant)

    p = sub.add_parser("test", help="property-testing report")
    p.add_argument("--state", required=True)
    p.add_argument("--task", choices=[t.value for t in TestTask], required=True)
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--C", type=float, default=None, help=f"testing constant (default {settings.TESTING_CONSTANT_C})")
    p.add_argument("--shots", type=int, default=None, help="simulate the Omega_6 test with this many shots")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_test)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--suite", choices=[s.value for s in SuiteName], default=SuiteName.FAST.value)
    p.add_argument("--only", type=_name_list, default=None, help="comma-separated criterion names or numbers")
    p.add_argument("--golden-file", default=None, help="state file replacing the Golden state")
    p.set_defaults(handler=cmd_verify)

    return parser


def _emit(payload: Dict[str, Any]) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    sys.stdout.flush()


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level, stream=sys.stderr)

    try:
        payload = args.handler(args)
    except MagicLabError as e:
        logger.error(f"{args.command} failed: {str(e)}")
        _emit({"error": type(e).__name__, "message": str(e), "exit_code": e.exit_code})
        return e.exit_code
    except (OSError, ValueError) as e:
        logger.error(f"{args.command} failed: {str(e)}")
        _emit({"error": type(e).__name__, "message": str(e), "exit_code": InputError.exit_code})
        return InputError.exit_code

    _emit(payload)
    if args.command == "verify" and not payload["passed"]:
        return VerificationError.exit_code
    return 0
