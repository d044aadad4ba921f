"""Command-line front end for the algebra workbench."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Sequence

from .cartan import validation_diagnostic, weight_from_coefficients
from .charcalc import character, load_or_build_root_multiplicities
from .config import cutoff_limit, default_cutoff
from .datum_catalog import datum_by_name, load_datum, load_tau_overrides
from .errors import ConsistencyError, CutoffExceeded, DatumError
from .expr_parser import parse_expression
from .freealg import TauTable
from .log import get_logger
from .qfield import to_text
from .types import CartanDatum, RunConfig
from .ubase import QuantumAlgebra
from .verma import build_verma, contravariant_gram, decompose, irreducible_quotient, tensor

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INCONSISTENT = 2

COMMANDS = (
    "validate",
    "normal-form",
    "character",
    "weight-mult",
    "root-mult",
    "decompose",
    "check-relations",
    "basis",
    "gram",
)


def _int_list(text: str | None) -> List[int]:
    if not text:
        return []
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ValueError(f"expected comma-separated integers, got {text!r}") from exc


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports bad arguments as invalid input instead of exiting."""

    def error(self, message: str):
        raise ValueError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bbq", description="Exact computations in quantum Borcherds-Bozec algebras.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("expression", nargs="?", help="generator expression for normal-form")
    parser.add_argument("--datum", required=True, help="path to a datum JSON file or the name of a shipped datum")
    parser.add_argument("--cutoff", type=int, default=None, help="height cutoff N")
    parser.add_argument("--lambda", dest="weight", default=None, help="fundamental-weight coefficients c1,...,cn")
    parser.add_argument("--shift", default=None, help="root-lattice shift k1,...,kn subtracted from lambda")
    parser.add_argument("--mu", default=None, help="second highest weight for decompose")
    parser.add_argument("--beta", default=None, help="root-lattice degree k1,...,kn")
    parser.add_argument("--format", dest="output_format", choices=("text", "machine"), default="text")
    parser.add_argument("--tau", default=None, help="path to a tau override table")
    parser.add_argument("--output", default=None, help="also write the machine document to this file")
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    cutoff = default_cutoff() if args.cutoff is None else args.cutoff
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    if cutoff > cutoff_limit():
        raise CutoffExceeded(f"cutoff {cutoff} is above the safety limit {cutoff_limit()}")
    return RunConfig(
        datum_path=args.datum,
        command=args.command,
        cutoff=cutoff,
        weight_spec=_int_list(args.weight),
        shift=_int_list(args.shift),
        output_format=args.output_format,
        tau_path=args.tau,
    )


def _algebra(datum: CartanDatum, config: RunConfig, cutoff: int | None = None) -> QuantumAlgebra:
    cutoff = config.cutoff if cutoff is None else cutoff
    overrides = load_tau_overrides(config.tau_path) if config.tau_path else None
    tau = TauTable(datum, overrides)
    failed = tau.violations(max(cutoff, 1))
    if failed:
        listed = ", ".join(f"{datum.nodes[i]},{level}" for i, level in failed)
        raise DatumError(f"tau is not in 1 + q Z>=0[[q]] at node,level {listed}")
    return QuantumAlgebra(datum, tau, cutoff=cutoff)


def _resolve_datum(reference: str) -> CartanDatum:
    path = Path(reference)
    if path.exists() or path.suffix == ".json":
        return load_datum(path)
    datum = datum_by_name(reference)
    if datum is None:
        raise DatumError(f"{reference!r} is neither a datum file nor a shipped datum")
    return datum


def _weight(datum: CartanDatum, config: RunConfig, spec: List[int] | None = None):
    spec = config.weight_spec if spec is None else spec
    if not spec:
        spec = [0] * datum.rank
    return weight_from_coefficients(datum, spec, config.shift or None)


def _beta(datum: CartanDatum, text: str | None) -> tuple:
    beta = tuple(_int_list(text))
    if len(beta) != datum.rank or min(beta, default=0) < 0:
        raise ValueError(f"--beta needs {datum.rank} nonnegative integers")
    return beta


def cmd_validate(datum: CartanDatum, config: RunConfig, args) -> Dict[str, Any]:
    diagnostic = validation_diagnostic(datum)
    kinds = [datum.kind(i) for i in range(datum.rank)]
    return {"valid": diagnostic is None, "diagnostic": diagnostic or "", "kinds": kinds}


def cmd_normal_form(datum: CartanDatum, config: RunConfig, args) -> Dict[str, Any]:
    if not args.expression:
        raise ValueError("normal-form needs an expression")
    algebra = _algebra(datum, config)
    element = parse_expression(algebra, args.expression)
    terms = [
        {"term": algebra.format_term(term), "coefficient": to_text(element[term])}
        for term in sorted(element, key=lambda t: (len(t[0]), t[0], len(t[2]), t[2], t[1]))
    ]
    return {"expression": args.expression, "terms": terms, "text": algebra.format_element(element)}


def cmd_character(datum: CartanDatum, config: RunConfig, args) -> Dict[str, Any]:
    table = load_or_build_root_multiplicities(datum, config.cutoff)
    return character(datum, _weight(datum, config), config.cutoff, table=table).to_dict()


def cmd_weight_mult(datum: CartanDatum, config: RunConfig, args) -> Dict[str, Any]:
    beta = _beta(datum, args.beta)
    height = sum(beta)
    algebra = _algebra(datum, config, cutoff=max(height, 1))
    weight = _weight(datum, config)
    verma = build_verma(algebra, weight, cutoff=height)
    gram = contravariant_gram(verma, beta) if verma.dimension(beta) else None
    rank = gram.rank() if gram is not None else 0
    table = load_or_build_root_multiplicities(datum, height)
    formula = character(datum, weight, height, table=table).coefficient(beta)
    if rank != formula:
        raise ConsistencyError(f"Gram rank {rank} disagrees with the character formula {formula} at {beta}")
    return {"beta": list(beta), "verma_dim": verma.dimension(beta), "multiplicity": rank}


def cmd_root_mult(datum: CartanDatum, config: RunConfig, args) -> Dict[str, Any]:
    return load_or_build_root_multiplicities(datum, config.cutoff).to_dict()


def cmd_decompose(datum: CartanDatum, config: RunConfig, args) -> Dict[str, Any]:
    algebra = _algebra(datum, config)
    highest = _weight(datum, config)
    other = _weight(datum, config, _int_list(args.mu) or None)

    def _product(cutoff: int):
        bigger = algebra if cutoff == config.cutoff else _algebra(datum, config, cutoff=cutoff)
        first = irreducible_quotient(build_verma(bigger, highest))
        second = irreducible_quotient(build_verma(bigger, other))
        return tensor(first, second)

    table = load_or_build_root_multiplicities(datum, config.cutoff)
    report = decompose(_product(config.cutoff), table=table, rebuild=_product)
    if not report.character_matches:
        raise ConsistencyError(f"decomposition leaves character mismatches at {report.mismatches}")
    return report.to_dict()


def cmd_check_relations(datum: CartanDatum, config: RunConfig, args) -> Dict[str, Any]:
    algebra = _algebra(datum, config)
    checks = [
        {"kind": kind, "params": list(params), "zero": zero} for kind, params, zero in algebra.all_relation_checks()
    ]
    failed = [item for item in checks if not item["zero"]]
    if failed:
        raise ConsistencyError(f"{len(failed)} relation residuals do not vanish")
    return {"checks": checks, "all_zero": True}


def cmd_basis(datum: CartanDatum, config: RunConfig, args) -> Dict[str, Any]:
    algebra = _algebra(datum, config)
    return {
        "degrees": [
            {"beta": list(beta), "dim": algebra.basis.dimension(beta)} for beta in algebra.basis.degrees
        ],
        "form": algebra.form_radical_report(),
    }


def cmd_gram(datum: CartanDatum, config: RunConfig, args) -> Dict[str, Any]:
    beta = _beta(datum, args.beta)
    algebra = _algebra(datum, config, cutoff=max(sum(beta), 1))
    verma = build_verma(algebra, _weight(datum, config), cutoff=sum(beta))
    if not verma.dimension(beta):
        return {"beta": list(beta), "size": 0, "rank": 0, "matrix": []}
    gram = contravariant_gram(verma, beta)
    return {
        "beta": list(beta),
        "size": verma.dimension(beta),
        "rank": gram.rank(),
        "matrix": [[to_text(entry) for entry in row] for row in gram.to_list()],
    }


HANDLERS = {
    "validate": cmd_validate,
    "normal-form": cmd_normal_form,
    "character": cmd_character,
    "weight-mult": cmd_weight_mult,
    "root-mult": cmd_root_mult,
    "decompose": cmd_decompose,
    "check-relations": cmd_check_relations,
    "basis": cmd_basis,
    "gram": cmd_gram,
}


def render_text(command: str, payload: Dict[str, Any]) -> str:
    """Line-oriented report for one command result."""

    if command == "validate":
        return "valid" if payload["valid"] else f"invalid: {payload['diagnostic']}"
    if command == "normal-form":
        return payload["text"]
    if command == "character":
        return "\n".join(f"{item['beta']}\t{item['mult']}" for item in payload["multiplicities"])
    if command == "weight-mult":
        return f"{payload['beta']}\t{payload['multiplicity']}"
    if command == "root-mult":
        return "\n".join(f"[{key}]\t{value}" for key, value in payload["mult"].items())
    if command == "decompose":
        lines = [f"{item['beta']}\t{item['multiplicity']}" for item in payload["components"]]
        return "\n".join(lines + [f"character matches: {payload['character_matches']}"])
    if command == "check-relations":
        return "\n".join(
            f"{item['kind']}{tuple(item['params'])}\t{'0' if item['zero'] else 'NONZERO'}" for item in payload["checks"]
        )
    if command == "basis":
        return "\n".join(f"{item['beta']}\t{item['dim']}" for item in payload["degrees"])
    if command == "gram":
        return f"{payload['beta']}\tsize {payload['size']}\trank {payload['rank']}"
    return json.dumps(payload, sort_keys=True)


def machine_document(config: RunConfig, payload: Dict[str, Any]) -> str:
    return json.dumps({"command": config.command, "cutoff": config.cutoff, "result": payload}, indent=2, sort_keys=True)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _run_config(args)
        datum = _resolve_datum(config.datum_path)
        logger.info("running %s on %s with cutoff %d", config.command, datum.name, config.cutoff)
        if config.command != "validate":
            diagnostic = validation_diagnostic(datum)
            if diagnostic is not None:
                raise ValueError(diagnostic)
        payload = HANDLERS[config.command](datum, config, args)
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (ValueError, KeyError, FileNotFoundError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID

    document = machine_document(config, payload)
    if config.output_format == "machine":
        print(document)
    else:
        print(render_text(config.command, payload))
    if args.output:
        Path(args.output).write_text(document + "\n", encoding="utf-8")
    if config.command == "validate" and not payload["valid"]:
        return EXIT_INVALID
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
