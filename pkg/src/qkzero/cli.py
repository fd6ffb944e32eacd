"""Command-line interface.

Conventions: machine-readable JSON goes to stdout (or --output), a short
human summary goes to stderr.  Output is deterministic byte for byte for a
fixed command line.  Exit codes:

    0   success, all checked residuals exactly zero
    1   I/O failure, malformed input, bad configuration, missing data
    2   a requested descendent index is not reducible
    3   a residual or consistency violation is nonzero
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .correlators import (
    CorrelatorTable,
    load_correlators,
    point_descendent_table,
    ring_from_target,
    table_consistency_check,
)
from .descendents import descendent_euler
from .errors import NotReducible, QKError
from .frobenius import (
    ResidualSummary,
    assemble_potential,
    build_frobenius_data,
    classical_limit_residual,
    flatness_residuals,
    unit_residual,
    wdvv_residual,
)
from .kring import KRingPresentation
from .qde import (
    assemble_fundamental_solution,
    gwdvv_residuals,
    is_complete,
    qde_residual,
)

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_NOT_REDUCIBLE = 2
EXIT_RESIDUAL = 3


@dataclass(frozen=True)
class RunConfig:
    """Resolved options for one invocation."""

    command: str
    target: str | None = None
    t_order: int = 6
    novikov_order: int = 0
    desc_order: int = 0
    input_path: str | None = None
    output_path: str | None = None
    seed: int = 0

    def validate_orders(self, need_potential: bool) -> None:
        if min(self.t_order, self.novikov_order, self.desc_order) < 0:
            raise ValueError("orders must be non-negative")
        if need_potential and self.t_order < 3:
            raise ValueError("potential assembly needs t order >= 3")


def _emit(config: RunConfig, doc: dict, summary: str) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(summary, file=sys.stderr)


def parse_target(text: str) -> dict:
    if text == "point":
        return {"type": "point"}
    if text.startswith("projective:"):
        tail = text.split(":", 1)[1]
        if not tail.isdigit():
            raise ValueError(f"projective target needs a dimension: {text!r}")
        return {"type": "projective", "n": int(tail)}
    if text.startswith("custom:"):
        path = text.split(":", 1)[1]
        with open(path, encoding="utf-8") as fh:
            ring_doc = json.load(fh)
        return {"type": "custom", "ring": ring_doc}
    raise ValueError(f"unknown target {text!r}")


def _resolve_table(config: RunConfig) -> tuple[KRingPresentation, CorrelatorTable]:
    """Table from --input, or an empty table for the named target."""
    if config.input_path:
        with open(config.input_path, encoding="utf-8") as fh:
            doc = json.load(fh)
        table = load_correlators(doc)
        if config.target is not None:
            named = ring_from_target(parse_target(config.target))
            if named != table.ring:
                raise ValueError(
                    "--target disagrees with the ring of the input table")
        return table.ring, table
    if config.target is None:
        raise ValueError("need --target or --input")
    target_doc = parse_target(config.target)
    ring = ring_from_target(target_doc)
    degree_rank = 0 if target_doc["type"] == "point" else 1
    return ring, CorrelatorTable.empty(ring, degree_rank, target_doc)


def _summary_doc(summary: ResidualSummary) -> dict:
    return summary.to_json_dict()


def cmd_descendent(config: RunConfig, raw_index: str | None) -> int:
    if config.input_path:
        with open(config.input_path, encoding="utf-8") as fh:
            batch = json.load(fh)
        if not isinstance(batch, list) or not all(
                isinstance(idx, list) and all(isinstance(d, int) for d in idx)
                for idx in batch):
            print("batch file must be a JSON array of integer arrays",
                  file=sys.stderr)
            return EXIT_BAD_INPUT
        any_irreducible = False
        lines = []
        for idx in batch:
            try:
                value = str(descendent_euler(idx))
            except NotReducible:
                value = "NotReducible"
                any_irreducible = True
            lines.append(json.dumps({"index": idx, "value": value},
                                    sort_keys=True))
        out = "\n".join(lines) + "\n"
        if config.output_path:
            with open(config.output_path, "w", encoding="utf-8") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
        print(f"evaluated {len(batch)} descendent indices", file=sys.stderr)
        return EXIT_NOT_REDUCIBLE if any_irreducible else EXIT_OK
    if raw_index is None:
        print("give an index like 2,3,0,1 or --input batch.json", file=sys.stderr)
        return EXIT_BAD_INPUT
    exponents = [int(part) for part in raw_index.split(",")]
    try:
        value = descendent_euler(exponents)
    except NotReducible as exc:
        sys.stdout.write("NotReducible\n")
        print(str(exc), file=sys.stderr)
        return EXIT_NOT_REDUCIBLE
    sys.stdout.write(f"{value}\n")
    print(f"E({len(exponents)}; {exponents}) computed", file=sys.stderr)
    return EXIT_OK


def cmd_potential(config: RunConfig) -> int:
    config.validate_orders(need_potential=True)
    ring, table = _resolve_table(config)
    potential = assemble_potential(ring, table, config.t_order,
                                   config.novikov_order)
    _emit(config, potential.series.to_json_dict(),
          f"potential assembled at t order {config.t_order}, "
          f"Novikov order {config.novikov_order}")
    return EXIT_OK


def cmd_frobenius_check(config: RunConfig) -> int:
    config.validate_orders(need_potential=True)
    ring, table = _resolve_table(config)
    potential = assemble_potential(ring, table, config.t_order,
                                   config.novikov_order)
    fd = build_frobenius_data(potential)
    wdvv = wdvv_residual(fd)
    flat = flatness_residuals(fd)
    unit = unit_residual(fd)
    classical = classical_limit_residual(fd)
    doc = {
        "certified_orders": {
            "potential_t": config.t_order,
            "novikov": config.novikov_order,
            "windows": {
                "wdvv": wdvv.window,
                "r1": flat.r1.window,
                "r2": flat.r2.window,
                "levicivita": flat.levi_civita.window,
                "metric": flat.metric.window,
                "unit": unit.window,
                "q0_classical": classical.window,
            },
        },
        "wdvv": _summary_doc(wdvv),
        "flatness": {
            "r1": _summary_doc(flat.r1),
            "r2": _summary_doc(flat.r2),
            "metric": _summary_doc(flat.metric),
        },
        "levicivita": _summary_doc(flat.levi_civita),
        "unit": _summary_doc(unit),
        "q0_classical": _summary_doc(classical),
    }
    all_zero = (wdvv.is_zero and flat.is_zero and unit.is_zero
                and classical.is_zero)
    _emit(config, doc,
          "all residuals exactly zero on certified windows" if all_zero
          else "NONZERO residuals found; see report")
    return EXIT_OK if all_zero else EXIT_RESIDUAL


def cmd_qde_check(config: RunConfig) -> int:
    config.validate_orders(need_potential=True)
    ring, table = _resolve_table(config)
    if not table.descendent_entries:
        if table.target_doc.get("type") == "point":
            table = point_descendent_table(config.t_order + 2, config.desc_order)
            ring = table.ring
        else:
            raise ValueError(
                "qde-check needs descendent correlators; supply --input")
    # Potential three orders higher so the product is certified on the
    # same t window as the derivative of the solution.
    potential = assemble_potential(ring, table, config.t_order + 3,
                                   config.novikov_order,
                                   q_order=config.desc_order)
    fd = build_frobenius_data(potential)
    solution = assemble_fundamental_solution(ring, table, config.t_order,
                                             config.novikov_order,
                                             config.desc_order)
    residuals = qde_residual(solution, fd)
    gwdvv = gwdvv_residuals(solution, fd)
    complete = is_complete(solution)
    doc = {
        "certified_window": residuals[0].window,
        "qde_residuals": [
            {"k": k, **_summary_doc(s)} for k, s in enumerate(residuals)
        ],
        "gwdvv_residuals": [
            {"pair": list(pair), **_summary_doc(s)} for pair, s in gwdvv
        ],
        "complete": complete,
    }
    all_zero = (all(s.is_zero for s in residuals)
                and all(s.is_zero for _, s in gwdvv))
    _emit(config, doc,
          "connection equation and generalized associativity hold exactly"
          if all_zero and complete else "NONZERO residuals found; see report")
    return EXIT_OK if all_zero and complete else EXIT_RESIDUAL


def cmd_table_check(config: RunConfig) -> int:
    if not config.input_path:
        raise ValueError("table-check needs --input")
    with open(config.input_path, encoding="utf-8") as fh:
        doc = json.load(fh)
    table = load_correlators(doc)
    report = table_consistency_check(table)
    _emit(config, report.to_json_dict(),
          f"checked {report.checked_pairs} unit-insertion pairs, "
          f"{len(report.violations)} violations")
    return EXIT_OK if report.ok else EXIT_RESIDUAL


def cmd_kring_info(config: RunConfig) -> int:
    if config.target is None:
        raise ValueError("kring info needs --target")
    ring = ring_from_target(parse_target(config.target))
    _emit(config, ring.to_json_dict(),
          f"rank {ring.rank} presentation, labels {list(ring.labels)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkzero",
        description="Exact genus-zero quantum K-theory calculator.")
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--target",
                        help="point | projective:N | custom:ring.json")
    shared.add_argument("--t-order", type=int, default=6,
                        help="truncation order in the deformation variables")
    shared.add_argument("--q-order", type=int, default=0, dest="novikov_order",
                        help="truncation order in the Novikov variables")
    shared.add_argument("--desc-order", type=int, default=0,
                        help="truncation order in the descendent variable q")
    shared.add_argument("--input", dest="input_path",
                        help="input JSON document")
    shared.add_argument("--output", dest="output_path",
                        help="write the JSON report here instead of stdout")
    shared.add_argument("--seed", type=int, default=0,
                        help="seed for randomized suites; fixed default")

    sub = parser.add_subparsers(dest="command", required=True)
    p_desc = sub.add_parser("descendent", parents=[shared],
                            help="evaluate descendent Euler characteristics")
    p_desc.add_argument("index", nargs="?",
                        help="comma-separated cotangent powers, e.g. 2,3,0,1")
    sub.add_parser("potential", parents=[shared],
                   help="assemble and print the potential")
    sub.add_parser("frobenius-check", parents=[shared],
                   help="verify WDVV, flatness, unit, and classical limits")
    sub.add_parser("qde-check", parents=[shared],
                   help="verify the quantum differential equation")
    sub.add_parser("table-check", parents=[shared],
                   help="check a correlator table for unit-insertion consistency")
    p_kring = sub.add_parser("kring", parents=[shared],
                             help="inspect ring presentations")
    p_kring.add_argument("action", choices=["info"])
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit:
        # argparse already printed a usage message
        return EXIT_BAD_INPUT

    config = RunConfig(
        command=args.command,
        target=args.target,
        t_order=args.t_order,
        novikov_order=args.novikov_order,
        desc_order=args.desc_order,
        input_path=args.input_path,
        output_path=args.output_path,
        seed=args.seed,
    )
    try:
        if config.command == "descendent":
            return cmd_descendent(config, args.index)
        if config.command == "potential":
            return cmd_potential(config)
        if config.command == "frobenius-check":
            return cmd_frobenius_check(config)
        if config.command == "qde-check":
            return cmd_qde_check(config)
        if config.command == "table-check":
            return cmd_table_check(config)
        if config.command == "kring":
            return cmd_kring_info(config)
        raise AssertionError(f"unhandled command {config.command}")
    except NotReducible as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NOT_REDUCIBLE
    except (QKError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
