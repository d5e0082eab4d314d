"""Command-line surface.

Exit codes: 0 on success (or witness found), 1 on a mathematical negative
(not nilpotent, no witness, a verification check failing), 2 on usage or
format errors.  The split lets shell pipelines branch on verdicts without
parsing output.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import acceptance
from .algebra import (
    EvolutionMatrix,
    graph_of,
    is_nilpotent,
    triangular_witness,
    type_signature,
)
from .constructions import (
    ChainParams,
    ElrParams,
    TypeOnesParams,
    build_bnk,
    build_chain,
    build_elr,
    build_eub,
    build_ma1,
    build_ma12,
    build_ma2,
    build_type_ones,
    enumerate_elr,
    enumerate_type_ones,
)
from .errors import EvokitError, NotNilpotentError, ParseError
from .field import make_field
from .io import dump_algebra, load_algebra
from .iso import (
    DEFAULT_BUDGET,
    MODE_COUNT_ALL,
    MODE_FIRST,
    family_noniso_report,
    fingerprint,
    iso_search,
    prepare_search_pair,
    witness_to_original,
)

FAMILIES = ("type_ones", "bnk", "elr", "ma1", "ma2", "ma12", "eub", "chain")


def _build_from_params(field, family: str, params: dict):
    try:
        if family == "type_ones":
            return build_type_ones(
                field,
                TypeOnesParams(
                    n=params["n"], k=params["k"],
                    gram=tuple(params["gram"]),
                    eigen=tuple(tuple(r) for r in params.get("eigen", ())),
                ),
            )
        if family == "bnk":
            return build_bnk(field, params["n"], params["k"])
        if family == "elr":
            return build_elr(
                field,
                ElrParams(
                    l=params["l"], n=params["n"], r=params["r"],
                    gram=tuple(params["gram"]),
                    u_coords=tuple(params["u_coords"]),
                ),
            )
        if family == "ma1":
            return build_ma1(field, params["l"], params["n"], params["r"], params["alpha"])
        if family == "ma2":
            return build_ma2(
                field, params["l"], params["n"], params["r"], params["c"], params["alpha"]
            )
        if family == "ma12":
            return build_ma12(
                field, params["l"], params["n"], params["r"], params["alpha_rows"]
            )
        if family == "eub":
            return build_eub(field, params["n"], tuple(params["gram"]))
        if family == "chain":
            return build_chain(
                field,
                ChainParams(
                    dims=tuple(params["dims"]),
                    squares=tuple(tuple(tuple(v) for v in level) for level in params["squares"]),
                ),
            )
    except KeyError as exc:
        raise ParseError(f"missing parameter {exc.args[0]!r} for family {family}") from exc
    raise ParseError(f"unknown family {family!r}")


def _family_members(field, family: str, grid: dict):
    try:
        if family == "type_ones":
            return [
                (f"gram={p.gram},eigen={p.eigen}", m)
                for p, m in enumerate_type_ones(field, grid["n"], grid["k"])
            ]
        if family == "elr":
            return [
                (f"gram={p.gram},u={p.u_coords}", m)
                for p, m in enumerate_elr(field, grid["l"], grid["n"], grid["r"])
            ]
    except KeyError as exc:
        raise ParseError(f"missing grid parameter {exc.args[0]!r}") from exc
    raise ParseError(f"family {family!r} has no finite enumerator (use type_ones or elr)")


def _load_params(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid params JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("params must be a JSON object")
    return data


def cmd_build(args) -> int:
    field = make_field(args.field)
    mat = _build_from_params(field, args.family, _load_params(args.params))
    text = dump_algebra(mat, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return 0


def cmd_analyze(args) -> int:
    mat = load_algebra(args.file)
    tensor = mat.to_tensor() if isinstance(mat, EvolutionMatrix) else mat
    result = is_nilpotent(tensor)
    print(f"field: {tensor.field.spec}")
    print(f"dim: {tensor.dim}")
    print(f"ann_dims: {list(result.ann.dims)}")
    print(f"power_dims: {list(result.powers.dims)} ({result.powers.status})")
    if result.nilpotent:
        print("nilpotent: yes")
        print(f"type: {list(type_signature(tensor))}")
    else:
        print("nilpotent: no")
        print("type: undefined (series stabilizes below the whole algebra)")
    if isinstance(mat, EvolutionMatrix):
        witness = triangular_witness(mat)
        if witness is None:
            print("triangular_witness: none (inconclusive; the series verdict rules)")
        else:
            print(f"triangular_witness: {[i + 1 for i in witness]}")
    return 0 if result.nilpotent else 1


def cmd_graph(args) -> int:
    mat = load_algebra(args.file)
    if not isinstance(mat, EvolutionMatrix):
        raise ParseError("graphs are defined for evolution-form files only")
    dot = graph_of(mat).to_dot()
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(dot)
    else:
        sys.stdout.write(dot)
    return 0


def cmd_fingerprint(args) -> int:
    mat = load_algebra(args.file)
    fp = fingerprint(mat)
    print(json.dumps(fp.as_dict(), indent=2, sort_keys=True))
    return 0


def _witness_json(field, witness):
    return [[field.format_scalar(a) for a in row] for row in witness.rows]


def cmd_iso(args) -> int:
    src = load_algebra(args.src)
    dst = load_algebra(args.dst)
    if args.field is not None:
        wanted = make_field(args.field)
        if src.field != wanted or dst.field != wanted:
            raise ParseError(f"files are not over {args.field}")
    from .errors import IncompatibleChains

    mode = MODE_COUNT_ALL if args.count_all else MODE_FIRST
    try:
        s2, d2, pattern, ps, pd = prepare_search_pair(src, dst)
    except IncompatibleChains as exc:
        print(json.dumps({
            "visited": 0,
            "witnesses": [],
            "verdict": "NOT_FOUND",
            "note": f"never isomorphic: {exc}",
        }, indent=2))
        return 1
    result = iso_search(s2, d2, pattern, mode=mode, budget=args.budget)
    field = s2.field
    witnesses = [
        witness_to_original(field, w, ps, pd) for w in result.witnesses
    ]
    print(json.dumps({
        "visited": result.visited,
        "free_entries": pattern.free_count,
        "witnesses": [_witness_json(field, w) for w in witnesses],
        "verdict": result.verdict,
    }, indent=2))
    return 0 if result.witnesses else 1


def cmd_noniso_family(args) -> int:
    src = load_algebra(args.src)
    members = _family_members(src.field, args.family, _load_params(args.params_grid))
    report = family_noniso_report(src, members, budget=args.budget)
    payload = {
        "family": args.family,
        "members": len(report.members),
        "verdict": report.verdict,
        "visited": report.total_visited,
        "outcomes": [
            {
                "label": m.label,
                "status": m.status,
                "witness": _witness_json(src.field, m.witness) if m.witness else None,
            }
            for m in report.members
        ],
    }
    print(json.dumps(payload, indent=2))
    if report.verdict == "WITNESSES_FOUND":
        return 0
    if report.verdict == "NONE_ISOMORPHIC":
        return 1
    return 2


def cmd_verify_paper(args) -> int:
    numbers = None
    if args.only:
        numbers = {int(x) for x in args.only.split(",")}
    results = acceptance.run_all(budget=args.budget, numbers=numbers)
    for res in results:
        print(res.line())
    passed = sum(1 for r in results if r.status == "PASS")
    print(f"{passed}/{len(results)} criteria passed")
    return 0 if all(r.status == "PASS" for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evokit",
        description="Exact toolkit for finite-dimensional evolution algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="emit an algebra file for a named family")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--field", default="Q", help="Q or F<p> (default Q)")
    p.add_argument("--params", required=True, help="family parameters as JSON")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("analyze", help="series, powers, type, and witness of a file")
    p.add_argument("file")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("graph", help="DOT export of the attached graph")
    p.add_argument("file")
    p.add_argument("--dot", default=None, help="output file (default stdout)")
    p.set_defaults(fn=cmd_graph)

    p = sub.add_parser("fingerprint", help="basis-free invariants as JSON")
    p.add_argument("file")
    p.set_defaults(fn=cmd_fingerprint)

    p = sub.add_parser("iso", help="filtration-constrained isomorphism search")
    p.add_argument("--src", required=True)
    p.add_argument("--dst", required=True)
    p.add_argument("--field", default=None, help="assert both files use this field")
    p.add_argument("--count-all", action="store_true")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(fn=cmd_iso)

    p = sub.add_parser("noniso-family", help="search a source against a whole family")
    p.add_argument("--src", required=True)
    p.add_argument("--family", required=True, choices=("type_ones", "elr"))
    p.add_argument("--params-grid", required=True, help="family grid as JSON")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(fn=cmd_noniso_family)

    p = sub.add_parser("verify-paper", help="run the bundled verification suite")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--only", default=None, help="comma-separated criterion numbers")
    p.set_defaults(fn=cmd_verify_paper)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except NotNilpotentError as exc:
        print(f"not nilpotent: {exc}", file=sys.stderr)
        return 1
    except (EvokitError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
