"""Command-line interface.

Subcommands: validate, infer, solve, to-problog, from-problog, subset,
gen-dataset, wep, classify, score, baseline, stats. Global flags ``--seed``,
``--format human|machine`` and ``--precision`` may appear before or after the
subcommand.

Exit codes: 0 on success, 1 on domain errors (the message names the error
type), 2 on usage errors. No environment variables are consulted; behavior is
controlled by explicit flags only.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import dataset as ds
from . import metrics as mt
from . import netops
from .errors import BayesqaError, NetworkFormatError
from .inference import conditional_query, eliminate
from .model import load_network, network_from_dict, network_to_json, validate
from .problog import (
    bn_to_problog,
    enumerate_worlds,
    evaluate,
    format_atom,
    parse,
    problog_to_bn,
    serialize,
)
from .wep import prob_to_wep, wep_to_prob

DEFAULT_SEED = 0
DEFAULT_PRECISION = 9


def _fmt(value: float, args: argparse.Namespace) -> str:
    return f"{value:.{args.precision}f}"


def _emit(args: argparse.Namespace, human: list[str], machine: object) -> None:
    if args.format == "machine":
        print(json.dumps(machine, ensure_ascii=False))
    else:
        for line in human:
            print(line)


def _binding(text: str, parser: argparse.ArgumentParser) -> tuple[str, str]:
    var, sep, state = text.partition("=")
    if not sep or not var or not state:
        parser.error(f"expected VARIABLE=STATE, got {text!r}")
    return var, state


def _load_json(path: str) -> object:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise NetworkFormatError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"{path}: not valid JSON ({exc})") from None


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise NetworkFormatError(f"{path}: no such file") from None


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    doc = _load_json(args.network)
    net = network_from_dict(doc, renormalize=args.renormalize, check=False)
    problems = validate(net)
    human = (
        [f"OK: {net.name} ({len(net.variables)} variables)"]
        if not problems
        else [str(p) for p in problems]
    )
    _emit(
        args,
        human,
        {
            "valid": not problems,
            "network": net.name,
            "violations": [
                {"kind": p.kind, "location": p.location, "message": p.message}
                for p in problems
            ],
        },
    )
    return 0 if not problems else 1


def cmd_infer(args: argparse.Namespace) -> int:
    net = load_network(args.network)
    qvar, qstate = args.query
    evidence = dict(args.evidence)
    engine = conditional_query if args.method == "enumeration" else eliminate
    result = engine(net, qvar, qstate, evidence)
    given = ", ".join(f"{v}={s}" for v, s in sorted(evidence.items()))
    label = f"P({qvar}={qstate}" + (f" | {given})" if given else ")")
    _emit(
        args,
        [f"{label} = {_fmt(result.probability, args)}"],
        {"probability": result.probability, "method": result.method},
    )
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    program = parse(_read_text(args.program))
    if args.method == "worlds":
        answers = enumerate_worlds(program)
    else:
        answers = evaluate(program, method=args.method)
    human = [f"{format_atom(atom)}:\t{_fmt(p, args)}" for atom, p in answers.items()]
    _emit(
        args,
        human,
        {"results": [{"atom": format_atom(a), "probability": p} for a, p in answers.items()]},
    )
    return 0


def cmd_to_problog(args: argparse.Namespace) -> int:
    net = load_network(args.network)
    text = serialize(bn_to_problog(net, entity=args.entity))
    _write_or_print(text, args.out)
    return 0


def cmd_from_problog(args: argparse.Namespace) -> int:
    program = parse(_read_text(args.program))
    net = problog_to_bn(program, name=args.name)
    _write_or_print(network_to_json(net), args.out)
    return 0


def cmd_subset(args: argparse.Namespace) -> int:
    net = load_network(args.network)
    sub = netops.subset(net, args.keep)
    _write_or_print(network_to_json(sub), args.out)
    return 0


def cmd_gen_dataset(args: argparse.Namespace) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    kinds = ("numeric", "wep") if args.kind == "both" else (args.kind,)
    all_instances = []
    programs = 0
    for k, path in enumerate(args.networks):
        net = load_network(path)
        instances = ds.generate_dataset(
            net,
            args.count,
            args.seed,
            workers=args.workers,
            second_closest_prob=args.second_closest,
            stream=k,
        )
        for inst in instances:
            program = ds.instance_program(net, inst)
            (outdir / f"{inst.id}.pl").write_text(serialize(program), encoding="utf-8")
            programs += 1
            all_instances.append(ds.filter_premises(inst, kinds))
    dataset_path = outdir / "dataset.jsonl"
    ds.save_dataset(all_instances, dataset_path)
    _emit(
        args,
        [f"wrote {len(all_instances)} instance(s) to {dataset_path} (+{programs} program files)"],
        {"instances": len(all_instances), "dataset": str(dataset_path), "programs": programs},
    )
    return 0


def cmd_wep(args: argparse.Namespace) -> int:
    if args.phrase is not None:
        anchor = wep_to_prob(args.phrase)
        _emit(args, [_fmt(anchor, args)], {"phrase": args.phrase, "anchor": anchor})
        return 0
    rng = np.random.default_rng(np.random.SeedSequence(entropy=args.seed))
    pick = prob_to_wep(args.prob, rng, second_closest_prob=args.second_closest)
    _emit(
        args,
        [pick.phrase],
        {
            "probability": args.prob,
            "phrase": pick.phrase,
            "used_second_closest": pick.used_second_closest,
        },
    )
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    net = load_network(args.network)
    types, primary = ds.classify_reasoning(net, args.evidence, args.query)
    human = [f"types: {', '.join(types) if types else '(none)'}", f"primary: {primary}"]
    _emit(args, human, {"reasoning_types": list(types), "primary_type": primary})
    return 0


def _report_lines(report: mt.MetricsReport, args: argparse.Namespace) -> list[str]:
    def line(label: str, b: mt.MetricsBlock) -> str:
        rmse_ne = _fmt(b.rmse_non_error, args) if b.rmse_non_error is not None else "n/a"
        return (
            f"{label}: n={b.n} correct={b.pct_correct:.1f}% wrong={b.pct_wrong:.1f}% "
            f"error={b.pct_error:.1f}% rmse50={_fmt(b.rmse_50, args)} rmse_nonerror={rmse_ne}"
        )

    out = [line("overall", report.overall)]
    for section, groups in (
        ("reasoning", report.by_reasoning),
        ("network", report.by_network),
        ("premises", report.by_premises),
    ):
        for key, block in groups.items():
            out.append(line(f"{section}[{key}]", block))
    return out


def _bucket_edges(text: str | None, parser: argparse.ArgumentParser) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        parser.error(f"--buckets expects comma-separated integers, got {text!r}")


def cmd_score(args: argparse.Namespace) -> int:
    instances = ds.load_dataset(args.dataset)
    predictions = mt.load_predictions(args.predictions)
    report = mt.score(instances, predictions, bucket_edges=args.bucket_edges)
    _emit(args, _report_lines(report, args), mt.report_to_dict(report))
    return 0


def cmd_baseline(args: argparse.Namespace) -> int:
    instances = ds.load_dataset(args.dataset)
    predictions = mt.baseline_predictions(instances, value=args.value)
    if args.out:
        mt.save_predictions(predictions, args.out)
    report = mt.score(instances, predictions, bucket_edges=args.bucket_edges)
    _emit(args, _report_lines(report, args), mt.report_to_dict(report))
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    networks = [load_network(path) for path in args.networks]
    instances = ds.load_dataset(args.dataset) if args.dataset else []
    stats = ds.dataset_stats(networks, instances)
    fields = [
        ("networks", stats.networks),
        ("variables_total", stats.variables_total),
        ("numeric_premises", stats.numeric_premises),
        ("wep_premises", stats.wep_premises),
        ("evidence_statements", stats.evidence_statements),
        ("queries", stats.queries),
        ("states_per_variable_mean", stats.states_per_variable_mean),
        ("states_per_variable_std", stats.states_per_variable_std),
        ("variables_per_network_mean", stats.variables_per_network_mean),
        ("variables_per_network_std", stats.variables_per_network_std),
        ("premises_per_network_mean", stats.premises_per_network_mean),
        ("premises_per_network_std", stats.premises_per_network_std),
    ]
    human = [
        f"{name}: {_fmt(value, args) if isinstance(value, float) else value}"
        for name, value in fields
    ]
    _emit(args, human, dict(fields))
    return 0


# ---------------------------------------------------------------------------
# parser construction
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subparser from overwriting a flag given before the
    # subcommand with its own default; a flag given after still wins.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)"
    )
    common.add_argument(
        "--format",
        choices=("human", "machine"),
        default=argparse.SUPPRESS,
        help="output format",
    )
    common.add_argument(
        "--precision",
        type=int,
        default=argparse.SUPPRESS,
        help="decimal places for probabilities (default 9)",
    )

    parser = argparse.ArgumentParser(prog="bayesqa", parents=[common], description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, "check a network file against every invariant")
    p.add_argument("network")
    p.add_argument("--renormalize", action="store_true", help="rescale CPT rows before checking")

    p = add("infer", cmd_infer, "conditional query against a network")
    p.add_argument("network")
    p.add_argument("--query", required=True, metavar="VAR=STATE")
    p.add_argument("--evidence", action="append", default=[], metavar="VAR=STATE")
    p.add_argument("--method", choices=("enumeration", "elimination"), default="enumeration")

    p = add("solve", cmd_solve, "answer the queries of a program file")
    p.add_argument("program")
    p.add_argument(
        "--method", choices=("enumeration", "elimination", "worlds"), default="enumeration"
    )

    p = add("to-problog", cmd_to_problog, "encode a network as a program")
    p.add_argument("network")
    p.add_argument("--entity", default=None, help="entity constant (default: network metadata)")
    p.add_argument("-o", "--out", default=None)

    p = add("from-problog", cmd_from_problog, "decode a program into a network file")
    p.add_argument("program")
    p.add_argument("--name", default="program")
    p.add_argument("-o", "--out", default=None)

    p = add("subset", cmd_subset, "extract a subnetwork, marginalizing removed variables")
    p.add_argument("network")
    p.add_argument("--keep", action="append", required=True, metavar="VAR")
    p.add_argument("-o", "--out", default=None)

    p = add("gen-dataset", cmd_gen_dataset, "generate benchmark instances + program files")
    p.add_argument("networks", nargs="+")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--kind", choices=("numeric", "wep", "both"), default="both")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--second-closest", type=float, default=0.1)

    p = add("wep", cmd_wep, "map a probability to a phrase or back")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--prob", type=float)
    group.add_argument("--phrase")
    p.add_argument("--second-closest", type=float, default=0.1)

    p = add("classify", cmd_classify, "reasoning type(s) of a query/evidence pattern")
    p.add_argument("network")
    p.add_argument("--query", required=True, metavar="VAR")
    p.add_argument("--evidence", action="append", default=[], metavar="VAR")

    p = add("score", cmd_score, "score predictions against dataset golds")
    p.add_argument("dataset")
    p.add_argument("predictions")
    p.add_argument("--buckets", default=None, help="premise-count bucket edges, e.g. 5,10,20")

    p = add("baseline", cmd_baseline, "score the constant-0.5 baseline")
    p.add_argument("dataset")
    p.add_argument("--value", type=float, default=0.5)
    p.add_argument("-o", "--out", default=None, help="also write the predictions here")
    p.add_argument("--buckets", default=None)

    p = add("stats", cmd_stats, "corpus statistics for network files (+ optional dataset)")
    p.add_argument("networks", nargs="+")
    p.add_argument("--dataset", default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.seed = getattr(args, "seed", DEFAULT_SEED)
    args.format = getattr(args, "format", "human")
    args.precision = getattr(args, "precision", DEFAULT_PRECISION)

    if getattr(args, "query", None) is not None and args.command == "infer":
        args.query = _binding(args.query, parser)
    if args.command == "infer":
        args.evidence = [_binding(e, parser) for e in args.evidence]
    if args.command in ("score", "baseline"):
        args.bucket_edges = _bucket_edges(args.buckets, parser)
    if args.command == "gen-dataset" and args.count <= 0:
        parser.error("--count must be positive")
    if args.command == "wep" and args.prob is not None and not 0.0 <= args.prob <= 1.0:
        parser.error("--prob must be in [0, 1]")

    try:
        return args.func(args)
    except BayesqaError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: ValueError: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
