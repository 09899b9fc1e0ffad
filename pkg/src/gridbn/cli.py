"""Command-line front end: compile, infer, optimize, report, serve.

Exit codes: 0 on success, 1 on domain errors (bad data, impossible
evidence), 2 on usage errors (unknown flags, malformed evidence syntax,
unknown nodes or states).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from .elicitation import (
    AggregationPolicy,
    assemble_network,
    load_layout,
    load_survey,
)
from .errors import EvidenceError, ImpossibleEvidenceError, ModelError
from .inference import validate_evidence
from .model import Network, dump_network, load_network, validate
from .noisy_or import divorce
from .optimize import load_costs
from .payloads import (
    availability_payload,
    capacity_payload,
    optimize_payload,
    posterior_payload,
    survey_mix_payload,
)
from .reports import load_profile, load_rules

DEFAULT_PORT = 8347


class UsageError(Exception):
    """Bad command usage; reported with exit code 2."""


def data_path(name: str) -> Path:
    """Path of a packaged data file (fixture survey, layout, presets)."""
    return Path(str(resources.files("gridbn").joinpath("data", name)))


def _parse_evidence(network: Network, pairs: list[str]) -> dict[str, str]:
    evidence: dict[str, str] = {}
    for pair in pairs:
        if "=" not in pair:
            raise UsageError(f"--set expects Node=state, got {pair!r}")
        node_id, state = pair.split("=", 1)
        evidence[node_id] = state
    try:
        validate_evidence(network, evidence)
    except EvidenceError as exc:
        raise UsageError(str(exc)) from None
    return evidence


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _fmt_pct(x: float | None) -> str:
    return "" if x is None else f"{100 * x:.1f}%"


def _fmt_gw(x: float | None) -> str:
    return "" if x is None else f"{x:.1f}"


def _render_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_compile(args: argparse.Namespace) -> int:
    responses = load_survey(args.survey)
    layout = load_layout(args.layout)
    policy = AggregationPolicy(args.policy)
    network = assemble_network(responses, layout, policy)
    if args.max_parents is not None:
        network, plan = divorce(network, args.max_parents)
        if plan.introduced:
            print(f"divorcing introduced {len(plan.introduced)} aggregator node(s)")
    report = validate(network)
    if not report.ok:
        print(report, file=sys.stderr)
        return 1
    dump_network(network, args.out)
    print(
        f"wrote {args.out}: {len(network)} nodes "
        f"({len(responses)} experts, policy {policy.weighting}), validation clean"
    )
    return 0


def cmd_infer(args: argparse.Namespace) -> int:
    network = load_network(args.network)
    evidence = _parse_evidence(network, args.set or [])
    payload = posterior_payload(network, evidence, args.query or None)
    if args.json:
        _print_json(payload)
        return 0

    if evidence:
        print("evidence: " + ", ".join(f"{k}={v}" for k, v in sorted(evidence.items())))
        print(f"evidence probability: {_fmt_pct(payload['evidence_probability'])}")
    else:
        print("evidence: none (baseline)")
    rows = []
    for node_id, entry in payload["posteriors"].items():
        dist = "  ".join(
            f"{s}={100 * p:.1f}%" for s, p in zip(entry["states"], entry["probabilities"])
        )
        rows.append([node_id, dist, _fmt_gw(entry.get("gw"))])
    print(_render_table(["node", "posterior", "GW"], rows))
    if "scenario" in payload:
        sc = payload["scenario"]
        print()
        print(
            "scenarios: "
            + "  ".join(f"{k}={100 * v:.1f}%" for k, v in sc["probabilities"].items())
        )
        print(
            f"bulk {_fmt_pct(sc['bulk_marginal'])} ({_fmt_gw(sc['bulk_gw'])} GW)  "
            f"balance {_fmt_pct(sc['balance_marginal'])} ({_fmt_gw(sc['balance_gw'])} GW)"
        )
    return 0


def cmd_optimize(args: argparse.Namespace) -> int:
    network = load_network(args.network)
    costs = load_costs(args.costs) if args.costs else load_costs(data_path("construction_costs.json"))
    if "=" not in args.target:
        raise UsageError(f"--target expects Node=state, got {args.target!r}")
    target_node, target_state = args.target.split("=", 1)
    if target_node not in network:
        raise UsageError(f"target node {target_node!r} does not exist")
    node = network.node(target_node)
    if target_state not in node.states:
        raise UsageError(
            f"unknown target state {target_state!r}; valid states: {list(node.states)}"
        )
    weights = (args.w1, args.w2, args.w3)
    if any(w <= 0 for w in weights):
        raise UsageError("weights w1, w2, w3 must all be > 0")
    candidates = args.candidates or sorted(costs.costs)
    payload = optimize_payload(network, (target_node, target_state), costs, weights, candidates)
    if args.json:
        _print_json(payload)
        return 0

    print(
        f"target {target_node}={target_state}: "
        f"{_fmt_pct(payload['initial_probability'])} -> {_fmt_pct(payload['final_probability'])}"
    )
    rows = []
    for row in payload["table"]:
        rows.append(
            [
                row["component"] or "(start)",
                row["state"] or "",
                _fmt_gw(row["a_priori_gw"]),
                _fmt_gw(row["proposed_gw"]),
                _fmt_gw(row["delta_gw"]),
                "" if row["cost_per_gw"] is None else f"{row['cost_per_gw']:g}",
                _fmt_pct(row["evidence_joint"]),
                "" if row["impact"] is None else f"{100 * row['impact']:.1f}%",
                _fmt_pct(row["cumulative_probability"]),
            ]
        )
    print(
        _render_table(
            [
                "component",
                "state",
                "a priori GW",
                "proposed GW",
                "delta GW",
                "cost/GW",
                "joint",
                "effect",
                "target",
            ],
            rows,
        )
    )
    if payload["termination"] != "complete":
        print(payload["termination"])
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    network = load_network(args.network)
    evidence = _parse_evidence(network, args.set or [])
    rules = load_rules(
        args.rules or data_path("classification_rules.json"), preset=args.rules_preset
    )
    profile = load_profile(args.profile or data_path("availability_default.json"))

    payload = {
        "survey_mix": survey_mix_payload(network, rules),
        "capacity": capacity_payload(network, evidence, rules),
        "availability": availability_payload(
            network, evidence, profile, include_import=args.include_import
        ),
    }
    if "roles" in network.metadata:
        payload["scenario"] = posterior_payload(network, evidence)["scenario"]
    if args.json:
        _print_json(payload)
        return 0

    mix = payload["survey_mix"]
    if mix["components"]:
        print("panel capacity mix (survey aggregates)")
        rows = [
            [c["component"], _fmt_gw(c["mean_gw"]), f"{c['mean_confidence']:.1f}"]
            for c in mix["components"]
        ]
        print(_render_table(["component", "mean GW", "confidence %"], rows))
        buckets = mix.get("bucket_totals_gw", {})
        print(
            "bucket totals: "
            + "  ".join(f"{b}={_fmt_gw(v)} GW" for b, v in sorted(buckets.items()))
        )
        print()

    cap = payload["capacity"]
    print("capacity values under evidence" if evidence else "capacity values (baseline)")
    rows = [
        [c["component"], _fmt_pct(c["posterior"][1]), _fmt_gw(c["gw"])]
        for c in cap["components"]
    ]
    print(_render_table(["component", "P(>= mean)", "GW"], rows))
    print(f"total {_fmt_gw(cap['total_gw'])} GW")
    print()

    avail = payload["availability"]
    print("availability at system peaks")
    rows = [
        [
            e["component"],
            _fmt_gw(e["capacity_gw"]),
            _fmt_gw(e["peak_hour_gw"]),
            _fmt_gw(e["peak_season_gw"]),
        ]
        for e in avail["entries"]
    ]
    print(_render_table(["component", "GW", "peak hour", "peak season"], rows))
    print(
        f"totals: peak hour {_fmt_gw(avail['peak_hour_total_gw'])} GW, "
        f"peak season {_fmt_gw(avail['peak_season_total_gw'])} GW"
    )
    if args.include_import:
        print(
            f"with import ({_fmt_gw(avail['import_gw'])} GW): "
            f"peak hour {_fmt_gw(avail['peak_hour_total_with_import_gw'])} GW, "
            f"peak season {_fmt_gw(avail['peak_season_total_with_import_gw'])} GW"
        )
    if "scenario" in payload:
        sc = payload["scenario"]
        print()
        print(
            "scenarios: "
            + "  ".join(f"{k}={100 * v:.1f}%" for k, v in sc["probabilities"].items())
        )
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    network = load_network(args.network)
    report = validate(network)
    if not report.ok:
        print(report, file=sys.stderr)
        return 1
    app = create_app(network)
    port = args.port or int(os.environ.get("GRIDBN_PORT", DEFAULT_PORT))
    try:
        uvicorn.run(app, host=args.host, port=port, log_level="warning")
    except OSError as exc:
        print(f"cannot bind port {port}: {exc}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridbn",
        description="Expert-elicited Bayesian networks for grid capacity scenario analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a survey into a network file")
    p.add_argument("--survey", required=True, help="survey JSON path")
    p.add_argument("--layout", required=True, help="layout JSON path")
    p.add_argument("--out", required=True, help="output network JSON path")
    p.add_argument(
        "--policy",
        choices=["uniform", "confidence_linear"],
        default="confidence_linear",
        help="expert weighting (default: confidence_linear)",
    )
    p.add_argument(
        "--max-parents",
        type=int,
        default=None,
        help="divorce noisy-OR children down to this parent count",
    )
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("infer", help="posteriors and scenario summary under evidence")
    p.add_argument("--network", required=True)
    p.add_argument("--set", action="append", metavar="NODE=STATE", help="evidence; repeatable")
    p.add_argument("--query", action="append", metavar="NODE", help="restrict queried nodes")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("optimize", help="greedy target optimization over components")
    p.add_argument("--network", required=True)
    p.add_argument("--costs", help="cost JSON path (default: packaged costs)")
    p.add_argument("--target", required=True, metavar="NODE=STATE")
    p.add_argument("--w1", type=float, default=1.0, help="impact weight (default 1)")
    p.add_argument("--w2", type=float, default=1.0, help="evidence weight (default 1)")
    p.add_argument("--w3", type=float, default=1.0, help="cost weight (default 1)")
    p.add_argument(
        "--candidates",
        nargs="*",
        help="component ids to optimize (default: every component with a cost)",
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("report", help="capacity, bucket, availability, scenario reports")
    p.add_argument("--network", required=True)
    p.add_argument("--set", action="append", metavar="NODE=STATE")
    p.add_argument("--rules", help="classification rules JSON (default: packaged)")
    p.add_argument("--rules-preset", default="default")
    p.add_argument("--profile", help="availability profile JSON (default: packaged)")
    p.add_argument(
        "--include-import",
        action="store_true",
        help="add anticipated import capacity to availability totals",
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="HTTP API for the explorer UI")
    p.add_argument("--network", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument(
        "--port",
        type=int,
        default=None,
        help=f"port (default: GRIDBN_PORT env var or {DEFAULT_PORT})",
    )
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ImpossibleEvidenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
