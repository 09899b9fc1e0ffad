"""JSON-ready payload builders shared by the CLI and the HTTP service.

Both front ends call these functions, so their machine outputs are
structurally identical by construction.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .inference import Evidence, posterior
from .model import Network, Node, state_value
from .optimize import CostTable, OptimizationPlan, optimize, plan_report
from .reports import (
    AvailabilityProfile,
    ClassificationRules,
    availability,
    bucket_sums,
    capacity_table,
    scenario_summary,
)


def _node_listing(node: Node) -> dict:
    entry: dict = {
        "id": node.id,
        "layer": node.layer.value,
        "states": list(node.states),
        "parents": list(node.parents),
    }
    if node.value_map is not None:
        entry["value_map"] = {
            "threshold": node.value_map.threshold,
            "low_submean": node.value_map.low_submean,
            "high_submean": node.value_map.high_submean,
        }
    return entry


def network_listing(network: Network) -> dict:
    """User-facing projection of the model; divorce aggregators omitted."""
    nodes = sorted(network.user_nodes(), key=lambda n: (n.layer.value, n.id))
    return {
        "metadata": {
            "name": network.metadata.get("name"),
            "policy": network.metadata.get("policy"),
            "roles": network.metadata.get("roles", {}),
        },
        "nodes": [_node_listing(n) for n in nodes],
    }


def posterior_payload(
    network: Network, evidence: Evidence, query: Sequence[str] | None = None
) -> dict:
    """Posteriors, GW values, and the scenario summary under evidence."""
    if query:
        ids = list(dict.fromkeys(query))
    else:
        ids = [n.id for n in sorted(network.user_nodes(), key=lambda n: (n.layer.value, n.id))]
    result = posterior(network, evidence, ids)

    posteriors = {}
    for node_id in ids:
        node = network.node(node_id)
        vector = result[node_id]
        entry: dict = {
            "states": list(node.states),
            "probabilities": [float(p) for p in vector],
        }
        if node.value_map is not None and node.n_states == 2:
            entry["gw"] = state_value(node, vector)
        posteriors[node_id] = entry

    payload: dict = {
        "evidence": dict(sorted(evidence.items())),
        "log_evidence": result.log_evidence,
        "evidence_probability": result.evidence_probability,
        "posteriors": posteriors,
    }
    if "roles" in network.metadata:
        summary = scenario_summary(network, evidence)
        payload["scenario"] = {
            "probabilities": summary.scenario_probabilities,
            "bulk_marginal": summary.bulk_marginal,
            "balance_marginal": summary.balance_marginal,
            "bulk_gw": summary.bulk_gw,
            "balance_gw": summary.balance_gw,
        }
    return payload


def plan_payload(network: Network, plan: OptimizationPlan) -> dict:
    value_maps = {
        n.id: n.value_map for n in network.user_nodes() if n.value_map is not None
    }
    return {
        "target": {"node": plan.target_node, "state": plan.target_state},
        "weights": list(plan.weights),
        "initial_probability": plan.initial_probability,
        "final_probability": plan.final_probability,
        "termination": plan.termination,
        "steps": [
            {
                "component": step.component,
                "state": step.state,
                "proposed_gw": step.proposed_gw,
                "impact": step.impact,
                "evidence_joint": step.evidence_joint,
                "cost_per_gw": step.cost,
                "score": step.score,
                "cumulative_probability": step.cumulative_probability,
            }
            for step in plan.steps
        ],
        "table": plan_report(plan, value_maps),
    }


def optimize_payload(
    network: Network,
    target: tuple[str, str],
    costs: CostTable,
    weights: tuple[float, float, float],
    candidates: Sequence[str],
) -> dict:
    plan = optimize(network, target, costs, weights, candidates)
    return plan_payload(network, plan)


def capacity_payload(
    network: Network,
    evidence: Evidence,
    rules: ClassificationRules | None = None,
) -> dict:
    rows = capacity_table(network, evidence)
    payload: dict = {
        "evidence": dict(sorted(evidence.items())),
        "components": [
            {
                "component": row.component,
                "posterior": list(row.posterior),
                "gw": row.gw,
            }
            for row in rows
        ],
        "total_gw": float(sum(row.gw for row in rows)),
    }
    if rules is not None:
        payload["bucket_totals_gw"] = bucket_sums(rows, rules)
    return payload


def availability_payload(
    network: Network,
    evidence: Evidence,
    profile: AvailabilityProfile,
    include_import: bool = False,
) -> dict:
    rows = capacity_table(network, evidence)
    report = availability(rows, profile)
    payload: dict = {
        "evidence": dict(sorted(evidence.items())),
        "entries": [
            {
                "component": e.component,
                "capacity_gw": e.capacity_gw,
                "peak_hour_gw": e.peak_hour_gw,
                "peak_season_gw": e.peak_season_gw,
            }
            for e in report.entries
        ],
        "peak_hour_total_gw": report.peak_hour_total_gw,
        "peak_season_total_gw": report.peak_season_total_gw,
    }
    if include_import:
        import_gw = _import_capacity(network)
        payload["import_gw"] = import_gw
        payload["peak_hour_total_with_import_gw"] = report.peak_hour_total_gw + import_gw
        payload["peak_season_total_with_import_gw"] = (
            report.peak_season_total_gw + import_gw
        )
    return payload


def _import_capacity(network: Network) -> float:
    """Anticipated import capacity from the survey aggregates, if recorded."""
    aggregates: Mapping = network.metadata.get("survey_aggregates", {})
    for comp, agg in aggregates.items():
        if comp.lower().startswith("import"):
            return float(agg["mean_gw"])
    return 0.0


def survey_mix_payload(network: Network, rules: ClassificationRules | None = None) -> dict:
    """Panel capacity-mix aggregates recorded at compile time."""
    aggregates: Mapping = network.metadata.get("survey_aggregates", {})
    components = [
        {
            "component": comp,
            "mean_gw": agg["mean_gw"],
            "low_submean_gw": agg["low_submean_gw"],
            "high_submean_gw": agg["high_submean_gw"],
            "mean_confidence": agg["mean_confidence"],
        }
        for comp, agg in sorted(aggregates.items())
    ]
    payload: dict = {
        "components": components,
        "total_gw": float(sum(c["mean_gw"] for c in components)),
    }
    if rules is not None and components:
        totals = {bucket: 0.0 for bucket in ("bulk", "balancing", "variable", "import", "other")}
        for c in components:
            totals[rules.bucket_of(c["component"])] += c["mean_gw"]
        payload["bucket_totals_gw"] = totals
    return payload
