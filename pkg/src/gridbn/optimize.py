"""Greedy target optimization over capacity mix components.

Each round scores every remaining (component, state) pair by

    score = w1 * impact * w2 * evidence_joint * w3 / cost_per_gw

where impact is the change the candidate induces in the target state's
posterior, and evidence_joint is the joint probability of all evidence
fixed so far plus the candidate. The best pair becomes evidence and the
search repeats until every component is assigned. Scores are compared
with ties broken by higher impact, then lexicographic component id, then
state order, which makes plans fully deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .errors import ModelError
from .inference import Evidence, joint_probability, posterior
from .model import Network, ValueMap


@dataclass(frozen=True)
class CostTable:
    """Construction cost per GW (millions) for each optimizable component."""

    costs: Mapping[str, float]

    def __post_init__(self) -> None:
        for comp, cost in self.costs.items():
            if not cost > 0:
                raise ModelError(f"cost for {comp!r} must be positive, got {cost}")

    def __getitem__(self, component: str) -> float:
        try:
            return self.costs[component]
        except KeyError:
            raise ModelError(f"no construction cost for component {component!r}") from None

    def __contains__(self, component: str) -> bool:
        return component in self.costs

    def scaled(self, factor: float) -> "CostTable":
        return CostTable({comp: cost * factor for comp, cost in self.costs.items()})


def load_costs(path: str | Path) -> CostTable:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ModelError(f"{path}: cost file must be a JSON object of component -> cost")
    return CostTable({str(k): float(v) for k, v in data.items()})


def score(impact_delta: float, evidence_joint: float, cost: float,
          weights: tuple[float, float, float]) -> float:
    """The greedy selection criterion; with unit weights, impact * joint / cost."""
    w1, w2, w3 = weights
    return w1 * impact_delta * w2 * evidence_joint * w3 / cost


def impact(
    network: Network,
    fixed_evidence: Evidence,
    candidate: tuple[str, str],
    target: tuple[str, str],
) -> float | None:
    """Posterior delta on the target when the candidate is added as evidence.

    Returns None when the combined evidence is impossible (the candidate is
    disqualified rather than raising).
    """
    component, state = candidate
    if component in fixed_evidence:
        raise ModelError(f"candidate {component!r} is already fixed as evidence")
    target_node, target_state = target
    base = posterior(network, fixed_evidence, [target_node])
    base_p = float(base[target_node][network.node(target_node).state_index(target_state)])
    combined = dict(fixed_evidence)
    combined[component] = state
    if joint_probability(network, combined) <= 0.0:
        return None
    with_candidate = posterior(network, combined, [target_node])
    new_p = float(
        with_candidate[target_node][network.node(target_node).state_index(target_state)]
    )
    return new_p - base_p


@dataclass(frozen=True)
class OptimizationStep:
    component: str
    state: str
    state_index: int
    proposed_gw: float
    impact: float
    evidence_joint: float
    cost: float
    score: float
    cumulative_probability: float
    prior_posterior: tuple[float, float]


@dataclass
class OptimizationPlan:
    target_node: str
    target_state: str
    weights: tuple[float, float, float]
    initial_probability: float
    steps: list[OptimizationStep] = field(default_factory=list)
    termination: str = "complete"

    @property
    def final_probability(self) -> float:
        return self.steps[-1].cumulative_probability if self.steps else self.initial_probability

    def evidence_after(self, k: int) -> dict[str, str]:
        """Evidence accumulated by the first k steps."""
        return {step.component: step.state for step in self.steps[:k]}


def optimize(
    network: Network,
    target: tuple[str, str],
    costs: CostTable,
    weights: tuple[float, float, float],
    candidates: Sequence[str],
) -> OptimizationPlan:
    """Greedy plan fixing every candidate component once."""
    target_node, target_state = target
    if target_node not in network:
        raise ModelError(f"target node {target_node!r} does not exist")
    tnode = network.node(target_node)
    target_idx = tnode.state_index(target_state)
    if any(w <= 0 for w in weights):
        raise ModelError("weights must all be positive")
    for comp in candidates:
        if comp not in network:
            raise ModelError(f"candidate {comp!r} does not exist")
        if comp not in costs:
            raise ModelError(f"no construction cost for component {comp!r}")
        if network.node(comp).value_map is None:
            raise ModelError(f"candidate {comp!r} has no value map")
        if network.node(comp).n_states != 2:
            raise ModelError(f"candidate {comp!r} must be binary")

    evidence: dict[str, str] = {}
    initial_p = float(posterior(network, evidence, [target_node])[target_node][target_idx])
    plan = OptimizationPlan(
        target_node=target_node,
        target_state=target_state,
        weights=tuple(weights),
        initial_probability=initial_p,
    )

    remaining = list(dict.fromkeys(candidates))
    while remaining:
        evaluations = []
        queries = [target_node] + remaining
        base = posterior(network, evidence, queries)
        base_p = float(base[target_node][target_idx])
        for comp in remaining:
            node = network.node(comp)
            for state_idx, state in enumerate(node.states):
                combined = dict(evidence)
                combined[comp] = state
                joint = joint_probability(network, combined)
                if joint <= 0.0:
                    continue  # impossible in combination: disqualified this round
                p_new = float(
                    posterior(network, combined, [target_node])[target_node][target_idx]
                )
                delta = p_new - base_p
                evaluations.append(
                    (
                        comp,
                        state,
                        state_idx,
                        delta,
                        joint,
                        score(delta, joint, costs[comp], plan.weights),
                        p_new,
                    )
                )
        if not evaluations:
            plan.termination = (
                "stopped early: every remaining candidate is impossible "
                f"given the fixed evidence ({sorted(remaining)})"
            )
            break

        evaluations.sort(key=lambda e: (-e[5], -e[3], e[0], e[2]))
        comp, state, state_idx, delta, joint, chosen_score, p_new = evaluations[0]
        node = network.node(comp)
        vm = node.value_map
        assert vm is not None
        proposed = vm.low_submean if state_idx == 0 else vm.high_submean
        plan.steps.append(
            OptimizationStep(
                component=comp,
                state=state,
                state_index=state_idx,
                proposed_gw=proposed,
                impact=delta,
                evidence_joint=joint,
                cost=costs[comp],
                score=chosen_score,
                cumulative_probability=p_new,
                prior_posterior=(
                    float(base[comp][0]),
                    float(base[comp][1]),
                ),
            )
        )
        evidence[comp] = state
        remaining.remove(comp)
    return plan


def plan_report(
    plan: OptimizationPlan, value_maps: Mapping[str, ValueMap]
) -> list[dict]:
    """Tabulates a plan: one starting row plus one row per step.

    GW values come from the value maps: the a priori value applies the
    component's posterior before its evidence was fixed, the proposed value
    is the sub-mean of the chosen state.
    """
    rows: list[dict] = [
        {
            "component": None,
            "state": None,
            "a_priori_gw": None,
            "proposed_gw": None,
            "delta_gw": None,
            "cost_per_gw": None,
            "evidence_joint": 1.0,
            "impact": None,
            "cumulative_probability": plan.initial_probability,
        }
    ]
    for step in plan.steps:
        vm = value_maps.get(step.component)
        if vm is None:
            raise ModelError(f"no value map for component {step.component!r}")
        prior_value = (
            step.prior_posterior[0] * vm.low_submean
            + step.prior_posterior[1] * vm.high_submean
        )
        rows.append(
            {
                "component": step.component,
                "state": step.state,
                "a_priori_gw": prior_value,
                "proposed_gw": step.proposed_gw,
                "delta_gw": step.proposed_gw - prior_value,
                "cost_per_gw": step.cost,
                "evidence_joint": step.evidence_joint,
                "impact": step.impact,
                "cumulative_probability": step.cumulative_probability,
            }
        )
    return rows
