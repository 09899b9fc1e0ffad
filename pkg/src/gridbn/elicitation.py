"""Survey ingestion and aggregation into network parameters.

A survey holds one response per expert across seven question sets:

* qs1a - per capacity component, a GW estimate with a confidence percent.
* qs1b - per component, up to three external factors judged most influential.
* qs1c - per (component, factor) and per (component, Leak), an independent
  causal effect percent with a confidence percent.
* qs2  - per wind/solar level pair, a four-way split of how variable
  generation is used (battery, power-to-x, pumped hydro, direct use).
* qs3a / qs3b - per balancing solution / bulk source (plus Leak), its
  independent causal effect on the aggregate capacity crossing its trigger
  level.
* qs4  - per bulk/balance level pair, probabilities of the four grid
  management scenarios.

Aggregation is either uniform or confidence-weighted; confidence weights
are normalized per question, so equal confidences reproduce the uniform
result exactly.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import ModelError, SurveyError
from .model import (
    ExplicitCpt,
    Layer,
    Network,
    Node,
    NoisyOrParams,
    ValueMap,
    validate,
)

LEAK_KEY = "Leak"

QUESTION_SETS = ("qs1a", "qs1b", "qs1c", "qs2", "qs3a", "qs3b", "qs4")

ROW_SUM_TOL = 0.5  # usage/scenario rows must total 100 within this


# ---------------------------------------------------------------------------
# Response model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CapacityEstimate:
    capacity_gw: float
    confidence: float


@dataclass(frozen=True)
class EffectJudgement:
    effect: float  # percent, 0..100
    confidence: float


@dataclass(frozen=True)
class SurveyRow:
    """One elicited CPT row: a percentage vector for a parent-state pair."""

    parent_states: tuple[str, ...]
    probabilities: tuple[float, ...]
    confidence: float

    @property
    def key(self) -> str:
        return "/".join(self.parent_states)


@dataclass
class ExpertResponse:
    expert_id: str
    confidence_default: float = 60.0
    qs1a: dict[str, CapacityEstimate] = field(default_factory=dict)
    qs1b: dict[str, tuple[str, ...]] = field(default_factory=dict)
    qs1c: dict[str, dict[str, EffectJudgement]] = field(default_factory=dict)
    qs2: tuple[SurveyRow, ...] = ()
    qs3a: dict[str, EffectJudgement] = field(default_factory=dict)
    qs3b: dict[str, EffectJudgement] = field(default_factory=dict)
    qs4: tuple[SurveyRow, ...] = ()


def _check_pct(value: float, where: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 100.0:
        raise SurveyError(f"{where}: percentage {value} out of [0, 100]")
    return value


def _parse_effect(data: Mapping, where: str, default_conf: float) -> EffectJudgement:
    try:
        effect = _check_pct(data["effect"], where)
    except (KeyError, TypeError):
        raise SurveyError(f"{where}: missing 'effect'") from None
    conf = _check_pct(data.get("confidence", default_conf), where)
    return EffectJudgement(effect=effect, confidence=conf)


def _parse_rows(raw: Sequence, where: str, default_conf: float) -> tuple[SurveyRow, ...]:
    rows = []
    for i, rd in enumerate(raw):
        label = f"{where} row {i}"
        try:
            probs = tuple(float(p) for p in rd["probabilities"])
            parent_states = tuple(rd["parent_states"])
        except (KeyError, TypeError):
            raise SurveyError(f"{label}: needs 'parent_states' and 'probabilities'") from None
        for p in probs:
            _check_pct(p, label)
        if abs(sum(probs) - 100.0) > ROW_SUM_TOL:
            raise SurveyError(f"{label}: probabilities sum to {sum(probs)}, expected 100")
        conf = _check_pct(rd.get("confidence", default_conf), label)
        rows.append(SurveyRow(parent_states, probs, conf))
    return tuple(rows)


def parse_response(data: Mapping) -> ExpertResponse:
    try:
        expert_id = str(data["id"])
    except KeyError:
        raise SurveyError("expert entry missing 'id'") from None
    missing = [qs for qs in QUESTION_SETS if qs not in data]
    if missing:
        raise SurveyError(f"expert {expert_id}: missing question set {missing[0]!r}")
    default_conf = _check_pct(data.get("confidence_default", 60.0), f"expert {expert_id}")

    qs1a = {}
    for comp, cd in data["qs1a"].items():
        where = f"expert {expert_id} qs1a {comp}"
        try:
            gw = float(cd["capacity_gw"])
        except (KeyError, TypeError):
            raise SurveyError(f"{where}: missing 'capacity_gw'") from None
        if gw < 0:
            raise SurveyError(f"{where}: capacity must be >= 0 GW")
        conf = _check_pct(cd.get("confidence", default_conf), where)
        qs1a[comp] = CapacityEstimate(gw, conf)

    qs1b = {}
    for comp, factors in data["qs1b"].items():
        factors = tuple(str(f) for f in factors)
        if len(factors) > 3:
            raise SurveyError(
                f"expert {expert_id} qs1b {comp}: at most three factors may be named"
            )
        qs1b[comp] = factors

    qs1c = {}
    for comp, effects in data["qs1c"].items():
        qs1c[comp] = {
            factor: _parse_effect(ed, f"expert {expert_id} qs1c {comp}/{factor}", default_conf)
            for factor, ed in effects.items()
        }

    qs3a = {
        solution: _parse_effect(ed, f"expert {expert_id} qs3a {solution}", default_conf)
        for solution, ed in data["qs3a"].items()
    }
    qs3b = {
        source: _parse_effect(ed, f"expert {expert_id} qs3b {source}", default_conf)
        for source, ed in data["qs3b"].items()
    }

    return ExpertResponse(
        expert_id=expert_id,
        confidence_default=default_conf,
        qs1a=qs1a,
        qs1b=qs1b,
        qs1c=qs1c,
        qs2=_parse_rows(data["qs2"], f"expert {expert_id} qs2", default_conf),
        qs3a=qs3a,
        qs3b=qs3b,
        qs4=_parse_rows(data["qs4"], f"expert {expert_id} qs4", default_conf),
    )


def load_survey(path: str | Path) -> list[ExpertResponse]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SurveyError(f"{path}: not valid JSON ({exc})") from None
    if "experts" not in data:
        raise SurveyError(f"{path}: survey document has no 'experts' array")
    responses = [parse_response(rd) for rd in data["experts"]]
    if not responses:
        raise SurveyError(f"{path}: survey contains no experts")
    seen = set()
    for r in responses:
        if r.expert_id in seen:
            raise SurveyError(f"duplicate expert id {r.expert_id!r}")
        seen.add(r.expert_id)
    return responses


# ---------------------------------------------------------------------------
# Scales (elicitation aids only; responses are stored as raw percentages)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ImpactScale:
    """Band labels used when discussing percentages with the panel.

    Both band sets are (upper edge, label) pairs over [0, 100]; a value
    belongs to the first band whose upper edge is >= the value.
    """

    causal_bands: tuple[tuple[float, str], ...]
    likelihood_bands: tuple[tuple[float, str], ...]

    def __post_init__(self) -> None:
        for bands in (self.causal_bands, self.likelihood_bands):
            edges = [edge for edge, _ in bands]
            if edges != sorted(edges) or len(set(edges)) != len(edges):
                raise ModelError("scale band edges must strictly increase")
            if edges[-1] != 100.0:
                raise ModelError("scale bands must cover [0, 100]")

    @staticmethod
    def _label(bands: tuple[tuple[float, str], ...], percent: float) -> str:
        if not 0.0 <= percent <= 100.0:
            raise ModelError(f"percentage {percent} out of [0, 100]")
        for edge, label in bands:
            if percent <= edge:
                return label
        raise AssertionError("bands cover [0, 100]")

    def causal_label(self, percent: float) -> str:
        return self._label(self.causal_bands, percent)

    def likelihood_label(self, percent: float) -> str:
        return self._label(self.likelihood_bands, percent)


DEFAULT_IMPACT_SCALE = ImpactScale(
    causal_bands=(
        (20.0, "non-existent or very weak"),
        (40.0, "weak"),
        (60.0, "moderate"),
        (80.0, "strong"),
        (100.0, "very strong"),
    ),
    likelihood_bands=(
        (0.0, "impossible"),
        (5.0, "almost no chance"),
        (20.0, "very unlikely"),
        (45.0, "unlikely"),
        (55.0, "roughly even chance"),
        (80.0, "likely"),
        (95.0, "very likely"),
        (99.999, "almost certain"),
        (100.0, "certain"),
    ),
)


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------

WEIGHTING_MODES = ("uniform", "confidence_linear")


@dataclass(frozen=True)
class AggregationPolicy:
    """How per-expert answers combine into one number per question."""

    weighting: str = "uniform"
    # The sub-mean bucketing threshold is always the question's own
    # aggregate mean, recomputed under the active weighting.
    submean_threshold_source: str = "aggregate_mean"

    def __post_init__(self) -> None:
        if self.weighting not in WEIGHTING_MODES:
            raise ModelError(
                f"unknown weighting {self.weighting!r}; expected one of {WEIGHTING_MODES}"
            )
        if self.submean_threshold_source != "aggregate_mean":
            raise ModelError("only 'aggregate_mean' sub-mean thresholds are supported")


UNIFORM = AggregationPolicy("uniform")
CONFIDENCE_WEIGHTED = AggregationPolicy("confidence_linear")


def _weights(confidences: Sequence[float], policy: AggregationPolicy) -> np.ndarray:
    n = len(confidences)
    if n == 0:
        raise SurveyError("no responses to weight")
    if policy.weighting == "uniform":
        return np.full(n, 1.0 / n)
    conf = np.asarray(confidences, dtype=float)
    total = float(conf.sum())
    if total <= 0.0:
        raise SurveyError("confidence weighting requires a positive confidence somewhere")
    return conf / total


@dataclass(frozen=True)
class CapacityAggregate:
    """Panel-level summary of one component's capacity question."""

    component: str
    mean: float
    low_submean: float | None
    high_submean: float | None
    mean_confidence: float

    def value_map(self) -> ValueMap:
        """Value map for the component; degenerates to the mean when a bucket is empty."""
        low = self.low_submean
        high = self.high_submean
        if low is None or high is None:
            warnings.warn(
                f"{self.component}: one estimate bucket is empty; "
                "value map degenerates to the mean",
                stacklevel=2,
            )
            low = self.mean if low is None else low
            high = self.mean if high is None else high
        return ValueMap(threshold=self.mean, low_submean=low, high_submean=high)


def aggregate_capacity(
    responses: Sequence[ExpertResponse], component: str, policy: AggregationPolicy
) -> CapacityAggregate:
    """Aggregate mean and below/at-or-above sub-means for one component."""
    estimates = [r.qs1a[component] for r in responses if component in r.qs1a]
    if not estimates:
        raise SurveyError(f"no capacity estimates for component {component!r}")
    values = np.array([e.capacity_gw for e in estimates])
    weights = _weights([e.confidence for e in estimates], policy)
    mean = float(weights @ values)

    low_mask = values < mean
    high_mask = ~low_mask

    def bucket_mean(mask: np.ndarray) -> float | None:
        if not mask.any():
            return None
        w = weights[mask]
        return float((w / w.sum()) @ values[mask])

    return CapacityAggregate(
        component=component,
        mean=mean,
        low_submean=bucket_mean(low_mask),
        high_submean=bucket_mean(high_mask),
        mean_confidence=float(np.mean([e.confidence for e in estimates])),
    )


def _effect_lookup(response: ExpertResponse, question: str, child: str) -> Mapping[str, EffectJudgement]:
    if question == "qs1c":
        return response.qs1c.get(child, {})
    if question == "qs3a":
        return response.qs3a
    if question == "qs3b":
        return response.qs3b
    raise ModelError(f"question {question!r} does not elicit causal effects")


def build_ici_params(
    responses: Sequence[ExpertResponse],
    child: str,
    factor_set: Sequence[str],
    question: str,
    policy: AggregationPolicy,
    true_state: str | None = None,
    triggering: str | None = None,
) -> NoisyOrParams:
    """Mean causal strengths and leak for one noisy-OR child.

    Experts missing an entry for a given factor are skipped for that
    factor, with the remaining weights renormalized.
    """

    def mean_effect(factor: str) -> float:
        judged = [
            _effect_lookup(r, question, child)[factor]
            for r in responses
            if factor in _effect_lookup(r, question, child)
        ]
        if not judged:
            raise SurveyError(f"{child}: no responses for factor {factor!r} in {question}")
        weights = _weights([j.confidence for j in judged], policy)
        return float(weights @ np.array([j.effect for j in judged])) / 100.0

    thetas = tuple(mean_effect(f) for f in factor_set)
    leak = mean_effect(LEAK_KEY)
    trigger_labels = None if triggering is None else (triggering,) * len(thetas)
    return NoisyOrParams(
        thetas=thetas, leak=leak, true_state=true_state, triggering=trigger_labels
    )


def build_cpt(
    responses: Sequence[ExpertResponse],
    child: str,
    question: str,
    policy: AggregationPolicy,
) -> ExplicitCpt:
    """Row-wise weighted mean of elicited CPT rows, renormalized to 1."""
    if question == "qs2":
        per_expert = [(r.expert_id, r.qs2) for r in responses]
    elif question == "qs4":
        per_expert = [(r.expert_id, r.qs4) for r in responses]
    else:
        raise ModelError(f"question {question!r} does not elicit CPT rows")

    reference = per_expert[0][1]
    if not reference:
        raise SurveyError(f"{child}: expert {per_expert[0][0]} supplies no {question} rows")
    for expert_id, rows in per_expert:
        if len(rows) != len(reference):
            raise SurveyError(
                f"{child}: expert {expert_id} supplies {len(rows)} {question} rows, "
                f"expected {len(reference)}"
            )
        for ref, row in zip(reference, rows):
            if row.parent_states != ref.parent_states:
                raise SurveyError(
                    f"{child}: expert {expert_id} row {row.key!r} does not match "
                    f"expected row {ref.key!r}"
                )

    n_states = len(reference[0].probabilities)
    table = np.zeros((len(reference), n_states))
    for i in range(len(reference)):
        rows = [rows[i] for _, rows in per_expert]
        if any(len(row.probabilities) != n_states for row in rows):
            raise SurveyError(f"{child}: inconsistent state count in {question} rows")
        weights = _weights([row.confidence for row in rows], policy)
        mean = weights @ np.array([row.probabilities for row in rows])
        table[i] = mean / mean.sum()
    return ExplicitCpt(table)


def top_factors(
    responses: Sequence[ExpertResponse], component: str, k: int
) -> list[tuple[str, int]]:
    """Factors ranked by mention count (descending, ties lexicographic)."""
    if k < 1:
        raise ModelError("k must be at least 1")
    counts: dict[str, int] = {}
    for r in responses:
        for factor in r.qs1b.get(component, ()):
            counts[factor] = counts.get(factor, 0) + 1
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]


# ---------------------------------------------------------------------------
# Layout and network assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AggregateNodeSpec:
    """An aggregate capacity node with a fixed trigger threshold."""

    id: str
    states: tuple[str, str]
    threshold_gw: float
    components: tuple[str, ...]
    question: str  # qs3a or qs3b
    value_map: ValueMap | None = None


@dataclass(frozen=True)
class NetworkLayout:
    """Declares the skeleton the survey is compiled into."""

    name: str
    factors: tuple[str, ...]
    excluded_factors: tuple[str, ...]
    factor_semantics: Mapping[str, str]
    components: tuple[str, ...]
    factor_states: tuple[str, str]
    component_states: tuple[str, str]
    bulk: AggregateNodeSpec
    balance: AggregateNodeSpec
    grid_id: str
    grid_states: tuple[str, ...]
    storage_id: str | None = None
    storage_states: tuple[str, ...] = ()
    storage_parents: tuple[str, str] | None = None
    factors_per_component: int = 3


def _parse_value_map(data: Mapping | None) -> ValueMap | None:
    if data is None:
        return None
    return ValueMap(
        threshold=float(data["threshold"]),
        low_submean=float(data["low_submean"]),
        high_submean=float(data["high_submean"]),
    )


def load_layout(path: str | Path) -> NetworkLayout:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: not valid JSON ({exc})") from None
    try:
        def agg(key: str, question: str) -> AggregateNodeSpec:
            nd = data[key]
            return AggregateNodeSpec(
                id=nd["id"],
                states=tuple(nd["states"]),
                threshold_gw=float(nd["threshold_gw"]),
                components=tuple(nd["components"]),
                question=question,
                value_map=_parse_value_map(nd.get("value_map")),
            )

        storage = data.get("storage")
        return NetworkLayout(
            name=data.get("name", "network"),
            factors=tuple(data["factors"]),
            excluded_factors=tuple(data.get("excluded_factors", ())),
            factor_semantics=dict(data.get("factor_semantics", {})),
            components=tuple(data["components"]),
            factor_states=tuple(data.get("factor_states", ("False", "True"))),
            component_states=tuple(data.get("component_states", ("below_mean", "ge_mean"))),
            bulk=agg("bulk", "qs3b"),
            balance=agg("balance", "qs3a"),
            grid_id=data["grid"]["id"],
            grid_states=tuple(data["grid"]["states"]),
            storage_id=storage["id"] if storage else None,
            storage_states=tuple(storage["states"]) if storage else (),
            storage_parents=tuple(storage["parents"]) if storage else None,
            factors_per_component=int(data.get("factors_per_component", 3)),
        )
    except KeyError as exc:
        raise ModelError(f"{path}: layout is missing {exc}") from None


def assemble_network(
    responses: Sequence[ExpertResponse],
    layout: NetworkLayout,
    policy: AggregationPolicy,
) -> Network:
    """Compiles a survey into a validated four-layer network.

    External factors get uniform priors; each component becomes a noisy-OR
    child of its top-ranked factors; the two aggregate capacity nodes are
    noisy-OR children of their component groups; the grid node carries the
    elicited scenario CPT. Components keep value maps built from their
    capacity aggregates.
    """
    known = set(layout.factors)
    nodes: list[Node] = []
    used_factors: list[str] = []
    component_nodes: dict[str, Node] = {}

    aggregates = {
        comp: aggregate_capacity(responses, comp, policy) for comp in layout.components
    }

    for comp in layout.components:
        ranked = top_factors(responses, comp, k=len(layout.factors))
        chosen = []
        for factor, _count in ranked:
            if factor not in known:
                raise SurveyError(
                    f"{comp}: factor {factor!r} is not declared in the layout"
                )
            if factor in layout.excluded_factors:
                continue
            chosen.append(factor)
            if len(chosen) == layout.factors_per_component:
                break
        params = build_ici_params(
            responses,
            comp,
            chosen,
            question="qs1c",
            policy=policy,
            true_state=layout.component_states[1],
            triggering=layout.factor_states[1],
        )
        node = Node(
            id=comp,
            layer=Layer.L2,
            states=layout.component_states,
            parents=tuple(chosen),
            noisy_or=params,
            value_map=aggregates[comp].value_map(),
        )
        component_nodes[comp] = node
        for factor in chosen:
            if factor not in used_factors:
                used_factors.append(factor)

    for factor in sorted(used_factors):
        nodes.append(
            Node(
                id=factor,
                layer=Layer.L1,
                states=layout.factor_states,
                cpt=ExplicitCpt(np.array([[0.5, 0.5]])),
            )
        )
    nodes.extend(component_nodes[comp] for comp in layout.components)

    if layout.storage_id is not None:
        assert layout.storage_parents is not None
        for parent in layout.storage_parents:
            if parent not in component_nodes:
                raise ModelError(
                    f"storage node parent {parent!r} is not a layout component"
                )
        storage_cpt = build_cpt(responses, layout.storage_id, "qs2", policy)
        nodes.append(
            Node(
                id=layout.storage_id,
                layer=Layer.L2,
                states=layout.storage_states,
                parents=layout.storage_parents,
                cpt=storage_cpt,
            )
        )

    for spec in (layout.bulk, layout.balance):
        for comp in spec.components:
            if comp not in component_nodes:
                raise ModelError(
                    f"{spec.id}: component {comp!r} is not a layout component"
                )
        params = build_ici_params(
            responses,
            spec.id,
            spec.components,
            question=spec.question,
            policy=policy,
            true_state=spec.states[1],
            triggering=layout.component_states[1],
        )
        nodes.append(
            Node(
                id=spec.id,
                layer=Layer.L3,
                states=spec.states,
                parents=spec.components,
                noisy_or=params,
                value_map=spec.value_map,
            )
        )

    grid_cpt = build_cpt(responses, layout.grid_id, "qs4", policy)
    expected_rows = [
        (bulk_state, balance_state)
        for bulk_state in layout.bulk.states
        for balance_state in layout.balance.states
    ]
    supplied = [row.parent_states for row in responses[0].qs4]
    if supplied != expected_rows:
        raise SurveyError(
            f"{layout.grid_id}: qs4 rows must follow the canonical parent order "
            f"{expected_rows}, got {supplied}"
        )
    nodes.append(
        Node(
            id=layout.grid_id,
            layer=Layer.L4,
            states=layout.grid_states,
            parents=(layout.bulk.id, layout.balance.id),
            cpt=grid_cpt,
        )
    )

    survey_aggregates = {}
    all_components = sorted({comp for r in responses for comp in r.qs1a})
    for comp in all_components:
        agg = aggregate_capacity(responses, comp, policy)
        survey_aggregates[comp] = {
            "mean_gw": agg.mean,
            "low_submean_gw": agg.low_submean,
            "high_submean_gw": agg.high_submean,
            "mean_confidence": agg.mean_confidence,
        }

    metadata = {
        "name": layout.name,
        "policy": policy.weighting,
        "roles": {
            "bulk": layout.bulk.id,
            "balance": layout.balance.id,
            "grid": layout.grid_id,
            **({"storage": layout.storage_id} if layout.storage_id else {}),
        },
        "thresholds_gw": {
            layout.bulk.id: layout.bulk.threshold_gw,
            layout.balance.id: layout.balance.threshold_gw,
        },
        "factor_semantics": dict(layout.factor_semantics),
        "survey_aggregates": survey_aggregates,
    }

    network = Network.from_nodes(nodes, metadata=metadata)
    report = validate(network)
    if not report.ok:
        raise ModelError(f"assembled network is invalid:\n{report}")
    return network
