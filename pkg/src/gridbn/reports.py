"""Derived reporting: capacity tables, bucket sums, availability, scenarios.

Everything here is a pure projection of inference results; rendered output
rounds GW and percentages to one decimal while machine output keeps full
precision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .errors import ModelError
from .inference import Evidence, posterior
from .model import Layer, Network, Node, state_value

BUCKETS = ("bulk", "balancing", "variable", "import", "other")


@dataclass(frozen=True)
class ClassificationRules:
    """Assigns every capacity component to exactly one reporting bucket."""

    buckets: Mapping[str, str]

    def __post_init__(self) -> None:
        for comp, bucket in self.buckets.items():
            if bucket not in BUCKETS:
                raise ModelError(
                    f"{comp}: unknown bucket {bucket!r}; expected one of {BUCKETS}"
                )

    def bucket_of(self, component: str) -> str:
        try:
            return self.buckets[component]
        except KeyError:
            raise ModelError(f"component {component!r} is not classified") from None


def load_rules(path: str | Path, preset: str = "default") -> ClassificationRules:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: not valid JSON ({exc})") from None
    presets = data.get("presets", {})
    if preset not in presets:
        raise ModelError(
            f"{path}: no preset {preset!r}; available: {sorted(presets)}"
        )
    return ClassificationRules(dict(presets[preset]))


@dataclass(frozen=True)
class AvailabilityProfile:
    """Fraction of each component's capacity available at system peaks."""

    peak_hour: Mapping[str, float]
    peak_season: Mapping[str, float]

    def __post_init__(self) -> None:
        for name, factors in (("peak_hour", self.peak_hour), ("peak_season", self.peak_season)):
            for comp, factor in factors.items():
                if not 0.0 <= factor <= 1.0:
                    raise ModelError(f"{name} factor for {comp!r} out of [0, 1]: {factor}")

    def factors_for(self, component: str) -> tuple[float, float]:
        if component not in self.peak_hour or component not in self.peak_season:
            raise ModelError(f"no availability factors for component {component!r}")
        return self.peak_hour[component], self.peak_season[component]


def load_profile(path: str | Path) -> AvailabilityProfile:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: not valid JSON ({exc})") from None
    try:
        return AvailabilityProfile(
            peak_hour=dict(data["peak_hour"]), peak_season=dict(data["peak_season"])
        )
    except KeyError as exc:
        raise ModelError(f"{path}: profile is missing {exc}") from None


@dataclass(frozen=True)
class CapacityRow:
    component: str
    posterior: tuple[float, ...]
    gw: float


def _value_mapped_components(network: Network) -> list[Node]:
    nodes = [
        n
        for n in network.user_nodes()
        if n.layer is Layer.L2 and n.value_map is not None and n.n_states == 2
    ]
    return sorted(nodes, key=lambda n: n.id)


def capacity_table(network: Network, evidence: Evidence) -> list[CapacityRow]:
    """Posterior and GW value for every value-mapped capacity component."""
    components = _value_mapped_components(network)
    result = posterior(network, evidence, [n.id for n in components])
    rows = []
    for node in components:
        vector = result[node.id]
        rows.append(
            CapacityRow(
                component=node.id,
                posterior=tuple(float(p) for p in vector),
                gw=state_value(node, vector),
            )
        )
    return rows


def bucket_sums(
    rows: Sequence[CapacityRow], rules: ClassificationRules
) -> dict[str, float]:
    """GW totals per classification bucket; unused buckets report zero."""
    totals = {bucket: 0.0 for bucket in BUCKETS}
    for row in rows:
        totals[rules.bucket_of(row.component)] += row.gw
    return totals


@dataclass(frozen=True)
class AvailabilityEntry:
    component: str
    capacity_gw: float
    peak_hour_gw: float
    peak_season_gw: float


@dataclass(frozen=True)
class AvailabilityReport:
    entries: tuple[AvailabilityEntry, ...]
    peak_hour_total_gw: float
    peak_season_total_gw: float


def availability(
    rows: Sequence[CapacityRow], profile: AvailabilityProfile
) -> AvailabilityReport:
    """Applies peak availability factors to capacity values."""
    entries = []
    for row in rows:
        hour, season = profile.factors_for(row.component)
        entries.append(
            AvailabilityEntry(
                component=row.component,
                capacity_gw=row.gw,
                peak_hour_gw=row.gw * hour,
                peak_season_gw=row.gw * season,
            )
        )
    return AvailabilityReport(
        entries=tuple(entries),
        peak_hour_total_gw=float(sum(e.peak_hour_gw for e in entries)),
        peak_season_total_gw=float(sum(e.peak_season_gw for e in entries)),
    )


@dataclass(frozen=True)
class ScenarioSummary:
    scenario_probabilities: dict[str, float]
    bulk_marginal: float
    balance_marginal: float
    bulk_gw: float | None
    balance_gw: float | None


def _role_node(network: Network, role: str) -> Node:
    roles = network.metadata.get("roles", {})
    if role in roles:
        return network.node(roles[role])
    # fall back to structural detection when metadata is absent
    if role == "grid":
        l4 = [n for n in network.user_nodes() if n.layer is Layer.L4]
        if len(l4) == 1:
            return l4[0]
    raise ModelError(f"network metadata does not name a {role!r} node")


def scenario_summary(network: Network, evidence: Evidence) -> ScenarioSummary:
    """Grid scenario posterior plus the aggregate capacity context."""
    grid = _role_node(network, "grid")
    bulk = _role_node(network, "bulk")
    balance = _role_node(network, "balance")
    result = posterior(network, evidence, [grid.id, bulk.id, balance.id])
    grid_vector = result[grid.id]
    bulk_vector = result[bulk.id]
    balance_vector = result[balance.id]
    return ScenarioSummary(
        scenario_probabilities={
            state: float(p) for state, p in zip(grid.states, grid_vector)
        },
        bulk_marginal=float(bulk_vector[1]),
        balance_marginal=float(balance_vector[1]),
        bulk_gw=state_value(bulk, bulk_vector) if bulk.value_map else None,
        balance_gw=state_value(balance, balance_vector) if balance.value_map else None,
    )
