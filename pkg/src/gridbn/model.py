"""Core network model: nodes, distributions, value maps, validation, JSON IO.

A network is a directed acyclic graph of discrete nodes arranged on four
declared layers: external factors (L1), capacity mix components (L2),
aggregate bulk/balancing capacity (L3), and grid management scenarios (L4).
Each node carries either an explicit conditional probability table or a
noisy-OR parameterization; binary nodes may additionally carry a value map
that converts a posterior into a physical GW figure.

Networks are treated as immutable once constructed and validated. Nothing
in this package mutates a network after validation, so shared concurrent
reads are safe.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import CycleError, ModelError

# Normalization tolerance for stored probability rows/vectors.
PROB_TOL = 1e-9

# Substring marking aggregator nodes introduced by parent divorcing.
AUX_MARKER = "__ici_"


def is_auxiliary(node_id: str) -> bool:
    """True for aggregator nodes introduced by parent divorcing."""
    return AUX_MARKER in node_id


class Layer(str, Enum):
    """Hierarchy tag. Layers are declared per node, never inferred."""

    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    L4 = "L4"


@dataclass(frozen=True)
class ValueMap:
    """Converts a binary posterior into a physical capacity value.

    ``threshold`` is the GW level separating the two states; the sub-means
    are the averages of the underlying estimates below and at-or-above it.
    A degenerate map with ``low_submean == threshold == high_submean`` is
    permitted (it arises from a unanimous panel).
    """

    threshold: float
    low_submean: float
    high_submean: float


@dataclass
class ExplicitCpt:
    """One probability row over child states per parent-state combination.

    Rows follow the canonical combination order: the first parent varies
    slowest, the last parent fastest (C order over parent state indices).
    """

    table: np.ndarray

    def __post_init__(self) -> None:
        self.table = np.asarray(self.table, dtype=float)
        if self.table.ndim != 2:
            raise ModelError("cpt table must be two-dimensional (rows x child states)")

    @property
    def n_rows(self) -> int:
        return int(self.table.shape[0])

    @property
    def n_states(self) -> int:
        return int(self.table.shape[1])


@dataclass
class NoisyOrParams:
    """Independent-cause parameterization of a binary child.

    Each parent in its triggering state activates the child's true state
    with its own strength; ``leak`` is the activation probability with all
    modeled causes absent. ``true_state`` (and each ``triggering`` entry)
    may be ``None``, meaning the last state of the child (or parent) by
    positional convention; labels are resolved at compile time.
    """

    thetas: tuple[float, ...]
    leak: float
    true_state: str | None = None
    triggering: tuple[str | None, ...] | None = None

    def __post_init__(self) -> None:
        self.thetas = tuple(float(t) for t in self.thetas)
        self.leak = float(self.leak)
        if self.triggering is not None:
            self.triggering = tuple(self.triggering)

    @property
    def n_parents(self) -> int:
        return len(self.thetas)

    @property
    def n_parameters(self) -> int:
        """Free parameters elicited for this child: one strength per parent plus the leak."""
        return len(self.thetas) + 1


@dataclass
class Node:
    """A discrete variable with a declared layer and one distribution."""

    id: str
    layer: Layer
    states: tuple[str, ...]
    parents: tuple[str, ...] = ()
    cpt: ExplicitCpt | None = None
    noisy_or: NoisyOrParams | None = None
    value_map: ValueMap | None = None

    def __post_init__(self) -> None:
        self.layer = Layer(self.layer)
        self.states = tuple(self.states)
        self.parents = tuple(self.parents)

    @property
    def n_states(self) -> int:
        return len(self.states)

    def state_index(self, label: str) -> int:
        try:
            return self.states.index(label)
        except ValueError:
            raise ModelError(
                f"node {self.id}: unknown state {label!r}; valid states: {list(self.states)}"
            ) from None


@dataclass(eq=False)
class Network:
    """Id-keyed node collection plus free-form metadata."""

    nodes: dict[str, Node] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    @classmethod
    def from_nodes(cls, nodes: Iterable[Node], metadata: dict | None = None) -> "Network":
        collected: dict[str, Node] = {}
        for node in nodes:
            if node.id in collected:
                raise ModelError(f"duplicate node id {node.id!r}")
            collected[node.id] = node
        return cls(nodes=collected, metadata=dict(metadata or {}))

    def node(self, node_id: str) -> Node:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise ModelError(f"unknown node {node_id!r}") from None

    def __contains__(self, node_id: str) -> bool:
        return node_id in self.nodes

    def __iter__(self) -> Iterator[Node]:
        return iter(self.nodes.values())

    def __len__(self) -> int:
        return len(self.nodes)

    def user_nodes(self) -> list[Node]:
        """Nodes visible to analysts (divorce aggregators hidden)."""
        return [n for n in self.nodes.values() if not is_auxiliary(n.id)]


@dataclass(frozen=True)
class Violation:
    node_id: str
    reason: str

    def __str__(self) -> str:
        return f"{self.node_id}: {self.reason}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, node_id: str, reason: str) -> None:
        self.violations.append(Violation(node_id, reason))

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


def _kahn_order(parents_of: Mapping[str, Sequence[str]]) -> tuple[list[str], list[str]]:
    """Kahn's algorithm with lexicographic tie-breaking.

    Edges referencing missing nodes are ignored (validation reports those
    separately). Returns (ordered ids, ids left on cycles).
    """
    remaining = {
        nid: {p for p in ps if p in parents_of} for nid, ps in parents_of.items()
    }
    children: dict[str, set[str]] = {nid: set() for nid in parents_of}
    for nid, ps in remaining.items():
        for p in ps:
            children[p].add(nid)
    ready = [nid for nid, ps in remaining.items() if not ps]
    heapq.heapify(ready)
    order: list[str] = []
    while ready:
        nid = heapq.heappop(ready)
        order.append(nid)
        for child in sorted(children[nid]):
            remaining[child].discard(nid)
            if not remaining[child]:
                heapq.heappush(ready, child)
    stuck = sorted(set(parents_of) - set(order))
    return order, stuck


def topological_order(network: Network) -> list[str]:
    """Parents-before-children ordering, ties broken by lexicographic id."""
    order, stuck = _kahn_order({n.id: n.parents for n in network})
    if stuck:
        raise CycleError(f"cycle detected involving node {stuck[0]!r}")
    return order


def validate(network: Network) -> ValidationReport:
    """Checks every structural invariant; reports violations, never raises."""
    report = ValidationReport()
    for node in network:
        if len(node.states) < 2:
            report.add(node.id, "fewer than two states")
        if len(set(node.states)) != len(node.states):
            report.add(node.id, "duplicate state labels")
        if len(set(node.parents)) != len(node.parents):
            report.add(node.id, "duplicate parent reference")
        if node.id in node.parents:
            report.add(node.id, "node is its own parent")
        missing = [p for p in node.parents if p not in network]
        for p in missing:
            report.add(node.id, f"missing parent {p}")

        has_cpt = node.cpt is not None
        has_noisy = node.noisy_or is not None
        if has_cpt == has_noisy:
            report.add(
                node.id,
                "node must carry exactly one of an explicit CPT or noisy-OR parameters",
            )

        if has_cpt:
            _check_cpt(network, node, missing, report)
        if has_noisy:
            _check_noisy_or(network, node, missing, report)

        if node.value_map is not None:
            vm = node.value_map
            if len(node.states) != 2:
                report.add(node.id, "value map requires a binary node")
            if not (vm.low_submean <= vm.threshold <= vm.high_submean):
                report.add(
                    node.id,
                    "value map must satisfy low_submean <= threshold <= high_submean",
                )

    _, stuck = _kahn_order({n.id: n.parents for n in network})
    if stuck:
        report.add(stuck[0], "parent graph contains a directed cycle")
    return report


def _check_cpt(network: Network, node: Node, missing: list[str], report: ValidationReport) -> None:
    cpt = node.cpt
    assert cpt is not None
    if cpt.n_states != len(node.states):
        report.add(
            node.id,
            f"cpt has {cpt.n_states} columns but node has {len(node.states)} states",
        )
    if not missing:
        expected = 1
        for p in node.parents:
            expected *= network.node(p).n_states
        if cpt.n_rows != expected:
            report.add(
                node.id,
                f"cpt has {cpt.n_rows} rows; expected {expected} "
                "(product of parent state counts)",
            )
    if np.any(cpt.table < -PROB_TOL) or np.any(cpt.table > 1 + PROB_TOL):
        report.add(node.id, "cpt entries must lie in [0, 1]")
    sums = cpt.table.sum(axis=1)
    bad = np.nonzero(np.abs(sums - 1.0) > PROB_TOL)[0]
    for row in bad:
        report.add(node.id, f"row {int(row)} not normalized (sums to {sums[row]:.12g})")


def _check_noisy_or(
    network: Network, node: Node, missing: list[str], report: ValidationReport
) -> None:
    params = node.noisy_or
    assert params is not None
    if len(node.states) != 2:
        report.add(node.id, "noisy-OR requires a binary child")
    if len(params.thetas) != len(node.parents):
        report.add(
            node.id,
            f"{len(params.thetas)} causal strengths for {len(node.parents)} parents",
        )
    for i, theta in enumerate(params.thetas):
        if not 0.0 <= theta <= 1.0:
            report.add(node.id, f"causal strength {i} out of [0, 1]: {theta}")
    if not 0.0 <= params.leak <= 1.0:
        report.add(node.id, f"leak out of [0, 1]: {params.leak}")
    if params.true_state is not None and params.true_state not in node.states:
        report.add(node.id, f"true_state {params.true_state!r} is not a state of the node")
    if params.triggering is not None:
        if len(params.triggering) != len(node.parents):
            report.add(node.id, "triggering list length differs from parent count")
        elif not missing:
            for p, label in zip(node.parents, params.triggering):
                if label is not None and label not in network.node(p).states:
                    report.add(node.id, f"triggering state {label!r} not a state of parent {p}")


def state_value(node: Node, posterior: Sequence[float]) -> float:
    """Expected GW value of a binary posterior under the node's value map."""
    if node.value_map is None:
        raise ModelError(f"node {node.id}: no value map")
    p = np.asarray(posterior, dtype=float)
    if p.shape != (2,):
        raise ModelError(f"node {node.id}: posterior must have exactly two entries")
    if abs(float(p.sum()) - 1.0) > PROB_TOL:
        raise ModelError(f"node {node.id}: posterior must sum to 1")
    vm = node.value_map
    return float(p[0] * vm.low_submean + p[1] * vm.high_submean)


# ---------------------------------------------------------------------------
# JSON serialization
#
# One UTF-8 document with top-level "metadata" and "nodes"; each node object
# carries "layer", "states", "parents", exactly one of "cpt" (rows in
# canonical combination order, first parent varying slowest) or "noisy_or",
# and an optional "value_map". Output is byte-deterministic.
# ---------------------------------------------------------------------------


def node_to_dict(node: Node) -> dict:
    data: dict = {
        "layer": node.layer.value,
        "states": list(node.states),
        "parents": list(node.parents),
    }
    if node.cpt is not None:
        data["cpt"] = [[float(x) for x in row] for row in node.cpt.table]
    if node.noisy_or is not None:
        params = node.noisy_or
        nd: dict = {"thetas": list(params.thetas), "leak": params.leak}
        if params.true_state is not None:
            nd["true_state"] = params.true_state
        if params.triggering is not None:
            nd["triggering"] = list(params.triggering)
        data["noisy_or"] = nd
    if node.value_map is not None:
        vm = node.value_map
        data["value_map"] = {
            "threshold": vm.threshold,
            "low_submean": vm.low_submean,
            "high_submean": vm.high_submean,
        }
    return data


def network_to_dict(network: Network) -> dict:
    return {
        "metadata": network.metadata,
        "nodes": {nid: node_to_dict(node) for nid, node in network.nodes.items()},
    }


def node_from_dict(node_id: str, data: Mapping) -> Node:
    try:
        layer = Layer(data["layer"])
        states = tuple(data["states"])
        parents = tuple(data.get("parents", ()))
    except (KeyError, ValueError) as exc:
        raise ModelError(f"node {node_id}: malformed node object ({exc})") from None

    cpt = None
    noisy = None
    if "cpt" in data:
        cpt = ExplicitCpt(np.asarray(data["cpt"], dtype=float))
    if "noisy_or" in data:
        nd = data["noisy_or"]
        try:
            noisy = NoisyOrParams(
                thetas=tuple(nd["thetas"]),
                leak=nd["leak"],
                true_state=nd.get("true_state"),
                triggering=tuple(nd["triggering"]) if "triggering" in nd else None,
            )
        except KeyError as exc:
            raise ModelError(f"node {node_id}: noisy_or object missing {exc}") from None
    value_map = None
    if "value_map" in data:
        vd = data["value_map"]
        try:
            value_map = ValueMap(
                threshold=float(vd["threshold"]),
                low_submean=float(vd["low_submean"]),
                high_submean=float(vd["high_submean"]),
            )
        except KeyError as exc:
            raise ModelError(f"node {node_id}: value_map object missing {exc}") from None
    return Node(
        id=node_id,
        layer=layer,
        states=states,
        parents=parents,
        cpt=cpt,
        noisy_or=noisy,
        value_map=value_map,
    )


def network_from_dict(data: Mapping) -> Network:
    if "nodes" not in data:
        raise ModelError("network document has no 'nodes' key")
    nodes = {
        nid: node_from_dict(nid, nd) for nid, nd in sorted(data["nodes"].items())
    }
    return Network(nodes=nodes, metadata=dict(data.get("metadata", {})))


def dumps_network(network: Network) -> str:
    return json.dumps(network_to_dict(network), indent=2, sort_keys=True) + "\n"


def dump_network(network: Network, path: str | Path) -> None:
    Path(path).write_text(dumps_network(network), encoding="utf-8")


def load_network(path: str | Path) -> Network:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: not valid JSON ({exc})") from None
    return network_from_dict(data)
