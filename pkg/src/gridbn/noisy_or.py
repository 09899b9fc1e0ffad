"""Noisy-OR expansion and the parent-friendly divorcing transformation.

A noisy-OR child with strengths t_1..t_n and leak l has

    P(child active | causes) = 1 - (1 - l) * prod over present causes (1 - t_i)

Expanding this into an explicit CPT costs 2^n rows, while the elicited
parameter count stays n + 1. Divorcing inserts aggregator nodes so that no
node keeps more than a configured number of parents, without changing the
child's conditional distribution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ModelError
from .model import (
    AUX_MARKER,
    ExplicitCpt,
    Network,
    Node,
    NoisyOrParams,
)


def noisy_or_probability(params: NoisyOrParams, present: Sequence[int]) -> float:
    """Probability the effect occurs for a given pattern of present causes.

    Presence flags are strictly 0 or 1; fractional presence is rejected
    rather than rounded.
    """
    if len(present) != len(params.thetas):
        raise ModelError(
            f"{len(present)} presence flags for {len(params.thetas)} causes"
        )
    q = 1.0 - params.leak
    for theta, flag in zip(params.thetas, present):
        if flag not in (0, 1):
            raise ModelError(f"presence flags must be 0 or 1, got {flag!r}")
        if flag:
            q *= 1.0 - theta
    return 1.0 - q


def _trigger_indices(node: Node, parents: Sequence[Node] | None) -> list[int]:
    """Index of the 'cause present' state for each parent."""
    params = node.noisy_or
    assert params is not None
    labels = params.triggering or (None,) * len(node.parents)
    if parents is None:
        if any(label is not None for label in labels):
            raise ModelError(
                f"node {node.id}: triggering state labels require parent nodes to resolve"
            )
        return [1] * len(node.parents)
    if len(parents) != len(node.parents):
        raise ModelError(f"node {node.id}: expected {len(node.parents)} parent nodes")
    indices = []
    for parent, label in zip(parents, labels):
        if parent.n_states != 2:
            raise ModelError(
                f"node {node.id}: noisy-OR parent {parent.id} is not binary"
            )
        indices.append(parent.n_states - 1 if label is None else parent.state_index(label))
    return indices


def compile_noisy_or(node: Node, parents: Sequence[Node] | None = None) -> ExplicitCpt:
    """Expands noisy-OR parameters into an explicit CPT.

    Rows follow the canonical combination order (first parent varying
    slowest). When ``parents`` is omitted the parents are assumed binary
    with the last state triggering.
    """
    params = node.noisy_or
    if params is None:
        raise ModelError(f"node {node.id}: no noisy-OR parameters to compile")
    if len(node.states) != 2:
        raise ModelError(f"node {node.id}: noisy-OR child must be binary")
    if len(params.thetas) != len(node.parents):
        raise ModelError(
            f"node {node.id}: {len(params.thetas)} strengths for "
            f"{len(node.parents)} parents"
        )
    triggers = _trigger_indices(node, parents)
    true_idx = (
        len(node.states) - 1
        if params.true_state is None
        else node.state_index(params.true_state)
    )
    n = len(node.parents)
    table = np.empty((2**n, 2), dtype=float)
    for row, combo in enumerate(np.ndindex(*([2] * n)) if n else [()]):
        present = [1 if combo[i] == triggers[i] else 0 for i in range(n)]
        p_true = noisy_or_probability(params, present)
        table[row, true_idx] = p_true
        table[row, 1 - true_idx] = 1.0 - p_true
    return ExplicitCpt(table)


def node_table(network: Network, node: Node) -> np.ndarray:
    """The node's explicit CPT table, compiling noisy-OR on the fly."""
    if node.cpt is not None:
        return node.cpt.table
    parents = [network.node(p) for p in node.parents]
    return compile_noisy_or(node, parents).table


@dataclass
class DivorcePlan:
    """Record of aggregator nodes introduced by `divorce`."""

    max_parents_per_child: int
    introduced: list[tuple[str, tuple[str, ...]]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "max_parents_per_child": self.max_parents_per_child,
            "introduced_nodes": [
                {"id": nid, "grouped": list(grouped)} for nid, grouped in self.introduced
            ],
        }


def divorce(network: Network, max_parents_per_child: int) -> tuple[Network, DivorcePlan]:
    """Bounds parent counts of noisy-OR children by inserting aggregators.

    Parents are grouped left-to-right in declared order into chunks of the
    requested size; each chunk of two or more becomes a leak-free noisy-OR
    aggregator feeding the next level with full strength. The child keeps
    its own leak, so for every assignment of the original parents the
    child's conditional distribution is unchanged. Explicit-CPT nodes are
    left untouched. Returns the original network unchanged (with an empty
    plan) when nothing exceeds the bound.
    """
    if max_parents_per_child < 2:
        raise ModelError("max_parents_per_child must be at least 2")

    plan = DivorcePlan(max_parents_per_child)
    new_nodes: dict[str, Node] = {}
    taken = set(network.nodes)
    changed = False

    for node in network:
        if node.noisy_or is None or len(node.parents) <= max_parents_per_child:
            new_nodes[node.id] = node
            continue

        changed = True
        params = node.noisy_or
        triggers = params.triggering or (None,) * len(node.parents)
        # (parent id, strength, triggering label) work list
        items: list[tuple[str, float, str | None]] = list(
            zip(node.parents, params.thetas, triggers)
        )
        counter = 1
        while len(items) > max_parents_per_child:
            grouped: list[tuple[str, float, str | None]] = []
            for start in range(0, len(items), max_parents_per_child):
                chunk = items[start : start + max_parents_per_child]
                if len(chunk) == 1:
                    grouped.append(chunk[0])
                    continue
                aux_id = f"{node.id}{AUX_MARKER}{counter}"
                while aux_id in taken:
                    counter += 1
                    aux_id = f"{node.id}{AUX_MARKER}{counter}"
                counter += 1
                taken.add(aux_id)
                aux = Node(
                    id=aux_id,
                    layer=node.layer,
                    states=("absent", "present"),
                    parents=tuple(pid for pid, _, _ in chunk),
                    noisy_or=NoisyOrParams(
                        thetas=tuple(theta for _, theta, _ in chunk),
                        leak=0.0,
                        true_state="present",
                        triggering=tuple(label for _, _, label in chunk),
                    ),
                )
                new_nodes[aux_id] = aux
                plan.introduced.append((aux_id, aux.parents))
                grouped.append((aux_id, 1.0, "present"))
            items = grouped

        new_nodes[node.id] = Node(
            id=node.id,
            layer=node.layer,
            states=node.states,
            parents=tuple(pid for pid, _, _ in items),
            noisy_or=NoisyOrParams(
                thetas=tuple(theta for _, theta, _ in items),
                leak=params.leak,
                true_state=params.true_state,
                triggering=tuple(label for _, _, label in items),
            ),
            value_map=node.value_map,
        )

    if not changed:
        return network, plan

    metadata = dict(network.metadata)
    metadata["divorce"] = plan.to_dict()
    return Network(nodes=new_nodes, metadata=metadata), plan
