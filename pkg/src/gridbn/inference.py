"""Exact inference: posterior marginals and evidence probability.

Queries run variable elimination with a deterministic min-fill ordering
(ties broken by lexicographic id). Intermediate factors are rescaled to a
unit maximum with the scale accumulated in log space, so the joint
evidence probability survives long products without underflow.

`enumerate_posteriors` computes the same quantities by materializing the
full joint table directly from the factorization. It exists as a testing
oracle and deliberately shares no factor algebra with the elimination
path.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import EvidenceError, ImpossibleEvidenceError, ModelError
from .model import Network, is_auxiliary
from .noisy_or import node_table

# Evidence is a plain mapping from node id to observed state label.
Evidence = Mapping[str, str]

# Full-joint oracle refuses state spaces beyond this many cells.
ENUMERATION_GUARD = 2**24


@dataclass
class PosteriorSet:
    """Marginals for the queried nodes plus log P(evidence)."""

    marginals: dict[str, np.ndarray] = field(default_factory=dict)
    log_evidence: float = 0.0

    @property
    def evidence_probability(self) -> float:
        return math.exp(self.log_evidence)

    def __getitem__(self, node_id: str) -> np.ndarray:
        return self.marginals[node_id]


def validate_evidence(network: Network, evidence: Evidence) -> None:
    """Rejects unknown nodes, unknown states, and divorce aggregators."""
    for node_id, label in evidence.items():
        if node_id not in network:
            raise EvidenceError(f"evidence references unknown node {node_id!r}")
        if is_auxiliary(node_id):
            raise EvidenceError(
                f"evidence on auxiliary node {node_id!r} is not allowed"
            )
        node = network.node(node_id)
        if label not in node.states:
            raise EvidenceError(
                f"evidence {node_id}={label!r} is not a state of that node; "
                f"valid states: {list(node.states)}"
            )


@dataclass
class _Factor:
    vars: tuple[str, ...]
    table: np.ndarray


def _align(table: np.ndarray, vars: tuple[str, ...], result_vars: tuple[str, ...]) -> np.ndarray:
    """Transpose/reshape a factor table onto the axes of ``result_vars``."""
    positions = [vars.index(v) for v in result_vars if v in vars]
    t = table.transpose(positions)
    # the transposed axes appear in result order, so a plain reshape works
    shape = []
    it = iter(t.shape)
    for v in result_vars:
        shape.append(next(it) if v in vars else 1)
    return t.reshape(shape)


def _multiply(a: _Factor, b: _Factor) -> _Factor:
    result_vars = a.vars + tuple(v for v in b.vars if v not in a.vars)
    ta = _align(a.table, a.vars, result_vars)
    tb = _align(b.table, b.vars, result_vars)
    return _Factor(result_vars, ta * tb)


def _marginalize(factor: _Factor, var: str) -> _Factor:
    axis = factor.vars.index(var)
    new_vars = factor.vars[:axis] + factor.vars[axis + 1 :]
    return _Factor(new_vars, factor.table.sum(axis=axis))


def _reduce(factor: _Factor, var: str, state_idx: int) -> _Factor:
    axis = factor.vars.index(var)
    new_vars = factor.vars[:axis] + factor.vars[axis + 1 :]
    return _Factor(new_vars, np.take(factor.table, state_idx, axis=axis))


# Compiled CPT tensors per network, keyed by identity (networks are
# immutable after construction).
_table_cache: "weakref.WeakKeyDictionary[Network, dict[str, np.ndarray]]" = (
    weakref.WeakKeyDictionary()
)


def _node_tensors(network: Network) -> dict[str, np.ndarray]:
    cached = _table_cache.get(network)
    if cached is None:
        cached = {}
        for node in network:
            cards = [network.node(p).n_states for p in node.parents]
            table = node_table(network, node)
            cached[node.id] = table.reshape(*cards, node.n_states)
        _table_cache[network] = cached
    return cached


def _build_factors(network: Network, evidence: Evidence) -> list[_Factor]:
    tensors = _node_tensors(network)
    factors = []
    for node in network:
        f = _Factor(node.parents + (node.id,), tensors[node.id])
        for var in f.vars:
            if var in evidence:
                idx = network.node(var).state_index(evidence[var])
                f = _reduce(f, var, idx)
        factors.append(f)
    return factors


def _min_fill_order(factors: list[_Factor], keep: set[str]) -> list[str]:
    """Deterministic min-fill elimination order over the factor scopes."""
    adjacency: dict[str, set[str]] = {}
    for f in factors:
        for v in f.vars:
            adjacency.setdefault(v, set()).update(u for u in f.vars if u != v)
    to_eliminate = set(adjacency) - keep
    order = []
    while to_eliminate:
        best = None
        best_key = None
        for v in sorted(to_eliminate):
            neighbors = adjacency[v] & (set(adjacency) - {v})
            fill = 0
            ns = sorted(neighbors)
            for i in range(len(ns)):
                for j in range(i + 1, len(ns)):
                    if ns[j] not in adjacency[ns[i]]:
                        fill += 1
            key = (fill, v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        assert best is not None
        order.append(best)
        neighbors = adjacency.pop(best)
        for u in neighbors:
            adjacency[u].discard(best)
            adjacency[u].update(n for n in neighbors if n != u)
        to_eliminate.discard(best)
    return order


def _rescaled(factor: _Factor, log_scale: float) -> tuple[_Factor, float]:
    """Pulls the factor's peak out into the accumulated log scale."""
    peak = float(factor.table.max()) if factor.table.size else 0.0
    if peak > 0.0:
        return _Factor(factor.vars, factor.table / peak), log_scale + math.log(peak)
    return factor, log_scale


def _eliminate(
    factors: list[_Factor], keep: set[str]
) -> tuple[_Factor, float]:
    """Sums out everything but ``keep``; returns (final factor, log scale).

    Every factor is kept at unit peak with the true magnitude accumulated
    in log space, so long products of small probabilities cannot
    underflow.
    """
    order = _min_fill_order(factors, keep)
    log_scale = 0.0
    work = []
    for f in factors:
        f, log_scale = _rescaled(f, log_scale)
        work.append(f)
    for var in order:
        related = [f for f in work if var in f.vars]
        work = [f for f in work if var not in f.vars]
        if not related:
            continue
        product = related[0]
        for f in related[1:]:
            product = _multiply(product, f)
        summed, log_scale = _rescaled(_marginalize(product, var), log_scale)
        work.append(summed)
    final = _Factor((), np.asarray(1.0))
    for f in work:
        final, log_scale = _rescaled(_multiply(final, f), log_scale)
    return final, log_scale


def _log_evidence(network: Network, evidence: Evidence) -> float:
    if not evidence:
        return 0.0
    final, log_scale = _eliminate(_build_factors(network, evidence), keep=set())
    total = float(final.table)
    if total <= 0.0:
        raise ImpossibleEvidenceError(
            f"evidence has probability zero: {dict(sorted(evidence.items()))}"
        )
    return math.log(total) + log_scale


def joint_probability(network: Network, evidence: Evidence) -> float:
    """Exact P(evidence); 1.0 for empty evidence."""
    validate_evidence(network, evidence)
    if not evidence:
        return 1.0
    try:
        return math.exp(_log_evidence(network, evidence))
    except ImpossibleEvidenceError:
        return 0.0


def posterior(
    network: Network, evidence: Evidence, query: Iterable[str]
) -> PosteriorSet:
    """Exact marginals P(node | evidence) for every queried node."""
    validate_evidence(network, evidence)
    query = list(query)
    for q in query:
        if q not in network:
            raise EvidenceError(f"query references unknown node {q!r}")

    log_p = _log_evidence(network, evidence)

    result = PosteriorSet(log_evidence=log_p)
    factors = _build_factors(network, evidence)
    for q in query:
        node = network.node(q)
        if q in evidence:
            point = np.zeros(node.n_states)
            point[node.state_index(evidence[q])] = 1.0
            result.marginals[q] = point
            continue
        final, _ = _eliminate(factors, keep={q})
        table = np.asarray(final.table, dtype=float).reshape(node.n_states)
        total = float(table.sum())
        if total <= 0.0:
            raise ImpossibleEvidenceError(
                f"evidence has probability zero: {dict(sorted(evidence.items()))}"
            )
        result.marginals[q] = table / total
    return result


def enumerate_posteriors(
    network: Network, evidence: Evidence, query: Iterable[str]
) -> PosteriorSet:
    """Testing oracle: same contract as `posterior`, via the full joint.

    Multiplies every node's CPT into one dense tensor over all variables,
    then slices and sums. Refuses state spaces larger than the guard.
    """
    validate_evidence(network, evidence)
    query = list(query)
    for q in query:
        if q not in network:
            raise EvidenceError(f"query references unknown node {q!r}")

    order = sorted(network.nodes)
    cards = {nid: network.node(nid).n_states for nid in order}
    total_cells = 1
    for nid in order:
        total_cells *= cards[nid]
        if total_cells > ENUMERATION_GUARD:
            raise ModelError(
                f"state space exceeds enumeration guard of {ENUMERATION_GUARD} cells"
            )
    axis = {nid: i for i, nid in enumerate(order)}

    joint = np.ones([cards[nid] for nid in order])
    for node in network:
        scope = node.parents + (node.id,)
        table = node_table(network, node).reshape(
            [cards[p] for p in node.parents] + [cards[node.id]]
        )
        dest = sorted(scope, key=axis.__getitem__)
        table = table.transpose([scope.index(v) for v in dest])
        shape = [cards[nid] if nid in scope else 1 for nid in order]
        joint = joint * table.reshape(shape)

    slicer = tuple(
        network.node(nid).state_index(evidence[nid]) if nid in evidence else slice(None)
        for nid in order
    )
    reduced = joint[slicer]
    remaining = [nid for nid in order if nid not in evidence]
    p_evidence = float(reduced.sum())
    if p_evidence <= 0.0:
        raise ImpossibleEvidenceError(
            f"evidence has probability zero: {dict(sorted(evidence.items()))}"
        )

    result = PosteriorSet(log_evidence=math.log(p_evidence) if evidence else 0.0)
    for q in query:
        node = network.node(q)
        if q in evidence:
            point = np.zeros(node.n_states)
            point[node.state_index(evidence[q])] = 1.0
            result.marginals[q] = point
            continue
        keep_axis = remaining.index(q)
        others = tuple(i for i in range(reduced.ndim) if i != keep_axis)
        marginal = reduced.sum(axis=others) if others else reduced
        result.marginals[q] = np.asarray(marginal, dtype=float) / p_evidence
    return result
