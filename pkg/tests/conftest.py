"""Shared fixtures: packaged data paths, the compiled fixture network,
and random-network generators used by the oracle comparisons."""

from __future__ import annotations

import numpy as np
import pytest

from gridbn.cli import data_path
from gridbn.elicitation import (
    CONFIDENCE_WEIGHTED,
    assemble_network,
    load_layout,
    load_survey,
)
from gridbn.model import ExplicitCpt, Layer, Network, Node, NoisyOrParams

GRID_CPT_PCT = np.array(
    [
        [22.9, 16.5, 29.4, 31.2],
        [24.9, 20.8, 39.5, 14.8],
        [31.0, 26.2, 30.3, 12.5],
        [53.2, 11.9, 26.7, 8.2],
    ]
)

SCENARIO_BASELINE = (0.409, 0.170, 0.300, 0.121)
BULK_MARGINAL = 0.748
BALANCE_MARGINAL = 0.699


@pytest.fixture(scope="session")
def survey_path():
    return data_path("fixture_survey.json")


@pytest.fixture(scope="session")
def layout_path():
    return data_path("layout_fi2035.json")


@pytest.fixture(scope="session")
def responses(survey_path):
    return load_survey(survey_path)


@pytest.fixture(scope="session")
def layout(layout_path):
    return load_layout(layout_path)


@pytest.fixture(scope="session")
def fixture_network(responses, layout) -> Network:
    return assemble_network(responses, layout, CONFIDENCE_WEIGHTED)


def grid_cpt_network() -> Network:
    """Two uniform binary roots feeding the elicited grid scenario CPT."""
    return grid_network_with_priors(0.5, 0.5)


def grid_network_with_priors(p_bulk: float, p_balance: float) -> Network:
    bulk = Node(
        id="Bulk",
        layer=Layer.L3,
        states=("lt13", "ge13"),
        cpt=ExplicitCpt(np.array([[1 - p_bulk, p_bulk]])),
    )
    balance = Node(
        id="Balance",
        layer=Layer.L3,
        states=("lt5", "ge5"),
        cpt=ExplicitCpt(np.array([[1 - p_balance, p_balance]])),
    )
    grid = Node(
        id="GridManagement",
        layer=Layer.L4,
        states=("B1", "B2", "B3", "B4"),
        parents=("Bulk", "Balance"),
        cpt=ExplicitCpt(GRID_CPT_PCT / 100.0),
    )
    return Network.from_nodes([bulk, balance, grid])


def random_binary_network(rng: np.random.Generator, n_nodes: int,
                          max_parents: int = 3, noisy_fraction: float = 0.3) -> Network:
    """Random DAG of binary nodes with strictly positive CPT rows."""
    ids = [f"N{i:02d}" for i in range(n_nodes)]
    order = list(ids)
    rng.shuffle(order)
    nodes = []
    for pos, nid in enumerate(order):
        k = int(rng.integers(0, min(max_parents, pos) + 1))
        parents = (
            tuple(sorted(rng.choice(order[:pos], size=k, replace=False).tolist()))
            if k
            else ()
        )
        if k and rng.random() < noisy_fraction:
            nodes.append(
                Node(
                    id=nid,
                    layer=Layer.L1,
                    states=("s0", "s1"),
                    parents=parents,
                    noisy_or=NoisyOrParams(
                        thetas=tuple(rng.uniform(0, 1, k)),
                        leak=float(rng.uniform(0.01, 0.99)),
                        true_state="s1",
                        triggering=("s1",) * k,
                    ),
                )
            )
        else:
            rows = rng.dirichlet([1.0, 1.0], size=2**k)
            nodes.append(
                Node(
                    id=nid,
                    layer=Layer.L1,
                    states=("s0", "s1"),
                    parents=parents,
                    cpt=ExplicitCpt(rows),
                )
            )
    return Network.from_nodes(nodes)


def random_evidence(rng: np.random.Generator, network: Network, max_nodes: int = 4) -> dict:
    ids = sorted(network.nodes)
    k = int(rng.integers(0, min(max_nodes, len(ids)) + 1))
    if not k:
        return {}
    chosen = rng.choice(ids, size=k, replace=False)
    return {
        nid: network.node(nid).states[int(rng.integers(0, network.node(nid).n_states))]
        for nid in chosen
    }
