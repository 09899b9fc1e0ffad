"""Acceptance suite: one test per shipped guarantee, with pinned tolerances.

Each test prints a PASS line with the measured figure so a plain
``pytest -s tests/test_acceptance.py`` reads as a checklist.
"""

import time

import numpy as np
import pytest

from gridbn.cli import main
from gridbn.elicitation import CONFIDENCE_WEIGHTED, aggregate_capacity
from gridbn.inference import enumerate_posteriors, posterior
from gridbn.model import (
    ExplicitCpt,
    Layer,
    Network,
    Node,
    NoisyOrParams,
    ValueMap,
    state_value,
    validate,
)
from gridbn.noisy_or import compile_noisy_or, divorce, node_table, noisy_or_probability
from gridbn.optimize import CostTable, optimize
from gridbn.reports import CapacityRow, availability, load_profile
from gridbn.cli import data_path

from conftest import (
    BALANCE_MARGINAL,
    BULK_MARGINAL,
    GRID_CPT_PCT,
    grid_cpt_network,
    grid_network_with_priors,
    random_binary_network,
    random_evidence,
)
from test_optimize import oracle_greedy, synthetic_target_network, unit_costs
from test_reports import POSTERIOR_CAPACITY_GW


def make_noisy_child(rng, n):
    parents = [
        Node(id=f"P{i}", layer=Layer.L1, states=("f", "t"), cpt=ExplicitCpt([[0.5, 0.5]]))
        for i in range(n)
    ]
    child = Node(
        id="Y",
        layer=Layer.L2,
        states=("f", "t"),
        parents=tuple(p.id for p in parents),
        noisy_or=NoisyOrParams(
            thetas=tuple(rng.uniform(0, 1, n)),
            leak=float(rng.uniform(0, 1)),
            true_state="t",
            triggering=("t",) * n,
        ),
    )
    return parents, child


def conditional_of_child(network: Network, child_id: str, parent_ids: list[str]) -> np.ndarray:
    """P(child = true | parents) for every parent assignment, by summing the
    full joint over any aggregator nodes."""
    order = sorted(network.nodes)
    cards = {nid: network.node(nid).n_states for nid in order}
    joint = np.ones([cards[nid] for nid in order])
    for node in network:
        scope = node.parents + (node.id,)
        table = node_table(network, node).reshape(
            [cards[p] for p in node.parents] + [cards[node.id]]
        )
        dest = sorted(scope, key=order.index)
        table = table.transpose([scope.index(v) for v in dest])
        joint = joint * table.reshape([cards[nid] if nid in scope else 1 for nid in order])
    keep = set(parent_ids) | {child_id}
    drop = tuple(i for i, nid in enumerate(order) if nid not in keep)
    table = joint.sum(axis=drop)
    kept = [nid for nid in order if nid in keep]
    table = table.transpose([kept.index(nid) for nid in parent_ids + [child_id]])
    true_idx = network.node(child_id).state_index("t")
    totals = table.sum(axis=-1)
    return np.take(table, true_idx, axis=-1) / totals


def test_noisy_or_compiler_matches_direct_formula():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 7))
        parents, child = make_noisy_child(rng, n)
        cpt = compile_noisy_or(child, parents)
        assert cpt.n_rows == 2**n
        for row, combo in enumerate(np.ndindex(*([2] * n))):
            expected = noisy_or_probability(child.noisy_or, list(combo))
            worst = max(worst, abs(cpt.table[row, 1] - expected))
            assert abs(cpt.table[row].sum() - 1.0) <= 1e-12
    elapsed = time.perf_counter() - start
    assert worst <= 1e-12
    assert elapsed < 1.0
    print(f"\nPASS noisy-or compiler: 200 randomized children, max row error "
          f"{worst:.2e} (<=1e-12), {elapsed:.2f}s (<1s)")


def test_divorce_preserves_child_conditionals():
    rng = np.random.default_rng(202)
    start = time.perf_counter()
    worst = 0.0
    trials = 0
    for _ in range(100):
        n = int(rng.integers(3, 7))
        parents, child = make_noisy_child(rng, n)
        net = Network.from_nodes(parents + [child])
        reference = np.array(
            [
                noisy_or_probability(child.noisy_or, list(combo))
                for combo in np.ndindex(*([2] * n))
            ]
        ).reshape([2] * n)
        for max_parents in (2, 3, 4):
            divorced, _ = divorce(net, max_parents)
            assert validate(divorced).ok
            got = conditional_of_child(divorced, "Y", [p.id for p in parents])
            worst = max(worst, float(np.max(np.abs(got - reference))))
            trials += 1
    elapsed = time.perf_counter() - start
    assert worst <= 1e-9
    assert elapsed < 10.0
    print(f"\nPASS divorcing equivalence: {trials} transformed children, max "
          f"conditional error {worst:.2e} (<=1e-9), {elapsed:.2f}s (<10s)")


def test_elimination_matches_enumeration():
    rng = np.random.default_rng(303)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        net = random_binary_network(rng, int(rng.integers(3, 17)))
        evidence = random_evidence(rng, net)
        ids = sorted(net.nodes)
        ve = posterior(net, evidence, ids)
        oracle = enumerate_posteriors(net, evidence, ids)
        for nid in ids:
            worst = max(worst, float(np.max(np.abs(ve[nid] - oracle[nid]))))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-9
    assert elapsed < 60.0
    print(f"\nPASS inference oracle: 200 random networks, max posterior error "
          f"{worst:.2e} (<=1e-9), {elapsed:.1f}s (<60s)")


def test_grid_scenario_cpt_reproduction():
    net = grid_cpt_network()
    marginal = 100 * posterior(net, {}, ["GridManagement"])["GridManagement"]
    expected = np.array([33.0, 18.9, 31.5, 16.7])
    assert np.max(np.abs(marginal - expected)) <= 0.05 + 1e-9
    for row, (bulk, balance) in enumerate(
        (b, s) for b in ("lt13", "ge13") for s in ("lt5", "ge5")
    ):
        conditioned = posterior(net, {"Bulk": bulk, "Balance": balance}, ["GridManagement"])
        target = GRID_CPT_PCT[row] / GRID_CPT_PCT[row].sum()
        assert np.max(np.abs(conditioned["GridManagement"] - target)) <= 1e-12
    print(f"\nPASS grid scenario CPT: uniform-parent marginals "
          f"{np.round(marginal, 2)} within 0.05 points; all four conditioned "
          f"rows echo the elicited table to 1e-12")


def test_baseline_scenario_posteriors():
    net = grid_network_with_priors(BULK_MARGINAL, BALANCE_MARGINAL)
    got = 100 * posterior(net, {}, ["GridManagement"])["GridManagement"]
    expected = np.array([40.9, 17.0, 30.0, 12.1])
    worst = float(np.max(np.abs(got - expected)))
    assert worst <= 0.15
    print(f"\nPASS baseline scenario posteriors: aggregate marginals 74.8%/69.9% "
          f"give {np.round(got, 2)} (max deviation {worst:.3f} <= 0.15 points)")


def test_capacity_value_approximation():
    node = Node(
        id="LargeScaleNuclear",
        layer=Layer.L2,
        states=("below_mean", "ge_mean"),
        cpt=ExplicitCpt([[0.192, 0.808]]),
        value_map=ValueMap(5.0, 2.5, 7.5),
    )
    revised = state_value(node, (0.192, 0.808))
    assert revised == pytest.approx(6.5, abs=0.05)
    even = state_value(node, (0.5, 0.5))
    assert even == 5.0
    print(f"\nPASS capacity value approximation: posterior (0.192, 0.808) -> "
          f"{revised:.2f} GW (6.5 +/- 0.05); even split -> {even} GW exactly")


def test_peak_availability_reproduction():
    profile = load_profile(data_path("availability_default.json"))
    rows = [CapacityRow(comp, (0.5, 0.5), gw) for comp, gw in POSTERIOR_CAPACITY_GW.items()]
    report = availability(rows, profile)
    wind = next(e for e in report.entries if e.component == "Wind")
    assert report.peak_hour_total_gw == pytest.approx(17.2, abs=0.05)
    assert report.peak_season_total_gw == pytest.approx(15.2, abs=0.05)
    assert wind.peak_hour_gw == pytest.approx(1.284, abs=1e-9)
    assert f"{wind.peak_hour_gw:.1f}" == "1.3"
    print(f"\nPASS peak availability: hour {report.peak_hour_total_gw:.3f} GW "
          f"(17.2 +/- 0.05), season {report.peak_season_total_gw:.3f} GW "
          f"(15.2 +/- 0.05), wind {wind.peak_hour_gw:.3f} GW (prints 1.3)")


def test_panel_bulk_and_balancing_sums(responses):
    weighted = {
        comp: aggregate_capacity(responses, comp, CONFIDENCE_WEIGHTED).mean
        for comp in (
            "LargeScaleNuclear", "SmallScaleNuclear", "Hydro", "Fossil", "Gas", "Bio",
            "Battery", "PumpedHydro", "DSR", "Home", "P2X_X2P",
        )
    }
    bulk = sum(weighted[c] for c in
               ("LargeScaleNuclear", "SmallScaleNuclear", "Hydro", "Fossil", "Gas", "Bio"))
    balancing = sum(weighted[c] for c in
                    ("Battery", "PumpedHydro", "DSR", "Home", "P2X_X2P"))
    assert bulk == pytest.approx(12.7, abs=0.05)
    # Summing the declared balancing members yields 7.8 GW; the reference
    # summary prints 7.1 with an unstated classification, so the computed
    # figure is asserted openly instead of being forced to match.
    assert balancing == pytest.approx(7.8, abs=0.05)
    assert abs(balancing - 7.1) > 0.5
    print(f"\nPASS panel bucket sums: bulk {bulk:.3f} GW (12.7 +/- 0.05); "
          f"balancing computes to {balancing:.3f} GW (documented discrepancy "
          f"vs the printed 7.1)")


def _dependent_target_network(rng: np.random.Generator, n_components: int) -> Network:
    """Components sharing driver roots, so candidate impacts interact."""
    drivers = [
        Node(id=f"D{i}", layer=Layer.L1, states=("f", "t"), cpt=ExplicitCpt([[0.5, 0.5]]))
        for i in range(2)
    ]
    comps = []
    for i in range(n_components):
        comps.append(
            Node(
                id=f"C{i}",
                layer=Layer.L2,
                states=("lo", "hi"),
                parents=("D0", "D1"),
                noisy_or=NoisyOrParams(
                    thetas=tuple(rng.uniform(0.1, 0.8, 2)),
                    leak=float(rng.uniform(0.05, 0.4)),
                    true_state="hi",
                    triggering=("t", "t"),
                ),
                value_map=ValueMap(2.0, 1.0, 3.0),
            )
        )
    target = Node(
        id="Target",
        layer=Layer.L4,
        states=("no", "yes"),
        parents=tuple(c.id for c in comps),
        noisy_or=NoisyOrParams(
            thetas=tuple(rng.uniform(0.05, 0.9, n_components)),
            leak=float(rng.uniform(0.01, 0.3)),
            true_state="yes",
            triggering=("hi",) * n_components,
        ),
    )
    return Network.from_nodes(drivers + comps + [target])


def test_optimizer_matches_exhaustive_oracle(fixture_network):
    rng = np.random.default_rng(404)
    start = time.perf_counter()
    matches = 0
    trials = 0
    for trial in range(50):
        n = int(rng.integers(2, 6))
        net = (
            synthetic_target_network(rng, n)
            if trial % 2 == 0
            else _dependent_target_network(rng, n)
        )
        comps = [f"C{i}" for i in range(n)]
        costs = unit_costs(comps, rng, spread=True)
        plan = optimize(net, ("Target", "yes"), costs, (1, 1, 1), comps)
        expected = oracle_greedy(net, ("Target", "yes"), costs, (1, 1, 1), comps)
        trials += 1
        if [(s.component, s.state) for s in plan.steps] == expected:
            matches += 1
        # cumulative column against independent recomputation
        for k, step in enumerate(plan.steps, start=1):
            recomputed = enumerate_posteriors(net, plan.evidence_after(k), ["Target"])
            assert step.cumulative_probability == pytest.approx(
                float(recomputed["Target"][1]), abs=1e-9
            )
        # scaling every cost leaves the order unchanged
        scaled = optimize(net, ("Target", "yes"), costs.scaled(11.0), (1, 1, 1), comps)
        assert [(s.component, s.state) for s in scaled.steps] == [
            (s.component, s.state) for s in plan.steps
        ]
    assert matches == trials

    costs = CostTable(
        {c: v for c, v in zip(sorted(POSTERIOR_CAPACITY_GW),
                              (1270, 4998, 800, 2240, 867, 3421, 7777, 9000, 2202, 8349, 1448, 2098))}
    )
    plan = optimize(
        fixture_network,
        ("GridManagement", "B1"),
        costs,
        (1, 1, 1),
        sorted(POSTERIOR_CAPACITY_GW),
    )
    assert len(plan.steps) == 12
    assert plan.termination == "complete"
    cumulative = [plan.initial_probability] + [s.cumulative_probability for s in plan.steps]
    assert all(b >= a - 1e-12 for a, b in zip(cumulative, cumulative[1:]))
    elapsed = time.perf_counter() - start
    print(f"\nPASS optimizer: greedy order matched the exhaustive oracle in "
          f"{matches}/{trials} randomized trials; cumulative column matches "
          f"independent recomputation to 1e-9; cost scaling leaves order "
          f"unchanged; 12-step fixture plan is monotone ({elapsed:.1f}s)")


def test_end_to_end_pipeline(tmp_path, survey_path, layout_path, capsys):
    start = time.perf_counter()
    out = tmp_path / "network.json"
    assert main(
        [
            "compile",
            "--survey", str(survey_path),
            "--layout", str(layout_path),
            "--out", str(out),
        ]
    ) == 0

    assert main(
        [
            "infer",
            "--network", str(out),
            "--set", "Bulk=ge13",
            "--set", "Balance=ge5",
            "--json",
        ]
    ) == 0

    assert main(
        [
            "optimize",
            "--network", str(out),
            "--target", "GridManagement=B1",
            "--json",
        ]
    ) == 0

    assert main(["report", "--network", str(out), "--json", "--include-import"]) == 0
    elapsed = time.perf_counter() - start
    capsys.readouterr()
    assert elapsed < 120.0
    print(f"\nPASS end-to-end pipeline: compile -> infer -> optimize -> report "
          f"completed in {elapsed:.1f}s (<120s)")
