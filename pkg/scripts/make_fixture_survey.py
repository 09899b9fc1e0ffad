#!/usr/bin/env python3
"""Builds the shipped synthetic expert survey.

The panel data is synthetic but calibrated: estimate lists, confidence
solves, and leak back-solves are chosen so that the compiled network
reproduces the reference aggregates the test suite asserts (panel means
per component, the large-nuclear sub-means, the aggregate bulk/balancing
marginals, the baseline scenario vector, and the per-component capacity
values). Run from the repository root:

    python3 scripts/make_fixture_survey.py

Deterministic: regenerating yields byte-identical output.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np
from scipy.optimize import minimize

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from gridbn.elicitation import (  # noqa: E402
    CONFIDENCE_WEIGHTED,
    UNIFORM,
    aggregate_capacity,
    assemble_network,
    load_layout,
    parse_response,
    top_factors,
)
from gridbn.inference import posterior  # noqa: E402

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "gridbn" / "data"
OUT_PATH = DATA_DIR / "fixture_survey.json"

N_EXPERTS = 15
EXPERTS = [f"E{i + 1:02d}" for i in range(N_EXPERTS)]

# Calibration targets: aggregate bulk/balancing marginals and the baseline
# grid scenario vector the compiled fixture must reproduce.
BULK_MARGINAL = 0.748
BALANCE_MARGINAL = 0.699
SCENARIO_BASELINE = (0.409, 0.170, 0.300, 0.121)

# Per component: panel mean (uniform), panel mean (confidence weighted),
# mean confidence, estimate lists (low bucket, high bucket), and the
# capacity value the compiled network should report. The large-nuclear
# row pins its weighted sub-means at (2.5, 7.5) and its high-state
# probability at 0.808 instead of a value target.
COMPONENTS = {
    "LargeScaleNuclear": {
        "mean": 4.7, "wmean": 5.0, "conf": 85.2,
        "lows": [0.4, 1.2, 1.8, 2.3, 2.6, 3.0, 3.3, 4.0],
        "highs": [5.4, 6.6, 7.2, 7.6, 7.9, 8.4, 8.8],
        "submeans": (2.5, 7.5), "p_high": 0.808,
    },
    "Hydro": {
        "mean": 2.8, "wmean": 2.8, "conf": 84.7,
        "lows": [1.5, 1.7, 1.9, 2.0, 2.1, 2.2, 2.3, 2.4],
        "highs": [3.0, 3.4, 3.6, 3.7, 3.8, 4.0, 4.4],
        "value": 3.2,
    },
    "ImportExport": {
        "mean": 5.9, "wmean": 5.8, "conf": 72.0,
        "lows": [4.0, 4.5, 4.8, 5.0, 5.2, 5.4, 5.6],
        "highs": [6.1, 6.3, 6.5, 6.7, 6.9, 7.0, 7.2, 7.3],
    },
    "SmallScaleNuclear": {
        "mean": 0.3, "wmean": 0.2, "conf": 67.0,
        "lows": [0.0] * 9,
        "highs": [0.4, 0.5, 0.6, 0.8, 1.0, 1.2],
        "value": 0.3,
    },
    "Fossil": {
        "mean": 0.6, "wmean": 0.5, "conf": 66.7,
        "lows": [0.0, 0.1, 0.2, 0.2, 0.3, 0.3, 0.4, 0.4],
        "highs": [0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.4],
        "value": 0.6,
    },
    "Wind": {
        "mean": 19.1, "wmean": 19.0, "conf": 66.3,
        "lows": [10.0, 12.0, 13.0, 14.0, 14.5, 15.0, 16.0, 17.7],
        "highs": [22.5, 23.5, 24.5, 25.0, 25.5, 26.0, 27.3],
        "value": 21.4,
    },
    "Solar": {
        "mean": 5.8, "wmean": 5.9, "conf": 65.8,
        "lows": [2.5, 3.0, 3.5, 4.0, 4.2, 4.5, 5.0, 5.3],
        "highs": [6.4, 7.0, 7.5, 8.0, 8.3, 8.8, 9.0],
        "value": 6.9,
    },
    "Battery": {
        "mean": 1.2, "wmean": 1.1, "conf": 61.3,
        "lows": [0.2, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
        "highs": [1.3, 1.5, 1.7, 1.9, 2.0, 2.2, 2.3],
        "value": 1.0,
    },
    "PumpedHydro": {
        "mean": 0.6, "wmean": 0.6, "conf": 60.0,
        "lows": [0.0, 0.1, 0.2, 0.2, 0.3, 0.3, 0.4, 0.4, 0.5],
        "highs": [0.7, 0.9, 1.0, 1.2, 1.3, 1.5],
        "value": 0.5,
    },
    "DSR": {
        "mean": 4.9, "wmean": 4.7, "conf": 59.0,
        "lows": [1.5, 2.0, 2.5, 3.0, 3.2, 3.5, 4.0],
        "highs": [5.3, 5.8, 6.2, 6.6, 7.0, 7.3, 7.6, 8.0],
        "value": 5.4,
    },
    "Gas": {
        "mean": 1.6, "wmean": 1.6, "conf": 54.7,
        "lows": [0.5, 0.8, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5],
        "highs": [1.8, 1.9, 2.0, 2.2, 2.3, 2.4, 2.6],
        "value": 1.9,
    },
    "Bio": {
        "mean": 2.6, "wmean": 2.6, "conf": 54.0,
        "lows": [1.2, 1.5, 1.8, 2.0, 2.1, 2.2, 2.3, 2.4],
        "highs": [2.8, 3.0, 3.2, 3.4, 3.5, 3.7, 3.9],
        "value": 3.0,
    },
    "Home": {
        "mean": 0.9, "wmean": 0.8, "conf": 54.0,
        "lows": [0.2, 0.3, 0.4, 0.5, 0.5, 0.6, 0.7, 0.7],
        "highs": [1.0, 1.1, 1.2, 1.4, 1.5, 1.6, 1.8],
    },
    "P2X_X2P": {
        "mean": 0.7, "wmean": 0.6, "conf": 49.3,
        "lows": [0.0, 0.1, 0.1, 0.2, 0.2, 0.3, 0.3, 0.4, 0.5],
        "highs": [0.8, 1.0, 1.3, 1.5, 1.8, 2.0],
        "value": 0.7,
    },
}

# External-factor causal strengths per component (three ranked factors)
# plus a leak placeholder. Network components get their leak back-solved
# from the capacity value target; survey-only components use the explicit
# leak given here.
FACTOR_EFFECTS = {
    "LargeScaleNuclear": [("PolicyAndIncentives", 0.55), ("NeededInvestments", 0.45), ("PublicAcceptance", 0.40)],
    "SmallScaleNuclear": [("PolicyAndIncentives", 0.40), ("TechnologyDevelopment", 0.22), ("PublicAcceptance", 0.18)],
    "Hydro": [("EnvironmentalRegulation", 0.30), ("LandResources", 0.20), ("ElectricityPricing", 0.15)],
    "Fossil": [("PolicyAndIncentives", 0.42), ("EnergySecurity", 0.30), ("ElectricityPricing", 0.18)],
    "Gas": [("EnergySecurity", 0.40), ("PolicyAndIncentives", 0.32), ("GeopoliticalSituation", 0.22)],
    "Bio": [("PolicyAndIncentives", 0.35), ("RawMaterialCosts", 0.28), ("EnvironmentalRegulation", 0.20)],
    "Wind": [("ElectricityPricing", 0.45), ("GridConnectionCapacity", 0.35), ("PublicAcceptance", 0.30)],
    "Solar": [("ElectricityPricing", 0.40), ("TechnologyDevelopment", 0.30), ("SolarIrradiance", 0.20)],
    "Battery": [("ElectricityPricing", 0.28), ("TechnologyDevelopment", 0.18), ("RawMaterialCosts", 0.12)],
    "PumpedHydro": [("LandResources", 0.22), ("NeededInvestments", 0.15), ("ElectricityPricing", 0.10)],
    "DSR": [("ElectricityPricing", 0.50), ("TechnologyDevelopment", 0.40), ("IndustrialDemand", 0.30)],
    "P2X_X2P": [("TechnologyDevelopment", 0.38), ("ElectricityPricing", 0.24), ("NeededInvestments", 0.16)],
    "Home": [("ElectricityPricing", 0.35), ("TechnologyDevelopment", 0.25), ("PolicyAndIncentives", 0.15)],
    "ImportExport": [("GeopoliticalSituation", 0.30), ("PolicyAndIncentives", 0.25), ("EnergySecurity", 0.20)],
}
SURVEY_ONLY_LEAK = {"Home": 0.20, "ImportExport": 0.25}

# Mention counts for the three ranked factors and two decoys; every
# expert names exactly three factors per component. Small-scale nuclear's
# lead factor is mentioned by 12 of 15 panellists, power-to-x's by 11.
MENTION_COUNTS = {"SmallScaleNuclear": (12, 11, 10, 7, 5), "P2X_X2P": (11, 10, 9, 8, 7)}
DEFAULT_MENTIONS = (12, 11, 10, 7, 5)

# Causal strengths of components on the aggregate capacity nodes. Leaks
# are back-solved so the aggregate marginals land on their targets.
BULK_EFFECTS = [
    ("LargeScaleNuclear", 0.46), ("SmallScaleNuclear", 0.04), ("Hydro", 0.50),
    ("Fossil", 0.08), ("Gas", 0.20), ("Bio", 0.18),
]
BALANCE_EFFECTS = [("DSR", 0.50), ("Battery", 0.30), ("PumpedHydro", 0.15), ("P2X_X2P", 0.10)]
BULK_CONFIDENCES = {"Hydro": 80, "LargeScaleNuclear": 78, "Gas": 66, "Bio": 62,
                    "Fossil": 58, "SmallScaleNuclear": 55, "Leak": 60}
BALANCE_CONFIDENCES = {"DSR": 70, "Battery": 64, "PumpedHydro": 60, "P2X_X2P": 52, "Leak": 58}

# Usage split of variable generation (battery, p2x, pumped hydro, direct
# use) per wind/solar level pair; direct use shrinks as capacity grows.
STORAGE_ROWS = [
    (("lt20", "lt5"), (18.0, 10.0, 6.0, 66.0), 58),
    (("lt20", "ge5"), (20.0, 14.0, 6.0, 60.0), 60),
    (("ge20", "lt5"), (21.0, 20.0, 6.0, 53.0), 57),
    (("ge20", "ge5"), (22.0, 29.0, 6.0, 43.0), 55),
]

# Grid scenario probabilities per bulk/balance level pair (percent).
GRID_ROWS = [
    (("lt13", "lt5"), (22.9, 16.5, 29.4, 31.2), 62),
    (("lt13", "ge5"), (24.9, 20.8, 39.5, 14.8), 64),
    (("ge13", "lt5"), (31.0, 26.2, 30.3, 12.5), 66),
    (("ge13", "ge5"), (53.2, 11.9, 26.7, 8.2), 68),
]

# Paired plus/minus offsets (percent points) that leave both uniform and
# confidence-weighted means untouched; the last expert answers the mean.
DELTA_PATTERN = [4.5, -4.5, 7.5, -7.5, 2.5, -2.5, 9.5, -9.5, 1.5, -1.5, 6.0, -6.0, 3.0, -3.0, 0.0]


def spread_effects(target_pct: float, rotation: int) -> list[float]:
    """15 one-decimal percents with exact mean ``round(target_pct, 1)``."""
    t = round(target_pct, 1)
    limit = max(abs(d) for d in DELTA_PATTERN)
    scale = min(1.0, t / limit if t < limit else 1.0, (100.0 - t) / limit if 100.0 - t < limit else 1.0)
    deltas = [round(abs(d) * scale, 1) * (1 if d > 0 else -1 if d < 0 else 0) for d in DELTA_PATTERN]
    rotated = deltas[rotation % N_EXPERTS:] + deltas[:rotation % N_EXPERTS]
    return [round(t + d, 1) for d in rotated]


def solve_confidences(comp: str, cfg: dict) -> tuple[list[float], list[float]]:
    """Confidence percents making the weighted aggregates hit their targets.

    Minimizes distance from a flat panel subject to: total confidence
    matches the panel mean, the weighted overall mean lands on the target,
    and each bucket's weighted mean lands on its sub-mean target (the
    bucket's own plain mean unless pinned explicitly).
    """
    lows = np.asarray(cfg["lows"], dtype=float)
    highs = np.asarray(cfg["highs"], dtype=float)
    x = np.concatenate([lows, highs])
    n = len(x)
    assert n == N_EXPERTS, comp
    assert abs(x.sum() - N_EXPERTS * cfg["mean"]) < 1e-9, f"{comp}: estimate sum off target"

    low_target, high_target = cfg.get("submeans", (float(lows.mean()), float(highs.mean())))
    cbar, wmean = cfg["conf"], cfg["wmean"]

    is_low = np.arange(n) < len(lows)
    rows = [
        (np.ones(n), n * cbar),
        (x, n * cbar * wmean),
        (np.where(is_low, x - low_target, 0.0), 0.0),
        (np.where(~is_low, x - high_target, 0.0), 0.0),
    ]
    # a bucket of identical estimates yields an identically-zero row
    rows = [(a, rhs) for a, rhs in rows if float(np.abs(a).max()) > 1e-12]
    a_rows = np.stack([a for a, _ in rows])
    b = np.array([rhs for _, rhs in rows])

    def objective(c: np.ndarray) -> float:
        return float(((c - cbar) ** 2).sum())

    def objective_grad(c: np.ndarray) -> np.ndarray:
        return 2.0 * (c - cbar)

    result = minimize(
        objective,
        x0=np.full(n, cbar),
        jac=objective_grad,
        method="SLSQP",
        bounds=[(25.0, 100.0)] * n,
        constraints=[
            {"type": "eq", "fun": lambda c, i=i: float(a_rows[i] @ c - b[i])}
            for i in range(len(b))
        ],
        options={"maxiter": 500, "ftol": 1e-12},
    )
    if not result.success:
        raise SystemExit(f"{comp}: confidence solve failed: {result.message}")
    conf = np.round(result.x, 1)
    if conf.min() < 24.9 or conf.max() > 100.0:
        raise SystemExit(f"{comp}: confidences out of range: {conf.min()}..{conf.max()}")
    return [float(v) for v in conf[: len(lows)]], [float(v) for v in conf[len(lows):]]


def build_qs1a() -> dict[str, list[tuple[float, float]]]:
    """Per component, the (estimate, confidence) pair for each expert."""
    per_expert: dict[str, list[tuple[float, float]]] = {}
    for idx, (comp, cfg) in enumerate(COMPONENTS.items()):
        low_conf, high_conf = solve_confidences(comp, cfg)
        pairs = list(zip(cfg["lows"], low_conf)) + list(zip(cfg["highs"], high_conf))
        rotation = idx % N_EXPERTS
        per_expert[comp] = pairs[rotation:] + pairs[:rotation]
    return per_expert


def deal_mentions(comp: str, idx: int) -> list[list[str]]:
    """Exactly three factor mentions per expert with fixed per-factor counts."""
    mains = [f for f, _ in FACTOR_EFFECTS[comp]]
    layout_factors = json.loads((DATA_DIR / "layout_fi2035.json").read_text())["factors"]
    decoys = [f for f in layout_factors if f not in mains][:2]
    counts = MENTION_COUNTS.get(comp, DEFAULT_MENTIONS)
    sequence: list[str] = []
    for factor, count in zip(mains + decoys, counts):
        sequence.extend([factor] * count)
    assert len(sequence) == 3 * N_EXPERTS
    mentions = []
    for e in range(N_EXPERTS):
        slot = (e + idx) % N_EXPERTS
        picks = [sequence[slot], sequence[slot + N_EXPERTS], sequence[slot + 2 * N_EXPERTS]]
        assert len(set(picks)) == 3, f"{comp}: duplicate mention for expert {e}"
        mentions.append(picks)
    return mentions


def l2_leak(cfg: dict, thetas: list[float], low: float, high: float) -> float:
    """Leak making the component's marginal hit its probability target."""
    if "p_high" in cfg:
        p = cfg["p_high"]
    else:
        p = (cfg["value"] - low) / (high - low)
    shield = float(np.prod([1.0 - t / 2.0 for t in thetas]))
    leak = 1.0 - (1.0 - p) / shield
    if not 0.0 <= leak <= 1.0:
        raise SystemExit(f"leak out of range ({leak:.4f}) for p={p:.4f}")
    return leak


def build_survey(bulk_leak_pct: float, balance_leak_pct: float,
                 realized_submeans: dict[str, tuple[float, float]]) -> dict:
    qs1a = build_qs1a()
    experts = []
    for e, expert_id in enumerate(EXPERTS):
        entry: dict = {"id": expert_id, "confidence_default": 60}

        entry["qs1a"] = {
            comp: {"capacity_gw": qs1a[comp][e][0], "confidence": qs1a[comp][e][1]}
            for comp in COMPONENTS
        }
        entry["qs1b"] = {
            comp: deal_mentions(comp, idx)[e] for idx, comp in enumerate(COMPONENTS)
        }

        qs1c: dict = {}
        for idx, (comp, factors) in enumerate(FACTOR_EFFECTS.items()):
            base_conf = round(COMPONENTS[comp]["conf"])
            effects: dict = {}
            for f_idx, (factor, theta) in enumerate(factors):
                values = spread_effects(theta * 100.0, rotation=idx + f_idx)
                conf = float(min(95, max(30, base_conf + (5, 0, -5)[f_idx])))
                effects[factor] = {"effect": values[e], "confidence": conf}
            if comp in SURVEY_ONLY_LEAK:
                leak = SURVEY_ONLY_LEAK[comp]
            else:
                thetas = [round(t * 100.0, 1) / 100.0 for _, t in factors]
                low, high = realized_submeans[comp]
                leak = l2_leak(COMPONENTS[comp], thetas, low, high)
            leak_values = spread_effects(leak * 100.0, rotation=idx + 3)
            effects["Leak"] = {
                "effect": leak_values[e],
                "confidence": float(min(95, max(30, base_conf - 3))),
            }
            qs1c[comp] = effects
        entry["qs1c"] = qs1c

        entry["qs2"] = [
            {
                "parent_states": list(states),
                "probabilities": _perturbed_row(values, pair_idx=e // 2, exact=(e == 14), sign=1 if e % 2 == 0 else -1, row_idx=r),
                "confidence": conf,
            }
            for r, (states, values, conf) in enumerate(STORAGE_ROWS)
        ]

        entry["qs3a"] = _effect_block(BALANCE_EFFECTS, BALANCE_CONFIDENCES, balance_leak_pct, e, rotation=3)
        entry["qs3b"] = _effect_block(BULK_EFFECTS, BULK_CONFIDENCES, bulk_leak_pct, e, rotation=5)

        entry["qs4"] = [
            {
                "parent_states": list(states),
                "probabilities": _perturbed_row(values, pair_idx=e // 2, exact=(e == 14), sign=1 if e % 2 == 0 else -1, row_idx=r),
                "confidence": conf,
            }
            for r, (states, values, conf) in enumerate(GRID_ROWS)
        ]

        experts.append(entry)
    return {"experts": experts}


# Cell pairs and magnitudes used to perturb elicited CPT rows; each expert
# pair cancels exactly, keeping row sums at 100 and means at the base row.
ROW_PERTURB = [(0, 2, 1.2), (1, 3, 2.2), (0, 3, 3.2), (1, 2, 1.7), (0, 2, 2.7), (1, 3, 0.7), (0, 3, 1.4)]


def _perturbed_row(values: tuple[float, ...], pair_idx: int, exact: bool, sign: int, row_idx: int) -> list[float]:
    row = list(values)
    if exact:
        return row
    cell_a, cell_b, delta = ROW_PERTURB[(pair_idx + row_idx) % len(ROW_PERTURB)]
    row[cell_a] = round(row[cell_a] + sign * delta, 1)
    row[cell_b] = round(row[cell_b] - sign * delta, 1)
    return row


def _effect_block(effects: list[tuple[str, float]], confidences: dict, leak_pct: float,
                  e: int, rotation: int) -> dict:
    block = {}
    for f_idx, (comp, theta) in enumerate(effects):
        values = spread_effects(theta * 100.0, rotation=rotation + f_idx)
        block[comp] = {"effect": values[e], "confidence": float(confidences[comp])}
    leak_values = spread_effects(leak_pct, rotation=rotation + len(effects))
    block["Leak"] = {"effect": leak_values[e], "confidence": float(confidences["Leak"])}
    return block


def compile_survey(survey: dict):
    responses = [parse_response(rd) for rd in survey["experts"]]
    layout = load_layout(DATA_DIR / "layout_fi2035.json")
    return responses, assemble_network(responses, layout, CONFIDENCE_WEIGHTED)


def main() -> None:
    # Pass 1: zero aggregate leaks, realized sub-means not yet known; use
    # plain bucket means (exact for every component except large nuclear,
    # whose pinned sub-means are close enough for this pass).
    provisional = {
        comp: cfg.get("submeans", (float(np.mean(cfg["lows"])), float(np.mean(cfg["highs"]))))
        for comp, cfg in COMPONENTS.items()
    }
    survey = build_survey(0.0, 0.0, provisional)
    responses, _ = compile_survey(survey)

    # Realized weighted sub-means (after confidence rounding) drive the
    # leak back-solve so capacity values land on their targets.
    realized = {}
    for comp in COMPONENTS:
        agg = aggregate_capacity(responses, comp, CONFIDENCE_WEIGHTED)
        realized[comp] = (agg.low_submean, agg.high_submean)

    survey = build_survey(0.0, 0.0, realized)
    responses, network = compile_survey(survey)

    # Back-solve the aggregate-node leaks against the zero-leak marginals.
    zero = posterior(network, {}, ["Bulk", "Balance"])
    bulk_leak = 1.0 - (1.0 - BULK_MARGINAL) / float(zero["Bulk"][0])
    balance_leak = 1.0 - (1.0 - BALANCE_MARGINAL) / float(zero["Balance"][0])
    for name, leak in (("bulk", bulk_leak), ("balance", balance_leak)):
        if not 0.0 <= leak <= 1.0:
            raise SystemExit(f"{name} leak out of range: {leak:.4f}")

    survey = build_survey(round(bulk_leak * 100.0, 1), round(balance_leak * 100.0, 1), realized)
    OUT_PATH.write_text(json.dumps(survey, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {OUT_PATH}")

    verify(survey)


def verify(survey: dict) -> None:
    responses, network = compile_survey(survey)
    failures = []

    def check(label: str, actual: float, target: float, tol: float) -> None:
        status = "ok " if abs(actual - target) <= tol else "FAIL"
        if status == "FAIL":
            failures.append(label)
        print(f"  {status} {label}: {actual:.4f} (target {target} +/- {tol})")

    print("panel aggregates (confidence weighted / uniform):")
    for comp, cfg in COMPONENTS.items():
        weighted = aggregate_capacity(responses, comp, CONFIDENCE_WEIGHTED)
        uniform = aggregate_capacity(responses, comp, UNIFORM)
        check(f"{comp} weighted mean", weighted.mean, cfg["wmean"], 0.004)
        check(f"{comp} uniform mean", uniform.mean, cfg["mean"], 0.004)
        check(f"{comp} mean confidence", weighted.mean_confidence, cfg["conf"], 0.5)
        if "submeans" in cfg:
            check(f"{comp} low sub-mean", weighted.low_submean, cfg["submeans"][0], 0.03)
            check(f"{comp} high sub-mean", weighted.high_submean, cfg["submeans"][1], 0.03)

    print("bucket sums over weighted means:")
    weighted_means = {
        comp: aggregate_capacity(responses, comp, CONFIDENCE_WEIGHTED).mean for comp in COMPONENTS
    }
    bulk_sum = sum(weighted_means[c] for c in
                   ["LargeScaleNuclear", "SmallScaleNuclear", "Hydro", "Fossil", "Gas", "Bio"])
    balancing_sum = sum(weighted_means[c] for c in
                        ["Battery", "PumpedHydro", "DSR", "Home", "P2X_X2P"])
    check("bulk bucket", bulk_sum, 12.7, 0.02)
    check("balancing bucket", balancing_sum, 7.8, 0.03)

    print("network marginals:")
    marginals = posterior(network, {}, ["Bulk", "Balance", "GridManagement"])
    check("P(Bulk ge13)", float(marginals["Bulk"][1]), BULK_MARGINAL, 0.002)
    check("P(Balance ge5)", float(marginals["Balance"][1]), BALANCE_MARGINAL, 0.002)
    for i, target in enumerate(SCENARIO_BASELINE):
        check(f"scenario B{i + 1}", float(marginals["GridManagement"][i]), target, 0.0012)

    print("capacity values:")
    for comp, cfg in COMPONENTS.items():
        if comp not in network:
            continue
        agg = aggregate_capacity(responses, comp, CONFIDENCE_WEIGHTED)
        vector = posterior(network, {}, [comp])[comp]
        value = float(vector[0]) * agg.low_submean + float(vector[1]) * agg.high_submean
        if "p_high" in cfg:
            check(f"{comp} P(high)", float(vector[1]), cfg["p_high"], 0.003)
        else:
            check(f"{comp} value", value, cfg["value"], 0.03)

    print("factor rankings:")
    ssn = top_factors(responses, "SmallScaleNuclear", 1)[0]
    p2x = top_factors(responses, "P2X_X2P", 1)[0]
    check("SmallScaleNuclear lead mentions", ssn[1], 12, 0)
    check("P2X_X2P lead mentions", p2x[1], 11, 0)
    assert ssn[0] == "PolicyAndIncentives", ssn
    assert p2x[0] == "TechnologyDevelopment", p2x

    if failures:
        raise SystemExit(f"calibration failed: {failures}")
    print("all calibration checks passed")


if __name__ == "__main__":
    main()
