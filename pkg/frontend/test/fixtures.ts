/** Canned API payloads mirroring the real service responses. */

import type {
  NetworkListing,
  PlanPayload,
  PosteriorPayload,
} from "../src/types.js";

export const LISTING: NetworkListing = {
  metadata: {
    name: "fi-grid-2035",
    policy: "confidence_linear",
    roles: { bulk: "Bulk", balance: "Balance", grid: "GridManagement" },
  },
  nodes: [
    { id: "PolicyAndIncentives", layer: "L1", states: ["False", "True"], parents: [] },
    { id: "ElectricityPricing", layer: "L1", states: ["False", "True"], parents: [] },
    {
      id: "Wind",
      layer: "L2",
      states: ["below_mean", "ge_mean"],
      parents: ["ElectricityPricing"],
      value_map: { threshold: 19.0, low_submean: 14.0, high_submean: 24.9 },
    },
    {
      id: "DSR",
      layer: "L2",
      states: ["below_mean", "ge_mean"],
      parents: ["ElectricityPricing"],
      value_map: { threshold: 4.7, low_submean: 2.8, high_submean: 6.7 },
    },
    { id: "Bulk", layer: "L3", states: ["lt13", "ge13"], parents: ["Wind"] },
    { id: "Balance", layer: "L3", states: ["lt5", "ge5"], parents: ["DSR"] },
    {
      id: "GridManagement",
      layer: "L4",
      states: ["B1", "B2", "B3", "B4"],
      parents: ["Bulk", "Balance"],
    },
  ],
};

export function posteriorPayload(
  evidence: Record<string, string>,
  scenario: [number, number, number, number],
): PosteriorPayload {
  const evidenceAware = (node: string, baseline: [number, number]): number[] => {
    const observed = evidence[node];
    if (observed === undefined) return baseline;
    const states = LISTING.nodes.find((n) => n.id === node)!.states;
    return states.map((s) => (s === observed ? 1.0 : 0.0));
  };
  return {
    evidence,
    log_evidence: 0.0,
    evidence_probability: 1.0,
    posteriors: {
      PolicyAndIncentives: {
        states: ["False", "True"],
        probabilities: evidenceAware("PolicyAndIncentives", [0.5, 0.5]),
      },
      ElectricityPricing: {
        states: ["False", "True"],
        probabilities: evidenceAware("ElectricityPricing", [0.5, 0.5]),
      },
      Wind: {
        states: ["below_mean", "ge_mean"],
        probabilities: evidenceAware("Wind", [0.322, 0.678]),
        gw: 21.4,
      },
      DSR: {
        states: ["below_mean", "ge_mean"],
        probabilities: evidenceAware("DSR", [0.339, 0.661]),
        gw: 5.4,
      },
      Bulk: {
        states: ["lt13", "ge13"],
        probabilities: evidenceAware("Bulk", [0.252, 0.748]),
      },
      Balance: {
        states: ["lt5", "ge5"],
        probabilities: evidenceAware("Balance", [0.301, 0.699]),
      },
      GridManagement: {
        states: ["B1", "B2", "B3", "B4"],
        probabilities: scenario,
      },
    },
    scenario: {
      probabilities: {
        B1: scenario[0],
        B2: scenario[1],
        B3: scenario[2],
        B4: scenario[3],
      },
      bulk_marginal: 0.748,
      balance_marginal: 0.699,
      bulk_gw: 14.1,
      balance_gw: 7.0,
    },
  };
}

export const BASELINE_SCENARIO: [number, number, number, number] = [0.409, 0.17, 0.3, 0.121];
export const HIGH_CAPACITY_SCENARIO: [number, number, number, number] = [0.532, 0.119, 0.267, 0.082];

const PLAN_COMPONENTS: Array<[string, number, number, number, number]> = [
  // component, proposed GW, joint, impact, cumulative
  ["DSR", 6.7, 0.661, 0.014, 0.423],
  ["Gas", 2.2, 0.494, 0.004, 0.427],
  ["Hydro", 3.7, 0.349, 0.013, 0.44],
  ["Battery", 1.8, 0.116, 0.009, 0.449],
  ["LargeScaleNuclear", 7.5, 0.094, 0.006, 0.456],
  ["PumpedHydro", 1.1, 0.029, 0.004, 0.459],
  ["Fossil", 1.0, 0.015, 0.002, 0.461],
  ["Bio", 3.4, 0.012, 0.002, 0.463],
  ["P2X_X2P", 1.4, 0.006, 0.002, 0.464],
  ["SmallScaleNuclear", 0.7, 0.003, 0.001, 0.465],
  ["Solar", 4.0, 0.001, 0.0, 0.465],
  ["Wind", 14.0, 0.0005, 0.0, 0.465],
];

export const PLAN: PlanPayload = {
  target: { node: "GridManagement", state: "B1" },
  weights: [1, 1, 1],
  initial_probability: 0.409,
  final_probability: 0.465,
  termination: "complete",
  steps: PLAN_COMPONENTS.map(([component, gw, joint, impact, cumulative]) => ({
    component,
    state: "ge_mean",
    proposed_gw: gw,
    impact,
    evidence_joint: joint,
    cost_per_gw: 1000,
    score: (impact * joint) / 1000,
    cumulative_probability: cumulative,
  })),
  table: [
    {
      component: null,
      state: null,
      a_priori_gw: null,
      proposed_gw: null,
      delta_gw: null,
      cost_per_gw: null,
      evidence_joint: 1.0,
      impact: null,
      cumulative_probability: 0.409,
    },
    ...PLAN_COMPONENTS.map(([component, gw, joint, impact, cumulative]) => ({
      component,
      state: "ge_mean",
      a_priori_gw: gw - 0.5,
      proposed_gw: gw,
      delta_gw: 0.5,
      cost_per_gw: 1000,
      evidence_joint: joint,
      impact,
      cumulative_probability: cumulative,
    })),
  ],
};
