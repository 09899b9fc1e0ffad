/** Payload shapes of the scenario-analysis HTTP API. */

export interface ValueMapInfo {
  threshold: number;
  low_submean: number;
  high_submean: number;
}

export interface NodeListing {
  id: string;
  layer: "L1" | "L2" | "L3" | "L4";
  states: string[];
  parents: string[];
  value_map?: ValueMapInfo;
}

export interface NetworkListing {
  metadata: { name?: string | null; policy?: string | null; roles?: Record<string, string> };
  nodes: NodeListing[];
}

export interface NodePosterior {
  states: string[];
  probabilities: number[];
  gw?: number;
}

export interface ScenarioInfo {
  probabilities: Record<string, number>;
  bulk_marginal: number;
  balance_marginal: number;
  bulk_gw: number | null;
  balance_gw: number | null;
}

export interface PosteriorPayload {
  evidence: Record<string, string>;
  log_evidence: number;
  evidence_probability: number;
  posteriors: Record<string, NodePosterior>;
  scenario?: ScenarioInfo;
}

export interface PlanStep {
  component: string;
  state: string;
  proposed_gw: number;
  impact: number;
  evidence_joint: number;
  cost_per_gw: number;
  score: number;
  cumulative_probability: number;
}

export interface PlanTableRow {
  component: string | null;
  state: string | null;
  a_priori_gw: number | null;
  proposed_gw: number | null;
  delta_gw: number | null;
  cost_per_gw: number | null;
  evidence_joint: number;
  impact: number | null;
  cumulative_probability: number;
}

export interface PlanPayload {
  target: { node: string; state: string };
  weights: number[];
  initial_probability: number;
  final_probability: number;
  termination: string;
  steps: PlanStep[];
  table: PlanTableRow[];
}

export interface ApiError {
  error: { code: string; message: string };
}
