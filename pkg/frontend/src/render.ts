/** DOM rendering. Every displayed figure is copied from an API payload;
 * the only transformation applied is decimal formatting. */

import { formatGw, formatPercent } from "./format.js";
import type {
  NetworkListing,
  NodeListing,
  PlanPayload,
  PosteriorPayload,
} from "./types.js";

const LAYERS = ["L1", "L2", "L3", "L4"] as const;

const LAYER_TITLES: Record<(typeof LAYERS)[number], string> = {
  L1: "External factors",
  L2: "Capacity mix",
  L3: "Aggregate capacity",
  L4: "Grid scenarios",
};

function isAggregatorId(id: string): boolean {
  return id.includes("__ici_");
}

export function renderErrorBanner(root: HTMLElement, message: string | null): void {
  const banner = root.querySelector<HTMLElement>("#banner");
  if (!banner) return;
  if (message === null) {
    banner.hidden = true;
    banner.textContent = "";
  } else {
    banner.hidden = false;
    banner.textContent = message;
  }
}

function nodeCard(
  node: NodeListing,
  onToggle: (nodeId: string, state: string) => void,
): HTMLElement {
  const card = document.createElement("div");
  card.className = "node";
  card.dataset.node = node.id;

  const title = document.createElement("h3");
  title.textContent = node.id;
  card.appendChild(title);

  const gwBadge = document.createElement("span");
  gwBadge.className = "gw-badge";
  gwBadge.dataset.role = "gw";
  if (node.value_map) title.appendChild(gwBadge);

  for (const state of node.states) {
    const row = document.createElement("div");
    row.className = "state-row";
    row.dataset.node = node.id;
    row.dataset.state = state;
    row.addEventListener("click", () => onToggle(node.id, state));

    const label = document.createElement("span");
    label.className = "state-label";
    label.textContent = state;

    const track = document.createElement("span");
    track.className = "bar-track";
    const bar = document.createElement("span");
    bar.className = "bar-fill";
    track.appendChild(bar);

    const value = document.createElement("span");
    value.className = "state-value";
    value.textContent = "";

    row.append(label, track, value);
    card.appendChild(row);
  }
  return card;
}

/** Build the layered node display once; posteriors repaint it in place. */
export function renderNetworkPanel(
  root: HTMLElement,
  listing: NetworkListing,
  onToggle: (nodeId: string, state: string) => void,
): void {
  const panel = root.querySelector<HTMLElement>("#network-panel");
  if (!panel) return;
  panel.textContent = "";
  const visible = listing.nodes.filter((n) => !isAggregatorId(n.id));
  if (visible.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty";
    empty.textContent = "The loaded model contains no visible nodes.";
    panel.appendChild(empty);
    return;
  }
  for (const layer of LAYERS) {
    const nodes = visible.filter((n) => n.layer === layer);
    if (nodes.length === 0) continue;
    const column = document.createElement("section");
    column.className = "layer";
    column.dataset.layer = layer;
    const heading = document.createElement("h2");
    heading.textContent = `${layer} - ${LAYER_TITLES[layer]}`;
    column.appendChild(heading);
    for (const node of nodes) column.appendChild(nodeCard(node, onToggle));
    panel.appendChild(column);
  }
}

/** Repaint bars, values, GW badges, and evidence highlights. */
export function renderPosteriors(
  root: HTMLElement,
  payload: PosteriorPayload,
): void {
  for (const [nodeId, posterior] of Object.entries(payload.posteriors)) {
    const card = root.querySelector<HTMLElement>(`.node[data-node="${nodeId}"]`);
    if (!card) continue;
    posterior.states.forEach((state, index) => {
      const row = card.querySelector<HTMLElement>(
        `.state-row[data-state="${state}"]`,
      );
      if (!row) return;
      const probability = posterior.probabilities[index];
      const fill = row.querySelector<HTMLElement>(".bar-fill");
      if (fill) fill.style.width = `${(probability * 100).toFixed(1)}%`;
      const value = row.querySelector<HTMLElement>(".state-value");
      if (value) value.textContent = formatPercent(probability);
      row.classList.toggle("evidence", payload.evidence[nodeId] === state);
    });
    const badge = card.querySelector<HTMLElement>('[data-role="gw"]');
    if (badge) badge.textContent = posterior.gw === undefined ? "" : formatGw(posterior.gw);
  }
  const strip = root.querySelector<HTMLElement>("#evidence-strip");
  if (strip) {
    const entries = Object.entries(payload.evidence).sort();
    strip.textContent = entries.length
      ? `evidence: ${entries.map(([n, s]) => `${n}=${s}`).join(", ")}`
      : "evidence: none (baseline)";
  }
}

/** Ranked plan table with the cumulative trajectory; rows are clickable
 * so a step can preview its accumulated evidence in the network panel. */
export function renderPlanPanel(
  root: HTMLElement,
  plan: PlanPayload | null,
  onPreview: (evidence: Record<string, string>) => void,
): void {
  const panel = root.querySelector<HTMLElement>("#plan-panel");
  if (!panel) return;
  panel.textContent = "";
  if (plan === null) return;

  const summary = document.createElement("p");
  summary.className = "plan-summary";
  summary.textContent =
    `target ${plan.target.node}=${plan.target.state}: ` +
    `${formatPercent(plan.initial_probability)} → ${formatPercent(plan.final_probability)}`;
  panel.appendChild(summary);

  const table = document.createElement("table");
  table.className = "plan";
  const head = document.createElement("tr");
  for (const column of [
    "component",
    "state",
    "a priori",
    "proposed",
    "delta",
    "cost/GW",
    "joint",
    "effect",
    "target",
  ]) {
    const th = document.createElement("th");
    th.textContent = column;
    head.appendChild(th);
  }
  table.appendChild(head);

  plan.table.forEach((row, index) => {
    const tr = document.createElement("tr");
    tr.className = row.component === null ? "plan-start" : "plan-step";
    if (row.component !== null) {
      tr.dataset.step = String(index);
      tr.addEventListener("click", () => {
        const evidence: Record<string, string> = {};
        for (const step of plan.steps.slice(0, index)) {
          evidence[step.component] = step.state;
        }
        onPreview(evidence);
      });
    }
    const cells = [
      row.component ?? "(start)",
      row.state ?? "",
      row.a_priori_gw === null ? "" : formatGw(row.a_priori_gw),
      row.proposed_gw === null ? "" : formatGw(row.proposed_gw),
      row.delta_gw === null ? "" : formatGw(row.delta_gw),
      row.cost_per_gw === null ? "" : String(row.cost_per_gw),
      formatPercent(row.evidence_joint),
      row.impact === null ? "" : formatPercent(row.impact),
      formatPercent(row.cumulative_probability),
    ];
    for (const text of cells) {
      const td = document.createElement("td");
      td.textContent = text;
      tr.appendChild(td);
    }
    table.appendChild(tr);
  });
  panel.appendChild(table);

  if (plan.termination !== "complete") {
    const note = document.createElement("p");
    note.className = "plan-termination";
    note.textContent = plan.termination;
    panel.appendChild(note);
  }
}

/** Read the weight inputs; returns null (and shows the message) when any
 * weight is missing or not strictly positive. */
export function readWeights(root: HTMLElement): [number, number, number] | null {
  const values: number[] = [];
  for (const name of ["w1", "w2", "w3"]) {
    const input = root.querySelector<HTMLInputElement>(`#${name}`);
    const value = input ? Number(input.value) : NaN;
    values.push(value);
  }
  const message = root.querySelector<HTMLElement>("#weights-error");
  if (values.some((w) => !Number.isFinite(w) || w <= 0)) {
    if (message) {
      message.hidden = false;
      message.textContent = "weights must all be positive numbers";
    }
    return null;
  }
  if (message) {
    message.hidden = true;
    message.textContent = "";
  }
  return values as [number, number, number];
}
