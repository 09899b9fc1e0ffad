/** Explorer bootstrap: load the model listing, wire the panels, fetch the
 * baseline posteriors. The API base URL comes from `?api=...` or a
 * `window.GRIDBN_API` global, defaulting to same-origin. */

import { ApiClient } from "./api.js";
import {
  readWeights,
  renderErrorBanner,
  renderNetworkPanel,
  renderPlanPanel,
  renderPosteriors,
} from "./render.js";
import { SessionState } from "./state.js";

declare global {
  interface Window {
    GRIDBN_API?: string;
  }
}

function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  return fromQuery ?? window.GRIDBN_API ?? "";
}

export async function bootstrap(
  root: HTMLElement,
  api: ApiClient,
  debounceMs = 150,
): Promise<SessionState> {
  const session = new SessionState(
    api,
    {
      onPosteriors: (payload) => renderPosteriors(root, payload),
      onPlan: (plan) =>
        renderPlanPanel(root, plan, (evidence) => void session.previewEvidence(evidence)),
      onError: (message) => renderErrorBanner(root, message),
      onClearError: () => renderErrorBanner(root, null),
    },
    debounceMs,
  );

  let listing;
  try {
    listing = await api.network();
  } catch (error) {
    renderErrorBanner(
      root,
      `cannot reach the scenario API: ${error instanceof Error ? error.message : error}`,
    );
    return session;
  }

  renderNetworkPanel(root, listing, (nodeId, state) => {
    void session.toggleEvidence(nodeId, state);
  });

  const grid = listing.nodes.find((n) => n.id === listing.metadata.roles?.grid);
  const targetSelect = root.querySelector<HTMLSelectElement>("#target-state");
  if (grid && targetSelect) {
    targetSelect.textContent = "";
    for (const state of grid.states) {
      const option = document.createElement("option");
      option.value = state;
      option.textContent = `${grid.id}=${state}`;
      targetSelect.appendChild(option);
    }
  }

  root.querySelector<HTMLButtonElement>("#clear-evidence")?.addEventListener("click", () => {
    void session.clearEvidence();
  });

  root.querySelector<HTMLButtonElement>("#run-optimization")?.addEventListener("click", () => {
    const weights = readWeights(root);
    if (weights === null || !grid || !targetSelect) return; // invalid input: no request
    void session.runOptimization({ node: grid.id, state: targetSelect.value }, weights);
  });

  await session.refresh();
  return session;
}

if (typeof document !== "undefined" && document.getElementById("network-panel")) {
  void bootstrap(document.body, new ApiClient(apiBase()));
}
