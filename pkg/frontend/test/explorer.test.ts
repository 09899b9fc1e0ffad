import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { renderPlanPanel, renderPosteriors } from "../src/render.js";
import { SessionState } from "../src/state.js";
import type { PosteriorPayload } from "../src/types.js";
import { PLAN, posteriorPayload } from "./fixtures.js";
import {
  FakeApi,
  evidenceKey,
  flush,
  jsonResponse,
  mountDom,
  mountExplorer,
  stateValueText,
} from "./harness.js";

beforeEach(() => {
  document.body.innerHTML = "";
});

describe("network panel", () => {
  it("groups nodes into four layer columns", async () => {
    const { root } = await mountExplorer();
    const layers = [...root.querySelectorAll<HTMLElement>(".layer")].map(
      (el) => el.dataset.layer,
    );
    expect(layers).toEqual(["L1", "L2", "L3", "L4"]);
  });

  it("shows four bars on the grid scenario node and a GW badge on mapped nodes", async () => {
    const { root } = await mountExplorer();
    const grid = root.querySelector('.node[data-node="GridManagement"]')!;
    expect(grid.querySelectorAll(".state-row")).toHaveLength(4);
    expect(root.querySelector('.node[data-node="Wind"] [data-role="gw"]')).not.toBeNull();
    expect(stateValueText(root, "Wind", "ge_mean")).toBe("67.8%");
  });

  it("hides divorce aggregator nodes", async () => {
    const api = new FakeApi();
    const { root } = await mountExplorer(api);
    expect(root.querySelector('[data-node*="__ici_"]')).toBeNull();
  });

  it("shows an error banner and no data when the API is unreachable", async () => {
    const api = new FakeApi();
    api.failNetwork = true;
    const { root } = await mountExplorer(api);
    const banner = root.querySelector<HTMLElement>("#banner")!;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("cannot reach");
    expect(root.querySelectorAll(".node")).toHaveLength(0);
  });
});

describe("evidence toggling", () => {
  it("sends the full evidence set and repaints from the response", async () => {
    const { root, session, api } = await mountExplorer();
    await session.toggleEvidence("Bulk", "ge13");
    await session.toggleEvidence("Balance", "ge5");
    await flush();

    const last = api.posteriorRequests().at(-1)!;
    expect(last.body).toEqual({ evidence: { Bulk: "ge13", Balance: "ge5" } });
    expect(stateValueText(root, "GridManagement", "B1")).toBe("53.2%");
    const bulkRow = root.querySelector('.state-row[data-node="Bulk"][data-state="ge13"]')!;
    expect(bulkRow.classList.contains("evidence")).toBe(true);
  });

  it("clearing evidence restores the baseline display", async () => {
    const { root, session } = await mountExplorer();
    await session.toggleEvidence("Bulk", "ge13");
    await session.toggleEvidence("Balance", "ge5");
    await flush();
    expect(stateValueText(root, "GridManagement", "B1")).toBe("53.2%");

    await session.clearEvidence();
    await flush();
    expect(stateValueText(root, "GridManagement", "B1")).toBe("40.9%");
    expect(root.querySelectorAll(".state-row.evidence")).toHaveLength(0);
  });

  it("repeating the same toggles yields an identical display", async () => {
    const { root, session } = await mountExplorer();
    await session.toggleEvidence("Bulk", "ge13");
    await flush();
    const first = root.querySelector("#network-panel")!.innerHTML;
    await session.toggleEvidence("Bulk", "ge13"); // off
    await session.toggleEvidence("Bulk", "ge13"); // on again
    await flush();
    expect(root.querySelector("#network-panel")!.innerHTML).toBe(first);
  });

  it("keeps the previous display and names the conflict on impossible evidence", async () => {
    const api = new FakeApi();
    api.impossibleFor.add(evidenceKey({ Bulk: "lt13", Wind: "ge_mean" }));
    const { root, session } = await mountExplorer(api);
    await session.toggleEvidence("Bulk", "lt13");
    await flush();
    const before = stateValueText(root, "GridManagement", "B1");

    await session.toggleEvidence("Wind", "ge_mean");
    await flush();
    const banner = root.querySelector<HTMLElement>("#banner")!;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("impossible evidence");
    expect(stateValueText(root, "GridManagement", "B1")).toBe(before);
    expect(session.evidenceObject()).toEqual({ Bulk: "lt13" });
  });

  it("discards stale responses so the latest evidence wins", async () => {
    const root = mountDom();
    const resolvers: Array<(r: Response) => void> = [];
    const bodies: Array<Record<string, string>> = [];
    const client = new ApiClient("http://api.test", (url, init) => {
      if (url.endsWith("/api/posteriors")) {
        const body = JSON.parse(String(init?.body)) as { evidence: Record<string, string> };
        bodies.push(body.evidence);
        return new Promise<Response>((resolve) => resolvers.push(resolve));
      }
      throw new Error(`unexpected request ${url}`);
    });
    const displayed: PosteriorPayload[] = [];
    const session = new SessionState(
      client,
      {
        onPosteriors: (p) => displayed.push(p),
        onPlan: () => {},
        onError: () => {},
        onClearError: () => {},
      },
      0,
    );

    const first = session.refresh();
    session.evidence.set("Bulk", "ge13");
    const second = session.refresh();
    expect(resolvers).toHaveLength(2);
    // resolve out of order: the newer response lands first
    resolvers[1](jsonResponse(posteriorPayload(bodies[1], [0.532, 0.119, 0.267, 0.082])));
    await second;
    resolvers[0](jsonResponse(posteriorPayload(bodies[0], [0.409, 0.17, 0.3, 0.121])));
    await first;

    expect(displayed).toHaveLength(1);
    expect(displayed[0].evidence).toEqual({ Bulk: "ge13" });
  });
});

describe("optimization panel", () => {
  it("renders the plan with a non-decreasing cumulative column", async () => {
    const { root, session } = await mountExplorer();
    await session.runOptimization({ node: "GridManagement", state: "B1" }, [1, 1, 1]);
    const rows = [...root.querySelectorAll<HTMLElement>("#plan-panel tr")].slice(1);
    expect(rows).toHaveLength(13); // start + 12 steps
    const cumulative = rows.map((tr) =>
      parseFloat(tr.lastElementChild!.textContent!.replace("%", "")),
    );
    for (let i = 1; i < cumulative.length; i += 1) {
      expect(cumulative[i]).toBeGreaterThanOrEqual(cumulative[i - 1]);
    }
    expect(cumulative[0]).toBe(40.9);
    expect(cumulative.at(-1)).toBe(46.5);
  });

  it("clicking a step previews the evidence of steps one through k", async () => {
    const { root, session, api } = await mountExplorer();
    await session.runOptimization({ node: "GridManagement", state: "B1" }, [1, 1, 1]);
    const stepRows = root.querySelectorAll<HTMLElement>("#plan-panel tr.plan-step");
    stepRows[2].click(); // third step
    await flush();
    const last = api.posteriorRequests().at(-1)!;
    expect(last.body).toEqual({
      evidence: { DSR: "ge_mean", Gas: "ge_mean", Hydro: "ge_mean" },
    });
  });

  it("rejects non-positive weights inline without sending a request", async () => {
    const { root, api } = await mountExplorer();
    root.querySelector<HTMLInputElement>("#w2")!.value = "0";
    const before = api.requests.length;
    root.querySelector<HTMLButtonElement>("#run-optimization")!.click();
    await flush();
    expect(api.requests.length).toBe(before);
    const message = root.querySelector<HTMLElement>("#weights-error")!;
    expect(message.hidden).toBe(false);
    expect(message.textContent).toContain("positive");
  });
});

describe("no client-side probability math", () => {
  it("renders exactly the numbers the API returned, only reformatted", () => {
    const root = mountDom();
    document.getElementById("network-panel")!.innerHTML = `
      <div class="node" data-node="GridManagement">
        <div class="state-row" data-node="GridManagement" data-state="B1">
          <span class="bar-track"><span class="bar-fill"></span></span>
          <span class="state-value"></span>
        </div>
      </div>`;
    const odd = posteriorPayload({}, [0.4321, 0.1, 0.2, 0.2679]);
    renderPosteriors(root, odd);
    // 0.4321 can only appear on screen if it came from the payload
    expect(stateValueText(root, "GridManagement", "B1")).toBe("43.2%");

    renderPlanPanel(root, PLAN, () => {});
    const text = root.querySelector("#plan-panel")!.textContent!;
    for (const step of PLAN.steps.slice(0, 3)) {
      expect(text).toContain(`${(step.cumulative_probability * 100).toFixed(1)}%`);
    }
  });
});
