/** Session state and request sequencing.
 *
 * The server is stateless, so the full evidence set travels on every
 * request. Rapid toggles are debounced and every request carries a
 * sequence number; a response older than the newest issued request is
 * discarded, so the latest evidence always wins.
 */

import { ApiClient, ApiRequestError } from "./api.js";
import type { PlanPayload, PosteriorPayload } from "./types.js";

export interface SessionEvents {
  onPosteriors(payload: PosteriorPayload): void;
  onPlan(plan: PlanPayload | null): void;
  onError(message: string): void;
  onClearError(): void;
}

export class SessionState {
  readonly evidence = new Map<string, string>();
  lastPosteriors: PosteriorPayload | null = null;
  lastPlan: PlanPayload | null = null;
  selectedTarget: { node: string; state: string } | null = null;

  private sequence = 0;
  private applied = 0;
  private debounceHandle: ReturnType<typeof setTimeout> | null = null;
  private pending: Promise<void> = Promise.resolve();

  constructor(
    private readonly api: ApiClient,
    private readonly events: SessionEvents,
    private readonly debounceMs = 150,
  ) {}

  /** Set, change, or (when `state` repeats the current value) clear one
   * node's evidence, then refresh posteriors with the full set. */
  toggleEvidence(nodeId: string, state: string): Promise<void> {
    if (this.evidence.get(nodeId) === state) {
      this.evidence.delete(nodeId);
    } else {
      this.evidence.set(nodeId, state);
    }
    return this.scheduleRefresh();
  }

  clearEvidence(): Promise<void> {
    this.evidence.clear();
    return this.scheduleRefresh();
  }

  /** Replace the whole evidence set (plan-step preview). */
  previewEvidence(evidence: Record<string, string>): Promise<void> {
    this.evidence.clear();
    for (const [node, state] of Object.entries(evidence)) {
      this.evidence.set(node, state);
    }
    return this.scheduleRefresh();
  }

  evidenceObject(): Record<string, string> {
    return Object.fromEntries(this.evidence);
  }

  private scheduleRefresh(): Promise<void> {
    if (this.debounceHandle !== null) clearTimeout(this.debounceHandle);
    this.pending = new Promise((resolve) => {
      this.debounceHandle = setTimeout(() => {
        this.debounceHandle = null;
        void this.refresh().then(resolve);
      }, this.debounceMs);
    });
    return this.pending;
  }

  /** Issue the posterior request for the current evidence immediately. */
  async refresh(): Promise<void> {
    const seq = ++this.sequence;
    const sent = this.evidenceObject();
    try {
      const payload = await this.api.posteriors(sent);
      if (seq < this.sequence || seq <= this.applied) return; // stale response
      this.applied = seq;
      this.lastPosteriors = payload;
      this.events.onClearError();
      this.events.onPosteriors(payload);
    } catch (error) {
      if (seq < this.sequence) return; // superseded anyway
      if (error instanceof ApiRequestError && error.code === "impossible_evidence") {
        // keep the previous display; roll the evidence back to what the
        // last accepted response carried
        this.evidence.clear();
        const accepted = this.lastPosteriors?.evidence ?? {};
        for (const [node, state] of Object.entries(accepted)) {
          this.evidence.set(node, state);
        }
        this.events.onError(`impossible evidence combination: ${error.message}`);
        return;
      }
      const message = error instanceof Error ? error.message : String(error);
      this.events.onError(message);
    }
  }

  /** Launch an optimization run; weight validation happens in the panel
   * before this is called. */
  async runOptimization(
    target: { node: string; state: string },
    weights: [number, number, number],
  ): Promise<void> {
    this.selectedTarget = target;
    try {
      const plan = await this.api.optimize(target, weights);
      this.lastPlan = plan;
      this.events.onClearError();
      this.events.onPlan(plan);
    } catch (error) {
      const message = error instanceof Error ? error.message : String(error);
      this.events.onError(message);
    }
  }
}
