/**
 * Session state and orchestration: one loaded network, the current
 * evidence selections, and the four panels.
 *
 * Belief bars refresh automatically on every evidence change (one query
 * round-trip). The other panels are pull-based: they run on demand and
 * carry a stale flag from the moment the evidence moves on from the
 * state they were computed under. Every service response that feeds the
 * UI is kept on the state object so tests can compare rendered numbers
 * against the intercepted wire payloads.
 */

import { ApiClient, ApiError, QueryEnvelope, StructureDoc } from "./api.js";

export type PanelKind = "scenario" | "relevance" | "decision";

export interface PanelView {
  kind: PanelKind;
  envelope: QueryEnvelope | null;
  stale: boolean;
  error: string | null;
  running: boolean;
}

export interface DecisionParams {
  hypothesis: [string, string];
  threshold: number;
  hidden: string[];
}

function freshPanel(kind: PanelKind): PanelView {
  return { kind, envelope: null, stale: false, error: null, running: false };
}

export class SessionState {
  structure: StructureDoc | null = null;
  evidence = new Map<string, string>();
  pinned: string[] = [];
  beliefs: QueryEnvelope | null = null;
  banner: string | null = null;
  panels: Record<PanelKind, PanelView> = {
    scenario: freshPanel("scenario"),
    relevance: freshPanel("relevance"),
    decision: freshPanel("decision"),
  };

  get networkId(): string | null {
    return this.structure ? this.structure.id : null;
  }

  evidenceObject(): Record<string, string> {
    return Object.fromEntries(this.evidence);
  }

  markPanelsStale(): void {
    for (const panel of Object.values(this.panels)) {
      if (panel.envelope !== null) {
        panel.stale = true;
      }
    }
  }

  /** Posterior marginals for unobserved variables, from the last refresh. */
  marginals(): Record<string, Record<string, number>> {
    if (!this.beliefs) return {};
    return this.beliefs.result.posterior;
  }
}

export async function loadNetwork(
  api: ApiClient,
  session: SessionState,
  id: string,
): Promise<void> {
  try {
    const structure = await api.getNetwork(id);
    session.structure = structure;
    session.evidence.clear();
    session.banner = null;
    session.panels = {
      scenario: freshPanel("scenario"),
      relevance: freshPanel("relevance"),
      decision: freshPanel("decision"),
    };
    await refreshBeliefs(api, session);
  } catch (err) {
    session.banner = describeError(err);
    // Leave any previously loaded network usable for retry.
  }
}

export async function refreshBeliefs(
  api: ApiClient,
  session: SessionState,
): Promise<void> {
  if (!session.structure) throw new Error("no network loaded");
  const evidence = session.evidenceObject();
  const targets = session.structure.variables
    .map((v) => v.name)
    .filter((name) => !(name in evidence));
  session.beliefs = await api.query(session.structure.id, {
    operation: "infer",
    targets,
    evidence,
  });
}

/**
 * Set, replace or clear one evidence selection and refresh the bars.
 * Passing the state the variable already has clears it (a toggle).
 * On an impossible-evidence rejection the selection is reverted and the
 * error surfaces on the banner.
 */
export async function toggleEvidence(
  api: ApiClient,
  session: SessionState,
  variable: string,
  state: string | null,
): Promise<void> {
  if (!session.structure) throw new Error("no network loaded");
  const previous = session.evidence.get(variable);
  if (state === null || previous === state) {
    session.evidence.delete(variable);
  } else {
    session.evidence.set(variable, state);
  }
  try {
    await refreshBeliefs(api, session);
    session.banner = null;
    session.markPanelsStale();
  } catch (err) {
    if (previous === undefined) {
      session.evidence.delete(variable);
    } else {
      session.evidence.set(variable, previous);
    }
    session.banner = describeError(err);
  }
}

export async function clearEvidence(
  api: ApiClient,
  session: SessionState,
): Promise<void> {
  session.evidence.clear();
  await refreshBeliefs(api, session);
  session.banner = null;
  session.markPanelsStale();
}

export async function runPanel(
  api: ApiClient,
  session: SessionState,
  kind: PanelKind,
  decision?: DecisionParams,
): Promise<void> {
  if (!session.structure) throw new Error("no network loaded");
  const panel = session.panels[kind];
  if (panel.running) return; // one in-flight request per panel
  panel.running = true;
  panel.error = null;
  const evidence = session.evidenceObject();
  try {
    if (kind === "scenario") {
      panel.envelope = await api.query(session.structure.id, {
        operation: "mpe",
        evidence,
      });
    } else if (kind === "relevance") {
      panel.envelope = await api.query(session.structure.id, {
        operation: "mre",
        targets: "ALL",
        evidence,
        k: 10,
      });
    } else {
      if (!decision) throw new Error("decision panel needs parameters");
      panel.envelope = await api.query(session.structure.id, {
        operation: "sdp",
        hypothesis: decision.hypothesis,
        threshold: decision.threshold,
        evidence,
        hidden: decision.hidden,
      });
    }
    panel.stale = false;
  } catch (err) {
    panel.error = describeError(err);
  } finally {
    panel.running = false;
  }
}

export function describeError(err: unknown): string {
  if (err instanceof ApiError) {
    return `${err.code}: ${err.message}`;
  }
  return err instanceof Error ? err.message : String(err);
}
