/**
 * DOM bootstrap: wires the session, renderers and service client to the
 * page. All logic lives in state.ts / render.ts; this file only moves
 * strings into elements and events into state transitions.
 */

import { ApiClient } from "./api.js";
import {
  DecisionParams,
  PanelKind,
  SessionState,
  clearEvidence,
  loadNetwork,
  runPanel,
  toggleEvidence,
} from "./state.js";
import {
  renderBanner,
  renderBeliefList,
  renderDecision,
  renderGraph,
  renderRelevance,
  renderScenario,
} from "./render.js";

const api = new ApiClient("");
const session = new SessionState();

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function redraw(): void {
  el("banner").innerHTML = renderBanner(session.banner);
  if (!session.structure) return;
  const evidence = session.evidenceObject();
  el("graph").innerHTML = renderGraph(session.structure, evidence);
  el("monitors").innerHTML = renderBeliefList(
    session.structure,
    session.beliefs,
    evidence,
  );
  const p = session.panels;
  el("panel-scenario").innerHTML = renderScenario(
    p.scenario.envelope, p.scenario.stale, p.scenario.error,
  );
  el("panel-relevance").innerHTML = renderRelevance(
    p.relevance.envelope, p.relevance.stale, p.relevance.error,
  );
  el("panel-decision").innerHTML = renderDecision(
    p.decision.envelope, p.decision.stale, p.decision.error,
  );
  populateDecisionControls();
}

function populateDecisionControls(): void {
  if (!session.structure) return;
  const select = el("decision-hypothesis") as HTMLSelectElement;
  if (select.options.length > 0) return; // fill once per network
  for (const v of session.structure.variables) {
    for (const state of v.states) {
      const option = document.createElement("option");
      option.value = `${v.name}=${state}`;
      option.textContent = `${v.name} = ${state}`;
      select.appendChild(option);
    }
  }
}

function decisionParams(): DecisionParams {
  const raw = (el("decision-hypothesis") as HTMLSelectElement).value;
  const [variable, state] = raw.split("=");
  const threshold = parseFloat(
    (el("decision-threshold") as HTMLInputElement).value,
  );
  const hiddenRaw = (el("decision-hidden") as HTMLInputElement).value.trim();
  const hidden = hiddenRaw ? hiddenRaw.split(",").map((s) => s.trim()) : [];
  return { hypothesis: [variable, state], threshold, hidden };
}

async function onMonitorClick(event: Event): Promise<void> {
  const target = event.target as HTMLElement;
  const row = target.closest(".state-row") as HTMLElement | null;
  if (!row) return;
  const variable = row.dataset.variable!;
  const state = row.dataset.state!;
  await toggleEvidence(api, session, variable, state);
  redraw();
}

function bindPanel(kind: PanelKind, buttonId: string): void {
  el(buttonId).addEventListener("click", async () => {
    const params = kind === "decision" ? decisionParams() : undefined;
    await runPanel(api, session, kind, params);
    redraw();
  });
}

export async function start(): Promise<void> {
  el("monitors").addEventListener("click", onMonitorClick);
  el("clear-evidence").addEventListener("click", async () => {
    await clearEvidence(api, session);
    redraw();
  });
  bindPanel("scenario", "run-scenario");
  bindPanel("relevance", "run-relevance");
  bindPanel("decision", "run-decision");
  el("network-select").addEventListener("change", async (event) => {
    const id = (event.target as HTMLSelectElement).value;
    await loadNetwork(api, session, id);
    redraw();
  });

  const networks = await api.listNetworks();
  const select = el("network-select") as HTMLSelectElement;
  for (const summary of networks) {
    const option = document.createElement("option");
    option.value = summary.id;
    option.textContent = `${summary.name} (${summary.id})`;
    select.appendChild(option);
  }
  const first = networks.find((n) => n.id === "builtin:asia") ?? networks[0];
  if (first) {
    select.value = first.id;
    await loadNetwork(api, session, first.id);
  }
  redraw();
}

start().catch((err) => {
  const banner = document.getElementById("banner");
  if (banner) banner.textContent = String(err);
});
