/**
 * Pure HTML/SVG string renderers.
 *
 * Everything here is a function from state to markup, so the views are
 * testable without a DOM. Numbers come straight from service responses
 * through the two display rules in format.ts; nothing is computed
 * client-side beyond layout geometry.
 */

import { QueryEnvelope, StructureDoc } from "./api.js";
import { pct, score4 } from "./format.js";

const NODE_W = 132;
const NODE_H = 34;
const GAP_X = 36;
const GAP_Y = 64;

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Longest-path layering: parents always sit above their children. */
export function layerAssignment(structure: StructureDoc): Map<string, number> {
  const parents = new Map<string, string[]>();
  for (const v of structure.variables) parents.set(v.name, []);
  for (const arc of structure.arcs) parents.get(arc.to)!.push(arc.from);
  const depth = new Map<string, number>();
  const visit = (name: string): number => {
    const known = depth.get(name);
    if (known !== undefined) return known;
    const ps = parents.get(name)!;
    const d = ps.length ? Math.max(...ps.map(visit)) + 1 : 0;
    depth.set(name, d);
    return d;
  };
  for (const v of structure.variables) visit(v.name);
  return depth;
}

/**
 * The network as an SVG: nodes in layers, arcs with arrowheads,
 * observed nodes highlighted. Layout depends only on the structure
 * document, so reloading a network reproduces it exactly.
 */
export function renderGraph(
  structure: StructureDoc,
  evidence: Record<string, string>,
): string {
  const depth = layerAssignment(structure);
  const layers = new Map<number, string[]>();
  for (const v of structure.variables) {
    const d = depth.get(v.name)!;
    if (!layers.has(d)) layers.set(d, []);
    layers.get(d)!.push(v.name);
  }
  const maxPerLayer = Math.max(...[...layers.values()].map((l) => l.length));
  const width = maxPerLayer * (NODE_W + GAP_X) + GAP_X;
  const height = layers.size * (NODE_H + GAP_Y) + GAP_Y / 2;

  const pos = new Map<string, { x: number; y: number }>();
  for (const [d, names] of [...layers.entries()].sort((a, b) => a[0] - b[0])) {
    const rowWidth = names.length * (NODE_W + GAP_X) - GAP_X;
    let x = (width - rowWidth) / 2;
    const y = GAP_Y / 2 + d * (NODE_H + GAP_Y);
    for (const name of names) {
      pos.set(name, { x, y });
      x += NODE_W + GAP_X;
    }
  }

  const parts: string[] = [];
  parts.push(
    `<svg class="graph" viewBox="0 0 ${width} ${height}" ` +
      `xmlns="http://www.w3.org/2000/svg">`,
    `<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" ` +
      `markerWidth="7" markerHeight="7" orient="auto-start-reverse">` +
      `<path d="M 0 0 L 10 5 L 0 10 z" fill="#5a6a7a"/></marker></defs>`,
  );
  for (const arc of structure.arcs) {
    const a = pos.get(arc.from)!;
    const b = pos.get(arc.to)!;
    parts.push(
      `<line x1="${a.x + NODE_W / 2}" y1="${a.y + NODE_H}" ` +
        `x2="${b.x + NODE_W / 2}" y2="${b.y}" stroke="#5a6a7a" ` +
        `stroke-width="1.4" marker-end="url(#arrow)"/>`,
    );
  }
  for (const v of structure.variables) {
    const p = pos.get(v.name)!;
    const observed = v.name in evidence;
    const cls = observed ? "node observed" : "node";
    parts.push(
      `<g class="${cls}" data-variable="${esc(v.name)}">`,
      `<rect x="${p.x}" y="${p.y}" width="${NODE_W}" height="${NODE_H}" ` +
        `rx="6" fill="${observed ? "#2e7d32" : "#38506a"}"/>`,
      `<text x="${p.x + NODE_W / 2}" y="${p.y + 21}" text-anchor="middle" ` +
        `fill="#fff" font-size="12">${esc(v.name)}</text>`,
      `</g>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

/**
 * Per-node state bars (the monitors). Unobserved variables show the
 * posterior marginal from the latest belief refresh; observed ones show
 * their selected state with an evidence badge instead of numbers.
 */
export function renderBeliefList(
  structure: StructureDoc,
  beliefs: QueryEnvelope | null,
  evidence: Record<string, string>,
): string {
  const marginals: Record<string, Record<string, number>> = beliefs
    ? beliefs.result.posterior
    : {};
  const parts: string[] = ['<div class="monitors">'];
  for (const v of structure.variables) {
    const observed = evidence[v.name];
    parts.push(
      `<div class="monitor${observed ? " observed" : ""}" ` +
        `data-variable="${esc(v.name)}">`,
      `<div class="monitor-title">${esc(v.name)}` +
        (observed ? ' <span class="badge">observed</span>' : "") +
        `</div>`,
    );
    for (const state of v.states) {
      if (observed) {
        const selected = state === observed;
        parts.push(
          `<div class="state-row${selected ? " selected" : ""}" ` +
            `data-variable="${esc(v.name)}" data-state="${esc(state)}">` +
            `<span class="state-name">${esc(state)}</span>` +
            (selected ? '<span class="mark">&#10004;</span>' : "") +
            `</div>`,
        );
      } else {
        const p = marginals[v.name]?.[state];
        const label = p === undefined ? "" : pct(p);
        parts.push(
          `<div class="state-row" data-variable="${esc(v.name)}" ` +
            `data-state="${esc(state)}">` +
            `<span class="state-name">${esc(state)}</span>` +
            `<span class="bar"><span class="fill" style="width:${label}">` +
            `</span></span>` +
            `<span class="value">${label}</span></div>`,
        );
      }
    }
    parts.push("</div>");
  }
  parts.push("</div>");
  return parts.join("");
}

export function renderBanner(message: string | null): string {
  if (!message) return "";
  return `<div class="banner error">${esc(message)}</div>`;
}

function staleNotice(stale: boolean): string {
  return stale
    ? '<div class="stale">evidence changed since this result; run again</div>'
    : "";
}

export function renderScenario(
  envelope: QueryEnvelope | null,
  stale: boolean,
  error: string | null,
): string {
  if (error) return `<div class="panel-error">${esc(error)}</div>`;
  if (!envelope) return '<div class="placeholder">not run yet</div>';
  const { assignment, score } = envelope.result;
  const rows = Object.entries(assignment as Record<string, string>)
    .map(
      ([variable, state]) =>
        `<tr><td>${esc(variable)}</td><td>${esc(state)}</td></tr>`,
    )
    .join("");
  return (
    staleNotice(stale) +
    `<div class="score">joint probability ${score4(score)}</div>` +
    `<table class="kv"><thead><tr><th>variable</th><th>state</th></tr>` +
    `</thead><tbody>${rows}</tbody></table>`
  );
}

export function renderRelevance(
  envelope: QueryEnvelope | null,
  stale: boolean,
  error: string | null,
): string {
  if (error) return `<div class="panel-error">${esc(error)}</div>`;
  if (!envelope) return '<div class="placeholder">not run yet</div>';
  const entries: { assignment: Record<string, string>; score: number | string }[] =
    envelope.result.entries;
  const rows = entries
    .map((entry, i) => {
      const label = Object.entries(entry.assignment)
        .map(([variable, state]) => `${variable}=${state}`)
        .join(", ");
      return (
        `<tr class="${i === 0 ? "top" : ""}"><td>${i + 1}</td>` +
        `<td>${esc(label)}</td><td>${score4(entry.score)}</td></tr>`
      );
    })
    .join("");
  return (
    staleNotice(stale) +
    `<table class="ranking"><thead><tr><th>#</th><th>explanation</th>` +
    `<th>score</th></tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function renderDecision(
  envelope: QueryEnvelope | null,
  stale: boolean,
  error: string | null,
): string {
  if (error) return `<div class="panel-error">${esc(error)}</div>`;
  if (!envelope) return '<div class="placeholder">not run yet</div>';
  const result = envelope.result;
  const sdp: number = result.sdp;
  const angle = 180 * sdp;
  const large = angle > 180 ? 1 : 0;
  const rad = ((180 - angle) * Math.PI) / 180;
  const endX = 100 + 80 * Math.cos(rad);
  const endY = 100 - 80 * Math.sin(rad);
  const gauge =
    `<svg class="gauge" viewBox="0 0 200 110">` +
    `<path d="M 20 100 A 80 80 0 0 1 180 100" fill="none" ` +
    `stroke="#d8dee5" stroke-width="14"/>` +
    (sdp > 0
      ? `<path d="M 20 100 A 80 80 0 ${large} 1 ${endX.toFixed(2)} ` +
        `${endY.toFixed(2)}" fill="none" stroke="#2e7d32" stroke-width="14"/>`
      : "") +
    `<text x="100" y="95" text-anchor="middle" font-size="22" ` +
    `class="gauge-value">${pct(sdp)}</text></svg>`;
  const branches: {
    assignment: Record<string, string>;
    weight: number;
    posterior: number | null;
    same_decision: boolean;
  }[] = result.branches;
  const rows = branches
    .map((b) => {
      const label =
        Object.entries(b.assignment)
          .map(([variable, state]) => `${variable}=${state}`)
          .join(", ") || "(none)";
      const posterior = b.posterior === null ? "-" : pct(b.posterior);
      return (
        `<tr><td>${esc(label)}</td><td>${pct(b.weight)}</td>` +
        `<td>${posterior}</td><td>${b.same_decision ? "yes" : "no"}</td></tr>`
      );
    })
    .join("");
  return (
    staleNotice(stale) +
    gauge +
    `<div class="baseline">baseline posterior ${pct(
      result.baseline.posterior,
    )} (threshold ${pct(result.baseline.threshold)}): ` +
    `${esc(result.baseline.decision)}</div>` +
    `<table class="branches"><thead><tr><th>branch</th><th>weight</th>` +
    `<th>posterior</th><th>same decision</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}
