// String-based SVG/HTML renderers. Every number shown comes straight from an
// API payload; these functions only arrange, never aggregate.

import { countryGrid, forceLayout } from "./layout.js";
import type {
  Candidate,
  HeatmapPayload,
  Histogram,
  ScatterPoint,
  Snippet,
  StructurePayload,
} from "./types.js";

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

export const CHANNEL_COLORS: Record<string, string> = {
  author: "#8c564b",
  buy: "#2ca02c",
  email: "#1f77b4",
  financial: "#9467bd",
  phone: "#ff7f0e",
  procurement: "#d62728",
  sell: "#17becf",
};

export function channelColor(channel: string): string {
  return CHANNEL_COLORS[channel] ?? "#7f7f7f";
}

export function emptyState(label: string): string {
  return `<div class="empty-state">${esc(label)}</div>`;
}

/** Organization panel: overall activity frequency as a line chart. */
export function frequencyChart(hist: Histogram, width = 420, height = 90): string {
  if (hist.counts.length === 0) return emptyState("no visible activity");
  const max = Math.max(...hist.counts, 1);
  const step = width / hist.counts.length;
  const points = hist.counts
    .map((c, i) => `${(i * step + step / 2).toFixed(1)},${(height - (c / max) * (height - 8)).toFixed(1)}`)
    .join(" ");
  return (
    `<svg class="frequency-chart" viewBox="0 0 ${width} ${height}" data-origin="${hist.origin}"` +
    ` data-bin-width="${hist.bin_width}">` +
    `<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points="${points}"/>` +
    `</svg>`
  );
}

/** Time view: temporal scatterplot, one circle per activity per person. */
export function timeScatter(points: ScatterPoint[], width = 420, height = 160): string {
  if (points.length === 0) return emptyState("no visible activity");
  const times = points.map((p) => p.time);
  const lo = Math.min(...times);
  const hi = Math.max(...times);
  const span = hi - lo || 1;
  const persons = [...new Set(points.map((p) => p.person))].sort((a, b) => a - b);
  const rowOf = new Map(persons.map((p, i) => [p, i] as const));
  const rowH = height / Math.max(persons.length, 1);
  const circles = points
    .map((p) => {
      const x = 10 + ((p.time - lo) / span) * (width - 20);
      const y = (rowOf.get(p.person)! + 0.5) * rowH;
      return (
        `<circle class="activity" r="3" cx="${x.toFixed(1)}" cy="${y.toFixed(1)}"` +
        ` fill="${channelColor(p.channel)}" data-person="${p.person}"` +
        ` data-edge="${p.edge}" data-channel="${esc(p.channel)}"/>`
      );
    })
    .join("");
  const labels = persons
    .map((p, i) => `<text x="2" y="${((i + 0.5) * rowH + 3).toFixed(1)}" font-size="8">${p}</text>`)
    .join("");
  return `<svg class="time-view" viewBox="0 0 ${width} ${height}">${labels}${circles}</svg>`;
}

/** Space view: relative country locations on a deterministic grid. */
export function spaceView(countries: Record<string, number>, cell = 56): string {
  const codes = Object.keys(countries);
  if (codes.length === 0) return emptyState("no located activity");
  const grid = countryGrid(codes);
  const max = Math.max(...Object.values(countries), 1);
  const rows = Math.max(...grid.map((g) => g.row)) + 1;
  const cols = Math.min(codes.length, 6);
  const cells = grid
    .map((g) => {
      const count = countries[g.code];
      const alpha = 0.15 + 0.85 * (count / max);
      return (
        `<g class="country" data-code="${esc(g.code)}" data-count="${count}"` +
        ` transform="translate(${g.col * cell},${g.row * cell})">` +
        `<rect width="${cell - 4}" height="${cell - 4}" rx="4" fill="rgba(31,119,180,${alpha.toFixed(3)})"/>` +
        `<text x="6" y="16" font-size="11">${esc(g.code)}</text>` +
        `<text x="6" y="${cell - 14}" font-size="13" font-weight="bold">${count}</text>` +
        `</g>`
      );
    })
    .join("");
  return `<svg class="space-view" viewBox="0 0 ${cols * cell} ${rows * cell}">${cells}</svg>`;
}

export interface StructureRenderOptions {
  graphId: string;
  selected?: Set<number>;
  matched?: Set<number>;
  highlightPerson?: number | null;
  width?: number;
  height?: number;
}

/** Structure view: force placement seeded by the graph id. */
export function structureView(structure: StructurePayload, opts: StructureRenderOptions): string {
  const width = opts.width ?? 400;
  const height = opts.height ?? 300;
  if (structure.persons.length === 0) return emptyState("no persons in view");
  const placed = forceLayout(structure.persons, structure.links, {
    graphId: opts.graphId,
    width,
    height,
  });
  const highlight = opts.highlightPerson ?? null;
  const lines = structure.links
    .map((l) => {
      const pa = placed.get(l.a)!;
      const pb = placed.get(l.b)!;
      const hot = highlight !== null && (l.a === highlight || l.b === highlight);
      return (
        `<line class="link${hot ? " highlight" : ""}" data-a="${l.a}" data-b="${l.b}"` +
        ` data-weight="${l.weight}" x1="${pa.x.toFixed(1)}" y1="${pa.y.toFixed(1)}"` +
        ` x2="${pb.x.toFixed(1)}" y2="${pb.y.toFixed(1)}"` +
        ` stroke="${hot ? "#d62728" : "#bbb"}" stroke-width="${Math.min(1 + l.weight / 2, 5).toFixed(1)}"/>`
      );
    })
    .join("");
  const circles = structure.persons
    .map((p) => {
      const pt = placed.get(p)!;
      const classes = ["person"];
      if (opts.selected?.has(p)) classes.push("selected");
      if (opts.matched?.has(p)) classes.push("matched");
      return (
        `<circle class="${classes.join(" ")}" data-person="${p}" r="7"` +
        ` cx="${pt.x.toFixed(1)}" cy="${pt.y.toFixed(1)}"` +
        ` fill="${opts.matched?.has(p) ? "#2ca02c" : "#1f77b4"}"` +
        ` stroke="${opts.selected?.has(p) ? "#d62728" : "#fff"}" stroke-width="2"/>`
      );
    })
    .join("");
  return `<svg class="structure-view" viewBox="0 0 ${width} ${height}">${lines}${circles}</svg>`;
}

/** Personnel tab: per-channel activity counts. */
export function barChart(channels: Record<string, number>, width = 220): string {
  const entries = Object.entries(channels).sort();
  if (entries.length === 0) return emptyState("no visible activity");
  const max = Math.max(...entries.map(([, v]) => v), 1);
  const rows = entries
    .map(([channel, value], i) => {
      const w = (value / max) * (width - 90);
      return (
        `<g transform="translate(0,${i * 20})">` +
        `<text x="0" y="13" font-size="11">${esc(channel)}</text>` +
        `<rect class="bar" data-channel="${esc(channel)}" data-value="${value}"` +
        ` x="74" y="3" width="${w.toFixed(1)}" height="13" fill="${channelColor(channel)}"/>` +
        `<text x="${(78 + w).toFixed(1)}" y="13" font-size="11">${value}</text>` +
        `</g>`
      );
    })
    .join("");
  return `<svg class="person-bars" viewBox="0 0 ${width} ${entries.length * 20}">${rows}</svg>`;
}

/** Personnel panel: activity-frequency heatmap over the selected persons. */
export function heatmapView(payload: HeatmapPayload, cell = 16): string {
  const { persons, cells } = payload;
  if (persons.length === 0) return emptyState("select persons to compare");
  const bins = cells[0]?.length ?? 0;
  if (bins === 0) return emptyState("no activity on this channel");
  const flat = cells.flat();
  const max = Math.max(...flat, 1);
  const rects = persons
    .map((person, r) =>
      cells[r]
        .map((value, c) => {
          const alpha = value === 0 ? 0.04 : 0.15 + 0.85 * (value / max);
          return (
            `<rect class="cell" data-person="${person}" data-bin="${c}" data-value="${value}"` +
            ` x="${40 + c * cell}" y="${r * cell}" width="${cell - 1}" height="${cell - 1}"` +
            ` fill="rgba(214,39,40,${alpha.toFixed(3)})"/>`
          );
        })
        .join(""),
    )
    .join("");
  const labels = persons
    .map((p, r) => `<text x="0" y="${r * cell + 12}" font-size="10">${p}</text>`)
    .join("");
  return (
    `<svg class="heatmap" viewBox="0 0 ${40 + bins * cell} ${persons.length * cell}"` +
    ` data-origin="${payload.origin}" data-bin-width="${payload.bin_width}">` +
    labels + rects + `</svg>`
  );
}

function snippetSvg(snippet: Snippet, graphId: string, extraNode: number): string {
  const links = new Map<string, number>();
  for (const e of snippet.edges) {
    const key = e.source < e.target ? `${e.source}-${e.target}` : `${e.target}-${e.source}`;
    links.set(key, (links.get(key) ?? 0) + 1);
  }
  const structure: StructurePayload = {
    persons: snippet.nodes,
    links: [...links.entries()].map(([key, weight]) => {
      const [a, b] = key.split("-").map(Number);
      return { a, b, weight };
    }),
  };
  return structureView(structure, {
    graphId: `snippet:${graphId}`,
    selected: new Set([extraNode]),
    width: 260,
    height: 200,
  });
}

/** Step-review dialog body: both evidence snippets plus the score breakdown. */
export function reviewDialog(candidate: Candidate, sessionId: string): string {
  const s = candidate.score;
  const breakdown =
    `<table class="score-breakdown">` +
    `<tr><th>total</th><td data-part="total">${s.total.toFixed(4)}</td></tr>` +
    `<tr><th>presence</th><td data-part="presence">${s.presence.toFixed(4)}</td></tr>` +
    `<tr><th>count</th><td data-part="count">${s.count.toFixed(4)}</td></tr>` +
    `<tr><th>temporal</th><td data-part="temporal">${s.temporal.toFixed(4)}</td></tr>` +
    `</table>`;
  const templateSide = candidate.evidence.template
    ? snippetSvg(candidate.evidence.template, `${sessionId}:template`, candidate.frontier)
    : emptyState("no template evidence");
  const targetSide = candidate.evidence.target
    ? snippetSvg(candidate.evidence.target, `${sessionId}:target`, candidate.candidate)
    : emptyState("no target evidence");
  return (
    `<div class="review-pair" data-frontier="${candidate.frontier}" data-candidate="${candidate.candidate}">` +
    `<h3>match ${candidate.frontier} &rarr; ${candidate.candidate}?</h3>` +
    `<div class="evidence"><div class="side template">${templateSide}</div>` +
    `<div class="side target">${targetSide}</div></div>` +
    breakdown +
    `<div class="actions"><button data-action="accept">Accept</button>` +
    `<button data-action="reject">Reject</button></div>` +
    `</div>`
  );
}
