import { describe, expect, it } from "vitest";

import {
  barChart,
  frequencyChart,
  heatmapView,
  reviewDialog,
  spaceView,
  structureView,
  timeScatter,
} from "../src/render.js";
import type { Candidate } from "../src/types.js";

describe("renderers show fetched numbers verbatim", () => {
  it("frequency chart carries origin and bin width from the payload", () => {
    const svg = frequencyChart({ origin: 100, bin_width: 50, counts: [2, 1, 1] });
    expect(svg).toContain('data-origin="100"');
    expect(svg).toContain('data-bin-width="50"');
  });

  it("scatter renders one circle per point with its channel and owner", () => {
    const svg = timeScatter([
      { person: 1, time: 100, channel: "email", edge: 0 },
      { person: 3, time: 400, channel: "buy", edge: 4 },
    ]);
    expect(svg.match(/<circle/g)).toHaveLength(2);
    expect(svg).toContain('data-person="1"');
    expect(svg).toContain('data-channel="buy"');
  });

  it("space view lays countries on the lexicographic grid with payload counts", () => {
    const svg = spaceView({ BB: 4, AA: 2 });
    expect(svg.indexOf('data-code="AA"')).toBeLessThan(svg.indexOf('data-code="BB"'));
    expect(svg).toContain('data-count="4"');
  });

  it("structure view marks selected, matched, and highlighted elements", () => {
    const structure = {
      persons: [1, 2, 3],
      links: [
        { a: 1, b: 2, weight: 2 },
        { a: 2, b: 3, weight: 1 },
      ],
    };
    const svg = structureView(structure, {
      graphId: "alpha",
      selected: new Set([1]),
      matched: new Set([2]),
      highlightPerson: 2,
    });
    expect(svg).toContain('class="person selected"');
    expect(svg).toContain('class="person matched"');
    // both links touch person 2, so both are highlighted
    expect(svg.match(/class="link highlight"/g)).toHaveLength(2);
    // deterministic output for snapshot-style comparison
    expect(structureView(structure, { graphId: "alpha", highlightPerson: 2 })).toBe(
      structureView(structure, { graphId: "alpha", highlightPerson: 2 }),
    );
  });

  it("bar chart encodes exact per-channel values", () => {
    const svg = barChart({ email: 2, sell: 1 });
    expect(svg).toContain('data-channel="email" data-value="2"');
    expect(svg).toContain('data-channel="sell" data-value="1"');
  });

  it("heatmap cells carry payload values", () => {
    const svg = heatmapView({ persons: [1, 2], origin: 0, bin_width: 100, cells: [[1, 0], [2, 1]] });
    expect(svg).toContain('data-person="2" data-bin="0" data-value="2"');
    expect(svg.match(/<rect/g)).toHaveLength(4);
  });

  it("empty payloads render empty states", () => {
    expect(frequencyChart({ origin: 0, bin_width: 1, counts: [] })).toContain("empty-state");
    expect(timeScatter([])).toContain("empty-state");
    expect(spaceView({})).toContain("empty-state");
    expect(heatmapView({ persons: [], origin: 0, bin_width: 1, cells: [] })).toContain(
      "empty-state",
    );
  });
});

describe("review dialog", () => {
  const candidate: Candidate = {
    frontier: 9,
    anchors: [1, 2],
    candidate: 109,
    score: { total: 0.7328, presence: 1, count: 0.5, temporal: 0.7071 },
    evidence: {
      template: { nodes: [1, 2, 9], edges: [{ source: 1, target: 9, channel: "email", time: 5, weight: 1 }] },
      target: { nodes: [101, 102, 109], edges: [{ source: 101, target: 109, channel: "email", time: 5, weight: 1 }] },
    },
  };

  it("shows both evidence snippets side by side with the score breakdown", () => {
    const html = reviewDialog(candidate, "sess-1");
    expect(html).toContain('data-frontier="9"');
    expect(html).toContain('data-candidate="109"');
    expect(html).toContain('<div class="side template">');
    expect(html).toContain('<div class="side target">');
    expect(html).toContain('data-part="total">0.7328');
    expect(html).toContain('data-part="temporal">0.7071');
    expect(html).toContain('data-action="accept"');
    expect(html).toContain('data-action="reject"');
  });
});
