// Deterministic layout helpers. The structure view uses a force simulation
// seeded from the graph id so snapshots are stable; the space view is a fixed
// grid ordered lexicographically by country code.

import type { StructureLink } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

/** Small fast PRNG; same seed, same sequence, everywhere. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function seedFromString(text: string): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return h >>> 0;
}

export interface ForceOptions {
  graphId: string;
  width?: number;
  height?: number;
  iterations?: number;
}

/**
 * Plain force-directed placement: pairwise repulsion, spring attraction along
 * weighted links, centering pull. Positions depend only on the inputs and the
 * graph id used to seed the initial scatter.
 */
export function forceLayout(
  nodes: number[],
  links: StructureLink[],
  opts: ForceOptions,
): Map<number, Point> {
  const width = opts.width ?? 400;
  const height = opts.height ?? 300;
  const iterations = opts.iterations ?? 120;
  const rand = mulberry32(seedFromString(opts.graphId));

  const index = new Map<number, number>();
  nodes.forEach((n, i) => index.set(n, i));
  const xs = nodes.map(() => (rand() - 0.5) * width * 0.8);
  const ys = nodes.map(() => (rand() - 0.5) * height * 0.8);
  const n = nodes.length;
  if (n === 0) return new Map();

  const springLength = Math.min(width, height) / Math.max(2, Math.sqrt(n));
  const repulsion = springLength * springLength;

  for (let step = 0; step < iterations; step++) {
    const cool = 1 - step / iterations;
    const fx = new Array(n).fill(0);
    const fy = new Array(n).fill(0);
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        let dx = xs[i] - xs[j];
        let dy = ys[i] - ys[j];
        let d2 = dx * dx + dy * dy;
        if (d2 < 1e-6) {
          dx = 0.01 * (i - j);
          dy = 0.01;
          d2 = dx * dx + dy * dy;
        }
        const f = repulsion / d2;
        fx[i] += dx * f;
        fy[i] += dy * f;
        fx[j] -= dx * f;
        fy[j] -= dy * f;
      }
    }
    for (const link of links) {
      const i = index.get(link.a);
      const j = index.get(link.b);
      if (i === undefined || j === undefined) continue;
      const dx = xs[j] - xs[i];
      const dy = ys[j] - ys[i];
      const d = Math.sqrt(dx * dx + dy * dy) || 1;
      const pull = ((d - springLength) / d) * 0.05 * Math.min(link.weight, 8);
      fx[i] += dx * pull;
      fy[i] += dy * pull;
      fx[j] -= dx * pull;
      fy[j] -= dy * pull;
    }
    for (let i = 0; i < n; i++) {
      xs[i] += Math.max(-10, Math.min(10, fx[i])) * cool;
      ys[i] += Math.max(-10, Math.min(10, fy[i])) * cool;
      xs[i] -= xs[i] * 0.01;
      ys[i] -= ys[i] * 0.01;
    }
  }

  const out = new Map<number, Point>();
  nodes.forEach((node, i) => {
    out.set(node, { x: xs[i] + width / 2, y: ys[i] + height / 2 });
  });
  return out;
}

export interface GridCell {
  code: string;
  row: number;
  col: number;
}

/** Relative country placement: lexicographic order on a fixed grid. */
export function countryGrid(codes: string[], columns = 6): GridCell[] {
  const sorted = [...codes].sort();
  return sorted.map((code, i) => ({
    code,
    row: Math.floor(i / columns),
    col: i % columns,
  }));
}
