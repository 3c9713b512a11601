import { describe, expect, it } from "vitest";

import { countryGrid, forceLayout, mulberry32, seedFromString } from "../src/layout.js";

describe("seeded randomness", () => {
  it("same seed, same sequence", () => {
    const a = mulberry32(42);
    const b = mulberry32(42);
    for (let i = 0; i < 10; i++) expect(a()).toBe(b());
  });

  it("string seeds are stable", () => {
    expect(seedFromString("template")).toBe(seedFromString("template"));
    expect(seedFromString("template")).not.toBe(seedFromString("candidate"));
  });
});

describe("force layout", () => {
  const nodes = [1, 2, 3, 7];
  const links = [
    { a: 1, b: 2, weight: 2 },
    { a: 2, b: 3, weight: 1 },
    { a: 1, b: 7, weight: 1 },
  ];

  it("is deterministic per graph id", () => {
    const p1 = forceLayout(nodes, links, { graphId: "alpha" });
    const p2 = forceLayout(nodes, links, { graphId: "alpha" });
    for (const n of nodes) {
      expect(p1.get(n)).toEqual(p2.get(n));
    }
  });

  it("differs between graph ids", () => {
    const p1 = forceLayout(nodes, links, { graphId: "alpha" });
    const p2 = forceLayout(nodes, links, { graphId: "beta" });
    const moved = nodes.some(
      (n) => p1.get(n)!.x !== p2.get(n)!.x || p1.get(n)!.y !== p2.get(n)!.y,
    );
    expect(moved).toBe(true);
  });

  it("places every node and keeps linked nodes closer than unlinked ones", () => {
    const placed = forceLayout(nodes, links, { graphId: "alpha", iterations: 200 });
    expect(placed.size).toBe(nodes.length);
    const d = (a: number, b: number) => {
      const pa = placed.get(a)!;
      const pb = placed.get(b)!;
      return Math.hypot(pa.x - pb.x, pa.y - pb.y);
    };
    expect(d(1, 2)).toBeLessThan(d(3, 7)); // linked pair vs unlinked pair
  });
});

describe("country grid", () => {
  it("orders cells lexicographically by code", () => {
    const grid = countryGrid(["ZZ", "AA", "MM"]);
    expect(grid.map((g) => g.code)).toEqual(["AA", "MM", "ZZ"]);
    expect(grid[0]).toMatchObject({ row: 0, col: 0 });
    expect(grid[2]).toMatchObject({ row: 0, col: 2 });
  });

  it("wraps rows at the column limit deterministically", () => {
    const codes = Array.from({ length: 8 }, (_, i) => `C${i}`);
    const grid = countryGrid(codes, 3);
    expect(grid[3]).toMatchObject({ code: "C3", row: 1, col: 0 });
    expect(countryGrid(codes, 3)).toEqual(grid);
  });
});
