import { describe, expect, it } from "vitest";
import { cpSync, mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";

import { renderClusterMap } from "../src/clusterMap";
import { SchemaError } from "../src/csv";

const FIXTURES = join(__dirname, "fixtures");

function nodeFills(svg: string): Set<string> {
  const fills = new Set<string>();
  for (const match of svg.matchAll(/class="node [^"]*"[^>]*fill="([^"]+)"/g)) {
    fills.add(match[1]);
  }
  return fills;
}

describe("cluster map", () => {
  it("renders the two-cluster toy with exactly two colors and two centroid stars", () => {
    const svg = renderClusterMap(join(FIXTURES, "toy"), "cgn");
    expect(nodeFills(svg).size).toBe(2);
    expect(svg.match(/class="centroid"/g)?.length).toBe(2);
    // marker shapes follow node kind: 2 triangles (bs), 3 circles (users)
    expect(svg.match(/class="node bs"/g)?.length).toBe(2);
    expect(svg.match(/class="node user"/g)?.length).toBe(3);
    // the legend quotes per-cluster capacities
    expect(svg).toContain("0.153");
    expect(svg).toContain("0.242");
  });

  it("omits the centroid of an empty cluster", () => {
    const svg = renderClusterMap(join(FIXTURES, "empty_cluster"), "cellular");
    expect(svg.match(/class="centroid"/g)?.length).toBe(1);
  });

  it("is idempotent", () => {
    const first = renderClusterMap(join(FIXTURES, "toy"), "cgn");
    const second = renderClusterMap(join(FIXTURES, "toy"), "cgn");
    expect(second).toBe(first);
  });

  it("rejects a wrong header", () => {
    expect(() => renderClusterMap(join(FIXTURES, "bad"), "cgn")).toThrow();
  });

  it("rejects a missing decomposition", () => {
    expect(() =>
      renderClusterMap(join(FIXTURES, "empty_cluster"), "missing")
    ).toThrow(SchemaError);
  });

  it("rejects an assignment pointing at unknown clusters", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    cpSync(join(FIXTURES, "toy"), dir, { recursive: true });
    writeFileSync(
      join(dir, "assignment-cgn.csv"),
      "node_id,cluster_id\n0,0\n1,5\n2,0\n3,1\n4,1\n"
    );
    expect(() => renderClusterMap(dir, "cgn")).toThrow(SchemaError);
  });
});
