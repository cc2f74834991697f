import { describe, expect, it } from "vitest";
import { execFileSync, spawnSync } from "child_process";
import { existsSync, mkdtempSync, readFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";

import { run } from "../src/cli";

const FIXTURES = join(__dirname, "fixtures");
const DIST_CLI = join(__dirname, "..", "dist", "cli.js");

function outPath(name: string): string {
  return join(mkdtempSync(join(tmpdir(), "plots-cli-")), name);
}

describe("cli dispatch", () => {
  it("renders a cluster map end to end", () => {
    const out = outPath("map.svg");
    expect(run(["plot", "cluster_map", "--in", join(FIXTURES, "toy"), "--out", out])).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("<svg");
  });

  it("auto-detects the only decomposition in a directory", () => {
    const out = outPath("map.svg");
    expect(run(["cluster_map", "--in", join(FIXTURES, "toy"), "--out", out])).toBe(0);
  });

  it("renders sweep charts from a file or its directory", () => {
    expect(run(["metric_vs_area", "--in", join(FIXTURES, "sweep.csv"), "--out", outPath("a.svg")])).toBe(0);
    expect(run(["metric_vs_area", "--in", FIXTURES, "--out", outPath("b.svg")])).toBe(0);
    expect(run(["metric_bars", "--in", join(FIXTURES, "sweep.csv"), "--metric", "c_var",
                "--out", outPath("c.svg")])).toBe(0);
  });

  it("exits nonzero on schema violations and bad usage", () => {
    expect(run(["cluster_map", "--in", join(FIXTURES, "bad"), "--method", "cgn",
                "--out", outPath("x.svg")])).toBe(2);
    expect(run(["metric_vs_area", "--in", join(FIXTURES, "bad", "sweep.csv"), "--out", outPath("y.svg")])).toBe(2);
    expect(run(["not_a_kind", "--in", FIXTURES, "--out", outPath("z.svg")])).toBe(2);
    expect(run(["cluster_map", "--in", join(FIXTURES, "toy")])).toBe(2);
    expect(run(["cluster_map", "--in", join(FIXTURES, "toy"), "--out", outPath("map.png")])).toBe(2);
    expect(run(["metric_vs_area", "--in", join(FIXTURES, "missing.csv"), "--out", outPath("m.svg")])).toBe(2);
  });
});

describe("built binary", () => {
  it("runs the compiled cli with the same behavior", () => {
    expect(existsSync(DIST_CLI)).toBe(true);
    const out = outPath("map.svg");
    execFileSync("node", [DIST_CLI, "cluster_map", "--in", join(FIXTURES, "toy"), "--out", out]);
    expect(readFileSync(out, "utf8")).toContain("class=\"centroid\"");
    const bad = spawnSync("node", [DIST_CLI, "cluster_map", "--in", join(FIXTURES, "bad"),
                                   "--out", outPath("bad.svg")]);
    expect(bad.status).toBe(2);
    expect(bad.stderr.toString()).toContain("error:");
  });
});
