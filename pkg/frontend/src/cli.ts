#!/usr/bin/env node
// plot <kind> --in <dir|file> --out <file.svg> [--method <name>] [--metric <name>]
//
// kinds: cluster_map (reads nodes/assignment/clusters CSVs from a run
// directory), metric_bars and metric_vs_area (read sweep.csv). Exit codes:
// 0 success, 2 bad usage, missing files or schema violations.

import { existsSync, readdirSync, statSync, writeFileSync } from "fs";
import { join } from "path";

import { renderClusterMap } from "./clusterMap";
import { SchemaError } from "./csv";
import { renderMetricBars, renderMetricVsArea } from "./metricsCharts";

const KINDS = ["cluster_map", "metric_bars", "metric_vs_area"];

class UsageError extends Error {}

interface Args {
  kind: string;
  input: string;
  out: string;
  method?: string;
  metric: string;
}

export function parseArgs(argv: string[]): Args {
  const positional: string[] = [];
  const options = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 1) {
    const arg = argv[i];
    if (arg.startsWith("--")) {
      const value = argv[i + 1];
      if (value === undefined) throw new UsageError(`missing value for ${arg}`);
      options.set(arg.slice(2), value);
      i += 1;
    } else {
      positional.push(arg);
    }
  }
  // accept both `plot <kind> ...` and `<kind> ...` so the binary name works
  if (positional[0] === "plot") positional.shift();
  const kind = positional[0];
  if (!kind || !KINDS.includes(kind)) {
    throw new UsageError(`usage: plot <${KINDS.join("|")}> --in <dir> --out <file.svg>`);
  }
  const input = options.get("in");
  const out = options.get("out");
  if (!input || !out) throw new UsageError("both --in and --out are required");
  if (!out.endsWith(".svg")) {
    throw new UsageError("only .svg output is supported, pass a path ending in .svg");
  }
  return { kind, input, out, method: options.get("method"), metric: options.get("metric") ?? "c_min" };
}

function detectMethod(dir: string): string {
  const found = readdirSync(dir)
    .filter((f) => f.startsWith("assignment-") && f.endsWith(".csv"))
    .map((f) => f.slice("assignment-".length, -".csv".length));
  if (found.length === 1) return found[0];
  if (found.length === 0) throw new UsageError(`no assignment-<method>.csv in ${dir}`);
  throw new UsageError(`several decompositions in ${dir} (${found.join(", ")}); pass --method`);
}

function sweepPath(input: string): string {
  if (existsSync(input) && statSync(input).isDirectory()) return join(input, "sweep.csv");
  return input;
}

export function run(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    let svg: string;
    if (args.kind === "cluster_map") {
      const method = args.method ?? detectMethod(args.input);
      svg = renderClusterMap(args.input, method);
    } else if (args.kind === "metric_vs_area") {
      svg = renderMetricVsArea(sweepPath(args.input));
    } else {
      svg = renderMetricBars(sweepPath(args.input), args.metric);
    }
    writeFileSync(args.out, svg);
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof UsageError || err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    if (err instanceof Error && "code" in err && (err as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(run(process.argv.slice(2)));
}
