import { readFileSync } from "fs";
import Papa from "papaparse";

/** Raised for any malformed or inconsistent input file. */
export class SchemaError extends Error {}

export interface NodeRow {
  nodeId: number;
  kind: "bs" | "user";
  x: number;
  y: number;
}

export interface AssignmentRow {
  nodeId: number;
  clusterId: number;
}

export interface ClusterRow {
  clusterId: number;
  nBs: number;
  nUsers: number;
  /** null when the cluster is empty and the centroid column is blank */
  centroidX: number | null;
  centroidY: number | null;
  capacity: number;
  capacityStderr: number;
}

export interface SweepRow {
  a: number;
  method: string;
  cMinMean: number;
  cMinStd: number;
  cAvgMean: number;
  cAvgStd: number;
  cVarMean: number;
  cVarStd: number;
  reps: number;
}

function parseCsv(path: string, expectedHeader: string[]): Record<string, string>[] {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new SchemaError(`cannot read ${path}: ${(err as Error).message}`);
  }
  const result = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: true,
  });
  if (result.errors.length > 0) {
    const first = result.errors[0];
    throw new SchemaError(`${path}: ${first.message} (row ${first.row})`);
  }
  const fields = result.meta.fields ?? [];
  if (fields.join(",") !== expectedHeader.join(",")) {
    throw new SchemaError(
      `${path}: header "${fields.join(",")}" does not match expected "${expectedHeader.join(",")}"`
    );
  }
  return result.data;
}

function num(path: string, row: Record<string, string>, field: string): number {
  const value = Number(row[field]);
  if (row[field] === "" || row[field] === undefined || !Number.isFinite(value)) {
    throw new SchemaError(`${path}: field "${field}" has non-numeric value "${row[field]}"`);
  }
  return value;
}

function optionalNum(path: string, row: Record<string, string>, field: string): number | null {
  if (row[field] === "" || row[field] === undefined) return null;
  return num(path, row, field);
}

export function loadNodes(path: string): NodeRow[] {
  return parseCsv(path, ["node_id", "kind", "x", "y"]).map((row) => {
    const kind = row["kind"];
    if (kind !== "bs" && kind !== "user") {
      throw new SchemaError(`${path}: kind must be "bs" or "user", got "${kind}"`);
    }
    return { nodeId: num(path, row, "node_id"), kind, x: num(path, row, "x"), y: num(path, row, "y") };
  });
}

export function loadAssignment(path: string): AssignmentRow[] {
  return parseCsv(path, ["node_id", "cluster_id"]).map((row) => ({
    nodeId: num(path, row, "node_id"),
    clusterId: num(path, row, "cluster_id"),
  }));
}

export function loadClusters(path: string): ClusterRow[] {
  return parseCsv(path, [
    "cluster_id",
    "n_bs",
    "n_users",
    "centroid_x",
    "centroid_y",
    "capacity",
    "capacity_stderr",
  ]).map((row) => ({
    clusterId: num(path, row, "cluster_id"),
    nBs: num(path, row, "n_bs"),
    nUsers: num(path, row, "n_users"),
    centroidX: optionalNum(path, row, "centroid_x"),
    centroidY: optionalNum(path, row, "centroid_y"),
    capacity: num(path, row, "capacity"),
    capacityStderr: num(path, row, "capacity_stderr"),
  }));
}

export function loadSweep(path: string): SweepRow[] {
  const rows = parseCsv(path, [
    "a",
    "method",
    "c_min_mean",
    "c_min_std",
    "c_avg_mean",
    "c_avg_std",
    "c_var_mean",
    "c_var_std",
    "reps",
  ]).map((row) => ({
    a: num(path, row, "a"),
    method: row["method"],
    cMinMean: num(path, row, "c_min_mean"),
    cMinStd: num(path, row, "c_min_std"),
    cAvgMean: num(path, row, "c_avg_mean"),
    cAvgStd: num(path, row, "c_avg_std"),
    cVarMean: num(path, row, "c_var_mean"),
    cVarStd: num(path, row, "c_var_std"),
    reps: num(path, row, "reps"),
  }));
  if (rows.length === 0) throw new SchemaError(`${path}: no data rows`);
  return rows;
}

/** Cross-file consistency for a cluster map: the assignment must cover the
 * node set exactly and only reference clusters present in the cluster table. */
export function checkClusterMapInputs(
  nodes: NodeRow[],
  assignment: AssignmentRow[],
  clusters: ClusterRow[]
): void {
  const nodeIds = new Set(nodes.map((n) => n.nodeId));
  if (assignment.length !== nodes.length) {
    throw new SchemaError(
      `assignment covers ${assignment.length} nodes but nodes.csv has ${nodes.length}`
    );
  }
  const clusterIds = new Set(clusters.map((c) => c.clusterId));
  for (const row of assignment) {
    if (!nodeIds.has(row.nodeId)) {
      throw new SchemaError(`assignment references unknown node ${row.nodeId}`);
    }
    if (!clusterIds.has(row.clusterId)) {
      throw new SchemaError(`assignment references unknown cluster ${row.clusterId}`);
    }
  }
}
