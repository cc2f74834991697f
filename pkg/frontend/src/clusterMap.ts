import { join } from "path";

import { checkClusterMapInputs, loadAssignment, loadClusters, loadNodes } from "./csv";
import { colorFor } from "./palette";
import { document, esc, fmt, linearScale, starPoints, tag, trianglePoints } from "./svg";

const PLOT = 560;
const MARGIN = 36;
const LEGEND_WIDTH = 230;

function capacityLabel(capacity: number): string {
  if (capacity === 0) return "0";
  if (capacity >= 0.01) return capacity.toFixed(3);
  return capacity.toExponential(1);
}

/** Scatter map of one decomposition: triangles for base stations, circles
 * for users, a star on every non-empty cluster centroid, one color per
 * cluster and a capacity legend. */
export function renderClusterMap(inputDir: string, method: string): string {
  const nodes = loadNodes(join(inputDir, "nodes.csv"));
  const assignment = loadAssignment(join(inputDir, `assignment-${method}.csv`));
  const clusters = loadClusters(join(inputDir, `clusters-${method}.csv`));
  checkClusterMapInputs(nodes, assignment, clusters);
  const clusterOf = new Map(assignment.map((row) => [row.nodeId, row.clusterId]));

  const xs = nodes.map((n) => n.x);
  const ys = nodes.map((n) => n.y);
  const pad = 0.04;
  const spanX = Math.max(...xs) - Math.min(...xs) || 1;
  const spanY = Math.max(...ys) - Math.min(...ys) || 1;
  const scaleX = linearScale(
    [Math.min(...xs) - pad * spanX, Math.max(...xs) + pad * spanX],
    [MARGIN, MARGIN + PLOT]
  );
  // y grows upward in network coordinates, downward in SVG
  const scaleY = linearScale(
    [Math.min(...ys) - pad * spanY, Math.max(...ys) + pad * spanY],
    [MARGIN + PLOT, MARGIN]
  );

  const body: string[] = [];
  body.push(
    tag("text", { x: MARGIN, y: 22, "font-size": 15, fill: "#111" }, esc(`${method} decomposition`))
  );
  body.push(
    tag("rect", {
      x: MARGIN,
      y: MARGIN,
      width: PLOT,
      height: PLOT,
      fill: "none",
      stroke: "#999",
      "stroke-width": 1,
    })
  );

  for (const node of nodes) {
    const cluster = clusterOf.get(node.nodeId)!;
    const fill = colorFor(cluster);
    const cx = scaleX(node.x);
    const cy = scaleY(node.y);
    if (node.kind === "bs") {
      body.push(
        tag("polygon", {
          class: "node bs",
          "data-cluster": cluster,
          points: trianglePoints(cx, cy, 5),
          fill,
          stroke: "#222",
          "stroke-width": 0.4,
        })
      );
    } else {
      body.push(
        tag("circle", {
          class: "node user",
          "data-cluster": cluster,
          cx,
          cy,
          r: 3,
          fill,
          stroke: "#222",
          "stroke-width": 0.4,
        })
      );
    }
  }

  // centroids on top; empty clusters carry no centroid and are skipped
  for (const cluster of clusters) {
    if (cluster.centroidX === null || cluster.centroidY === null) continue;
    body.push(
      tag("polygon", {
        class: "centroid",
        "data-cluster": cluster.clusterId,
        points: starPoints(scaleX(cluster.centroidX), scaleY(cluster.centroidY), 9),
        fill: colorFor(cluster.clusterId),
        stroke: "#000",
        "stroke-width": 0.8,
      })
    );
  }

  const legendX = MARGIN + PLOT + 24;
  body.push(
    tag("text", { x: legendX, y: MARGIN + 4, "font-size": 12, fill: "#111" }, "cluster capacity (bits/use)")
  );
  clusters.forEach((cluster, i) => {
    const y = MARGIN + 18 + i * 15;
    if (y > MARGIN + PLOT) return; // legend overflow: drop the tail rows
    body.push(
      tag("rect", {
        class: "legend-swatch",
        x: legendX,
        y: y - 8,
        width: 10,
        height: 10,
        fill: colorFor(cluster.clusterId),
      })
    );
    const label = `${cluster.clusterId}: ${capacityLabel(cluster.capacity)} (${cluster.nBs} bs, ${cluster.nUsers} users)`;
    body.push(tag("text", { x: legendX + 16, y, "font-size": 10.5, fill: "#333" }, esc(label)));
  });

  return document(MARGIN * 2 + PLOT + LEGEND_WIDTH, MARGIN * 2 + PLOT, body);
}
