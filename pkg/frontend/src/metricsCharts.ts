import { SchemaError, SweepRow, loadSweep } from "./csv";
import { methodColor } from "./palette";
import { axisBottom, axisLeft, document, esc, fmt, linearScale, logScale, tag, Scale } from "./svg";

const WIDTH = 720;
const PANEL_HEIGHT = 220;
const MARGIN = { top: 34, right: 24, bottom: 40, left: 64 };

type MetricKey = "c_min" | "c_avg" | "c_var";

const METRIC_FIELD: Record<MetricKey, keyof SweepRow> = {
  c_min: "cMinMean",
  c_avg: "cAvgMean",
  c_var: "cVarMean",
};

function methodsOf(rows: SweepRow[]): string[] {
  return [...new Set(rows.map((r) => r.method))];
}

function valuesFor(rows: SweepRow[], metric: MetricKey): number[] {
  return rows.map((r) => r[METRIC_FIELD[metric]] as number);
}

/** Log-scale floor: zero capacities (userless cellular clusters) are drawn
 * pinned one decade under the smallest positive value. */
function logFloor(values: number[]): number {
  const positive = values.filter((v) => v > 0);
  if (positive.length === 0) return 1e-9;
  return Math.min(...positive) / 10;
}

function legend(methods: string[], x: number, y: number): string {
  return methods
    .map((method, i) =>
      [
        tag("rect", { class: "legend-swatch", x: x + i * 150, y: y - 9, width: 10, height: 10, fill: methodColor(method, i) }),
        tag("text", { x: x + i * 150 + 14, y, "font-size": 11.5, fill: "#333" }, esc(method)),
      ].join("\n")
    )
    .join("\n");
}

function seriesPanel(
  rows: SweepRow[],
  metric: MetricKey,
  top: number,
  title: string,
  useLog: boolean
): string {
  const methods = methodsOf(rows);
  const aValues = [...new Set(rows.map((r) => r.a))].sort((p, q) => p - q);
  const values = valuesFor(rows, metric);
  const floor = logFloor(values);
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = top + PANEL_HEIGHT - MARGIN.bottom;
  const y1 = top + 18;
  const scaleX = linearScale([aValues[0], aValues[aValues.length - 1]], [x0, x1]);
  let scaleY: Scale;
  if (useLog) {
    const shown = values.map((v) => (v > 0 ? v : floor));
    scaleY = logScale([Math.min(...shown), Math.max(...shown)], [y0, y1]);
  } else {
    scaleY = linearScale([Math.min(0, ...values), Math.max(...values)], [y0, y1]);
  }

  const parts: string[] = [];
  parts.push(tag("text", { x: x0, y: top + 6, "font-size": 13, fill: "#111" }, esc(title)));
  parts.push(axisBottom(scaleX, y0, x0, x1));
  parts.push(axisLeft(scaleY, x0, y0, y1));
  methods.forEach((method, i) => {
    const line = rows
      .filter((r) => r.method === method)
      .sort((p, q) => p.a - q.a)
      .map((r) => {
        const raw = r[METRIC_FIELD[metric]] as number;
        const v = useLog && raw <= 0 ? floor : raw;
        return `${fmt(scaleX(r.a))},${fmt(scaleY(v))}`;
      });
    parts.push(
      tag("polyline", {
        class: "series",
        "data-method": method,
        "data-metric": metric,
        points: line.join(" "),
        fill: "none",
        stroke: methodColor(method, i),
        "stroke-width": 1.8,
      })
    );
    // one marker per CSV row, nothing interpolated
    for (const point of line) {
      const [px, py] = point.split(",");
      parts.push(
        tag("circle", {
          class: "series-point",
          "data-method": method,
          cx: Number(px),
          cy: Number(py),
          r: 2.6,
          fill: methodColor(method, i),
        })
      );
    }
  });
  return parts.join("\n");
}

/** Three stacked panels (C_min, C_avg, C_var) against the side length, one
 * series per method; the C_min panel uses a log axis. */
export function renderMetricVsArea(sweepPath: string): string {
  const rows = loadSweep(sweepPath);
  const methods = methodsOf(rows);
  const body: string[] = [];
  body.push(legend(methods, MARGIN.left, 16));
  const panels: [MetricKey, string, boolean][] = [
    ["c_min", "minimum cluster capacity C_min (bits/use, log scale)", true],
    ["c_avg", "average cluster capacity C_avg (bits/use)", false],
    ["c_var", "capacity variance C_var", false],
  ];
  panels.forEach(([metric, title, useLog], i) => {
    body.push(seriesPanel(rows, metric, MARGIN.top + i * PANEL_HEIGHT, title, useLog));
  });
  return document(WIDTH, MARGIN.top + panels.length * PANEL_HEIGHT + 8, body);
}

/** Grouped bars of one metric: side lengths on the x axis, one bar per
 * method within each group. */
export function renderMetricBars(sweepPath: string, metric: string): string {
  if (!(metric in METRIC_FIELD)) {
    throw new SchemaError(`unknown metric "${metric}", expected one of ${Object.keys(METRIC_FIELD).join(", ")}`);
  }
  const key = metric as MetricKey;
  const rows = loadSweep(sweepPath);
  const methods = methodsOf(rows);
  const aValues = [...new Set(rows.map((r) => r.a))].sort((p, q) => p - q);
  const values = valuesFor(rows, key);
  const height = 320;
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = height - MARGIN.bottom;
  const y1 = 44;
  const scaleY = linearScale([Math.min(0, ...values), Math.max(...values)], [y0, y1]);
  const groupWidth = (x1 - x0) / aValues.length;
  const barWidth = (groupWidth * 0.7) / methods.length;

  const body: string[] = [];
  body.push(legend(methods, MARGIN.left, 16));
  body.push(tag("text", { x: x0, y: 32, "font-size": 13, fill: "#111" }, esc(`${metric} by side length`)));
  body.push(axisLeft(scaleY, x0, y0, y1));
  aValues.forEach((a, gi) => {
    const groupX = x0 + gi * groupWidth + groupWidth * 0.15;
    body.push(
      tag(
        "text",
        { x: x0 + gi * groupWidth + groupWidth / 2, y: y0 + 16, "text-anchor": "middle", "font-size": 11, fill: "#333" },
        esc(`a = ${a}`)
      )
    );
    methods.forEach((method, mi) => {
      const row = rows.find((r) => r.a === a && r.method === method);
      if (!row) return;
      const value = row[METRIC_FIELD[key]] as number;
      const yTop = scaleY(value);
      body.push(
        tag("rect", {
          class: "bar",
          "data-method": method,
          "data-a": a,
          x: groupX + mi * barWidth,
          y: Math.min(yTop, y0),
          width: barWidth * 0.92,
          height: Math.abs(y0 - yTop),
          fill: methodColor(method, mi),
        })
      );
    });
  });
  body.push(tag("line", { x1: x0, y1: y0, x2: x1, y2: y0, stroke: "#333", "stroke-width": 1 }));
  return document(WIDTH, height, body);
}
