// Minimal SVG assembly: plots are built as strings, no DOM involved.

export function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

export function tag(name: string, attrs: Record<string, string | number>, body?: string): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : esc(v)}"`)
    .join(" ");
  return body === undefined ? `<${name} ${parts}/>` : `<${name} ${parts}>${body}</${name}>`;
}

export function fmt(x: number): string {
  // fixed short form keeps files small and reruns byte-identical
  return Number.isInteger(x) ? String(x) : x.toFixed(2);
}

export function document(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    tag("rect", { x: 0, y: 0, width, height, fill: "#ffffff" }),
    ...body,
    "</svg>",
  ].join("\n");
}

export interface Scale {
  (value: number): number;
  ticks: number[];
  format(value: number): string;
}

export function linearScale(domain: [number, number], range: [number, number], tickCount = 5): Scale {
  let [d0, d1] = domain;
  if (d0 === d1) {
    d0 -= 1;
    d1 += 1;
  }
  const scale = ((value: number) => range[0] + ((value - d0) / (d1 - d0)) * (range[1] - range[0])) as Scale;
  const step = niceStep((d1 - d0) / tickCount);
  const ticks: number[] = [];
  for (let t = Math.ceil(d0 / step) * step; t <= d1 + 1e-12; t += step) ticks.push(t);
  scale.ticks = ticks;
  scale.format = (v: number) => formatTick(v);
  return scale;
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const lo = Math.log10(domain[0]);
  const hi = Math.log10(domain[1] > domain[0] ? domain[1] : domain[0] * 10);
  const scale = ((value: number) =>
    range[0] + ((Math.log10(value) - lo) / (hi - lo)) * (range[1] - range[0])) as Scale;
  const ticks: number[] = [];
  for (let e = Math.ceil(lo); e <= Math.floor(hi + 1e-9); e += 1) ticks.push(10 ** e);
  scale.ticks = ticks;
  scale.format = (v: number) => {
    const e = Math.round(Math.log10(v));
    return `1e${e}`;
  };
  return scale;
}

function niceStep(raw: number): number {
  const power = 10 ** Math.floor(Math.log10(Math.abs(raw) || 1));
  const unit = raw / power;
  const nice = unit < 1.5 ? 1 : unit < 3.5 ? 2 : unit < 7.5 ? 5 : 10;
  return nice * power;
}

function formatTick(v: number): string {
  if (v === 0) return "0";
  const magnitude = Math.abs(v);
  if (magnitude >= 1000 || magnitude < 0.001) return v.toExponential(0);
  return parseFloat(v.toPrecision(4)).toString();
}

/** Five-pointed star centered at (cx, cy). */
export function starPoints(cx: number, cy: number, outer: number): string {
  const inner = outer * 0.45;
  const pts: string[] = [];
  for (let i = 0; i < 10; i += 1) {
    const radius = i % 2 === 0 ? outer : inner;
    const angle = -Math.PI / 2 + (i * Math.PI) / 5;
    pts.push(`${fmt(cx + radius * Math.cos(angle))},${fmt(cy + radius * Math.sin(angle))}`);
  }
  return pts.join(" ");
}

/** Upward triangle centered at (cx, cy). */
export function trianglePoints(cx: number, cy: number, size: number): string {
  const h = size;
  return [
    `${fmt(cx)},${fmt(cy - h)}`,
    `${fmt(cx - 0.866 * h)},${fmt(cy + 0.5 * h)}`,
    `${fmt(cx + 0.866 * h)},${fmt(cy + 0.5 * h)}`,
  ].join(" ");
}

export function axisBottom(scale: Scale, y: number, x0: number, x1: number): string {
  const parts = [tag("line", { x1: x0, y1: y, x2: x1, y2: y, stroke: "#333", "stroke-width": 1 })];
  for (const t of scale.ticks) {
    const x = scale(t);
    if (x < x0 - 1e-6 || x > x1 + 1e-6) continue;
    parts.push(tag("line", { x1: x, y1: y, x2: x, y2: y + 4, stroke: "#333", "stroke-width": 1 }));
    parts.push(
      tag("text", { x, y: y + 16, "text-anchor": "middle", "font-size": 11, fill: "#333" }, esc(scale.format(t)))
    );
  }
  return parts.join("\n");
}

export function axisLeft(scale: Scale, x: number, y0: number, y1: number): string {
  const parts = [tag("line", { x1: x, y1: y0, x2: x, y2: y1, stroke: "#333", "stroke-width": 1 })];
  for (const t of scale.ticks) {
    const y = scale(t);
    if (y < Math.min(y0, y1) - 1e-6 || y > Math.max(y0, y1) + 1e-6) continue;
    parts.push(tag("line", { x1: x - 4, y1: y, x2: x, y2: y, stroke: "#333", "stroke-width": 1 }));
    parts.push(
      tag(
        "text",
        { x: x - 6, y: y + 3.5, "text-anchor": "end", "font-size": 11, fill: "#333" },
        esc(scale.format(t))
      )
    );
  }
  return parts.join("\n");
}
