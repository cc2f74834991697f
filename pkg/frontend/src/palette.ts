// Categorical palette (Tableau 10 plus two extras); cluster and method
// colors cycle through it, so nearby ids stay visually distinct.
export const PALETTE = [
  "#4c78a8",
  "#f58518",
  "#54a24b",
  "#e45756",
  "#72b7b2",
  "#eeca3b",
  "#b279a2",
  "#ff9da6",
  "#9d755d",
  "#bab0ac",
  "#2f4b7c",
  "#a05195",
];

export function colorFor(index: number): string {
  return PALETTE[((index % PALETTE.length) + PALETTE.length) % PALETTE.length];
}

export const METHOD_COLORS: Record<string, string> = {
  cgn: "#e45756",
  bs_clustering: "#4c78a8",
  cellular: "#54a24b",
};

export function methodColor(method: string, fallbackIndex: number): string {
  return METHOD_COLORS[method] ?? colorFor(fallbackIndex);
}
