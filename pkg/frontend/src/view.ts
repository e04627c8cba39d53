// Pane geometry: the one place the UI is allowed to touch numbers, and
// only as an affine map from document values to screen pixels.

import type { Frame, Pair, TraceDocument } from "./types.js";

export interface PaneView {
  width: number;
  height: number;
  centerRe: number;
  centerIm: number;
  scale: number; // pixels per unit
}

export function defaultView(width: number, height: number): PaneView {
  return { width, height, centerRe: 0, centerIm: 0, scale: Math.min(width, height) / 5 };
}

/** World -> screen; imaginary axis points up. */
export function toScreen(view: PaneView, p: Pair): Pair {
  return [
    (p[0] - view.centerRe) * view.scale + view.width / 2,
    view.height / 2 - (p[1] - view.centerIm) * view.scale,
  ];
}

/** Screen -> world, the exact inverse map. */
export function toWorld(view: PaneView, s: Pair): Pair {
  return [
    (s[0] - view.width / 2) / view.scale + view.centerRe,
    (view.height / 2 - s[1]) / view.scale + view.centerIm,
  ];
}

export function zoom(view: PaneView, factor: number): PaneView {
  return { ...view, scale: view.scale * factor };
}

export function pan(view: PaneView, dxPixels: number, dyPixels: number): PaneView {
  return {
    ...view,
    centerRe: view.centerRe - dxPixels / view.scale,
    centerIm: view.centerIm + dyPixels / view.scale,
  };
}

/** A view framing the given points with a margin (for gallery loads). */
export function fitView(width: number, height: number, points: Pair[]): PaneView {
  if (points.length === 0) return defaultView(width, height);
  let lo = Infinity, hi = -Infinity, loIm = Infinity, hiIm = -Infinity;
  for (const [re, im] of points) {
    lo = Math.min(lo, re); hi = Math.max(hi, re);
    loIm = Math.min(loIm, im); hiIm = Math.max(hiIm, im);
  }
  const span = Math.max(hi - lo, hiIm - loIm, 1e-9);
  return {
    width,
    height,
    centerRe: (lo + hi) / 2,
    centerIm: (loIm + hiIm) / 2,
    scale: (0.8 * Math.min(width, height)) / (1.3 * span),
  };
}

export type PaneKind = "roots" | "coeffs" | "expr_values" | "radicals";

/** Values of one pane at one frame, verbatim from the document. */
export function paneValues(frame: Frame, kind: PaneKind): Pair[] {
  return frame[kind];
}

/**
 * Screen polyline for one tracked point, rendered strictly in t-order.
 * `stride` decimates drawing only (the document is never thinned); the
 * first and the final frame are always kept.
 */
export function polylineVertices(
  frames: Frame[],
  kind: PaneKind,
  series: number,
  view: PaneView,
  upTo: number,
  stride: number = 1,
): Pair[] {
  const out: Pair[] = [];
  const last = Math.min(upTo, frames.length - 1);
  for (let j = 0; j <= last; j++) {
    if (j % stride !== 0 && j !== last) continue;
    const values = paneValues(frames[j], kind);
    if (series >= values.length) break;
    out.push(toScreen(view, values[series]));
  }
  return out;
}

/** The permutation badge is the document string, byte for byte. */
export function permutationBadge(doc: Pick<TraceDocument, "final_permutation">): string {
  return doc.final_permutation;
}

export function verdictBadge(doc: Pick<TraceDocument, "verdict">): string {
  return doc.verdict;
}

export const SERIES_COLORS = [
  "#e05252", "#3a7bd5", "#2f9e44", "#e8990c",
  "#9456d6", "#12a5a5", "#d6569c", "#7a7a22", "#555555",
];

export function seriesColor(series: number): string {
  return SERIES_COLORS[series % SERIES_COLORS.length];
}
