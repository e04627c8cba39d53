// Loop recording: pointer drags on the roots pane become custom root
// motions. Samples are taken at a fixed time interval and re-sampled to
// the engine's max-step contract before submission; the endpoint snaps
// onto a root's start slot or the drag is rejected.

import type { CustomLoop, Pair } from "./types.js";

export interface RecorderConfig {
  sampleIntervalMs: number;
  maxStep: number; // engine contract, world units
  snapRadius: number; // world units
}

export const DEFAULT_RECORDER: RecorderConfig = {
  sampleIntervalMs: 25,
  maxStep: 0.05,
  snapRadius: 0.2,
};

export type RecordResult =
  | { ok: true; loop: CustomLoop }
  | { ok: false; reason: string };

function dist(a: Pair, b: Pair): number {
  return Math.hypot(a[0] - b[0], a[1] - b[1]);
}

/** Subdivide long segments so consecutive samples obey the max step. */
export function resampleMaxStep(points: Pair[], maxStep: number): Pair[] {
  if (points.length === 0) return [];
  const out: Pair[] = [points[0]];
  for (let i = 1; i < points.length; i++) {
    const prev = out[out.length - 1];
    const next = points[i];
    const gap = dist(prev, next);
    const pieces = Math.max(1, Math.ceil(gap / maxStep));
    for (let k = 1; k <= pieces; k++) {
      out.push([
        prev[0] + ((next[0] - prev[0]) * k) / pieces,
        prev[1] + ((next[1] - prev[1]) * k) / pieces,
      ]);
    }
    out[out.length - 1] = next;
  }
  return out;
}

export function nearestRoot(starts: Pair[], p: Pair): { index: number; distance: number } {
  let best = 0;
  let bestDist = Infinity;
  starts.forEach((s, i) => {
    const d = dist(s, p);
    if (d < bestDist) {
      bestDist = d;
      best = i;
    }
  });
  return { index: best, distance: bestDist };
}

export class LoopRecorder {
  private samples: Pair[] = [];
  private lastSampleMs = -Infinity;
  private rootIndex = -1; // 0-based while recording

  constructor(
    private starts: Pair[],
    private config: RecorderConfig = DEFAULT_RECORDER,
  ) {}

  get active(): boolean {
    return this.rootIndex >= 0;
  }

  /** Begin a drag if the pointer went down within snap range of a root. */
  begin(world: Pair, timeMs: number): boolean {
    const hit = nearestRoot(this.starts, world);
    if (hit.distance > this.config.snapRadius) return false;
    this.rootIndex = hit.index;
    this.samples = [this.starts[hit.index]];
    this.lastSampleMs = timeMs;
    return true;
  }

  /** Record pointer motion at the configured fixed interval. */
  move(world: Pair, timeMs: number): void {
    if (!this.active) return;
    if (timeMs - this.lastSampleMs < this.config.sampleIntervalMs) return;
    this.samples.push(world);
    this.lastSampleMs = timeMs;
  }

  /**
   * Finish the drag. The endpoint must land within the snap radius of
   * some root's start slot (its own start gives a plain loop, another
   * root's start records a swap the engine completes); an open-ended or
   * zero-length drag is rejected.
   */
  end(world: Pair): RecordResult {
    if (!this.active) return { ok: false, reason: "no drag in progress" };
    const root = this.rootIndex;
    this.rootIndex = -1;
    const path = [...this.samples, world];
    this.samples = [];
    const target = nearestRoot(this.starts, world);
    if (target.distance > this.config.snapRadius) {
      return {
        ok: false,
        reason: "drag must end on a root's start position; closed loops only",
      };
    }
    let travelled = 0;
    for (let i = 1; i < path.length; i++) travelled += dist(path[i - 1], path[i]);
    if (travelled <= 2 * this.config.snapRadius && target.index === root) {
      return { ok: false, reason: "zero-length drag" };
    }
    path[path.length - 1] = this.starts[target.index]; // snap
    const resampled = resampleMaxStep(path, this.config.maxStep);
    return {
      ok: true,
      loop: { root: root + 1, points: resampled, target: target.index + 1 },
    };
  }

  cancel(): void {
    this.rootIndex = -1;
    this.samples = [];
  }
}
