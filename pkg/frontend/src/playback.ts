// Frame buffering and the playback cursor. Frames arrive from the
// stream in t-order and are kept verbatim; the cursor only selects which
// prefix of the history the panes draw.

import type { Frame, StreamedFrame } from "./types.js";

export class Playback {
  private frames: Frame[] = [];
  private ts: number[] = [];
  cursor = 0;
  finished = false;

  /** Accept a streamed frame; out-of-order or duplicate indexes throw. */
  accept(frame: StreamedFrame): void {
    if (frame.index !== this.frames.length) {
      throw new Error(
        `stream out of order: got index ${frame.index}, expected ${this.frames.length}`,
      );
    }
    const { index, t, ...rest } = frame;
    this.frames.push(rest);
    this.ts.push(t);
  }

  reset(): void {
    this.frames = [];
    this.ts = [];
    this.cursor = 0;
    this.finished = false;
  }

  get length(): number {
    return this.frames.length;
  }

  get all(): readonly Frame[] {
    return this.frames;
  }

  get tGrid(): readonly number[] {
    return this.ts;
  }

  current(): Frame | undefined {
    return this.frames[Math.min(this.cursor, this.frames.length - 1)];
  }

  /** Advance the cursor by a number of frames, clamped to the buffer. */
  advance(count: number): void {
    this.cursor = Math.max(0, Math.min(this.cursor + count, this.frames.length - 1));
  }

  seekFraction(fraction: number): void {
    if (this.frames.length === 0) return;
    const clamped = Math.max(0, Math.min(1, fraction));
    this.cursor = Math.round(clamped * (this.frames.length - 1));
  }

  atEnd(): boolean {
    return this.frames.length > 0 && this.cursor >= this.frames.length - 1;
  }
}
