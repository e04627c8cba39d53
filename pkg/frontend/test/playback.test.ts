// Frame buffering: in-order acceptance, no duplicates, cursor clamping.

import { describe, expect, it } from "vitest";

import { Playback } from "../src/playback.js";
import type { StreamedFrame } from "../src/types.js";

function frame(index: number): StreamedFrame {
  return {
    index,
    t: index / 10,
    roots: [[index, 0]],
    coeffs: [[0, index]],
    expr_values: [],
    radicals: [],
  };
}

describe("Playback", () => {
  it("accepts frames in order and keeps them verbatim", () => {
    const playback = new Playback();
    for (let j = 0; j < 5; j++) playback.accept(frame(j));
    expect(playback.length).toBe(5);
    expect(playback.all[3].roots).toEqual([[3, 0]]);
    expect(playback.tGrid[3]).toBe(0.3);
  });

  it("rejects duplicates and gaps", () => {
    const playback = new Playback();
    playback.accept(frame(0));
    expect(() => playback.accept(frame(0))).toThrowError(/out of order/);
    expect(() => playback.accept(frame(2))).toThrowError(/out of order/);
  });

  it("cursor stays within the buffer", () => {
    const playback = new Playback();
    for (let j = 0; j < 4; j++) playback.accept(frame(j));
    playback.advance(100);
    expect(playback.cursor).toBe(3);
    expect(playback.atEnd()).toBe(true);
    playback.advance(-100);
    expect(playback.cursor).toBe(0);
    playback.seekFraction(0.5);
    expect(playback.cursor).toBe(2);
    playback.seekFraction(2);
    expect(playback.cursor).toBe(3);
  });

  it("reset empties the buffer", () => {
    const playback = new Playback();
    playback.accept(frame(0));
    playback.reset();
    expect(playback.length).toBe(0);
    expect(playback.current()).toBeUndefined();
  });
});
