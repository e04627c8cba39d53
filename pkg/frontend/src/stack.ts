// The loop-composition stack: recorded loops, invert flags, and the
// one-click commutator. Entries are listed in traversal order; the
// engine applies the earliest entry first, so the commutator of the top
// two loops a (top) and b (below) is the word b' a' b a, whose tracked
// permutation is the group commutator [sigma_a, sigma_b].

import type { CustomLoop, Pair, RunRequest, StackEntry } from "./types.js";

export interface RecordedLoop {
  loop: CustomLoop;
  /** Engine-reported permutation badge for this single loop ("()" etc.). */
  badge: string;
}

export class LoopStack {
  readonly loops: RecordedLoop[] = [];
  entries: StackEntry[] = [];

  addLoop(loop: CustomLoop, badge: string): number {
    this.loops.push({ loop, badge });
    return this.loops.length - 1;
  }

  push(loopIndex: number, invert = false): void {
    if (loopIndex < 0 || loopIndex >= this.loops.length) {
      throw new Error(`unknown loop ${loopIndex}`);
    }
    this.entries.push({ loop: loopIndex, invert });
  }

  pop(): StackEntry | undefined {
    return this.entries.pop();
  }

  clear(): void {
    this.entries = [];
  }

  get canRun(): boolean {
    return this.entries.length > 0;
  }

  /** Replace the two topmost entries with their commutator word. */
  commutatorOfTopTwo(): boolean {
    if (this.entries.length < 2) return false;
    const a = this.entries.pop()!;
    const b = this.entries.pop()!;
    this.entries.push(
      { loop: b.loop, invert: !b.invert },
      { loop: a.loop, invert: !a.invert },
      b,
      a,
    );
    return true;
  }

  /** The run request for the current stack over a base configuration. */
  buildRequest(degree: number, start: Pair[], exprs: string[]): RunRequest {
    if (!this.canRun) throw new Error("the stack is empty");
    const request: RunRequest = {
      scenario: "custom",
      custom: {
        degree,
        start,
        loops: this.loops.map((r) => r.loop),
        stack: [...this.entries],
      },
    };
    if (exprs.length > 0) request.exprs = exprs;
    return request;
  }
}

/** A single-loop request, used to ask the engine for a loop's badge. */
export function singleLoopRequest(
  degree: number,
  start: Pair[],
  loop: CustomLoop,
  exprs: string[],
): RunRequest {
  const request: RunRequest = {
    scenario: "custom",
    custom: { degree, start, loops: [loop], stack: [{ loop: 0, invert: false }] },
  };
  if (exprs.length > 0) request.exprs = exprs;
  return request;
}
