// Explorer wiring: four synchronized panes over one trace document.
// Pane I: roots (drag here to record loops). Pane II: coefficients.
// Pane III: formula values. Pane IV: radical branch values.

import { ApiClient } from "./api.js";
import { Playback } from "./playback.js";
import { DEFAULT_RECORDER, LoopRecorder } from "./recorder.js";
import { LoopStack, singleLoopRequest } from "./stack.js";
import type { Pair, ScenarioInfo, StreamVerdict, TraceDocument } from "./types.js";
import {
  PaneKind,
  PaneView,
  fitView,
  pan,
  paneValues,
  permutationBadge,
  polylineVertices,
  seriesColor,
  toScreen,
  toWorld,
  verdictBadge,
  zoom,
} from "./view.js";

const PANES: { kind: PaneKind; canvasId: string; label: string }[] = [
  { kind: "roots", canvasId: "pane-roots", label: "roots" },
  { kind: "coeffs", canvasId: "pane-coeffs", label: "coefficients" },
  { kind: "expr_values", canvasId: "pane-exprs", label: "formula values" },
  { kind: "radicals", canvasId: "pane-radicals", label: "radical branches" },
];

interface PaneState {
  kind: PaneKind;
  canvas: HTMLCanvasElement;
  ctx: CanvasRenderingContext2D;
  view: PaneView;
}

class Explorer {
  private api = new ApiClient("");
  private panes: PaneState[] = [];
  private playback = new Playback();
  private doc: TraceDocument | null = null;
  private stack = new LoopStack();
  private recorder: LoopRecorder | null = null;
  private recordingPreview: Pair[] = [];
  private stride = 1;
  private playing = false;
  private stopStream: (() => void) | null = null;

  private $ = (id: string) => document.getElementById(id)!;

  async start(): Promise<void> {
    for (const def of PANES) {
      const canvas = this.$(def.canvasId) as HTMLCanvasElement;
      const ctx = canvas.getContext("2d")!;
      const view = fitView(canvas.width, canvas.height, [[1, 1], [-1, -1]]);
      this.panes.push({ kind: def.kind, canvas, ctx, view });
      this.wirePanZoom(this.panes[this.panes.length - 1]);
    }
    this.wireRootsPane();
    this.wireControls();
    await this.loadGallery();
    requestAnimationFrame(() => this.tick());
  }

  private async loadGallery(): Promise<void> {
    const select = this.$("gallery") as HTMLSelectElement;
    try {
      const scenarios = await this.api.scenarios();
      this.showBanner(null);
      select.innerHTML = "";
      for (const s of scenarios) {
        const option = document.createElement("option");
        option.value = s.id;
        option.textContent = `${s.id} (degree ${s.degree})`;
        option.title = s.description;
        select.appendChild(option);
      }
    } catch {
      this.showBanner("service unreachable - start it with: monodromy serve");
    }
  }

  private showBanner(message: string | null): void {
    const banner = this.$("banner");
    banner.textContent = message ?? "";
    banner.style.display = message ? "block" : "none";
  }

  private setStatus(message: string): void {
    this.$("status").textContent = message;
  }

  private wireControls(): void {
    (this.$("load") as HTMLButtonElement).onclick = () => {
      const select = this.$("gallery") as HTMLSelectElement;
      if (select.value) void this.runScenario({ scenario: select.value });
    };
    (this.$("run-stack") as HTMLButtonElement).onclick = () => void this.runStack();
    (this.$("commutator") as HTMLButtonElement).onclick = () => {
      if (this.stack.commutatorOfTopTwo()) this.renderStack();
      else this.setStatus("need two entries on the stack");
    };
    (this.$("pop") as HTMLButtonElement).onclick = () => {
      this.stack.pop();
      this.renderStack();
    };
    (this.$("clear-stack") as HTMLButtonElement).onclick = () => {
      this.stack.clear();
      this.renderStack();
    };
    const strideInput = this.$("stride") as HTMLInputElement;
    strideInput.onchange = () => {
      this.stride = Math.max(1, Number(strideInput.value) || 1);
    };
    const slider = this.$("cursor") as HTMLInputElement;
    slider.oninput = () => {
      this.playing = false;
      this.playback.seekFraction(Number(slider.value) / 1000);
    };
    (this.$("replay") as HTMLButtonElement).onclick = () => {
      this.playback.seekFraction(0);
      this.playing = true;
    };
  }

  private wirePanZoom(pane: PaneState): void {
    pane.canvas.addEventListener("wheel", (ev) => {
      ev.preventDefault();
      pane.view = zoom(pane.view, ev.deltaY < 0 ? 1.15 : 1 / 1.15);
    });
    let dragging = false;
    let lastX = 0;
    let lastY = 0;
    pane.canvas.addEventListener("pointerdown", (ev) => {
      if (pane.kind === "roots" && !ev.shiftKey) return; // recording gesture
      dragging = true;
      lastX = ev.offsetX;
      lastY = ev.offsetY;
    });
    pane.canvas.addEventListener("pointermove", (ev) => {
      if (!dragging) return;
      pane.view = pan(pane.view, ev.offsetX - lastX, ev.offsetY - lastY);
      lastX = ev.offsetX;
      lastY = ev.offsetY;
    });
    const stop = () => (dragging = false);
    pane.canvas.addEventListener("pointerup", stop);
    pane.canvas.addEventListener("pointerleave", stop);
  }

  private rootsPane(): PaneState {
    return this.panes[0];
  }

  private baseRoots(): Pair[] | null {
    if (!this.doc || this.doc.frames.length === 0) return null;
    return this.doc.frames[0].roots;
  }

  private wireRootsPane(): void {
    const pane = this.rootsPane();
    pane.canvas.addEventListener("pointerdown", (ev) => {
      if (ev.shiftKey) return; // shift = pan
      const starts = this.baseRoots();
      if (!starts) {
        this.setStatus("load a scenario first, then drag a root");
        return;
      }
      const snapWorld = 12 / pane.view.scale;
      this.recorder = new LoopRecorder(starts, {
        ...DEFAULT_RECORDER,
        snapRadius: snapWorld,
      });
      const world = toWorld(pane.view, [ev.offsetX, ev.offsetY]);
      if (!this.recorder.begin(world, ev.timeStamp)) {
        this.recorder = null;
        return;
      }
      this.recordingPreview = [world];
      pane.canvas.setPointerCapture(ev.pointerId);
    });
    pane.canvas.addEventListener("pointermove", (ev) => {
      if (!this.recorder?.active) return;
      const world = toWorld(pane.view, [ev.offsetX, ev.offsetY]);
      this.recorder.move(world, ev.timeStamp);
      this.recordingPreview.push(world);
    });
    pane.canvas.addEventListener("pointerup", (ev) => {
      if (!this.recorder?.active) return;
      const world = toWorld(pane.view, [ev.offsetX, ev.offsetY]);
      const result = this.recorder.end(world);
      this.recorder = null;
      this.recordingPreview = [];
      if (!result.ok) {
        this.setStatus(`loop discarded: ${result.reason}`);
        return;
      }
      void this.registerLoop(result.loop);
    });
  }

  private exprs(): string[] {
    const raw = (this.$("exprs") as HTMLTextAreaElement).value;
    return raw
      .split("\n")
      .map((s) => s.trim())
      .filter((s) => s.length > 0);
  }

  private async registerLoop(loop: {
    root: number;
    points: Pair[];
    target: number;
  }): Promise<void> {
    const starts = this.baseRoots();
    if (!starts || !this.doc) return;
    this.setStatus("asking the engine for the loop's permutation...");
    try {
      const request = singleLoopRequest(this.doc.degree, starts, loop, []);
      const id = await this.api.submit(request);
      const doc = await this.api.fetchTrace(id);
      const index = this.stack.addLoop(loop, permutationBadge(doc));
      this.stack.push(index);
      this.renderStack();
      this.setStatus(`recorded loop L${index + 1}: ${permutationBadge(doc)}`);
    } catch (err) {
      this.setStatus(`loop rejected by the engine: ${(err as Error).message}`);
    }
  }

  private renderStack(): void {
    const list = this.$("stack-list");
    list.innerHTML = "";
    this.stack.entries.forEach((entry, i) => {
      const item = document.createElement("li");
      const badge = this.stack.loops[entry.loop].badge;
      item.textContent = `${i + 1}. L${entry.loop + 1}${entry.invert ? "⁻¹" : ""}  ${badge}`;
      list.appendChild(item);
    });
    (this.$("run-stack") as HTMLButtonElement).disabled = !this.stack.canRun;
  }

  private async runStack(): Promise<void> {
    const starts = this.baseRoots();
    if (!starts || !this.doc || !this.stack.canRun) return;
    const request = this.stack.buildRequest(this.doc.degree, starts, this.exprs());
    await this.runScenario({ ...request });
  }

  private async runScenario(request: {
    scenario: string;
    [key: string]: unknown;
  }): Promise<void> {
    this.stopStream?.();
    this.playback.reset();
    this.playing = true;
    this.setStatus(`running ${request.scenario}...`);
    const exprs = this.exprs();
    const body = { ...request } as Record<string, unknown>;
    if (request.scenario !== "custom" && exprs.length > 0) body.exprs = exprs;
    try {
      const id = await this.api.submit(body as never);
      this.showBanner(null);
      const doc = await new Promise<TraceDocument>((resolve, reject) => {
        this.stopStream = this.api.stream(id, {
          onFrame: (frame) => this.playback.accept(frame),
          onVerdict: (verdict) => {
            this.api.fetchTrace(id).then(resolve, reject);
            this.applyVerdict(verdict);
          },
          onError: (message) => reject(new Error(message)),
        });
      });
      this.doc = doc;
      this.fitPanes(doc);
      this.setStatus(
        `${doc.scenario}: ${doc.frames.length} frames, permutation ${doc.final_permutation}`,
      );
    } catch (err) {
      const message = (err as Error).message;
      if (message.includes("fetch") || message.includes("network")) {
        this.showBanner("service unreachable - start it with: monodromy serve");
      }
      this.setStatus(`run failed: ${message}`);
    }
  }

  private applyVerdict(verdict: StreamVerdict): void {
    this.$("perm-badge").textContent = verdict.final_permutation;
    this.$("verdict-badge").textContent = verdict.verdict;
    const survey = this.$("survey-badge");
    if (verdict.survey) {
      survey.textContent =
        `branch points: ${verdict.survey.branch_points.length}, ` +
        `group order: ${verdict.survey.group_order}, ` +
        `solvable: ${verdict.survey.solvable}`;
    } else {
      survey.textContent = "";
    }
  }

  private fitPanes(doc: TraceDocument): void {
    for (const pane of this.panes) {
      const pts: Pair[] = [];
      for (const frame of doc.frames) pts.push(...paneValues(frame, pane.kind));
      if (doc.survey && pane.kind === "coeffs") pts.push(...doc.survey.branch_points);
      pane.view = fitView(pane.canvas.width, pane.canvas.height, pts);
    }
  }

  private tick(): void {
    if (this.playing) {
      this.playback.advance(Math.max(1, Math.floor(this.playback.length / 240)));
      if (this.playback.atEnd()) this.playing = false;
    }
    const slider = this.$("cursor") as HTMLInputElement;
    if (this.playback.length > 1) {
      slider.value = String(
        Math.round((1000 * this.playback.cursor) / (this.playback.length - 1)),
      );
    }
    for (const pane of this.panes) this.drawPane(pane);
    requestAnimationFrame(() => this.tick());
  }

  private drawPane(pane: PaneState): void {
    const { ctx, canvas, view } = pane;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    this.drawAxes(pane);
    const frames = this.playback.all as never as import("./types.js").Frame[];
    if (frames.length === 0) return;
    const cursor = this.playback.cursor;
    const seriesCount = paneValues(frames[0], pane.kind).length;
    for (let s = 0; s < seriesCount; s++) {
      const vertices = polylineVertices(frames, pane.kind, s, view, cursor, this.stride);
      if (vertices.length === 0) continue;
      ctx.strokeStyle = seriesColor(s);
      ctx.lineWidth = 1.25;
      ctx.beginPath();
      ctx.moveTo(vertices[0][0], vertices[0][1]);
      for (const [x, y] of vertices.slice(1)) ctx.lineTo(x, y);
      ctx.stroke();
      const head = vertices[vertices.length - 1];
      ctx.fillStyle = seriesColor(s);
      ctx.beginPath();
      ctx.arc(head[0], head[1], 4, 0, 2 * Math.PI);
      ctx.fill();
    }
    if (pane.kind === "roots") this.drawRootsExtras(pane);
    if (pane.kind === "coeffs" && this.doc?.survey) {
      ctx.fillStyle = "#000";
      for (const bp of this.doc.survey.branch_points) {
        const [x, y] = toScreen(view, bp);
        ctx.fillRect(x - 3, y - 3, 6, 6);
      }
    }
  }

  private drawRootsExtras(pane: PaneState): void {
    const { ctx, view } = pane;
    const starts = this.baseRoots();
    if (starts) {
      ctx.fillStyle = "#999";
      starts.forEach((p, i) => {
        const [x, y] = toScreen(view, p);
        ctx.beginPath();
        ctx.arc(x, y, 6, 0, 2 * Math.PI);
        ctx.stroke();
        ctx.fillText(String(i + 1), x + 8, y - 8);
      });
    }
    if (this.recordingPreview.length > 1) {
      ctx.strokeStyle = "#888";
      ctx.setLineDash([4, 3]);
      ctx.beginPath();
      const [x0, y0] = toScreen(view, this.recordingPreview[0]);
      ctx.moveTo(x0, y0);
      for (const p of this.recordingPreview.slice(1)) {
        const [x, y] = toScreen(view, p);
        ctx.lineTo(x, y);
      }
      ctx.stroke();
      ctx.setLineDash([]);
    }
  }

  private drawAxes(pane: PaneState): void {
    const { ctx, view, canvas } = pane;
    ctx.strokeStyle = "#ddd";
    ctx.lineWidth = 1;
    const [ox, oy] = toScreen(view, [0, 0]);
    ctx.beginPath();
    ctx.moveTo(0, oy);
    ctx.lineTo(canvas.width, oy);
    ctx.moveTo(ox, 0);
    ctx.lineTo(ox, canvas.height);
    ctx.stroke();
  }
}

if (typeof document !== "undefined" && document.getElementById("pane-roots")) {
  const explorer = new Explorer();
  void explorer.start();
}
