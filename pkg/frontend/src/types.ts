// Wire types mirrored from the engine's trace schema (version 1).
// The UI never computes values of its own: everything it draws comes out
// of these records.

export type Pair = [number, number]; // [re, im]

export interface Frame {
  roots: Pair[];
  coeffs: Pair[];
  expr_values: Pair[];
  radicals: Pair[];
}

export interface RadicalRef {
  expr: number;
  node: string;
  index: number;
}

export interface SurveyBlock {
  branch_points: Pair[];
  base_point: Pair;
  loop_permutations: string[];
  group_order: number;
  solvable: boolean;
}

export interface TraceDocument {
  schema_version: number;
  scenario: string;
  degree: number;
  expressions: string[];
  t_grid: number[];
  frames: Frame[];
  radical_index: RadicalRef[];
  final_permutation: string;
  closure_residuals: Record<string, number>;
  verdict: string;
  survey: SurveyBlock | null;
  meta: Record<string, unknown>;
}

export interface ScenarioInfo {
  id: string;
  degree: number;
  description: string;
}

export interface CustomLoop {
  root: number; // 1-based label of the dragged root
  points: Pair[];
  target: number; // 1-based label of the start slot the drag snapped onto
}

export interface StackEntry {
  loop: number; // index into the recorded loops
  invert: boolean;
}

export interface RunRequest {
  scenario: string;
  exprs?: string[];
  depth?: number;
  seed?: number;
  samples?: number;
  tol?: number;
  custom?: {
    degree: number;
    start: Pair[];
    loops: CustomLoop[];
    stack: StackEntry[];
  };
}

export interface StreamedFrame extends Frame {
  index: number;
  t: number;
}

export interface StreamVerdict {
  final_permutation: string;
  verdict: string;
  closure_residuals: Record<string, number>;
  survey: SurveyBlock | null;
}
