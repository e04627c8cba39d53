"""Run requests and their execution into trace documents.

This is the single entry point behind both the CLI and the service, so
the two surfaces produce byte-identical documents for identical
requests.  All solver randomness is seeded from the request (default
seed 0) and no volatile data (timestamps, ids) enters a document.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .expressions import parse
from .paths import DEFAULT_CLOSURE_TOL, DEFAULT_MAX_STEP
from .permutations import Permutation, compose
from .polynomials import pairwise_separation
from .scenarios import (
    DEPTH0_CORPUS,
    SCENARIO_IDS,
    MonodromySurvey,
    NoWitnessResult,
    RootMotion,
    ScenarioError,
    ScenarioTrace,
    motion_word,
    run_scenario,
)
from .trace import SCHEMA_VERSION, Frame, SurveyBlock, TraceDocument


class RequestError(ValueError):
    """Invalid run request (unknown scenario, malformed custom spec, ...)."""


@dataclass(frozen=True)
class CustomLoop:
    """A recorded drag of one root; target is the slot it snaps onto."""

    root: int               # 1-based label of the dragged root
    points: tuple           # sampled positions of the drag
    target: int             # 1-based label of the start slot the drag ends on

    @staticmethod
    def from_dict(d: dict, where: str) -> "CustomLoop":
        try:
            root = int(d["root"])
            points = tuple(complex(float(p[0]), float(p[1])) for p in d["points"])
            target = int(d.get("target", root))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise RequestError(f"malformed loop at {where}: {exc}") from exc
        if len(points) < 2:
            raise RequestError(f"loop at {where} needs at least 2 points")
        return CustomLoop(root=root, points=points, target=target)


@dataclass(frozen=True)
class StackEntry:
    loop: int
    invert: bool = False

    @staticmethod
    def from_dict(d: dict, where: str) -> "StackEntry":
        try:
            return StackEntry(loop=int(d["loop"]), invert=bool(d.get("invert", False)))
        except (KeyError, TypeError, ValueError) as exc:
            raise RequestError(f"malformed stack entry at {where}: {exc}") from exc


@dataclass(frozen=True)
class CustomSpec:
    """User-recorded loops plus the composition stack to run."""

    degree: int
    start: tuple
    loops: tuple
    stack: tuple

    @staticmethod
    def from_dict(d: dict) -> "CustomSpec":
        if not isinstance(d, dict):
            raise RequestError("custom spec must be an object")
        try:
            degree = int(d["degree"])
            start = tuple(complex(float(p[0]), float(p[1])) for p in d["start"])
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise RequestError(f"malformed custom spec: {exc}") from exc
        loops = tuple(CustomLoop.from_dict(l, f"loops[{i}]")
                      for i, l in enumerate(d.get("loops", [])))
        stack = tuple(StackEntry.from_dict(s, f"stack[{i}]")
                      for i, s in enumerate(d.get("stack", [])))
        if degree < 2:
            raise RequestError("custom degree must be >= 2")
        if len(start) != degree:
            raise RequestError(f"custom start must list {degree} roots")
        if not loops:
            raise RequestError("custom spec has no recorded loops")
        if not stack:
            raise RequestError("custom stack is empty")
        for i, loop in enumerate(loops):
            if not (1 <= loop.root <= degree) or not (1 <= loop.target <= degree):
                raise RequestError(f"loops[{i}] root/target outside 1..{degree}")
        for i, entry in enumerate(stack):
            if not (0 <= entry.loop < len(loops)):
                raise RequestError(f"stack[{i}] references unknown loop {entry.loop}")
        return CustomSpec(degree=degree, start=start, loops=loops, stack=stack)


@dataclass(frozen=True)
class RunRequest:
    """Everything that determines a run; equal requests give equal bytes."""

    scenario: str
    exprs: Optional[tuple] = None
    depth: Optional[int] = None
    seed: int = 0
    samples: int = 48
    tol: float = DEFAULT_CLOSURE_TOL
    loop_radius_factor: float = 0.25
    custom: Optional[CustomSpec] = None

    _KEYS = ("scenario", "exprs", "depth", "seed", "samples", "tol",
             "loop_radius_factor", "custom")

    @staticmethod
    def from_dict(d: dict) -> "RunRequest":
        if not isinstance(d, dict):
            raise RequestError("run request must be an object")
        unknown = sorted(set(d) - set(RunRequest._KEYS))
        if unknown:
            raise RequestError(f"unknown request fields: {', '.join(unknown)}")
        if "scenario" not in d:
            raise RequestError("request is missing 'scenario'")
        scenario = str(d["scenario"])
        if scenario != "custom" and scenario not in SCENARIO_IDS:
            raise RequestError(f"unknown scenario {scenario!r}; "
                               f"known: {', '.join(SCENARIO_IDS)} or 'custom'")
        exprs = d.get("exprs")
        if exprs is not None:
            if not isinstance(exprs, (list, tuple)) or not all(isinstance(e, str) for e in exprs):
                raise RequestError("'exprs' must be a list of strings")
            exprs = tuple(exprs)
        try:
            req = RunRequest(
                scenario=scenario,
                exprs=exprs,
                depth=None if d.get("depth") is None else int(d["depth"]),
                seed=int(d.get("seed", 0)),
                samples=int(d.get("samples", 48)),
                tol=float(d.get("tol", DEFAULT_CLOSURE_TOL)),
                loop_radius_factor=float(d.get("loop_radius_factor", 0.25)),
                custom=(CustomSpec.from_dict(d["custom"])
                        if d.get("custom") is not None else None),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, RequestError):
                raise
            raise RequestError(f"malformed request: {exc}") from exc
        if req.samples < 2:
            raise RequestError("samples must be >= 2")
        if req.tol <= 0:
            raise RequestError("tol must be positive")
        if scenario == "custom" and req.custom is None:
            raise RequestError("scenario 'custom' requires a custom spec")
        return req


# ---------------------------------------------------------------------------
# Custom loops -> motions
# ---------------------------------------------------------------------------

def _resample_polyline(points: Sequence[complex], max_step: float) -> list:
    """Subdivide long polyline segments so steps respect the max-step rule."""
    out = [complex(points[0])]
    for nxt in points[1:]:
        nxt = complex(nxt)
        prev = out[-1]
        gap = abs(nxt - prev)
        pieces = max(1, int(math.ceil(gap / max_step)))
        for i in range(1, pieces + 1):
            out.append(prev + (nxt - prev) * (i / pieces))
        out[-1] = nxt
    return out


def _loop_motion(spec: CustomSpec, loop: CustomLoop, *,
                 max_step: float, floor: float) -> RootMotion:
    """One recorded drag as a labelled motion, completing a landed swap.

    A drag ending on its own start slot moves the dragged root alone; a
    drag landing on another root's slot is completed by carrying the
    displaced root to the vacated slot (straight, or via an outward
    waypoint when the straight path collides).
    """
    start = np.array(spec.start)
    n = spec.degree
    r = loop.root - 1
    g = loop.target - 1
    sep = pairwise_separation(start)
    snap_radius = 0.25 * sep
    if abs(loop.points[0] - start[r]) > snap_radius:
        raise RequestError(
            f"loop for root {loop.root} does not start at that root "
            f"(off by {abs(loop.points[0] - start[r]):g})")
    if abs(loop.points[-1] - start[g]) > snap_radius:
        raise RequestError(
            f"loop for root {loop.root} does not end at root {loop.target}'s slot "
            f"(off by {abs(loop.points[-1] - start[g]):g})")
    drag = _resample_polyline(list(loop.points), max_step)
    drag[0] = complex(start[r])
    drag[-1] = complex(start[g])
    m = len(drag)
    t = np.linspace(0.0, 1.0, m)

    if g == r:
        pts = np.repeat(start[None, :], m, axis=0)
        pts[:, r] = drag
        return RootMotion(t, pts, Permutation.identity(n))

    sigma = Permutation.from_cycles(n, [(loop.root, loop.target)])
    centroid = complex(np.mean(start))
    candidates = [None, 1.0, -1.0, 1.8, -1.8]
    for bulge in candidates:
        if bulge is None:
            comp = [start[g] + (start[r] - start[g]) * (j / (m - 1)) for j in range(m)]
        else:
            mid = 0.5 * (start[g] + start[r])
            direction = mid - centroid
            unit = (direction / abs(direction) if abs(direction) > 1e-12
                    else complex(0.0, 1.0))
            way = mid + unit * bulge * max(abs(start[r] - mid), sep)
            comp = []
            for j in range(m):
                u = j / (m - 1)
                if u <= 0.5:
                    comp.append(start[g] + (way - start[g]) * (u / 0.5))
                else:
                    comp.append(way + (start[r] - way) * ((u - 0.5) / 0.5))
        comp[0] = complex(start[g])
        comp[-1] = complex(start[r])
        pts = np.repeat(start[None, :], m, axis=0)
        pts[:, r] = drag
        pts[:, g] = comp
        if min(pairwise_separation(row) for row in pts) > floor:
            return RootMotion(t, pts, sigma)
    raise RequestError(
        f"cannot complete the swap of roots {loop.root} and {loop.target} "
        f"without a collision; record a wider loop")


def _custom_trace(req: RunRequest) -> ScenarioTrace:
    from .scenarios import _assemble  # shared assembly, one grid for all parts

    spec = req.custom
    scale = max(1.0, max(abs(z) for z in spec.start))
    if pairwise_separation(spec.start) <= 1e-3 * scale:
        raise RequestError("custom start roots are too close together")
    max_step = DEFAULT_MAX_STEP * scale
    floor = 1e-6 * scale
    motions = [_loop_motion(spec, loop, max_step=max_step, floor=floor)
               for loop in spec.loops]
    word = []
    for entry in spec.stack:
        m = motions[entry.loop]
        word.append(m.inverse() if entry.invert else m)
    motion = motion_word(word)
    exprs = req.exprs if req.exprs is not None else DEPTH0_CORPUS
    expressions = [parse(e, degree=spec.degree) for e in exprs]
    meta = {"seed": req.seed, "samples": req.samples, "tol": req.tol,
            "stack": [{"loop": e.loop, "invert": e.invert} for e in spec.stack]}
    return _assemble("custom", motion, expressions, motion.sigma,
                     closure_tol=req.tol,
                     expr_closure_tol=1e-6,
                     separation_floor=floor, meta=meta)


# ---------------------------------------------------------------------------
# Results -> documents
# ---------------------------------------------------------------------------

def _scenario_document(trace: ScenarioTrace, req: RunRequest) -> TraceDocument:
    exprs = [expr.text for expr, _ in trace.expression_tracks]
    radical_index = []
    for i, (expr, _) in enumerate(trace.expression_tracks):
        for rad in expr.radicals():
            radical_index.append({"expr": i, "node": rad.node_id, "index": rad.index})
    frames = []
    m = len(trace.t)
    for j in range(m):
        frames.append(Frame(
            roots=[complex(z) for z in trace.root_track.points[j]],
            coeffs=[complex(c[j]) for c in trace.coeff_path.coeffs],
            expr_values=[complex(et.value_path.z[j])
                         for _, et in trace.expression_tracks],
            radicals=[complex(trace.expression_tracks[r["expr"]][1]
                              .radical_values[r["node"]][j])
                      for r in radical_index],
        ))
    residuals = {}
    for k, gap in enumerate(trace.coeff_path.closure_gaps()):
        residuals[f"coeff[{k}]"] = gap
    for i, (_, et) in enumerate(trace.expression_tracks):
        residuals[f"expr[{i}]"] = et.value_gap
    perm = trace.verdict.roots_permutation
    end = trace.root_track.points[-1]
    residuals["roots"] = max(
        abs(complex(end[i]) - trace.base_roots[perm(i + 1) - 1])
        for i in range(trace.degree))
    meta = dict(trace.meta)
    meta.update({"seed": req.seed, "samples": req.samples, "tol": req.tol})
    return TraceDocument(
        schema_version=SCHEMA_VERSION,
        scenario=trace.scenario,
        degree=trace.degree,
        expressions=exprs,
        t_grid=[float(t) for t in trace.t],
        frames=frames,
        radical_index=radical_index,
        final_permutation=perm.cycle_string(),
        closure_residuals=residuals,
        verdict=trace.verdict.conclusion,
        survey=None,
        meta=meta,
    )


def _survey_document(survey: MonodromySurvey, req: RunRequest) -> TraceDocument:
    base = list(survey.base_roots)
    n = len(base)
    composed = Permutation.identity(n)
    t_parts = []
    root_rows = []
    coeff_rows = []
    total_segments = sum(len(tr.t) - 1 for tr in survey.loop_tracks)
    offset_segments = 0
    for track, cpath in zip(survey.loop_tracks, survey.coeff_paths):
        relabeled = np.empty_like(track.points)
        for i in range(n):
            relabeled[:, i] = track.points[:, composed(i + 1) - 1]
        cpath_fine = cpath.resampled(track.t)
        segs = len(track.t) - 1
        local = (offset_segments + (track.t - track.t[0])
                 / (track.t[-1] - track.t[0]) * segs) / total_segments
        skip = 1 if root_rows else 0
        t_parts.append(local[skip:])
        root_rows.append(relabeled[skip:])
        coeff_rows.append(np.stack([c[skip:] for c in cpath_fine.coeffs], axis=1))
        offset_segments += segs
        composed = compose(track.induced_permutation, composed)
    t_grid = np.concatenate(t_parts)
    t_grid[0] = 0.0
    t_grid[-1] = 1.0
    roots = np.concatenate(root_rows)
    coeffs = np.concatenate(coeff_rows)
    frames = [Frame(roots=[complex(z) for z in roots[j]],
                    coeffs=[complex(z) for z in coeffs[j]],
                    expr_values=[], radicals=[])
              for j in range(len(t_grid))]
    residuals = {}
    for k in range(coeffs.shape[1]):
        residuals[f"coeff[{k}]"] = max(
            float(abs(c.coeffs[k][-1] - c.coeffs[k][0])) for c in survey.coeff_paths)
    residuals["roots"] = max(
        abs(complex(roots[-1][i]) - base[composed(i + 1) - 1]) for i in range(n))
    meta = {"seed": req.seed, "samples": req.samples, "tol": req.tol,
            "loop_radius_factor": req.loop_radius_factor,
            "group_order": survey.group_order, "solvable": survey.solvable}
    return TraceDocument(
        schema_version=SCHEMA_VERSION,
        scenario=survey.family,
        degree=n,
        expressions=[],
        t_grid=[float(t) for t in t_grid],
        frames=frames,
        radical_index=[],
        final_permutation=composed.cycle_string(),
        closure_residuals=residuals,
        verdict="monodromy-survey",
        survey=SurveyBlock(
            branch_points=list(survey.branch_points),
            base_point=survey.base_point,
            loop_permutations=[p.cycle_string() for p in survey.loop_generators],
            group_order=survey.group_order,
            solvable=survey.solvable,
        ),
        meta=meta,
    )


def _no_witness_document(result: NoWitnessResult, req: RunRequest) -> TraceDocument:
    meta = {"seed": req.seed, "samples": req.samples, "tol": req.tol,
            "depth": result.depth,
            "derived_orders": list(result.derived_orders)}
    return TraceDocument(
        schema_version=SCHEMA_VERSION,
        scenario=result.scenario,
        degree=result.degree,
        expressions=[],
        t_grid=[],
        frames=[],
        radical_index=[],
        final_permutation="()",
        closure_residuals={},
        verdict="no-witness",
        survey=None,
        meta=meta,
    )


def run_request(req: RunRequest) -> TraceDocument:
    """Execute a request and build its (deterministic) trace document."""
    if req.scenario == "custom":
        trace = _custom_trace(req)
        return _scenario_document(trace, req)
    result = run_scenario(req.scenario, exprs=req.exprs, depth=req.depth,
                          seed=req.seed, samples=req.samples,
                          closure_tol=req.tol,
                          loop_radius_factor=req.loop_radius_factor)
    if isinstance(result, ScenarioTrace):
        return _scenario_document(result, req)
    if isinstance(result, MonodromySurvey):
        return _survey_document(result, req)
    if isinstance(result, NoWitnessResult):
        return _no_witness_document(result, req)
    raise ScenarioError(f"unhandled scenario result {type(result).__name__}")
