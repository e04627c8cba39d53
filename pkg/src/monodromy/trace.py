"""Trace documents: the serialized record of one scenario run.

A trace stores the shared t-grid, per-frame roots / coefficients /
formula values / radical-branch values, the final permutation in cycle
notation, closure residuals, and the verdict.  Serialization is plain
JSON with complex numbers as [re, im] pairs; floats round-trip exactly
(shortest decimal form that reproduces the bits), so identical runs
produce byte-identical documents and documents re-read field-for-field
equal.
"""

from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass, field
from typing import Optional, Union

SCHEMA_VERSION = 1


class TraceReadError(ValueError):
    """Malformed or unsupported trace input."""


@dataclass
class Frame:
    """One synchronized sample: everything the panes show at one t."""

    roots: list
    coeffs: list
    expr_values: list
    radicals: list

    def to_json(self) -> dict:
        return {
            "roots": [_c(z) for z in self.roots],
            "coeffs": [_c(z) for z in self.coeffs],
            "expr_values": [_c(z) for z in self.expr_values],
            "radicals": [_c(z) for z in self.radicals],
        }

    @staticmethod
    def from_json(d: dict, where: str) -> "Frame":
        try:
            return Frame(roots=[_unc(v) for v in d["roots"]],
                         coeffs=[_unc(v) for v in d["coeffs"]],
                         expr_values=[_unc(v) for v in d["expr_values"]],
                         radicals=[_unc(v) for v in d["radicals"]])
        except (KeyError, TypeError, IndexError) as exc:
            raise TraceReadError(f"malformed frame at {where}: {exc}") from exc


@dataclass
class SurveyBlock:
    """Branch-point survey results attached to survey traces."""

    branch_points: list
    base_point: complex
    loop_permutations: list
    group_order: int
    solvable: bool

    def to_json(self) -> dict:
        return {
            "branch_points": [_c(z) for z in self.branch_points],
            "base_point": _c(self.base_point),
            "loop_permutations": list(self.loop_permutations),
            "group_order": self.group_order,
            "solvable": self.solvable,
        }

    @staticmethod
    def from_json(d: dict) -> "SurveyBlock":
        try:
            return SurveyBlock(branch_points=[_unc(v) for v in d["branch_points"]],
                               base_point=_unc(d["base_point"]),
                               loop_permutations=[str(s) for s in d["loop_permutations"]],
                               group_order=int(d["group_order"]),
                               solvable=bool(d["solvable"]))
        except (KeyError, TypeError, IndexError) as exc:
            raise TraceReadError(f"malformed survey block: {exc}") from exc


@dataclass
class TraceDocument:
    """Self-describing record of one run; frames align with the t-grid."""

    schema_version: int
    scenario: str
    degree: int
    expressions: list
    t_grid: list
    frames: list
    radical_index: list  # [{"expr": i, "node": id, "index": n}, ...]
    final_permutation: str
    closure_residuals: dict
    verdict: str
    survey: Optional[SurveyBlock] = None
    meta: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.schema_version != SCHEMA_VERSION:
            raise TraceReadError(
                f"unsupported schema_version {self.schema_version}; "
                f"this build reads version {SCHEMA_VERSION}")
        if len(self.frames) != len(self.t_grid):
            raise TraceReadError(
                f"frames ({len(self.frames)}) and t_grid ({len(self.t_grid)}) disagree")
        for j, frame in enumerate(self.frames):
            if len(frame.roots) != self.degree or len(frame.coeffs) != self.degree:
                raise TraceReadError(
                    f"frame {j} must carry exactly {self.degree} roots and coefficients")
            if len(frame.expr_values) != len(self.expressions):
                raise TraceReadError(
                    f"frame {j} carries {len(frame.expr_values)} formula values "
                    f"for {len(self.expressions)} formulas")
            if len(frame.radicals) != len(self.radical_index):
                raise TraceReadError(f"frame {j} radical values disagree with the index")

    def to_json_dict(self) -> dict:
        out = {
            "schema_version": self.schema_version,
            "scenario": self.scenario,
            "degree": self.degree,
            "expressions": list(self.expressions),
            "t_grid": list(self.t_grid),
            "frames": [f.to_json() for f in self.frames],
            "radical_index": [dict(r) for r in self.radical_index],
            "final_permutation": self.final_permutation,
            "closure_residuals": dict(self.closure_residuals),
            "verdict": self.verdict,
            "survey": self.survey.to_json() if self.survey is not None else None,
            "meta": dict(self.meta),
        }
        return out

    def to_json_bytes(self) -> bytes:
        return json.dumps(self.to_json_dict(), indent=1).encode("utf-8")

    @staticmethod
    def from_json_dict(d: dict) -> "TraceDocument":
        if not isinstance(d, dict):
            raise TraceReadError("trace document must be a JSON object")
        if "schema_version" not in d:
            raise TraceReadError("missing schema_version")
        version = d["schema_version"]
        if version != SCHEMA_VERSION:
            raise TraceReadError(
                f"unsupported schema_version {version}; "
                f"this build reads version {SCHEMA_VERSION}")
        try:
            doc = TraceDocument(
                schema_version=int(version),
                scenario=str(d["scenario"]),
                degree=int(d["degree"]),
                expressions=[str(e) for e in d["expressions"]],
                t_grid=[float(t) for t in d["t_grid"]],
                frames=[Frame.from_json(f, f"index {j}")
                        for j, f in enumerate(d["frames"])],
                radical_index=[{"expr": int(r["expr"]), "node": str(r["node"]),
                                "index": int(r["index"])}
                               for r in d["radical_index"]],
                final_permutation=str(d["final_permutation"]),
                closure_residuals={str(k): float(v)
                                   for k, v in d["closure_residuals"].items()},
                verdict=str(d["verdict"]),
                survey=(SurveyBlock.from_json(d["survey"])
                        if d.get("survey") is not None else None),
                meta=dict(d.get("meta", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, TraceReadError):
                raise
            raise TraceReadError(f"malformed trace document: {exc}") from exc
        doc.validate()
        return doc


def _c(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _unc(pair) -> complex:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise TraceReadError(f"expected [re, im], got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


Destination = Union[str, os.PathLike, io.IOBase]


def write_trace(doc: TraceDocument, destination: Destination) -> None:
    """Serialize to a path or text/binary file object."""
    data = doc.to_json_bytes()
    if isinstance(destination, (str, os.PathLike)):
        with open(destination, "wb") as fh:
            fh.write(data)
        return
    if hasattr(destination, "write"):
        try:
            destination.write(data)
        except TypeError:
            destination.write(data.decode("utf-8"))
        return
    raise TypeError(f"cannot write a trace to {type(destination).__name__}")


def read_trace(source: Destination) -> TraceDocument:
    """Read a trace from a path or file object; errors carry locations."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            text = fh.read().decode("utf-8")
    elif hasattr(source, "read"):
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")
    else:
        raise TypeError(f"cannot read a trace from {type(source).__name__}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TraceReadError(
            f"not valid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return TraceDocument.from_json_dict(data)
