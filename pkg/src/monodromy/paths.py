"""Sampled paths in the complex plane and their loop algebra.

A path is a finite, ordered sampling of a continuous curve [0, 1] -> C,
stored as parallel arrays of parameters and values.  Between samples the
curve is taken to be the straight segment joining them, so consumers may
refine any path by linear interpolation.  Samplers guarantee that
consecutive samples are no further apart than a configured maximum step,
which is what makes winding numbers and branch continuation along these
polylines unambiguous.

Loops (closed paths) support concatenation, reversal and the commutator
word b.g.b^-1.g^-1, which is the basic tool for cancelling branch shifts
of radicals while keeping root permutations alive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

DEFAULT_MAX_STEP = 0.05
DEFAULT_CLOSURE_TOL = 1e-9


class PathError(ValueError):
    """Invalid path construction, combination, or query."""


class PolarForm(NamedTuple):
    """Modulus and angle such that r * exp(i*theta) reproduces the source.

    The angle is *not* normalized by consumers that accumulate winding;
    `polar` itself always returns the principal angle in (-pi, pi].
    """

    r: float
    theta: float

    @property
    def degenerate(self) -> bool:
        """True for the zero input, whose angle is a convention."""
        return self.r == 0.0


def polar(z: complex) -> PolarForm:
    """Principal polar form of ``z``; zero maps to (0, 0) by convention."""
    z = complex(z)
    if z == 0:
        return PolarForm(0.0, 0.0)
    return PolarForm(abs(z), math.atan2(z.imag, z.real))


@dataclass(frozen=True)
class ComplexPath:
    """An ordered sampling of a curve in C over the parameter range [0, 1].

    ``t`` is strictly increasing with t[0] == 0 and t[-1] == 1; ``z`` holds
    the corresponding finite complex samples.  Instances are immutable and
    safe to share between threads.
    """

    t: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        t = np.ascontiguousarray(self.t, dtype=float)
        z = np.ascontiguousarray(self.z, dtype=complex)
        if t.ndim != 1 or z.ndim != 1 or len(t) != len(z):
            raise PathError("t and z must be 1-d arrays of equal length")
        if len(t) < 2:
            raise PathError("a path needs at least 2 samples")
        if not np.all(np.isfinite(t)) or not np.all(np.isfinite(z)):
            raise PathError("path samples must be finite")
        if t[0] != 0.0 or t[-1] != 1.0:
            raise PathError(f"parameter range must be [0, 1], got [{t[0]}, {t[-1]}]")
        if not np.all(np.diff(t) > 0):
            raise PathError("parameters must be strictly increasing")
        t.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "z", z)

    def __len__(self) -> int:
        return len(self.t)

    @property
    def start(self) -> complex:
        return complex(self.z[0])

    @property
    def end(self) -> complex:
        return complex(self.z[-1])

    def max_step(self) -> float:
        """Largest modulus of a consecutive-sample difference."""
        return float(np.max(np.abs(np.diff(self.z))))

    def value_at(self, tq: float) -> complex:
        """Value of the polyline at parameter ``tq`` by linear interpolation."""
        re = np.interp(tq, self.t, self.z.real)
        im = np.interp(tq, self.t, self.z.imag)
        return complex(re, im)


def constant_path(z: complex, samples: int = 2) -> ComplexPath:
    """The path that sits at ``z`` for its whole parameter range."""
    if samples < 2:
        raise PathError("min_samples must be >= 2")
    return ComplexPath(np.linspace(0.0, 1.0, samples), np.full(samples, complex(z)))


# ---------------------------------------------------------------------------
# Path specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """Straight segment from ``start`` to ``end`` (zero length allowed)."""

    start: complex
    end: complex

    def length(self) -> float:
        return abs(self.end - self.start)

    def point(self, u: float) -> complex:
        return self.start + (self.end - self.start) * u


@dataclass(frozen=True)
class CircularArc:
    """Arc about ``center`` with ``radius``, swept from ``start_angle``."""

    center: complex
    radius: float
    start_angle: float
    sweep: float

    def __post_init__(self):
        if self.radius <= 0:
            raise PathError("arc radius must be positive")

    def length(self) -> float:
        return abs(self.sweep) * self.radius

    def point(self, u: float) -> complex:
        ang = self.start_angle + self.sweep * u
        return self.center + self.radius * complex(math.cos(ang), math.sin(ang))


@dataclass(frozen=True)
class FullCircle:
    """Closed circle traversed ``winding`` times (sign = orientation)."""

    center: complex
    radius: float
    winding: int = 1
    start_angle: float = 0.0

    def __post_init__(self):
        if self.radius <= 0:
            raise PathError("circle radius must be positive")
        if int(self.winding) != self.winding or self.winding == 0:
            raise PathError("winding must be a non-zero integer")

    @property
    def sweep(self) -> float:
        return 2.0 * math.pi * self.winding

    def length(self) -> float:
        return abs(self.sweep) * self.radius

    def point(self, u: float) -> complex:
        ang = self.start_angle + self.sweep * u
        return self.center + self.radius * complex(math.cos(ang), math.sin(ang))


@dataclass(frozen=True)
class Composite:
    """A chain of sub-specs; adjacent endpoints must coincide."""

    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))

    def length(self) -> float:
        return sum(p.length() for p in self.parts)


PathSpec = Union[Segment, CircularArc, FullCircle, Composite]


def _sample_simple(spec, min_samples: int, max_step: float) -> ComplexPath:
    n = max(min_samples, int(math.ceil(spec.length() / max_step)) + 1)
    u = np.linspace(0.0, 1.0, n)
    z = np.array([spec.point(v) for v in u])
    return ComplexPath(u, z)


def sample(spec: PathSpec, min_samples: int = 2,
           max_step: float = DEFAULT_MAX_STEP) -> ComplexPath:
    """Sample a path spec densely enough for the max-step contract.

    Every returned path has consecutive samples no further apart than
    ``max_step`` in modulus and at least ``min_samples`` samples.  A
    composite whose total length is zero (or which has no parts) is
    rejected as degenerate.
    """
    if min_samples < 2:
        raise PathError("min_samples must be >= 2")
    if max_step <= 0:
        raise PathError("max_step must be positive")
    if isinstance(spec, Composite):
        if not spec.parts or spec.length() == 0.0:
            raise PathError("degenerate composite: zero total length")
        scale = max(1.0, max(abs(p.point(0.0)) for p in spec.parts))
        pieces = []
        for i, part in enumerate(spec.parts):
            if i > 0:
                gap = abs(spec.parts[i - 1].point(1.0) - part.point(0.0))
                if gap > 1e-12 * scale:
                    raise PathError(f"composite is discontinuous at part {i}: gap {gap:g}")
            pieces.append(sample(part, min_samples, max_step))
        out = pieces[0]
        for piece in pieces[1:]:
            out = concat(out, piece, tol=1e-12 * scale)
        return out
    if isinstance(spec, (Segment, CircularArc, FullCircle)):
        return _sample_simple(spec, min_samples, max_step)
    raise PathError(f"unknown path spec {type(spec).__name__}")


# ---------------------------------------------------------------------------
# Loop algebra
# ---------------------------------------------------------------------------

def concat(p: ComplexPath, q: ComplexPath,
           tol: float = DEFAULT_CLOSURE_TOL) -> ComplexPath:
    """Traverse ``p`` then ``q``, reparametrized to [0, 1].

    The endpoint of ``p`` must meet the start of ``q`` within ``tol``.
    The joint keeps p's endpoint sample; parametrization is split in
    proportion to sample counts, not arc length.
    """
    gap = abs(p.end - q.start)
    if gap > tol:
        raise PathError(
            f"cannot concatenate: p ends at {p.end:g}, q starts at {q.start:g} "
            f"(gap {gap:g} exceeds tolerance {tol:g})")
    sp, sq = len(p) - 1, len(q) - 1
    w = sp / (sp + sq)
    t_q = w + (1.0 - w) * q.t[1:]
    t_q[-1] = 1.0
    t = np.concatenate([p.t * w, t_q])
    z = np.concatenate([p.z, q.z[1:]])
    return ComplexPath(t, z)


def reverse(p: ComplexPath) -> ComplexPath:
    """The same samples traversed backwards, reparametrized to [0, 1]."""
    return ComplexPath(np.flip(1.0 - p.t), np.flip(p.z))


def commutator(beta: ComplexPath, gamma: ComplexPath,
               tol: float = DEFAULT_CLOSURE_TOL) -> ComplexPath:
    """The closed path beta . gamma . beta^-1 . gamma^-1.

    Both operands must be loops based at a common point (within ``tol``).
    """
    if not is_closed(beta, tol):
        raise PathError(f"beta is not closed within {tol:g}")
    if not is_closed(gamma, tol):
        raise PathError(f"gamma is not closed within {tol:g}")
    gap = abs(beta.start - gamma.start)
    if gap > tol:
        raise PathError(f"base-point mismatch: {beta.start:g} vs {gamma.start:g} (gap {gap:g})")
    word = concat(beta, gamma, tol)
    word = concat(word, reverse(beta), tol)
    word = concat(word, reverse(gamma), tol)
    return word


def is_closed(p: ComplexPath, tol: float = DEFAULT_CLOSURE_TOL) -> bool:
    """True iff the endpoint returns to the start within ``tol``."""
    if tol <= 0:
        raise PathError("tolerance must be positive")
    return abs(p.end - p.start) <= tol


def closure_gap(p: ComplexPath) -> float:
    """|p(1) - p(0)|, the residual used in closure reports."""
    return abs(p.end - p.start)


def winding_angle(p: ComplexPath, about: complex = 0j) -> float:
    """Accumulated angle (radians) swept about a point not on the path.

    Sums the per-segment angle increments of the polyline, so the result
    is exact for the sampled curve as long as no segment subtends an
    angle of pi or more about the point.
    """
    rel = p.z - complex(about)
    mods = np.abs(rel)
    if np.min(mods) == 0.0:
        raise PathError("winding is undefined for a point on the path")
    return float(np.sum(np.angle(rel[1:] / rel[:-1])))


def winding_number(p: ComplexPath, about: complex = 0j,
                   tol_turns: float = 1e-6) -> int:
    """Integer turn count of a closed path about a point.

    Raises if the accumulated angle is further than ``tol_turns`` from an
    integer number of turns, which would indicate an open path or a
    sampling too coarse for the winding to be trustworthy.
    """
    turns = winding_angle(p, about) / (2.0 * math.pi)
    nearest = round(turns)
    if abs(turns - nearest) >= tol_turns:
        raise PathError(f"winding {turns:g} turns is not within {tol_turns:g} of an integer")
    return int(nearest)
