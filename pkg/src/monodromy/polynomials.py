"""Monic polynomials, root/coefficient maps, and root continuation.

The root -> coefficient direction is the signed elementary-symmetric map;
the reverse direction is an all-roots solver by simultaneous iteration.
`track_roots` follows a full labelled root configuration continuously
along a path in coefficient space, which is where loop monodromy is
actually read off: a closed coefficient loop returns the root *set* to
itself while possibly permuting the labels.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .paths import (
    DEFAULT_CLOSURE_TOL,
    ComplexPath,
    closure_gap,
    is_closed,
)
from .permutations import Permutation

RootSet = tuple


class RootSolveError(RuntimeError):
    """All-roots iteration failed to converge; carries the best iterate."""

    def __init__(self, message: str, best: tuple):
        super().__init__(message)
        self.best = best


class TrackingError(RuntimeError):
    """Root continuation failed; carries the parameter where it did."""

    def __init__(self, message: str, t: float, pair: Optional[tuple] = None):
        super().__init__(message)
        self.t = t
        self.pair = pair


class MatchError(ValueError):
    """Label matching between two root sets is impossible or ambiguous."""


@dataclass(frozen=True)
class MonicPolynomial:
    """z^n + a_{n-1} z^{n-1} + ... + a_0 stored as (a_0, ..., a_{n-1})."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coeffs)
        if len(coeffs) < 1:
            raise ValueError("degree must be >= 1")
        if any(not (math.isfinite(c.real) and math.isfinite(c.imag)) for c in coeffs):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def __call__(self, z: complex) -> complex:
        acc = 1 + 0j
        for k in range(self.degree - 1, -1, -1):
            acc = acc * z + self.coeffs[k]
        return acc

    def eval_with_derivative(self, z: complex) -> tuple:
        """(p(z), p'(z)) in a single Horner pass."""
        p = 1 + 0j
        dp = 0j
        for k in range(self.degree - 1, -1, -1):
            dp = dp * z + p
            p = p * z + self.coeffs[k]
        return p, dp

    def scale(self) -> float:
        """Coefficient magnitude scale used for relative tolerances."""
        return max(1.0, max(abs(c) for c in self.coeffs))


def vieta(roots: Sequence[complex]) -> MonicPolynomial:
    """Monic polynomial whose roots are the given points.

    Coefficients are the signed elementary symmetric functions,
    a_{n-k} = (-1)^k e_k(roots).  Roots are put into a canonical order
    before expansion so that permuting the input leaves every
    coefficient bit-for-bit unchanged.
    """
    rs = sorted((complex(r) for r in roots), key=lambda w: (w.real, w.imag))
    if not rs:
        raise ValueError("need at least one root")
    full = [1 + 0j]
    for r in rs:
        full = ([full[0]]
                + [full[k] - r * full[k - 1] for k in range(1, len(full))]
                + [-r * full[-1]])
    return MonicPolynomial(tuple(reversed(full[1:])))


def all_roots(p: MonicPolynomial, *, seed: int = 0, max_iter: int = 1000,
              tol: float = 1e-10) -> RootSet:
    """All roots of ``p`` (with multiplicity) by simultaneous iteration.

    Starts from perturbed points on a circle bounding the roots and
    applies the Aberth correction until max |p(z_i)| falls below
    ``tol * p.scale()``.  The perturbation is seeded, so results are
    reproducible; output is sorted canonically by (re, im).
    """
    n = p.degree
    if n == 1:
        return (-p.coeffs[0],)
    target = tol * p.scale()
    radius = 1.0 + max(abs(c) for c in p.coeffs)
    rng = np.random.default_rng(seed)
    jitter = 1e-3 * (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n))
    z = [radius * cmath.exp(2j * math.pi * (k + 0.25) / n) * (1 + jitter[k])
         for k in range(n)]

    best = list(z)
    best_res = math.inf
    for _ in range(max_iter):
        vals = [p.eval_with_derivative(zk) for zk in z]
        res = max(abs(v[0]) for v in vals)
        if res < best_res:
            best_res = res
            best = list(z)
        if res <= target:
            break
        moved = 0.0
        for i in range(n):
            pi, dpi = vals[i]
            if pi == 0:
                continue
            if dpi == 0:
                z[i] += target + 1e-12 * radius
                continue
            w = pi / dpi
            s = 0j
            for j in range(n):
                if j != i:
                    d = z[i] - z[j]
                    if d == 0:
                        d = 1e-14 * radius * (1 + 1j)
                    s += 1.0 / d
            denom = 1.0 - w * s
            step = w if denom == 0 else w / denom
            z[i] -= step
            moved = max(moved, abs(step))
        if moved <= 1e-16 * radius:
            vals = [p(zk) for zk in z]
            res = max(abs(v) for v in vals)
            if res < best_res:
                best_res = res
                best = list(z)
            break
    if best_res > target:
        raise RootSolveError(
            f"all-roots iteration stalled at residual {best_res:g} "
            f"(target {target:g}) after {max_iter} iterations",
            tuple(best))
    return tuple(sorted(best, key=lambda w: (w.real, w.imag)))


# ---------------------------------------------------------------------------
# Coefficient paths and continuation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoefficientPath:
    """One sampled path per coefficient a_k, all on a shared t-grid."""

    t: np.ndarray
    coeffs: tuple

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        coeffs = tuple(np.asarray(c, dtype=complex) for c in self.coeffs)
        if len(coeffs) < 1:
            raise ValueError("need at least one coefficient component")
        for c in coeffs:
            if c.shape != t.shape:
                raise ValueError("all coefficient components must share the t-grid")
        t.setflags(write=False)
        for c in coeffs:
            c.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def __len__(self) -> int:
        return len(self.t)

    @staticmethod
    def from_paths(paths: Sequence[ComplexPath]) -> "CoefficientPath":
        paths = list(paths)
        if not paths:
            raise ValueError("need at least one component path")
        t = paths[0].t
        for p in paths[1:]:
            if not np.array_equal(p.t, t):
                raise ValueError("component paths have mismatched t-grids")
        return CoefficientPath(t, tuple(p.z for p in paths))

    def component_paths(self) -> tuple:
        return tuple(ComplexPath(self.t, c) for c in self.coeffs)

    def polynomial_at(self, index: int) -> MonicPolynomial:
        return MonicPolynomial(tuple(c[index] for c in self.coeffs))

    def values_between(self, index: int, frac: float) -> tuple:
        """Coefficients linearly interpolated between samples index, index+1."""
        return tuple((1.0 - frac) * c[index] + frac * c[index + 1] for c in self.coeffs)

    def resampled(self, new_t: np.ndarray) -> "CoefficientPath":
        """The same polyline re-sampled on a grid, by linear interpolation."""
        new_t = np.asarray(new_t, dtype=float)
        comps = []
        for c in self.coeffs:
            re = np.interp(new_t, self.t, c.real)
            im = np.interp(new_t, self.t, c.imag)
            comps.append(re + 1j * im)
        return CoefficientPath(new_t, tuple(comps))

    def closure_gaps(self) -> list:
        return [abs(complex(c[-1] - c[0])) for c in self.coeffs]

    def is_closed_all(self, tol: float = DEFAULT_CLOSURE_TOL) -> bool:
        return all(g <= tol for g in self.closure_gaps())

    def scale(self) -> float:
        return max(1.0, max(float(np.max(np.abs(c))) for c in self.coeffs))


def root_motion_to_coeffs(root_paths: Sequence[ComplexPath]) -> CoefficientPath:
    """Pointwise signed elementary-symmetric map of a labelled root motion.

    All component paths must share a t-grid.  A motion that ends in a
    permutation of its start yields a closed path in every coefficient,
    because the coefficients are symmetric in the roots.
    """
    root_paths = list(root_paths)
    if not root_paths:
        raise ValueError("need at least one root path")
    t = root_paths[0].t
    for p in root_paths[1:]:
        if not np.array_equal(p.t, t):
            raise ValueError("root paths have mismatched t-grids")
    m = len(t)
    n = len(root_paths)
    comps = [np.empty(m, dtype=complex) for _ in range(n)]
    for j in range(m):
        poly = vieta([p.z[j] for p in root_paths])
        for k in range(n):
            comps[k][j] = poly.coeffs[k]
    return CoefficientPath(t, tuple(comps))


def pairwise_separation(points: Sequence[complex]) -> float:
    """Minimum pairwise distance of a configuration."""
    pts = list(points)
    best = math.inf
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            best = min(best, abs(pts[i] - pts[j]))
    return best


def match_permutation(start: Sequence[complex], end: Sequence[complex],
                      tol: float) -> Permutation:
    """Label matching by nearest neighbour: end_i lands on start_{pi(i)}.

    Both configurations must be pairwise separated by more than 2*tol,
    every end point must sit within ``tol`` of exactly one start point,
    and the resulting assignment must be a bijection.
    """
    start = [complex(z) for z in start]
    end = [complex(z) for z in end]
    if len(start) != len(end):
        raise MatchError("configurations differ in size")
    if tol <= 0:
        raise MatchError("tolerance must be positive")
    for name, pts in (("start", start), ("end", end)):
        if len(pts) > 1 and pairwise_separation(pts) <= 2 * tol:
            raise MatchError(f"{name} configuration is not separated by more than 2*tol")
    images = []
    for i, e in enumerate(end):
        dists = sorted((abs(e - s), j) for j, s in enumerate(start))
        d0, j0 = dists[0]
        if d0 > tol:
            raise MatchError(f"end point {i + 1} has no start point within {tol:g} "
                             f"(nearest is {d0:g} away)")
        if len(dists) > 1 and dists[1][0] <= tol:
            raise MatchError(f"end point {i + 1} matches two start points within {tol:g}")
        images.append(j0 + 1)
    if len(set(images)) != len(images):
        raise MatchError("matching is not a bijection")
    return Permutation(tuple(images))


@dataclass(frozen=True)
class RootTrack:
    """Continuously tracked root configuration along a coefficient path.

    ``points[j, i]`` is the position of the root with start label ``i+1``
    at grid parameter ``t[j]``.  The permutation is populated only when
    the coefficient path is closed.
    """

    t: np.ndarray
    points: np.ndarray
    induced_permutation: Optional[Permutation]
    residual: float

    def paths(self) -> tuple:
        return tuple(ComplexPath(self.t, self.points[:, i])
                     for i in range(self.points.shape[1]))

    @property
    def start(self) -> RootSet:
        return tuple(self.points[0])

    @property
    def end(self) -> RootSet:
        return tuple(self.points[-1])


def _newton_all(poly: MonicPolynomial, guesses: Sequence[complex],
                tol: float, cap: int) -> Optional[list]:
    """Newton-correct every root guess; None when any fails to converge."""
    out = []
    for g in guesses:
        x = g
        ok = False
        for _ in range(cap):
            p, dp = poly.eval_with_derivative(x)
            if abs(p) <= tol:
                ok = True
                break
            if dp == 0:
                break
            x = x - p / dp
        else:
            p, _ = poly.eval_with_derivative(x)
            ok = abs(p) <= tol
        if not ok:
            return None
        out.append(x)
    return out


def track_roots(cpath: CoefficientPath, start: Sequence[complex], *,
                residual_tol: Optional[float] = None,
                separation_floor: Optional[float] = None,
                newton_cap: int = 10,
                closure_tol: float = DEFAULT_CLOSURE_TOL,
                min_dt: float = 1e-12) -> RootTrack:
    """Follow a labelled root configuration along a coefficient path.

    Predictor: the previous configuration.  Corrector: per-root Newton
    iteration on the polynomial at the target parameter.  A step is
    accepted only when every root converges within ``newton_cap``
    iterations and no root moves further than half the current minimum
    pairwise separation; otherwise the parameter step is bisected.  Two
    tracked roots approaching within the separation floor abort the
    track, as do parameter steps below ``min_dt``.
    """
    start = [complex(z) for z in start]
    n = cpath.degree
    if len(start) != n:
        raise ValueError(f"start labelling has {len(start)} roots for degree {n}")
    scale = cpath.scale()
    if residual_tol is None:
        residual_tol = 1e-9 * scale
    if separation_floor is None:
        separation_floor = 1e-6 * max(1.0, max(abs(z) for z in start))

    poly0 = cpath.polynomial_at(0)
    res0 = max(abs(poly0(z)) for z in start)
    if res0 > residual_tol:
        raise ValueError(f"start labelling has residual {res0:g} at t=0 "
                         f"(tolerance {residual_tol:g})")
    if pairwise_separation(start) <= separation_floor and n > 1:
        raise ValueError("start roots are closer than the separation floor")

    out_t = [float(cpath.t[0])]
    out_pts = [list(start)]
    current = list(start)
    residual = res0

    for j in range(len(cpath) - 1):
        t_lo, t_hi = float(cpath.t[j]), float(cpath.t[j + 1])
        cur_t = t_lo
        pending = [t_hi]
        while pending:
            target = pending[-1]
            if target == t_hi:
                poly = cpath.polynomial_at(j + 1)
            else:
                frac = (target - t_lo) / (t_hi - t_lo)
                poly = MonicPolynomial(cpath.values_between(j, frac))
            min_sep = pairwise_separation(current) if n > 1 else math.inf
            corrected = _newton_all(poly, current, residual_tol, newton_cap)
            moved = (max(abs(c - g) for c, g in zip(corrected, current))
                     if corrected is not None else math.inf)
            if corrected is not None and moved <= 0.5 * min_sep:
                if n > 1:
                    sep = pairwise_separation(corrected)
                    if sep <= separation_floor:
                        pair = min(
                            ((abs(corrected[a] - corrected[b]), (a + 1, b + 1))
                             for a in range(n) for b in range(a + 1, n)),
                            key=lambda item: item[0])[1]
                        raise TrackingError(
                            f"roots {pair[0]} and {pair[1]} collide at t={target:g} "
                            f"(separation <= floor {separation_floor:g})",
                            t=target, pair=pair)
                current = corrected
                cur_t = target
                pending.pop()
                out_t.append(target)
                out_pts.append(list(current))
                residual = max(residual, max(abs(poly(z)) for z in current))
            else:
                if target - cur_t < min_dt:
                    raise TrackingError(
                        f"step size underflow at t={cur_t:g}", t=cur_t)
                pending.append(0.5 * (cur_t + target))

    t_arr = np.array(out_t)
    pts = np.array(out_pts)
    induced = None
    if cpath.is_closed_all(closure_tol):
        match_tol = 0.25 * pairwise_separation(start) if n > 1 else 1e-6
        induced = match_permutation(start, list(pts[-1]), match_tol)
    return RootTrack(t=t_arr, points=pts, induced_permutation=induced,
                     residual=float(residual))
