"""End-to-end loop demonstrations over polynomial coefficient space.

Each scenario constructs a closed root motion (a loop in configuration
space), pushes it through the signed elementary-symmetric map to get a
closed coefficient loop, re-tracks the roots along that loop, tracks a
bundle of candidate formulas with radical branch state, and issues a
falsification verdict: a formula whose trace closes over a loop that
non-trivially permutes the roots cannot compute the roots.

Loop words here are traversed rightmost-first.  Tracking a concatenation
applies the segment permutations in traversal order with the earliest
acting first, while the group convention composes rightmost-first; the
reversed traversal makes the two agree, so the commutator word of two
motions induces exactly ``commutator_perm`` of their permutations.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .expressions import (
    DEFAULT_EXPR_CLOSURE_TOL,
    Expression,
    parse,
    track_expression,
)
from .paths import (
    DEFAULT_CLOSURE_TOL,
    DEFAULT_MAX_STEP,
    ComplexPath,
    FullCircle,
    Segment,
    concat,
    reverse,
    sample,
)
from .permutations import (
    Permutation,
    commutator_perm,
    compose,
    derived_series,
    find_nested_commutator_witness,
    generate,
    is_solvable,
    nested_commutator,
)
from .polynomials import (
    CoefficientPath,
    MonicPolynomial,
    RootTrack,
    all_roots,
    pairwise_separation,
    root_motion_to_coeffs,
    track_roots,
)

VERDICT_FALSIFIED = "formula-cannot-trace-roots"
VERDICT_INCONCLUSIVE = "inconclusive"
VERDICT_TRACKS = "formula-tracks-roots"

SCENARIO_IDS = (
    "quadratic-swap",
    "cubic-commutator",
    "quartic-nested",
    "quintic-commutator",
    "quintic-arnold",
    "eq1-monodromy",
)


class ScenarioError(RuntimeError):
    """Scenario construction failed (collisions, singular tracks, ...)."""


# ---------------------------------------------------------------------------
# Root motions: labelled configuration paths with exact endpoints
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootMotion:
    """A labelled motion of n points with an exact endpoint permutation.

    ``points[j, i]`` is the position of the point labelled ``i+1`` at
    parameter ``t[j]``; the motion ends with label i sitting exactly on
    the start position of label ``sigma(i)``.
    """

    t: np.ndarray
    points: np.ndarray
    sigma: Permutation

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        pts = np.asarray(self.points, dtype=complex)
        if pts.shape != (len(t), self.sigma.n):
            raise ScenarioError("motion shape does not match grid and letter count")
        t.setflags(write=False)
        pts.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.sigma.n

    @property
    def base(self) -> tuple:
        return tuple(complex(z) for z in self.points[0])

    def paths(self) -> tuple:
        return tuple(ComplexPath(self.t, self.points[:, i]) for i in range(self.n))

    def inverse(self) -> "RootMotion":
        """The reversed motion; its endpoint permutation is sigma^-1."""
        inv = self.sigma.inverse()
        pts = np.empty_like(self.points)
        rev = self.points[::-1]
        for j in range(self.n):
            pts[:, j] = rev[:, inv(j + 1) - 1]
        return RootMotion(np.flip(1.0 - self.t), pts, inv)

    def then(self, other: "RootMotion") -> "RootMotion":
        """Traverse self, then other (both based at the same configuration)."""
        if other.n != self.n:
            raise ScenarioError("motions act on different point counts")
        if not np.allclose(other.points[0], self.points[0], atol=1e-12):
            raise ScenarioError("motions are not based at the same configuration")
        relabel = np.empty_like(other.points)
        for i in range(self.n):
            relabel[:, i] = other.points[:, self.sigma(i + 1) - 1]
        sp, sq = len(self.t) - 1, len(other.t) - 1
        w = sp / (sp + sq)
        t_q = w + (1.0 - w) * other.t[1:]
        t_q[-1] = 1.0
        t = np.concatenate([self.t * w, t_q])
        pts = np.concatenate([self.points, relabel[1:]])
        return RootMotion(t, pts, compose(other.sigma, self.sigma))


def motion_word(motions: Sequence[RootMotion]) -> RootMotion:
    """Concatenate motions in traversal order."""
    motions = list(motions)
    if not motions:
        raise ScenarioError("empty motion word")
    out = motions[0]
    for m in motions[1:]:
        out = out.then(m)
    return out


def motion_commutator(m: RootMotion, g: RootMotion) -> RootMotion:
    """The loop whose tracked permutation is commutator_perm(m.sigma, g.sigma).

    Traversal order is g^-1, m^-1, g, m (rightmost-first reading of the
    commutator word), which is what aligns path words with the group's
    right-factor-first composition convention.
    """
    return motion_word([g.inverse(), m.inverse(), g, m])


def nested_motion_commutator(leaves: Sequence[RootMotion]) -> RootMotion:
    """Balanced iterated commutator of 2**d leaf motions."""
    leaves = list(leaves)
    k = len(leaves)
    if k == 0 or k & (k - 1):
        raise ScenarioError(f"need a power-of-two leaf count, got {k}")
    if k == 1:
        return leaves[0]
    half = k // 2
    return motion_commutator(nested_motion_commutator(leaves[:half]),
                             nested_motion_commutator(leaves[half:]))


def _slot_orientation(angles: Sequence[float], k: int) -> tuple:
    """Rotation orientation and slot phase minimizing gather travel.

    Slots sit at phi0 + orient * 2*pi*j/k; for each orientation the best
    phase is the circular mean of the per-point offsets, and the cheaper
    orientation wins (ties go counterclockwise).
    """
    best = None
    for orient in (1, -1):
        offsets = [a - orient * 2 * math.pi * j / k for j, a in enumerate(angles)]
        mean = cmath.phase(sum(cmath.exp(1j * o) for o in offsets))
        cost = 0.0
        for o in offsets:
            d = (o - mean) % (2 * math.pi)
            cost += min(d, 2 * math.pi - d)
        if best is None or cost < best[0] - 1e-12:
            best = (cost, orient, mean)
    return best[1], best[2]


def _phase_rows(configs_from: np.ndarray, configs_to: np.ndarray,
                samples: int) -> np.ndarray:
    """Straight-line rows between two configurations.

    Written as a + (b-a)*u so unmoved points stay bitwise constant; the
    final row is snapped to the exact target configuration.
    """
    u = np.linspace(0.0, 1.0, samples)[1:, None]
    rows = configs_from[None, :] + (configs_to - configs_from)[None, :] * u
    rows[-1] = configs_to
    return rows


def _slot_units(sigma: Permutation, base: np.ndarray) -> list:
    """Decompose a permutation into safely stageable slot cycles.

    A cycle whose points already sit in circular order about their
    centroid (small gather cost for either orientation) is staged whole;
    otherwise it is replaced by the equivalent sequence of pairwise
    swaps (c1 c2), (c1 c3), ..., which stage cleanly because any two
    points are antipodal about their midpoint.  Units act on slots, so
    each starts and ends on the base configuration.
    """
    units = []
    for cycle in sigma.cycles():
        k = len(cycle)
        if k == 2:
            units.append(cycle)
            continue
        pts = [base[c - 1] for c in cycle]
        mu = sum(pts) / k
        angles = [math.atan2((p - mu).imag, (p - mu).real) if p != mu else 0.0
                  for p in pts]
        cost, _, _ = _best_slot_orientation(angles, k)
        if cost < math.pi / 2:
            units.append(cycle)
        else:
            units.extend((cycle[0], cycle[j]) for j in range(1, k))
    return units


def _best_slot_orientation(angles: Sequence[float], k: int) -> tuple:
    best = None
    for orient in (1, -1):
        offsets = [a - orient * 2 * math.pi * j / k for j, a in enumerate(angles)]
        mean = cmath.phase(sum(cmath.exp(1j * o) for o in offsets))
        cost = 0.0
        for o in offsets:
            d = (o - mean) % (2 * math.pi)
            cost += min(d, 2 * math.pi - d)
        if best is None or cost < best[0] - 1e-12:
            best = (cost, orient, mean)
    return best


def realize_permutation(roots: Sequence[complex], sigma: Permutation, *,
                        samples: int = 48,
                        max_step: float = DEFAULT_MAX_STEP,
                        separation_floor: Optional[float] = None,
                        retries: int = 4) -> RootMotion:
    """A collision-free motion carrying each root i to position sigma(i).

    Cycles are realized one slot-cycle at a time: the cycle's points are
    gathered onto a circle about their centroid, rotated rigidly by one
    slot, and scattered onto their exact targets; cycles that would
    gather across each other are decomposed into pairwise swaps first.
    Bystanders sitting near a rotation circle are nudged radially
    outward and restored after.  On collision the construction retries
    with a larger circle (and shifted staging) before giving up.
    """
    base = np.array([complex(z) for z in roots])
    n = len(base)
    if sigma.n != n:
        raise ScenarioError(f"permutation acts on {sigma.n} letters, got {n} roots")
    scale = max(1.0, float(np.max(np.abs(base)))) if n else 1.0
    if separation_floor is None:
        separation_floor = 1e-6 * scale
    if n > 1 and pairwise_separation(base) <= 2 * separation_floor:
        raise ScenarioError("roots are not separated enough to move")

    if sigma.is_identity():
        pts = np.vstack([base, base])
        return RootMotion(np.array([0.0, 1.0]), pts, sigma)

    units = _slot_units(sigma, base)

    def phase_samples(dist: float) -> int:
        return max(samples, int(math.ceil(dist / max_step)) + 1)

    last_error = "collision in constructed motion"
    for attempt in range(retries):
        grow = 1.0 + 0.35 * attempt
        blocks = [base.copy()[None, :]]
        config = base.copy()

        def do_phase(target_config):
            nonlocal config
            dist = float(np.max(np.abs(target_config - config)))
            # sub-rounding moves carry no geometry; just adopt the target
            if dist < 1e-14:
                config = target_config.copy()
                return
            blocks.append(_phase_rows(config, target_config, phase_samples(dist)))
            config = target_config.copy()

        for unit in units:
            k = len(unit)
            # the unit permutes slot contents: find the labels now in its slots
            idx = [int(np.argmin(np.abs(config - base[s - 1]))) for s in unit]
            slots_pos = [base[s - 1] for s in unit]
            mu = complex(np.mean(np.asarray(slots_pos)))
            radius = max(abs(p - mu) for p in slots_pos) * grow
            if radius <= separation_floor:
                raise ScenarioError(f"slot cycle {unit} is too tight to rotate")
            angles = [math.atan2((p - mu).imag, (p - mu).real) if p != mu else 0.0
                      for p in slots_pos]
            _, orient, phi0 = _best_slot_orientation(angles, k)
            phi0 += 0.4 * attempt
            slots = np.array([mu + radius * cmath.exp(
                1j * (phi0 + orient * 2 * math.pi * j / k)) for j in range(k)])

            nudged = {}
            parked_from = {}
            for i in range(n):
                if i in idx:
                    continue
                d = abs(config[i] - mu)
                if abs(d - radius) < 0.45 * radius:
                    direction = ((config[i] - mu) / d if d > 0
                                 else cmath.exp(1j * (phi0 + 0.5)))
                    nudged[i] = mu + direction * radius * (1.55 + 0.25 * attempt)
                    parked_from[i] = config[i]

            if nudged:
                target = config.copy()
                for i, dest in nudged.items():
                    target[i] = dest
                do_phase(target)

            target = config.copy()
            target[idx] = slots
            do_phase(target)

            arc_samples = phase_samples(radius * 2 * math.pi / k)
            u = np.linspace(0.0, 1.0, arc_samples)[1:]
            arc_rows = np.repeat(config[None, :], len(u), axis=0)
            for j, i in enumerate(idx):
                ang = phi0 + orient * 2 * math.pi * (j + u) / k
                arc_rows[:, i] = mu + radius * np.exp(1j * ang)
            arc_rows[-1, idx] = [slots[(j + 1) % k] for j in range(k)]
            blocks.append(arc_rows)
            config = arc_rows[-1].copy()

            target = config.copy()
            for j, i in enumerate(idx):
                target[i] = base[unit[(j + 1) % k] - 1]
            do_phase(target)

            if nudged:
                target = config.copy()
                for i in nudged:
                    target[i] = parked_from[i]
                do_phase(target)

        points = np.vstack(blocks)
        min_sep = min(pairwise_separation(row) for row in points) if n > 1 else math.inf
        if n > 1 and min_sep <= separation_floor:
            last_error = (f"constructed motion collides (min separation {min_sep:g} "
                          f"<= floor {separation_floor:g}), attempt {attempt + 1}")
            continue
        return RootMotion(np.linspace(0.0, 1.0, len(points)), points, sigma)
    raise ScenarioError(last_error)


# ---------------------------------------------------------------------------
# Scenario assembly
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FalsificationVerdict:
    """Finite certificate extracted from one loop run.

    ``formula-cannot-trace-roots`` holds exactly when every tracked
    formula closed while the roots underwent a non-trivial permutation.
    """

    roots_permutation: Permutation
    formula_closed: bool
    conclusion: str


@dataclass(frozen=True)
class ScenarioTrace:
    """Synchronized record of one scenario run; all parts share one grid."""

    scenario: str
    degree: int
    t: np.ndarray
    base_roots: tuple
    root_track: RootTrack
    coeff_path: CoefficientPath
    expression_tracks: tuple
    verdict: FalsificationVerdict
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class NoWitnessResult:
    """Report that no balanced commutator of the requested depth moves roots."""

    scenario: str
    degree: int
    depth: int
    derived_orders: tuple


def _decide_verdict(track: RootTrack, base: Sequence[complex],
                    expr_tracks: Sequence, *,
                    follow_tol: float) -> FalsificationVerdict:
    perm = track.induced_permutation
    if perm is None:
        raise ScenarioError("verdict requires a closed coefficient loop")
    closed = all(et.closed for _, et in expr_tracks)
    if closed and not perm.is_identity():
        conclusion = VERDICT_FALSIFIED
    else:
        follows = bool(expr_tracks)
        for _, et in expr_tracks:
            v0 = et.value_path.start
            v1 = et.value_path.end
            label = None
            for i, z in enumerate(base):
                if abs(v0 - z) <= follow_tol:
                    label = i
                    break
            if label is None or abs(v1 - track.points[-1, label]) > follow_tol:
                follows = False
                break
        if follows and not perm.is_identity():
            conclusion = VERDICT_TRACKS
        else:
            conclusion = VERDICT_INCONCLUSIVE
    return FalsificationVerdict(roots_permutation=perm, formula_closed=closed,
                                conclusion=conclusion)


def _assemble(scenario: str, motion: RootMotion, expressions: Sequence[Expression],
              expected: Permutation, *,
              closure_tol: float, expr_closure_tol: float,
              separation_floor: Optional[float], meta: dict) -> ScenarioTrace:
    """Track roots and formulas on one shared grid (refining until stable)."""
    base = motion.base
    cpath0 = root_motion_to_coeffs(motion.paths())
    if not cpath0.is_closed_all(closure_tol):
        raise ScenarioError("coefficient path of the constructed motion is not closed")

    grid = cpath0.t
    for _ in range(8):
        cpath = cpath0.resampled(grid) if grid is not cpath0.t else cpath0
        track = track_roots(cpath, base, closure_tol=closure_tol,
                            separation_floor=separation_floor)
        grid_after = track.t
        expr_tracks = []
        cpath_fine = cpath0.resampled(grid_after)
        for expr in expressions:
            et = track_expression(expr, cpath_fine, closure_tol=expr_closure_tol)
            expr_tracks.append((expr, et))
        union = grid_after
        for _, et in expr_tracks:
            union = np.union1d(union, et.value_path.t)
        if len(union) == len(grid_after):
            final_cpath = cpath_fine
            break
        grid = union
    else:
        raise ScenarioError("shared grid did not stabilize across components")

    if track.induced_permutation is None:
        raise ScenarioError("coefficient loop did not close; no permutation to read")
    if track.induced_permutation != expected:
        raise ScenarioError(
            f"tracked permutation {track.induced_permutation.cycle_string()} "
            f"does not match the expected {expected.cycle_string()}")
    scale = max(1.0, max(abs(z) for z in base))
    verdict = _decide_verdict(track, base, expr_tracks, follow_tol=1e-6 * scale)
    return ScenarioTrace(scenario=scenario, degree=motion.n, t=track.t,
                         base_roots=base, root_track=track,
                         coeff_path=final_cpath,
                         expression_tracks=tuple(expr_tracks),
                         verdict=verdict, meta=dict(meta))


def unit_circle_roots(n: int) -> tuple:
    """The n-th roots of unity, the default well-separated base labelling."""
    return tuple(cmath.exp(2j * math.pi * k / n) for k in range(n))


def _parse_all(exprs: Sequence, degree: int) -> list:
    out = []
    for e in exprs:
        out.append(e if isinstance(e, Expression) else parse(e, degree=degree))
    return out


def swap_scenario(exprs: Sequence, *, samples: int = 48,
                  closure_tol: float = DEFAULT_CLOSURE_TOL,
                  expr_closure_tol: float = DEFAULT_EXPR_CLOSURE_TOL,
                  seed: int = 0) -> ScenarioTrace:
    """Degree-2 exchange: both roots rotate half a turn about their midpoint.

    The coefficient loop closes (coefficients are symmetric in the
    roots) while the roots trade places, so any formula that closes over
    this loop cannot be computing the roots.
    """
    base = (1 + 0j, -1 + 0j)
    sigma = Permutation.from_cycles(2, [(1, 2)])
    motion = realize_permutation(base, sigma, samples=samples)
    expressions = _parse_all(exprs, 2)
    return _assemble("quadratic-swap", motion, expressions, sigma,
                     closure_tol=closure_tol, expr_closure_tol=expr_closure_tol,
                     separation_floor=None, meta={"seed": seed})


def commutator_scenario(degree: int, beta_perm: Permutation, gamma_perm: Permutation,
                        exprs: Sequence, *, base_roots: Optional[Sequence] = None,
                        samples: int = 48,
                        closure_tol: float = DEFAULT_CLOSURE_TOL,
                        expr_closure_tol: float = DEFAULT_EXPR_CLOSURE_TOL,
                        scenario_id: str = "commutator",
                        seed: int = 0) -> ScenarioTrace:
    """Run the commutator loop of two realized permutations.

    The root motion is the commutator word of the realizations, so the
    tracked permutation equals ``commutator_perm(beta, gamma)``; every
    coefficient loop closes, and depth-1 radical branch shifts cancel
    because each operand loop shifts each radical cyclically.
    """
    if degree < 2:
        raise ScenarioError("degree must be >= 2")
    if beta_perm.n != degree or gamma_perm.n != degree:
        raise ScenarioError("permutations must act on {1..degree}")
    base = tuple(base_roots) if base_roots is not None else unit_circle_roots(degree)
    mb = realize_permutation(base, beta_perm, samples=samples)
    mg = realize_permutation(base, gamma_perm, samples=samples)
    motion = motion_commutator(mb, mg)
    expected = commutator_perm(beta_perm, gamma_perm)
    expressions = _parse_all(exprs, degree)
    meta = {"beta": beta_perm.cycle_string(), "gamma": gamma_perm.cycle_string(),
            "seed": seed}
    return _assemble(scenario_id, motion, expressions, expected,
                     closure_tol=closure_tol, expr_closure_tol=expr_closure_tol,
                     separation_floor=None, meta=meta)


def nested_commutator_scenario(degree: int, depth: int, leaf_perms: Sequence[Permutation],
                               exprs: Sequence, *, base_roots: Optional[Sequence] = None,
                               samples: int = 48,
                               closure_tol: float = DEFAULT_CLOSURE_TOL,
                               expr_closure_tol: float = DEFAULT_EXPR_CLOSURE_TOL,
                               scenario_id: str = "nested-commutator",
                               seed: int = 0) -> ScenarioTrace:
    """Depth-d iterated commutator of realized leaf motions.

    Requires 2**depth leaves whose balanced iterated commutator is a
    non-identity permutation; formulas of radical nesting depth <= depth
    must close along the resulting loop.
    """
    if depth < 1:
        raise ScenarioError("depth must be >= 1")
    leaves = list(leaf_perms)
    if len(leaves) != 2 ** depth:
        raise ScenarioError(f"depth {depth} needs {2 ** depth} leaf permutations, "
                            f"got {len(leaves)}")
    expected = nested_commutator(leaves)
    if expected.is_identity():
        raise ScenarioError(
            "leaf permutations collapse to the identity at this depth; "
            "no witness motion exists")
    base = tuple(base_roots) if base_roots is not None else unit_circle_roots(degree)
    motions = [realize_permutation(base, p, samples=samples) for p in leaves]
    motion = nested_motion_commutator(motions)
    expressions = _parse_all(exprs, degree)
    meta = {"depth": depth, "leaves": [p.cycle_string() for p in leaves], "seed": seed}
    return _assemble(scenario_id, motion, expressions, expected,
                     closure_tol=closure_tol, expr_closure_tol=expr_closure_tol,
                     separation_floor=None, meta=meta)


# ---------------------------------------------------------------------------
# Branch-point surveys
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonodromySurvey:
    """Loop generators around every branch point of a one-parameter family."""

    family: str
    branch_points: tuple
    base_point: complex
    base_roots: tuple
    loop_generators: tuple
    group_order: int
    solvable: bool
    loop_tracks: tuple
    coeff_paths: tuple


def eq1_branch_points() -> tuple:
    """Critical values of w -> 3w^5 - 25w^3 + 60w (the parameter family's
    branch points in its right-hand side), sorted canonically."""
    critical = all_roots(MonicPolynomial((4 + 0j, 0j, -5 + 0j, 0j)))

    def g(w: complex) -> complex:
        return 3 * w ** 5 - 25 * w ** 3 + 60 * w

    values = [g(w) for w in critical]
    return tuple(sorted(values, key=lambda z: (z.real, z.imag)))


def _loop_about(bp: complex, others: Sequence[complex], base: complex,
                factor: float, samples: int, max_step: float) -> ComplexPath:
    """Connector-circle-connector loop from the base around one branch point."""
    dists = [abs(bp - o) for o in others if abs(bp - o) > 0]
    nearest = min(dists) if dists else abs(bp - base)
    rho = factor * nearest
    direction = (base - bp) / abs(base - bp)
    entry = bp + rho * direction
    connector = sample(Segment(base, entry), samples, max_step)
    start_angle = math.atan2(direction.imag, direction.real)
    circle = sample(FullCircle(bp, rho, winding=1, start_angle=start_angle),
                    samples, max_step)
    tol = 1e-9 * max(1.0, abs(base), abs(bp))
    return concat(concat(connector, circle, tol), reverse(connector), tol)


def _survey(family: str, branch_points: Sequence[complex], base_point: complex,
            coeff_arrays_for, degree: int, *, loop_radius_factor: float,
            samples: int, seed: int) -> MonodromySurvey:
    if not (0 < loop_radius_factor < 0.5):
        raise ScenarioError("loop_radius_factor must be in (0, 0.5)")
    scale = max(1.0, max(abs(b) for b in branch_points))
    max_step = DEFAULT_MAX_STEP * scale
    base_poly = MonicPolynomial(coeff_arrays_for(np.array([base_point + 0j]))[..., 0])
    base_roots = all_roots(base_poly, seed=seed)
    tracks = []
    cpaths = []
    gens = []
    for bp in branch_points:
        loop = _loop_about(bp, [b for b in branch_points if b != bp], base_point,
                           loop_radius_factor, samples, max_step)
        coeffs = coeff_arrays_for(loop.z)
        cpath = CoefficientPath(loop.t, tuple(coeffs))
        try:
            track = track_roots(cpath, base_roots,
                                closure_tol=1e-9 * max(1.0, cpath.scale()))
        except Exception as exc:
            raise ScenarioError(
                f"loop around branch point {bp:g} failed ({exc}); "
                f"try a smaller loop_radius_factor") from exc
        if track.induced_permutation is None:
            raise ScenarioError(f"loop around {bp:g} did not close")
        tracks.append(track)
        cpaths.append(cpath)
        gens.append(track.induced_permutation)
    group = generate(gens)
    return MonodromySurvey(family=family,
                           branch_points=tuple(branch_points),
                           base_point=complex(base_point),
                           base_roots=tuple(base_roots),
                           loop_generators=tuple(gens),
                           group_order=group.order,
                           solvable=is_solvable(group),
                           loop_tracks=tuple(tracks),
                           coeff_paths=tuple(cpaths))


def quintic_monodromy(loop_radius_factor: float = 0.25, *, samples: int = 48,
                      seed: int = 0) -> MonodromySurvey:
    """Survey of the family x^5 + a*x + 1 over small loops in a-space.

    Branch points are the parameter values with a repeated root, i.e. the
    five solutions of 256 a^5 + 3125 = 0; each loop around one of them
    exchanges the two colliding sheets, and together the loops generate
    the full (non-solvable) group of the five sheets.
    """
    branch_points = all_roots(MonicPolynomial((3125.0 / 256.0 + 0j, 0j, 0j, 0j, 0j)),
                              seed=seed)

    def coeff_arrays(a_values: np.ndarray):
        m = len(a_values)
        return np.stack([
            np.ones(m, dtype=complex),      # a_0 = 1
            np.asarray(a_values, complex),  # a_1 = a
            np.zeros(m, dtype=complex),
            np.zeros(m, dtype=complex),
            np.zeros(m, dtype=complex),
        ])

    return _survey("quintic-arnold", branch_points, 0j, coeff_arrays, 5,
                   loop_radius_factor=loop_radius_factor, samples=samples, seed=seed)


def eq1_monodromy(loop_radius_factor: float = 0.25, *, samples: int = 48,
                  seed: int = 0) -> MonodromySurvey:
    """Survey of 3w^5 - 25w^3 + 60w = z over loops in z-space.

    The base point sits off the real axis because all four branch points
    are real; a straight connector from a real base would run through
    one of them.
    """
    branch_points = eq1_branch_points()
    base_point = 2j

    def coeff_arrays(z_values: np.ndarray):
        m = len(z_values)
        return np.stack([
            -np.asarray(z_values, complex) / 3.0,   # a_0 = -z/3
            np.full(m, 20.0 + 0j),                  # a_1
            np.zeros(m, dtype=complex),             # a_2
            np.full(m, -25.0 / 3.0 + 0j),           # a_3
            np.zeros(m, dtype=complex),             # a_4
        ])

    return _survey("eq1-monodromy", branch_points, base_point, coeff_arrays, 5,
                   loop_radius_factor=loop_radius_factor, samples=samples, seed=seed)


# ---------------------------------------------------------------------------
# Bundled formula corpora and preset runners
# ---------------------------------------------------------------------------

DEPTH0_CORPUS = ("a0", "a1", "a0*a1 + exp(a0)")
QUADRATIC_FORMULA = "-(a1)/2 + root(2, (a1^2)/4 - a0)"

CUBIC_CORPUS = ("a0", "a1", "a2", "root(2, a0 - 4)", "root(3, a1 + 4)")
QUARTIC_CORPUS = ("a0", "root(2, a0 - 9)", "root(2, root(2, a0 - 9) + 6)",
                  "root(3, a1 - 9)")
QUINTIC_CORPUS = ("root(5, a0)", "root(5, a1 - 9)",
                  "root(5, a0*a1 + exp(a0) + 9)")

QUARTIC_DEFAULT_DEPTH = 2


def quartic_nested_scenario(depth: int = QUARTIC_DEFAULT_DEPTH,
                            exprs: Optional[Sequence] = None, *,
                            samples: int = 48, seed: int = 0,
                            closure_tol: float = DEFAULT_CLOSURE_TOL,
                            expr_closure_tol: float = DEFAULT_EXPR_CLOSURE_TOL):
    """Nested-commutator run at degree 4, or a no-witness report.

    At depth 3 the third iterated commutator chain of the degree-4
    permutations is trivial, so no witness motion exists and the builder
    reports that instead of a trace.
    """
    leaves = find_nested_commutator_witness(4, depth)
    if leaves is None:
        from .permutations import symmetric_group
        orders = derived_series(symmetric_group(4))
        return NoWitnessResult(scenario="quartic-nested", degree=4, depth=depth,
                               derived_orders=tuple(orders))
    bundle = QUARTIC_CORPUS if exprs is None else exprs
    return nested_commutator_scenario(4, depth, leaves, bundle, samples=samples,
                                      closure_tol=closure_tol,
                                      expr_closure_tol=expr_closure_tol,
                                      scenario_id="quartic-nested", seed=seed)


def run_scenario(scenario: str, *, exprs: Optional[Sequence] = None,
                 depth: Optional[int] = None, seed: int = 0, samples: int = 48,
                 closure_tol: float = DEFAULT_CLOSURE_TOL,
                 loop_radius_factor: float = 0.25):
    """Run one named scenario; returns a ScenarioTrace, MonodromySurvey,
    or NoWitnessResult depending on the scenario."""
    if scenario == "quadratic-swap":
        bundle = DEPTH0_CORPUS if exprs is None else exprs
        return swap_scenario(bundle, samples=samples, closure_tol=closure_tol,
                             seed=seed)
    if scenario == "cubic-commutator":
        bundle = CUBIC_CORPUS if exprs is None else exprs
        beta = Permutation.from_cycles(3, [(1, 2)])
        gamma = Permutation.from_cycles(3, [(2, 3)])
        return commutator_scenario(3, beta, gamma, bundle, samples=samples,
                                   closure_tol=closure_tol,
                                   scenario_id="cubic-commutator", seed=seed)
    if scenario == "quartic-nested":
        d = QUARTIC_DEFAULT_DEPTH if depth is None else depth
        return quartic_nested_scenario(d, exprs, samples=samples, seed=seed,
                                       closure_tol=closure_tol)
    if scenario == "quintic-commutator":
        bundle = QUINTIC_CORPUS if exprs is None else exprs
        beta = Permutation.from_cycles(5, [(1, 2, 3)])
        gamma = Permutation.from_cycles(5, [(3, 4, 5)])
        return commutator_scenario(5, beta, gamma, bundle, samples=samples,
                                   closure_tol=closure_tol,
                                   scenario_id="quintic-commutator", seed=seed)
    if scenario == "quintic-arnold":
        return quintic_monodromy(loop_radius_factor, samples=samples, seed=seed)
    if scenario == "eq1-monodromy":
        return eq1_monodromy(loop_radius_factor, samples=samples, seed=seed)
    raise ScenarioError(f"unknown scenario {scenario!r}; "
                        f"known: {', '.join(SCENARIO_IDS)}")
