"""Path algebra: polar form, sampling, loop operations, winding."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from monodromy.paths import (
    CircularArc,
    ComplexPath,
    Composite,
    FullCircle,
    PathError,
    Segment,
    commutator,
    concat,
    constant_path,
    is_closed,
    polar,
    reverse,
    sample,
    winding_angle,
    winding_number,
)

from helpers_oracles import winding_sum


class TestPolar:
    def test_identity_case(self):
        r, theta = polar(1 + 0j)
        assert r == 1.0 and theta == 0.0

    def test_axis_case(self):
        r, theta = polar(-1j)
        assert r == 1.0
        assert theta == pytest.approx(-math.pi / 2, abs=1e-15)

    def test_negative_real_reconstructs(self):
        # oracle: rebuild r*e^{i theta} and compare to the source
        r, theta = polar(-8 + 0j)
        assert r == 8.0 and theta == pytest.approx(math.pi)
        rebuilt = r * complex(math.cos(theta), math.sin(theta))
        assert abs(rebuilt - (-8)) <= 1e-12 * 8

    def test_zero_is_degenerate(self):
        form = polar(0j)
        assert form == (0.0, 0.0)
        assert form.degenerate
        assert not polar(1j).degenerate

    def test_principal_range(self):
        for z in (1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j, -5 + 0j):
            _, theta = polar(z)
            assert -math.pi < theta <= math.pi


class TestSample:
    def test_segment_endpoints(self):
        p = sample(Segment(0j, 1 + 0j), 2)
        assert p.start == 0j and p.end == 1 + 0j

    def test_full_circle_closes(self):
        p = sample(FullCircle(0j, 1.0, winding=1), 16)
        assert abs(p.end - p.start) <= 1e-12

    def test_double_winding_accumulates_4pi(self):
        p = sample(FullCircle(0j, 1.0, winding=2), 64)
        # oracle: independent scalar sum of successive angle increments
        assert winding_sum(p.z) == pytest.approx(4 * math.pi, abs=1e-9)

    def test_max_step_contract(self):
        for spec in (Segment(0j, 3 + 4j),
                     FullCircle(1j, 2.5, winding=-1),
                     CircularArc(0j, 1.0, 0.3, 2.0),
                     Composite((Segment(0j, 1 + 0j),
                                CircularArc(0j, 1.0, 0.0, math.pi / 2)))):
            p = sample(spec, 2, max_step=0.05)
            assert p.max_step() <= 0.05 + 1e-12

    def test_min_samples_respected(self):
        p = sample(Segment(0j, 1e-6 + 0j), 17)
        assert len(p) >= 17

    def test_zero_length_composite_rejected(self):
        with pytest.raises(PathError, match="degenerate"):
            sample(Composite(()), 2)
        with pytest.raises(PathError, match="degenerate"):
            sample(Composite((Segment(1j, 1j),)), 2)

    def test_discontinuous_composite_rejected(self):
        with pytest.raises(PathError, match="discontinuous"):
            sample(Composite((Segment(0j, 1 + 0j), Segment(2 + 0j, 3 + 0j))), 2)

    def test_bad_min_samples(self):
        with pytest.raises(PathError):
            sample(Segment(0j, 1 + 0j), 1)


class TestLoopAlgebra:
    def test_concat_retrace_is_closed(self):
        p = sample(Segment(0j, 1 + 1j), 9)
        loop = concat(p, reverse(p))
        assert is_closed(loop, 1e-12)

    def test_reverse_is_involution(self):
        p = sample(CircularArc(0.5j, 1.0, 0.2, 1.7), 23)
        back = reverse(reverse(p))
        np.testing.assert_array_equal(back.z, p.z)
        np.testing.assert_allclose(back.t, p.t, rtol=0, atol=5e-16)

    def test_ccw_then_cw_cancels_winding(self):
        ccw = sample(FullCircle(0j, 1.0, winding=1), 64)
        cw = sample(FullCircle(0j, 1.0, winding=-1), 64)
        loop = concat(ccw, cw)
        assert winding_number(loop, 0j) == 0

    def test_concat_gap_rejected_with_location(self):
        p = sample(Segment(0j, 1 + 0j), 4)
        q = sample(Segment(2 + 0j, 3 + 0j), 4)
        with pytest.raises(PathError, match="gap"):
            concat(p, q)

    def test_concat_traverses_in_order(self):
        p = sample(Segment(0j, 1 + 0j), 5)
        q = sample(Segment(1 + 0j, 1 + 1j), 5)
        joined = concat(p, q)
        assert joined.start == 0j and joined.end == 1 + 1j
        assert len(joined) == len(p) + len(q) - 1

    def test_commutator_with_constant_path_retraces(self):
        loop = sample(FullCircle(2 + 0j, 0.5, winding=1, start_angle=math.pi), 32)
        const = constant_path(loop.start, 4)
        word = commutator(loop, const)
        assert is_closed(word, 1e-9)

    def test_commutator_of_equal_circles_has_zero_winding(self):
        c1 = sample(FullCircle(0j, 1.0, winding=1), 64)
        c2 = sample(FullCircle(0j, 1.0, winding=1), 48)
        word = commutator(c1, c2)
        assert is_closed(word, 1e-9)
        assert winding_number(word, 0j) == 0

    def test_commutator_of_closed_loops_is_closed(self):
        beta = sample(FullCircle(0.3 + 0j, 0.7, winding=1,
                                 start_angle=math.atan2(0, 1 - 0.3)), 40)
        gamma = constant_path(1 + 0j, 8)
        assert is_closed(commutator(beta, gamma), 1e-9)

    def test_commutator_base_point_mismatch(self):
        c1 = sample(FullCircle(0j, 1.0, winding=1), 32)
        c2 = sample(FullCircle(0j, 2.0, winding=1), 32)
        with pytest.raises(PathError, match="base-point"):
            commutator(c1, c2)

    def test_operations_preserve_max_step(self):
        p = sample(FullCircle(0j, 1.0, winding=1), 16, max_step=0.07)
        q = sample(FullCircle(0j, 1.0, winding=-2, start_angle=0.0), 16, max_step=0.07)
        for path in (concat(p, q), reverse(p), commutator(p, q)):
            assert path.max_step() <= 0.07 + 1e-12


class TestIsClosed:
    def test_constant_closed(self):
        assert is_closed(constant_path(3 - 2j), 1e-9)

    def test_segment_open(self):
        assert not is_closed(sample(Segment(0j, 1 + 0j), 4), 1e-9)

    def test_tolerance_must_be_positive(self):
        with pytest.raises(PathError):
            is_closed(constant_path(0j), 0.0)


class TestWinding:
    def test_matches_scalar_oracle(self):
        p = sample(FullCircle(0.2 + 0.1j, 1.0, winding=3), 256)
        assert winding_angle(p, 0.2 + 0.1j) == pytest.approx(
            winding_sum(p.z, 0.2 + 0.1j), abs=1e-12)

    def test_point_on_path_rejected(self):
        p = sample(Segment(-1 + 0j, 1 + 0j), 9)
        with pytest.raises(PathError, match="on the path"):
            winding_angle(p, 0j)

    def test_closed_winding_is_integer_turns(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            center = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            radius = rng.uniform(0.2, 2.0)
            w = int(rng.integers(-3, 4)) or 1
            p = sample(FullCircle(center, radius, winding=w), 32)
            about = center + radius * 2.5  # outside
            turns = winding_angle(p, about) / (2 * math.pi)
            assert abs(turns - round(turns)) < 1e-6
            assert winding_number(p, center) == w

    @given(st.integers(min_value=-3, max_value=3).filter(lambda w: w != 0),
           st.floats(min_value=0.1, max_value=3.0),
           st.floats(min_value=0.0, max_value=2 * math.pi))
    @settings(max_examples=40, deadline=None)
    def test_winding_number_of_circles(self, w, radius, start):
        p = sample(FullCircle(0j, radius, winding=w, start_angle=start), 16)
        assert winding_number(p, 0j) == w


class TestComplexPathValidation:
    def test_requires_two_samples(self):
        with pytest.raises(PathError):
            ComplexPath(np.array([0.0]), np.array([0j]))

    def test_rejects_nan(self):
        with pytest.raises(PathError, match="finite"):
            ComplexPath(np.array([0.0, 1.0]), np.array([0j, complex("nan")]))

    def test_rejects_non_monotone(self):
        with pytest.raises(PathError):
            ComplexPath(np.array([0.0, 0.5, 0.5, 1.0]), np.zeros(4, complex))

    def test_rejects_bad_range(self):
        with pytest.raises(PathError):
            ComplexPath(np.array([0.1, 1.0]), np.zeros(2, complex))

    def test_immutable_arrays(self):
        p = constant_path(1j, 4)
        with pytest.raises(ValueError):
            p.z[0] = 5.0
