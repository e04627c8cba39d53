"""Scenario construction: realized motions, commutator loops, surveys."""

import cmath
import math

import numpy as np
import pytest

from monodromy.expressions import parse, track_expression
from monodromy.paths import is_closed
from monodromy.permutations import (
    Permutation,
    commutator_perm,
    derived_chain,
    symmetric_group,
)
from monodromy.polynomials import (
    pairwise_separation,
    root_motion_to_coeffs,
    track_roots,
)
from monodromy.scenarios import (
    CUBIC_CORPUS,
    DEPTH0_CORPUS,
    QUADRATIC_FORMULA,
    QUARTIC_CORPUS,
    QUINTIC_CORPUS,
    MonodromySurvey,
    NoWitnessResult,
    ScenarioError,
    commutator_scenario,
    eq1_branch_points,
    eq1_monodromy,
    motion_commutator,
    nested_commutator_scenario,
    quartic_nested_scenario,
    quintic_monodromy,
    realize_permutation,
    run_scenario,
    swap_scenario,
    unit_circle_roots,
)

from helpers_oracles import numpy_roots_of_monic


def cyc(n, *cycles):
    return Permutation.from_cycles(n, cycles)


class TestRealizePermutation:
    def test_identity_gives_constant_paths(self):
        base = unit_circle_roots(4)
        motion = realize_permutation(base, Permutation.identity(4))
        assert np.array_equal(motion.points[0], motion.points[-1])
        assert len(motion.t) == 2

    def test_swap_of_plus_minus_one(self):
        base = (1 + 0j, -1 + 0j)
        motion = realize_permutation(base, cyc(2, (1, 2)))
        # endpoints exchanged
        assert motion.points[-1, 0] == pytest.approx(-1)
        assert motion.points[-1, 1] == pytest.approx(1)
        # counter-rotating half-turn passes through +/- i
        mid_dists = [min(abs(motion.points[:, i] - 1j * s).min()
                         for i in range(2)) for s in (1, -1)]
        assert max(mid_dists) < 0.05
        # antipodal rigid rotation keeps the pair at distance 2 throughout
        seps = [pairwise_separation(row) for row in motion.points]
        assert min(seps) == pytest.approx(2.0, abs=1e-9)

    def test_three_cycle_endpoints_by_rotation_arithmetic(self):
        base = unit_circle_roots(3)
        sigma = cyc(3, (1, 2, 3))
        motion = realize_permutation(base, sigma)
        for i in range(3):
            assert motion.points[-1, i] == pytest.approx(base[sigma(i + 1) - 1])

    def test_untouched_labels_stay_fixed(self):
        base = unit_circle_roots(5)
        motion = realize_permutation(base, cyc(5, (1, 2, 3)))
        for i in (3, 4):
            assert np.all(motion.points[:, i] == base[i])

    def test_bystander_nudge_on_quartic_transposition(self):
        # (1 3) on the 4th roots of unity: +/- i sit exactly on the rotation
        # circle and must be nudged out and restored
        base = unit_circle_roots(4)
        motion = realize_permutation(base, cyc(4, (1, 3)))
        assert motion.points[-1, 0] == pytest.approx(base[2])
        assert motion.points[-1, 2] == pytest.approx(base[0])
        assert motion.points[-1, 1] == pytest.approx(base[1])
        assert motion.points[-1, 3] == pytest.approx(base[3])
        moved = np.max(np.abs(motion.points[:, 1] - base[1]))
        assert moved > 0.3  # genuinely nudged, not grazed
        floor = 1e-6
        assert min(pairwise_separation(row) for row in motion.points) > floor

    def test_min_separation_exceeds_floor_everywhere(self):
        base = unit_circle_roots(5)
        for sigma in (cyc(5, (1, 2, 3)), cyc(5, (3, 4, 5)), cyc(5, (1, 4), (2, 3))):
            motion = realize_permutation(base, sigma)
            assert min(pairwise_separation(row) for row in motion.points) > 1e-3

    def test_tracked_permutation_matches_realized(self):
        base = unit_circle_roots(4)
        sigma = cyc(4, (1, 2), (3, 4))
        motion = realize_permutation(base, sigma)
        cpath = root_motion_to_coeffs(motion.paths())
        track = track_roots(cpath, list(base))
        assert track.induced_permutation == sigma


class TestMotionAlgebra:
    def test_inverse_reverses_permutation(self):
        base = unit_circle_roots(4)
        motion = realize_permutation(base, cyc(4, (1, 2, 3)))
        inv = motion.inverse()
        assert inv.sigma == motion.sigma.inverse()
        assert np.array_equal(inv.points[0], motion.points[0])

    def test_then_relabels_and_composes(self):
        base = unit_circle_roots(3)
        m1 = realize_permutation(base, cyc(3, (1, 2)))
        m2 = realize_permutation(base, cyc(3, (2, 3)))
        word = m1.then(m2)
        from monodromy.permutations import compose
        assert word.sigma == compose(m2.sigma, m1.sigma)
        cpath = root_motion_to_coeffs(word.paths())
        track = track_roots(cpath, list(base))
        assert track.induced_permutation == word.sigma

    def test_commutator_motion_tracks_group_commutator(self):
        base = unit_circle_roots(5)
        mb = realize_permutation(base, cyc(5, (1, 2, 3)))
        mg = realize_permutation(base, cyc(5, (3, 4, 5)))
        word = motion_commutator(mb, mg)
        assert word.sigma == commutator_perm(mb.sigma, mg.sigma)
        track = track_roots(root_motion_to_coeffs(word.paths()), list(base))
        assert track.induced_permutation == commutator_perm(mb.sigma, mg.sigma)


class TestSwapScenario:
    def test_depth0_corpus_falsified(self):
        tr = swap_scenario(DEPTH0_CORPUS)
        assert tr.verdict.conclusion == "formula-cannot-trace-roots"
        assert tr.verdict.roots_permutation.cycle_string() == "(1 2)"
        assert all(g <= 1e-9 for g in tr.coeff_path.closure_gaps())
        for _, et in tr.expression_tracks:
            assert et.closed

    def test_quadratic_formula_positive_control(self):
        tr = swap_scenario([QUADRATIC_FORMULA])
        _, et = tr.expression_tracks[0]
        assert not et.closed
        assert abs(et.value_path.start - 1) <= 1e-6
        assert abs(et.value_path.end - (-1)) <= 1e-6
        assert tr.verdict.conclusion == "formula-tracks-roots"

    def test_shared_grid_across_components(self):
        tr = swap_scenario(DEPTH0_CORPUS)
        assert np.array_equal(tr.t, tr.root_track.t)
        assert np.array_equal(tr.t, tr.coeff_path.t)
        for _, et in tr.expression_tracks:
            assert np.array_equal(tr.t, et.value_path.t)


class TestCommutatorScenario:
    def test_quintic_example(self):
        beta, gamma = cyc(5, (1, 2, 3)), cyc(5, (3, 4, 5))
        tr = commutator_scenario(5, beta, gamma, QUINTIC_CORPUS)
        assert tr.verdict.roots_permutation == commutator_perm(beta, gamma)
        assert not tr.verdict.roots_permutation.is_identity()
        assert tr.verdict.conclusion == "formula-cannot-trace-roots"
        for _, et in tr.expression_tracks:
            assert et.closed and et.value_gap < 1e-6

    def test_single_loop_shifts_branch_commutator_cancels(self):
        # one operand loop cyclically shifts root(5, a0); the commutator
        # word cancels the shift while still permuting the roots
        base = unit_circle_roots(5)
        mb = realize_permutation(base, cyc(5, (1, 2, 3, 4, 5)))
        cpath = root_motion_to_coeffs(mb.paths())
        e = parse("root(5, a0)", degree=5)
        single = track_expression(e, cpath)
        node = e.radicals()[0].node_id
        assert abs(round(single.radicand_winding[node])) >= 1
        assert not single.closed

    def test_equal_operands_inconclusive(self):
        beta = cyc(3, (1, 2, 3))
        tr = commutator_scenario(3, beta, beta, CUBIC_CORPUS)
        assert tr.verdict.roots_permutation.is_identity()
        assert tr.verdict.conclusion == "inconclusive"

    def test_commuting_powers_inconclusive(self):
        beta, gamma = cyc(3, (1, 2, 3)), cyc(3, (1, 3, 2))
        assert commutator_perm(beta, gamma).is_identity()  # powers commute
        tr = commutator_scenario(3, beta, gamma, ("a0",))
        assert tr.verdict.conclusion == "inconclusive"

    def test_degree_validation(self):
        with pytest.raises(ScenarioError):
            commutator_scenario(1, cyc(2, (1, 2)), cyc(2, (1, 2)), ("a0",))
        with pytest.raises(ScenarioError):
            commutator_scenario(4, cyc(3, (1, 2)), cyc(4, (1, 2)), ("a0",))


class TestNestedScenario:
    def test_quartic_depth2_witness_and_closure(self):
        tr = quartic_nested_scenario(2)
        assert not isinstance(tr, NoWitnessResult)
        perm = tr.verdict.roots_permutation
        assert not perm.is_identity()
        chain = derived_chain(symmetric_group(4))
        assert perm in chain[2].elements
        for expr, et in tr.expression_tracks:
            assert expr.nesting_depth() <= 2
            assert et.closed, expr.text
        assert tr.verdict.conclusion == "formula-cannot-trace-roots"

    def test_quartic_depth3_reports_no_witness(self):
        result = quartic_nested_scenario(3)
        assert isinstance(result, NoWitnessResult)
        assert result.derived_orders == (24, 12, 4, 1)

    def test_identity_leaves_rejected(self):
        e = Permutation.identity(4)
        with pytest.raises(ScenarioError, match="identity"):
            nested_commutator_scenario(4, 1, [e, e], ("a0",))

    def test_leaf_count_checked(self):
        with pytest.raises(ScenarioError, match="leaf"):
            nested_commutator_scenario(4, 2, [cyc(4, (1, 2))] * 3, ("a0",))

    def test_degree5_witnesses_exist_at_depth3(self):
        from monodromy.permutations import find_nested_commutator_witness
        leaves = find_nested_commutator_witness(5, 3)
        assert leaves is not None and len(leaves) == 8


class TestBranchPoints:
    def test_eq1_critical_points(self):
        # oracle: independent companion-matrix roots of w^4 - 5w^2 + 4
        expected = numpy_roots_of_monic([4 + 0j, 0j, -5 + 0j, 0j])
        assert expected == pytest.approx([-2, -1, 1, 2], abs=1e-10)

    def test_eq1_branch_values(self):
        got = sorted(eq1_branch_points(), key=lambda z: z.real)
        assert [z.real for z in got] == pytest.approx([-38, -16, 16, 38], abs=1e-8)
        assert max(abs(z.imag) for z in got) <= 1e-8

    def test_zero_is_not_a_branch_point(self):
        from monodromy.polynomials import MonicPolynomial, all_roots
        p = MonicPolynomial((0j, 20 + 0j, 0j, -25 / 3 + 0j, 0j))
        roots = all_roots(p)
        assert max(abs(p(z)) for z in roots) <= 1e-10 * p.scale()
        assert pairwise_separation(roots) > 0.5


@pytest.fixture(scope="module")
def arnold_survey():
    return quintic_monodromy()


@pytest.fixture(scope="module")
def eq1_survey():
    return eq1_monodromy()


class TestQuinticSurvey:
    @pytest.fixture()
    def survey(self, arnold_survey):
        return arnold_survey

    def test_branch_points_against_discriminant_oracle(self, survey):
        # oracle: companion-matrix roots of 256 a^5 + 3125 = 0
        expected = numpy_roots_of_monic([3125.0 / 256.0, 0j, 0j, 0j, 0j])
        assert len(survey.branch_points) == 5
        for e in expected:
            assert min(abs(g - e) for g in survey.branch_points) <= 1e-8
        assert pairwise_separation(survey.branch_points) > 1.0
        for b in survey.branch_points:
            assert abs(abs(b) - 5 * 2 ** (-8 / 5)) <= 1e-6

    def test_each_loop_is_a_transposition(self, survey):
        for g in survey.loop_generators:
            cycles = g.cycles()
            assert len(cycles) == 1 and len(cycles[0]) == 2

    def test_group_order_and_solvability(self, survey):
        assert survey.group_order == 120
        assert survey.solvable is False

    def test_loop_concatenation_composes(self, survey):
        from monodromy.paths import concat
        from monodromy.permutations import compose
        from monodromy.polynomials import CoefficientPath
        cp1, cp2 = survey.coeff_paths[0], survey.coeff_paths[1]
        joined = CoefficientPath.from_paths([
            concat(a, b, tol=1e-9)
            for a, b in zip(cp1.component_paths(), cp2.component_paths())])
        track = track_roots(joined, list(survey.base_roots))
        expected = compose(survey.loop_generators[1], survey.loop_generators[0])
        assert track.induced_permutation == expected


class TestEq1Survey:
    @pytest.fixture()
    def survey(self, eq1_survey):
        return eq1_survey

    def test_four_branch_points(self, survey):
        assert len(survey.branch_points) == 4
        reals = sorted(z.real for z in survey.branch_points)
        assert reals == pytest.approx([-38, -16, 16, 38], abs=1e-8)

    def test_transpositions_and_group(self, survey):
        for g in survey.loop_generators:
            cycles = g.cycles()
            assert len(cycles) == 1 and len(cycles[0]) == 2
        assert survey.group_order == 120
        letters = set()
        for g in survey.loop_generators:
            letters.update(g.cycles()[0])
        assert letters == {1, 2, 3, 4, 5}  # transitive on the five sheets

    def test_loop_radius_validation(self):
        with pytest.raises(ScenarioError):
            eq1_monodromy(0.9)


class TestVerdictRules:
    def test_falsified_iff_closed_and_nonidentity(self):
        falsified = swap_scenario(DEPTH0_CORPUS).verdict
        assert falsified.conclusion == "formula-cannot-trace-roots"
        assert falsified.formula_closed and not falsified.roots_permutation.is_identity()

        tracks = swap_scenario([QUADRATIC_FORMULA]).verdict
        assert tracks.conclusion != "formula-cannot-trace-roots"
        assert not tracks.formula_closed

        inconclusive = commutator_scenario(
            3, cyc(3, (1, 2, 3)), cyc(3, (1, 2, 3)), ("a0",)).verdict
        assert inconclusive.conclusion == "inconclusive"
        assert inconclusive.roots_permutation.is_identity()

    def test_run_scenario_dispatch(self):
        assert run_scenario("quadratic-swap").scenario == "quadratic-swap"
        assert isinstance(run_scenario("quintic-arnold"), MonodromySurvey)
        assert isinstance(run_scenario("quartic-nested", depth=3), NoWitnessResult)
        with pytest.raises(ScenarioError, match="unknown scenario"):
            run_scenario("septic-mystery")

    def test_radicand_corpora_stay_clear_of_zero(self):
        # the avoid-0 hypothesis: every bundled radicand keeps its distance
        cases = [
            (swap_scenario(DEPTH0_CORPUS), 0.1),
            (run_scenario("cubic-commutator"), 0.1),
            (run_scenario("quintic-commutator"), 0.1),
            (quartic_nested_scenario(2), 0.1),
        ]
        for tr, floor in cases:
            for expr, et in tr.expression_tracks:
                for rad in expr.radicals():
                    values = et.radical_values[rad.node_id]
                    radicand = values ** rad.index
                    assert float(np.min(np.abs(radicand))) > floor, expr.text
