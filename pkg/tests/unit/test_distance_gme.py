"""
Unit tests for distance bounds, evidence grades, the sum criterion and the GME witness
"""
from dataclasses import replace

import numpy as np
import pytest

import gmelab.services.distance.activatability as activatability_module
from gmelab.core.config import settings
from gmelab.core.exceptions import DimensionError, ValidationError
from gmelab.models.certificates import (
    ActivatabilityVerdict,
    EvidenceGrade,
    SeparabilityEvidence,
    SumVerdict,
    WitnessStatus,
)
from gmelab.models.domain import Bipartition, DensityMatrix, SubsystemLayout
from gmelab.services.criteria import negativity, product_negativity
from gmelab.services.distance import (
    GilbertApproximator,
    GilbertOptions,
    activatable_via_npt,
    basis_mixture,
    distance_bounds,
    gilbert_upper_bound,
    ppt_mixture_witness,
    random_biseparable,
    recheck_evidence,
    separability_evidence,
    sum_criterion,
    sum_threshold,
    t_ppt_copy_trend,
    t_ppt_lower_bound,
    transport_evidence,
)
from gmelab.services.distance.ppt_bound import check_sdp_dimension
from gmelab.services.partitions import enumerate_bipartitions
from gmelab.services.states import copies, isotropic, maximally_mixed, random_density_matrix, star_pen

CUT_2 = Bipartition((1,), 2)


class TestSumThreshold:

    @pytest.mark.parametrize("n, expected", [(2, 0), (3, 2), (4, 6), (5, 14)])
    def test_values(self, n, expected):
        assert sum_threshold(n) == expected


class TestPptLowerBound:
    """PPT relaxation of the distance to cut-separable states"""

    @pytest.mark.parametrize("p, expected", [(1.0, 0.5), (2 / 3, 0.25)])
    def test_isotropic(self, p, expected):
        assert t_ppt_lower_bound(isotropic(p), CUT_2) == pytest.approx(expected, abs=1e-6)

    def test_zero_at_threshold(self):
        assert t_ppt_lower_bound(isotropic(1 / 3), CUT_2) == pytest.approx(0.0, abs=1e-6)

    def test_separable_state(self):
        assert t_ppt_lower_bound(maximally_mixed(3), Bipartition((1,), 3)) == pytest.approx(0.0, abs=1e-6)

    def test_dimension_cap(self):
        check_sdp_dimension(64)
        with pytest.raises(DimensionError):
            check_sdp_dimension(128)

    def test_convex_in_the_state(self, rng):
        layout = SubsystemLayout.qubits(2)
        for _ in range(3):
            first = DensityMatrix(random_density_matrix(4, rng, rank=1), layout)
            second = DensityMatrix(random_density_matrix(4, rng, rank=2), layout)
            t_first = t_ppt_lower_bound(first, CUT_2)
            t_second = t_ppt_lower_bound(second, CUT_2)
            for lam in (0.25, 0.5, 0.75):
                mixed = DensityMatrix(lam * first.matrix + (1 - lam) * second.matrix, layout)
                chord = lam * t_first + (1 - lam) * t_second
                assert t_ppt_lower_bound(mixed, CUT_2) <= chord + settings.tolerances.bound_order

    @pytest.mark.slow
    def test_copy_trend_is_nondecreasing(self):
        trend = t_ppt_copy_trend(isotropic(0.9), CUT_2, ks=(1, 2, 3))
        assert [point["k"] for point in trend] == [1, 2, 3]
        lowers = [point["lower"] for point in trend]
        assert all(b >= a - 1e-6 for a, b in zip(lowers, lowers[1:]))
        assert lowers[-1] - lowers[0] >= 0.05


class TestGilbert:
    """Product-mixture approximation"""

    def test_maximally_mixed_converges_immediately(self):
        result = gilbert_upper_bound(isotropic(0.0), CUT_2)
        assert result.iterations == 0
        assert result.converged
        assert result.upper_bound == pytest.approx(0.0, abs=1e-12)

    def test_threshold_state_is_approximated(self):
        result = gilbert_upper_bound(isotropic(1 / 3), CUT_2, GilbertOptions(seed=3))
        assert result.frobenius_distance <= 1e-3
        assert np.all(result.mixture.weights >= 0)
        assert result.mixture.weights.sum() == pytest.approx(1.0)

    def test_bell_stays_far(self, bell_state):
        result = gilbert_upper_bound(bell_state, CUT_2, GilbertOptions(max_iterations=200, seed=1))
        assert result.upper_bound >= 0.5 - 1e-6

    def test_same_seed_same_result(self):
        opts = GilbertOptions(max_iterations=50, seed=11)
        first = gilbert_upper_bound(isotropic(0.5), CUT_2, opts)
        second = gilbert_upper_bound(isotropic(0.5), CUT_2, opts)
        assert first.frobenius_distance == second.frobenius_distance
        assert np.array_equal(first.mixture.weights, second.mixture.weights)

    def test_iteration_cap_is_reported(self, bell_state):
        result = gilbert_upper_bound(bell_state, CUT_2, GilbertOptions(max_iterations=5, seed=1))
        assert result.capped
        assert not result.converged

    def test_shape_mismatch(self):
        with pytest.raises(ValidationError):
            GilbertApproximator(np.eye(4) / 4, 2, 3)


class TestDistanceBounds:

    @pytest.mark.parametrize("p", [0.2, 0.5, 0.9])
    def test_lower_below_upper(self, p):
        bounds = distance_bounds(isotropic(p), CUT_2, GilbertOptions(max_iterations=500, seed=2))
        assert 0.0 <= bounds.lower <= bounds.upper + settings.tolerances.bound_order
        assert bounds.cut == CUT_2
        assert set(bounds.residuals) == {"primal", "dual", "gap"}

    def test_entangled_lower_bound(self):
        bounds = distance_bounds(isotropic(0.5), CUT_2, GilbertOptions(max_iterations=500, seed=2))
        assert bounds.lower == pytest.approx(0.125, abs=1e-6)


class TestSeparabilityEvidence:
    """Evidence grades and their transport under white-noise mixing"""

    def test_ppt_decisive(self):
        evidence = separability_evidence(isotropic(0.2), [0], [1])
        assert evidence.grade == EvidenceGrade.PPT_DECISIVE
        assert evidence.certified

    def test_npt_split_has_no_evidence(self):
        evidence = separability_evidence(isotropic(0.5), [0], [1])
        assert evidence.grade == EvidenceGrade.NONE
        assert not evidence.certified

    def test_purity_ball(self):
        evidence = separability_evidence(maximally_mixed(3), [0], [1, 2])
        assert evidence.grade == EvidenceGrade.PURITY_BALL
        assert recheck_evidence(evidence, maximally_mixed(3)) == (True, "purity ball")

    @pytest.mark.slow
    def test_numerical_grades_recheck(self):
        rho = star_pen(3, 0.2)
        evidence = separability_evidence(rho, [0, 1], [2, 3], GilbertOptions(seed=5))
        assert evidence.grade in (EvidenceGrade.GILBERT_BALL, EvidenceGrade.GILBERT)
        valid, reason = recheck_evidence(evidence, rho)
        assert valid, reason

    def test_recheck_rejects_other_state(self):
        evidence = separability_evidence(isotropic(0.2), [0], [1])
        valid, _ = recheck_evidence(evidence, isotropic(0.5))
        assert not valid

    def test_basis_mixture_is_maximally_mixed(self):
        assert np.allclose(basis_mixture(2, 3).matrix(), np.eye(6) / 6)

    def test_transport_numerical_grade(self):
        evidence = SeparabilityEvidence(
            grade=EvidenceGrade.GILBERT,
            left=(0,),
            right=(1,),
            frobenius_distance=0.01,
            trace_bound=0.02,
            mixture=basis_mixture(2, 2),
        )
        moved = transport_evidence(evidence, 0.5)
        assert moved.grade == EvidenceGrade.GILBERT
        assert moved.frobenius_distance == pytest.approx(0.005)
        assert moved.mixture.size == 8
        assert moved.mixture.weights.sum() == pytest.approx(1.0)

    def test_transport_keeps_exact_grades(self):
        evidence = separability_evidence(isotropic(0.2), [0], [1])
        assert transport_evidence(evidence, 0.3) is evidence

    def test_transport_purity_ball_stays_valid(self):
        rho = maximally_mixed(3)
        moved = transport_evidence(separability_evidence(rho, [0], [1, 2]), 0.4)
        assert moved.grade == EvidenceGrade.PURITY_BALL
        assert recheck_evidence(moved, rho)[0]

    def _stretched_evidence(self) -> SeparabilityEvidence:
        mixture = basis_mixture(2, 2)
        return SeparabilityEvidence(
            grade=EvidenceGrade.GILBERT,
            left=(0,),
            right=(1,),
            frobenius_distance=1e-6,
            trace_bound=2e-6,
            mixture=replace(mixture, left=mixture.left * (1 + 1e-7)),
        )

    def test_recheck_rejects_stretched_atoms(self):
        valid, reason = recheck_evidence(self._stretched_evidence(), maximally_mixed(2))
        assert not valid
        assert reason == "mixture atoms are not unit vectors"

    def test_unit_norm_tolerance_is_configurable(self):
        settings.tolerances.unit_norm = 1e-6
        valid, reason = recheck_evidence(self._stretched_evidence(), maximally_mixed(2))
        assert valid, reason

    @pytest.mark.parametrize("mu", [-0.1, 1.5])
    def test_transport_rejects_bad_weight(self, mu):
        with pytest.raises(ValidationError):
            transport_evidence(separability_evidence(isotropic(0.2), [0], [1]), mu)


class TestSumCriterion:

    def test_ghz_sum(self, ghz3):
        report = sum_criterion(ghz3)
        assert report.cuts == ("1|23", "12|3", "13|2")
        assert report.total == pytest.approx(1.5, abs=5e-3)
        assert report.threshold == 2.0
        assert report.verdict == SumVerdict.NO_VIOLATION
        assert report.failures == ()

    def test_maximally_mixed(self):
        report = sum_criterion(maximally_mixed(3))
        assert report.total == pytest.approx(0.0, abs=1e-5)
        assert report.verdict == SumVerdict.NO_VIOLATION

    def test_threads_do_not_change_order(self, ghz3):
        settings.threads = 1
        serial = sum_criterion(ghz3)
        settings.threads = 3
        parallel = sum_criterion(ghz3)
        assert serial.cuts == parallel.cuts
        assert serial.lower_bounds == pytest.approx(parallel.lower_bounds, abs=1e-9)


class TestWitness:
    """Fully decomposable GME witness"""

    def test_maximally_mixed_has_no_violation(self):
        cert = ppt_mixture_witness(maximally_mixed(3))
        assert cert.status == WitnessStatus.NO_VIOLATION
        assert cert.value >= -settings.tolerances.witness_violation

    def test_ghz_is_certified(self, ghz3):
        cert = ppt_mixture_witness(ghz3)
        assert cert.status == WitnessStatus.GME
        assert cert.value < -0.1
        assert cert.audit.passed
        assert cert.audit.recomputed_value == pytest.approx(cert.value)
        assert len(cert.decompositions) == 3

    def test_two_bell_pairs_are_certified(self):
        cert = ppt_mixture_witness(star_pen(3, 1.0))
        assert cert.status == WitnessStatus.GME
        assert cert.value < -0.1
        assert cert.audit.passed

    def test_biseparable_state_has_no_violation(self, bell_times_zero):
        cert = ppt_mixture_witness(bell_times_zero)
        assert cert.status == WitnessStatus.NO_VIOLATION

    def test_witness_is_hermitian(self, ghz3):
        witness = ppt_mixture_witness(ghz3).witness
        assert np.allclose(witness, witness.conj().T)


class TestActivatability:
    """NPT on every cut"""

    def test_strong_star_is_activatable(self):
        cert = activatable_via_npt(star_pen(3, 0.4))
        assert cert.verdict == ActivatabilityVerdict.ACTIVATABLE
        assert cert.negativities["1|23"] == pytest.approx(0.105, abs=1e-12)
        assert cert.negativities["12|3"] == pytest.approx(0.05, abs=1e-12)

    def test_weak_star_is_not_activatable(self):
        cert = activatable_via_npt(star_pen(3, 0.2))
        assert cert.verdict == ActivatabilityVerdict.NOT_ACTIVATABLE
        assert cert.separable_cut == "1|23"

    def test_bell_times_zero(self, bell_times_zero):
        cert = activatable_via_npt(bell_times_zero)
        assert cert.verdict == ActivatabilityVerdict.NOT_ACTIVATABLE
        assert cert.separable_cut == "12|3"
        assert cert.negativities["12|3"] == 0.0

    def test_block_negativity_matches_dense(self):
        rho = star_pen(3, 0.4)
        for cut in enumerate_bipartitions(3):
            assert product_negativity(rho, cut) == pytest.approx(negativity(rho, cut), abs=1e-12)

    def test_two_copies_factorize_once(self, mocker):
        spy = mocker.spy(activatability_module, "factorize_product")
        cert = activatable_via_npt(copies(star_pen(3, 0.4), 2))
        assert spy.call_count == 1
        assert cert.verdict == ActivatabilityVerdict.ACTIVATABLE
        assert cert.negativities["1|23"] == pytest.approx((1.1 ** 4 - 1) / 2, abs=1e-12)
        assert cert.negativities["12|3"] == pytest.approx(0.105, abs=1e-12)
        assert cert.negativities["13|2"] == pytest.approx(0.105, abs=1e-12)


class TestRandomBiseparable:

    def test_deterministic_for_seed(self):
        assert np.array_equal(random_biseparable(3, seed=7).matrix, random_biseparable(3, seed=7).matrix)

    def test_two_parties_are_separable(self):
        rho = random_biseparable(2, seed=3)
        assert negativity(rho, CUT_2) == 0.0

    def test_rejects_single_party(self):
        with pytest.raises(ValidationError):
            random_biseparable(1)

    @pytest.mark.slow
    def test_witness_never_fires(self):
        for seed in range(200):
            cert = ppt_mixture_witness(random_biseparable(3, seed=seed))
            assert cert.status == WitnessStatus.NO_VIOLATION, seed
            assert cert.audit is not None and cert.audit.passed, (seed, cert.audit)

    @pytest.mark.slow
    def test_sum_never_fires(self):
        for seed in range(200):
            report = sum_criterion(random_biseparable(3, seed=seed))
            assert report.total <= report.threshold + settings.tolerances.sum_margin
            assert len(report.lower_bounds) == len(enumerate_bipartitions(3))
