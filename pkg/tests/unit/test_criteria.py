"""
Unit tests for spectral and product-aware separability criteria
"""
import numpy as np
import pytest

from gmelab.core.exceptions import ValidationError
from gmelab.models.certificates import Verdict
from gmelab.models.domain import Bipartition
from gmelab.services.criteria import (
    certify_cut_separable,
    factorize_product,
    gb_ball_separable,
    is_ppt_decisive,
    negativity,
    negativity_verdict,
    ppt_min_eig,
    projector_fidelity,
)
from gmelab.services.states import isotropic, maximally_mixed, star_pen

CUT_2 = Bipartition((1,), 2)


class TestPpt:
    """PPT minimum eigenvalue"""

    def test_isotropic_half_is_npt(self):
        result = ppt_min_eig(isotropic(0.5), CUT_2)
        assert result.value == pytest.approx(-0.125, abs=1e-12)
        assert result.verdict == Verdict.ENTANGLED

    def test_threshold_is_separable(self):
        result = ppt_min_eig(isotropic(1 / 3), CUT_2)
        assert result.value == pytest.approx(0.0, abs=1e-12)
        assert result.verdict == Verdict.SEPARABLE

    def test_sign_flips_once_on_grid(self):
        grid = np.linspace(0.0, 1.0, 101)
        results = [ppt_min_eig(isotropic(p), CUT_2) for p in grid]
        for p, result in zip(grid, results):
            assert result.value == pytest.approx((1 - 3 * p) / 4, abs=1e-10)
        entangled = [r.verdict == Verdict.ENTANGLED for r in results]
        flips = [i for i in range(1, len(grid)) if entangled[i] != entangled[i - 1]]
        assert len(flips) == 1
        assert grid[flips[0] - 1] <= 1 / 3 < grid[flips[0]]

    def test_ghz_every_cut_is_npt(self, ghz3):
        for label in ("1|23", "12|3", "13|2"):
            assert ppt_min_eig(ghz3, Bipartition.parse(label, 3)).verdict == Verdict.ENTANGLED

    def test_large_cut_is_never_separable(self):
        # 2x4 cut of the maximally mixed three-qubit state
        result = ppt_min_eig(maximally_mixed(3), Bipartition((1,), 3))
        assert result.verdict == Verdict.INCONCLUSIVE

    def test_decisive_dimensions(self):
        assert is_ppt_decisive(2, 2)
        assert is_ppt_decisive(2, 3)
        assert not is_ppt_decisive(2, 4)

    def test_cut_must_match_layout(self):
        with pytest.raises(ValidationError):
            ppt_min_eig(isotropic(0.5), Bipartition((1,), 3))


class TestNegativity:

    @pytest.mark.parametrize("p, expected", [(1.0, 0.5), (2 / 3, 0.25), (1 / 3, 0.0), (0.1, 0.0)])
    def test_isotropic_values(self, p, expected):
        assert negativity(isotropic(p), CUT_2) == pytest.approx(expected, abs=1e-12)

    def test_zero_is_never_entangled(self):
        assert negativity_verdict(isotropic(0.2), CUT_2).verdict == Verdict.INCONCLUSIVE

    def test_positive_is_entangled(self):
        assert negativity_verdict(isotropic(0.8), CUT_2).verdict == Verdict.ENTANGLED

    def test_star_cuts(self):
        rho = star_pen(3, 0.4)
        # hub cut breaks both edges
        assert negativity(rho, Bipartition.parse("1|23", 3)) > negativity(rho, Bipartition.parse("12|3", 3))
        assert negativity(rho, Bipartition.parse("12|3", 3)) == pytest.approx(0.05, abs=1e-12)
        assert negativity(rho, Bipartition.parse("13|2", 3)) == pytest.approx(0.05, abs=1e-12)


class TestPurityBall:

    def test_threshold_is_inside(self):
        assert gb_ball_separable(isotropic(1 / 3), CUT_2).verdict == Verdict.SEPARABLE

    def test_entangled_state_is_inconclusive(self):
        result = gb_ball_separable(isotropic(0.5), CUT_2)
        assert result.value == pytest.approx((1 + 3 * 0.25) / 4)
        assert result.verdict == Verdict.INCONCLUSIVE

    def test_maximally_mixed(self):
        assert gb_ball_separable(maximally_mixed(3), Bipartition((1, 2), 3)).verdict == Verdict.SEPARABLE


class TestProjectorFidelity:

    @pytest.mark.parametrize("p", [0.0, 0.3, 0.75, 1.0])
    def test_isotropic(self, p, bell_state):
        assert projector_fidelity(isotropic(p), bell_state) == pytest.approx((1 + 3 * p) / 4, abs=1e-12)

    def test_rejects_mixed_reference(self, bell_state):
        with pytest.raises(ValidationError):
            projector_fidelity(bell_state, isotropic(0.5))


class TestProductStructure:
    """Block factorization and product-aware cut certification"""

    def test_star_factorizes_by_edge(self):
        groups = factorize_product(star_pen(3, 0.4))
        assert {tuple(g) for g in groups} == {(0, 2), (1, 3)}

    def test_entangled_state_is_one_block(self, ghz3):
        assert factorize_product(ghz3) == [[0, 1, 2]]

    def test_maximally_mixed_is_fully_product(self):
        assert factorize_product(maximally_mixed(3)) == [[0], [1], [2]]

    def test_bell_times_zero(self, bell_times_zero):
        assert factorize_product(bell_times_zero) == [[0, 1], [2]]

    def test_weak_star_is_separable_on_every_cut(self):
        rho = star_pen(3, 0.2)
        for label in ("1|23", "12|3", "13|2"):
            assert certify_cut_separable(rho, Bipartition.parse(label, 3)).verdict == Verdict.SEPARABLE

    def test_strong_star_is_npt_on_every_cut(self):
        rho = star_pen(3, 0.4)
        for label in ("1|23", "12|3", "13|2"):
            result = certify_cut_separable(rho, Bipartition.parse(label, 3))
            assert result.verdict == Verdict.ENTANGLED
            assert result.value < 0

    def test_cut_between_blocks_is_separable(self, bell_times_zero):
        result = certify_cut_separable(bell_times_zero, Bipartition((1, 2), 3))
        assert result.verdict == Verdict.SEPARABLE
        assert result.detail == "product across cut"

    def test_cut_through_bell_pair(self, bell_times_zero):
        assert certify_cut_separable(bell_times_zero, Bipartition((1, 3), 3)).verdict == Verdict.ENTANGLED
