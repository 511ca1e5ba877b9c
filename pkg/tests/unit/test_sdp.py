"""
Unit tests for the interior point SDP solver
"""
import numpy as np
import pytest

from gmelab.core.exceptions import SolverError, ValidationError
from gmelab.services.dependencies import get_sdp_solver, reset_services, set_sdp_solver
from gmelab.services.sdp import (
    InteriorPointSolver,
    ProblemBuilder,
    SdpBlock,
    SdpConstraint,
    SdpProblem,
    SdpSolution,
    SdpStatus,
    solve,
)
from gmelab.services.tensor import min_eigenvalue, trace_norm


def _min_eig_problem(c: np.ndarray, is_complex: bool = True) -> SdpProblem:
    builder = ProblemBuilder("min-eig")
    x = builder.add_block(c.shape[0], is_complex=is_complex, name="X")
    builder.set_objective(x, c)
    builder.add_trace_constraint(x, 1.0)
    return builder.build()


def _real_embedding(c: np.ndarray) -> np.ndarray:
    return np.block([[c.real, -c.imag], [c.imag, c.real]]).astype(np.complex128)


def _scale_rows(problem: SdpProblem, scales: np.ndarray) -> SdpProblem:
    constraints = tuple(
        SdpConstraint({b: coef * float(s) for b, coef in con.coefficients.items()}, float(s) * con.rhs)
        for con, s in zip(problem.constraints, scales)
    )
    return SdpProblem(problem.blocks, problem.objective, constraints, problem.name)


def _trace_norm_problem(a: np.ndarray, is_complex: bool = True) -> SdpProblem:
    d = a.shape[0]
    builder = ProblemBuilder("trace-norm")
    pos = builder.add_block(d, is_complex=is_complex, name="P")
    neg = builder.add_block(d, is_complex=is_complex, name="N")
    builder.set_objective(pos, np.eye(d, dtype=np.complex128))
    builder.set_objective(neg, np.eye(d, dtype=np.complex128))
    builder.add_hermitian_equality([(pos, 1.0, None), (neg, -1.0, None)], a)
    return builder.build()


class TestInteriorPoint:
    """Oracle problems with eigensolver answers"""

    def test_minimum_eigenvalue(self, random_hermitian):
        c = random_hermitian(8)
        solution = solve(_min_eig_problem(c))
        assert solution.status == SdpStatus.OPTIMAL
        assert solution.primal_objective == pytest.approx(min_eigenvalue(c), abs=1e-7)
        assert solution.dual_objective == pytest.approx(min_eigenvalue(c), abs=1e-6)

    def test_real_block(self, rng):
        g = rng.standard_normal((6, 6))
        c = (g + g.T) / 2
        solution = solve(_min_eig_problem(c.astype(np.complex128), is_complex=False))
        assert solution.primal_objective == pytest.approx(min_eigenvalue(c), abs=1e-7)

    def test_feasibility_only(self):
        builder = ProblemBuilder("feasibility")
        x = builder.add_block(1)
        builder.add_trace_constraint(x, 1.0)
        solution = solve(builder.build())
        assert solution.is_optimal
        assert solution.primal_blocks[0][0, 0].real == pytest.approx(1.0, abs=1e-7)

    def test_trace_norm(self, random_hermitian):
        a = random_hermitian(8)
        solution = solve(_trace_norm_problem(a))
        assert solution.is_optimal
        assert solution.primal_objective == pytest.approx(trace_norm(a), abs=1e-7)

    def test_primal_blocks_are_psd(self, random_hermitian):
        solution = solve(_min_eig_problem(random_hermitian(4)))
        for block in solution.primal_blocks:
            assert np.linalg.eigvalsh((block + block.conj().T) / 2).min() >= -1e-8

    def test_diagnostics_recorded(self, random_hermitian):
        solution = solve(_min_eig_problem(random_hermitian(4)))
        assert len(solution.diagnostics) == solution.iterations + 1
        assert solution.summary()["status"] == "optimal"

    @pytest.mark.slow
    @pytest.mark.parametrize("dim", [8, 16])
    def test_agreement_over_random_instances(self, dim, random_hermitian):
        for _ in range(50):
            c = random_hermitian(dim)
            assert solve(_min_eig_problem(c)).primal_objective == pytest.approx(min_eigenvalue(c), abs=1e-7)


class TestSolverInvariants:
    """Duality, constraint scaling and the real embedding of complex blocks"""

    def test_weak_duality_at_termination(self, random_hermitian):
        for problem in [_min_eig_problem(random_hermitian(6)) for _ in range(5)] + [
            _trace_norm_problem(random_hermitian(6)) for _ in range(3)
        ]:
            solution = solve(problem)
            assert solution.is_optimal
            assert solution.dual_objective <= solution.primal_objective + 1e-6

    def test_row_scaling_leaves_optimum_unchanged(self, random_hermitian, rng):
        problem = _trace_norm_problem(random_hermitian(5))
        scales = rng.uniform(0.1, 10.0, problem.constraint_count)
        plain = solve(problem)
        scaled = solve(_scale_rows(problem, scales))
        assert scaled.is_optimal
        assert scaled.primal_objective == pytest.approx(plain.primal_objective, abs=1e-6)

    def test_scaled_trace_constraint_rescales_multiplier(self, random_hermitian):
        problem = _min_eig_problem(random_hermitian(6))
        plain = solve(problem)
        scaled = solve(_scale_rows(problem, np.array([4.0])))
        assert scaled.primal_objective == pytest.approx(plain.primal_objective, abs=1e-6)
        assert 4.0 * scaled.dual[0] == pytest.approx(plain.dual[0], abs=1e-6)

    def test_complex_block_matches_real_embedding(self, random_hermitian):
        c = random_hermitian(6)
        direct = solve(_min_eig_problem(c))
        embedded = solve(_min_eig_problem(_real_embedding(c), is_complex=False))
        assert embedded.primal_objective == pytest.approx(direct.primal_objective, abs=1e-7)
        assert direct.primal_objective == pytest.approx(min_eigenvalue(c), abs=1e-7)

    def test_embedding_doubles_the_trace_norm(self, random_hermitian):
        a = random_hermitian(5)
        direct = solve(_trace_norm_problem(a))
        embedded = solve(_trace_norm_problem(_real_embedding(a), is_complex=False))
        assert embedded.primal_objective == pytest.approx(2.0 * direct.primal_objective, abs=1e-6)


class TestProblemValidation:

    def test_objective_per_block(self):
        with pytest.raises(ValidationError):
            SdpProblem(blocks=(SdpBlock(2),), objective=(), constraints=())

    def test_block_dimension(self):
        with pytest.raises(ValidationError):
            SdpBlock(0)

    def test_require_optimal(self):
        solution = SdpSolution(
            primal_blocks=[],
            dual=np.zeros(0),
            dual_slack=[],
            primal_objective=0.0,
            dual_objective=0.0,
            gap=1.0,
            primal_residual=1.0,
            dual_residual=1.0,
            status=SdpStatus.MAX_ITERATIONS,
            iterations=200,
        )
        with pytest.raises(SolverError) as excinfo:
            solution.require_optimal("test")
        assert excinfo.value.solution is solution


class TestSolverProvider:
    """Dependency container"""

    def test_singleton(self):
        reset_services()
        first = get_sdp_solver()
        assert isinstance(first, InteriorPointSolver)
        assert get_sdp_solver() is first

    def test_injected_solver_is_used(self, mocker):
        fake = mocker.Mock()
        fake.solve.return_value = "solved"
        set_sdp_solver(fake)
        assert solve(_min_eig_problem(np.eye(2, dtype=np.complex128))) == "solved"
        fake.solve.assert_called_once()
