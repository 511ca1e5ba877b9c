"""
Infeasible-start primal-dual interior point solver

Mehrotra predictor-corrector with Nesterov-Todd scaling. Complex Hermitian
blocks are solved through the real symmetric embedding
[[Re, -Im], [Im, Re]]; the problem data is invariant under that embedding's
symmetry, so no extra constraints are needed and the complex solution is
read back by averaging the two diagonal and the two off-diagonal quadrants.
"""
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import linalg, sparse

from ...core.config import settings
from ...core.exceptions import DimensionError, ValidationError
from ...core.logging import get_logger
from .base import Coefficient, SdpProblem, SdpSolution, SdpSolver, SdpStatus

logger = get_logger(__name__)

# Rows with more nonzeros than this fraction of the block size use the dense Schur path
_DENSE_ROW_FRACTION = 0.5
# Floats allowed in one Schur assembly chunk
_CHUNK_ELEMENTS = 2_000_000
_INFEASIBILITY_RATIO = 1e10


@dataclass
class _BlockRows:
    """Constraint rows touching one block, split for Schur assembly"""
    sparse_rows: np.ndarray
    row_idx: np.ndarray   # (rows, K) matrix row indices
    col_idx: np.ndarray   # (rows, K) matrix column indices
    values: np.ndarray    # (rows, K) zero padded
    dense_rows: np.ndarray


class _EmbeddedProblem:
    """Real symmetric form of an SdpProblem"""

    def __init__(self, problem: SdpProblem):
        self.problem = problem
        self.sizes = [blk.real_dim for blk in problem.blocks]
        m = problem.constraint_count
        self.m = m
        self.b = np.array([c.rhs for c in problem.constraints], dtype=float)

        self.objective = [
            self._embed_dense(coef, blk, f"objective block {i}")
            for i, (coef, blk) in enumerate(zip(problem.objective, problem.blocks))
        ]

        triplets: List[Tuple[List, List, List]] = [([], [], []) for _ in problem.blocks]
        for i, con in enumerate(problem.constraints):
            for b, coef in con.coefficients.items():
                r, c, v = self._embed_triplets(coef, problem.blocks[b], f"constraint {i}")
                n = self.sizes[b]
                rows, cols, vals = triplets[b]
                rows.append(np.full(r.size, i, dtype=np.int64))
                cols.append(r * n + c)
                vals.append(v)

        self.ops: List[sparse.csr_matrix] = []
        self.block_rows: List[_BlockRows] = []
        for b, n in enumerate(self.sizes):
            rows, cols, vals = triplets[b]
            if rows:
                op = sparse.csr_matrix(
                    (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                    shape=(m, n * n),
                )
            else:
                op = sparse.csr_matrix((m, n * n))
            op.sum_duplicates()
            op.eliminate_zeros()
            self.ops.append(op)
            self.block_rows.append(self._split_rows(op, n))

        self.b_norm = float(np.linalg.norm(self.b))
        self.c_norm = float(np.sqrt(sum(np.sum(c * c) for c in self.objective)))

    @staticmethod
    def _coo(coef: Coefficient, dim: int, where: str) -> sparse.coo_matrix:
        coo = sparse.coo_matrix(coef, dtype=np.complex128)
        if coo.shape != (dim, dim):
            raise ValidationError(f"{where}: coefficient shape {coo.shape} != ({dim}, {dim})")
        if coo.nnz:
            diff = abs(coo - coo.conj().T)
            if diff.nnz and diff.max() > settings.tolerances.hermitian:
                raise ValidationError(f"{where}: coefficient is not Hermitian")
        return coo

    def _embed_triplets(self, coef: Coefficient, blk, where: str):
        coo = self._coo(coef, blk.dim, where)
        r, c, v = coo.row.astype(np.int64), coo.col.astype(np.int64), coo.data
        if not blk.is_complex:
            if np.any(np.abs(v.imag) > settings.tolerances.hermitian):
                raise ValidationError(f"{where}: complex coefficient on a real block")
            return r, c, v.real.copy()
        d = blk.dim
        re, im = 0.5 * v.real, 0.5 * v.imag
        rr = np.concatenate([r, r, r + d, r + d])
        cc = np.concatenate([c, c + d, c, c + d])
        vv = np.concatenate([re, -im, im, re])
        keep = vv != 0.0
        return rr[keep], cc[keep], vv[keep]

    def _embed_dense(self, coef: Optional[Coefficient], blk, where: str) -> np.ndarray:
        n = blk.real_dim
        out = np.zeros((n, n))
        if coef is None:
            return out
        r, c, v = self._embed_triplets(coef, blk, where)
        np.add.at(out, (r, c), v)
        return out

    @staticmethod
    def _split_rows(op: sparse.csr_matrix, n: int) -> _BlockRows:
        counts = np.diff(op.indptr)
        touching = np.flatnonzero(counts)
        dense_mask = counts[touching] > max(8, int(_DENSE_ROW_FRACTION * n))
        dense_rows = touching[dense_mask]
        sparse_rows = touching[~dense_mask]
        width = int(counts[sparse_rows].max()) if sparse_rows.size else 0

        row_idx = np.zeros((sparse_rows.size, width), dtype=np.int64)
        col_idx = np.zeros((sparse_rows.size, width), dtype=np.int64)
        values = np.zeros((sparse_rows.size, width))
        for k, row in enumerate(sparse_rows):
            start, stop = op.indptr[row], op.indptr[row + 1]
            flat = op.indices[start:stop]
            row_idx[k, : stop - start] = flat // n
            col_idx[k, : stop - start] = flat % n
            values[k, : stop - start] = op.data[start:stop]
        return _BlockRows(sparse_rows, row_idx, col_idx, values, dense_rows)

    # Linear maps

    def apply(self, xs: List[np.ndarray]) -> np.ndarray:
        out = np.zeros(self.m)
        for op, x in zip(self.ops, xs):
            out += op @ x.ravel()
        return out

    def adjoint(self, y: np.ndarray) -> List[np.ndarray]:
        mats = []
        for op, n in zip(self.ops, self.sizes):
            a = (op.T @ y).reshape(n, n)
            mats.append((a + a.T) / 2)
        return mats

    def row_norms(self, b: int) -> np.ndarray:
        op = self.ops[b]
        return np.sqrt(np.asarray(op.multiply(op).sum(axis=1)).ravel())

    def recover_primal(self, xs: List[np.ndarray]) -> List[np.ndarray]:
        out = []
        for blk, x in zip(self.problem.blocks, xs):
            if blk.is_complex:
                d = blk.dim
                tl, tr, bl, br = x[:d, :d], x[:d, d:], x[d:, :d], x[d:, d:]
                out.append((tl + br) / 2 + 1j * (bl - tr) / 2)
            else:
                out.append(x.copy())
        return out

    def recover_slack(self, zs: List[np.ndarray]) -> List[np.ndarray]:
        out = []
        for blk, z in zip(self.problem.blocks, zs):
            if blk.is_complex:
                d = blk.dim
                tl, tr, bl, br = z[:d, :d], z[:d, d:], z[d:, :d], z[d:, d:]
                out.append((tl + br) + 1j * (bl - tr))
            else:
                out.append(z.copy())
        return out


def _inner(xs: List[np.ndarray], zs: List[np.ndarray]) -> float:
    return float(sum(np.sum(x * z) for x, z in zip(xs, zs)))


def _factor(x: np.ndarray) -> np.ndarray:
    """L with x = L L^T; eigen-based when x is numerically singular"""
    try:
        return linalg.cholesky(x, lower=True)
    except linalg.LinAlgError:
        values, vectors = np.linalg.eigh((x + x.T) / 2)
        floor = max(float(values[-1]), 1.0) * 1e-15
        return vectors * np.sqrt(np.maximum(values, floor))


@dataclass
class _Scaling:
    g: np.ndarray
    g_inv: np.ndarray
    lam: np.ndarray
    w: np.ndarray


def _nt_scaling(x: np.ndarray, z: np.ndarray) -> _Scaling:
    lx = _factor(x)
    lz = _factor(z)
    u, sv, vt = np.linalg.svd(lz.T @ lx)
    sv = np.maximum(sv, np.finfo(float).tiny)
    root = np.sqrt(sv)
    g = (lx @ vt.T) / root
    g_inv = (u.T @ lz.T) / root[:, None]
    return _Scaling(g=g, g_inv=g_inv, lam=sv, w=g @ g.T)


def _max_step(scaling: _Scaling, scaled_direction: np.ndarray) -> float:
    """Largest alpha keeping Lambda + alpha * D PSD"""
    s = 1.0 / np.sqrt(scaling.lam)
    k = s[:, None] * scaled_direction * s[None, :]
    lowest = float(np.linalg.eigvalsh((k + k.T) / 2)[0])
    return np.inf if lowest >= 0 else -1.0 / lowest


class InteriorPointSolver(SdpSolver):
    """
    Dense primal-dual interior point method

    Schur complement rows touching a block are assembled in chunks: sparse
    rows through W[:, r] v W[c, :] outer products, dense rows through W A W.
    """

    def __init__(
        self,
        max_iterations: Optional[int] = None,
        step_fraction: Optional[float] = None,
        feasibility_tolerance: Optional[float] = None,
        gap_tolerance: Optional[float] = None,
    ):
        self.max_iterations = max_iterations
        self.step_fraction = step_fraction
        self.feasibility_tolerance = feasibility_tolerance
        self.gap_tolerance = gap_tolerance

    def get_solver_name(self) -> str:
        return "Primal-dual interior point (NT, predictor-corrector)"

    def _limits(self) -> Tuple[int, float, float, float, float]:
        tol = settings.tolerances
        return (
            self.max_iterations or settings.sdp_max_iterations,
            self.step_fraction or settings.sdp_step_fraction,
            self.feasibility_tolerance or tol.sdp_feasibility,
            self.gap_tolerance or tol.sdp_gap,
            tol.sdp_regularization,
        )

    def solve(self, problem: SdpProblem) -> SdpSolution:
        """
        Solve a block SDP

        Args:
            problem: primal standard form problem

        Returns:
            SdpSolution with status, residuals and per-iteration diagnostics
        """
        cap = settings.sdp_dimension_cap
        too_big = [blk.dim for blk in problem.blocks if blk.dim > cap]
        if too_big:
            raise DimensionError(f"SDP block dimension {max(too_big)} exceeds cap {cap}")

        max_iter, gamma, feas_tol, gap_tol, reg_tol = self._limits()
        started = time.perf_counter()
        data = _EmbeddedProblem(problem)
        sizes = data.sizes
        n_total = sum(sizes)

        xs, ys, zs = self._initial_point(data)
        diagnostics: List[Dict[str, float]] = []
        status = SdpStatus.MAX_ITERATIONS
        iteration = 0

        for iteration in range(max_iter + 1):
            measures = self._measures(data, xs, ys, zs)
            pobj, dobj, pinf, dinf, gap, r_p, r_d = measures
            mu = _inner(xs, zs) / n_total
            record = {
                "iteration": iteration,
                "primal_objective": pobj,
                "dual_objective": dobj,
                "primal_residual": pinf,
                "dual_residual": dinf,
                "gap": gap,
                "mu": mu,
            }

            if pinf <= feas_tol and dinf <= feas_tol and gap <= gap_tol:
                diagnostics.append(record)
                status = SdpStatus.OPTIMAL
                break
            if self._looks_infeasible(data, pobj, dobj, r_p, r_d):
                diagnostics.append(record)
                status = SdpStatus.INFEASIBLE
                break
            if iteration == max_iter:
                diagnostics.append(record)
                break

            scalings = [_nt_scaling(x, z) for x, z in zip(xs, zs)]
            try:
                factor = self._schur_factor(data, scalings, reg_tol)
            except linalg.LinAlgError:
                logger.warning("Schur complement factorization failed", problem=problem.name, iteration=iteration)
                diagnostics.append(record)
                break

            def direction(rcs: List[np.ndarray]):
                rhs = r_p - data.apply(
                    [rc - s.w @ rd @ s.w for rc, rd, s in zip(rcs, r_d, scalings)]
                )
                dy = linalg.cho_solve(factor, rhs) if factor is not None else np.zeros(0)
                at_dy = data.adjoint(dy)
                dz = [rd - a for rd, a in zip(r_d, at_dy)]
                dx = [rc - s.w @ d @ s.w for rc, d, s in zip(rcs, dz, scalings)]
                dx = [(d + d.T) / 2 for d in dx]
                return dx, dy, dz

            def step_lengths(dx, dz) -> Tuple[float, float, List, List]:
                sx = [s.g_inv @ d @ s.g_inv.T for d, s in zip(dx, scalings)]
                sz = [s.g.T @ d @ s.g for d, s in zip(dz, scalings)]
                ap = min(_max_step(s, d) for s, d in zip(scalings, sx))
                ad = min(_max_step(s, d) for s, d in zip(scalings, sz))
                return ap, ad, sx, sz

            # Predictor
            dx_a, dy_a, dz_a = direction([-x for x in xs])
            ap_max, ad_max, sx_a, sz_a = step_lengths(dx_a, dz_a)
            ap_a, ad_a = min(1.0, ap_max), min(1.0, ad_max)
            mu_aff = _inner(
                [x + ap_a * d for x, d in zip(xs, dx_a)],
                [z + ad_a * d for z, d in zip(zs, dz_a)],
            ) / n_total
            sigma = float(np.clip((mu_aff / mu) ** 3, 0.0, 1.0)) if mu > 0 else 0.0

            # Corrector
            rcs = []
            for s, ax, az in zip(scalings, sx_a, sz_a):
                lam = s.lam
                prod = ax @ az
                rhs = sigma * mu * np.eye(lam.size) - np.diag(lam * lam) - (prod + prod.T) / 2
                u = 2.0 * rhs / (lam[:, None] + lam[None, :])
                rcs.append(s.g @ u @ s.g.T)
            dx, dy, dz = direction(rcs)
            ap_max, ad_max, _, _ = step_lengths(dx, dz)
            alpha_p = min(1.0, gamma * ap_max)
            alpha_d = min(1.0, gamma * ad_max)

            xs = [x + alpha_p * d for x, d in zip(xs, dx)]
            xs = [(x + x.T) / 2 for x in xs]
            ys = ys + alpha_d * dy
            zs = [z + alpha_d * d for z, d in zip(zs, dz)]
            zs = [(z + z.T) / 2 for z in zs]

            record.update(sigma=sigma, alpha_primal=alpha_p, alpha_dual=alpha_d)
            diagnostics.append(record)
            logger.debug("IPM iteration", problem=problem.name, **record)

        pobj, dobj, pinf, dinf, gap, _, _ = self._measures(data, xs, ys, zs)
        elapsed = time.perf_counter() - started
        log = logger.info if status == SdpStatus.OPTIMAL else logger.warning
        log(
            "SDP finished",
            problem=problem.name,
            status=status.value,
            iterations=iteration,
            primal_objective=pobj,
            dual_objective=dobj,
            constraints=data.m,
            seconds=round(elapsed, 3),
        )

        return SdpSolution(
            primal_blocks=data.recover_primal(xs),
            dual=ys.copy(),
            dual_slack=data.recover_slack(zs),
            primal_objective=pobj,
            dual_objective=dobj,
            gap=gap,
            primal_residual=pinf,
            dual_residual=dinf,
            status=status,
            iterations=iteration,
            diagnostics=diagnostics,
        )

    @staticmethod
    def _initial_point(data: _EmbeddedProblem):
        xs, zs = [], []
        for b, n in enumerate(data.sizes):
            norms = data.row_norms(b)
            touching = norms > 0
            if np.any(touching):
                ratio = np.max((1.0 + np.abs(data.b[touching])) / (1.0 + norms[touching]))
                a_max = float(np.max(norms))
            else:
                ratio, a_max = 0.0, 0.0
            c_norm = float(np.linalg.norm(data.objective[b]))
            xi = max(10.0, np.sqrt(n), n * ratio)
            eta = max(10.0, np.sqrt(n), a_max, c_norm)
            xs.append(xi * np.eye(n))
            zs.append(eta * np.eye(n))
        return xs, np.zeros(data.m), zs

    @staticmethod
    def _measures(data: _EmbeddedProblem, xs, ys, zs):
        r_p = data.b - data.apply(xs)
        at_y = data.adjoint(ys)
        r_d = [c - z - a for c, z, a in zip(data.objective, zs, at_y)]
        pobj = _inner(data.objective, xs)
        dobj = float(data.b @ ys)
        pinf = float(np.linalg.norm(r_p)) / (1.0 + data.b_norm)
        dinf = float(np.sqrt(sum(np.sum(r * r) for r in r_d))) / (1.0 + data.c_norm)
        gap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        return pobj, dobj, pinf, dinf, gap, r_p, r_d

    @staticmethod
    def _looks_infeasible(data: _EmbeddedProblem, pobj, dobj, r_p, r_d) -> bool:
        rd_norm = float(np.sqrt(sum(np.sum(r * r) for r in r_d)))
        # Dual ray: b^T y -> +inf with bounded A^T y + Z
        if dobj > _INFEASIBILITY_RATIO * (1.0 + data.c_norm + rd_norm):
            return True
        # Primal ray: <C, X> -> -inf with bounded A(X)
        ax_norm = float(np.linalg.norm(data.b - r_p))
        return -pobj > _INFEASIBILITY_RATIO * (1.0 + ax_norm)

    @staticmethod
    def _schur_factor(data: _EmbeddedProblem, scalings: List[_Scaling], reg_tol: float):
        m = data.m
        if m == 0:
            return None
        schur = np.zeros((m, m))
        for b, (op, n, rows, s) in enumerate(zip(data.ops, data.sizes, data.block_rows, scalings)):
            w = s.w
            if rows.sparse_rows.size:
                chunk = max(1, _CHUNK_ELEMENTS // (n * n))
                for start in range(0, rows.sparse_rows.size, chunk):
                    sl = slice(start, start + chunk)
                    r_idx, c_idx, vals = rows.row_idx[sl], rows.col_idx[sl], rows.values[sl]
                    left = np.transpose(w[:, r_idx], (1, 0, 2)) * vals[:, None, :]
                    right = w[c_idx, :]
                    t = np.matmul(left, right).reshape(r_idx.shape[0], n * n)
                    schur[:, rows.sparse_rows[sl]] += op @ t.T
            for row in rows.dense_rows:
                a = op.getrow(row).toarray().reshape(n, n)
                schur[:, row] += op @ (w @ a @ w).ravel()

        schur = (schur + schur.T) / 2
        try:
            return linalg.cho_factor(schur, lower=True, check_finite=False)
        except linalg.LinAlgError:
            pass

        scale = max(1.0, float(np.max(np.abs(np.diag(schur)))))
        reg = reg_tol * scale
        for attempt in range(8):
            try:
                factor = linalg.cho_factor(schur + reg * np.eye(m), lower=True, check_finite=False)
                logger.warning("Regularized Schur complement", regularization=reg, attempt=attempt)
                return factor
            except linalg.LinAlgError:
                reg *= 100.0
        raise linalg.LinAlgError("Schur complement is not positive definite")
