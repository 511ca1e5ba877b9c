"""
Explicit biseparable decompositions of sigma_n(p)^(x)k and their verification
"""
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ...core.config import settings
from ...core.exceptions import ValidationError
from ...core.logging import get_logger
from ...models.certificates import (
    BiseparableCertificate,
    DecompositionTerm,
    SeparabilityEvidence,
    TensorBlock,
    TermDiagnostics,
    VerificationReport,
)
from ...models.domain import Bipartition, DensityMatrix, SubsystemLayout
from ..distance import GilbertOptions, recheck_evidence, separability_evidence
from ..partitions import split_for_factors
from ..states import copies, edge_factors, isotropic, isotropic_matrix, star_pen
from ..tensor import (
    eigenvalues,
    inverse_permutation,
    kron_all,
    partial_trace_array,
    permute_array,
    trace_norm,
)
from .extraction import key_state, phi_matrix
from .scalars import ISOTROPIC_THRESHOLD, f_k

logger = get_logger(__name__)


def target_state(n: int, k: int, p: float) -> DensityMatrix:
    """sigma_n(p)^(x)k regrouped party-major"""
    return copies(star_pen(n, p), k)


class _StarLayout:
    """Factor bookkeeping for the edges of sigma_n(p)^(x)k"""

    def __init__(self, layout: SubsystemLayout, n: int, k: int):
        self.layout = layout
        self.n = n
        self.k = k
        self.edges: Dict[int, Tuple[List[int], List[int]]] = {
            leaf: edge_factors(layout, 1, leaf) for leaf in range(2, n + 1)
        }

    def block(self, factors: Sequence[int], matrix: np.ndarray, evidence=None) -> TensorBlock:
        factors = tuple(sorted(factors))
        return TensorBlock(factors, DensityMatrix(matrix, self.layout.select(factors)), evidence)

    def edge(self, leaf: int) -> List[int]:
        hub, tail = self.edges[leaf]
        return hub + tail

    def phi(self, leaf: int, p: float) -> TensorBlock:
        return self.block(self.edge(leaf), phi_matrix(p, self.k))

    def white(self, factors: Sequence[int]) -> TensorBlock:
        d = self.layout.dimension_of(factors)
        return self.block(factors, np.eye(d, dtype=np.complex128) / d)

    def split_white(self, leaf: int) -> List[TensorBlock]:
        hub, tail = self.edges[leaf]
        return [self.white(hub), self.white(tail)]


def _leaf_cut(leaf: int, n: int) -> Bipartition:
    return Bipartition.from_parties([leaf], n)


def _key_block(star: _StarLayout, leaf: int, p: float, evidence: Optional[SeparabilityEvidence]) -> TensorBlock:
    factors = sorted(star.edge(leaf))
    state = key_state(p, star.k, star.n, star.layout.select(factors))
    if evidence is None:
        left, right = list(range(star.k)), list(range(star.k, 2 * star.k))
        evidence = separability_evidence(state, left, right, GilbertOptions(seed=settings.seed))
    return TensorBlock(tuple(factors), state, evidence)


def _trivial_certificate(star: _StarLayout, n: int, k: int, p: float) -> BiseparableCertificate:
    """Single term: every edge is a product of separable single-copy isotropic states"""
    cut = _leaf_cut(2, n)
    blocks: List[TensorBlock] = []
    hub, tail = star.edges[2]
    edge_state = isotropic_matrix(p)
    edge_power = copies(isotropic(p), k).matrix
    for h, t in zip(hub, tail):
        block = star.block([h, t], edge_state)
        evidence = separability_evidence(block.state, [0], [1])
        blocks.append(TensorBlock(block.factors, block.state, evidence))
    for leaf in range(3, n + 1):
        factors = sorted(star.edge(leaf))
        blocks.append(star.block(factors, edge_power))

    term = DecompositionTerm(weight=1.0, cut=cut, blocks=tuple(blocks), label="per-edge separable")
    return BiseparableCertificate(
        terms=[term],
        target_description=f"sigma_{n}({p:.17g})^(x){k}",
        n=n,
        k=k,
        p=p,
        activation_relevant=False,
        notes=[f"p = {p:.6g} <= 1/3: every edge is separable"],
    )


def build_biseparable_certificate(
    n: int,
    k: int,
    p: float,
    key_evidence: Optional[SeparabilityEvidence] = None,
) -> BiseparableCertificate:
    """
    Decompose sigma_n(p)^(x)k into partially separable terms

    Each edge is f Phi + (1 - f) white noise. Expanding over the set S of
    Phi-slots, terms with at least two white slots are product across
    {i}|rest for the smallest white slot i. The single-white terms absorb an
    even share of the all-Phi term; their white slot then carries the key
    state, whose separability evidence is attached to the block.

    Args:
        n: number of parties (>= 3)
        k: number of copies
        p: visibility
        key_evidence: evidence for key_state(p, k, n); computed when absent

    Returns:
        BiseparableCertificate, failed=True when the key state evidence is
        not a proof
    """
    if n < 3:
        raise ValidationError(f"Star networks need n >= 3 parties, got {n}")
    target_layout = target_state(n, k, 0.0).layout
    star = _StarLayout(target_layout, n, k)

    if p <= ISOTROPIC_THRESHOLD:
        cert = _trivial_certificate(star, n, k, p)
        logger.info("Trivial certificate", n=n, k=k, p=p)
        return cert

    f = f_k(p, k)
    leaves = list(range(2, n + 1))
    terms: List[DecompositionTerm] = []

    for size in range(0, n - 2):
        for chosen in combinations(leaves, size):
            white = [leaf for leaf in leaves if leaf not in chosen]
            blocks = [star.phi(leaf, p) for leaf in chosen]
            for leaf in white:
                blocks.extend(star.split_white(leaf))
            weight = f ** size * (1.0 - f) ** (n - 1 - size)
            terms.append(DecompositionTerm(
                weight=weight,
                cut=_leaf_cut(white[0], n),
                blocks=tuple(blocks),
                label="phi" + "".join(map(str, chosen)) if chosen else "white",
            ))

    evidence = key_evidence
    merged_weight = f ** (n - 2) * (f / (n - 1) + 1.0 - f)
    for leaf in leaves:
        key_block = _key_block(star, leaf, p, evidence)
        evidence = key_block.evidence
        blocks = [star.phi(other, p) for other in leaves if other != leaf] + [key_block]
        terms.append(DecompositionTerm(
            weight=merged_weight,
            cut=_leaf_cut(leaf, n),
            blocks=tuple(blocks),
            label=f"merged{leaf}",
        ))

    cert = BiseparableCertificate(
        terms=terms,
        target_description=f"sigma_{n}({p:.17g})^(x){k}",
        n=n,
        k=k,
        p=p,
    )
    if not evidence.certified:
        cert.failed = True
        cert.notes.append(f"key state evidence is {evidence.grade.value}: {evidence.message}")
        logger.warning("Key state not certified separable", n=n, k=k, p=p, grade=evidence.grade.value)
    logger.info("Certificate built", n=n, k=k, p=p, terms=len(terms), failed=cert.failed)
    return cert


def term_matrix(term: DecompositionTerm, layout: SubsystemLayout) -> np.ndarray:
    """Dense tensor product of a term's blocks in target factor order"""
    order = [i for block in term.blocks for i in block.factors]
    dims = [layout.factors[i].dimension for i in order]
    product = kron_all([block.state.matrix for block in term.blocks])
    return permute_array(product, dims, inverse_permutation(order))


def _interval_product(lo: float, hi: float, a: float, b: float) -> Tuple[float, float]:
    ends = (lo * a, lo * b, hi * a, hi * b)
    return min(ends), max(ends)


def _term_spectrum_floor(term: DecompositionTerm) -> float:
    """Smallest eigenvalue of the tensor product from each block's extremes"""
    lo, hi = 1.0, 1.0
    for block in term.blocks:
        values = eigenvalues(block.state.matrix)
        lo, hi = _interval_product(lo, hi, float(values[-1]), float(values[0]))
    return lo


def _product_across_cut(term: DecompositionTerm, layout: SubsystemLayout) -> Tuple[bool, float]:
    """Blocks declared one-sided must form a product across the cut"""
    one_sided = []
    for block in term.blocks:
        left, right = split_for_factors(term.cut, layout, block.factors)
        if left and right:
            continue
        one_sided.append((block, bool(left)))
    if not one_sided:
        return True, 0.0

    ordered = [b for b, on_left in one_sided if on_left] + [b for b, on_left in one_sided if not on_left]
    left_count = sum(len(b.factors) for b, on_left in one_sided if on_left)
    dims = [d for b in ordered for d in b.state.dims]
    matrix = kron_all([b.state.matrix for b in ordered])
    if left_count == 0 or left_count == len(dims):
        return True, 0.0
    n_factors = len(dims)
    reduced_left = partial_trace_array(matrix, dims, list(range(left_count, n_factors)))
    reduced_right = partial_trace_array(matrix, dims, list(range(left_count)))
    deviation = float(np.max(np.abs(np.kron(reduced_left, reduced_right) - matrix)))
    return deviation <= settings.tolerances.certificate_product, deviation


def _check_term(index: int, term: DecompositionTerm, layout: SubsystemLayout) -> TermDiagnostics:
    tol = settings.tolerances
    floor = _term_spectrum_floor(term)
    psd_ok = floor >= -tol.certificate_psd
    problems: List[str] = []

    for block in term.blocks:
        expected = layout.select(block.factors)
        if block.state.layout != expected:
            problems.append(f"block {block.factors} layout differs from target")
            continue
        left, right = split_for_factors(term.cut, layout, block.factors)
        if not left or not right:
            continue
        evidence = block.evidence
        if evidence is None:
            problems.append(f"block {block.factors} straddles {term.cut.label} without evidence")
            continue
        if {tuple(left), tuple(right)} != {tuple(evidence.left), tuple(evidence.right)}:
            problems.append(f"evidence split does not match {term.cut.label} on block {block.factors}")
            continue
        if not evidence.certified:
            problems.append(f"evidence on block {block.factors} is only {evidence.grade.value}")
            continue
        valid, reason = recheck_evidence(evidence, block.state)
        if not valid:
            problems.append(f"evidence on block {block.factors} rejected: {reason}")

    product_ok, deviation = _product_across_cut(term, layout)
    if not product_ok:
        problems.append(f"product structure deviation {deviation:.3e}")
    structure_ok = not problems
    if not psd_ok:
        problems.append(f"min eigenvalue {floor:.3e}")

    return TermDiagnostics(
        index=index,
        label=term.label,
        weight=term.weight,
        cut=term.cut.label,
        min_eigenvalue=floor,
        psd_ok=psd_ok,
        structure_ok=structure_ok,
        message="; ".join(problems),
    )


def verify_certificate(cert: BiseparableCertificate, target: DensityMatrix) -> VerificationReport:
    """
    Independent check of a biseparable certificate against a target state

    Checks the factor tiling, convex weights, positivity of every term, the
    declared product structure (or valid separability evidence on blocks
    straddling the cut) and the reconstruction residual.

    Raises:
        ValidationError: certificate layout does not match the target
    """
    tol = settings.tolerances
    layout = target.layout
    failures: List[str] = []

    layout_ok = True
    for index, term in enumerate(cert.terms):
        covered = sorted(i for block in term.blocks for i in block.factors)
        if covered != list(range(layout.size)):
            layout_ok = False
            failures.append(f"term {index} does not tile the target factors")
        if term.cut.n != layout.party_count:
            layout_ok = False
            failures.append(f"term {index} cut is over {term.cut.n} parties")
    if not layout_ok:
        raise ValidationError("Certificate layout does not match the target: " + "; ".join(failures))

    weights = np.array(cert.weights, dtype=float)
    weight_sum = float(weights.sum())
    weights_ok = bool(np.all(weights >= -tol.certificate_weights)) and abs(weight_sum - 1.0) <= tol.certificate_weights
    if not weights_ok:
        failures.append(f"weights not convex (sum {weight_sum:.15g})")

    terms = tuple(_check_term(i, term, layout) for i, term in enumerate(cert.terms))
    for diag in terms:
        if not (diag.psd_ok and diag.structure_ok):
            failures.append(f"term {diag.index} ({diag.label}): {diag.message}")

    total = np.zeros_like(target.matrix)
    for term in cert.terms:
        total += term.weight * term_matrix(term, layout)
    diff = total - target.matrix
    residual = trace_norm((diff + diff.conj().T) / 2) / 2.0
    residual_ok = residual <= tol.certificate_residual
    if not residual_ok:
        failures.append(f"reconstruction residual {residual:.3e}")
    cert.reconstruction_residual = residual

    passed = layout_ok and weights_ok and residual_ok and all(d.psd_ok and d.structure_ok for d in terms)
    logger.info("Certificate verified", passed=passed, residual=residual, terms=len(terms))
    return VerificationReport(
        passed=passed,
        layout_ok=layout_ok,
        weight_sum=weight_sum,
        weights_ok=weights_ok,
        residual=residual,
        residual_ok=residual_ok,
        terms=terms,
        failures=tuple(failures),
    )
