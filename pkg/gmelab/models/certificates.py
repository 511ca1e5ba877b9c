"""
Verdicts, bounds and certificates produced by the services
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .domain import Bipartition, DensityMatrix


class Verdict(str, Enum):
    """Outcome of a separability criterion"""
    ENTANGLED = "entangled-certified"
    SEPARABLE = "separable-certified"
    INCONCLUSIVE = "inconclusive"


class WitnessStatus(str, Enum):
    GME = "gme-certified"
    NO_VIOLATION = "no-violation"


class SumVerdict(str, Enum):
    GME = "gme-certified"
    NO_VIOLATION = "no-violation"
    PARTIAL = "partial"


class ActivatabilityVerdict(str, Enum):
    ACTIVATABLE = "activatable-certified"
    NOT_ACTIVATABLE = "not-activatable-certified"
    INCONCLUSIVE = "inconclusive"


class EvidenceGrade(str, Enum):
    """
    Strength of separability evidence

    The first three grades are proofs; GILBERT is numerical evidence only.
    """
    PPT_DECISIVE = "ppt-decisive"
    PURITY_BALL = "purity-ball"
    GILBERT_BALL = "gilbert+ball"
    GILBERT = "numerically-separable"
    NONE = "none"

    @property
    def certified(self) -> bool:
        return self in (EvidenceGrade.PPT_DECISIVE, EvidenceGrade.PURITY_BALL, EvidenceGrade.GILBERT_BALL)


@dataclass(frozen=True)
class CriterionVerdict:
    """Value and verdict of one criterion on one cut"""
    name: str
    value: float
    verdict: Verdict
    cut: Optional[Bipartition] = None
    detail: Optional[str] = None


@dataclass(frozen=True, eq=False)
class ProductMixture:
    """
    Convex mixture of pure product states sum_k w_k |a_k><a_k| (x) |b_k><b_k|

    Attributes:
        weights: nonnegative, summing to one
        left: (atoms, dim_left) unit vectors
        right: (atoms, dim_right) unit vectors
    """
    weights: np.ndarray
    left: np.ndarray
    right: np.ndarray

    @property
    def size(self) -> int:
        return int(self.weights.size)

    def matrix(self) -> np.ndarray:
        """Dense sigma in (left (x) right) order"""
        atoms = np.einsum("ka,kb->kab", self.left, self.right).reshape(self.size, -1)
        return (atoms.T * self.weights) @ atoms.conj()


@dataclass(frozen=True, eq=False)
class SeparabilityEvidence:
    """
    Evidence that a state is separable across a split of its factors

    For the gilbert+ball grade the state equals
    (1 - ball_weight) * mixture + ball_weight * ball_state with ball_state in
    the purity ball.

    Attributes:
        grade: strength of the evidence
        left / right: factor positions on each side, within the state's layout
        frobenius_distance: Gilbert residual ||rho - mixture||_F (0 when unused)
        trace_bound: upper bound on half the trace distance to the separable set
        ball_weight: lambda of the upgrade decomposition
        ball_purity: Tr(B^2) of the ball state
        mixture: Gilbert product mixture
        ball_state: B
        iterations: Gilbert iterations
        message: free-form note
    """
    grade: EvidenceGrade
    left: Tuple[int, ...]
    right: Tuple[int, ...]
    frobenius_distance: float = 0.0
    trace_bound: float = 0.0
    ball_weight: float = 0.0
    ball_purity: Optional[float] = None
    mixture: Optional[ProductMixture] = None
    ball_state: Optional[np.ndarray] = None
    iterations: int = 0
    message: str = ""

    @property
    def certified(self) -> bool:
        return self.grade.certified

    def summary(self) -> Dict[str, Any]:
        return {
            "grade": self.grade.value,
            "certified": self.certified,
            "frobenius_distance": self.frobenius_distance,
            "trace_bound": self.trace_bound,
            "ball_weight": self.ball_weight,
            "ball_purity": self.ball_purity,
            "atoms": self.mixture.size if self.mixture is not None else 0,
            "iterations": self.iterations,
            "message": self.message,
        }


@dataclass(frozen=True, eq=False)
class GilbertResult:
    """Outcome of the Gilbert iteration for one state and split"""
    mixture: ProductMixture
    frobenius_distance: float
    upper_bound: float
    iterations: int
    converged: bool
    capped: bool


@dataclass(frozen=True)
class DistanceBounds:
    """Two-sided bounds on half the trace distance to the cut-separable set"""
    cut: Bipartition
    lower: float
    upper: float
    sdp_iterations: int = 0
    gilbert_iterations: int = 0
    frobenius_distance: float = 0.0
    gilbert_capped: bool = False
    residuals: Dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class SumCriterionReport:
    """Per-cut lower bounds and their sum against 2^(n-1) - 2"""
    n: int
    cuts: Tuple[str, ...]
    lower_bounds: Tuple[Optional[float], ...]
    total: float
    threshold: float
    verdict: SumVerdict
    failures: Tuple[str, ...] = ()


@dataclass(frozen=True)
class WitnessAudit:
    """Solver-independent re-check of a witness decomposition"""
    max_decomposition_residual: float
    min_eig_p: float
    min_eig_q: float
    max_eig_p: float
    max_eig_q: float
    recomputed_value: float
    passed: bool


@dataclass(frozen=True, eq=False)
class GmeCertificate:
    """Fully decomposable witness W with W = P_M + Q_M^{T_M} for every cut"""
    witness: np.ndarray
    decompositions: Tuple[Tuple[Bipartition, np.ndarray, np.ndarray], ...]
    value: float
    status: WitnessStatus
    audit: WitnessAudit
    solver: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class ActivatabilityCertificate:
    """NPT-on-every-cut activatability test"""
    negativities: Dict[str, float]
    verdict: ActivatabilityVerdict
    separable_cut: Optional[str] = None
    cut_verdicts: Tuple[CriterionVerdict, ...] = ()


@dataclass(frozen=True, eq=False)
class TensorBlock:
    """
    One tensor factor group of a decomposition term

    Attributes:
        factors: global factor indices of the target layout
        state: state on those factors (layout order of the target)
        evidence: separability evidence when the block straddles the term's cut
    """
    factors: Tuple[int, ...]
    state: DensityMatrix
    evidence: Optional[SeparabilityEvidence] = None


@dataclass(frozen=True, eq=False)
class DecompositionTerm:
    """weight * (tensor product of blocks), partially separable across cut"""
    weight: float
    cut: Bipartition
    blocks: Tuple[TensorBlock, ...]
    label: str = ""

    @property
    def separability_evidence(self) -> Tuple[SeparabilityEvidence, ...]:
        return tuple(b.evidence for b in self.blocks if b.evidence is not None)


@dataclass
class BiseparableCertificate:
    """Convex decomposition of a target state into partially separable terms"""
    terms: List[DecompositionTerm]
    target_description: str
    n: int
    k: int
    p: float
    activation_relevant: bool = True
    failed: bool = False
    reconstruction_residual: Optional[float] = None
    notes: List[str] = field(default_factory=list)

    @property
    def weights(self) -> List[float]:
        return [t.weight for t in self.terms]


@dataclass(frozen=True)
class TermDiagnostics:
    index: int
    label: str
    weight: float
    cut: str
    min_eigenvalue: float
    psd_ok: bool
    structure_ok: bool
    message: str = ""


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    layout_ok: bool
    weight_sum: float
    weights_ok: bool
    residual: float
    residual_ok: bool
    terms: Tuple[TermDiagnostics, ...]
    failures: Tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class PHatAttempt:
    p_hat: float
    grade: EvidenceGrade
    frobenius_distance: float
    accepted: bool


@dataclass(frozen=True, eq=False)
class PHatResult:
    """Outcome of the descending p-hat scan"""
    n: int
    k: int
    p0: float
    p_hat: Optional[float]
    anchor: str
    evidence: Optional[SeparabilityEvidence]
    attempts: Tuple[PHatAttempt, ...] = ()
    message: str = ""

    @property
    def found(self) -> bool:
        return self.p_hat is not None


@dataclass(frozen=True, eq=False)
class ActivationReport:
    """Full pipeline output for sigma_n(p)^(x)k"""
    n: int
    k: int
    p0: float
    p_hat: Optional[float]
    p: float
    certificate: BiseparableCertificate
    verification: VerificationReport
    activatability: Optional[ActivatabilityCertificate]
    key_state_evidence: Optional[SeparabilityEvidence]
    search: Optional[PHatResult] = None

    @property
    def activation_relevant(self) -> bool:
        return self.certificate.activation_relevant
