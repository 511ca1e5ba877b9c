"""
Report assembly and JSON payloads for verdicts, bounds and certificates
"""
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from .. import __version__
from ..core.config import settings, tolerance_snapshot
from ..core.exceptions import ConfigurationError, GmeLabException, ValidationError
from ..models.certificates import (
    ActivatabilityCertificate,
    ActivationReport,
    BiseparableCertificate,
    CriterionVerdict,
    DistanceBounds,
    GilbertResult,
    GmeCertificate,
    PHatResult,
    SeparabilityEvidence,
    SumCriterionReport,
    VerificationReport,
)
from ..models.schemas import ErrorInfo, Report, ReportStatus

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

_STATUS_EXIT = {
    "ok": EXIT_OK,
    "partial": EXIT_NUMERICAL,
    "input-error": EXIT_INPUT,
    "solver-error": EXIT_NUMERICAL,
}


@dataclass
class CommandOutcome:
    """What a command hands back to the entry point"""
    results: Dict[str, Any]
    status: ReportStatus = "ok"
    matrices: Dict[str, np.ndarray] = field(default_factory=dict)
    error: Optional[ErrorInfo] = None
    # sweeps send the CSV to --out and the report next to it
    report_path: Optional[Path] = None
    write_report: bool = True
    # results written as-is, without the report envelope
    bare: bool = False

    @property
    def exit_code(self) -> int:
        return _STATUS_EXIT[self.status]


def exit_code_for(exc: BaseException) -> int:
    """Stable exit contract: 2 for bad input, 3 for numerical failure"""
    if isinstance(exc, (ValidationError, ConfigurationError)):
        return EXIT_INPUT
    return EXIT_NUMERICAL


def status_for(exc: BaseException) -> ReportStatus:
    return "input-error" if exit_code_for(exc) == EXIT_INPUT else "solver-error"


def error_info(exc: BaseException, stage: Optional[str] = None) -> ErrorInfo:
    return ErrorInfo(type=type(exc).__name__, message=str(exc), stage=stage)


def build_report(
    command: List[str],
    started: float,
    outcome: CommandOutcome,
) -> Report:
    """Wrap a command outcome with version, seed, timing and tolerances"""
    return Report(
        command=list(command),
        version=__version__,
        seed=settings.seed,
        wall_time=time.perf_counter() - started,
        tolerances=tolerance_snapshot(),
        status=outcome.status,
        results=outcome.results,
        error=outcome.error,
    )


def failure_outcome(exc: GmeLabException, stage: Optional[str] = None, results: Optional[Dict[str, Any]] = None) -> CommandOutcome:
    return CommandOutcome(
        results=results or {},
        status=status_for(exc),
        error=error_info(exc, stage),
    )


# Payloads

def verdict_payload(v: CriterionVerdict) -> Dict[str, Any]:
    return {
        "criterion": v.name,
        "cut": v.cut.label if v.cut is not None else None,
        "value": v.value,
        "verdict": v.verdict.value,
        "detail": v.detail,
    }


def evidence_payload(evidence: Optional[SeparabilityEvidence]) -> Optional[Dict[str, Any]]:
    if evidence is None:
        return None
    return {**evidence.summary(), "left": list(evidence.left), "right": list(evidence.right)}


def gilbert_payload(result: GilbertResult) -> Dict[str, Any]:
    return {
        "upper": result.upper_bound,
        "frobenius_distance": result.frobenius_distance,
        "iterations": result.iterations,
        "converged": result.converged,
        "capped": result.capped,
        "atoms": result.mixture.size,
    }


def bounds_payload(bounds: DistanceBounds) -> Dict[str, Any]:
    return {
        "cut": bounds.cut.label,
        "lower": bounds.lower,
        "upper": bounds.upper,
        "sdp_iterations": bounds.sdp_iterations,
        "gilbert_iterations": bounds.gilbert_iterations,
        "frobenius_distance": bounds.frobenius_distance,
        "gilbert_capped": bounds.gilbert_capped,
        "residuals": dict(bounds.residuals),
    }


def sum_payload(report: SumCriterionReport) -> Dict[str, Any]:
    return {
        "n": report.n,
        "cuts": [
            {"cut": cut, "lower": lower}
            for cut, lower in zip(report.cuts, report.lower_bounds)
        ],
        "sum": report.total,
        "threshold": report.threshold,
        "verdict": report.verdict.value,
        "failures": list(report.failures),
    }


def witness_payload(cert: GmeCertificate) -> Dict[str, Any]:
    return {
        "value": cert.value,
        "status": cert.status.value,
        "cuts": [cut.label for cut, _, _ in cert.decompositions],
        "audit": asdict(cert.audit),
        "solver": dict(cert.solver),
    }


def witness_matrices(cert: GmeCertificate) -> Dict[str, np.ndarray]:
    matrices = {"witness": cert.witness}
    for cut, p, q in cert.decompositions:
        tag = cut.label.replace("|", "_")
        matrices[f"P_{tag}"] = p
        matrices[f"Q_{tag}"] = q
    return matrices


def activatability_payload(cert: Optional[ActivatabilityCertificate]) -> Optional[Dict[str, Any]]:
    if cert is None:
        return None
    return {
        "verdict": cert.verdict.value,
        "negativities": dict(cert.negativities),
        "separable_cut": cert.separable_cut,
        "cuts": [verdict_payload(v) for v in cert.cut_verdicts],
    }


def certificate_payload(cert: BiseparableCertificate) -> Dict[str, Any]:
    return {
        "target": cert.target_description,
        "n": cert.n,
        "k": cert.k,
        "p": cert.p,
        "activation_relevant": cert.activation_relevant,
        "failed": cert.failed,
        "reconstruction_residual": cert.reconstruction_residual,
        "notes": list(cert.notes),
        "terms": [
            {
                "label": term.label,
                "weight": term.weight,
                "cut": term.cut.label,
                "blocks": [
                    {"factors": list(block.factors), "evidence": evidence_payload(block.evidence)}
                    for block in term.blocks
                ],
            }
            for term in cert.terms
        ],
    }


def certificate_matrices(cert: BiseparableCertificate) -> Dict[str, np.ndarray]:
    """Block states and evidence mixtures keyed term{i}_block{j}[_...]"""
    matrices: Dict[str, np.ndarray] = {}
    for i, term in enumerate(cert.terms):
        for j, block in enumerate(term.blocks):
            key = f"term{i}_block{j}"
            matrices[key] = block.state.matrix
            evidence = block.evidence
            if evidence is None:
                continue
            if evidence.mixture is not None:
                matrices[f"{key}_weights"] = evidence.mixture.weights
                matrices[f"{key}_left"] = evidence.mixture.left
                matrices[f"{key}_right"] = evidence.mixture.right
            if evidence.ball_state is not None:
                matrices[f"{key}_ball"] = evidence.ball_state
    return matrices


def verification_payload(report: VerificationReport) -> Dict[str, Any]:
    payload = asdict(report)
    payload["failures"] = list(report.failures)
    return payload


def search_payload(result: Optional[PHatResult]) -> Optional[Dict[str, Any]]:
    if result is None:
        return None
    return {
        "p0": result.p0,
        "p_hat": result.p_hat,
        "anchor": result.anchor,
        "found": result.found,
        "message": result.message,
        "evidence": evidence_payload(result.evidence),
        "attempts": [
            {
                "p_hat": a.p_hat,
                "grade": a.grade.value,
                "frobenius_distance": a.frobenius_distance,
                "accepted": a.accepted,
            }
            for a in result.attempts
        ],
    }


def activation_payload(report: ActivationReport) -> Dict[str, Any]:
    return {
        "n": report.n,
        "k": report.k,
        "p0": report.p0,
        "p_hat": report.p_hat,
        "p": report.p,
        "activation_relevant": report.activation_relevant,
        "certificate_passed": report.verification.passed,
        "activatability": activatability_payload(report.activatability),
        "key_state_evidence": evidence_payload(report.key_state_evidence),
        "verification": verification_payload(report.verification),
        "certificate": certificate_payload(report.certificate),
        "search": search_payload(report.search),
    }
