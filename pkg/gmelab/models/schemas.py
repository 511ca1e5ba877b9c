"""
Pydantic schemas for state specs and command reports
"""
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

ConstructorName = Literal["isotropic", "ghz", "star_pen", "pen", "bell", "maximally_mixed"]
ReportStatus = Literal["ok", "partial", "input-error", "solver-error"]


class FactorSchema(BaseModel):
    """One tensor factor of a dense state"""
    model_config = ConfigDict(populate_by_name=True)

    dimension: int = Field(ge=2)
    party: int = Field(ge=1)
    copy_index: int = Field(default=1, ge=1, alias="copy")
    slot: Optional[int] = None


class PenEdgeSchema(BaseModel):
    """Edge of a PEN graph with its isotropic visibility"""
    i: int
    j: int
    p: float = Field(ge=0.0, le=1.0)


class ConstructorStateSpec(BaseModel):
    """Named state family with parameters"""
    name: ConstructorName
    params: List[float] = Field(default_factory=list)
    edges: List[PenEdgeSchema] = Field(default_factory=list)
    copies: int = Field(default=1, ge=1)


class DenseStateSpec(BaseModel):
    """Explicit matrix: row-major entries as [re, im] pairs"""
    layout: List[FactorSchema]
    entries: List[List[float]]


StateSpec = Union[ConstructorStateSpec, DenseStateSpec]


class ErrorInfo(BaseModel):
    """Machine-readable failure description"""
    type: str
    message: str
    stage: Optional[str] = None


class Report(BaseModel):
    """Output of every command"""
    command: List[str]
    version: str
    seed: int
    wall_time: float
    tolerances: Dict[str, Any]
    status: ReportStatus
    results: Dict[str, Any] = Field(default_factory=dict)
    error: Optional[ErrorInfo] = None


class CriterionRow(BaseModel):
    """One criterion value on one cut"""
    criterion: str
    cut: Optional[str] = None
    value: Optional[float] = None
    verdict: str
    detail: Optional[str] = None
