"""
Command-line state specs: constructor strings, JSON files and dense matrices

Text forms:
    isotropic:0.5        bell                 ghz:3
    maximally_mixed:3    star_pen:3,0.4       pen:3:1-2=0.5,1-3=0.4
    @state.json          (constructor or dense JSON)
"""
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import ValidationError as PydanticValidationError

from ..core.exceptions import StateSpecError, ValidationError
from ..models.domain import DensityMatrix, Factor, PenGraph, SubsystemLayout
from ..models.schemas import (
    ConstructorStateSpec,
    DenseStateSpec,
    FactorSchema,
    PenEdgeSchema,
    StateSpec,
)
from ..services.states import bell, copies, ghz, isotropic, maximally_mixed, pen_state, star_pen
from ..services.tensor import validate_density_matrix
from ..utils.io_utils import read_json

_ARITY = {"isotropic": 1, "ghz": 1, "star_pen": 2, "bell": 0, "maximally_mixed": 1}


def _numbers(text: str, name: str):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise StateSpecError(f"State '{name}' needs numeric parameters, got '{text}'") from e


def _parse_pen(rest: str) -> ConstructorStateSpec:
    head, sep, edge_text = rest.partition(":")
    if not sep or not edge_text:
        raise StateSpecError("PEN spec must look like 'pen:3:1-2=0.5,1-3=0.4'")
    edges = []
    for item in edge_text.split(","):
        pair, eq, p = item.partition("=")
        i, dash, j = pair.partition("-")
        if not (eq and dash):
            raise StateSpecError(f"PEN edge '{item}' must look like '1-2=0.5'")
        try:
            edges.append(PenEdgeSchema(i=int(i), j=int(j), p=float(p)))
        except (ValueError, PydanticValidationError) as e:
            raise StateSpecError(f"Invalid PEN edge '{item}': {e}") from e
    try:
        n = int(head)
    except ValueError as e:
        raise StateSpecError(f"PEN vertex count must be an integer, got '{head}'") from e
    return ConstructorStateSpec(name="pen", params=[float(n)], edges=edges)


def _parse_json(payload) -> StateSpec:
    try:
        if isinstance(payload, dict) and "entries" in payload:
            return DenseStateSpec.model_validate(payload)
        return ConstructorStateSpec.model_validate(payload)
    except PydanticValidationError as e:
        raise StateSpecError(f"Invalid state spec JSON: {e}") from e


def parse_state_spec(text: str) -> StateSpec:
    """Parse a --state argument"""
    text = text.strip()
    if text.startswith("@") or text.endswith(".json"):
        path = Path(text.lstrip("@"))
        if not path.is_file():
            raise StateSpecError(f"State file not found: {path}")
        try:
            return _parse_json(read_json(path))
        except ValueError as e:
            raise StateSpecError(f"State file {path} is not valid JSON: {e}") from e

    name, _, rest = text.partition(":")
    name = name.strip()
    if name == "pen":
        return _parse_pen(rest)
    if name not in _ARITY:
        raise StateSpecError(f"Unknown state '{name}'; expected one of {sorted(list(_ARITY) + ['pen'])}")
    params = _numbers(rest, name)
    if len(params) != _ARITY[name]:
        raise StateSpecError(f"State '{name}' takes {_ARITY[name]} parameter(s), got {len(params)}")
    return ConstructorStateSpec(name=name, params=params)


def _integer(value: float, what: str) -> int:
    if float(value) != int(value):
        raise StateSpecError(f"{what} must be an integer, got {value}")
    return int(value)


def _construct(spec: ConstructorStateSpec) -> DensityMatrix:
    name, params = spec.name, spec.params
    if len(params) != (1 if name == "pen" else _ARITY[name]):
        raise StateSpecError(f"State '{name}' got {len(params)} parameter(s)")
    if name == "isotropic":
        return isotropic(params[0])
    if name == "bell":
        return bell()
    if name == "ghz":
        return ghz(_integer(params[0], "GHZ party count"))
    if name == "maximally_mixed":
        return maximally_mixed(_integer(params[0], "Party count"))
    if name == "star_pen":
        return star_pen(_integer(params[0], "Star party count"), params[1])
    graph = PenGraph(
        vertex_count=_integer(params[0], "PEN vertex count"),
        edges=tuple((e.i, e.j) for e in spec.edges),
        edge_states=tuple(e.p for e in spec.edges),
    )
    return pen_state(graph)


def dense_to_state(spec: DenseStateSpec) -> DensityMatrix:
    layout = SubsystemLayout(tuple(Factor(f.dimension, f.party, f.copy_index, f.slot) for f in spec.layout))
    d = layout.total_dimension
    entries = np.asarray(spec.entries, dtype=float)
    if entries.shape != (d * d, 2):
        raise StateSpecError(f"Dense state needs {d * d} [re, im] pairs, got shape {entries.shape}")
    matrix = (entries[:, 0] + 1j * entries[:, 1]).reshape(d, d)
    rho = DensityMatrix(matrix, layout)
    validate_density_matrix(rho)
    return rho


def build_state(spec: StateSpec, copy_count: Optional[int] = None) -> DensityMatrix:
    """
    Materialize a state spec

    Args:
        spec: parsed spec
        copy_count: overrides the copies field of constructor specs

    Raises:
        StateSpecError: malformed spec
        ValidationError: constructor preconditions
    """
    try:
        if isinstance(spec, DenseStateSpec):
            rho = dense_to_state(spec)
            k = copy_count or 1
        else:
            rho = _construct(spec)
            k = copy_count or spec.copies
    except ValidationError:
        raise
    except (ValueError, TypeError) as e:
        raise StateSpecError(f"Invalid state spec: {e}") from e
    return copies(rho, k)


def state_to_dense(rho: DensityMatrix) -> DenseStateSpec:
    """Dense spec of a state; parsing it back reproduces the matrix bit-exactly"""
    flat = rho.matrix.ravel()
    return DenseStateSpec(
        layout=[
            FactorSchema(dimension=f.dimension, party=f.party, copy_index=f.copy, slot=f.slot)
            for f in rho.layout.factors
        ],
        entries=[[float(z.real), float(z.imag)] for z in flat],
    )
