"""
Domain models for the toolkit
"""
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from ..core.config import settings
from ..core.exceptions import ValidationError

# Dense complex matrix, row-major (numpy default)
ComplexMatrix = npt.NDArray[np.complex128]


@dataclass(frozen=True)
class Factor:
    """One tensor factor of a layout"""
    dimension: int
    party: int
    copy: int = 1
    slot: Optional[int] = None  # for hub parties: the leaf this qubit pairs with

    def __post_init__(self) -> None:
        if self.dimension < 2:
            raise ValidationError(f"Factor dimension must be >= 2, got {self.dimension}")
        if self.party < 1:
            raise ValidationError(f"Party labels start at 1, got {self.party}")
        if self.copy < 1:
            raise ValidationError(f"Copy labels start at 1, got {self.copy}")

    @property
    def key(self) -> Tuple[int, int, int]:
        return (self.party, self.copy, -1 if self.slot is None else self.slot)


@dataclass(frozen=True)
class SubsystemLayout:
    """
    Ordered tensor factors with (party, copy) labels

    The order of factors is the order of the Kronecker product, left factor
    most significant.
    """
    factors: Tuple[Factor, ...]

    def __post_init__(self) -> None:
        if not self.factors:
            raise ValidationError("Layout needs at least one factor")
        keys = [f.key for f in self.factors]
        if len(set(keys)) != len(keys):
            raise ValidationError("Layout factors must have unique (party, copy, slot) labels")

    @classmethod
    def qubits(cls, n: int) -> "SubsystemLayout":
        """n qubits, one per party"""
        return cls.from_dimensions([2] * n)

    @classmethod
    def from_dimensions(cls, dims: Sequence[int]) -> "SubsystemLayout":
        """One factor per party, parties numbered 1..len(dims)"""
        return cls(tuple(Factor(dimension=d, party=i + 1) for i, d in enumerate(dims)))

    @property
    def dimensions(self) -> Tuple[int, ...]:
        return tuple(f.dimension for f in self.factors)

    @property
    def total_dimension(self) -> int:
        return int(np.prod(self.dimensions))

    @property
    def size(self) -> int:
        return len(self.factors)

    @property
    def parties(self) -> Tuple[int, ...]:
        return tuple(sorted({f.party for f in self.factors}))

    @property
    def party_count(self) -> int:
        return len(self.parties)

    def require_contiguous_parties(self) -> int:
        """Number of parties, checking the labels are exactly 1..n"""
        parties = self.parties
        n = len(parties)
        if parties != tuple(range(1, n + 1)):
            raise ValidationError(f"Party labels must be 1..n, got {parties}")
        return n

    def indices_of_party(self, party: int) -> Tuple[int, ...]:
        return tuple(i for i, f in enumerate(self.factors) if f.party == party)

    def select(self, indices: Iterable[int]) -> "SubsystemLayout":
        return SubsystemLayout(tuple(self.factors[i] for i in indices))

    def dimension_of(self, indices: Iterable[int]) -> int:
        return int(np.prod([self.factors[i].dimension for i in indices], dtype=np.int64))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    Dense Hermitian trace-one matrix bound to a layout

    Construction checks shape, finiteness, Hermiticity and trace. The PSD
    invariant is checked by tensor.validate_density_matrix (it needs an
    eigendecomposition).
    """
    matrix: ComplexMatrix
    layout: SubsystemLayout

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.complex128, copy=True)
        dim = self.layout.total_dimension
        if m.shape != (dim, dim):
            raise ValidationError(f"Matrix shape {m.shape} does not match layout dimension {dim}")
        if not np.all(np.isfinite(m)):
            raise ValidationError("Density matrix has non-finite entries")

        tol = settings.tolerances
        deviation = float(np.max(np.abs(m - m.conj().T))) if dim else 0.0
        if deviation > tol.hermitian:
            raise ValidationError(f"Density matrix is not Hermitian (deviation {deviation:.3e})")
        trace = complex(np.trace(m))
        if abs(trace - 1.0) > tol.trace:
            raise ValidationError(f"Density matrix trace {trace.real:.12g} differs from 1")

        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def dims(self) -> Tuple[int, ...]:
        return self.layout.dimensions


@dataclass(frozen=True)
class Bipartition:
    """
    Canonical party bipartition M|M̄

    Canonical form keeps party 1 in M so that M|M̄ and M̄|M are one object.
    """
    m: Tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        m = tuple(sorted(set(self.m)))
        if self.n < 2:
            raise ValidationError(f"Bipartitions need n >= 2 parties, got {self.n}")
        if not m or len(m) >= self.n:
            raise ValidationError(f"M must be a nonempty proper subset of [1..{self.n}], got {m}")
        if m[0] < 1 or m[-1] > self.n:
            raise ValidationError(f"Parties of M must lie in [1..{self.n}], got {m}")
        if m[0] != 1:
            raise ValidationError(f"Canonical bipartitions contain party 1, got {m}")
        object.__setattr__(self, "m", m)

    @classmethod
    def from_parties(cls, parties: Iterable[int], n: int) -> "Bipartition":
        """Canonical bipartition for any nonempty proper subset of parties"""
        chosen = set(parties)
        if 1 not in chosen:
            chosen = set(range(1, n + 1)) - chosen
        return cls(tuple(sorted(chosen)), n)

    @classmethod
    def parse(cls, text: str, n: int) -> "Bipartition":
        """Parse '1|23' style cut strings (parties as digits, n <= 9)"""
        left, sep, right = text.partition("|")
        if not sep:
            raise ValidationError(f"Cut '{text}' must look like '1|23'")
        try:
            lhs = [int(ch) for ch in left.strip()]
            rhs = [int(ch) for ch in right.strip()]
        except ValueError as e:
            raise ValidationError(f"Cut '{text}' must list parties as digits") from e
        if sorted(lhs + rhs) != list(range(1, n + 1)):
            raise ValidationError(f"Cut '{text}' must split parties 1..{n} exactly once")
        return cls.from_parties(lhs, n)

    @property
    def complement(self) -> Tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if i not in self.m)

    @property
    def label(self) -> str:
        if self.n <= 9:
            return "".join(map(str, self.m)) + "|" + "".join(map(str, self.complement))
        return ",".join(map(str, self.m)) + "|" + ",".join(map(str, self.complement))

    def __str__(self) -> str:
        return self.label


EdgeState = Union[float, DensityMatrix]


@dataclass(frozen=True, eq=False)
class PenGraph:
    """Pair-entangled network: a graph with one two-qubit state per edge"""
    vertex_count: int
    edges: Tuple[Tuple[int, int], ...]
    edge_states: Tuple[EdgeState, ...]

    def __post_init__(self) -> None:
        n = self.vertex_count
        if n < 2:
            raise ValidationError(f"PEN graphs need at least 2 vertices, got {n}")
        if len(self.edges) != len(self.edge_states):
            raise ValidationError("One edge state is required per edge")
        if not self.edges:
            raise ValidationError("PEN graph has no edges")

        seen = set()
        for i, j in self.edges:
            if not (1 <= i < j <= n):
                raise ValidationError(f"Edge ({i}, {j}) must satisfy 1 <= i < j <= {n}")
            if (i, j) in seen:
                raise ValidationError(f"Repeated edge ({i}, {j})")
            seen.add((i, j))

        covered = {v for edge in self.edges for v in edge}
        if covered != set(range(1, n + 1)):
            missing = sorted(set(range(1, n + 1)) - covered)
            raise ValidationError(f"Vertices without edges hold no qubits: {missing}")

        for state in self.edge_states:
            if isinstance(state, DensityMatrix):
                if state.dims != (2, 2):
                    raise ValidationError("Edge states must be two-qubit (4x4) states")
            elif not 0.0 <= float(state) <= 1.0:
                raise ValidationError(f"Isotropic visibility {state} outside [0, 1]")

    @classmethod
    def star(cls, n: int, p: float) -> "PenGraph":
        """Star graph with hub 1 and isotropic visibility p on every edge"""
        edges = tuple((1, i) for i in range(2, n + 1))
        return cls(vertex_count=n, edges=edges, edge_states=tuple(float(p) for _ in edges))

    def degree(self, vertex: int) -> int:
        return sum(1 for edge in self.edges if vertex in edge)

