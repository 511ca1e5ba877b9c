"""
Canonical party bipartitions and their factor-level index sets
"""
from itertools import combinations
from typing import Iterable, List, Tuple

from ...core.exceptions import ValidationError
from ...models.domain import Bipartition, SubsystemLayout


def enumerate_bipartitions(n: int) -> List[Bipartition]:
    """
    All 2^(n-1) - 1 canonical bipartitions, lexicographic on M

    Args:
        n: number of parties (>= 2)
    """
    if n < 2:
        raise ValidationError(f"Bipartitions need n >= 2 parties, got {n}")
    cuts = [
        Bipartition((1,) + rest, n)
        for size in range(0, n - 1)
        for rest in combinations(range(2, n + 1), size)
    ]
    return sorted(cuts, key=lambda b: b.m)


def cut_factors(b: Bipartition, layout: SubsystemLayout) -> Tuple[List[int], List[int]]:
    """
    Factor indices on each side of a cut (all copies)

    Returns:
        (left, right): factors whose party lies in M, and the rest
    """
    bad = sorted({f.party for f in layout.factors if not 1 <= f.party <= b.n})
    if bad:
        raise ValidationError(f"Layout parties {bad} lie outside [1..{b.n}]")
    members = set(b.m)
    left = [i for i, f in enumerate(layout.factors) if f.party in members]
    right = [i for i, f in enumerate(layout.factors) if f.party not in members]
    return left, right


def check_cut(b: Bipartition, layout: SubsystemLayout) -> Tuple[List[int], List[int]]:
    """cut_factors plus the requirement that both sides hold factors"""
    left, right = cut_factors(b, layout)
    if not left or not right:
        raise ValidationError(f"Cut {b.label} leaves one side without factors")
    return left, right


def split_for_factors(
    b: Bipartition,
    layout: SubsystemLayout,
    subset: Iterable[int],
) -> Tuple[List[int], List[int]]:
    """
    The split a cut induces on a subset of factors

    Returns:
        (left, right) as positions within the subset (not global indices)
    """
    subset = list(subset)
    left_global, _ = cut_factors(b, layout)
    members = set(left_global)
    left = [pos for pos, i in enumerate(subset) if i in members]
    right = [pos for pos, i in enumerate(subset) if i not in members]
    return left, right


def cut_dimensions(b: Bipartition, layout: SubsystemLayout) -> Tuple[int, int]:
    left, right = check_cut(b, layout)
    return layout.dimension_of(left), layout.dimension_of(right)


__all__ = [
    "Bipartition",
    "enumerate_bipartitions",
    "cut_factors",
    "check_cut",
    "split_for_factors",
    "cut_dimensions",
]
