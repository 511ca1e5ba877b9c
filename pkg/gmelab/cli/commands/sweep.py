"""
sweep: criteria over an (n, k, p) grid of star PEN states, written as CSV
"""
import argparse
import concurrent.futures
from itertools import product
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from ...core.config import settings
from ...core.exceptions import GmeLabException, ValidationError
from ...core.logging import get_logger
from ...models.domain import Bipartition, DensityMatrix
from ...services.activation import key_state, target_state
from ...services.criteria import gb_ball_separable, negativity_verdict, ppt_min_eig
from ...services.distance import activatable_via_npt
from ...services.partitions import enumerate_bipartitions
from ...services.states import copies, isotropic
from ...utils.io_utils import write_csv
from ..reports import CommandOutcome

logger = get_logger(__name__)

COLUMNS = ["n", "k", "p", "criterion", "cut", "value", "verdict"]
SWEEP_CRITERIA = ("ppt-per-edge", "ppt", "negativity", "gb", "activatable", "key-ppt")
_TARGET_CRITERIA = {"ppt": ppt_min_eig, "negativity": negativity_verdict, "gb": gb_ball_separable}
_EDGE_CUT = Bipartition((1,), 2)

Point = Tuple[int, int, float]


def _int_list(text: str) -> List[int]:
    try:
        return sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError as e:
        raise ValidationError(f"Expected a comma list of integers, got '{text}'") from e


def parse_p_grid(text: str) -> List[float]:
    """
    'start:stop:step' (stop included) or a comma list of visibilities

    Grid values are rounded to 12 decimals so that start + j * step lands on
    the double nearest the intended decimal.
    """
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0 or stop < start:
                raise ValidationError(f"p grid '{text}' needs step > 0 and stop >= start")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            values = start + step * np.arange(count)
        else:
            values = np.array([float(x) for x in text.split(",") if x.strip()])
    except ValueError as e:
        raise ValidationError(f"p grid '{text}' must be 'start:stop:step' or a comma list") from e

    values = sorted({float(v) for v in np.round(values, 12)})
    if not values:
        raise ValidationError("p grid is empty")
    if values[0] < 0.0 or values[-1] > 1.0:
        raise ValidationError(f"p grid leaves [0, 1]: {values[0]}..{values[-1]}")
    return values


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "sweep",
        parents=parents,
        help="Evaluate criteria over an (n, k, p) grid",
        description="Criteria over star PEN states sigma_n(p)^(x)k; CSV rows sorted by n, k, p",
    )
    parser.add_argument("--n", required=True, help="party counts, comma separated")
    parser.add_argument("--k", default="1", help="copy counts, comma separated")
    parser.add_argument("--p-grid", required=True, help="start:stop:step or comma list")
    parser.add_argument(
        "--criterion",
        action="append",
        choices=SWEEP_CRITERIA,
        help="repeatable; defaults to ppt-per-edge",
    )
    parser.set_defaults(handler=run_sweep)


def _row(point: Point, criterion: str, cut: Optional[str], value: Optional[float], verdict: str) -> Dict[str, Any]:
    n, k, p = point
    return {"n": n, "k": k, "p": p, "criterion": criterion, "cut": cut or "", "value": value, "verdict": verdict}


def _criterion_rows(point: Point, criterion: str, target: Optional[DensityMatrix]) -> List[Dict[str, Any]]:
    n, k, p = point
    if criterion == "ppt-per-edge":
        v = ppt_min_eig(copies(isotropic(p), k), _EDGE_CUT)
        return [_row(point, criterion, v.cut.label, v.value, v.verdict.value)]
    if criterion == "key-ppt":
        v = ppt_min_eig(key_state(p, k, n), _EDGE_CUT)
        return [_row(point, criterion, v.cut.label, v.value, v.verdict.value)]
    if criterion == "activatable":
        cert = activatable_via_npt(target)
        value = min(cert.negativities.values()) if cert.negativities else None
        return [_row(point, criterion, None, value, cert.verdict.value)]
    evaluate = _TARGET_CRITERIA[criterion]
    rows = []
    for cut in enumerate_bipartitions(n):
        v = evaluate(target, cut)
        rows.append(_row(point, criterion, cut.label, v.value, v.verdict.value))
    return rows


def _evaluate_point(point: Point, criteria: List[str]) -> Tuple[List[Dict[str, Any]], List[Dict[str, Any]]]:
    """Rows for one grid point; a failing criterion yields an error row"""
    n, k, p = point
    rows, failures = [], []
    target: Optional[DensityMatrix] = None
    for criterion in criteria:
        try:
            if target is None and criterion not in ("ppt-per-edge", "key-ppt"):
                target = target_state(n, k, p)
            rows.extend(_criterion_rows(point, criterion, target))
        except GmeLabException as e:
            logger.warning("Sweep row failed", n=n, k=k, p=p, criterion=criterion, error=str(e))
            rows.append(_row(point, criterion, None, None, "error"))
            failures.append({"n": n, "k": k, "p": p, "criterion": criterion, "type": type(e).__name__, "message": str(e)})
    return rows, failures


def sweep_frame(points: List[Point], criteria: List[str]) -> Tuple[pd.DataFrame, List[Dict[str, Any]]]:
    """Evaluate every point on the worker pool; rows come back in (n, k, p, criterion, cut) order"""
    with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, settings.threads)) as executor:
        results = list(executor.map(lambda point: _evaluate_point(point, criteria), points))

    rows = [row for point_rows, _ in results for row in point_rows]
    failures = [f for _, point_failures in results for f in point_failures]
    frame = pd.DataFrame(rows, columns=COLUMNS)
    frame = frame.sort_values(["n", "k", "p", "criterion", "cut"], kind="mergesort").reset_index(drop=True)
    return frame, failures


def run_sweep(args: argparse.Namespace) -> CommandOutcome:
    """
    Raises:
        ValidationError: malformed grid, n < 3, k < 1 or too many points
    """
    ns, ks, ps = _int_list(args.n), _int_list(args.k), parse_p_grid(args.p_grid)
    criteria = sorted(set(args.criterion or ["ppt-per-edge"]))
    if not ns or min(ns) < 3:
        raise ValidationError(f"Sweeps need n >= 3, got {args.n}")
    if not ks or min(ks) < 1:
        raise ValidationError(f"Sweeps need k >= 1, got {args.k}")

    points = list(product(ns, ks, ps))
    if len(points) > settings.max_sweep_points:
        raise ValidationError(f"Sweep has {len(points)} points, more than {settings.max_sweep_points}")

    logger.info("Sweep started", points=len(points), criteria=criteria, workers=settings.threads)
    frame, failures = sweep_frame(points, criteria)

    csv_path: Optional[Path] = args.out
    write_csv(frame, csv_path)
    logger.info("Sweep finished", rows=len(frame), failures=len(failures), csv=str(csv_path) if csv_path else "stdout")

    return CommandOutcome(
        results={
            "points": len(points),
            "rows": len(frame),
            "criteria": criteria,
            "csv": str(csv_path) if csv_path else None,
            "failures": failures,
        },
        status="partial" if failures else "ok",
        report_path=csv_path.with_suffix(".json") if csv_path else None,
        write_report=csv_path is not None,
    )
