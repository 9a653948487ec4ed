# src/mcpoly/io/writers.py
"""
JSON and CSV output.

Exact values are written as "p/q" strings; floats stay JSON numbers.
"""

import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from mcpoly.aifv import Code, SourceSpec
from mcpoly.chain import Chain, StateFamilies, recurrent_indices, stationary_distribution
from mcpoly.numerics import format_rational
from mcpoly.polytope import FloatFamilies, envelope_float
from mcpoly.solvers import SolveReport, TraceRecord

logger = logging.getLogger(__name__)


def _value(v: Any) -> Any:
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, (np.floating, float)):
        return float(v)
    return v


def chain_to_dict(c: Chain) -> List[Dict[str, Any]]:
    return [
        {
            "type": k,
            "label": s.label,
            "cost": format_rational(s.cost),
            "transitions": [format_rational(q) for q in s.transitions],
            "support": sorted(s.support()),
        }
        for k, s in enumerate(c.states)
    ]


def trace_to_dict(record: TraceRecord) -> Dict[str, Any]:
    return {
        "iteration": record.iteration,
        "x": [_value(v) for v in record.x],
        "g": [_value(v) for v in record.g],
        "h": _value(record.h),
        "note": record.note,
    }


def report_to_dict(report: SolveReport, include_trace: bool = True) -> Dict[str, Any]:
    """The JSON form of a SolveReport."""
    data: Dict[str, Any] = {
        "solver": report.solver,
        "cost": format_rational(report.cost),
        "chain": chain_to_dict(report.chain),
        "stationary": [format_rational(p) for p in stationary_distribution(report.chain)],
        "recurrent": sorted(recurrent_indices(report.chain)),
        "iterations": report.iterations,
        "shift": format_rational(report.shift),
        "phases": list(report.phases),
    }
    if report.restriction is not None:
        data["restriction"] = list(report.restriction)
    if include_trace:
        data["trace"] = [trace_to_dict(r) for r in report.trace]
    return data


def source_to_dict(src: SourceSpec) -> Dict[str, Any]:
    return {
        "probabilities": [format_rational(p) for p in src.probabilities],
        "b": src.b,
        "symbols": list(src.symbols),
    }


def code_to_dict(code: Code) -> Dict[str, Any]:
    """The code file layout ``{"m", "source", "trees"}``."""
    return {"m": code.m, "source": source_to_dict(code.source), "trees": code.serialize()}


def families_to_dict(fams: StateFamilies) -> Dict[str, Any]:
    """The instance file layout, readable by load_instance."""
    return {
        "m": fams.m,
        "families": [
            [
                {
                    "label": s.label,
                    "cost": format_rational(s.cost),
                    "transitions": [format_rational(q) for q in s.transitions],
                }
                for s in family
            ]
            for family in fams.families
        ],
    }


def write_json(data: Dict[str, Any], file_path: Optional[Union[str, Path]] = None) -> None:
    """Writes JSON to a file, or to stdout when no path is given."""
    text = json.dumps(data, indent=2)
    if file_path is None:
        sys.stdout.write(text + "\n")
        return
    file_path = Path(file_path)
    try:
        file_path.write_text(text + "\n", encoding="utf-8")
    except OSError as e:
        logger.error(f"Could not write {file_path}: {e}")
        raise
    logger.info(f"Wrote {file_path}")


def envelope_frame(fams: StateFamilies, xs: Sequence[float]) -> pd.DataFrame:
    """
    g_0, g_1 and h on a grid of x values, for m = 2.

    Returns:
        A DataFrame with columns x, g0, g1, h.
    """
    ff = FloatFamilies(fams)
    rows = []
    for x in xs:
        g, _, h = envelope_float(ff, np.array([x], dtype=np.float64))
        rows.append({"x": float(x), "g0": float(g[0]), "g1": float(g[1]), "h": h})
    return pd.DataFrame(rows, columns=["x", "g0", "g1", "h"])


def write_csv(frame: pd.DataFrame, file_path: Optional[Union[str, Path]] = None, digits: int = 12) -> None:
    """Writes a table with floats at the given number of significant digits."""
    target = sys.stdout if file_path is None else file_path
    frame.to_csv(target, index=False, float_format=f"%.{digits}g")
    if file_path is not None:
        logger.info(f"Wrote {len(frame)} rows to {file_path}")
