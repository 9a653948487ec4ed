# src/mcpoly/workflows/commands.py
"""
The operations behind each command-line subcommand.

Each cmd_* function takes a validated RunConfig, writes its result to the
configured output (stdout by default) and returns the payload it wrote, so
that callers and tests can inspect it without parsing text.
"""

import dataclasses
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from mcpoly.aifv import (
    DecodeStats,
    SourceSpec,
    check_code,
    code_cost,
    code_from_chain,
    code_stationary,
    decode,
    encode,
    entropy,
    families_from_source,
    huffman,
    redundancy,
)
from mcpoly.chain import StateFamilies, origin
from mcpoly.config import RunConfig, SolverParams, default_height_cap, effective_cores
from mcpoly.errors import UnsupportedDimensionError
from mcpoly.io.readers import load_code, load_instance, load_source, parse_point
from mcpoly.io.writers import (
    code_to_dict,
    envelope_frame,
    families_to_dict,
    report_to_dict,
    source_to_dict,
    trace_to_dict,
    write_csv,
    write_json,
)
from mcpoly.numerics import format_rational, parse_rational
from mcpoly.polytope import Box, envelope, separate
from mcpoly.solvers import Method, SolveReport, solve
from mcpoly.workflows.generate import generate

logger = logging.getLogger(__name__)


def _solver_params(cfg: RunConfig) -> SolverParams:
    return dataclasses.replace(cfg.solver, cores=effective_cores(cfg.solver.cores))


def _box(cfg: RunConfig) -> Optional[Box]:
    return Box.parse(cfg.box) if cfg.box else None


def _read_stream(file_path: Optional[Path]) -> str:
    if file_path is None:
        return sys.stdin.read()
    return Path(file_path).read_text(encoding="utf-8")


def _write_text(text: str, file_path: Optional[Path]) -> None:
    if file_path is None:
        sys.stdout.write(text + "\n")
    else:
        Path(file_path).write_text(text + "\n", encoding="utf-8")
        logger.info(f"Wrote {file_path}")


def _write_trace(report: SolveReport, file_path: Optional[Path], digits: int = 12) -> None:
    """Writes the trace as a CSV table for a .csv path, as JSON otherwise."""
    if file_path is None:
        return
    if file_path.suffix.lower() == ".csv":
        write_csv(report.trace_frame(), file_path, digits=digits)
    else:
        write_json({"solver": report.solver, "trace": [trace_to_dict(r) for r in report.trace]}, file_path)


def split_message(text: str, src: SourceSpec) -> List[str]:
    """
    Splits a message into symbol names.

    When every symbol name is a single character, whitespace is dropped and
    each remaining character is a symbol; otherwise symbols are separated by
    whitespace.
    """
    if all(len(s) == 1 for s in src.symbols):
        return list("".join(text.split()))
    return text.split()


def join_message(symbols: List[str], src: SourceSpec) -> str:
    sep = "" if all(len(s) == 1 for s in src.symbols) else " "
    return sep.join(symbols)


def cmd_solve_chain(cfg: RunConfig) -> Dict[str, Any]:
    """
    Loads an instance, solves it and writes the SolveReport as JSON.

    The trace goes to cfg.trace when set, and is left out of the main report.
    """
    fams = load_instance(cfg.input)
    method = Method.parse(cfg.solver.method)
    x0 = parse_point(cfg.x, fams.m) if cfg.x else None
    report = solve(fams, method, _solver_params(cfg), x0=x0, box=_box(cfg))
    logger.info(f"Optimal cost {report.cost} found by {report.solver}")
    data = report_to_dict(report, include_trace=cfg.trace is None)
    _write_trace(report, cfg.trace, cfg.base.output.float_digits)
    write_json(data, cfg.output)
    return data


def cmd_aifv(cfg: RunConfig) -> Dict[str, Any]:
    """
    Builds an optimal AIFV-m code for a source and reports it next to its
    entropy and the Huffman code.

    The code file layout is written to cfg.code_out when set.
    """
    src = load_source(cfg.input)
    m = cfg.aifv.m
    cap = cfg.aifv.height_cap or default_height_cap(src.n, m, cfg.aifv.full_height)
    fams = families_from_source(src, m, cap, cfg.aifv.max_trees)
    report = solve(fams, Method.parse(cfg.solver.method), _solver_params(cfg), box=_box(cfg))
    code = code_from_chain(report.chain, src)
    check_code(code, strict=cfg.aifv.strict)
    value = code_cost(code)
    ent = entropy(src)
    red, within = redundancy(value, src, m)
    lengths, huffman_cost = huffman(src)
    logger.info(f"AIFV-{m} cost {value} ({float(value):.6g} bits), Huffman {huffman_cost}, entropy {ent:.6g}")

    data = {
        "code": code_to_dict(code),
        "cost": format_rational(value),
        "cost_float": float(value),
        "tree_frequencies": [format_rational(v) for v in code_stationary(code)],
        "entropy": ent,
        "redundancy": red,
        "redundancy_within_bound": within,
        "height_cap": cap,
        "family_sizes": list(fams.sizes()),
        "huffman": {
            "lengths": list(lengths),
            "cost": format_rational(huffman_cost),
            "cost_float": float(huffman_cost),
        },
        "report": report_to_dict(report, include_trace=False),
    }
    _write_trace(report, cfg.trace, cfg.base.output.float_digits)
    if cfg.code_out is not None:
        write_json(code_to_dict(code), cfg.code_out)
    write_json(data, cfg.output)
    return data


def cmd_encode(cfg: RunConfig) -> str:
    """Encodes the symbols read from cfg.input (or stdin) to a bit string."""
    code = load_code(cfg.code, strict=cfg.aifv.strict)
    message = split_message(_read_stream(cfg.input), code.source)
    bits = encode(code, message)
    logger.info(f"Encoded {len(message)} symbol(s) into {len(bits)} bit(s)")
    _write_text(bits, cfg.output)
    return bits


def cmd_decode(cfg: RunConfig) -> str:
    """Decodes the bit string read from cfg.input (or stdin)."""
    code = load_code(cfg.code, strict=cfg.aifv.strict)
    bits = "".join(_read_stream(cfg.input).split())
    stats = DecodeStats()
    symbols = decode(code, bits, length=cfg.length, stats=stats)
    logger.info(f"Decoded {stats.symbols} symbol(s); longest lookahead {stats.max_lookahead} bit(s)")
    text = join_message(symbols, code.source)
    _write_text(text, cfg.output)
    return text


def cmd_oracle(cfg: RunConfig) -> Dict[str, Any]:
    """
    Evaluates the envelope at cfg.x and, when cfg.y is given, runs the
    separation oracle on (x, y) over cfg.box (default: unit box) with y >= 0.
    """
    fams = load_instance(cfg.input)
    x = parse_point(cfg.x, fams.m) if cfg.x else origin(fams.m)
    env = envelope(fams, x)
    data: Dict[str, Any] = {
        "x": [format_rational(v) for v in x],
        "h": format_rational(env.h),
        "types": [
            {
                "type": k,
                "g": format_rational(g),
                "argmin": i,
                "label": fams[k][i].label,
            }
            for k, (g, i) in enumerate(zip(env.values, env.argmin))
        ],
    }
    if cfg.y is not None:
        y = parse_rational(cfg.y)
        result = separate(fams, tuple(x) + (y,), _box(cfg) or Box.unit(fams.m), y_floor=0)
        data["separation"] = {
            "y": format_rational(y),
            "verdict": result.verdict.value,
            "normal": None if result.normal is None else [format_rational(a) for a in result.normal],
            "offset": None if result.offset is None else format_rational(result.offset),
            "provenance": result.provenance,
        }
        logger.info(f"Point {data['x']} with y = {y} is {result.verdict.value}")
    write_json(data, cfg.output)
    return data


def _plot_envelope(frame: pd.DataFrame, file_path: Path) -> None:
    # matplotlib comes with the "vis" extra only.
    from matplotlib import pyplot as plt

    fig = plt.figure()
    ax = fig.add_subplot(1, 1, 1)
    ax.plot(frame["x"], frame["g0"], label="g_0", linestyle="--")
    ax.plot(frame["x"], frame["g1"], label="g_1", linestyle="--")
    ax.plot(frame["x"], frame["h"], label="h", linewidth=2)
    ax.set_xlabel("x")
    ax.legend()
    fig.savefig(file_path)
    plt.close(fig)
    logger.info(f"Saved envelope plot to {file_path}")


def cmd_envelope_dump(cfg: RunConfig) -> pd.DataFrame:
    """
    Tabulates x, g_0(x), g_1(x) and h(x) over cfg.x_range for an m = 2
    instance.

    Raises:
        UnsupportedDimensionError: If the instance has m != 2.
    """
    fams = load_instance(cfg.input)
    if fams.m != 2:
        raise UnsupportedDimensionError(f"envelope-dump needs m = 2, got m = {fams.m}", field="m")
    lo, hi, step = cfg.x_range
    xs = np.arange(lo, hi + step / 2, step)
    frame = envelope_frame(fams, xs)
    write_csv(frame, cfg.output, cfg.base.output.float_digits)
    if cfg.plot is not None:
        _plot_envelope(frame, cfg.plot)
    return frame


def cmd_gen(cfg: RunConfig) -> Dict[str, Any]:
    """Writes a seeded random instance (chain families or a dyadic source)."""
    kind, obj = generate(cfg.kind, cfg.base.generator)
    data: Dict[str, Any]
    if isinstance(obj, StateFamilies):
        data = families_to_dict(obj)
    else:
        data = source_to_dict(obj)
    data["seed"] = cfg.base.generator.seed
    data["kind"] = kind
    write_json(data, cfg.output)
    return data
