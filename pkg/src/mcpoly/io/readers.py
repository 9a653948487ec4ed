import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

from mcpoly.aifv import Code, CodeTree, SourceSpec
from mcpoly.aifv.validate import check_code
from mcpoly.chain import PointX, State, StateFamilies, as_point
from mcpoly.errors import MCPolyError, ParseError, ValidationError

# Setup logger for this module
logger = logging.getLogger(__name__)


def _read_text(file_path: Union[str, Path]) -> str:
    file_path = Path(file_path)
    if not file_path.is_file():
        raise FileNotFoundError(f"Input file not found: {file_path}")
    return file_path.read_text(encoding="utf-8")


def _read_json(file_path: Union[str, Path]) -> Any:
    text = _read_text(file_path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        logger.error(f"Invalid JSON in {file_path}: {e}")
        raise ParseError(f"Invalid JSON in {file_path}: {e}") from e


def _expect(value: Any, kind: type, field: str) -> Any:
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ParseError(f"{field}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def parse_state(data: Any, field: str) -> State:
    """Builds a State from its JSON object, prefixing errors with field."""
    _expect(data, dict, field)
    if "cost" not in data or "transitions" not in data:
        raise ParseError(f"{field}: a state needs 'cost' and 'transitions'")
    transitions = _expect(data["transitions"], list, f"{field}.transitions")
    try:
        return State(data["cost"], tuple(transitions), str(data.get("label", "")))
    except ValidationError as e:
        sub = f"{field}.{e.field}" if e.field else field
        raise type(e)(e.message, field=sub) from e
    except ParseError as e:
        raise ParseError(f"{field}: {e}") from e


def parse_instance(data: Any) -> StateFamilies:
    """
    Builds state families from the instance JSON structure
    ``{"m": int, "families": [[state, ...], ...]}``.

    Raises:
        ParseError: If keys are missing or have the wrong JSON type.
        ValidationError: If a state or family violates its invariants. The
            message names the offending field, e.g. ``families[1][0].transitions``.
    """
    _expect(data, dict, "instance")
    if "m" not in data or "families" not in data:
        raise ParseError("instance: needs 'm' and 'families'")
    m = _expect(data["m"], int, "m")
    raw_families = _expect(data["families"], list, "families")
    families: List[tuple] = []
    for k, raw in enumerate(raw_families):
        _expect(raw, list, f"families[{k}]")
        families.append(tuple(parse_state(s, f"families[{k}][{i}]") for i, s in enumerate(raw)))
    return StateFamilies(m, tuple(families))


def load_instance(file_path: Union[str, Path]) -> StateFamilies:
    """
    Loads a minimum-cost chain instance from a JSON file.

    Args:
        file_path: Path to the instance file.

    Returns:
        The validated state families.

    Raises:
        FileNotFoundError: If the file does not exist.
        ParseError: If the file is not valid JSON or has the wrong layout.
        ValidationError: If the instance violates a state or family invariant.
    """
    data = _read_json(file_path)
    try:
        fams = parse_instance(data)
    except MCPolyError as e:
        logger.error(f"Rejected instance {file_path}: {e}")
        raise
    logger.info(f"Loaded instance with m = {fams.m} and family sizes {fams.sizes()} from {file_path}.")
    return fams


def parse_source(data: Dict[str, Any]) -> SourceSpec:
    """Builds a SourceSpec from ``{"probabilities": [...], "b"?: int, "symbols"?: [...]}``."""
    _expect(data, dict, "source")
    if "probabilities" not in data:
        raise ParseError("source: needs 'probabilities'")
    probabilities = tuple(_expect(data["probabilities"], list, "probabilities"))
    b = _expect(data["b"], int, "b") if data.get("b") is not None else None
    symbols = data.get("symbols")
    if symbols is not None:
        symbols = tuple(str(s) for s in _expect(symbols, list, "symbols"))
    return SourceSpec(probabilities, b=b, symbols=symbols)


def load_source(file_path: Union[str, Path]) -> SourceSpec:
    """
    Loads a source from JSON, or from text with one probability per line.

    In the text form blank lines and anything after '#' are ignored.

    Raises:
        FileNotFoundError: If the file does not exist.
        ParseError: If a probability cannot be read.
        ValidationError: If the probabilities are not a dyadic distribution.
    """
    file_path = Path(file_path)
    if file_path.suffix.lower() == ".json":
        src = parse_source(_read_json(file_path))
    else:
        lines = [line.split("#", 1)[0].strip() for line in _read_text(file_path).splitlines()]
        src = SourceSpec(tuple(line for line in lines if line))
    logger.info(f"Loaded source with {src.n} symbols (b = {src.b}) from {file_path}.")
    return src


def parse_code(data: Dict[str, Any], strict: bool = False) -> Code:
    """Builds and validates a Code from ``{"m", "source", "trees"}``."""
    _expect(data, dict, "code")
    for key in ("m", "source", "trees"):
        if key not in data:
            raise ParseError(f"code: needs '{key}'")
    m = _expect(data["m"], int, "m")
    trees = tuple(CodeTree.parse(_expect(t, str, f"trees[{i}]")) for i, t in enumerate(_expect(data["trees"], list, "trees")))
    if len(trees) != m:
        raise ValidationError(f"{len(trees)} trees for m = {m}", field="trees")
    code = Code(trees, parse_source(data["source"]))
    check_code(code, strict=strict)
    return code


def load_code(file_path: Union[str, Path], strict: bool = False) -> Code:
    """
    Loads an AIFV-m code file and validates every tree.

    Raises:
        FileNotFoundError: If the file does not exist.
        ParseError: If the file or a tree string cannot be parsed.
        ValidationError: If a tree breaks the code definition.
    """
    data = _read_json(file_path)
    try:
        code = parse_code(data, strict)
    except MCPolyError as e:
        logger.error(f"Rejected code file {file_path}: {e}")
        raise
    logger.info(f"Loaded AIFV-{code.m} code over {code.source.n} symbols from {file_path}.")
    return code


def parse_point(text: str, m: int) -> PointX:
    """Parses "x1,x2,..." into a point with m - 1 coordinates."""
    parts = [p for p in text.split(",") if p.strip()]
    return as_point(parts, m)
