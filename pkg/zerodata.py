"""
Zero-ordinate tables: loading, empirical window counts and the comparison
of empirical counts against the GRH and unconditional bounds.

File format: one decimal ordinate per line, ``#`` starts a comment, and an
optional ``height = <value>`` line certifies that every zero with
0 < gamma <= height is listed.
"""

import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np
from loguru import logger

from bounds import bound_window, unconditional_window_bound
from core import RATIONALS, FieldInvariants, load_field
from exceptions import CoverageError, DomainError, MetaError, OrderError, ParseError

_DECIMAL = re.compile(r"^(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?$")
_HEIGHT = re.compile(r"^height\s*=\s*(.*)$")
_BOM = b"\xef\xbb\xbf"


@dataclass(frozen=True)
class ZeroTable:
    ordinates: np.ndarray
    height: float
    field: FieldInvariants
    source: str = ""

    def __len__(self):
        return int(self.ordinates.size)

    def covers(self, T: float) -> bool:
        return T <= self.height


@dataclass(frozen=True)
class ComparisonRow:
    T: float
    a: float
    empirical: int
    grh_bound: Optional[float]
    uncond_bound: Optional[float]

    @property
    def grh_slack(self) -> Optional[float]:
        return None if self.grh_bound is None else self.grh_bound - self.empirical

    @property
    def uncond_slack(self) -> Optional[float]:
        return None if self.uncond_bound is None else self.uncond_bound - self.empirical

    @property
    def violation(self) -> bool:
        return any(s is not None and s < 0 for s in (self.grh_slack, self.uncond_slack))


def _parse_float(text: str, lineno: int, what: str) -> float:
    if not _DECIMAL.match(text):
        raise ParseError(f"malformed {what} {text!r}", line=lineno, module="zerodata")
    return float(text)


def parse_zeros(text: str, field: FieldInvariants = RATIONALS, source: str = "") -> ZeroTable:
    ordinates: List[float] = []
    height: Optional[float] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        directive = _HEIGHT.match(line)
        if directive:
            if height is not None:
                raise MetaError(f"line {lineno}: duplicate height directive")
            height = _parse_float(directive.group(1).strip(), lineno, "height")
            if not height > 0:
                raise MetaError(f"line {lineno}: height must be positive, got {height}")
            continue
        value = _parse_float(line, lineno, "ordinate")
        if value <= 0:
            raise ParseError(f"ordinates must be positive, got {value}", line=lineno, module="zerodata")
        if ordinates and value < ordinates[-1]:
            raise OrderError(f"{value} follows {ordinates[-1]}", line=lineno)
        ordinates.append(value)

    if height is None:
        if not ordinates:
            raise MetaError("empty table without a height directive")
        height = ordinates[-1]
        logger.warning(f"No height directive in {source or 'zero table'}; using last ordinate {height}")
    elif ordinates and height > ordinates[-1] + 1:
        logger.warning(f"height {height} exceeds the last ordinate {ordinates[-1]} by more than 1")

    return ZeroTable(np.array(ordinates, dtype=float), float(height), field, source)


def load_zeros(path: Union[str, Path], field_descriptor: Union[None, str, FieldInvariants] = None) -> ZeroTable:
    """Read and validate a zero table; the field is ``Q``, a descriptor path or FieldInvariants."""
    path = Path(path)
    if not path.is_file():
        raise ParseError(f"zero table {str(path)!r} not found", module="zerodata")
    raw = path.read_bytes()
    if raw.startswith(_BOM):
        raise ParseError("byte-order mark not allowed", line=1, module="zerodata")
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"not valid UTF-8: {e}", module="zerodata")
    field = field_descriptor if isinstance(field_descriptor, FieldInvariants) else load_field(field_descriptor)
    table = parse_zeros(text, field, source=str(path))
    logger.info(f"Loaded {len(table)} zeros up to height {table.height} from {path}")
    return table


def write_zeros(path: Union[str, Path], ordinates: Iterable[float], height: float, comment: str = "") -> None:
    """Write ordinates in the format load_zeros reads."""
    lines = []
    if comment:
        lines.extend(f"# {part}" for part in comment.splitlines())
    lines.append(f"height = {height!r}")
    lines.extend(repr(float(g)) for g in ordinates)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def empirical_count(table: ZeroTable, T: float, a: float) -> int:
    """Number of ordinates in [T - a, T + a], repeats counted."""
    if a < 0:
        raise DomainError(f"window half-width must be non-negative, got {a}")
    if T + a > table.height:
        raise CoverageError(f"window top {T + a} exceeds table height {table.height}")
    if T - a <= 0:
        raise DomainError(f"window bottom {T - a} must be positive")
    lo = np.searchsorted(table.ordinates, T - a, side="left")
    hi = np.searchsorted(table.ordinates, T + a, side="right")
    return int(hi - lo)


def zero_count(table: ZeroTable, T: float) -> int:
    """N(T): zeros with ordinate in [-T, T], conjugates included."""
    if T > table.height:
        raise CoverageError(f"T = {T} exceeds table height {table.height}")
    return 2 * int(np.searchsorted(table.ordinates, T, side="right"))


def max_multiplicity(table: ZeroTable, tol: float = 1e-6) -> int:
    """Largest run of ordinates whose consecutive gaps are within tol."""
    if len(table) == 0:
        return 0
    gaps = np.diff(table.ordinates) <= tol
    best = run = 1
    for close in gaps:
        run = run + 1 if close else 1
        best = max(best, run)
    return best


def comparison_table(table: ZeroTable, T_grid: Sequence[float], a_set: Sequence[float]) -> List[ComparisonRow]:
    """
    Empirical counts against bound_window (GRH) and the Trudgian-based
    unconditional bound; a bound outside its domain is left empty.
    """
    rows = []
    for T in T_grid:
        for a in a_set:
            empirical = empirical_count(table, T, a)
            try:
                grh = bound_window(table.field, T, a).total
            except DomainError:
                grh = None
            try:
                uncond = unconditional_window_bound(table.field, T, a)
            except DomainError:
                uncond = None
            row = ComparisonRow(float(T), float(a), empirical, grh, uncond)
            if row.violation:
                logger.error(f"Bound violated at T={T}, a={a}: {row}")
            rows.append(row)
    return rows


def parse_range(text: str) -> np.ndarray:
    """``lo:hi:step`` (hi inclusive, up to rounding) as an array."""
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"range must be lo:hi:step, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise DomainError(f"range must be numeric lo:hi:step, got {text!r}")
    if step <= 0 or hi < lo:
        raise DomainError(f"range needs step > 0 and hi >= lo, got {text!r}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def resolve_zeros_path(name: str, search_dir: Optional[str]) -> Path:
    """A path as given, else relative to ``search_dir``."""
    path = Path(name)
    if path.is_file() or search_dir is None:
        return path
    candidate = Path(search_dir) / name
    return candidate if candidate.is_file() else path
