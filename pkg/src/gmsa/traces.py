"""CSV time series of per-DC PUE and price weights.

Format (UTF-8, comma separated, ``\\n`` line ends)::

    slot,<dc_id_1>,...,<dc_id_N>
    0,1.12,1.3,...
    1,1.11,1.29,...

Slots are contiguous from 0. Values are written with Python's shortest
round-tripping float repr, so ``write_trace(load_trace(path))`` reproduces a
file written by ``write_trace`` byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import SystemConfig

TRACE_KINDS = ("pue", "price_weight")


class TraceError(ValueError):
    """Base class for malformed trace files."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = f"{path}:{line}: " if path is not None and line is not None else ""
        super().__init__(where + message)


class TraceParseError(TraceError):
    """Unparseable text: bad number, empty file, wrong header keyword."""


class TraceShapeError(TraceError):
    """Column count or DC labels disagree with the system config."""


class TraceSlotError(TraceError):
    """Slot indices are not 0, 1, 2, ... without gaps."""


class TraceRangeError(TraceError):
    """A value violates its kind's range (PUE >= 1, price >= 0)."""

    def __init__(self, message, path=None, line=None, row=None, column=None):
        self.row = row
        self.column = column
        super().__init__(message, path, line)


@dataclass(frozen=True, eq=False)
class TraceSeries:
    kind: str
    values: np.ndarray  # (T, N)
    dc_ids: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in TRACE_KINDS:
            raise ValueError(f"unknown trace kind {self.kind!r}; expected one of {TRACE_KINDS}")
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 2 or vals.shape[1] != len(self.dc_ids):
            raise ValueError(f"trace values have shape {vals.shape}, expected (T, {len(self.dc_ids)})")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "dc_ids", tuple(self.dc_ids))

    @property
    def num_slots(self) -> int:
        return self.values.shape[0]

    def at(self, slot: int) -> np.ndarray:
        """Row for ``slot``; shorter traces repeat cyclically."""
        return self.values[slot % self.num_slots]


def _in_range(kind: str, value: float) -> bool:
    return value >= 1.0 if kind == "pue" else value >= 0.0


def load_trace(path, kind: str, config: SystemConfig) -> TraceSeries:
    if kind not in TRACE_KINDS:
        raise ValueError(f"unknown trace kind {kind!r}; expected one of {TRACE_KINDS}")
    path = Path(path)
    lines = path.read_text(encoding="utf-8").split("\n")
    lines = [ln.rstrip() for ln in lines]
    while lines and not lines[-1]:
        lines.pop()
    if not lines:
        raise TraceParseError("empty trace file", path, 1)

    header = lines[0].split(",")
    if header[0] != "slot":
        raise TraceParseError(f"header must start with 'slot', got {header[0]!r}", path, 1)
    ids = tuple(h.strip() for h in header[1:])
    n = config.num_dcs
    if len(ids) != n:
        raise TraceShapeError(f"header names {len(ids)} data centers, config has {n}", path, 1)
    if ids != tuple(config.dc_ids):
        raise TraceShapeError(f"header ids {list(ids)} do not match config dc_ids {list(config.dc_ids)}", path, 1)
    if len(lines) == 1:
        raise TraceParseError("trace has a header but no rows", path, 1)

    rows = []
    for row, text in enumerate(lines[1:]):
        lineno = row + 2
        if not text:
            raise TraceParseError("blank line inside trace", path, lineno)
        fields = text.split(",")
        if len(fields) != n + 1:
            raise TraceShapeError(f"expected {n + 1} fields, got {len(fields)}", path, lineno)
        try:
            slot = int(fields[0])
        except ValueError:
            raise TraceParseError(f"bad slot index {fields[0]!r}", path, lineno) from None
        if slot != row:
            raise TraceSlotError(f"expected slot {row}, got {slot}", path, lineno)
        values = []
        for col, tok in enumerate(fields[1:]):
            try:
                x = float(tok)
            except ValueError:
                raise TraceParseError(f"bad number {tok!r} in column {ids[col]!r}", path, lineno) from None
            if not math.isfinite(x):
                raise TraceParseError(f"non-finite value in column {ids[col]!r}", path, lineno)
            if not _in_range(kind, x):
                bound = "below 1" if kind == "pue" else "negative"
                raise TraceRangeError(f"{kind} value {tok} {bound} at slot {row}, column {ids[col]!r}",
                                      path, lineno, row=row, column=col)
            values.append(x)
        rows.append(values)
    return TraceSeries(kind=kind, values=np.array(rows), dc_ids=ids)


def format_trace(series: TraceSeries) -> str:
    out = ["slot," + ",".join(series.dc_ids)]
    for t, row in enumerate(series.values):
        out.append(f"{t}," + ",".join(repr(float(x)) for x in row))
    return "\n".join(out) + "\n"


def write_trace(series: TraceSeries, path) -> Path:
    path = Path(path)
    path.write_text(format_trace(series), encoding="utf-8")
    return path
