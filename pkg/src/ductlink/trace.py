"""Susceptibility time series: immutable container plus CSV persistence.

Traces may be non-uniformly sampled; anything that needs a value between
samples interpolates linearly. The on-disk format is UTF-8 CSV with header
``time_s,chi``, decimal point ``.``, LF line endings, one sample per row.
Values are written with shortest round-trip precision so that
``read_trace(write_trace(t))`` reproduces the samples bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

__all__ = ["SusceptibilityTrace", "read_trace", "write_trace"]

_HEADER = "time_s,chi"


@dataclass(frozen=True)
class SusceptibilityTrace:
    times: np.ndarray
    values: np.ndarray
    metadata: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or values.ndim != 1:
            raise ValueError("times and values must be 1-D arrays")
        if times.size != values.size:
            raise ValueError("times and values must have equal length")
        if times.size == 0:
            raise ValueError("trace must contain at least one sample")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        times.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "metadata", dict(self.metadata))

    def __len__(self) -> int:
        return int(self.times.size)

    @property
    def t_start(self) -> float:
        return float(self.times[0])

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def value_at(self, t):
        """Linearly interpolated value at time(s) ``t`` within the trace span."""
        if len(self) < 2:
            raise ValueError("interpolation requires at least 2 samples")
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < self.times[0]) or np.any(t_arr > self.times[-1]):
            raise ValueError("time outside trace extent")
        out = np.interp(t_arr, self.times, self.values)
        return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out

    def shifted(self, dt: float) -> "SusceptibilityTrace":
        """Copy of the trace with all timestamps moved by ``dt``."""
        return SusceptibilityTrace(self.times + dt, self.values, self.metadata)

    def windowed(self, t0: float, t1: float) -> "SusceptibilityTrace":
        """Sub-trace with sample times in ``[t0, t1]``."""
        mask = (self.times >= t0) & (self.times <= t1)
        if not mask.any():
            raise ValueError("window contains no samples")
        return SusceptibilityTrace(self.times[mask], self.values[mask], self.metadata)


def write_trace(trace: SusceptibilityTrace, path: str | Path) -> None:
    """Write a trace as ``time_s,chi`` CSV with LF endings."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_HEADER + "\n")
        for t, v in zip(trace.times.tolist(), trace.values.tolist()):
            fh.write(f"{t!r},{v!r}\n")


def read_trace(path: str | Path) -> SusceptibilityTrace:
    """Read a ``time_s,chi`` CSV trace, rejecting malformed rows by number."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != _HEADER:
        raise ValueError(f"missing header '{_HEADER}'")
    times: list[float] = []
    values: list[float] = []
    for row, line in enumerate(lines[1:], start=1):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != 2:
            raise ValueError(f"row {row}: expected 2 cells, got {len(cells)}")
        try:
            t, v = float(cells[0]), float(cells[1])
        except ValueError:
            raise ValueError(f"row {row}: non-numeric cell") from None
        if times and t <= times[-1]:
            raise ValueError(f"row {row}: times out of order")
        times.append(t)
        values.append(v)
    if not times:
        raise ValueError("trace file has no samples")
    return SusceptibilityTrace(np.array(times), np.array(values))
