"""File formats: CSV ingestion and emission, text grids, PGM and PPM.

All CSVs use LF line endings and a header row; floats are written with
repr so every value round-trips exactly.  Writers go through an atomic
temp-file-plus-rename so interrupted runs never leave truncated files.
"""

from __future__ import annotations

import os
import tempfile
from typing import Iterable, Sequence

from entrosim.ca import CellState, Grid2D, Row1D
from entrosim.exchange import EntropyTrace, GibbsFit
from entrosim.macro import EntropyReport, MacroObservation, MacroSeries

__all__ = [
    "DataError",
    "atomic_write_text",
    "atomic_write_bytes",
    "parse_macro_csv",
    "format_report_csv",
    "format_trace_csv",
    "format_histogram_csv",
    "format_fit_csv",
    "format_labeled_trace_csv",
    "render_rows_text",
    "rows_to_pgm",
    "grid_to_text",
    "grid_to_pgm",
    "grid_to_ppm",
]


class DataError(ValueError):
    """Malformed or contract-violating input data (bad file contents)."""


def atomic_write_bytes(path: str, data: bytes) -> None:
    """Write bytes via a same-directory temp file and an atomic rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-entrosim-")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        # mkstemp files are 0600; give the final file normal umask permissions
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: str, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def _number(value: float) -> str:
    """Shortest exact decimal form: ints as ints, floats via repr."""
    if isinstance(value, int):
        return str(value)
    return repr(value)


# ------------------------------------------------------------- macro CSV

_MACRO_REQUIRED = ("period", "E", "V", "W")
_MACRO_OPTIONAL = ("N", "alpha")


def parse_macro_csv(path: str) -> MacroSeries:
    """Read a `period,E,V,W[,N][,alpha]` CSV into a validated series.

    Every error names the offending row (1-based data rows) and, where
    it applies, the column.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as handle:
            lines = [ln for ln in handle.read().split("\n") if ln.strip() != ""]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise DataError("empty series: no header row")
    header = tuple(name.strip() for name in lines[0].split(","))
    if header[: len(_MACRO_REQUIRED)] != _MACRO_REQUIRED:
        raise DataError(
            f"header must start with {','.join(_MACRO_REQUIRED)}, got {lines[0]!r}"
        )
    extras = header[len(_MACRO_REQUIRED):]
    allowed = [t for t in (_MACRO_OPTIONAL, ("N",), ("alpha",), ()) if extras == t]
    if not allowed:
        raise DataError(
            f"optional columns must be N and/or alpha in order, got {lines[0]!r}"
        )

    observations = []
    previous_period = None
    for row_number, line in enumerate(lines[1:], start=1):
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != len(header):
            raise DataError(
                f"row {row_number}: expected {len(header)} columns, got {len(parts)}"
            )
        values = dict(zip(header, parts))

        def numeric(column: str, kind):
            raw = values[column]
            try:
                return kind(raw)
            except ValueError:
                raise DataError(
                    f"row {row_number}, column {column}: not numeric: {raw!r}"
                ) from None

        period = numeric("period", int)
        if previous_period is not None and period <= previous_period:
            raise DataError(
                f"row {row_number}: period {period} not greater than "
                f"previous {previous_period}"
            )
        previous_period = period
        kwargs = {
            "period": period,
            "capital_E": numeric("E", float),
            "volume_V": numeric("V", float),
            "work_W": numeric("W", float),
        }
        if "N" in values:
            kwargs["agents_N"] = numeric("N", int)
        if "alpha" in values:
            kwargs["alpha"] = numeric("alpha", float)
        try:
            observations.append(MacroObservation(**kwargs))
        except ValueError as exc:
            raise DataError(f"row {row_number}: {exc}") from exc
    if not observations:
        raise DataError("empty series: header but no data rows")
    return MacroSeries(tuple(observations))


# ----------------------------------------------------------- CSV writers


def format_report_csv(reports: Sequence[EntropyReport]) -> str:
    lines = ["period,S,elasticity,direction"]
    for r in reports:
        elasticity = "" if r.elasticity is None else _number(r.elasticity)
        lines.append(
            f"{r.period},{_number(r.entropy)},{elasticity},{r.direction.value}"
        )
    return "\n".join(lines) + "\n"


def format_trace_csv(trace: EntropyTrace) -> str:
    lines = ["step,entropy"]
    for step, entropy in trace.samples:
        lines.append(f"{step},{_number(entropy)}")
    return "\n".join(lines) + "\n"


def format_histogram_csv(rows: Iterable[tuple[float, float, int]]) -> str:
    lines = ["bin_lo,bin_hi,count"]
    for lo, hi, count in rows:
        lines.append(f"{_number(lo)},{_number(hi)},{count}")
    return "\n".join(lines) + "\n"


def format_fit_csv(fit: GibbsFit | None) -> str:
    # ln_total_money rides along as an annotation column; it is the
    # total-money logarithm, not a distribution-level quantity
    header = "T,beta,A,fit_error,ln_total_money"
    if fit is None:
        return header + "\n"
    row = ",".join(
        _number(v)
        for v in (
            fit.temperature_T,
            fit.beta,
            fit.amplitude_A,
            fit.fit_error,
            fit.ln_total_money,
        )
    )
    return f"{header}\n{row}\n"


def format_labeled_trace_csv(
    label_names: Sequence[str],
    rows: Iterable[tuple[int, Sequence[int], float]],
) -> str:
    """Trace CSV with extra count columns: step,<labels...>,entropy."""
    lines = ["step," + ",".join(label_names) + ",entropy"]
    for step, counts, entropy in rows:
        middle = ",".join(str(c) for c in counts)
        lines.append(f"{step},{middle},{_number(entropy)}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------- renderers


def render_rows_text(rows: Sequence[Row1D]) -> str:
    """Space-time diagram as text: `.` for 0, `#` for 1, one line per row."""
    return "\n".join(
        "".join("#" if c else "." for c in row.cells) for row in rows
    ) + "\n"


def rows_to_pgm(rows: Sequence[Row1D]) -> bytes:
    """Space-time diagram as binary PGM: live cells black on white."""
    width = rows[0].width
    if any(r.width != width for r in rows):
        raise ValueError("rows must share one width")
    header = f"P5\n{width} {len(rows)}\n255\n".encode("ascii")
    body = bytes(0 if c else 255 for row in rows for c in row.cells)
    return header + body


_TEXT_GLYPHS = {
    CellState.EMPTY: ".",
    CellState.TYPE_A: "A",
    CellState.TYPE_B: "B",
    CellState.PREFERRED: "*",
}

_PGM_LEVELS = {
    CellState.TYPE_A: 0,
    CellState.PREFERRED: 64,
    CellState.EMPTY: 128,
    CellState.TYPE_B: 255,
}

_PPM_COLORS = {
    CellState.EMPTY: (0, 0, 255),  # blue: empty state
    CellState.PREFERRED: (255, 0, 0),  # red: visited/preferred state
    CellState.TYPE_A: (0, 0, 0),
    CellState.TYPE_B: (255, 255, 255),
}


def grid_to_text(grid: Grid2D) -> str:
    lines = []
    for y in range(grid.height):
        start = y * grid.width
        lines.append(
            "".join(_TEXT_GLYPHS[c] for c in grid.cells[start:start + grid.width])
        )
    return "\n".join(lines) + "\n"


def grid_to_pgm(grid: Grid2D) -> bytes:
    header = f"P5\n{grid.width} {grid.height}\n255\n".encode("ascii")
    return header + bytes(_PGM_LEVELS[c] for c in grid.cells)


def grid_to_ppm(grid: Grid2D) -> bytes:
    header = f"P6\n{grid.width} {grid.height}\n255\n".encode("ascii")
    body = bytearray()
    for cell in grid.cells:
        body.extend(_PPM_COLORS[cell])
    return header + bytes(body)
