"""Fixed-column sensor trace ingestion: parse, merge by year, extract.

A trace line holds at least six whitespace-separated integer columns in the
order year month day hour minute wavelength; anything after the sixth column
is ignored.  Wavelengths stay in raw interrogator counts until a calibration
maps them to degrees Celsius.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InvalidArgumentError, TraceIOError, TraceParseError

_COLUMNS = ("year", "month", "day", "hour", "minute", "wavelength")
_RANGES = {
    "year": (1000, 9999),
    "month": (1, 12),
    "day": (1, 31),
    "hour": (0, 23),
    "minute": (0, 59),
}


@dataclass(frozen=True)
class SensorRecord:
    year: int
    month: int
    day: int
    hour: int
    minute: int
    wavelength: int


@dataclass(frozen=True)
class Calibration:
    """Affine map from raw wavelength counts to temperature.

    ``lambda0`` is the raw reading at reference temperature ``t0``; ``slope``
    is raw counts per degree Celsius.  There is no sensible default; the
    numbers come from the instrument's data sheet or a bench calibration.
    """

    lambda0: float
    slope: float
    t0: float

    def __post_init__(self):
        if self.slope == 0:
            raise InvalidArgumentError("calibration slope must be nonzero")


@dataclass(frozen=True)
class ExtractedRow:
    """User-facing tuple; the day column is dropped unless explicitly kept."""

    year: int
    month: int
    hour: int
    minute: int
    temp_c: float
    day: int | None = None


def parse_record(line: str, *, lineno: int = 0,
                 source: str | None = None) -> SensorRecord:
    """Parse one trace line into a SensorRecord.

    Raises TraceParseError naming the line and offending column when a field
    is missing, non-numeric or out of range.
    """
    fields = line.split()
    if len(fields) < len(_COLUMNS):
        raise TraceParseError(
            f"expected at least {len(_COLUMNS)} columns, got {len(fields)}",
            source=source, lineno=lineno,
            column=_COLUMNS[len(fields)])
    values = {}
    for name, token in zip(_COLUMNS, fields):
        try:
            values[name] = int(token)
        except ValueError:
            raise TraceParseError(f"not an integer: {token!r}",
                                  source=source, lineno=lineno,
                                  column=name) from None
    for name, (lo, hi) in _RANGES.items():
        if not lo <= values[name] <= hi:
            raise TraceParseError(
                f"{values[name]} outside [{lo}, {hi}]",
                source=source, lineno=lineno, column=name)
    if values["wavelength"] <= 0:
        raise TraceParseError(f"{values['wavelength']} is not positive",
                              source=source, lineno=lineno, column="wavelength")
    return SensorRecord(**values)


def format_record(rec: SensorRecord) -> str:
    """Render a record in the zero-padded column layout the traces use."""
    return (f"{rec.year:04d} {rec.month:02d} {rec.day:02d} "
            f"{rec.hour:02d} {rec.minute:02d} {rec.wavelength}")


def parse_trace_text(text: str, source: str | None = None) -> list[SensorRecord]:
    """Parse a whole trace body; blank lines are skipped."""
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        records.append(parse_record(line, lineno=lineno, source=source))
    return records


def read_trace(path: str | os.PathLike) -> list[SensorRecord]:
    """Read and parse one trace file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise TraceIOError(f"cannot read trace file {path}: {exc}") from exc
    return parse_trace_text(text, source=str(path))


def merge_records_by_year(
        sources: Iterable[tuple[str, Sequence[SensorRecord]]]) -> dict[int, list[SensorRecord]]:
    """Group parsed records by year, ordered by (month, day, hour, minute).

    Records with equal timestamps keep their input order (source order, then
    line order), and the total count is conserved.
    """
    by_year: dict[int, list[SensorRecord]] = {}
    for _, records in sources:
        for rec in records:
            by_year.setdefault(rec.year, []).append(rec)
    for year, records in by_year.items():
        records.sort(key=lambda r: (r.month, r.day, r.hour, r.minute))
    return dict(sorted(by_year.items()))


def merge_by_year(input_files: Sequence[str | os.PathLike],
                  out_dir: str | os.PathLike) -> dict[int, Path]:
    """Merge small trace files into one file per year under ``out_dir``.

    Parsing is fail-fast: any malformed record aborts the whole run before a
    single output is written, and a failure while writing removes the partial
    outputs already on disk.
    """
    parsed = [(str(p), read_trace(p)) for p in input_files]
    by_year = merge_records_by_year(parsed)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: dict[int, Path] = {}
    try:
        for year, records in by_year.items():
            path = out / f"{year}.txt"
            body = "\n".join(format_record(r) for r in records)
            path.write_text(body + "\n" if body else "")
            written[year] = path
    except OSError as exc:
        for path in written.values():
            path.unlink(missing_ok=True)
        raise TraceIOError(f"cannot write merged output: {exc}") from exc
    return written


def wavelength_to_temperature(wavelength: float, cal: Calibration) -> float:
    """Degrees Celsius for a raw wavelength reading."""
    return cal.t0 + (wavelength - cal.lambda0) / cal.slope


def extract_records(records: Sequence[SensorRecord], cal: Calibration,
                    include_day: bool = False) -> list[ExtractedRow]:
    """Map records to user-facing rows, one per record, preserving order."""
    return [
        ExtractedRow(year=r.year, month=r.month, hour=r.hour, minute=r.minute,
                     temp_c=wavelength_to_temperature(r.wavelength, cal),
                     day=r.day if include_day else None)
        for r in records
    ]


def extract(merged_file: str | os.PathLike, cal: Calibration,
            include_day: bool = False) -> list[ExtractedRow]:
    """Parse a merged file and convert every record to an ExtractedRow."""
    return extract_records(read_trace(merged_file), cal, include_day=include_day)


def extracted_to_csv(rows: Sequence[ExtractedRow], include_day: bool = False) -> str:
    """Render extracted rows as CSV (header year,month,hour,minute,temp_c)."""
    if include_day:
        lines = ["year,month,day,hour,minute,temp_c"]
        lines += [f"{r.year},{r.month},{r.day},{r.hour},{r.minute},{r.temp_c!r}"
                  for r in rows]
    else:
        lines = ["year,month,hour,minute,temp_c"]
        lines += [f"{r.year},{r.month},{r.hour},{r.minute},{r.temp_c!r}"
                  for r in rows]
    return "\n".join(lines) + "\n"
