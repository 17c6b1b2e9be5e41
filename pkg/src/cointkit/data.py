"""Loading, validating and saving year-indexed CSV datasets."""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Optional

import numpy as np

from .errors import DataError
from .series import AnnualSeries, change_rate, first_diff

log = logging.getLogger(__name__)

LEVEL_COLUMNS = ("LF",)
RATE_NAMES = ("GDPD", "CPI", "dLF/LF", "UE")


@dataclass(frozen=True)
class Dataset:
    series: Mapping[str, AnnualSeries]
    provenance: str = ""
    source: str = ""
    warnings: tuple = field(default_factory=tuple)

    def __getitem__(self, name: str) -> AnnualSeries:
        try:
            return self.series[name]
        except KeyError:
            raise DataError(f"dataset has no series {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.series

    def names(self) -> list:
        return list(self.series)

    def spans(self) -> dict:
        return {k: (s.start_year, s.end_year) for k, s in self.series.items()}


def france_path() -> Path:
    return Path(str(resources.files("cointkit") / "data" / "france.csv"))


def _units(column: str, schema: Optional[Mapping[str, str]]) -> str:
    if schema and column in schema:
        return schema[column]
    return "level" if column in LEVEL_COLUMNS else "rate"


def load(path, schema: Optional[Mapping[str, str]] = None, percent_input: bool = False) -> Dataset:
    """Parse a comma-delimited table whose first column is the calendar year.

    Lines starting with ``#`` before the header form the provenance note.
    Blank cells are allowed only before a column's first or after its last
    value. ``schema`` maps column names to ``"rate"`` or ``"level"``; by
    default ``LF`` is a level and everything else a rate. Rates must be
    fractions unless ``percent_input`` is set, which divides them by 100.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    lines = text.splitlines()
    notes = []
    while lines and lines[0].startswith("#"):
        notes.append(lines.pop(0)[1:].strip())
    rows = [r for r in csv.reader(lines) if any(c.strip() for c in r)]
    if not rows:
        raise DataError(f"{path}: no header row")
    header = [h.strip() for h in rows[0]]
    columns = header[1:]
    if not columns:
        raise DataError(f"{path}: no data columns")
    if len(set(columns)) != len(columns):
        raise DataError(f"{path}: duplicate column names")
    years, cells = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DataError(f"{path}: row {lineno} has {len(row)} cells, expected {len(header)}")
        try:
            year = int(row[0].strip())
        except ValueError:
            raise DataError(f"{path}: row {lineno}: year {row[0]!r} is not an integer") from None
        if years and year == years[-1]:
            raise DataError(f"{path}: duplicate year {year} at row {lineno}")
        if years and year < years[-1]:
            raise DataError(f"{path}: year {year} out of order at row {lineno}")
        if years and year != years[-1] + 1:
            raise DataError(f"{path}: missing year(s) between {years[-1]} and {year}")
        vals = []
        for col, c in zip(columns, row[1:]):
            c = c.strip()
            if c == "":
                vals.append(None)
                continue
            try:
                v = float(c)
            except ValueError:
                raise DataError(f"{path}: row {lineno}, column {col!r}: non-numeric cell {c!r}") from None
            if not np.isfinite(v):
                raise DataError(f"{path}: row {lineno}, column {col!r}: non-finite value")
            vals.append(v)
        years.append(year)
        cells.append(vals)
    if not years:
        raise DataError(f"{path}: no data rows")

    series = {}
    for j, col in enumerate(columns):
        present = [i for i, r in enumerate(cells) if r[j] is not None]
        if not present:
            continue
        first, last = present[0], present[-1]
        gaps = [i for i in range(first, last + 1) if cells[i][j] is None]
        if gaps:
            raise DataError(f"{path}: interior blank in column {col!r} at year {years[gaps[0]]} "
                            f"(row {gaps[0] + 2 + len(notes)})")
        vals = np.array([cells[i][j] for i in range(first, last + 1)])
        units = _units(col, schema)
        if units == "rate":
            if percent_input:
                vals = vals / 100.0
            elif np.any(np.abs(vals) > 1):
                raise DataError(f"{path}: column {col!r} has rates outside [-1, 1]; "
                                "percent values need explicit conversion (--percent-input)")
        elif units == "level" and np.any(vals <= 0):
            raise DataError(f"{path}: level column {col!r} has nonpositive values")
        series[col] = AnnualSeries(col, years[first], vals, units)
    return Dataset(series, "\n".join(notes), str(path))


def load_france() -> Dataset:
    return load(france_path())


def save(ds: Dataset, path) -> None:
    """Write ``ds`` in the format read by :func:`load` (full float precision)."""
    path = Path(path)
    lo = min(s.start_year for s in ds.series.values())
    hi = max(s.end_year for s in ds.series.values())
    names = list(ds.series)
    lines = [f"# {line}" if line else "#" for line in ds.provenance.splitlines()]
    lines.append(",".join(["year", *names]))
    for year in range(lo, hi + 1):
        row = [str(year)]
        for n in names:
            s = ds.series[n]
            row.append(repr(s.at(year)) if s.start_year <= year <= s.end_year else "")
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def derive(ds: Dataset) -> Dataset:
    """Add dLF/LF (from LF) and the first difference of every rate series."""
    series = dict(ds.series)
    warnings = list(ds.warnings)
    if "LF" in series:
        series["dLF/LF"] = change_rate(series["LF"]).renamed("dLF/LF")
    else:
        msg = "dataset has no LF column; dLF/LF not derived"
        log.warning(msg)
        warnings.append(msg)
    for name in list(series):
        s = series[name]
        if s.units == "rate" and len(s) >= 2:
            d = first_diff(s)
            dname = f"d({name})" if "/" in name else f"d{name}"
            series[dname] = d.renamed(dname)
    return Dataset(series, ds.provenance, ds.source, tuple(warnings))
