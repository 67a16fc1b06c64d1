"""Theoretical-vs-measured joint rotation error table."""

import csv
import io
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ConfigError, InvalidParameterError

# aggregate error rates claimed for the measured rotations; neither follows
# from the per-joint rows, so reports print them as discrepancies
CLAIMED_TESTING_ERROR_PCT = (5.0, 7.0)
CLAIMED_FINAL_ERROR_PCT = 3.0

SAMPLE_TABLE = "table6.csv"


@dataclass(frozen=True)
class ErrorRow:
    joint: str
    theoretical: float  # degrees
    measured: float  # degrees
    rel_error_pct: float


@dataclass(frozen=True)
class ErrorReport:
    rows: tuple

    @property
    def mean_error_pct(self):
        return sum(r.rel_error_pct for r in self.rows) / len(self.rows)

    @property
    def max_error_pct(self):
        return max(r.rel_error_pct for r in self.rows)


def error_report(pairs):
    rows = []
    for i, (name, theoretical, measured) in enumerate(pairs):
        theoretical, measured = float(theoretical), float(measured)
        if not theoretical > 0:
            raise InvalidParameterError(
                f"rows[{i}].theoretical", f"must be > 0 for {name!r}, got {theoretical!r}")
        rows.append(ErrorRow(name, theoretical, measured,
                             100.0 * abs(measured - theoretical) / theoretical))
    if not rows:
        raise InvalidParameterError("rows", "at least one joint row is required")
    return ErrorReport(tuple(rows))


def read_pairs(text):
    """Rows of ``joint,theoretical_deg,measured_deg`` (header required)."""
    reader = csv.DictReader(io.StringIO(text))
    need = {"joint", "theoretical_deg", "measured_deg"}
    if reader.fieldnames is None or not need <= set(reader.fieldnames):
        raise ConfigError("header", f"expected columns {', '.join(sorted(need))}")
    pairs = []
    for lineno, row in enumerate(reader, start=2):
        try:
            pairs.append((row["joint"], float(row["theoretical_deg"]),
                          float(row["measured_deg"])))
        except (TypeError, ValueError):
            raise ConfigError(f"line {lineno}", "expected numeric angles") from None
    return pairs


def load_pairs(path):
    return read_pairs(Path(path).read_text(encoding="utf-8"))


def sample_pairs():
    return read_pairs(resources.files("armkit.data").joinpath(SAMPLE_TABLE)
                      .read_text(encoding="utf-8"))
