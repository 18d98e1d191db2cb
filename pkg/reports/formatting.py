import math
from dataclasses import dataclass, field
from typing import Iterator

from config.constants import ReportConfig
from core.errors import ComputationError

Value = float | int | str


def format_number(value: Value) -> str:
    """Text form of a report value; floats carry 17 significant digits."""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, f".{ReportConfig.SIGNIFICANT_DIGITS}g")


@dataclass(frozen=True)
class ReportRow:
    """Ordered (key, value) pairs of one report line"""

    items: tuple[tuple[str, Value], ...]

    @staticmethod
    def of(**values: Value) -> 'ReportRow':
        return ReportRow(tuple(values.items()))

    def keys(self) -> tuple[str, ...]:
        return tuple(key for key, _ in self.items)

    def values(self) -> tuple[Value, ...]:
        return tuple(value for _, value in self.items)

    def formatted(self) -> list[str]:
        return [format_number(value) for value in self.values()]


@dataclass
class Report:
    """Rows of one command, all sharing the same column schema."""

    command: str
    columns: tuple[str, ...]
    rows: list[ReportRow] = field(default_factory=list)

    def add(self, row: ReportRow) -> None:
        if row.keys() != self.columns:
            raise ComputationError(f"{self.command}: row keys {row.keys()} do not match columns {self.columns}")
        self.rows.append(row)

    def __iter__(self) -> Iterator[ReportRow]:
        return iter(self.rows)

    def __len__(self) -> int:
        return len(self.rows)


REPORT_COLUMNS: dict[str, tuple[str, ...]] = {
    "thresholds": ("name", "c_star", "residual"),
    "analyze": ("c", "mu1", "mu2", "principal_exponent", "p11", "p12", "p21", "p22"),
    "trajectory": ("t", "x1", "x2", "norm", "angle", "radial_rate"),
    "directions": ("t", "theta", "sigma"),
    "peano-baker": ("K", "s11", "s12", "s21", "s22", "lambda1", "tail_bound"),
    "smooth": ("epsilon", "error", "bound", "mu_eps"),
    "nonperiodic": ("t", "w1", "w2", "v1", "v2", "norm_w", "norm_v"),
    "sweep": ("c", "mu1", "cone_lo", "cone_hi", "pb_lower_bound"),
}


def new_report(command: str) -> Report:
    return Report(command, REPORT_COLUMNS[command])
