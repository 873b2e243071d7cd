"""Reference classification tables and per-element contribution lists.

The published tables this package reconstructs are stored as plain CSV
under data/ so that diffs stay reviewable: one table of class rows
(data/paper_tables.csv) and one per-element contribution list per class
(data/paper_breakdowns/*.csv).  Rows marked "disputed" carry figures the
source material states inconsistently; the verification runner reports
what the computation finds for them instead of asserting either figure.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import InputError
from .vw_group import GroupElement, element

_DATA_PACKAGE = resources.files(__package__) / "data"


def parse_element_literal(n: int, text: str) -> GroupElement:
    """Parse "m1,m2,m3;a1,a2,a3" (whitespace-insensitive) into an element."""
    compact = "".join(text.split())
    parts = compact.split(";")
    if len(parts) != 2:
        raise InputError(f"element literal {text!r} must look like 'm1,m2,m3;a1,a2,a3'")
    try:
        twist = tuple(int(x) for x in parts[0].split(","))
        shift = tuple(int(x) for x in parts[1].split(","))
    except ValueError as exc:
        raise InputError(f"element literal {text!r} has a non-integer entry") from exc
    return element(n, twist, shift)


def parse_group_literal(n: int, text: str) -> tuple[GroupElement, ...]:
    """Parse generators joined by '|' into validated group elements."""
    chunks = [c for c in text.split("|") if c.strip()]
    if not chunks:
        raise InputError("group literal contains no generators")
    return tuple(parse_element_literal(n, c) for c in chunks)


@dataclass(frozen=True)
class GoldenRow:
    """One class row of the reference table."""

    case_id: str
    n: int
    gens: str
    h11: int
    h12: int
    pi1_order: int
    status: str  # "firm" | "disputed"
    source: str = "table"

    def generators(self) -> tuple[GroupElement, ...]:
        return parse_group_literal(self.n, self.gens)


@dataclass(frozen=True)
class GoldenBreakdownEntry:
    """One line of a reference per-element contribution list."""

    element_literal: str
    h11: int
    h12: int
    orbit_size: int | None = None

    def parsed(self, n: int) -> GroupElement:
        return parse_element_literal(n, self.element_literal)


def _read_csv(path, base: Path | None):
    if base is not None:
        with open(base / path, newline="") as fh:
            return list(csv.DictReader(fh))
    with (_DATA_PACKAGE / path).open(newline="") as fh:
        return list(csv.DictReader(fh))


@lru_cache(maxsize=None)
def _cached_rows(base: Path | None) -> tuple[GoldenRow, ...]:
    rows = []
    for raw in _read_csv("paper_tables.csv", base):
        rows.append(
            GoldenRow(
                case_id=raw["case_id"],
                n=int(raw["n"]),
                gens=raw["gens"],
                h11=int(raw["h11"]),
                h12=int(raw["h12"]),
                pi1_order=int(raw["pi1"]),
                status=raw["status"],
            )
        )
    return tuple(rows)


def table_rows(base: Path | None = None) -> tuple[GoldenRow, ...]:
    """All 17 reference class rows (8 + 8 + 1)."""
    return _cached_rows(Path(base) if base is not None else None)


_BREAKDOWN_FILES = {
    "III.1": "iii_1.csv",
    "III.2": "iii_2.csv",
    "III.3": "iii_3.csv",
    "III.4": "iii_4.csv",
    "III.5": "iii_5.csv",
    "III.6": "iii_6.csv",
    "III.7": "iii_7.csv",
    "III.8": "iii_8.csv",
    "IV.1": "iv_1.csv",
    "IV.2": "iv_2.csv",
    "IV.3": "iv_3.csv",
    "IV.4": "iv_4.csv",
    "IV.5": "iv_5.csv",
    "IV.6": "iv_6.csv",
    "IV.7": "iv_7.csv",
    "IV.8": "iv_8.csv",
    "VI.1": "vi_1.csv",
}


def breakdown_case_ids() -> tuple[str, ...]:
    return tuple(_BREAKDOWN_FILES)


@lru_cache(maxsize=None)
def _cached_breakdown(case_id: str, base: Path | None) -> tuple[GoldenBreakdownEntry, ...]:
    if case_id not in _BREAKDOWN_FILES:
        raise InputError(f"no reference contribution list for {case_id!r}")
    entries = []
    for raw in _read_csv(f"paper_breakdowns/{_BREAKDOWN_FILES[case_id]}", base):
        size = raw.get("orbit_size")
        entries.append(
            GoldenBreakdownEntry(
                element_literal=raw["element"],
                h11=int(raw["h11"]),
                h12=int(raw["h12"]),
                orbit_size=int(size) if size else None,
            )
        )
    return tuple(entries)


def breakdown_table(case_id: str, base: Path | None = None) -> tuple[GoldenBreakdownEntry, ...]:
    """The reference per-element list for one class row."""
    return _cached_breakdown(case_id, Path(base) if base is not None else None)
