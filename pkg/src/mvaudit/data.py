"""District-level election results: ingestion, validation, aggregation.

The CSV dialect is fixed: UTF-8, comma separated, header exactly

    district_id,name,ballot_total,ballot_c1,mail_total,mail_c1,status

with base-10 integer counts, status in {green, red, dubious}, LF or CRLF
line endings.  "c1" is the candidate whose reversal chances are analyzed;
"c2" is the official winner.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO

from .errors import AuditError

__all__ = [
    "STATUSES",
    "HEADER",
    "ParseError",
    "ValidationError",
    "DistrictRecord",
    "ElectionDataset",
    "RedTotals",
    "parse_dataset",
    "load_dataset",
    "serialize_dataset",
    "partition",
    "aggregate_red",
    "reversal_threshold",
]

STATUSES = ("green", "red", "dubious")
HEADER = ("district_id", "name", "ballot_total", "ballot_c1", "mail_total", "mail_c1", "status")

_INT_RE = re.compile(r"^[0-9]+$")


class ParseError(AuditError):
    """CSV ingestion failure, carrying the 1-based source line number."""

    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class ValidationError(AuditError):
    """A dataset or record violates its invariants."""


@dataclass(frozen=True)
class DistrictRecord:
    """One voting district's counted results plus its contamination status."""

    district_id: str
    name: str
    ballot_total: int
    ballot_c1: int
    mail_total: int
    mail_c1: int
    status: str

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValidationError(f"unknown status token {self.status!r}")
        for field in ("ballot_total", "ballot_c1", "mail_total", "mail_c1"):
            v = getattr(self, field)
            if not isinstance(v, int) or v < 0:
                raise ValidationError(f"{field} must be a nonnegative integer, got {v!r}")
        if self.ballot_c1 > self.ballot_total:
            raise ValidationError("ballot votes for candidate exceed ballot total")
        if self.mail_c1 > self.mail_total:
            raise ValidationError("mail votes for candidate exceed mail total")

    @property
    def ballot_c2(self) -> int:
        return self.ballot_total - self.ballot_c1

    @property
    def mail_c2(self) -> int:
        return self.mail_total - self.mail_c1

    @property
    def total_votes(self) -> int:
        return self.ballot_total + self.mail_total

    @property
    def c1_votes(self) -> int:
        return self.ballot_c1 + self.mail_c1

    @property
    def c2_votes(self) -> int:
        return self.ballot_c2 + self.mail_c2

    @property
    def ballot_share(self) -> float | None:
        """Candidate-1 share of ballot votes, None when no ballots were cast."""
        if self.ballot_total == 0:
            return None
        return self.ballot_c1 / self.ballot_total

    @property
    def mail_share(self) -> float | None:
        if self.mail_total == 0:
            return None
        return self.mail_c1 / self.mail_total


@dataclass(frozen=True)
class ElectionDataset:
    """Immutable, validated collection of districts in file order."""

    districts: tuple[DistrictRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "districts", tuple(self.districts))
        seen = set()
        for d in self.districts:
            if d.district_id in seen:
                raise ValidationError(f"duplicate district_id {d.district_id!r}")
            seen.add(d.district_id)

    def __len__(self) -> int:
        return len(self.districts)

    def __iter__(self):
        return iter(self.districts)

    def get(self, district_id: str) -> DistrictRecord:
        for d in self.districts:
            if d.district_id == district_id:
                return d
        raise KeyError(district_id)

    def count_status(self, status: str) -> int:
        return sum(1 for d in self.districts if d.status == status)

    @property
    def margin_official(self) -> int:
        """Candidate-2 total minus candidate-1 total over all districts."""
        return sum(d.c2_votes for d in self.districts) - sum(d.c1_votes for d in self.districts)


class RedTotals(tuple):
    """Aggregate (ballot_c1, mail_total, mail_c1) over the contested districts."""

    __slots__ = ()

    def __new__(cls, ballot_c1: int, mail_total: int, mail_c1: int):
        return super().__new__(cls, (ballot_c1, mail_total, mail_c1))

    @property
    def ballot_c1(self) -> int:
        return self[0]

    @property
    def mail_total(self) -> int:
        return self[1]

    @property
    def mail_c1(self) -> int:
        return self[2]


def _parse_int(value: str, column: str, line: int) -> int:
    if not _INT_RE.match(value):
        raise ParseError(line, f"bad integer in column {column}: {value!r}")
    return int(value)


def parse_dataset(source: str | TextIO) -> ElectionDataset:
    """Parse and validate a dataset from CSV text or a text stream."""
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError(1, "missing header") from None
    if header and header[0].startswith("﻿"):
        header = [header[0].lstrip("﻿"), *header[1:]]
    if tuple(h.strip() for h in header) != HEADER:
        raise ParseError(1, f"bad header: expected {','.join(HEADER)}")
    districts: list[DistrictRecord] = []
    seen: set[str] = set()
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != len(HEADER):
            raise ParseError(line, f"expected {len(HEADER)} columns, got {len(row)}")
        district_id, name, *counts, status = (f.strip() for f in row)
        if not district_id:
            raise ParseError(line, "empty district_id")
        if district_id in seen:
            raise ParseError(line, f"duplicate district_id {district_id!r}")
        seen.add(district_id)
        ballot_total, ballot_c1, mail_total, mail_c1 = (
            _parse_int(v, c, line) for v, c in zip(counts, HEADER[2:6])
        )
        try:
            record = DistrictRecord(
                district_id, name, ballot_total, ballot_c1, mail_total, mail_c1, status
            )
        except ValidationError as exc:
            raise ParseError(line, str(exc)) from None
        districts.append(record)
    return ElectionDataset(tuple(districts))


def load_dataset(path: str | Path) -> ElectionDataset:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return parse_dataset(fh)


def serialize_dataset(ds: ElectionDataset) -> str:
    """Emit the dataset in the canonical CSV dialect (LF, trailing newline)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(HEADER)
    for d in ds:
        writer.writerow(
            (d.district_id, d.name, d.ballot_total, d.ballot_c1, d.mail_total, d.mail_c1, d.status)
        )
    return out.getvalue()


def partition(
    ds: ElectionDataset, include_dubious_as_red: bool = False
) -> tuple[tuple[DistrictRecord, ...], tuple[DistrictRecord, ...]]:
    """Split districts into (accepted, contested) lists.

    Dubious districts count as accepted ("green") unless
    ``include_dubious_as_red`` moves them to the contested side.  No district
    is ever dropped or duplicated.
    """
    red_statuses = {"red", "dubious"} if include_dubious_as_red else {"red"}
    green = tuple(d for d in ds if d.status not in red_statuses)
    red = tuple(d for d in ds if d.status in red_statuses)
    return green, red


def aggregate_red(red: Iterable[DistrictRecord]) -> RedTotals:
    """Componentwise sums of ballot_c1, mail_total, mail_c1 over districts."""
    red = tuple(red)
    if not red:
        raise ValidationError("cannot aggregate an empty district list")
    return RedTotals(
        sum(d.ballot_c1 for d in red),
        sum(d.mail_total for d in red),
        sum(d.mail_c1 for d in red),
    )


def reversal_threshold(
    ds: ElectionDataset, red: Iterable[DistrictRecord], strict: bool = False
) -> int:
    """Mail votes candidate 1 would need in the contested districts to win.

    Default semantics add half the official margin, rounded up, to the
    counted candidate-1 mail votes.  With ``strict=True`` the threshold is
    the smallest count that strictly wins even when the margin is even
    (floor(margin/2) + 1); the two agree for odd margins.
    """
    margin = ds.margin_official
    if margin <= 0:
        raise ValidationError(
            f"official margin is {margin}; candidate 2 does not lead, no reversal to test"
        )
    counted = aggregate_red(red).mail_c1
    if strict:
        return counted + margin // 2 + 1
    return counted + math.ceil(margin / 2)
