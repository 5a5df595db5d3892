"""Tables of record intervals [a, b] for N_q(g) and classification of new
(q, g, N) results against them.

Two snapshots are shipped as plain-text data files (``q g lower upper flags``
per line, ``#`` comments): ``post`` (the final tables, improved cells flagged
``new``) and ``pre`` (the intervals as they stood before those improvements).
Blank cells are absent, never [0, infinity).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

DATA_ENV = "CURVEHUNT_DATA"

BELOW = "below_lower"
MATCHES = "matches_lower"
IMPROVES = "improves_lower"
EXCEEDS = "exceeds_upper"
#: returned when the table has no entry for (q, g): a new entry
NEW_ENTRY = "new_entry"


class RecordsError(ValueError):
    pass


@dataclass(frozen=True)
class RecordEntry:
    q: int
    g: int
    lower: int
    upper: int | None
    flags: str = "-"

    def __post_init__(self):
        if self.lower < 1:
            raise RecordsError(f"records: lower bound must be positive ({self.q}, {self.g})")
        if self.upper is not None and self.lower > self.upper:
            raise RecordsError(f"records: empty interval for ({self.q}, {self.g})")

    @property
    def improved(self) -> bool:
        return "new" in self.flags.split(",")

    def interval(self) -> str:
        if self.upper is None or self.upper == self.lower:
            return f"[{self.lower}]" if self.upper is not None else f"[{self.lower}-]"
        return f"[{self.lower}-{self.upper}]"

    def line(self) -> str:
        up = "-" if self.upper is None else str(self.upper)
        return f"{self.q} {self.g} {self.lower} {up} {self.flags}"


class RecordTable:
    def __init__(self, entries, label: str = "", header=()):
        self.label = label
        self.header = list(header)
        self.entries: dict = {}
        for e in entries:
            if (e.q, e.g) in self.entries:
                raise RecordsError(f"records: duplicate entry ({e.q}, {e.g}) in {label!r}")
            self.entries[(e.q, e.g)] = e

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(sorted(self.entries.values(), key=lambda e: (e.q, e.g)))

    def lookup(self, q: int, g: int) -> RecordEntry | None:
        return self.entries.get((q, g))

    def dumps(self) -> str:
        out = [f"# {h}" if not h.startswith("#") else h for h in self.header]
        out += [e.line() for e in self]
        return "\n".join(out) + "\n"


def loads(text: str, label: str = "") -> RecordTable:
    header = []
    entries = []
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            header.append(raw)
            continue
        parts = line.split()
        if len(parts) not in (4, 5):
            raise RecordsError(f"records.load: line {n}: expected 'q g lower upper flags'")
        try:
            q, g, lo = int(parts[0]), int(parts[1]), int(parts[2])
            up = None if parts[3] == "-" else int(parts[3])
        except ValueError:
            raise RecordsError(f"records.load: line {n}: non-integer field") from None
        entries.append(RecordEntry(q, g, lo, up, parts[4] if len(parts) == 5 else "-"))
    return RecordTable(entries, label, header)


def _data_dir() -> Path | None:
    env = os.environ.get(DATA_ENV)
    return Path(env) if env else None


def data_text(name: str) -> str:
    d = _data_dir()
    if d is not None:
        path = d / name
        if not path.exists():
            raise RecordsError(f"records: data file {path} is missing")
        return path.read_text()
    try:
        return resources.files("curvehunt").joinpath("data", name).read_text()
    except FileNotFoundError:
        raise RecordsError(f"records: shipped data file {name} is missing") from None


_CACHE: dict = {}


def load(snapshot: str = "post") -> RecordTable:
    """Load a shipped snapshot ('post' or 'pre') or a file path."""
    if snapshot in _CACHE:
        return _CACHE[snapshot]
    if snapshot in ("post", "pre"):
        table = loads(data_text(f"records_{snapshot}.txt"), snapshot)
    else:
        path = Path(snapshot)
        if not path.exists():
            raise RecordsError(f"records.load: no such file {snapshot}")
        table = loads(path.read_text(), str(path))
    _CACHE[snapshot] = table
    return table


def lookup(table: RecordTable, q: int, g: int) -> RecordEntry | None:
    return table.lookup(q, g)


def classify(table: RecordTable, q: int, g: int, N: int) -> str:
    """below_lower / matches_lower / improves_lower / exceeds_upper, or
    new_entry when the table has no entry for (q, g).  exceeds_upper means
    a proved bound is violated: callers must treat it as fatal."""
    if N < 0:
        raise RecordsError("records.classify: N must be nonnegative")
    e = table.lookup(q, g)
    if e is None:
        return NEW_ENTRY
    if e.upper is not None and N > e.upper:
        return EXCEEDS
    if N > e.lower:
        return IMPROVES
    if N == e.lower:
        return MATCHES
    return BELOW
