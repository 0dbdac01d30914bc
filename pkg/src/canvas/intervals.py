"""Half-open calendar-date intervals with a distinguished "ongoing" end.

All temporal scoping in the store uses [start, end) over ISO-8601 dates.
"ongoing" sorts after every concrete date, so [2020-01-01, ongoing)
contains everything from 2020 onward.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

from .errors import InvalidInterval

ONGOING = "ongoing"


def parse_date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except (TypeError, ValueError):
        raise InvalidInterval(f"not an ISO date: {text!r}")


@dataclass(frozen=True, slots=True)
class DateInterval:
    """Half-open [start, end); end is a date or the string "ongoing"."""

    start: date
    end: date | str

    def __post_init__(self):
        if not isinstance(self.start, date):
            raise InvalidInterval(f"bad interval start: {self.start!r}")
        if self.end != ONGOING:
            if not isinstance(self.end, date):
                raise InvalidInterval(f"bad interval end: {self.end!r}")
            if self.end <= self.start:
                raise InvalidInterval(
                    f"empty interval: [{self.start.isoformat()}, {self.end.isoformat()})"
                )

    @property
    def ongoing(self) -> bool:
        return self.end == ONGOING

    def contains_date(self, d: date) -> bool:
        if d < self.start:
            return False
        return self.ongoing or d < self.end

    def contains(self, other: "DateInterval") -> bool:
        if other.start < self.start:
            return False
        if self.ongoing:
            return True
        if other.ongoing:
            return False
        return other.end <= self.end

    def overlaps(self, other: "DateInterval") -> bool:
        return self.intersect(other) is not None

    def intersect(self, other: "DateInterval") -> "DateInterval | None":
        start = max(self.start, other.start)
        if self.ongoing and other.ongoing:
            return DateInterval(start, ONGOING)
        ends = [i.end for i in (self, other) if not i.ongoing]
        end = min(ends)
        if end <= start:
            return None
        return DateInterval(start, end)

    def to_doc(self) -> dict:
        end = self.end if self.ongoing else self.end.isoformat()
        return {"start": self.start.isoformat(), "end": end}

    @classmethod
    def from_doc(cls, doc: dict) -> "DateInterval":
        if not isinstance(doc, dict) or "start" not in doc or "end" not in doc:
            raise InvalidInterval(f"bad interval document: {doc!r}")
        end = doc["end"]
        return cls(parse_date(doc["start"]), ONGOING if end == ONGOING else parse_date(end))

    def render(self) -> str:
        """Deterministic human rendering used in derived-entry titles."""
        s, e = self.start, self.end
        if s.month == s.day == 1:
            if self.ongoing:
                return f"post-{s.year}"
            if e.month == e.day == 1:
                if e.year == s.year + 1:
                    return f"in {s.year}"
                return f"{s.year}-{e.year - 1}"
        if self.ongoing:
            return f"from {s.isoformat()} onward"
        return f"from {s.isoformat()} to {e.isoformat()}"

    def __str__(self) -> str:
        end = self.end if self.ongoing else self.end.isoformat()
        return f"[{self.start.isoformat()}, {end})"


def parse_window(text: str) -> DateInterval:
    """Parse the "START..END" window syntax used by the zoom API and CLI.

    An empty START means the earliest representable date; an empty or
    "ongoing" END leaves the window open-ended.
    """
    if ".." not in text:
        raise InvalidInterval(f"window must look like START..END, got {text!r}")
    raw_start, raw_end = text.split("..", 1)
    start = parse_date(raw_start) if raw_start else date.min
    end = ONGOING if raw_end in ("", ONGOING) else parse_date(raw_end)
    return DateInterval(start, end)
