"""Region vocabulary: ISO 3166-1 alpha-2 codes plus named macro-regions.

Macro-regions (e.g. "EU") expand to their member codes for containment
and intersection tests, and intersections compress back to macro codes
whenever a macro's full member set is covered, so scopes stay readable.
"""

from __future__ import annotations

from .errors import UnknownRegion

EU_MEMBERS = {
    "AT": "Austria", "BE": "Belgium", "BG": "Bulgaria", "HR": "Croatia",
    "CY": "Cyprus", "CZ": "Czechia", "DK": "Denmark", "EE": "Estonia",
    "FI": "Finland", "FR": "France", "DE": "Germany", "GR": "Greece",
    "HU": "Hungary", "IE": "Ireland", "IT": "Italy", "LV": "Latvia",
    "LT": "Lithuania", "LU": "Luxembourg", "MT": "Malta", "NL": "Netherlands",
    "PL": "Poland", "PT": "Portugal", "RO": "Romania", "SK": "Slovakia",
    "SI": "Slovenia", "ES": "Spain", "SE": "Sweden",
}


class RegionTable:
    """Store-level table mapping region codes to names and member sets."""

    def __init__(self):
        self._names: dict[str, str] = {}
        self._members: dict[str, tuple[str, ...]] = {}

    def add(self, code: str, name: str, members: list[str] | tuple[str, ...] = ()):
        self._names[code] = name
        self._members[code] = tuple(sorted(members))

    def __contains__(self, code: str) -> bool:
        return code in self._names

    def __len__(self) -> int:
        return len(self._names)

    def codes(self) -> list[str]:
        return sorted(self._names)

    def name(self, code: str) -> str:
        self._require(code)
        return self._names[code]

    def members(self, code: str) -> tuple[str, ...]:
        self._require(code)
        return self._members[code]

    def _require(self, code: str):
        if code not in self._names:
            raise UnknownRegion(f"region code {code!r} not in region table")

    def expand(self, code: str) -> frozenset[str]:
        """Atomic country codes covered by a code (itself, if atomic)."""
        self._require(code)
        members = self._members[code]
        if not members:
            return frozenset((code,))
        atoms: set[str] = set()
        for member in members:
            atoms |= self.expand(member)
        return frozenset(atoms)

    def expand_set(self, codes) -> frozenset[str]:
        atoms: set[str] = set()
        for code in codes:
            atoms |= self.expand(code)
        return frozenset(atoms)

    def compress(self, atoms: frozenset[str]) -> tuple[str, ...]:
        """Canonical code set covering exactly `atoms`, macros preferred.

        Greedy largest-first: a macro code replaces its members only when
        every member is present. Result is sorted, hence canonical.
        """
        remaining = set(atoms)
        out: set[str] = set()
        macros = [c for c in self._names if self._members[c]]
        for macro in sorted(macros, key=lambda c: (-len(self.expand(c)), c)):
            covered = self.expand(macro)
            if covered and covered <= remaining:
                out.add(macro)
                remaining -= covered
        out |= remaining
        return tuple(sorted(out))

    def contains_set(self, outer, inner) -> bool:
        return self.expand_set(inner) <= self.expand_set(outer)

    def intersect_sets(self, a, b) -> tuple[str, ...]:
        return self.compress(self.expand_set(a) & self.expand_set(b))

    def to_records(self) -> list[dict]:
        return [
            {"code": code, "name": self._names[code], "members": list(self._members[code])}
            for code in sorted(self._names)
        ]


def default_table() -> RegionTable:
    """Region table shipped with the seed corpus."""
    table = RegionTable()
    for code, name in sorted(EU_MEMBERS.items()):
        table.add(code, name)
    table.add("EU", "European Union", sorted(EU_MEMBERS))
    table.add("US", "United States")
    table.add("CN", "China")
    table.add("GB", "United Kingdom")
    table.add("JP", "Japan")
    table.add("CH", "Switzerland")
    table.add("IN", "India")
    table.add("KR", "South Korea")
    table.add("CA", "Canada")
    table.add("AU", "Australia")
    table.add("BR", "Brazil")
    return table
