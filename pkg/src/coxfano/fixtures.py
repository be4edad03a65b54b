"""Reference data: the non-toric del Pezzo K*-surfaces of Picard number one
with torsion in the class group and Picard index at most six, and one free
datum carrying six different torsion gradings."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .coxring import RingData, group_from_dict, group_to_dict
from .intlin import AbGroup
from .invariants import fraction_to_str


@dataclass(frozen=True)
class Fixture:
    name: str
    data: RingData
    picard_index: int | None = None
    degree: Fraction | None = None
    gorenstein_index: int | None = None
    class_group: AbGroup | None = None
    fano: bool | None = None

    @property
    def torsion_order(self) -> int:
        return self.data.group.torsion_order

    def to_dict(self) -> dict:
        expected = {}
        if self.picard_index is not None:
            expected["picard_index"] = self.picard_index
        if self.degree is not None:
            expected["degree"] = fraction_to_str(self.degree)
        if self.gorenstein_index is not None:
            expected["gorenstein_index"] = self.gorenstein_index
        if self.class_group is not None:
            expected["class_group"] = group_to_dict(self.class_group)
        if self.fano is not None:
            expected["fano"] = self.fano
        return {"name": self.name, "data": self.data.to_dict(), "expected": expected}

    @classmethod
    def from_dict(cls, d: dict) -> "Fixture":
        e = d.get("expected", {})
        return cls(
            name=d["name"],
            data=RingData.from_dict(d["data"]),
            picard_index=e.get("picard_index"),
            degree=Fraction(e["degree"]) if "degree" in e else None,
            gorenstein_index=e.get("gorenstein_index"),
            class_group=group_from_dict(e["class_group"]) if "class_group" in e else None,
            fano=e.get("fano"),
        )


def _surface(no, blocks, weights, torsion, mu, degree, iota, free_weights=()):
    data = RingData.build(blocks, weights, free_weights, torsion)
    return Fixture(f"surface-{no}", data, mu, Fraction(degree), iota, data.group, True)


SURFACES = [
    _surface(1, [[1, 3], [4], [2]], [(1, 0), (1, 0), (1, 1), (2, 1)], [2], 2, 1, 1),
    _surface(2, [[1, 2], [3], [3]], [(1, 1), (1, 1), (1, 2), (1, 0)], [3], 3, 1, 1),
    _surface(3, [[2], [2], [2]], [(1, 1, 0), (1, 1, 1), (1, 0, 1)], [2, 2], 4, 2, 1,
             free_weights=[(1, 0, 0)]),
    _surface(4, [[1, 1], [2], [2]], [(1, 1), (1, 3), (1, 2), (1, 0)], [4], 4, 2, 1),
    _surface(5, [[2, 1], [2], [4]], [(1, 1), (2, 0), (2, 1), (1, 0)], [2], 4, 2, 1),
    _surface(6, [[1, 2], [6], [2]], [(2, 0), (2, 1), (1, 0), (3, 1)], [2], 4, 1, 2),
    _surface(7, [[1, 1], [2], [2], [2]],
             [(1, 1, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1), (1, 0, 0)], [2, 2], 4, 1, 1),
    _surface(8, [[3], [3], [2]], [(2, 1), (2, 2), (3, 0)], [3], 6, Fraction(2, 3), 3,
             free_weights=[(1, 0)]),
    _surface(9, [[1, 1], [3], [3]], [(1, 1), (2, 2), (1, 2), (1, 0)], [3], 6, 2, 1),
    _surface(10, [[1, 1], [2], [4]], [(3, 1), (1, 1), (2, 1), (1, 0)], [2], 6, 3, 1),
    _surface(11, [[1, 5], [2], [8]], [(3, 1), (1, 1), (4, 1), (1, 0)], [2], 6, Fraction(1, 3), 3),
]


def _torsion_variant(no, torsion, residues):
    free = (1, 3, 2, 5)
    weights = [(w, t) for w, t in zip(free, residues)] if torsion else [(w,) for w in free]
    data = RingData.build([[7, 1], [5], [2]], weights, (), [torsion] if torsion else [])
    return Fixture(f"torsion-variant-{no}", data, class_group=data.group, fano=True)


TORSION_VARIANTS = [
    _torsion_variant(1, None, None),
    _torsion_variant(2, 3, (0, 2, 1, 1)),
    _torsion_variant(3, 9, (2, 1, 3, 3)),
    _torsion_variant(4, 11, (0, 1, 9, 6)),
    _torsion_variant(5, 13, (0, 3, 11, 8)),
    _torsion_variant(6, 17, (0, 7, 15, 12)),
]

ALL_FIXTURES = SURFACES + TORSION_VARIANTS

# surfaces of the reference table by Picard index
SURFACES_BY_PICARD_INDEX = {
    mu: [f for f in SURFACES if f.picard_index == mu] for mu in (2, 3, 4, 5, 6)
}


def load_fixtures(path: str | Path) -> list[Fixture]:
    with open(path) as fh:
        raw = json.load(fh)
    if isinstance(raw, dict):
        raw = raw["fixtures"]
    return [Fixture.from_dict(d) for d in raw]


def dump_fixtures(fixtures, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump({"fixtures": [f.to_dict() for f in fixtures]}, fh, indent=1)
        fh.write("\n")
