"""Finitely generated abelian groups ``Z^r + Z/m1 + ... + Z/mk`` used as weight groups."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class Group:
    free_rank: int = 1
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(m) for m in self.torsion))
        if self.free_rank < 0:
            raise ValueError("free_rank must be nonnegative")

    def violations(self) -> list[str]:
        out = []
        for m in self.torsion:
            if m < 2:
                out.append(f"group: torsion entry {m} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if a >= 2 and b % a:
                out.append(f"group: torsion {a} does not divide {b}")
        return out

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def is_integers(self) -> bool:
        """True for the infinite cyclic group, where Z[G] is the Laurent ring."""
        return self.free_rank == 1 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int | None:
        if self.free_rank:
            return None
        n = 1
        for m in self.torsion:
            n *= m
        return n

    def identity(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def generator(self) -> tuple[int, ...]:
        """The default weight ``(1, 0, ..., 0)``."""
        if self.ngens == 0:
            return ()
        return self.reduce((1,) + (0,) * (self.ngens - 1))

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.ngens:
            raise ValueError(f"group element {list(coords)} has wrong length for {self}")
        r = self.free_rank
        return tuple(int(c) for c in coords[:r]) + tuple(int(c) % m for c, m in zip(coords[r:], self.torsion))

    def add(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return self.reduce([x + y for x, y in zip(a, b)])

    def neg(self, a: Sequence[int]) -> tuple[int, ...]:
        return self.reduce([-x for x in a])

    def elements(self):
        """All elements of a finite group, in lexicographic order."""
        if self.free_rank:
            raise ValueError("infinite group has no finite element list")
        out = [()]
        for m in self.torsion:
            out = [e + (k,) for e in out for k in range(m)]
        return out

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{m}" for m in self.torsion]
        return " + ".join(parts) if parts else "1"


INTEGERS = Group(1, ())
TRIVIAL = Group(0, ())
