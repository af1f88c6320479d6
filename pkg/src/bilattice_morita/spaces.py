"""Ground spaces (atom sets of a masa) and projections as bitmasks.

A projection in the atomic masa over ``n`` atoms is a subset of ``range(n)``;
it is stored as an ``int`` whose bit ``i`` is set iff atom ``i`` belongs to
it.  Families of projections are sorted by that integer, which is the
canonical order used throughout the package.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import GroundMismatch


@dataclass(frozen=True)
class GroundSpace:
    size: int
    label: str = ""

    def __post_init__(self):
        if not isinstance(self.size, int) and hasattr(self.size, "__index__"):
            object.__setattr__(self, "size", operator.index(self.size))
        if not isinstance(self.size, int) or isinstance(self.size, bool) or self.size < 1:
            raise ValueError(f"ground size must be a positive integer, got {self.size!r}")

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def __repr__(self):
        return f"GroundSpace({self.size}{', ' + repr(self.label) if self.label else ''})"


def as_ground(g: GroundSpace | int) -> GroundSpace:
    return g if isinstance(g, GroundSpace) else GroundSpace(g)


def mask_of(members: Iterable[int]) -> int:
    m = 0
    for i in members:
        m |= 1 << i
    return m


def members_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Proj:
    """A masa projection: a subset of the atoms of ``ground``."""

    ground: GroundSpace
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.ground.size:
            raise ValueError(f"mask {self.mask:#b} does not fit in {self.ground}")

    @classmethod
    def of(cls, ground: GroundSpace | int, members: Iterable[int] = ()) -> Proj:
        ground = as_ground(ground)
        members = list(members)
        for i in members:
            if not 0 <= i < ground.size:
                raise ValueError(f"atom {i} outside {ground}")
        return cls(ground, mask_of(members))

    @classmethod
    def full_of(cls, ground: GroundSpace | int) -> Proj:
        ground = as_ground(ground)
        return cls(ground, ground.full)

    @property
    def members(self) -> tuple[int, ...]:
        return members_of(self.mask)

    def complement(self) -> Proj:
        return Proj(self.ground, self.ground.full & ~self.mask)

    def _same(self, other: Proj) -> None:
        if other.ground != self.ground:
            raise GroundMismatch(f"{self.ground} vs {other.ground}")

    def __or__(self, other: Proj) -> Proj:
        self._same(other)
        return Proj(self.ground, self.mask | other.mask)

    def __and__(self, other: Proj) -> Proj:
        self._same(other)
        return Proj(self.ground, self.mask & other.mask)

    def __le__(self, other: Proj) -> bool:
        self._same(other)
        return self.mask & ~other.mask == 0

    def __len__(self):
        return popcount(self.mask)

    def __iter__(self):
        return iter(self.members)

    def __repr__(self):
        return "{" + ",".join(map(str, self.members)) + "}"
