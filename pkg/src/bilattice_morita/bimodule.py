"""Support relations of reflexive masa bimodules.

A pattern bimodule ``U`` inside ``B(H_A, H_B)`` is determined by the set of
matrix cells it leaves free.  ``Relation`` stores that set with orientation
*input -> output*: the pair ``(a, b)`` means the entry in row ``b``, column
``a`` is unconstrained.  Composition (``span_compose``) therefore takes its
factors in the order they are applied to a vector, so the operator product
``Z Y X`` is ``span_compose([X, Y, Z])``.

Internally a relation is one bitmask per source atom (its image row), which
makes direct images and composition cheap.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import GroundMismatch
from .limits import check_elements
from .report import Report
from .spaces import GroundSpace, Proj, as_ground, iter_bits, members_of


@dataclass(frozen=True)
class Relation:
    source: GroundSpace
    target: GroundSpace
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.source.size:
            raise ValueError("one row per source atom required")
        full = self.target.full
        for r in self.rows:
            if r & ~full:
                raise ValueError(f"row {r:#b} leaves target {self.target}")

    # -- construction -------------------------------------------------
    @classmethod
    def from_pairs(cls, source: GroundSpace | int, target: GroundSpace | int,
                   pairs: Iterable[tuple[int, int]]) -> Relation:
        source, target = as_ground(source), as_ground(target)
        rows = [0] * source.size
        for a, b in pairs:
            a, b = int(a), int(b)
            if not (0 <= a < source.size and 0 <= b < target.size):
                raise ValueError(f"cell {(a, b)} outside {source.size}x{target.size}")
            rows[a] |= 1 << b
        return cls(source, target, tuple(rows))

    @classmethod
    def full(cls, source: GroundSpace | int, target: GroundSpace | int) -> Relation:
        source, target = as_ground(source), as_ground(target)
        return cls(source, target, (target.full,) * source.size)

    @classmethod
    def empty(cls, source: GroundSpace | int, target: GroundSpace | int) -> Relation:
        source, target = as_ground(source), as_ground(target)
        return cls(source, target, (0,) * source.size)

    @classmethod
    def diagonal(cls, ground: GroundSpace | int) -> Relation:
        ground = as_ground(ground)
        return cls(ground, ground, tuple(1 << i for i in range(ground.size)))

    # -- views ----------------------------------------------------------
    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a, r in enumerate(self.rows) for b in members_of(r)]

    @property
    def columns(self) -> tuple[int, ...]:
        cols = [0] * self.target.size
        for a, r in enumerate(self.rows):
            for b in iter_bits(r):
                cols[b] |= 1 << a
        return tuple(cols)

    def image(self, mask: int) -> int:
        out = 0
        for a in iter_bits(mask):
            out |= self.rows[a]
        return out

    def __contains__(self, cell) -> bool:
        a, b = cell
        return 0 <= a < len(self.rows) and 0 <= b and bool(self.rows[a] >> b & 1)

    def __len__(self):
        return sum(bin(r).count("1") for r in self.rows)

    def __bool__(self):
        return any(self.rows)

    def _same_shape(self, other: Relation) -> None:
        if (self.source, self.target) != (other.source, other.target):
            raise GroundMismatch(f"{self.source}x{self.target} vs {other.source}x{other.target}")

    def __le__(self, other: Relation) -> bool:
        self._same_shape(other)
        return all(r & ~s == 0 for r, s in zip(self.rows, other.rows))

    def __or__(self, other: Relation) -> Relation:
        self._same_shape(other)
        return Relation(self.source, self.target, tuple(r | s for r, s in zip(self.rows, other.rows)))

    def __and__(self, other: Relation) -> Relation:
        self._same_shape(other)
        return Relation(self.source, self.target, tuple(r & s for r, s in zip(self.rows, other.rows)))

    def complement(self) -> Relation:
        full = self.target.full
        return Relation(self.source, self.target, tuple(full & ~r for r in self.rows))

    def with_cell(self, a: int, b: int, present: bool) -> Relation:
        rows = list(self.rows)
        if present:
            rows[a] |= 1 << b
        else:
            rows[a] &= ~(1 << b)
        return Relation(self.source, self.target, tuple(rows))

    def difference(self, other: Relation) -> list[tuple[int, int]]:
        """Cells of ``self`` missing from ``other``."""
        self._same_shape(other)
        return [(a, b) for a, (r, s) in enumerate(zip(self.rows, other.rows)) for b in members_of(r & ~s)]

    def __repr__(self):
        return f"Relation({self.source.size}x{self.target.size}, {self.pairs})"


def _check_proj(E: Relation, alpha: Proj) -> None:
    if alpha.ground != E.source:
        raise GroundMismatch(f"projection on {alpha.ground}, relation source {E.source}")


def map_of(E: Relation, alpha: Proj) -> Proj:
    """Direct image of ``alpha`` under ``E``: the finite form of ``Map(U)(P)``."""
    _check_proj(E, alpha)
    return Proj(E.target, E.image(alpha.mask))


def transpose(E: Relation) -> Relation:
    return Relation(E.target, E.source, E.columns)


def span_compose(chain: Sequence[Relation]) -> Relation:
    """Support of the product span of a chain given in application order."""
    if not chain:
        raise ValueError("span_compose needs a nonempty chain")
    out = chain[0]
    for nxt in chain[1:]:
        if out.target != nxt.source:
            raise GroundMismatch(f"chain breaks: {out.target} then {nxt.source}")
        out = Relation(out.source, nxt.target, tuple(nxt.image(r) for r in out.rows))
    return out


def _join_closure(masks: Iterable[int], what: str) -> list[int]:
    fam = {0}
    for m in masks:
        if m in fam:
            continue
        fam |= {f | m for f in fam}
        check_elements(len(fam), what)
    return sorted(fam)


def s_phi_masks(E: Relation) -> tuple[list[int], list[int]]:
    """Mask-level ``s_phi``: (S1 over source, S2 over target), both sorted."""
    s2 = _join_closure(E.rows, "S2 family")
    full_a = E.source.full
    s1 = sorted(full_a & ~m for m in _join_closure(E.columns, "S1 family"))
    return s1, s2


def s_phi(E: Relation) -> tuple[list[Proj], list[Proj]]:
    """Erdos structure families ``(S1, S2)``.

    ``S2`` collects every direct image ``E[alpha]``; since the image map is
    sup-preserving these are exactly the unions of singleton images.
    ``S1`` is the complement family of the ``S2`` of the transpose.
    """
    s1, s2 = s_phi_masks(E)
    return [Proj(E.source, m) for m in s1], [Proj(E.target, m) for m in s2]


def erdos_reconstruct(E: Relation) -> Relation:
    """Rebuild the pattern from its Erdos data: the cells (a, b) such that a in P forces b in E[P] for every P in S1."""
    s1, _ = s_phi_masks(E)
    rows = [E.target.full] * E.source.size
    for P in s1:
        img = E.image(P)
        for a in iter_bits(P):
            rows[a] &= img
    return Relation(E.source, E.target, tuple(rows))


def check_erdos_laws(E: Relation) -> Report:
    """Closure, correspondence and reconstruction laws of the Erdos families of ``E``."""
    rep = Report("Erdos structure")
    s1, s2 = s_phi_masks(E)
    set1, set2 = set(s1), set(s2)
    bad = [(a, b) for a in s1 for b in s1 if a & b not in set1]
    rep.add("S1 closed under intersection", not bad, bad[:5] or None)
    bad = [(a, b) for a in s2 for b in s2 if a | b not in set2]
    rep.add("S2 closed under union", not bad, bad[:5] or None)
    images = [E.image(P) for P in s1]
    rep.add("phi(S1) = S2", set(images) == set2,
            {"extra": sorted(set(images) - set2), "missing": sorted(set2 - set(images))}
            if set(images) != set2 else None)
    rep.add("phi injective on S1", len(set(images)) == len(s1))
    rebuilt = erdos_reconstruct(E)
    rep.add("erdos_reconstruct(E) = E", rebuilt == E,
            {"extra": rebuilt.difference(E), "missing": E.difference(rebuilt)} if rebuilt != E else None)
    return rep


def ref_hull(E: Relation) -> Relation:
    # A pattern space is reflexive: membership in Ref is decided on basis vectors.
    return E


def is_nondegenerate(E: Relation) -> bool:
    if not all(E.rows):
        return False
    covered = 0
    for r in E.rows:
        covered |= r
    return covered == E.target.full


def is_preorder(R: Relation) -> bool:
    """True iff ``R`` contains the diagonal and is transitive (a unital pattern algebra)."""
    if R.source != R.target:
        raise GroundMismatch(f"not an endorelation: {R.source} -> {R.target}")
    if any(not (r >> i & 1) for i, r in enumerate(R.rows)):
        return False
    return span_compose([R, R]) <= R


def nonzero_witness(E: Relation) -> tuple[int, int] | None:
    """Least cell of ``E``; a single cell is a rank-one pattern operator."""
    for a, r in enumerate(E.rows):
        if r:
            return a, (r & -r).bit_length() - 1
    return None
