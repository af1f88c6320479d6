"""Pulling support relations back along maps of atom sets.

With counting measures on finite atom sets every pushforward measure is
absolutely continuous, so ``PointMap`` carries no measure data at all.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .bilattice import Bilattice, BilatticeHom, bilattice_generate, hom_check, is_onto, m_of, slices
from .bimodule import Relation, nonzero_witness
from .errors import GroundMismatch
from .lattice import LatticeHom
from .report import Report
from .spaces import GroundSpace, as_ground, iter_bits


@dataclass(frozen=True)
class PointMap:
    source: GroundSpace
    target: GroundSpace
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != self.source.size:
            raise ValueError("point map must be total on its source")
        if any(not 0 <= t < self.target.size for t in self.table):
            raise ValueError("point map value outside its target")

    @classmethod
    def of(cls, source: GroundSpace | int, target: GroundSpace | int, table: Sequence[int]) -> PointMap:
        return cls(as_ground(source), as_ground(target), tuple(table))

    @classmethod
    def identity(cls, g: GroundSpace | int) -> PointMap:
        g = as_ground(g)
        return cls(g, g, tuple(range(g.size)))

    def __call__(self, x: int) -> int:
        return self.table[x]

    def preimage(self, mask: int) -> int:
        out = 0
        for x, t in enumerate(self.table):
            if mask >> t & 1:
                out |= 1 << x
        return out

    def is_surjective(self) -> bool:
        return set(self.table) == set(range(self.target.size))


@dataclass(frozen=True)
class RectanglePresentation:
    """A relation given as the complement of a union of rectangles ``alpha x beta``."""

    left: GroundSpace
    right: GroundSpace
    rectangles: tuple[tuple[int, int], ...]

    def relation(self) -> Relation:
        forbidden = [0] * self.left.size
        for alpha, beta in self.rectangles:
            for a in iter_bits(alpha):
                forbidden[a] |= beta
        return Relation(self.left, self.right, tuple(self.right.full & ~f for f in forbidden))


def pullback(theta: PointMap, rho: PointMap, E1: Relation) -> Relation:
    """``{(x, y) : (theta(x), rho(y)) in E1}``."""
    if theta.target != E1.source or rho.target != E1.target:
        raise GroundMismatch("point maps do not land on the grounds of E1")
    rows = tuple(rho.preimage(E1.rows[theta(x)]) for x in range(theta.source.size))
    return Relation(theta.source, rho.source, rows)


def rectangle_presentation(E: Relation) -> RectanglePresentation:
    """Row-wise cover: ``({x}, Y - E[x])`` for every source atom, empty rectangles dropped."""
    rects = tuple((1 << x, E.target.full & ~r) for x, r in enumerate(E.rows) if E.target.full & ~r)
    return RectanglePresentation(E.source, E.target, rects)


def generated_bilattice(p: RectanglePresentation) -> Bilattice:
    return bilattice_generate(p.left, p.right, p.rectangles)


def hom_from_point_maps(theta: PointMap, rho: PointMap, S1: Bilattice) -> BilatticeHom:
    """Preimage maps ``alpha -> theta^-1(alpha)``, ``beta -> rho^-1(beta)`` onto the image bilattice."""
    if theta.target != S1.left_ground or rho.target != S1.right_ground:
        raise GroundMismatch("point maps do not land on the grounds of S1")
    image = [(theta.preimage(P), rho.preimage(Q)) for P, Q in S1.pairs]
    target = bilattice_generate(theta.source, rho.source, image)
    sl1, sr1 = slices(S1)
    sl2, sr2 = slices(target)
    phi = LatticeHom(sl1, sl2, {P: theta.preimage(P) for P in sl1.elements})
    psi = LatticeHom(sr1, sr2, {Q: rho.preimage(Q) for Q in sr1.elements})
    return BilatticeHom(phi, psi, S1, target)


def check_inverse_image(theta: PointMap, rho: PointMap, E1: Relation) -> Report:
    """The bimodule of the pushed-forward bilattice is the pulled-back relation."""
    rep = Report("inverse image")
    S1 = generated_bilattice(rectangle_presentation(E1))
    rep.add("generated bilattice presents E1", m_of(S1) == E1)
    h = hom_from_point_maps(theta, rho, S1)
    rep.add("induced map is a homomorphism", hom_check(h).ok)
    rep.add("induced map is onto", is_onto(h))
    got, want = m_of(h.target), pullback(theta, rho, E1)
    rep.add("m_of(image bilattice) = pullback", got == want,
            {"extra": got.difference(want)[:10], "missing": want.difference(got)[:10]} if got != want else None)
    return rep


def check_nonzero_transfer(theta: PointMap, rho: PointMap, E1: Relation) -> Report:
    rep = Report("nonzero transfer along point maps")
    E = pullback(theta, rho, E1)
    cell = nonzero_witness(E)
    if cell is None:
        rep.add("pullback nonzero implies E1 nonzero", True, detail="pullback empty")
        return rep
    x, y = cell
    moved = (theta(x), rho(y))
    rep.add("pullback nonzero implies E1 nonzero", moved in E1 and nonzero_witness(E1) is not None,
            detail=f"{cell} -> {moved}")
    return rep
