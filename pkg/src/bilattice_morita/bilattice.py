"""Bilattices of projection pairs and the essential bilattice of a bimodule.

A bilattice on ``A x B`` is a family of pairs ``(P, Q)`` containing
``(0, 0)``, ``(A, 0)``, ``(0, B)`` and closed under
``(P1 & P2, Q1 | Q2)`` and ``(P1 | P2, Q1 & Q2)``.

Encoding ``(P, Q)`` as the single subset ``P + (B - Q)`` of the disjoint
union ``A + B`` turns both operations into plain intersection and union, so a
bilattice is the same thing as a CSL on ``A + B`` that contains the block
``B`` (the image of ``(0, 0)``).  Generation and isomorphism search are done
on that lattice (``as_csl``); an isomorphism of bilattices is a lattice
isomorphism of the encodings that maps the ``B`` block onto the ``B`` block.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .bimodule import Relation, is_nondegenerate, s_phi_masks
from .errors import DegenerateRelation, GroundMismatch, InternalInconsistency
from .lattice import CSL, LatticeHom, _generate, hom_validate, lattice_isomorphisms
from .limits import check_elements
from .report import Report
from .spaces import GroundSpace, Proj, as_ground, iter_bits, submasks


@dataclass(frozen=True)
class Bilattice:
    left_ground: GroundSpace
    right_ground: GroundSpace
    pairs: tuple[tuple[int, int], ...]

    @classmethod
    def from_pairs(cls, left: GroundSpace | int, right: GroundSpace | int,
                   pairs: Iterable[tuple[int, int]]) -> Bilattice:
        return cls(as_ground(left), as_ground(right), tuple(sorted(set(pairs))))

    def __contains__(self, pq) -> bool:
        P, Q = pq
        if isinstance(P, Proj):
            P, Q = P.mask, Q.mask
        try:
            idx = self.__dict__["_idx"]
        except KeyError:
            idx = frozenset(self.pairs)
            object.__setattr__(self, "_idx", idx)
        return (P, Q) in idx

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __le__(self, other: Bilattice) -> bool:
        return self._grounds == other._grounds and set(self.pairs) <= set(other.pairs)

    @property
    def _grounds(self):
        return self.left_ground, self.right_ground

    def proj_pairs(self) -> list[tuple[Proj, Proj]]:
        return [(Proj(self.left_ground, P), Proj(self.right_ground, Q)) for P, Q in self.pairs]

    def __repr__(self):
        return f"Bilattice({self.left_ground.size}x{self.right_ground.size}, {self.proj_pairs()})"


# -- the P + (B - Q) encoding ----------------------------------------------

def encode_pair(gl: GroundSpace, gr: GroundSpace, P: int, Q: int) -> int:
    return P | ((gr.full & ~Q) << gl.size)


def decode_pair(gl: GroundSpace, gr: GroundSpace, x: int) -> tuple[int, int]:
    return x & gl.full, gr.full & ~(x >> gl.size)


def sum_ground(gl: GroundSpace, gr: GroundSpace) -> GroundSpace:
    label = f"{gl.label}+{gr.label}" if (gl.label or gr.label) else ""
    return GroundSpace(gl.size + gr.size, label)


def as_csl(S: Bilattice) -> CSL:
    """The lattice ``{P + (B - Q)}`` on the disjoint union of the two grounds."""
    gl, gr = S._grounds
    return CSL.from_masks(sum_ground(gl, gr), (encode_pair(gl, gr, P, Q) for P, Q in S.pairs))


def from_csl(gl: GroundSpace, gr: GroundSpace, L: CSL) -> Bilattice:
    return Bilattice.from_pairs(gl, gr, (decode_pair(gl, gr, x) for x in L.elements))


def _pair_masks(gl, gr, gens) -> Iterator[tuple[int, int]]:
    for P, Q in gens:
        if isinstance(P, Proj):
            if P.ground != gl or Q.ground != gr:
                raise GroundMismatch("generator pair on the wrong grounds")
            P, Q = P.mask, Q.mask
        elif not isinstance(P, int):
            P, Q = Proj.of(gl, P).mask, Proj.of(gr, Q).mask
        if P & ~gl.full or Q & ~gr.full:
            raise GroundMismatch(f"generator {(P, Q)} outside {gl}x{gr}")
        yield P, Q


def bilattice_generate(gl: GroundSpace | int, gr: GroundSpace | int, generators=()) -> Bilattice:
    """Smallest bilattice containing ``generators`` (pairs of Proj, masks or member lists)."""
    gl, gr = as_ground(gl), as_ground(gr)
    masks = [encode_pair(gl, gr, P, Q) for P, Q in _pair_masks(gl, gr, generators)]
    masks.append(gr.full << gl.size)  # the pair (0, 0)
    els = _generate(sum_ground(gl, gr), masks, "bilattice_generate")
    return Bilattice.from_pairs(gl, gr, (decode_pair(gl, gr, x) for x in els))


def check_bilattice_laws(S: Bilattice) -> Report:
    rep = Report("bilattice laws")
    gl, gr = S._grounds
    idx = set(S.pairs)
    rep.add("contains (0,0)", (0, 0) in idx)
    rep.add("contains (A,0)", (gl.full, 0) in idx)
    rep.add("contains (0,B)", (0, gr.full) in idx)
    rep.add("canonical order", list(S.pairs) == sorted(idx))
    bad1 = [(p, q) for p in S.pairs for q in S.pairs if (p[0] & q[0], p[1] | q[1]) not in idx]
    bad2 = [(p, q) for p in S.pairs for q in S.pairs if (p[0] | q[0], p[1] & q[1]) not in idx]
    rep.add("closed under (meet, join)", not bad1, bad1[:5] or None)
    rep.add("closed under (join, meet)", not bad2, bad2[:5] or None)
    return rep


# -- bimodule <-> bilattice ------------------------------------------------

def m_of(S: Bilattice) -> Relation:
    """Cells annihilated by no pair: the complement of the union of the rectangles ``P x Q``."""
    gl, gr = S._grounds
    forbidden = [0] * gl.size
    for P, Q in S.pairs:
        if Q:
            for a in iter_bits(P):
                forbidden[a] |= Q
    return Relation(gl, gr, tuple(gr.full & ~f for f in forbidden))


def bil_of(E: Relation) -> Bilattice:
    """All pairs ``(alpha, beta)`` whose rectangle misses ``E``."""
    gl, gr = E.source, E.target
    free = [gr.full & ~E.image(P) for P in range(gl.full + 1)]
    check_elements(sum(1 << bin(f).count("1") for f in free), "bil_of")
    pairs = [(P, Q) for P, f in enumerate(free) for Q in submasks(f)]
    return Bilattice.from_pairs(gl, gr, pairs)


def check_bil_intersection(S: Bilattice) -> Report:
    """``Bil(m_of(S))`` restricted to ``S_l x S_r`` gives back ``S``."""
    rep = Report("bilattice recovered from its bimodule")
    sl, sr = slices(S)
    left, right = set(sl.elements), set(sr.elements)
    recovered = {(P, Q) for P, Q in bil_of(m_of(S)).pairs if P in left and Q in right}
    rep.add("Bil(m_of(S)) & (S_l x S_r) = S", recovered == set(S.pairs),
            {"extra": sorted(recovered - set(S.pairs))[:10], "missing": sorted(set(S.pairs) - recovered)[:10]}
            if recovered != set(S.pairs) else None)
    return rep


def slices(S: Bilattice) -> tuple[CSL, CSL]:
    gl, gr = S._grounds
    return (CSL.from_masks(gl, (P for P, _ in S.pairs)),
            CSL.from_masks(gr, (Q for _, Q in S.pairs)))


def essential_bilattice(E: Relation) -> Bilattice:
    """Smallest bilattice ``S`` with ``m_of(S) == E`` for a nondegenerate ``E``.

    With ``L1``, ``L2`` the CSLs generated by the Erdos families of ``E``,
    the result is ``{(P, Q) : P in L1, B - Q in L2, E[P] disjoint from Q}``.
    """
    if not is_nondegenerate(E):
        raise DegenerateRelation(f"essential bilattice needs a nondegenerate relation, got {E}")
    gl, gr = E.source, E.target
    s1, s2 = s_phi_masks(E)
    L1 = _generate(gl, s1, "essential_bilattice")
    L2 = _generate(gr, s2, "essential_bilattice")
    pairs = []
    for P in L1:
        img = E.image(P)
        for Qc in L2:
            if img & ~Qc == 0:
                pairs.append((P, gr.full & ~Qc))
        check_elements(len(pairs), "essential_bilattice")
    return Bilattice.from_pairs(gl, gr, pairs)


def essential_of_csl_algebra(L: CSL) -> Bilattice:
    """Essential bilattice of ``Alg(L)``: ``{(P, Q) : P in L, complement(Q) in L, P & Q empty}``."""
    g = L.ground
    pairs = [(P, g.full & ~Qc) for P in L.elements for Qc in L.elements if P & ~Qc == 0]
    check_elements(len(pairs), "essential_of_csl_algebra")
    return Bilattice.from_pairs(g, g, pairs)


# -- homomorphisms ---------------------------------------------------------

@dataclass(frozen=True)
class BilatticeHom:
    """``phi`` acts on left slices, ``psi`` on right slices (both un-complemented)."""

    phi: LatticeHom
    psi: LatticeHom
    source: Bilattice
    target: Bilattice

    def __call__(self, pq):
        P, Q = pq
        if isinstance(P, Proj):
            return self.phi(P), self.psi(Q)
        return self.phi.table[P], self.psi.table[Q]

    @classmethod
    def identity(cls, S: Bilattice) -> BilatticeHom:
        Ll, Lr = slices(S)
        return cls(LatticeHom.identity(Ll), LatticeHom.identity(Lr), S, S)

    def image(self) -> set[tuple[int, int]]:
        return {self(pq) for pq in self.source.pairs}

    def inverse(self) -> BilatticeHom:
        return BilatticeHom(self.phi.inverse(), self.psi.inverse(), self.target, self.source)

    def is_bijective(self) -> bool:
        return self.phi.is_bijective() and self.psi.is_bijective()


def hom_check(h: BilatticeHom) -> Report:
    rep = Report("bilattice homomorphism")
    sl, sr = slices(h.source)
    tl, tr = slices(h.target)
    rep.add("phi runs between left slices", h.phi.source == sl and h.phi.target == tl)
    rep.add("psi runs between right slices", h.psi.source == sr and h.psi.target == tr)
    rep.extend(hom_validate(h.phi), "phi: ")
    rep.extend(hom_validate(h.psi), "psi: ")
    if not rep.ok:
        return rep
    bad = [(pq, h(pq)) for pq in h.source.pairs if h(pq) not in h.target]
    rep.add("pairs map into target", not bad, bad[:10] or None)
    return rep


def is_onto(h: BilatticeHom) -> bool:
    return h.image() == set(h.target.pairs)


def _right_block_colors(gl_size: int):
    full_left = (1 << gl_size) - 1
    return lambda ji: [0 if e & full_left else 1 for e in ji.elements]


def bilattice_isomorphisms(S1: Bilattice, S2: Bilattice) -> Iterator[BilatticeHom]:
    """All bilattice isomorphisms ``S1 -> S2`` in canonical search order.

    Left and right slice maps are searched jointly: join-irreducibles of the
    encoded lattice that sit inside the right block belong to the right slice,
    the others to the left slice, and the order relations between the two
    kinds carry pair compatibility in both directions.
    """
    if len(S1) != len(S2):
        return
    g1l, g1r = S1._grounds
    g2l, g2r = S2._grounds
    C1, C2 = as_csl(S1), as_csl(S2)
    sl1, sr1 = slices(S1)
    sl2, sr2 = slices(S2)
    if len(sl1) != len(sl2) or len(sr1) != len(sr2):
        return
    B1 = g1r.full << g1l.size
    for F in lattice_isomorphisms(C1, C2, _right_block_colors(g1l.size), _right_block_colors(g2l.size)):
        if F.table[B1] != g2r.full << g2l.size:
            raise InternalInconsistency("colored search moved the right block")
        phi = {P: F.table[P | B1] & g2l.full for P in sl1.elements}
        psi = {}
        for Q in sr1.elements:
            img = F.table[(g1r.full & ~Q) << g1l.size] >> g2l.size
            psi[Q] = g2r.full & ~img
        h = BilatticeHom(LatticeHom(sl1, sl2, phi), LatticeHom(sr1, sr2, psi), S1, S2)
        if not (h.is_bijective() and hom_check(h).ok and hom_check(h.inverse()).ok and is_onto(h)):
            raise InternalInconsistency("lattice isomorphism did not decompose into a bilattice isomorphism")
        yield h


def iso_search(S1: Bilattice, S2: Bilattice) -> BilatticeHom | None:
    """First bilattice isomorphism (with homomorphic inverse), or None."""
    return next(bilattice_isomorphisms(S1, S2), None)
