"""Commutative subspace lattices over a finite atomic masa.

A CSL is a family of subsets of the atoms, containing the empty and the full
set, closed under union and intersection.  On a finite ground set this is the
same as being closed under arbitrary suprema and infima, so the finite
closure operations below are exact.

The lattice/preorder correspondence (``alg_of_lattice`` and
``lat_of_relation``) is the finite Alg/Lat Galois connection; isomorphism
search works on the poset of join-irreducibles, which determines a finite
distributive lattice up to isomorphism.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .bimodule import Relation
from .errors import GroundMismatch, InternalInconsistency, SizeLimitExceeded
from .limits import check_elements, current_limits
from .report import Report
from .spaces import GroundSpace, Proj, as_ground, iter_bits, popcount


@dataclass(frozen=True)
class CSL:
    ground: GroundSpace
    elements: tuple[int, ...]

    @classmethod
    def from_masks(cls, ground: GroundSpace | int, masks: Iterable[int]) -> CSL:
        return cls(as_ground(ground), tuple(sorted(set(masks))))

    @classmethod
    def from_sets(cls, ground: GroundSpace | int, sets: Iterable[Iterable[int]]) -> CSL:
        ground = as_ground(ground)
        return cls.from_masks(ground, (Proj.of(ground, s).mask for s in sets))

    @classmethod
    def trivial(cls, ground: GroundSpace | int) -> CSL:
        ground = as_ground(ground)
        return cls(ground, (0, ground.full))

    @classmethod
    def powerset(cls, ground: GroundSpace | int) -> CSL:
        ground = as_ground(ground)
        return cls(ground, tuple(range(ground.full + 1)))

    def __contains__(self, x) -> bool:
        if isinstance(x, Proj):
            if x.ground != self.ground:
                return False
            x = x.mask
        return x in self._index

    @property
    def _index(self) -> frozenset:
        # frozen dataclass: cache by hand
        try:
            return self.__dict__["_idx"]
        except KeyError:
            idx = frozenset(self.elements)
            object.__setattr__(self, "_idx", idx)
            return idx

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def projections(self) -> list[Proj]:
        return [Proj(self.ground, m) for m in self.elements]

    def complemented(self) -> CSL:
        """The orthocomplement lattice ``{full - P : P in L}``."""
        full = self.ground.full
        return CSL.from_masks(self.ground, (full & ~m for m in self.elements))

    def __repr__(self):
        return f"CSL({self.ground.size}, {[Proj(self.ground, m) for m in self.elements]})"


def _generate(ground: GroundSpace, generators: Iterable[int], what: str) -> list[int]:
    # Distributivity: every element is a join of meets of generators.
    full = ground.full
    meets = {full}
    for g in generators:
        if g & ~full:
            raise GroundMismatch(f"generator {g:#b} outside {ground}")
        if g in meets:
            continue
        meets |= {m & g for m in meets}
        check_elements(len(meets), what)
    joins = {0}
    for m in sorted(meets):
        if m in joins:
            continue
        joins |= {j | m for j in joins}
        check_elements(len(joins), what)
    return sorted(joins)


def csl_generate(ground: GroundSpace | int, generators: Iterable[Proj | int | Iterable[int]] = ()) -> CSL:
    """Smallest CSL on ``ground`` containing ``generators``."""
    ground = as_ground(ground)
    masks = []
    for g in generators:
        if isinstance(g, Proj):
            if g.ground != ground:
                raise GroundMismatch(f"generator on {g.ground}, expected {ground}")
            masks.append(g.mask)
        elif isinstance(g, int):
            masks.append(g)
        else:
            masks.append(Proj.of(ground, g).mask)
    return CSL(ground, tuple(_generate(ground, masks, "csl_generate")))


def principal_elements(L: CSL) -> list[int]:
    """For each atom x, the smallest element of ``L`` containing x."""
    out = []
    for x in range(L.ground.size):
        bit = 1 << x
        m = L.ground.full
        for e in L.elements:
            if e & bit:
                m &= e
        out.append(m)
    return out


def alg_of_lattice(L: CSL) -> Relation:
    """The specialization preorder: (x, y) iff every element containing x contains y."""
    return Relation(L.ground, L.ground, tuple(principal_elements(L)))


def _reach(R: Relation) -> list[int]:
    """Reflexive-transitive closure rows of an endorelation."""
    n = R.source.size
    out = []
    for x in range(n):
        seen = 1 << x
        frontier = seen
        while frontier:
            nxt = R.image(frontier) & ~seen
            seen |= nxt
            frontier = nxt
        out.append(seen)
    return out


def lat_of_relation(R: Relation) -> CSL:
    """All ``R``-invariant subsets (``R[alpha]`` contained in ``alpha``)."""
    if R.source != R.target:
        raise GroundMismatch(f"not an endorelation: {R.source} -> {R.target}")
    # invariant sets are exactly the unions of reachability sets
    fam = {0}
    for m in sorted(set(_reach(R))):
        if m in fam:
            continue
        fam |= {f | m for f in fam}
        check_elements(len(fam), "lat_of_relation")
    return CSL(R.source, tuple(sorted(fam)))


def check_csl_laws(L: CSL) -> Report:
    rep = Report("CSL laws")
    idx = set(L.elements)
    full = L.ground.full
    rep.add("contains empty", 0 in idx)
    rep.add("contains full", full in idx)
    rep.add("inside ground", all(0 <= e <= full for e in L.elements))
    rep.add("canonical order", list(L.elements) == sorted(idx))
    bad_u = [(a, b) for a in L.elements for b in L.elements if a | b not in idx]
    bad_i = [(a, b) for a in L.elements for b in L.elements if a & b not in idx]
    rep.add("closed under union", not bad_u, bad_u[:5] or None)
    rep.add("closed under intersection", not bad_i, bad_i[:5] or None)
    return rep


# -- join-irreducibles ---------------------------------------------------

@dataclass(frozen=True)
class JoinIrreducibles:
    """Join-irreducible elements in canonical order with their containment order.

    ``below[i]`` is a bitmask over indices: bit ``j`` is set iff
    ``elements[j]`` is contained in ``elements[i]`` (reflexive).
    """

    elements: tuple[int, ...]
    below: tuple[int, ...]

    def leq(self, i: int, j: int) -> bool:
        return bool(self.below[j] >> i & 1)


def join_irreducibles(L: CSL) -> JoinIrreducibles:
    elems = tuple(sorted(set(principal_elements(L))))
    below = tuple(
        sum(1 << j for j, f in enumerate(elems) if f & ~e == 0)
        for e in elems
    )
    return JoinIrreducibles(elems, below)


# -- homomorphisms -------------------------------------------------------

@dataclass(frozen=True)
class LatticeHom:
    source: CSL
    target: CSL
    table: Mapping[int, int] = field(hash=False)

    def __call__(self, x: int | Proj) -> int | Proj:
        if isinstance(x, Proj):
            if x.ground != self.source.ground:
                raise GroundMismatch(f"{x.ground} vs {self.source.ground}")
            return Proj(self.target.ground, self.table[x.mask])
        return self.table[x]

    @classmethod
    def identity(cls, L: CSL) -> LatticeHom:
        return cls(L, L, {e: e for e in L.elements})

    def is_bijective(self) -> bool:
        vals = set(self.table.values())
        return len(vals) == len(self.table) == len(self.target) and vals == set(self.target.elements)

    def inverse(self) -> LatticeHom:
        if not self.is_bijective():
            raise ValueError("only a bijective homomorphism has an inverse")
        return LatticeHom(self.target, self.source, {v: k for k, v in self.table.items()})

    def __eq__(self, other):
        if not isinstance(other, LatticeHom):
            return NotImplemented
        return (self.source, self.target) == (other.source, other.target) and dict(self.table) == dict(other.table)

    def __hash__(self):
        return hash((self.source, self.target, tuple(sorted(self.table.items()))))


def hom_validate(h: LatticeHom) -> Report:
    """Check that ``h`` is a total map into the target preserving unions, intersections, empty and full."""
    rep = Report("lattice homomorphism")
    src, tgt = h.source, h.target
    missing = [e for e in src.elements if e not in h.table]
    extra = [k for k in h.table if k not in src]
    rep.add("total on source", not missing and not extra, (missing + extra)[:10] or None)
    if missing:
        return rep
    outside = [e for e in src.elements if h.table[e] not in tgt]
    rep.add("values in target", not outside, outside[:10] or None)
    rep.add("empty to empty", h.table[0] == 0, (0, h.table[0]))
    full_s, full_t = src.ground.full, tgt.ground.full
    rep.add("full to full", h.table.get(full_s) == full_t, (full_s, h.table.get(full_s)))
    bad_u, bad_i = [], []
    els = src.elements
    for i, a in enumerate(els):
        ha = h.table[a]
        for b in els[i:]:
            hb = h.table[b]
            if h.table[a | b] != ha | hb:
                bad_u.append((a, b))
            if h.table[a & b] != ha & hb:
                bad_i.append((a, b))
    rep.add("preserves union", not bad_u, bad_u[:10] or None)
    rep.add("preserves intersection", not bad_i, bad_i[:10] or None)
    return rep


def hom_from_join_irreducibles(L1: CSL, L2: CSL, assignment: Mapping[int, int]) -> LatticeHom:
    """Extend an assignment on join-irreducibles of ``L1`` to all of ``L1`` by unions."""
    ji = join_irreducibles(L1)
    table = {}
    for e in L1.elements:
        img = 0
        for j in ji.elements:
            if j & ~e == 0:
                img |= assignment[j]
        table[e] = img
    return LatticeHom(L1, L2, table)


def _invariants(ji: JoinIrreducibles, colors: Sequence[int]) -> list[tuple]:
    n = len(ji.elements)
    above = [0] * n
    for i in range(n):
        for j in iter_bits(ji.below[i]):
            above[j] |= 1 << i
    return [(colors[i], popcount(ji.below[i]), popcount(above[i])) for i in range(n)]


def poset_isomorphisms(ji1: JoinIrreducibles, ji2: JoinIrreducibles,
                       colors1: Sequence[int] | None = None,
                       colors2: Sequence[int] | None = None) -> Iterator[list[int]]:
    """Order isomorphisms between two join-irreducible posets, by backtracking.

    Yields ``f`` with ``f[i]`` the index in ``ji2`` assigned to index ``i`` of
    ``ji1``.  Candidates are tried in canonical order.  Optional colors must be
    preserved.  Raises ``SizeLimitExceeded`` when the node cap is hit.
    """
    n = len(ji1.elements)
    if n != len(ji2.elements):
        return
    colors1 = colors1 or [0] * n
    colors2 = colors2 or [0] * n
    inv1 = _invariants(ji1, colors1)
    inv2 = _invariants(ji2, colors2)
    if sorted(inv1) != sorted(inv2):
        return
    order = sorted(range(n), key=lambda i: (inv1[i][1], i))
    cands = [[k for k in range(n) if inv2[k] == inv1[i]] for i in range(n)]
    cap = current_limits().nodes
    f = [-1] * n
    used = [False] * n
    nodes = 0

    def rec(pos: int):
        nonlocal nodes
        if pos == n:
            yield list(f)
            return
        i = order[pos]
        for k in cands[i]:
            if used[k]:
                continue
            nodes += 1
            if nodes > cap:
                raise SizeLimitExceeded(f"isomorphism search exceeded {cap} nodes")
            ok = True
            for q in order[:pos]:
                fq = f[q]
                if ji1.leq(q, i) != ji2.leq(fq, k) or ji1.leq(i, q) != ji2.leq(k, fq):
                    ok = False
                    break
            if not ok:
                continue
            f[i] = k
            used[k] = True
            yield from rec(pos + 1)
            used[k] = False
            f[i] = -1

    yield from rec(0)


def _iso_from_poset_map(L1: CSL, L2: CSL, ji1, ji2, f) -> LatticeHom:
    assignment = {ji1.elements[i]: ji2.elements[f[i]] for i in range(len(f))}
    h = hom_from_join_irreducibles(L1, L2, assignment)
    if not (h.is_bijective() and hom_validate(h).ok and hom_validate(h.inverse()).ok):
        raise InternalInconsistency("poset isomorphism did not extend to a lattice isomorphism")
    return h


def lattice_isomorphisms(L1: CSL, L2: CSL, colors1=None, colors2=None) -> Iterator[LatticeHom]:
    if len(L1) != len(L2):
        return
    ji1, ji2 = join_irreducibles(L1), join_irreducibles(L2)
    c1 = colors1(ji1) if callable(colors1) else colors1
    c2 = colors2(ji2) if callable(colors2) else colors2
    for f in poset_isomorphisms(ji1, ji2, c1, c2):
        yield _iso_from_poset_map(L1, L2, ji1, ji2, f)


def lattice_iso_search(L1: CSL, L2: CSL) -> LatticeHom | None:
    """First union/intersection-preserving bijection ``L1 -> L2`` in canonical order, or None."""
    return next(lattice_isomorphisms(L1, L2), None)
