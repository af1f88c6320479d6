"""Brute-force oracles, independent of the fast paths they check."""
from __future__ import annotations

from itertools import permutations, product
from typing import Sequence

import numpy as np

from ..bilattice import Bilattice, bilattice_generate, bil_of, essential_bilattice, m_of, slices
from ..bimodule import Relation
from ..errors import GroundMismatch
from ..lattice import CSL
from ..report import Report
from ..spaces import iter_bits
from .generators import all_bilattices


def oracle_span_product(chain: Sequence[Relation]) -> Relation:
    """Support of the span of products of matrix units, one unit per factor.

    A matrix unit of a pattern with cell ``(a, b)`` is ``e_{b,a}``; the product
    ``e_{d,c} e_{b,a}`` is ``e_{d,a}`` when ``c == b`` and zero otherwise.
    """
    if not chain:
        raise ValueError("empty chain")
    for x, y in zip(chain, chain[1:]):
        if x.target != y.source:
            raise GroundMismatch("chain breaks")
    cells = set()
    for units in product(*(R.pairs for R in chain)):
        col, row = units[0]
        for c, d in units[1:]:
            if c != row:
                break
            row = d
        else:
            cells.add((col, row))
    return Relation.from_pairs(chain[0].source, chain[-1].target, cells)


def oracle_ref_hull(E: Relation, rng: np.random.Generator | None = None, extra_vectors: int = 3) -> Relation:
    """Reflexive hull of the span of the matrix units of ``E``, decided with linear algebra.

    The unit ``e_{b,a}`` lies in the hull iff ``e_{b,a} xi`` is in
    ``span(U xi)`` for every probe vector ``xi``; basis vectors decide it, and
    a few random vectors are added as a cross-check.
    """
    m, n = E.source.size, E.target.size
    rng = rng if rng is not None else np.random.default_rng(0)
    units = []
    for a, b in E.pairs:
        M = np.zeros((n, m))
        M[b, a] = 1.0
        units.append(M)
    probes = [np.eye(m)[a] for a in range(m)] + [rng.normal(size=m) for _ in range(extra_vectors)]
    spans = []
    for xi in probes:
        cols = np.array([U @ xi for U in units]).T if units else np.zeros((n, 0))
        spans.append((xi, cols, np.linalg.matrix_rank(cols) if cols.size else 0))
    cells = []
    for a in range(m):
        for b in range(n):
            T = np.zeros((n, m))
            T[b, a] = 1.0
            inside = True
            for xi, cols, r in spans:
                v = T @ xi
                if not np.any(np.abs(v) > 1e-12):
                    continue
                aug = np.column_stack([cols, v]) if cols.size else v[:, None]
                if np.linalg.matrix_rank(aug) > r:
                    inside = False
                    break
            if inside:
                cells.append((a, b))
    return Relation.from_pairs(E.source, E.target, cells)


def brute_lat(R: Relation) -> CSL:
    return CSL.from_masks(R.source, (a for a in range(R.source.full + 1) if R.image(a) & ~a == 0))


def brute_alg(L: CSL) -> Relation:
    n = L.ground.size
    cells = [(x, y) for x in range(n) for y in range(n)
             if all(not (e >> x & 1) or (e >> y & 1) for e in L.elements)]
    return Relation.from_pairs(L.ground, L.ground, cells)


def _middle_bijections(L1: CSL, L2: CSL):
    full1, full2 = L1.ground.full, L2.ground.full
    mid1 = [e for e in L1.elements if e not in (0, full1)]
    mid2 = [e for e in L2.elements if e not in (0, full2)]
    for perm in permutations(mid2):
        t = dict(zip(mid1, perm))
        t[0], t[full1] = 0, full2
        yield t


def _preserves(L: CSL, t: dict) -> bool:
    els = L.elements
    return all(t[a | b] == t[a] | t[b] and t[a & b] == t[a] & t[b] for a in els for b in els)


def brute_lattice_isomorphic(L1: CSL, L2: CSL) -> bool:
    if len(L1) != len(L2):
        return False
    return any(_preserves(L1, t) for t in _middle_bijections(L1, L2))


def brute_bilattice_isomorphic(S1: Bilattice, S2: Bilattice) -> bool:
    if len(S1) != len(S2):
        return False
    l1, r1 = slices(S1)
    l2, r2 = slices(S2)
    if len(l1) != len(l2) or len(r1) != len(r2):
        return False
    target = set(S2.pairs)
    lefts = [t for t in _middle_bijections(l1, l2) if _preserves(l1, t)]
    rights = [t for t in _middle_bijections(r1, r2) if _preserves(r1, t)]
    return any({(tl[P], tr[Q]) for P, Q in S1.pairs} == target for tl in lefts for tr in rights)


def _covering_pair(rng: np.random.Generator, E: Relation, a: int, b: int) -> tuple[int, int]:
    """A random rectangle missing ``E`` that contains the cell ``(a, b)`` (which must be outside ``E``)."""
    col_b = E.columns[b]
    alpha = 1 << a
    for x in range(E.source.size):
        if not (col_b >> x & 1) and rng.random() < 0.5:
            alpha |= 1 << x
    free = E.target.full & ~E.image(alpha)
    beta = 1 << b
    for y in iter_bits(free):
        if rng.random() < 0.5:
            beta |= 1 << y
    return alpha, beta


def oracle_minimality_probe(E: Relation, trials: int = 100, seed: int = 0) -> Report:
    """Every bilattice ``S'`` with ``m_of(S') == E`` must contain the essential bilattice.

    At grounds of size at most 2 all bilattices are enumerated; otherwise
    ``trials`` random bilattices are generated from random pairs of ``bil_of(E)``
    topped up with random rectangles until they present ``E`` exactly.
    """
    ess = set(essential_bilattice(E).pairs)
    rep = Report("essential bilattice minimality")
    if E.source.size <= 2 and E.target.size <= 2:
        candidates = [S for S in all_bilattices(E.source.size, E.target.size) if m_of(S).rows == E.rows]
        bad = [S.pairs for S in candidates if not ess <= set(S.pairs)]
        rep.add("contained in every presenting bilattice (exhaustive)", not bad, bad[:3] or None,
                detail=f"{len(candidates)} bilattices")
        return rep
    rng = np.random.default_rng(seed)
    pool = bil_of(E).pairs
    bad, kept = [], 0
    comp = E.complement()
    for t in range(trials):
        k = int(rng.integers(0, min(len(pool), 6) + 1))
        gens = [pool[i] for i in rng.choice(len(pool), size=k, replace=False)] if k else []
        covered = [0] * E.source.size
        for P, Q in gens:
            for x in iter_bits(P):
                covered[x] |= Q
        for a, b in comp.pairs:
            if not (covered[a] >> b & 1):
                P, Q = _covering_pair(rng, E, a, b)
                gens.append((P, Q))
                for x in iter_bits(P):
                    covered[x] |= Q
        S = bilattice_generate(E.source, E.target, gens)
        if m_of(S).rows != E.rows:
            continue
        kept += 1
        if not ess <= set(S.pairs):
            bad.append((t, sorted(ess - set(S.pairs))[:5]))
    rep.add("random presenting bilattices generated", kept == trials, detail=f"{kept}/{trials}")
    rep.add("contained in every presenting bilattice (random)", not bad, bad[:3] or None)
    return rep
