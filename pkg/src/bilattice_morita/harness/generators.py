"""Seeded random instances and exhaustive enumerations.

Randomness comes from numpy's PCG64 bit generator (``numpy.random.default_rng``).
Identical seeds give identical instance streams within this package; streams
are not promised to match any other implementation.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ..bilattice import Bilattice, bilattice_generate
from ..bimodule import Relation
from ..inverse_image import PointMap, pullback
from ..lattice import CSL, csl_generate
from ..spaces import GroundSpace

PRNG_NAME = "numpy.PCG64"
_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    min_size: int = 1
    max_size: int = 6
    density: float = 0.5
    count: int | None = None

    def __post_init__(self):
        if not 1 <= self.min_size <= self.max_size:
            raise ValueError("need 1 <= min_size <= max_size")
        if not 0 < self.density <= 1:
            raise ValueError("density must lie in (0, 1]")

    def rng(self, *key: int) -> np.random.Generator:
        return np.random.default_rng([self.seed & _U64, *key])


def random_relation(rng: np.random.Generator, m: int, n: int, p: float, repair: bool = True) -> Relation:
    """Independent cells with probability ``p``; optionally patch empty rows, then empty columns."""
    cells = rng.random((m, n)) < p
    if repair:
        for a in range(m):
            if not cells[a].any():
                cells[a, rng.integers(n)] = True
        for b in range(n):
            if not cells[:, b].any():
                cells[rng.integers(m), b] = True
    return Relation.from_pairs(m, n, zip(*np.nonzero(cells)))


def gen_relation(cfg: GeneratorConfig, rng: np.random.Generator | None = None) -> Relation:
    """One nondegenerate relation; sizes uniform in ``[min_size, max_size]``."""
    rng = rng if rng is not None else cfg.rng()
    m = int(rng.integers(cfg.min_size, cfg.max_size + 1))
    n = int(rng.integers(cfg.min_size, cfg.max_size + 1))
    return random_relation(rng, m, n, cfg.density)


def gen_relations(cfg: GeneratorConfig) -> Iterator[Relation]:
    rng = cfg.rng()
    for _ in range(cfg.count if cfg.count is not None else 100):
        yield gen_relation(cfg, rng)


def random_subset(rng: np.random.Generator, n: int, p: float = 0.5) -> int:
    bits = rng.random(n) < p
    return sum(1 << i for i in range(n) if bits[i])


def random_csl(rng: np.random.Generator, n: int, max_gens: int | None = None) -> CSL:
    k = int(rng.integers(0, (max_gens if max_gens is not None else 2 * n) + 1))
    return csl_generate(n, [random_subset(rng, n, float(rng.uniform(0.2, 0.8))) for _ in range(k)])


def random_bilattice(rng: np.random.Generator, nl: int, nr: int, max_gens: int = 4) -> Bilattice:
    k = int(rng.integers(0, max_gens + 1))
    gens = [(random_subset(rng, nl), random_subset(rng, nr)) for _ in range(k)]
    return bilattice_generate(nl, nr, gens)


def random_point_map(rng: np.random.Generator, m: int, n: int, surjective: bool = False) -> PointMap:
    if surjective:
        if m < n:
            raise ValueError("a surjection needs at least as many source atoms")
        table = np.concatenate([rng.permutation(n), rng.integers(0, n, m - n)])
        table = rng.permutation(table)
    else:
        table = rng.integers(0, n, m)
    return PointMap.of(m, n, [int(t) for t in table])


def amplify(rng: np.random.Generator, E: Relation, extra: int = 2) -> tuple[Relation, PointMap, PointMap]:
    """Relabel and amplify: pull ``E`` back along random surjections onto its grounds."""
    m, n = E.source.size, E.target.size
    theta = random_point_map(rng, m + int(rng.integers(0, extra + 1)), m, surjective=True)
    rho = random_point_map(rng, n + int(rng.integers(0, extra + 1)), n, surjective=True)
    return pullback(theta, rho, E), theta, rho


def amplify_csl(rng: np.random.Generator, L: CSL, extra: int = 2) -> CSL:
    n = L.ground.size
    theta = random_point_map(rng, n + int(rng.integers(0, extra + 1)), n, surjective=True)
    return CSL.from_masks(theta.source, (theta.preimage(e) for e in L.elements))


# -- exhaustive enumerations ------------------------------------------------

def all_relations(m: int, n: int) -> Iterator[Relation]:
    cells = [(a, b) for a in range(m) for b in range(n)]
    for bits in range(1 << len(cells)):
        yield Relation.from_pairs(m, n, [c for i, c in enumerate(cells) if bits >> i & 1])


def _naive_csl_closure(fam: set[int]) -> frozenset:
    fam = set(fam)
    while True:
        new = {a | b for a in fam for b in fam} | {a & b for a in fam for b in fam}
        if new <= fam:
            return frozenset(fam)
        fam |= new


def all_csls(n: int) -> list[CSL]:
    """Every CSL on ``n`` atoms, by breadth-first extension with naive closure."""
    g = GroundSpace(n)
    start = frozenset({0, g.full})
    seen = {start}
    queue = deque([start])
    while queue:
        fam = queue.popleft()
        for x in range(g.full + 1):
            if x not in fam:
                nxt = _naive_csl_closure(fam | {x})
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return sorted((CSL.from_masks(g, f) for f in seen), key=lambda L: (len(L), L.elements))


def _naive_bilattice_closure(pairs: set) -> frozenset:
    fam = set(pairs)
    while True:
        new = {(p[0] & q[0], p[1] | q[1]) for p in fam for q in fam}
        new |= {(p[0] | q[0], p[1] & q[1]) for p in fam for q in fam}
        if new <= fam:
            return frozenset(fam)
        fam |= new


def all_bilattices(nl: int, nr: int) -> list[Bilattice]:
    """Every bilattice on ``nl x nr`` atoms (breadth-first, naive closure)."""
    fl, fr = (1 << nl) - 1, (1 << nr) - 1
    start = _naive_bilattice_closure({(0, 0), (fl, 0), (0, fr)})
    universe = [(P, Q) for P in range(fl + 1) for Q in range(fr + 1)]
    seen = {start}
    queue = deque([start])
    while queue:
        fam = queue.popleft()
        for pq in universe:
            if pq not in fam:
                nxt = _naive_bilattice_closure(fam | {pq})
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return sorted((Bilattice.from_pairs(nl, nr, f) for f in seen), key=lambda S: (len(S), S.pairs))
