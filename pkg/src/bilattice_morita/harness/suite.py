"""Seeded property suite: every law of the package, run over pinned and generated instances.

Each law group owns a slot in ``GROUPS``; its index keys the random streams,
so instance ``i`` of group ``g`` is always drawn from ``cfg.rng(g, 0, i)``
whatever else is selected. Failures carry that key, which is enough to
regenerate the instance.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable

import numpy as np

from ..bilattice import (
    check_bil_intersection, check_bilattice_laws, essential_bilattice,
    essential_of_csl_algebra, hom_check, is_onto, iso_search, m_of,
)
from ..bimodule import Relation, check_erdos_laws, is_nondegenerate, is_preorder, ref_hull, span_compose
from ..errors import BilatticeError
from ..inverse_image import (
    RectanglePresentation, check_inverse_image, check_nonzero_transfer, generated_bilattice,
    hom_from_point_maps, pullback,
)
from ..lattice import CSL, alg_of_lattice, check_csl_laws, lat_of_relation, lattice_iso_search
from ..morita import (
    MoritaConfig, MoritaWitness, check_doubling_blocks, check_lemma_identities, check_nonzero_transfer_hom,
    check_onto_hom_laws, check_op_blocks, decide_morita, verify_morita,
)
from ..report import Report, _plain
from ..spaces import GroundSpace
from .generators import (
    GeneratorConfig, all_csls, all_relations, amplify, amplify_csl, random_bilattice, random_csl,
    random_point_map, random_relation, random_subset,
)
from .instances import load_golden
from .oracles import (
    brute_alg, brute_bilattice_isomorphic, brute_lat, brute_lattice_isomorphic, oracle_minimality_probe,
    oracle_ref_hull, oracle_span_product,
)

GROUPS = (
    "reflexivity", "erdos", "bilattice-closure", "essential", "morita",
    "equivalence", "lemmas", "onto-homs", "inverse-image", "oracles",
)
MUTATION_TARGET = 0.99
MAX_LOGGED_FAILURES = 50


@dataclass
class GroupResult:
    name: str
    laws: dict[str, list[int]] = field(default_factory=dict)   # law -> [checked, failed]
    failures: list[dict] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def failed(self) -> int:
        return sum(f for _, f in self.laws.values())

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def law(self, name: str, passed: bool, where, counterexample=None, detail: str = "") -> bool:
        tally = self.laws.setdefault(name, [0, 0])
        tally[0] += 1
        if not passed:
            tally[1] += 1
            if len(self.failures) < MAX_LOGGED_FAILURES:
                entry = {"law": name, "instance": _plain(where), "counterexample": _plain(counterexample)}
                if detail:
                    entry["detail"] = detail
                self.failures.append(entry)
        return passed

    def record(self, rep: Report, where, prefix: str = "") -> bool:
        for o in rep.outcomes:
            self.law(prefix + o.law, o.passed, where, o.counterexample, o.detail)
        return rep.ok

    def to_dict(self, timing: bool = True) -> dict:
        d = {"name": self.name, "ok": self.ok, "checks": sum(c for c, _ in self.laws.values()),
             "failed": self.failed, "laws": {k: list(v) for k, v in sorted(self.laws.items())},
             "failures": self.failures, "stats": _plain(self.stats)}
        if timing:
            d["elapsed"] = round(self.elapsed, 4)
        return d


@dataclass
class SuiteReport:
    seed: int
    groups: list[GroupResult]
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return all(g.ok for g in self.groups)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def group(self, name: str) -> GroupResult:
        for g in self.groups:
            if g.name == name:
                return g
        raise KeyError(name)

    def to_dict(self, timing: bool = True) -> dict:
        d = {"seed": self.seed, "ok": self.ok, "exit_code": self.exit_code,
             "groups": [g.to_dict(timing) for g in self.groups]}
        if timing:
            d["elapsed"] = round(self.elapsed, 4)
        return d

    def render(self) -> str:
        lines = [f"proptest seed={self.seed}: {'PASS' if self.ok else 'FAIL'} ({self.elapsed:.2f}s)"]
        for g in self.groups:
            checks = sum(c for c, _ in g.laws.values())
            lines.append(f"  [{'ok' if g.ok else 'FAIL'}] {g.name}: {checks} checks, {g.failed} failed, {g.elapsed:.2f}s")
            for f in g.failures[:5]:
                lines.append(f"      {f['law']} at {f['instance']}: {f['counterexample']}")
            mut = g.stats.get("mutation")
            if mut:
                lines.append(f"      mutations: {mut['detected']}/{mut['total']} detected "
                             f"({mut['rate']:.1%}, target {MUTATION_TARGET:.0%}); "
                             f"{mut['undetected_equivalent']} undetected mutants are valid witnesses")
        return "\n".join(lines)


class _Ctx:
    def __init__(self, cfg: GeneratorConfig, index: int, mutate: bool):
        self.cfg, self.index, self.mutate = cfg, index, mutate

    def count(self, default: int) -> int:
        return default if self.cfg.count is None else self.cfg.count

    def size(self, default: int) -> int:
        return max(1, min(default, self.cfg.max_size))

    def rng(self, i: int, stream: int = 0) -> np.random.Generator:
        return self.cfg.rng(self.index, stream, i)

    def key(self, i: int, stream: int = 0) -> dict:
        return {"seed": self.cfg.seed, "key": [self.index, stream, i]}


def _guard(res: GroupResult, where, fn: Callable[[], None]) -> None:
    try:
        fn()
    except BilatticeError as exc:
        res.law("instance evaluated without error", False, where, detail=f"{type(exc).__name__}: {exc}")


def _rand_relation(rng: np.random.Generator, max_m: int, max_n: int, repair: bool = True) -> Relation:
    m = int(rng.integers(1, max_m + 1))
    n = int(rng.integers(1, max_n + 1))
    return random_relation(rng, m, n, float(rng.uniform(0.1, 0.9)), repair=repair)


# -- groups -------------------------------------------------------------------

def _reflexivity(ctx: _Ctx, res: GroupResult) -> None:
    def one(L: CSL, where):
        res.record(check_csl_laws(L), where)
        A = alg_of_lattice(L)
        res.law("Alg(L) is a preorder", is_preorder(A), where)
        res.law("Lat(Alg(L)) = L", lat_of_relation(A).elements == L.elements, where, L.elements)
        if L.ground.size <= 4:
            res.law("Alg(L) agrees with brute force", A == brute_alg(L), where)
            res.law("Lat(Alg(L)) agrees with brute force", brute_lat(A).elements == L.elements, where)

    exhaustive = 0
    for n in range(1, ctx.size(3) + 1):
        for j, L in enumerate(all_csls(n)):
            one(L, {"exhaustive": [n, j]})
            exhaustive += 1
    top = ctx.size(6)
    for i in range(ctx.count(500)):
        rng = ctx.rng(i)
        one(random_csl(rng, int(rng.integers(1, top + 1))), ctx.key(i))
    res.stats.update(exhaustive=exhaustive, random=ctx.count(500))


def _erdos(ctx: _Ctx, res: GroupResult) -> None:
    res.record(check_erdos_laws(load_golden("e_tri").pick("relations")), "golden:e_tri")
    top = ctx.size(6)
    for i in range(ctx.count(500)):
        E = _rand_relation(ctx.rng(i), top, top)
        _guard(res, ctx.key(i), lambda: res.record(check_erdos_laws(E), ctx.key(i)))


def _bilattice_closure(ctx: _Ctx, res: GroupResult) -> None:
    top = ctx.size(5)
    for i in range(ctx.count(500)):
        rng = ctx.rng(i)
        nl, nr = (int(x) for x in rng.integers(1, top + 1, 2))
        S = random_bilattice(rng, nl, nr, max_gens=int(rng.integers(1, 7)))
        where = ctx.key(i)
        res.record(check_bilattice_laws(S), where)
        res.record(check_bil_intersection(S), where)


def _essential(ctx: _Ctx, res: GroupResult) -> None:
    golden = {"diag2": 9, "a3": 9}
    for name, size in golden.items():
        S = essential_bilattice(load_golden(name).pick("relations"))
        res.law("pinned essential bilattice size", len(S) == size, f"golden:{name}", len(S))

    def one(E: Relation, where):
        S = essential_bilattice(E)
        res.record(check_bilattice_laws(S), where)
        res.law("m_of(essential(E)) = E", m_of(S) == E, where, {"E": E.pairs, "got": m_of(S).pairs})

    top = ctx.size(6)
    for i in range(ctx.count(500)):
        E = _rand_relation(ctx.rng(i), top, top)
        _guard(res, ctx.key(i), lambda: one(E, ctx.key(i)))

    probes = min(50, ctx.count(50))
    trials = 100 if ctx.cfg.count is None else max(1, min(100, ctx.cfg.count))
    for i in range(probes):
        rng = ctx.rng(i, 1)
        E = _rand_relation(rng, top, top)
        where = ctx.key(i, 1)
        _guard(res, where, lambda: res.record(oracle_minimality_probe(E, trials, int(rng.integers(1 << 32))), where))

    exhaustive = 0
    small = ctx.size(2)
    for m, n in product(range(1, small + 1), repeat=2):
        for E in all_relations(m, n):
            if is_nondegenerate(E):
                exhaustive += 1
                res.record(oracle_minimality_probe(E), {"exhaustive": [m, n, E.pairs]})
    res.stats.update(probe_instances=probes, probe_trials=trials, exhaustive_relations=exhaustive)


def _morita_configs(ctx: _Ctx) -> Iterable[tuple[dict, Relation, Relation]]:
    """The amplified pairs shared by the morita and lemmas groups (keyed on the morita slot)."""
    base = max(1, ctx.size(6) - 2)
    idx = GROUPS.index("morita")
    for i in range(ctx.count(200)):
        rng = ctx.cfg.rng(idx, 0, i)
        E = _rand_relation(rng, base, base)
        E2, _, _ = amplify(rng, E)
        yield {"seed": ctx.cfg.seed, "key": [idx, 0, i]}, E, E2


def _golden_morita(res: GroupResult) -> None:
    iso = load_golden("diag_a3_iso")
    want = iso.homs["iso"]
    diag, A3 = load_golden("diag2").pick("relations"), load_golden("a3").pick("relations")
    got = decide_morita(diag, A3)
    if not res.law("pinned diag2 ~ A3 decided equivalent", got is not None, "golden:diag_a3"):
        return
    h, w = got
    res.law("pinned iso phi", dict(h.phi.table) == {0: 0, 1: 0b011, 2: 0b100, 3: 0b111}, "golden:diag_a3",
            dict(h.phi.table))
    res.law("pinned iso psi is the identity", all(k == v for k, v in h.psi.table.items()), "golden:diag_a3")
    res.law("pinned iso matches golden file", (h.phi.table, h.psi.table) == (want.phi.table, want.psi.table),
            "golden:diag_a3")
    res.law("pinned V1 = {(0,0),(0,1),(1,2)}", w.V1.pairs == [(0, 0), (0, 1), (1, 2)], "golden:diag_a3", w.V1.pairs)
    rel = load_golden("morita_diag_a3").relations
    res.law("pinned witness matches golden file",
            w == MoritaWitness(rel["V1"], rel["V2"], rel["W1"], rel["W2"]), "golden:diag_a3")
    res.record(verify_morita(diag, A3, w), "golden:diag_a3")
    res.record(check_lemma_identities(MoritaConfig(diag, A3, w, hom=h)), "golden:diag_a3")


def _morita(ctx: _Ctx, res: GroupResult) -> None:
    _golden_morita(res)
    for where, E, E2 in _morita_configs(ctx):
        def one():
            got = decide_morita(E, E2)
            if not res.law("decide_morita finds an isomorphism", got is not None, where, {"E": E.pairs}):
                return
            h, w = got
            res.record(verify_morita(E, E2, w), where)
            res.record(check_lemma_identities(MoritaConfig(E, E2, w, hom=h)), where)
            res.record(check_op_blocks(h, w), where)
        _guard(res, where, one)


def _equivalence(ctx: _Ctx, res: GroupResult) -> None:
    small = ctx.size(2)
    rels = [E for m, n in product(range(1, small + 1), repeat=2) for E in all_relations(m, n) if is_nondegenerate(E)]
    ess = [essential_bilattice(E) for E in rels]
    k = len(rels)
    equiv = [[decide_morita(rels[a], rels[b]) is not None for b in range(k)] for a in range(k)]
    for a in range(k):
        res.law("reflexive", equiv[a][a], {"relation": rels[a].pairs})
        for b in range(k):
            where = {"pair": [rels[a].pairs, rels[b].pairs]}
            res.law("symmetric", equiv[a][b] == equiv[b][a], where)
            res.law("decision agrees with brute-force bilattice isomorphism",
                    equiv[a][b] == brute_bilattice_isomorphic(ess[a], ess[b]), where)
    for a, b, c in product(range(k), repeat=3):
        if equiv[a][b] and equiv[b][c]:
            res.law("transitive", equiv[a][c], {"triple": [a, b, c]})
    d2, d3 = Relation.diagonal(2), Relation.diagonal(3)
    res.law("pinned diag2 vs diag3 rejected", decide_morita(d2, d3) is None, "golden:diag2-diag3")
    res.stats.update(relations=k, classes=len({tuple(row) for row in equiv}))


def _flip(rng: np.random.Generator, w: MoritaWitness) -> tuple[MoritaWitness, dict]:
    name = ("V1", "V2", "W1", "W2")[int(rng.integers(4))]
    R = getattr(w, name)
    a, b = int(rng.integers(R.source.size)), int(rng.integers(R.target.size))
    present = (a, b) in R
    return w.replace(**{name: R.with_cell(a, b, not present)}), {
        "witness": name, "cell": [a, b], "action": "remove" if present else "add"}


def _oracle_valid_witness(E1: Relation, E2: Relation, w: MoritaWitness) -> bool:
    """Morita conditions recomputed with the brute-force product oracle."""
    ok = oracle_span_product([w.V1, E2, w.W2]) == E1 and oracle_span_product([w.W1, E1, w.V2]) == E2
    return ok and all(is_preorder(oracle_span_product(c))
                      for c in ([w.W1, w.V1], [w.V1, w.W1], [w.W2, w.V2], [w.V2, w.W2]))


def _lemmas(ctx: _Ctx, res: GroupResult) -> None:
    configs = []
    for where, E, E2 in _morita_configs(ctx):
        got = decide_morita(E, E2)
        if not res.law("configuration has an isomorphism", got is not None, where):
            continue
        h, w = got
        configs.append((where, E, E2, h, w))
        res.record(check_lemma_identities(MoritaConfig(E, E2, w, hom=h)), where)
    if not ctx.mutate or not configs:
        return
    total = detected = equivalent = by_definition = 0
    kinds: dict[str, list[int]] = {}
    undetected = []
    for j in range(ctx.count(200)):
        rng = ctx.rng(j, 1)
        where, E, E2, h, w = configs[int(rng.integers(len(configs)))]
        wm, info = _flip(rng, w)
        caught = not verify_morita(E, E2, wm).ok or not check_lemma_identities(MoritaConfig(E, E2, wm, hom=h)).ok
        total += 1
        detected += caught
        by_definition += not check_op_blocks(h, wm).ok
        tally = kinds.setdefault(f"{info['witness']} {info['action']}", [0, 0])
        tally[0] += 1
        tally[1] += caught
        if not caught:
            valid = _oracle_valid_witness(E, E2, wm)
            equivalent += valid
            undetected.append({"mutation": ctx.key(j, 1), "config": where, **info, "valid_witness": valid})
    res.stats["mutation"] = {
        "total": total, "detected": detected, "rate": detected / total, "target": MUTATION_TARGET,
        "meets_target": detected / total >= MUTATION_TARGET, "undetected_equivalent": equivalent,
        "detected_by_witness_definition": by_definition, "by_kind": kinds, "undetected": undetected,
    }


def _onto_homs(ctx: _Ctx, res: GroupResult) -> None:
    iso = load_golden("diag_a3_iso")
    S_diag, S_a3 = iso.bilattices["S1"], iso.bilattices["S2"]
    back = iso.homs["iso"].inverse()
    res.record(check_onto_hom_laws(S_a3, S_diag, back), "golden:A3->diag")
    res.record(check_nonzero_transfer_hom(back), "golden:A3->diag")
    res.record(check_doubling_blocks(S_a3, back), "golden:A3->diag")
    col = load_golden("collapse")
    h = hom_from_point_maps(col.point_maps["theta"], col.point_maps["rho"], S_diag)
    res.law("pinned collapse maps induce the diag -> A3 isomorphism",
            h.target == S_a3 and h.phi.table == iso.homs["iso"].phi.table, "golden:collapse")

    top = ctx.size(4)
    injective = 0
    # Surjective point maps are the stated setting; arbitrary maps (stream 2) are an extra sweep.
    for stream, surjective in ((0, True), (2, False)):
        for i in range(ctx.count(200)):
            rng = ctx.rng(i, stream)
            where = ctx.key(i, stream)
            E1 = _rand_relation(rng, top, top)
            m, n = E1.source.size, E1.target.size
            M = m + int(rng.integers(0 if surjective else 1, 3))
            N = n + int(rng.integers(0 if surjective else 1, 3))
            theta = random_point_map(rng, M, m, surjective)
            rho = random_point_map(rng, N, n, surjective)

            def one():
                S1 = essential_bilattice(E1)
                h = hom_from_point_maps(theta, rho, S1)
                res.record(hom_check(h), where)
                res.law("induced hom is onto", is_onto(h), where)
                res.record(check_onto_hom_laws(S1, h.target, h), where)
                res.record(check_nonzero_transfer_hom(h), where)
                res.record(check_doubling_blocks(S1, h), where)
                return h.is_bijective()
            try:
                injective += bool(one())
            except BilatticeError as exc:
                res.law("instance evaluated without error", False, where, detail=str(exc))
        res.stats["surjective_point_maps" if surjective else "arbitrary_point_maps"] = ctx.count(200)
    res.stats["bijective_homs"] = injective

    agree = brute = 0
    for i in range(ctx.count(100)):
        rng = ctx.rng(i, 1)
        n = int(rng.integers(1, ctx.size(4) + 1))
        L1 = random_csl(rng, n)
        L2 = amplify_csl(rng, L1) if i % 2 == 0 else random_csl(rng, n)
        lat = lattice_iso_search(L1, L2) is not None
        bil = iso_search(essential_of_csl_algebra(L1), essential_of_csl_algebra(L2)) is not None
        agree += lat
        where = ctx.key(i, 1)
        res.law("CSLs isomorphic iff CSL-algebra essential bilattices isomorphic", lat == bil, where)
        if len(L1) <= 7 and len(L2) <= 7:
            brute += 1
            res.law("CSL isomorphism agrees with brute force", lat == brute_lattice_isomorphic(L1, L2), where)
    res.stats.update(csl_pairs_isomorphic=agree, csl_pairs_brute=brute)


def _inverse_image(ctx: _Ctx, res: GroupResult) -> None:
    col = load_golden("collapse")
    theta, rho, E1 = col.point_maps["theta"], col.point_maps["rho"], col.relations["E1"]
    A3 = load_golden("a3").pick("relations")
    res.law("pinned collapse pullback = A3", pullback(theta, rho, E1).pairs == A3.pairs, "golden:collapse")
    res.record(check_inverse_image(theta, rho, E1), "golden:collapse")
    res.record(check_nonzero_transfer(theta, rho, E1), "golden:collapse")

    top = ctx.size(5)
    for i in range(ctx.count(200)):
        rng = ctx.rng(i)
        where = ctx.key(i)
        E1 = _rand_relation(rng, top, top, repair=bool(rng.random() < 0.7))
        th = random_point_map(rng, int(rng.integers(1, top + 1)), E1.source.size)
        rh = random_point_map(rng, int(rng.integers(1, top + 1)), E1.target.size)
        _guard(res, where, lambda: (res.record(check_inverse_image(th, rh, E1), where),
                                    res.record(check_nonzero_transfer(th, rh, E1), where)))
    for i in range(ctx.count(200)):
        rng = ctx.rng(i, 1)
        m, n = (int(x) for x in rng.integers(1, top + 1, 2))
        rects = tuple((random_subset(rng, m, 0.4), random_subset(rng, n, 0.4))
                      for _ in range(int(rng.integers(0, 7))))
        p = RectanglePresentation(GroundSpace(m), GroundSpace(n), rects)
        S = generated_bilattice(p)
        res.law("m_of(generated bilattice) = presented relation", m_of(S) == p.relation(), ctx.key(i, 1),
                {"rectangles": rects})


def _oracles(ctx: _Ctx, res: GroupResult) -> None:
    d = Relation.diagonal(2)
    res.law("[diag, diag] = diag", span_compose([d, d]) == d == oracle_span_product([d, d]), "pinned")
    rels = list(all_relations(2, 2))
    exhaustive = 0
    for a, b, c in product(rels, repeat=3):
        exhaustive += 1
        chain = [a, b, c]
        got, want = span_compose(chain), oracle_span_product(chain)
        res.law("span_compose = matrix-unit oracle (2-atom triples)", got == want,
                {"chain": [r.pairs for r in chain]}, {"got": got.pairs, "want": want.pairs})
    for i in range(ctx.count(100)):
        rng = ctx.rng(i)
        p = float(rng.uniform(0.15, 0.5))
        chain = [random_relation(rng, 5, 5, p, repair=False) for _ in range(int(rng.integers(2, 5)))]
        got, want = span_compose(chain), oracle_span_product(chain)
        res.law("span_compose = matrix-unit oracle (5-atom chains)", got == want, ctx.key(i))
    top = ctx.size(6)
    for i in range(ctx.count(200)):
        rng = ctx.rng(i, 1)
        E = _rand_relation(rng, top, top, repair=False)
        res.law("ref_hull = basis-vector oracle", ref_hull(E) == oracle_ref_hull(E, rng), ctx.key(i, 1))
    res.stats["exhaustive_triples"] = exhaustive


_RUNNERS: dict[str, Callable[[_Ctx, GroupResult], None]] = {
    "reflexivity": _reflexivity,
    "erdos": _erdos,
    "bilattice-closure": _bilattice_closure,
    "essential": _essential,
    "morita": _morita,
    "equivalence": _equivalence,
    "lemmas": _lemmas,
    "onto-homs": _onto_homs,
    "inverse-image": _inverse_image,
    "oracles": _oracles,
}


def run_suite(cfg: GeneratorConfig | None = None, selection: Iterable[str] | None = None,
              mutate: bool = False) -> SuiteReport:
    """Run the selected law groups (all of them when ``selection`` is None) in ``GROUPS`` order."""
    cfg = cfg if cfg is not None else GeneratorConfig()
    chosen = set(GROUPS if selection is None else selection)
    unknown = chosen - set(GROUPS)
    if unknown:
        raise ValueError(f"unknown law groups: {sorted(unknown)}")
    start = time.perf_counter()
    results = []
    for index, name in enumerate(GROUPS):
        if name not in chosen:
            continue
        res = GroupResult(name)
        t0 = time.perf_counter()
        _RUNNERS[name](_Ctx(cfg, index, mutate), res)
        res.elapsed = time.perf_counter() - t0
        results.append(res)
    return SuiteReport(cfg.seed, results, time.perf_counter() - start)
