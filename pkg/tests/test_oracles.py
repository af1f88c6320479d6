import numpy as np

from bilattice_morita import Relation, essential_bilattice
from bilattice_morita.harness.oracles import (
    oracle_minimality_probe, oracle_ref_hull, oracle_span_product,
)
from bilattice_morita.harness.generators import random_relation


def test_diag_chain():
    d = Relation.diagonal(2)
    assert oracle_span_product([d, d]) == d


def test_product_oracle_finds_paths():
    a = Relation.from_pairs(2, 3, [(0, 2)])
    b = Relation.from_pairs(3, 2, [(2, 1), (1, 0)])
    assert oracle_span_product([a, b]).pairs == [(0, 1)]


def test_ref_hull_oracle_is_identity_on_patterns():
    rng = np.random.default_rng(0)
    for _ in range(20):
        E = random_relation(rng, 4, 3, 0.5, repair=False)
        assert oracle_ref_hull(E, rng) == E


def test_minimality_probe_diag():
    rep = oracle_minimality_probe(Relation.diagonal(2))
    assert rep.ok and "exhaustive" in rep.outcomes[0].law
    assert len(essential_bilattice(Relation.diagonal(2))) == 9


def test_minimality_probe_full():
    assert oracle_minimality_probe(Relation.full(3, 3), trials=20, seed=1).ok


def test_minimality_probe_random():
    rng = np.random.default_rng(5)
    for i in range(5):
        E = random_relation(rng, 4, 5, 0.5)
        rep = oracle_minimality_probe(E, trials=30, seed=i)
        assert rep.ok, rep.render()
