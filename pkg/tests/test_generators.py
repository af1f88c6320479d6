import numpy as np
import pytest
from hypothesis import given, strategies as st

from bilattice_morita import Relation, check_bilattice_laws, check_csl_laws, is_nondegenerate
from bilattice_morita.harness.generators import (
    PRNG_NAME, GeneratorConfig, all_bilattices, all_csls, all_relations, amplify, gen_relation, gen_relations,
    random_bilattice, random_csl, random_point_map,
)


def test_prng_is_pinned():
    assert PRNG_NAME == "numpy.PCG64"
    assert isinstance(GeneratorConfig().rng().bit_generator, np.random.PCG64)


@pytest.mark.parametrize("seed, pairs", [
    (0, [(0, 1), (0, 2), (1, 0), (2, 1)]),
    (7, [(0, 0), (1, 0), (1, 1), (1, 2), (2, 0)]),
    (12345, [(0, 0), (0, 1), (1, 1), (1, 2), (2, 1)]),
])
def test_pinned_relations(seed, pairs):
    cfg = GeneratorConfig(seed=seed, min_size=3, max_size=3, density=0.5)
    assert gen_relation(cfg).pairs == pairs


def test_full_density():
    cfg = GeneratorConfig(seed=3, min_size=4, max_size=4, density=1.0)
    assert gen_relation(cfg) == Relation.full(4, 4)


def test_single_atom_is_repaired():
    for seed in range(20):
        cfg = GeneratorConfig(seed=seed, min_size=1, max_size=1, density=0.01)
        assert gen_relation(cfg).pairs == [(0, 0)]


@given(st.integers(0, 2**64 - 1))
def test_deterministic_and_nondegenerate(seed):
    cfg = GeneratorConfig(seed=seed, count=5, density=0.2)
    a, b = list(gen_relations(cfg)), list(gen_relations(cfg))
    assert a == b
    assert all(is_nondegenerate(E) for E in a)


def test_config_validation():
    with pytest.raises(ValueError):
        GeneratorConfig(min_size=3, max_size=2)
    with pytest.raises(ValueError):
        GeneratorConfig(density=0)


def test_random_structures_are_valid():
    rng = np.random.default_rng(1)
    for _ in range(50):
        assert check_csl_laws(random_csl(rng, 4)).ok
        assert check_bilattice_laws(random_bilattice(rng, 3, 2)).ok


def test_surjective_point_maps():
    rng = np.random.default_rng(2)
    for _ in range(50):
        assert random_point_map(rng, 5, 3, surjective=True).is_surjective()
    with pytest.raises(ValueError):
        random_point_map(rng, 2, 3, surjective=True)


def test_amplify_is_a_pullback():
    rng = np.random.default_rng(4)
    E = Relation.from_pairs(2, 2, [(0, 0), (1, 0), (1, 1)])
    E2, th, rh = amplify(rng, E)
    assert all(((th(x), rh(y)) in E) == ((x, y) in E2) for x in range(E2.source.size) for y in range(E2.target.size))


def test_enumeration_counts():
    # Topologies on 1, 2 and 3 points.
    assert [len(all_csls(n)) for n in (1, 2, 3)] == [1, 4, 29]
    assert len(list(all_relations(2, 2))) == 16
    assert len(all_bilattices(1, 1)) == 2
