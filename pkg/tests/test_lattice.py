import pytest
from hypothesis import given

from bilattice_morita import (
    CSL, GroundMismatch, LatticeHom, Proj, Relation, alg_of_lattice, check_csl_laws, csl_generate,
    hom_validate, join_irreducibles, lat_of_relation, lattice_iso_search, lattice_isomorphisms,
    SizeLimitExceeded, use_limits,
)
from bilattice_morita.harness.generators import _naive_csl_closure, all_csls
from bilattice_morita.harness.oracles import brute_alg, brute_lat, brute_lattice_isomorphic
from bilattice_morita.spaces import mask_of

from conftest import csls, relations


def sets(L):
    return sorted(sorted(p.members) for p in L.projections())


class TestProj:
    def test_operations(self):
        a, b = Proj.of(3, [0, 1]), Proj.of(3, [1, 2])
        assert (a | b).members == (0, 1, 2)
        assert (a & b).members == (1,)
        assert a.complement().members == (2,)
        assert Proj.of(3, [1]) <= a and not a <= b

    def test_mismatched_grounds(self):
        with pytest.raises(GroundMismatch):
            Proj.of(2, [0]) | Proj.of(3, [0])

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            Proj.of(2, [2])


class TestGenerate:
    def test_one_union_step(self):
        L = csl_generate(3, [[0], [1]])
        assert sets(L) == [[], [0], [0, 1], [0, 1, 2], [1]]

    def test_empty_generators(self):
        assert sets(csl_generate(2, [])) == [[], [0, 1]]

    def test_three_overlapping_pairs(self):
        # Closing {0,1}, {1,2}, {2,3} adds {1}, {2}, {0,1,2}, {1,2,3}, the empty set and the full set.
        gens = [mask_of(g) for g in ([0, 1], [1, 2], [2, 3])]
        L = csl_generate(4, gens)
        assert set(L.elements) == _naive_csl_closure({0, 15, *gens})
        assert len(L) == 9

    @given(csls())
    def test_matches_naive_closure(self, L):
        assert set(L.elements) == _naive_csl_closure(set(L.elements))
        assert check_csl_laws(L).ok

    def test_cap(self):
        with use_limits(elements=10):
            with pytest.raises(SizeLimitExceeded):
                csl_generate(5, [1 << i for i in range(5)])


class TestAlgLat:
    def test_alg_examples(self):
        assert alg_of_lattice(CSL.trivial(2)) == Relation.full(2, 2)
        chain = CSL.from_sets(2, [[], [0], [0, 1]])
        assert alg_of_lattice(chain).pairs == [(0, 0), (1, 0), (1, 1)]
        assert alg_of_lattice(CSL.powerset(2)) == Relation.diagonal(2)

    def test_lat_examples(self, e_tri):
        assert sets(lat_of_relation(e_tri)) == [[], [0], [0, 1]]
        assert len(lat_of_relation(Relation.diagonal(3))) == 8
        assert sets(lat_of_relation(Relation.full(2, 2))) == [[], [0, 1]]

    def test_lat_needs_endorelation(self):
        with pytest.raises(GroundMismatch):
            lat_of_relation(Relation.full(2, 3))

    @given(csls())
    def test_reflexive(self, L):
        A = alg_of_lattice(L)
        assert lat_of_relation(A).elements == L.elements
        assert A == brute_alg(L)

    @given(relations(max_m=4, max_n=4))
    def test_lat_agrees_with_brute_force(self, R):
        if R.source.size != R.target.size:
            return
        assert lat_of_relation(R).elements == brute_lat(R).elements

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_exhaustive(self, n):
        for L in all_csls(n):
            assert lat_of_relation(alg_of_lattice(L)).elements == L.elements


class TestJoinIrreducibles:
    def test_powerset(self):
        ji = join_irreducibles(CSL.powerset(2))
        assert ji.elements == (1, 2)
        assert not ji.leq(0, 1) and not ji.leq(1, 0)

    def test_chain(self):
        ji = join_irreducibles(CSL.from_sets(2, [[], [0], [0, 1]]))
        assert ji.elements == (1, 3)
        assert ji.leq(0, 1)

    def test_trivial(self):
        assert join_irreducibles(CSL.trivial(2)).elements == (3,)


class TestHoms:
    chain = CSL.from_sets(2, [[], [0], [0, 1]])

    def test_identity_valid(self):
        assert hom_validate(LatticeHom.identity(self.chain)).ok

    def test_order_collapsing(self):
        h = LatticeHom(self.chain, self.chain, {0: 0, 1: 3, 3: 3})
        assert hom_validate(h).ok

    def test_swap_invalid(self):
        L = CSL.trivial(2)
        rep = hom_validate(LatticeHom(L, L, {0: 3, 3: 0}))
        assert not rep.ok
        assert {o.law for o in rep.failures} >= {"empty to empty", "full to full"}


class TestIsoSearch:
    def test_identity(self):
        h = lattice_iso_search(CSL.powerset(2), CSL.powerset(2))
        assert h is not None and h.is_bijective()

    def test_chains(self):
        L1 = CSL.from_sets(2, [[], [0], [0, 1]])
        L2 = CSL.from_sets(2, [[], [1], [0, 1]])
        h = lattice_iso_search(L1, L2)
        assert h.table[1] == 2

    def test_cardinality(self):
        assert lattice_iso_search(CSL.powerset(2), CSL.powerset(3)) is None

    def test_complete_against_brute_force(self):
        # Every pair of CSLs on at most three atoms: found iff a brute-force bijection exists.
        lattices = [L for n in (1, 2, 3) for L in all_csls(n)]
        for L1 in lattices:
            for L2 in lattices:
                if len(L1) != len(L2):
                    continue
                found = lattice_iso_search(L1, L2) is not None
                assert found == brute_lattice_isomorphic(L1, L2)

    def test_counts_automorphisms(self):
        # The powerset of n atoms has n! automorphisms.
        assert len(list(lattice_isomorphisms(CSL.powerset(3), CSL.powerset(3)))) == 6

    def test_node_cap(self):
        with use_limits(nodes=1):
            with pytest.raises(SizeLimitExceeded):
                list(lattice_isomorphisms(CSL.powerset(3), CSL.powerset(3)))
