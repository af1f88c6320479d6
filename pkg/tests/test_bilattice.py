import pytest
from hypothesis import given

from bilattice_morita import (
    CSL, Bilattice, BilatticeHom, DegenerateRelation, LatticeHom, Relation, as_csl, bil_of,
    bilattice_generate, bilattice_isomorphisms, check_bil_intersection, check_bilattice_laws,
    essential_bilattice, essential_of_csl_algebra, hom_check, is_onto, iso_search, m_of, slices,
)
from bilattice_morita.harness.generators import _naive_bilattice_closure, all_bilattices
from bilattice_morita.harness.oracles import brute_bilattice_isomorphic
from bilattice_morita.spaces import mask_of

from conftest import bilattices, relations

BASE_2x2 = {(0, 0), (3, 0), (0, 3)}
DISJOINT_2x2 = {(P, Q) for P in range(4) for Q in range(4) if not P & Q}


def pairs(*items):
    return {(mask_of(P), mask_of(Q)) for P, Q in items}


class TestGenerate:
    def test_single_generator(self):
        # Mixing ({0},{1}) with the base pairs also yields ({0}, {}) and ({}, {1}).
        S = bilattice_generate(2, 2, [([0], [1])])
        assert set(S.pairs) == BASE_2x2 | pairs(([0], [1]), ([0], []), ([], [1]))

    def test_no_generators(self):
        assert set(bilattice_generate(2, 2).pairs) == BASE_2x2

    def test_two_diagonal_generators(self):
        S = bilattice_generate(2, 2, [([0], [0]), ([1], [1])])
        assert set(S.pairs) == _naive_bilattice_closure(BASE_2x2 | pairs(([0], [0]), ([1], [1])))
        assert len(S) == 9

    @given(bilattices())
    def test_matches_naive_closure(self, S):
        assert set(S.pairs) == _naive_bilattice_closure(set(S.pairs))
        assert check_bilattice_laws(S).ok

    def test_encoding_contains_right_block(self):
        L = as_csl(bilattice_generate(2, 3))
        assert 0b11100 in L


class TestMofsAndBil:
    def test_m_of(self):
        assert m_of(bilattice_generate(2, 2)) == Relation.full(2, 2)
        assert m_of(bilattice_generate(2, 2, [([0], [1])])).pairs == [(0, 0), (1, 0), (1, 1)]
        S = Bilattice.from_pairs(2, 2, DISJOINT_2x2)
        assert m_of(S) == Relation.diagonal(2)

    def test_bil_of(self, diag2):
        assert set(bil_of(diag2).pairs) == DISJOINT_2x2
        # Only pairs with an empty side miss the full pattern.
        assert set(bil_of(Relation.full(2, 2)).pairs) == {(P, 0) for P in range(4)} | {(0, Q) for Q in range(4)}
        assert len(bil_of(Relation.empty(1, 1))) == 4

    @given(relations(max_m=3, max_n=3))
    def test_bil_of_is_the_largest(self, E):
        S = bil_of(E)
        assert check_bilattice_laws(S).ok
        assert m_of(S) == E

    @given(bilattices(max_l=4, max_r=4))
    def test_recovered_from_bimodule(self, S):
        assert check_bil_intersection(S).ok


class TestSlices:
    def test_examples(self, diag2):
        l, r = slices(bilattice_generate(2, 2))
        assert l.elements == r.elements == (0, 3)
        l, r = slices(bilattice_generate(2, 2, [([0], [1])]))
        assert l.elements == (0, 1, 3) and r.elements == (0, 2, 3)
        l, r = slices(bil_of(diag2))
        assert l == r == CSL.powerset(2)


class TestEssential:
    def test_diag(self, diag2):
        assert set(essential_bilattice(diag2).pairs) == DISJOINT_2x2

    def test_full(self):
        assert set(essential_bilattice(Relation.full(2, 2)).pairs) == BASE_2x2

    def test_a3(self, a3):
        S = essential_bilattice(a3)
        assert len(S) == 9
        assert slices(S)[0].elements == (0, 0b011, 0b100, 0b111)

    def test_degenerate(self):
        with pytest.raises(DegenerateRelation):
            essential_bilattice(Relation.from_pairs(2, 2, [(0, 0)]))

    @given(relations(max_m=4, max_n=4, nondegenerate=True))
    def test_presents_e(self, E):
        S = essential_bilattice(E)
        assert m_of(S) == E
        assert check_bilattice_laws(S).ok
        assert set(S.pairs) <= set(bil_of(E).pairs)

    def test_minimal_among_all_small_bilattices(self):
        # Exhaustive on 2x2: every bilattice presenting E contains the essential one.
        for S in all_bilattices(2, 2):
            E = m_of(S)
            if all(E.rows) and E.columns and all(E.columns):
                assert set(essential_bilattice(E).pairs) <= set(S.pairs)


class TestCslAlgebra:
    def test_examples(self):
        assert set(essential_of_csl_algebra(CSL.trivial(2)).pairs) == BASE_2x2
        S = essential_of_csl_algebra(CSL.from_sets(2, [[], [0], [0, 1]]))
        assert (1, 2) in S.pairs
        assert set(essential_of_csl_algebra(CSL.powerset(2)).pairs) == DISJOINT_2x2


def diag_a3_hom(diag2, a3):
    S1, S2 = essential_bilattice(diag2), essential_bilattice(a3)
    (l1, r1), (l2, r2) = slices(S1), slices(S2)
    phi = LatticeHom(l1, l2, {0: 0, 1: 0b011, 2: 0b100, 3: 0b111})
    return BilatticeHom(phi, LatticeHom(r1, r2, {q: q for q in r1.elements}), S1, S2)


class TestHoms:
    def test_identity(self, diag2):
        S = essential_bilattice(diag2)
        h = BilatticeHom.identity(S)
        assert hom_check(h).ok and is_onto(h)

    def test_diag_to_a3(self, diag2, a3):
        h = diag_a3_hom(diag2, a3)
        assert hom_check(h).ok and is_onto(h)
        assert hom_check(h.inverse()).ok

    def test_incompatible_image(self, diag2):
        S = essential_bilattice(diag2)
        l, r = slices(S)
        phi = LatticeHom(l, l, {0: 0, 1: 3, 2: 2, 3: 3})
        psi = LatticeHom(r, r, {0: 0, 1: 1, 2: 3, 3: 3})
        rep = hom_check(BilatticeHom(phi, psi, S, S))
        assert not rep.ok

    def test_not_onto(self, diag2):
        small = bilattice_generate(2, 2)
        big = essential_bilattice(diag2)
        l, r = slices(small)
        L, R = slices(big)
        h = BilatticeHom(LatticeHom(l, L, {0: 0, 3: 3}), LatticeHom(r, R, {0: 0, 3: 3}), small, big)
        assert hom_check(h).ok and not is_onto(h)


class TestIso:
    def test_diag_a3(self, diag2, a3):
        h = iso_search(essential_bilattice(diag2), essential_bilattice(a3))
        assert dict(h.phi.table) == {0: 0, 1: 0b011, 2: 0b100, 3: 0b111}
        assert all(k == v for k, v in h.psi.table.items())

    def test_cardinality(self, diag2):
        assert iso_search(essential_bilattice(diag2), essential_bilattice(Relation.diagonal(3))) is None

    @given(bilattices())
    def test_self(self, S):
        h = iso_search(S, S)
        assert h is not None and h.is_bijective()

    def test_complete_against_brute_force(self):
        family = [S for nl in (1, 2) for nr in (1, 2) for S in all_bilattices(nl, nr)]
        for S1 in family:
            for S2 in family:
                if len(S1) == len(S2):
                    assert (iso_search(S1, S2) is not None) == brute_bilattice_isomorphic(S1, S2)

    def test_every_iso_is_valid(self, diag2):
        S = essential_bilattice(diag2)
        isos = list(bilattice_isomorphisms(S, S))
        # Swapping the two atoms on both sides at once is the only nontrivial symmetry.
        assert len(isos) == 2
        for h in isos:
            assert hom_check(h).ok and hom_check(h.inverse()).ok
