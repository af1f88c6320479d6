import pytest
from hypothesis import given, strategies as st

from bilattice_morita import (
    BilatticeHom, PointMap, RectanglePresentation, Relation, bilattice_generate, check_inverse_image,
    check_nonzero_transfer, check_onto_hom_laws, essential_bilattice, generated_bilattice, hom_check,
    hom_from_point_maps, is_onto, iso_search, m_of, pullback, rectangle_presentation, slices,
)
from bilattice_morita.spaces import GroundSpace

from conftest import relations

COLLAPSE = PointMap.of(3, 2, [0, 0, 1])


@st.composite
def pullback_inputs(draw, max_size=4):
    E1 = draw(relations(max_m=max_size, max_n=max_size))
    M = draw(st.integers(1, max_size))
    N = draw(st.integers(1, max_size))
    th = draw(st.lists(st.integers(0, E1.source.size - 1), min_size=M, max_size=M))
    rh = draw(st.lists(st.integers(0, E1.target.size - 1), min_size=N, max_size=N))
    return PointMap.of(M, E1.source.size, th), PointMap.of(N, E1.target.size, rh), E1


class TestPointMap:
    def test_preimage(self):
        assert COLLAPSE.preimage(0b01) == 0b011
        assert COLLAPSE.preimage(0b10) == 0b100
        assert COLLAPSE.is_surjective()

    def test_bad_table(self):
        with pytest.raises(ValueError):
            PointMap.of(2, 2, [0, 2])


class TestPullback:
    def test_collapse(self, diag2, a3):
        assert pullback(COLLAPSE, PointMap.identity(2), diag2).pairs == a3.pairs

    def test_identity(self, e_tri):
        assert pullback(PointMap.identity(2), PointMap.identity(2), e_tri) == e_tri

    def test_constant_maps(self, diag2):
        E = pullback(PointMap.of(3, 2, [1, 1, 1]), PointMap.of(4, 2, [1] * 4), diag2)
        assert E == Relation.full(3, 4)


class TestPresentations:
    def test_rectangles(self, diag2, e_tri):
        assert rectangle_presentation(Relation.full(2, 2)).rectangles == ()
        assert rectangle_presentation(diag2).rectangles == ((0b01, 0b10), (0b10, 0b01))
        assert rectangle_presentation(e_tri).rectangles == ((0b01, 0b10),)

    def test_generated_e_tri(self, e_tri):
        S = generated_bilattice(rectangle_presentation(e_tri))
        # The rectangle ({0},{1}) plus its mixes with the base pairs.
        assert len(S) == 6
        assert m_of(S) == e_tri

    def test_empty_presentation(self):
        S = generated_bilattice(rectangle_presentation(Relation.full(2, 2)))
        assert set(S.pairs) == {(0, 0), (3, 0), (0, 3)}
        assert m_of(S) == Relation.full(2, 2)

    def test_generated_diag(self, diag2):
        assert m_of(generated_bilattice(rectangle_presentation(diag2))) == diag2

    @given(st.integers(1, 4), st.integers(1, 4), st.data())
    def test_random_presentations(self, m, n, data):
        rects = data.draw(st.lists(st.tuples(st.integers(0, (1 << m) - 1), st.integers(0, (1 << n) - 1)), max_size=5))
        p = RectanglePresentation(GroundSpace(m), GroundSpace(n), tuple(rects))
        assert m_of(generated_bilattice(p)) == p.relation()


class TestHomFromPointMaps:
    def test_identity(self, e_tri):
        S = essential_bilattice(e_tri)
        h = hom_from_point_maps(PointMap.identity(2), PointMap.identity(2), S)
        assert h == BilatticeHom.identity(S)

    def test_collapse_is_the_golden_iso(self, diag2, a3):
        S1 = essential_bilattice(diag2)
        h = hom_from_point_maps(COLLAPSE, PointMap.identity(2), S1)
        assert h.target == essential_bilattice(a3)
        assert h.phi.table == iso_search(S1, h.target).phi.table

    def test_constant_maps(self, diag2):
        S1 = essential_bilattice(diag2)
        h = hom_from_point_maps(PointMap.of(3, 2, [0, 0, 0]), PointMap.of(2, 2, [1, 1]), S1)
        l, r = slices(h.target)
        assert set(l.elements) <= {0, 7} and set(r.elements) <= {0, 3}
        assert hom_check(h).ok and is_onto(h)

    @given(pullback_inputs())
    def test_onto_laws_for_non_injective_maps(self, args):
        th, rh, E1 = args
        S1 = generated_bilattice(rectangle_presentation(E1))
        h = hom_from_point_maps(th, rh, S1)
        assert check_onto_hom_laws(S1, h.target, h).ok


class TestChecks:
    def test_collapse(self, diag2):
        assert check_inverse_image(COLLAPSE, PointMap.identity(2), diag2).ok
        assert check_nonzero_transfer(COLLAPSE, PointMap.identity(2), diag2).ok

    def test_identity(self, e_tri):
        assert check_inverse_image(PointMap.identity(2), PointMap.identity(2), e_tri).ok

    def test_empty_relation(self):
        rep = check_nonzero_transfer(PointMap.identity(2), PointMap.identity(2), Relation.empty(2, 2))
        assert rep.ok and "pullback empty" in rep.outcomes[0].detail

    @given(pullback_inputs(max_size=5))
    def test_random(self, args):
        th, rh, E1 = args
        assert check_inverse_image(th, rh, E1).ok
        assert check_nonzero_transfer(th, rh, E1).ok
        for x, y in pullback(th, rh, E1).pairs:
            assert (th(x), rh(y)) in E1
