"""Classification, invariants, symmetry groups, covering data, and the
mirror potential tables for the three curve families."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from curvemirror import singularity_core as core
from curvemirror.polyring import SparsePoly

pq_st = st.tuples(st.integers(2, 12), st.integers(2, 12))
family_builder = {
    core.Family.FERMAT: core.fermat,
    core.Family.CHAIN: core.chain,
    core.Family.LOOP: core.loop,
}
poly_st = st.tuples(st.sampled_from(sorted(family_builder, key=lambda f: f.value)),
                    pq_st).map(lambda t: family_builder[t[0]](*t[1]))


class TestClassify:
    def test_family_templates(self):
        assert core.classify([[5, 0], [0, 2]]) == core.fermat(5, 2)
        assert core.classify([[2, 0], [1, 4]]) == core.chain(2, 4)
        assert core.classify([[2, 1], [1, 3]]) == core.loop(2, 3)

    def test_determinant_zero(self):
        with pytest.raises(core.NotInvertible):
            core.classify([[1, 1], [1, 1]])

    def test_no_template(self):
        with pytest.raises(core.NotCurveInvertible):
            core.classify([[2, 2], [1, 3]])
        with pytest.raises(core.NotCurveInvertible):
            core.classify([[1, 0], [0, 5]])  # p = 1 below range

    def test_regenerates_matrix(self):
        for matrix in ([[5, 0], [0, 2]], [[0, 2], [5, 0]],
                       [[2, 0], [1, 4]], [[1, 4], [2, 0]],
                       [[2, 1], [0, 4]], [[3, 1], [1, 2]],
                       [[1, 2], [3, 1]]):
            got = core.classify(matrix).exponent_matrix
            assert [list(row) for row in got] == matrix

    def test_swapped_variable_forms(self):
        # y^4 + x^2*y is the transposed-chain orientation of C(2,4)
        w = core.classify([[0, 4], [2, 1]])
        assert w.family is core.Family.CHAIN
        assert w.is_transposed_chain
        can, swapped = core.canonical_form(w)
        assert swapped and can == core.chain(4, 2)


class TestTranspose:
    def test_fermat_loop_fixed(self):
        assert core.transpose(core.fermat(3, 4)) == core.fermat(3, 4)
        assert core.transpose(core.loop(2, 3)) == core.loop(2, 3)

    def test_chain_transpose(self):
        t = core.transpose(core.chain(2, 4))
        assert t.is_transposed_chain
        assert str(t.to_poly()) == "y^4 + x^2*y"
        assert (t.p, t.q) == (2, 4)

    @given(poly_st)
    @settings(max_examples=60)
    def test_involution_and_matrix(self, w):
        t = core.transpose(w)
        a = w.exponent_matrix
        at = t.exponent_matrix
        assert at == ((a[0][0], a[1][0]), (a[0][1], a[1][1]))
        assert core.transpose(t) == w


class TestSymmetryAndWeights:
    def test_spec_values(self):
        g, ws, mu = core.symmetry_and_weights(core.fermat(5, 2))
        assert g.cyclic_orders == (5, 2)
        assert (ws.w1, ws.w2, ws.h) == (2, 5, 10)
        assert mu == 4

        g, ws, mu = core.symmetry_and_weights(core.chain(2, 4))
        assert g.cyclic_orders == (8,)
        assert (ws.w1, ws.w2, ws.h) == (4, 1, 8)
        assert mu == 7

        g, _, mu = core.symmetry_and_weights(core.loop(2, 2))
        assert g.cyclic_orders == (3,)
        assert mu == 4

    @given(poly_st)
    @settings(max_examples=60)
    def test_generators_fix_w_and_group_order(self, w):
        g, ws, mu = core.symmetry_and_weights(w)
        for i in range(g.rank):
            gen = tuple(1 if j == i else 0 for j in range(g.rank))
            assert g.fixes(gen, w.monomials)
        a = w.exponent_matrix
        det = abs(a[0][0] * a[1][1] - a[0][1] * a[1][0])
        assert g.order == det
        for (ex, ey) in w.monomials:
            assert ex * ws.w1 + ey * ws.w2 == ws.h

    def test_milnor_numbers(self):
        assert core.symmetry_and_weights(core.fermat(3, 3))[2] == 4
        assert core.symmetry_and_weights(core.chain(3, 2))[2] == 4
        assert core.symmetry_and_weights(core.loop(3, 3))[2] == 9

    def test_transposed_chain_weights_swap(self):
        # x^2*y + y^4 is the D5 singularity: mu = 5, weights (3,2;8)
        _, ws, mu = core.symmetry_and_weights(
            core.transpose(core.chain(2, 4)))
        assert (ws.w1, ws.w2, ws.h) == (3, 2, 8)
        assert mu == 5


class TestFiberInvariants:
    def test_spec_values(self):
        fi = core.fiber_invariants(core.fermat(5, 2))
        assert (fi.d, fi.k, fi.g, fi.abc) == (1, 1, 2, (5, 2, 10))
        assert fi.puncture_flags == frozenset({2})

        fi = core.fiber_invariants(core.chain(2, 4))
        assert (fi.d, fi.k, fi.g, fi.abc) == (1, 2, 3, (8, 4, 8))
        assert fi.puncture_flags == frozenset({0, 2})

        fi = core.fiber_invariants(core.loop(2, 2))
        assert (fi.d, fi.k, fi.g, fi.abc) == (1, 3, 1, (3, 3, 3))
        assert fi.puncture_flags == frozenset({0, 1, 2})

    def test_sphere_case(self):
        fi = core.fiber_invariants(core.fermat(2, 2))
        assert fi.g == 0 and fi.euler_compact() == 2

    @given(poly_st)
    @settings(max_examples=80)
    def test_euler_identities(self, w):
        fi = core.fiber_invariants(w)
        g, _, mu = core.symmetry_and_weights(w)
        assert 2 - 2 * fi.g - fi.k == 1 - mu
        a, b, c = fi.abc
        assert g.order * (Fraction(1, a) + Fraction(1, b)
                          + Fraction(1, c) - 1) == 2 - 2 * fi.g


class TestCoveringHom:
    def test_spec_values(self):
        assert core.covering_homomorphism(core.fermat(5, 2)).images == (
            (1, 0), (0, 1), (4, 1))
        assert core.covering_homomorphism(core.chain(3, 2)).images == (
            (1,), (3,), (2,))
        assert core.covering_homomorphism(core.loop(2, 2)).images == (
            (1,), (1,), (1,))

    @given(poly_st)
    @settings(max_examples=60)
    def test_relations_and_orders(self, w):
        hom = core.covering_homomorphism(w)
        fi = core.fiber_invariants(w)
        for idx, order in zip((1, 2, 3), fi.abc):
            img = hom.image_of(idx)
            assert hom.group.element_order(img) == order

    @given(poly_st)
    @settings(max_examples=40)
    def test_gamma_class_components(self, w):
        comps = core.gamma_class(w)
        hom = core.covering_homomorphism(w)
        g_w = core.monodromy_element(w)
        for coeff, idx in comps:
            assert coeff < 0
            assert hom.group.scale(coeff, hom.image_of(idx)) == g_w

    def test_gamma_class_spec_values(self):
        assert core.gamma_class(core.fermat(3, 4)) == ((-1, 3),)
        assert core.gamma_class(core.chain(4, 2)) == ((-3, 1), (-1, 3))
        assert core.gamma_class(core.loop(2, 2)) == (
            (-1, 1), (-1, 2), (-1, 3))


class TestMirrorData:
    def test_family_tables(self):
        md = core.mirror_data(core.fermat(3, 4))
        assert md.w_l == SparsePoly.parse("x^3 + y^4 + x*y*z")
        assert md.g_poly == SparsePoly.parse("z")

        md = core.mirror_data(core.chain(2, 4))
        assert md.w_l == SparsePoly.parse("y^4 + x*y*z")
        assert md.g_poly == SparsePoly.parse("z - x")
        assert md.w_t == SparsePoly.parse("x^2*y + y^4")

        md = core.mirror_data(core.loop(3, 2))
        assert md.w_l == SparsePoly.parse("x*y*z")
        assert md.g_poly == SparsePoly.parse("z - x^2 - y")

    @given(poly_st)
    @settings(max_examples=60)
    def test_identity(self, w):
        md = core.mirror_data(w)
        xy = SparsePoly.parse("x*y")
        assert md.w_l - xy * md.g_poly == md.w_t
        assert md.w_t == core.transpose(w).to_poly()

    def test_transposed_chain_input(self):
        md = core.mirror_data(core.transpose(core.chain(2, 4)))
        assert md.w_t == SparsePoly.parse("x^2 + x*y^4")
        xy = SparsePoly.parse("x*y")
        assert md.w_l - xy * md.g_poly == md.w_t


class TestMonodromy:
    def test_printed_monodromy_elements(self):
        assert core.monodromy_element(core.fermat(4, 6)) == (1, 1)
        p, q = 3, 2
        assert core.monodromy_element(core.chain(p, q)) == (
            (1 - p) % (p * q),)
        p, q = 3, 4
        assert core.monodromy_element(core.loop(p, q)) == (
            (1 - p) % (p * q - 1),)
