"""Tests for matrix factorization algebra."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvemirror.mf_algebra import (
    EquationFails,
    MatrixFactorization,
    MFHomotopy,
    MFMorphism,
    NoPositiveGrading,
    NonHomogeneousEntry,
    NotAFactorization,
    NotClosed,
    PotentialMismatch,
    cone,
    compose,
    direct_sum,
    graded_hom_cohomology,
    identity_morphism,
    make_mf,
    restrict,
    scalar_morphism,
    translate,
    unit_pivot_reduce,
    verify_chain_data,
    zero_object,
)
from curvemirror.polyring import RingMatrix, SparsePoly


def mf(phi_rows, psi_rows, **kw):
    return make_mf(phi_rows, psi_rows, **kw)


class TestMakeMF:
    def test_one_by_one(self):
        m = mf([["x"]], [["y*z"]])
        assert str(m.potential) == "x*y*z"
        assert m.size == 1

    def test_two_by_two_selfpaired(self):
        phi = [["y", "x^2"], ["x^2", "-y"]]
        m = mf(phi, phi)
        assert str(m.potential) == "x^4 + y^2"

    def test_one_by_one_always_factors_its_product(self):
        m = mf([["x"]], [["y"]])
        assert str(m.potential) == "x*y"

    def test_rejects_off_diagonal(self):
        with pytest.raises(NotAFactorization):
            mf([["x", "1"], ["0", "y"]], [["y", "0"], ["0", "x"]])

    def test_rejects_shape_mismatch(self):
        with pytest.raises(NotAFactorization):
            mf([["x", "y"]], [["x"], ["y"]])

    def test_explicit_potential_checked(self):
        with pytest.raises(NotAFactorization):
            mf([["x"]], [["y"]], potential="x*y^2")

    def test_labels_default_and_custom(self):
        m = mf([["x"]], [["y"]], even_labels=["p"], odd_labels=["q"])
        assert m.even_labels == ("p",)
        assert m.odd_labels == ("q",)
        m2 = mf([["x"]], [["y"]])
        assert m2.even_labels == ("e1",)
        assert m2.odd_labels == ("o1",)


class TestCategoryOperations:
    def setup_method(self):
        self.m1 = mf([["y", "x"], ["x^4", "-y"]],
                     [["y", "x"], ["x^4", "-y"]])

    def test_translate_swaps(self):
        t = translate(self.m1)
        assert t.phi == self.m1.psi
        assert t.psi == self.m1.phi
        assert translate(t) == self.m1
        assert t.even_labels == self.m1.odd_labels

    def test_direct_sum_blocks(self):
        s = direct_sum(self.m1, self.m1)
        assert s.size == 4
        assert s.phi.entry(2, 2) == SparsePoly.var("y")
        assert s.phi.entry(0, 2) == SparsePoly.zero()

    def test_direct_sum_potential_mismatch(self):
        other = mf([["x"]], [["y"]])
        with pytest.raises(PotentialMismatch):
            direct_sum(self.m1, other)

    def test_direct_sum_with_zero_object(self):
        z = zero_object(self.m1.potential)
        assert direct_sum(self.m1, z) == self.m1
        assert direct_sum(z, self.m1) == self.m1

    def test_restrict(self):
        m = mf([["x"]], [["x^2 + y*z"]])
        r = restrict(m, {"z": "0"})
        assert str(r.potential) == "x^3"
        r2 = restrict(m, {"z": SparsePoly.parse("x")})
        assert str(r2.potential) == "x^3 + x^2*y"

    def test_restrict_invalid_result_still_factorizes(self):
        m = mf([["x + y"]], [["x - y"]])
        r = restrict(m, {"y": "x"})
        assert str(r.potential) == "0"
        assert r.size == 1


class TestMorphisms:
    def setup_method(self):
        phi = [["y", "x"], ["x^4", "-y"]]
        self.m = mf(phi, phi)

    def test_identity_closed(self):
        verify_chain_data("closed_morphism",
                          morphism=identity_morphism(self.m))

    def test_scalar_closed(self):
        verify_chain_data("closed_morphism",
                          morphism=scalar_morphism(self.m, "x*y"))

    def test_non_closed_detected(self):
        bad = MFMorphism(self.m, self.m, 0,
                         [["1", "0"], ["0", "0"]],
                         [["0", "0"], ["0", "0"]])
        assert not bad.is_closed()
        with pytest.raises(EquationFails):
            verify_chain_data("closed_morphism", morphism=bad)

    def test_odd_morphism_gamma(self):
        # gamma anticommutes with phi, so it is closed of odd parity.
        gamma = [["0", "1"], ["-x^3", "0"]]
        g = MFMorphism(self.m, self.m, 1, gamma, gamma)
        verify_chain_data("closed_morphism", morphism=g)

    def test_compose_parity(self):
        gamma = [["0", "1"], ["-x^3", "0"]]
        g = MFMorphism(self.m, self.m, 1, gamma, gamma)
        gg = compose(g, g)
        assert gg.parity == 0
        verify_chain_data("closed_morphism", morphism=gg)

    def test_iso_witness(self):
        swap = [["0", "1"], ["1", "0"]]
        phi = [["y", "x"], ["x^4", "-y"]]
        target = mf([["-y", "x^4"], ["x", "y"]],
                    [["-y", "x^4"], ["x", "y"]])
        fwd = MFMorphism(self.m, target, 0, swap, swap)
        back = MFMorphism(target, self.m, 0, swap, swap)
        verify_chain_data("iso_witness", forward=fwd, inverse=back)

    def test_iso_witness_fails_for_non_inverse(self):
        fwd = scalar_morphism(self.m, "x")
        with pytest.raises(EquationFails):
            verify_chain_data("iso_witness", forward=fwd, inverse=fwd)


class TestCone:
    def setup_method(self):
        phi = [["y", "x"], ["x^4", "-y"]]
        self.m = mf(phi, phi)

    def test_cone_of_zero_is_sum_with_shift(self):
        zero = MFMorphism(self.m, self.m, 0,
                          RingMatrix.zeros(2, 2), RingMatrix.zeros(2, 2))
        c = cone(zero)
        expected = direct_sum(self.m, translate(self.m))
        assert c.phi == expected.phi
        assert c.psi == expected.psi

    def test_cone_rejects_non_closed(self):
        bad = MFMorphism(self.m, self.m, 0,
                         [["1", "0"], ["0", "0"]],
                         RingMatrix.zeros(2, 2))
        with pytest.raises(NotClosed):
            cone(bad)

    def test_even_cone_is_factorization(self):
        c = cone(scalar_morphism(self.m, "y"))
        assert c.size == 4
        assert c.potential == self.m.potential

    def test_odd_cone_reduces_to_neighbor(self):
        # Cone over the odd endomorphism gamma of the first A-type
        # object splits off two trivial summands and leaves the second
        # object of the chain, up to signed permutation.
        gamma = [["0", "1"], ["-x^3", "0"]]
        g = MFMorphism(self.m, self.m, 1, gamma, gamma)
        c = cone(g)
        assert c.size == 4
        reduced, log = unit_pivot_reduce(c)
        assert reduced.size == 2
        assert len(log) == 2
        entries = sorted(str(p) for row in reduced.phi.rows for p in row
                         if p)
        unsigned = sorted(s.lstrip("-") for s in entries)
        assert unsigned == ["x^2", "x^3", "y", "y"]


class TestUnitPivotReduce:
    def test_trivial_to_rank_zero(self):
        m = mf([["1"]], [["x^4 + y^2"]])
        reduced, log = unit_pivot_reduce(m)
        assert reduced.size == 0
        assert reduced.is_zero_object()
        assert len(log) == 1
        assert log[0].factor == "phi"

    def test_psi_side_unit(self):
        m = mf([["x^4 + y^2"]], [["1"]])
        reduced, log = unit_pivot_reduce(m)
        assert reduced.size == 0
        assert log[0].factor == "psi"

    def test_strips_trivial_summand(self):
        phi = [["y", "x"], ["x^4", "-y"]]
        base = mf(phi, phi)
        padded = direct_sum(base, mf([["1"]], [["x^5 + y^2"]]))
        reduced, log = unit_pivot_reduce(padded)
        assert reduced.size == 2
        assert reduced.phi == base.phi
        assert reduced.psi == base.psi
        assert len(log) == 1

    def test_scaled_unit(self):
        m = mf([["-3"]], [["x*y"]])
        reduced, log = unit_pivot_reduce(m)
        assert reduced.size == 0
        assert log[0].unit == "-3"

    def test_idempotent(self):
        phi = [["y", "x"], ["x^4", "-y"]]
        base = mf(phi, phi)
        reduced, log = unit_pivot_reduce(base)
        assert reduced == base
        assert log == ()

    def test_labels_follow_reduction(self):
        base = mf([["y", "x"], ["x^4", "-y"]],
                  [["y", "x"], ["x^4", "-y"]],
                  even_labels=["a", "b"], odd_labels=["c", "d"])
        padded = direct_sum(
            base, mf([["1"]], [["x^5 + y^2"]],
                     even_labels=["junk_e"], odd_labels=["junk_o"]))
        reduced, _ = unit_pivot_reduce(padded)
        assert reduced.even_labels == ("a", "b")
        assert reduced.odd_labels == ("c", "d")


class TestHomotopyGolden:
    """A scalar endomorphism null-homotopic on a rank-3 object."""

    def setup_method(self):
        self.m = mf(
            [["-y^3", "x^2", "x*y^2"],
             ["x*y", "y^2", "-x^2"],
             ["x^2", "x*y", "y^3"]],
            [["-y", "0", "x"],
             ["x", "y^2", "0"],
             ["0", "-x", "y"]])
        assert self.m.potential == SparsePoly.parse("x^3 + y^4")

    def test_scalar_square_null_homotopic(self):
        f = scalar_morphism(self.m, "y^2")
        h = MFHomotopy(
            [["0", "0", "0"], ["0", "1", "0"], ["0", "0", "0"]],
            [["-y", "0", "x"], ["0", "0", "0"], ["0", "0", "y"]])
        report = verify_chain_data("homotopy", morphism=f, homotopy=h)
        assert report.kind == "homotopy"
        assert len(report.checked) == 4

    def test_wrong_homotopy_rejected(self):
        f = scalar_morphism(self.m, "y^2")
        h = MFHomotopy(RingMatrix.zeros(3, 3), RingMatrix.zeros(3, 3))
        with pytest.raises(EquationFails):
            verify_chain_data("homotopy", morphism=f, homotopy=h)


class TestGradedHomCohomology:
    def test_chain_endomorphisms(self):
        # (y, y^3 + x*z) factors y^4 + x*y*z; its endomorphism
        # cohomology is the quotient by both factors, even part only.
        m = mf([["y"]], [["y^3 + x*z"]])
        table = graded_hom_cohomology(m, m, (2, 1, 1), 20)
        assert table.potential_degree == 4
        for d in range(21):
            monoms = {(a, 0) for a in range(11) if 2 * a == d}
            monoms |= {(0, b) for b in range(21) if b == d}
            assert table.even[d] == len(monoms), f"degree {d}"
            assert table.odd[d] == 0, f"degree {d}"

    def test_product_cross_terms(self):
        # Between (x, yz) and (y, xz) inside xyz: even part dies, odd
        # part is a rank-one free module over the third variable.
        src = mf([["x"]], [["y*z"]])
        tgt = mf([["y"]], [["x*z"]])
        table = graded_hom_cohomology(src, tgt, (1, 1, 1), 12)
        for d in range(13):
            assert table.even[d] == 0
            assert table.odd[d] == 1

    def test_product_diagonal(self):
        m = mf([["x"]], [["y*z"]])
        table = graded_hom_cohomology(m, m, (1, 1, 1), 12)
        for d in range(13):
            assert table.even[d] == (1 if d == 0 else 2)
            assert table.odd[d] == 0

    def test_rank_two_koszul_endomorphisms(self):
        # Endomorphisms of the diagonal object for x^3 + y^3 + x*y*z:
        # a free rank-4 module over the z-line, two generators of each
        # parity.
        m = mf([["x", "y"], ["-y^2", "x^2 + y*z"]],
               [["x^2 + y*z", "-y"], ["y^2", "x"]])
        assert str(m.potential) == "x^3 + x*y*z + y^3"
        table = graded_hom_cohomology(m, m, (1, 1, 1), 20)
        for d in range(21):
            assert table.even[d] == (1 if d == 0 else 2), f"degree {d}"
            assert table.odd[d] == 2, f"degree {d}"

    def test_weights_must_be_positive(self):
        m = mf([["x"]], [["y*z"]])
        with pytest.raises(NoPositiveGrading):
            graded_hom_cohomology(m, m, (0, 1, 1), 4)

    def test_potential_must_be_homogeneous(self):
        m = mf([["x"]], [["x + y^2"]])
        with pytest.raises(NoPositiveGrading):
            graded_hom_cohomology(m, m, (1, 1, 1), 4)

    def test_non_homogeneous_entry_detected(self):
        pathological = MatrixFactorization(
            RingMatrix([["x + y^2"]]), RingMatrix([["x"]]),
            SparsePoly.parse("x^4"))
        with pytest.raises(NonHomogeneousEntry):
            graded_hom_cohomology(pathological, pathological, (1, 1, 1), 4)

    def test_potential_mismatch(self):
        a = mf([["x"]], [["y*z"]])
        b = mf([["x"]], [["y^2"]])
        with pytest.raises(PotentialMismatch):
            graded_hom_cohomology(a, b, (1, 1, 1), 4)


# -- property-based checks -------------------------------------------------

monomials = st.sampled_from(
    ["x", "y", "z", "x*y", "y*z", "x^2", "y^2", "x*z"])
coeffs = st.integers(min_value=-2, max_value=2).filter(lambda v: v != 0)


@st.composite
def small_polys(draw):
    n = draw(st.integers(min_value=1, max_value=3))
    parts = []
    for _ in range(n):
        c = draw(coeffs)
        m = draw(monomials)
        parts.append(f"{'+' if c > 0 else '-'} {abs(c)}*{m}")
    return SparsePoly.parse(" ".join(parts).lstrip("+ "))


@st.composite
def one_by_one_pairs(draw):
    f = draw(small_polys())
    g = draw(small_polys())
    return make_mf([[f]], [[g]])


@settings(max_examples=60, deadline=None)
@given(one_by_one_pairs())
def test_translate_involution(m):
    assert translate(translate(m)) == m


@settings(max_examples=60, deadline=None)
@given(one_by_one_pairs())
def test_cone_of_zero_morphism_splits(m):
    zero = MFMorphism(m, m, 0, RingMatrix.zeros(1, 1),
                      RingMatrix.zeros(1, 1))
    assert cone(zero) == direct_sum(m, translate(m))


@settings(max_examples=60, deadline=None)
@given(one_by_one_pairs(), one_by_one_pairs())
def test_restrict_commutes_with_sum(m1, m2):
    if m1.potential != m2.potential:
        m2 = make_mf(m1.psi, m1.phi)
    sub = {"z": "0"}
    lhs = restrict(direct_sum(m1, m2), sub)
    rhs = direct_sum(restrict(m1, sub), restrict(m2, sub))
    assert lhs.phi == rhs.phi and lhs.psi == rhs.psi


@settings(max_examples=40, deadline=None)
@given(one_by_one_pairs())
def test_reduce_idempotent(m):
    reduced, _ = unit_pivot_reduce(m)
    again, log = unit_pivot_reduce(reduced)
    assert again == reduced
    assert log == ()


@settings(max_examples=40, deadline=None)
@given(one_by_one_pairs())
def test_identity_survives_in_degree_zero(m):
    # The identity endomorphism is a nonzero even class in degree 0
    # whenever the factors are homogeneous of positive degree for
    # weights (1, 1, 1) and neither factor is a unit.
    from fractions import Fraction
    w = (1, 1, 1)
    hdeg = m.potential.weighted_degree_check(w)
    fdeg = m.phi.entry(0, 0).weighted_degree_check(w)
    if (not isinstance(hdeg, Fraction) or hdeg <= 0
            or not isinstance(fdeg, Fraction) or fdeg == 0
            or fdeg == hdeg):
        return
    table = graded_hom_cohomology(m, m, w, 0)
    assert table.even[0] >= 1
