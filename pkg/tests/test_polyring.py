"""Ring axioms, parser round trips, and a sympy cross-check for the
exact arithmetic layer."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from curvemirror.polyring import QI, QI_I, RingMatrix, SparsePoly

fractions_st = st.fractions(
    min_value=-4, max_value=4, max_denominator=6)
qi_st = st.builds(QI, fractions_st, fractions_st)

exps_st = st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
poly_st = st.dictionaries(exps_st, qi_st, max_size=4).map(SparsePoly)


class TestQI:
    def test_basic_identities(self):
        assert QI_I * QI_I == QI(-1)
        assert QI(2, 3) + QI(1, -1) == QI(3, 2)
        assert QI(2, 3) * QI(2, -3) == QI(13)
        assert QI(Fraction(1, 2)) * 2 == QI(1)

    def test_division(self):
        a = QI(3, -7)
        assert a / a == QI(1)
        assert a * a.inverse() == QI(1)
        with pytest.raises(ZeroDivisionError):
            QI(0).inverse()

    def test_powers(self):
        assert QI_I ** 4 == QI(1)
        assert QI(1, 1) ** 2 == QI(0, 2)
        assert QI(2) ** -1 == QI(Fraction(1, 2))

    @given(qi_st, qi_st, qi_st)
    def test_ring_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c

    @given(qi_st)
    def test_multiplicative_inverse(self, a):
        if a:
            assert a * a.inverse() == QI(1)

    def test_hash_consistency(self):
        assert hash(QI(2)) == hash(QI(Fraction(4, 2)))
        assert len({QI(1, 2), QI(1, 2), QI(2, 1)}) == 2


class TestSparsePoly:
    def test_construction_drops_zeros(self):
        p = SparsePoly({(1, 0, 0): QI(0), (0, 1, 0): QI(2)})
        assert (1, 0, 0) not in p.terms
        assert p.coefficient((0, 1, 0)) == QI(2)

    def test_string_forms(self):
        x, y, z = SparsePoly.gens()
        assert str(x ** 2 + x * y - z) == "x^2 + x*y - z"
        assert str(SparsePoly.zero()) == "0"
        assert str(-x) == "-x"
        assert str(QI_I * y) == "i*y"
        assert str((QI(1, 1)) * z) == "(1+i)*z"

    def test_parse_round_trip_examples(self):
        samples = [
            "x^3 + x*y^2",
            "x^2 - 2*x*y + y^2",
            "i*x - i*y",
            "(1+i)*x*z^2 - 1/2*y",
            "-x^4*y^2*z",
            "0",
            "5",
        ]
        for text in samples:
            p = SparsePoly.parse(text)
            assert SparsePoly.parse(str(p)) == p

    def test_parse_power_forms(self):
        assert SparsePoly.parse("x**3") == SparsePoly.parse("x^3")
        with pytest.raises(ValueError):
            SparsePoly.parse("x^")
        with pytest.raises(ValueError):
            SparsePoly.parse("w + 1")

    @given(poly_st, poly_st, poly_st)
    @settings(max_examples=60)
    def test_ring_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c

    @given(poly_st, poly_st)
    @settings(max_examples=40)
    def test_substitute_is_homomorphism(self, a, b):
        x = SparsePoly.var("x")
        mapping = {"x": x ** 2, "y": x + 1, "z": SparsePoly.var("y")}
        assert (a * b).substitute(mapping) == (
            a.substitute(mapping) * b.substitute(mapping))
        assert (a + b).substitute(mapping) == (
            a.substitute(mapping) + b.substitute(mapping))

    @given(poly_st)
    @settings(max_examples=40)
    def test_str_parse_round_trip(self, p):
        assert SparsePoly.parse(str(p)) == p

    def test_quasihomogeneous(self):
        x, y, z = SparsePoly.gens()
        w = [Fraction(2, 10), Fraction(5, 10), Fraction(3, 10)]
        assert (x ** 5 + y ** 2).is_quasihomogeneous(w, 1)
        assert not (x ** 5 + y ** 2 + z).is_quasihomogeneous(w, 1)

    def test_sympy_cross_check(self):
        sympy = pytest.importorskip("sympy")
        sx, sy, sz = sympy.symbols("x y z")
        x, y, z = SparsePoly.gens()
        ours = (x + 2 * y - z) ** 3 * (x - y) + (x * y * z) ** 2
        theirs = sympy.expand(
            (sx + 2 * sy - sz) ** 3 * (sx - sy) + (sx * sy * sz) ** 2)
        assert sympy.simplify(
            sympy.sympify(str(ours)) - theirs) == 0


class TestRingMatrix:
    def test_multiplication(self):
        m = RingMatrix.from_strings([["x", "y"], ["-y", "x"]])
        sq = m * m
        assert sq.entry(0, 0) == SparsePoly.parse("x^2 - y^2")
        assert sq.entry(0, 1) == SparsePoly.parse("2*x*y")

    def test_identity_and_scalar(self):
        m = RingMatrix.from_strings([["x", "y"], ["y^3", "-x"]])
        prod = m * m
        assert prod.is_scalar(SparsePoly.parse("x^2 + y^4"))
        assert RingMatrix.identity(3).is_identity()
        assert not m.is_scalar("x")

    def test_block_assembly(self):
        a = RingMatrix.from_strings([["x"]])
        b = RingMatrix.from_strings([["y"]])
        z = RingMatrix.zeros(1, 1)
        blk = RingMatrix.block([[a, z], [z, b]])
        assert blk.to_strings() == [["x", "0"], ["0", "y"]]

    def test_shape_errors(self):
        m = RingMatrix.from_strings([["x", "y"]])
        with pytest.raises(ValueError):
            m * m
        with pytest.raises(ValueError):
            m + RingMatrix.identity(2)
        with pytest.raises(ValueError):
            RingMatrix([["x"], ["y", "z"]])

    def test_substitute(self):
        m = RingMatrix.from_strings([["z", "y"]])
        out = m.substitute({"z": SparsePoly.parse("x^2")})
        assert out.to_strings() == [["x^2", "y"]]

    def test_scalar_multiplication(self):
        m = RingMatrix.from_strings([["x"]])
        assert (-1 * m).entry(0, 0) == SparsePoly.parse("-x")
        assert (m * SparsePoly.var("y")).entry(0, 0) == SparsePoly.parse("x*y")
