"""Invertible curve singularities in two variables and their closed-form
invariants: classification, transpose, maximal diagonal symmetry group,
weights, Milnor number, quotient-orbifold data, covering homomorphism,
monodromy class, and the mirror potential tables.

The three families are

    Fermat  F(p,q) = x^p + y^q
    Chain   C(p,q) = x^p + x*y^q
    Loop    L(p,q) = x^p*y + x*y^q

with p, q >= 2 throughout.  A chain polynomial may also appear in its
transposed orientation x^p*y + y^q; all invariant computations
canonicalize through the variable swap x <-> y and translate the answer
back to the input's coordinates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Sequence

from .polyring import SparsePoly


class NotInvertible(ValueError):
    """Exponent matrix has determinant zero."""


class NotCurveInvertible(ValueError):
    """Exponent matrix matches none of the three curve family templates."""


class RelationViolation(RuntimeError):
    """Covering-homomorphism images fail an orbifold group relation."""


class IdentityViolation(RuntimeError):
    """The mirror potential tables fail the defining identity."""


class MonodromyMismatch(RuntimeError):
    """A monodromy-class component does not map to the monodromy element."""


class Family(enum.Enum):
    FERMAT = "fermat"
    CHAIN = "chain"
    LOOP = "loop"


Mono = tuple[int, int]


def _swap_mono(m: Mono) -> Mono:
    return (m[1], m[0])


@dataclass(frozen=True)
class InvertiblePolynomial:
    """An invertible curve polynomial, stored as its two exponent pairs.

    ``monomials`` preserves the construction order, so ``exponent_matrix``
    regenerates exactly the matrix the object was classified from.
    """

    family: Family
    p: int
    q: int
    monomials: tuple[Mono, Mono]

    def __post_init__(self):
        if self.p < 2 or self.q < 2:
            raise NotCurveInvertible(
                f"parameters must be >= 2, got ({self.p}, {self.q})")

    @property
    def exponent_matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.monomials[0], self.monomials[1])

    @property
    def is_transposed_chain(self) -> bool:
        """True for the x^p*y + y^q orientation of a chain polynomial."""
        return self.family is Family.CHAIN and (0, self.q) in self.monomials

    def to_poly(self) -> SparsePoly:
        out = SparsePoly.zero()
        for (a, b) in self.monomials:
            out = out + SparsePoly.monomial((a, b, 0))
        return out

    def label(self) -> str:
        tag = {"fermat": "F", "chain": "C", "loop": "L"}[self.family.value]
        suffix = "^T" if self.is_transposed_chain else ""
        return f"{tag}({self.p},{self.q}){suffix}"

    def __str__(self):
        return f"{self.label()}: {self.to_poly()}"


def fermat(p: int, q: int) -> InvertiblePolynomial:
    return InvertiblePolynomial(Family.FERMAT, p, q, ((p, 0), (0, q)))


def chain(p: int, q: int) -> InvertiblePolynomial:
    return InvertiblePolynomial(Family.CHAIN, p, q, ((p, 0), (1, q)))


def loop(p: int, q: int) -> InvertiblePolynomial:
    return InvertiblePolynomial(Family.LOOP, p, q, ((p, 1), (1, q)))


def classify(matrix: Sequence[Sequence[int]]) -> InvertiblePolynomial:
    """Recognize a 2x2 exponent matrix as one of the family templates,
    up to reordering the monomials and swapping the two variables.

    >>> classify([[5, 0], [0, 2]]).label()
    'F(5,2)'
    >>> classify([[2, 0], [1, 4]]).label()
    'C(2,4)'
    >>> classify([[2, 1], [0, 4]]).label()
    'C(2,4)^T'
    """
    rows = [tuple(int(v) for v in row) for row in matrix]
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise NotCurveInvertible(f"need a 2x2 matrix, got {matrix!r}")
    if any(v < 0 for r in rows for v in r):
        raise NotCurveInvertible(f"negative exponent in {matrix!r}")
    (a11, a12), (a21, a22) = rows
    if a11 * a22 - a12 * a21 == 0:
        raise NotInvertible(f"determinant of {rows} is zero")
    monos = (rows[0], rows[1])
    mono_set = frozenset(monos)

    def pure(m: Mono) -> int | None:
        # exponent of a single-variable power x^n or y^n, else None
        if m[1] == 0:
            return 0
        if m[0] == 0:
            return 1
        return None

    pures = {m: pure(m) for m in mono_set}
    pure_count = sum(1 for v in pures.values() if v is not None)
    m1, m2 = monos

    if pure_count == 2 and len(mono_set) == 2:
        axes = {pures[m] for m in mono_set}
        if axes == {0, 1}:
            px = next(m[0] for m in mono_set if pures[m] == 0)
            qy = next(m[1] for m in mono_set if pures[m] == 1)
            if px >= 2 and qy >= 2:
                return InvertiblePolynomial(Family.FERMAT, px, qy, monos)
    if pure_count == 1:
        pure_m = next(m for m in mono_set if pures[m] is not None)
        mixed = next(m for m in mono_set if pures[m] is None)
        if pures[pure_m] == 0 and mixed[0] == 1:
            # x^p and x*y^q
            if pure_m[0] >= 2 and mixed[1] >= 2:
                return InvertiblePolynomial(
                    Family.CHAIN, pure_m[0], mixed[1], monos)
        if pures[pure_m] == 1 and mixed[1] == 1:
            # y^q and x^p*y: the transposed chain orientation
            if mixed[0] >= 2 and pure_m[1] >= 2:
                return InvertiblePolynomial(
                    Family.CHAIN, mixed[0], pure_m[1], monos)
    if pure_count == 0 and len(mono_set) == 2:
        if m1[1] == 1 and m2[0] == 1 and m1[0] >= 2 and m2[1] >= 2:
            return InvertiblePolynomial(Family.LOOP, m1[0], m2[1], monos)
        if m2[1] == 1 and m1[0] == 1 and m2[0] >= 2 and m1[1] >= 2:
            return InvertiblePolynomial(
                Family.LOOP, m2[0], m1[1], (m1, m2))
    raise NotCurveInvertible(
        f"{rows} matches no curve family template")


def transpose(w: InvertiblePolynomial) -> InvertiblePolynomial:
    """Berglund-Hubsch transpose: classify the transposed exponent matrix.

    >>> transpose(chain(2, 4)).label()
    'C(2,4)^T'
    >>> transpose(transpose(chain(2, 4))) == chain(2, 4)
    True
    """
    a = w.exponent_matrix
    at = ((a[0][0], a[1][0]), (a[0][1], a[1][1]))
    return classify(at)


def canonical_form(w: InvertiblePolynomial) -> tuple[InvertiblePolynomial, bool]:
    """Return (canonical representative, swapped) where canonical means the
    family template orientation and swapped records the x <-> y relabeling.

    A transposed chain x^p*y + y^q is the variable swap of C(q,p).
    """
    if not w.is_transposed_chain:
        tmpl = {Family.FERMAT: fermat, Family.CHAIN: chain,
                Family.LOOP: loop}[w.family]
        return tmpl(w.p, w.q), False
    return chain(w.q, w.p), True


# ---------------------------------------------------------------------------
# Symmetry group


class DiagonalSymmetryGroup:
    """The maximal diagonal symmetry group, as a product of cyclic groups
    with explicit root-of-unity generators.

    Elements are integer vectors modulo ``cyclic_orders``.  Each coordinate
    generator acts on (x, y) as (e^{2 pi i r1}, e^{2 pi i r2}) with the
    rational pair (r1, r2) stored in ``generators``.
    """

    def __init__(self, cyclic_orders: Sequence[int],
                 generators: Sequence[tuple[Fraction, Fraction]]):
        if len(cyclic_orders) != len(generators):
            raise ValueError("one generator pair per cyclic factor")
        self.cyclic_orders = tuple(int(d) for d in cyclic_orders)
        self.generators = tuple(
            (Fraction(r1) % 1, Fraction(r2) % 1) for (r1, r2) in generators)

    @property
    def order(self) -> int:
        n = 1
        for d in self.cyclic_orders:
            n *= d
        return n

    @property
    def rank(self) -> int:
        return len(self.cyclic_orders)

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def normalize(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.rank:
            raise ValueError(f"element length {len(vec)} != rank {self.rank}")
        return tuple(int(v) % d for v, d in zip(vec, self.cyclic_orders))

    def add(self, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
        return self.normalize([a + b for a, b in zip(u, v)])

    def neg(self, u: Sequence[int]) -> tuple[int, ...]:
        return self.normalize([-a for a in u])

    def scale(self, k: int, u: Sequence[int]) -> tuple[int, ...]:
        return self.normalize([k * a for a in u])

    def elements(self) -> Iterator[tuple[int, ...]]:
        def rec(i: int, prefix: tuple[int, ...]):
            if i == self.rank:
                yield prefix
                return
            for v in range(self.cyclic_orders[i]):
                yield from rec(i + 1, prefix + (v,))
        yield from rec(0, ())

    def element_order(self, u: Sequence[int]) -> int:
        u = self.normalize(u)
        out = 1
        for v, d in zip(u, self.cyclic_orders):
            out = out * (d // gcd(v, d)) // gcd(out, d // gcd(v, d))
        return out

    def pair_of(self, u: Sequence[int]) -> tuple[Fraction, Fraction]:
        """The root-of-unity exponent pair (mod 1) of a group element."""
        u = self.normalize(u)
        r1 = sum((Fraction(v) * g[0] for v, g in zip(u, self.generators)),
                 Fraction(0)) % 1
        r2 = sum((Fraction(v) * g[1] for v, g in zip(u, self.generators)),
                 Fraction(0)) % 1
        return (r1, r2)

    def element_from_pair(
            self, pair: tuple[Fraction, Fraction]) -> tuple[int, ...] | None:
        target = (Fraction(pair[0]) % 1, Fraction(pair[1]) % 1)
        for u in self.elements():
            if self.pair_of(u) == target:
                return u
        return None

    def subgroup_generated(self, vecs: Sequence[Sequence[int]]) -> frozenset:
        seen = {self.identity}
        frontier = [self.identity]
        gens = [self.normalize(v) for v in vecs]
        while frontier:
            u = frontier.pop()
            for g in gens:
                w = self.add(u, g)
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        return frozenset(seen)

    def fixes(self, u: Sequence[int], monomials: Sequence[Mono]) -> bool:
        r1, r2 = self.pair_of(u)
        return all((a * r1 + b * r2) % 1 == 0 for (a, b) in monomials)

    def __repr__(self):
        parts = " x ".join(f"Z/{d}" for d in self.cyclic_orders)
        return f"DiagonalSymmetryGroup({parts})"


@dataclass(frozen=True)
class WeightSystem:
    w1: int
    w2: int
    h: int

    def monodromy_pair(self) -> tuple[Fraction, Fraction]:
        return (Fraction(self.w1, self.h) % 1, Fraction(self.w2, self.h) % 1)


def symmetry_and_weights(
        w: InvertiblePolynomial
) -> tuple[DiagonalSymmetryGroup, WeightSystem, int]:
    """Symmetry group with explicit generators, the weight system, and the
    Milnor number mu = (h/w1 - 1)(h/w2 - 1).

    >>> g, ws, mu = symmetry_and_weights(chain(2, 4))
    >>> (g.cyclic_orders, (ws.w1, ws.w2, ws.h), mu)
    ((8,), (4, 1, 8), 7)
    """
    can, swapped = canonical_form(w)
    p, q = can.p, can.q
    if can.family is Family.FERMAT:
        weights = (q, p, p * q)
        orders = [p, q]
        gens = [(Fraction(1, p), Fraction(0)), (Fraction(0), Fraction(1, q))]
    elif can.family is Family.CHAIN:
        weights = (q, p - 1, p * q)
        orders = [p * q]
        gens = [(Fraction(q, p * q), Fraction(-1, p * q))]
    else:
        n = p * q - 1
        weights = (q - 1, p - 1, n)
        orders = [n]
        gens = [(Fraction(q, n), Fraction(-1, n))]
    mu_frac = (Fraction(weights[2], weights[0]) - 1) * (
        Fraction(weights[2], weights[1]) - 1)
    if mu_frac.denominator != 1:
        raise IdentityViolation(f"non-integral Milnor number {mu_frac}")
    if swapped:
        weights = (weights[1], weights[0], weights[2])
        gens = [(r2, r1) for (r1, r2) in gens]
    group = DiagonalSymmetryGroup(orders, gens)
    for u in ((1 if i == j else 0 for j in range(group.rank))
              for i in range(group.rank)):
        u = tuple(u)
        if not group.fixes(u, w.monomials):
            raise RelationViolation(
                f"generator {u} does not fix {w.label()}")
    return group, WeightSystem(*weights), int(mu_frac)


# ---------------------------------------------------------------------------
# Fiber invariants and covering homomorphism


@dataclass(frozen=True)
class FiberInvariants:
    mu: int
    d: int
    g: int
    k: int
    abc: tuple[int, int, int]
    puncture_flags: frozenset  # subset of {0,1,2} indexing (a, b, c)

    def euler_punctured(self) -> int:
        return 1 - self.mu

    def euler_compact(self) -> int:
        return 2 - 2 * self.g


def fiber_invariants(w: InvertiblePolynomial) -> FiberInvariants:
    """Genus, punctures, and the quotient orbifold signature (a, b, c).

    >>> fi = fiber_invariants(chain(2, 4))
    >>> (fi.d, fi.k, fi.g, fi.abc)
    (1, 2, 3, (8, 4, 8))
    """
    can, _ = canonical_form(w)
    p, q = can.p, can.q
    _, _, mu = symmetry_and_weights(can)
    if can.family is Family.FERMAT:
        d = gcd(p, q)
        g2 = mu + 1 - d
        k = d
        abc = (p, q, p * q // d)
        punct = frozenset({2})
    elif can.family is Family.CHAIN:
        d = gcd(p - 1, q)
        g2 = mu - d
        k = d + 1
        abc = (p * q, q, p * q // d)
        punct = frozenset({0, 2})
    else:
        d = gcd(p - 1, q - 1)
        g2 = mu - 1 - d
        k = d + 2
        abc = (p * q - 1, p * q - 1, (p * q - 1) // d)
        punct = frozenset({0, 1, 2})
    if g2 % 2:
        raise IdentityViolation(f"odd 2g = {g2} for {w.label()}")
    fi = FiberInvariants(mu, d, g2 // 2, k, abc, punct)
    if 2 - 2 * fi.g - fi.k != 1 - mu:
        raise IdentityViolation(
            f"2-2g-k = {2 - 2 * fi.g - fi.k} != 1-mu = {1 - mu}")
    group, _, _ = symmetry_and_weights(can)
    a, b, c = abc
    chi = group.order * (
        Fraction(1, a) + Fraction(1, b) + Fraction(1, c) - 1)
    if chi != 2 - 2 * fi.g:
        raise IdentityViolation(
            f"orbifold Euler count {chi} != 2-2g = {2 - 2 * fi.g}")
    return fi


@dataclass(frozen=True)
class CoveringHom:
    """Images of the three boundary loops of the quotient orbifold sphere
    in the symmetry group (deck transformation coordinates)."""

    group: DiagonalSymmetryGroup
    images: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]

    def image_of(self, index: int) -> tuple[int, ...]:
        """Image of loop index 1, 2, or 3."""
        return self.images[index - 1]


def covering_homomorphism(w: InvertiblePolynomial) -> CoveringHom:
    """The surjection identifying deck transformations of the Milnor-fiber
    covering with the symmetry group.

    >>> covering_homomorphism(fermat(5, 2)).images
    ((1, 0), (0, 1), (4, 1))
    >>> covering_homomorphism(chain(3, 2)).images
    ((1,), (3,), (2,))
    """
    can, _ = canonical_form(w)
    p = can.p
    group, _, _ = symmetry_and_weights(can)
    if can.family is Family.FERMAT:
        raw = [(1, 0), (0, 1), (-1, -1)]
    else:
        raw = [(1,), (-p,), (p - 1,)]
    images = tuple(group.normalize(v) for v in raw)
    abc = fiber_invariants(can).abc
    for img, order in zip(images, abc):
        if group.scale(order, img) != group.identity:
            raise RelationViolation(
                f"{img} * {order} != 0 in {group} for {w.label()}")
    total = group.identity
    for img in images:
        total = group.add(total, img)
    if total != group.identity:
        raise RelationViolation(
            f"images of the three loops sum to {total}, not 0")
    if group.subgroup_generated(images) != frozenset(group.elements()):
        raise RelationViolation("loop images do not generate the group")
    return CoveringHom(group, images)


def monodromy_element(w: InvertiblePolynomial) -> tuple[int, ...]:
    """The monodromy diag(e^{2 pi i w1/h}, e^{2 pi i w2/h}) as an element
    of the symmetry group."""
    can, _ = canonical_form(w)
    group, weights, _ = symmetry_and_weights(can)
    elem = group.element_from_pair(weights.monodromy_pair())
    if elem is None:
        raise MonodromyMismatch(
            f"monodromy pair {weights.monodromy_pair()} not in {group}")
    return elem


def gamma_class(w: InvertiblePolynomial) -> tuple[tuple[int, int], ...]:
    """The monodromy class as winding numbers around the orbifold points:
    a tuple of (coefficient, loop index) pairs.

    Every component gamma_i^{coefficient} maps to the monodromy element
    under the covering homomorphism (verified).

    >>> gamma_class(fermat(3, 4))
    ((-1, 3),)
    >>> gamma_class(chain(4, 2))
    ((-3, 1), (-1, 3))
    """
    can, _ = canonical_form(w)
    p, q = can.p, can.q
    if can.family is Family.FERMAT:
        comps = ((-1, 3),)
    elif can.family is Family.CHAIN:
        comps = ((1 - p, 1), (-1, 3))
    else:
        comps = ((1 - p, 1), (1 - q, 2), (-1, 3))
    hom = covering_homomorphism(can)
    g_w = monodromy_element(can)
    for coeff, idx in comps:
        if hom.group.scale(coeff, hom.image_of(idx)) != g_w:
            raise MonodromyMismatch(
                f"component ({coeff}, gamma_{idx}) maps to "
                f"{hom.group.scale(coeff, hom.image_of(idx))}, "
                f"monodromy is {g_w}")
    return comps


# ---------------------------------------------------------------------------
# Mirror potential tables


@dataclass(frozen=True)
class MirrorData:
    w_l: SparsePoly
    g_poly: SparsePoly
    w_t: SparsePoly


def mirror_data(w: InvertiblePolynomial) -> MirrorData:
    """The immersed-curve disc potential W_L, the closed-string polynomial
    g, and the transpose potential, with W_L = W^T + x*y*g verified.

    >>> md = mirror_data(chain(2, 4))
    >>> str(md.w_l), str(md.g_poly)
    ('y^4 + x*y*z', '-x + z')
    """
    can, swapped = canonical_form(w)
    p, q = can.p, can.q
    x, y, z = SparsePoly.gens()
    if can.family is Family.FERMAT:
        w_l = x ** p + y ** q + x * y * z
        g = z
    elif can.family is Family.CHAIN:
        w_l = y ** q + x * y * z
        g = z - x ** (p - 1)
    else:
        w_l = x * y * z
        g = z - x ** (p - 1) - y ** (q - 1)
    if swapped:
        swap = {"x": y, "y": x}
        w_l = w_l.substitute(swap)
        g = g.substitute(swap)
    w_t = transpose(w).to_poly()
    if w_l - x * y * g != w_t:
        raise IdentityViolation(
            f"W_L - xy*g = {w_l - x * y * g} != W^T = {w_t}")
    return MirrorData(w_l, g, w_t)


def all_in_range(p_max: int = 8, q_max: int = 8) -> Iterator[InvertiblePolynomial]:
    """Every family member with 2 <= p <= p_max, 2 <= q <= q_max."""
    for p in range(2, p_max + 1):
        for q in range(2, q_max + 1):
            yield fermat(p, q)
            yield chain(p, q)
            yield loop(p, q)
