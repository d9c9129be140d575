"""Matrix factorizations of polynomial potentials, with exact arithmetic.

A matrix factorization of a potential W is a pair of square matrices
(phi, psi) over QQ(i)[x,y,z] with phi*psi = psi*phi = W*Id.  The pair is
read as a 2-periodic twisted complex

    ... --psi--> P1 --phi--> P0 --psi--> P1 --phi--> P0 --> ...

so phi maps the odd module to the even module.  This module implements
the category operations used elsewhere in the package:

* construction and validation (:func:`make_mf`),
* the shift ``[1]`` (:func:`translate`), direct sums, restriction of
  the potential along a substitution (:func:`restrict`),
* morphisms of either parity, homotopies, mapping cones,
* removal of trivial summands by unit pivots (:func:`unit_pivot_reduce`),
* weighted-degree-graded Hom cohomology (:func:`graded_hom_cohomology`).

Sign conventions (fixed once, used by every caller):

* even morphism ``F = (on_even, on_odd)`` is closed iff
  ``on_even*phi == phi'*on_odd`` and ``on_odd*psi == psi'*on_even``;
* odd morphism ``C = (on_even, on_odd)`` (even-to-odd and odd-to-even
  blocks) is closed iff ``phi'*on_even + on_odd*psi == 0`` and
  ``psi'*on_odd + on_even*phi == 0``;
* a homotopy ``H = (h_even, h_odd)`` bounds the even morphism ``F`` iff
  ``phi'*h_even + h_odd*psi == F.on_even`` and
  ``psi'*h_odd + h_even*phi == F.on_odd``;
* ``Cone(F even) = ([[phi', F.on_even], [0, psi]],
  [[psi', -F.on_odd], [0, phi]])`` and
  ``Cone(C odd) = ([[psi', C.on_even], [0, psi]],
  [[phi', C.on_odd], [0, phi]])``; in both cases the factorization
  property of the cone is equivalent to closedness of the morphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from math import lcm as _lcm
from typing import Mapping, Sequence

from .polyring import P_ZERO, QI, RingMatrix, SparsePoly


class NotAFactorization(ValueError):
    """The pair of matrices does not factor a common potential."""


class PotentialMismatch(ValueError):
    """Operands factor different potentials."""


class NotClosed(ValueError):
    """The morphism does not commute with the twisted differentials."""


class ConeNotFactorization(RuntimeError):
    """Internal consistency failure while assembling a mapping cone."""


class EquationFails(ValueError):
    """A verification equation has a nonzero residual."""


class NoPositiveGrading(ValueError):
    """The requested weights do not define a positive grading."""


class NonHomogeneousEntry(ValueError):
    """A matrix entry is not quasi-homogeneous for the given weights."""


def _auto_labels(prefix: str, n: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i + 1}" for i in range(n))


class MatrixFactorization:
    """Validated pair (phi, psi) with phi*psi = psi*phi = potential*Id.

    ``even_labels`` name the basis of the even module P0 (rows of phi),
    ``odd_labels`` the basis of the odd module P1 (columns of phi).
    The rank-zero factorization (the zero object) has ``size == 0`` and
    stores no matrices.
    """

    __slots__ = ("phi", "psi", "potential", "even_labels", "odd_labels")

    def __init__(self, phi, psi, potential: SparsePoly,
                 even_labels: Sequence[str] | None = None,
                 odd_labels: Sequence[str] | None = None):
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "potential", potential)
        n = 0 if phi is None else phi.nrows
        object.__setattr__(
            self, "even_labels",
            tuple(even_labels) if even_labels is not None
            else _auto_labels("e", n))
        object.__setattr__(
            self, "odd_labels",
            tuple(odd_labels) if odd_labels is not None
            else _auto_labels("o", n))
        if len(self.even_labels) != n or len(self.odd_labels) != n:
            raise ValueError("label count does not match the rank")

    def __setattr__(self, name, value):
        raise AttributeError("MatrixFactorization is immutable")

    @property
    def size(self) -> int:
        return 0 if self.phi is None else self.phi.nrows

    def is_zero_object(self) -> bool:
        return self.phi is None

    def __eq__(self, other):
        if not isinstance(other, MatrixFactorization):
            return NotImplemented
        return (self.phi == other.phi and self.psi == other.psi
                and self.potential == other.potential)

    def __hash__(self):
        return hash((self.phi, self.psi, self.potential))

    def __repr__(self):
        return (f"MatrixFactorization(size={self.size}, "
                f"potential={self.potential})")


def zero_object(potential: SparsePoly) -> MatrixFactorization:
    """The rank-zero factorization of the given potential."""
    return MatrixFactorization(None, None, potential, (), ())


def make_mf(phi, psi, potential: SparsePoly | str | None = None,
            even_labels: Sequence[str] | None = None,
            odd_labels: Sequence[str] | None = None) -> MatrixFactorization:
    """Validate and build a matrix factorization.

    The common potential is read off the product; an explicit
    ``potential`` argument is cross-checked against it.

    >>> m = make_mf([["x"]], [["y*z"]])
    >>> print(m.potential)
    x*y*z
    >>> make_mf([["x", "1"], ["0", "y"]], [["y", "0"], ["0", "x"]])
    Traceback (most recent call last):
        ...
    curvemirror.mf_algebra.NotAFactorization: phi*psi is not scalar: \
entry (0, 1) is x
    """
    if not isinstance(phi, RingMatrix):
        phi = RingMatrix(phi)
    if not isinstance(psi, RingMatrix):
        psi = RingMatrix(psi)
    if isinstance(potential, str):
        potential = SparsePoly.parse(potential)
    if phi.nrows != phi.ncols or psi.shape != phi.shape:
        raise NotAFactorization(
            f"need two square matrices of equal size, got {phi.shape} "
            f"and {psi.shape}")
    prod = phi * psi
    w = prod.entry(0, 0)
    for i in range(prod.nrows):
        for j in range(prod.ncols):
            expected = w if i == j else P_ZERO
            if prod.entry(i, j) != expected:
                raise NotAFactorization(
                    f"phi*psi is not scalar: entry ({i}, {j}) is "
                    f"{prod.entry(i, j)}")
    back = psi * phi
    for i in range(back.nrows):
        for j in range(back.ncols):
            expected = w if i == j else P_ZERO
            if back.entry(i, j) != expected:
                raise NotAFactorization(
                    f"psi*phi is not scalar: entry ({i}, {j}) is "
                    f"{back.entry(i, j)}")
    if potential is not None and potential != w:
        raise NotAFactorization(
            f"product is {w}, expected potential {potential}")
    return MatrixFactorization(phi, psi, w, even_labels, odd_labels)


def translate(mf: MatrixFactorization) -> MatrixFactorization:
    """The shift [1]: swap the two factors (and the two bases)."""
    if mf.is_zero_object():
        return mf
    return MatrixFactorization(mf.psi, mf.phi, mf.potential,
                               mf.odd_labels, mf.even_labels)


def direct_sum(a: MatrixFactorization,
               b: MatrixFactorization) -> MatrixFactorization:
    """Block-diagonal sum of two factorizations of the same potential."""
    if a.potential != b.potential:
        raise PotentialMismatch(
            f"potentials differ: {a.potential} vs {b.potential}")
    if a.is_zero_object():
        return b
    if b.is_zero_object():
        return a
    za = RingMatrix.zeros(a.size, b.size)
    zb = RingMatrix.zeros(b.size, a.size)
    phi = RingMatrix.block([[a.phi, za], [zb, b.phi]])
    psi = RingMatrix.block([[a.psi, za], [zb, b.psi]])
    return MatrixFactorization(phi, psi, a.potential,
                               a.even_labels + b.even_labels,
                               a.odd_labels + b.odd_labels)


def restrict(mf: MatrixFactorization,
             mapping: Mapping[str, SparsePoly | str]) -> MatrixFactorization:
    """Substitute variables in both factors (and the potential)."""
    sub = {k: SparsePoly.parse(v) if isinstance(v, str) else v
           for k, v in mapping.items()}
    if mf.is_zero_object():
        return zero_object(mf.potential.substitute(sub))
    return make_mf(mf.phi.substitute(sub), mf.psi.substitute(sub),
                   mf.potential.substitute(sub),
                   mf.even_labels, mf.odd_labels)


class MFMorphism:
    """A morphism of matrix factorizations of fixed parity.

    For parity 0, ``on_even`` maps P0(source) to P0(target) and
    ``on_odd`` maps P1(source) to P1(target).  For parity 1, ``on_even``
    maps P0(source) to P1(target) and ``on_odd`` maps P1(source) to
    P0(target).  Both blocks are target_size x source_size matrices.
    """

    __slots__ = ("source", "target", "parity", "on_even", "on_odd")

    def __init__(self, source: MatrixFactorization,
                 target: MatrixFactorization, parity: int,
                 on_even, on_odd):
        if parity not in (0, 1):
            raise ValueError("parity must be 0 or 1")
        if not isinstance(on_even, RingMatrix):
            on_even = RingMatrix(on_even)
        if not isinstance(on_odd, RingMatrix):
            on_odd = RingMatrix(on_odd)
        shape = (target.size, source.size)
        if on_even.shape != shape or on_odd.shape != shape:
            raise ValueError(
                f"morphism blocks must have shape {shape}, got "
                f"{on_even.shape} and {on_odd.shape}")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "parity", parity)
        object.__setattr__(self, "on_even", on_even)
        object.__setattr__(self, "on_odd", on_odd)

    def __setattr__(self, name, value):
        raise AttributeError("MFMorphism is immutable")

    def residuals(self) -> dict[str, RingMatrix]:
        """Residual matrices of the two closedness equations."""
        src, tgt = self.source, self.target
        if self.parity == 0:
            return {
                "on_even*phi - phi'*on_odd":
                    self.on_even * src.phi - tgt.phi * self.on_odd,
                "on_odd*psi - psi'*on_even":
                    self.on_odd * src.psi - tgt.psi * self.on_even,
            }
        return {
            "phi'*on_even + on_odd*psi":
                tgt.phi * self.on_even + self.on_odd * src.psi,
            "psi'*on_odd + on_even*phi":
                tgt.psi * self.on_odd + self.on_even * src.phi,
        }

    def is_closed(self) -> bool:
        return all(r.is_zero() for r in self.residuals().values())

    def __neg__(self):
        return MFMorphism(self.source, self.target, self.parity,
                          -self.on_even, -self.on_odd)

    def __add__(self, other):
        if (self.source is not other.source
                and self.source != other.source):
            raise ValueError("sources differ")
        if self.target != other.target or self.parity != other.parity:
            raise ValueError("targets or parities differ")
        return MFMorphism(self.source, self.target, self.parity,
                          self.on_even + other.on_even,
                          self.on_odd + other.on_odd)

    def __repr__(self):
        return (f"MFMorphism(parity={self.parity}, "
                f"{self.source.size} -> {self.target.size})")


def identity_morphism(mf: MatrixFactorization) -> MFMorphism:
    eye = RingMatrix.identity(mf.size)
    return MFMorphism(mf, mf, 0, eye, eye)


def scalar_morphism(mf: MatrixFactorization, value) -> MFMorphism:
    """The even endomorphism multiplying both modules by a scalar poly."""
    s = RingMatrix.scalar(mf.size, value)
    return MFMorphism(mf, mf, 0, s, s)


def compose(second: MFMorphism, first: MFMorphism) -> MFMorphism:
    """Composite second o first (matrix products blockwise)."""
    if first.target != second.source:
        raise ValueError("middle objects differ")
    if first.parity == 0:
        on_even = second.on_even * first.on_even
        on_odd = second.on_odd * first.on_odd
    else:
        on_even = second.on_odd * first.on_even
        on_odd = second.on_even * first.on_odd
    return MFMorphism(first.source, second.target,
                      (first.parity + second.parity) % 2, on_even, on_odd)


def cone(morphism: MFMorphism) -> MatrixFactorization:
    """Mapping cone of a closed morphism.

    Raises :class:`NotClosed` when the morphism is not closed, and
    :class:`ConeNotFactorization` if the assembled pair unexpectedly
    fails validation.
    """
    if not morphism.is_closed():
        bad = {k: str(r) for k, r in morphism.residuals().items()
               if not r.is_zero()}
        raise NotClosed(f"cone over a non-closed morphism; residuals {bad}")
    src, tgt = morphism.source, morphism.target
    zeros = RingMatrix.zeros(src.size, tgt.size)
    if morphism.parity == 0:
        phi = RingMatrix.block([[tgt.phi, morphism.on_even],
                                [zeros, src.psi]])
        psi = RingMatrix.block([[tgt.psi, -morphism.on_odd],
                                [zeros, src.phi]])
        even_labels = tgt.even_labels + src.odd_labels
        odd_labels = tgt.odd_labels + src.even_labels
    else:
        phi = RingMatrix.block([[tgt.psi, morphism.on_even],
                                [zeros, src.psi]])
        psi = RingMatrix.block([[tgt.phi, morphism.on_odd],
                                [zeros, src.phi]])
        even_labels = tgt.odd_labels + src.odd_labels
        odd_labels = tgt.even_labels + src.even_labels
    try:
        return make_mf(phi, psi, src.potential, even_labels, odd_labels)
    except NotAFactorization as exc:
        raise ConeNotFactorization(str(exc)) from exc


class MFHomotopy:
    """A homotopy H = (h_even, h_odd) for an even morphism.

    ``h_even`` maps P0(source) to P1(target) and ``h_odd`` maps
    P1(source) to P0(target).
    """

    __slots__ = ("h_even", "h_odd")

    def __init__(self, h_even, h_odd):
        if not isinstance(h_even, RingMatrix):
            h_even = RingMatrix(h_even)
        if not isinstance(h_odd, RingMatrix):
            h_odd = RingMatrix(h_odd)
        object.__setattr__(self, "h_even", h_even)
        object.__setattr__(self, "h_odd", h_odd)

    def __setattr__(self, name, value):
        raise AttributeError("MFHomotopy is immutable")

    def residuals(self, morphism: MFMorphism) -> dict[str, RingMatrix]:
        if morphism.parity != 0:
            raise ValueError("homotopy verification expects an even "
                             "morphism")
        src, tgt = morphism.source, morphism.target
        return {
            "phi'*h_even + h_odd*psi - on_even":
                tgt.phi * self.h_even + self.h_odd * src.psi
                - morphism.on_even,
            "psi'*h_odd + h_even*phi - on_odd":
                tgt.psi * self.h_odd + self.h_even * src.phi
                - morphism.on_odd,
        }


@dataclass(frozen=True)
class VerificationReport:
    kind: str
    checked: tuple[str, ...]


def verify_chain_data(kind: str, *, morphism: MFMorphism | None = None,
                      homotopy: MFHomotopy | None = None,
                      forward: MFMorphism | None = None,
                      inverse: MFMorphism | None = None
                      ) -> VerificationReport:
    """Verify chain-level equations exactly.

    ``kind`` is one of ``"closed_morphism"`` (needs ``morphism``),
    ``"homotopy"`` (needs ``morphism`` and ``homotopy``), or
    ``"iso_witness"`` (needs ``forward`` and ``inverse``).  Raises
    :class:`EquationFails` naming the first failing equation and its
    residual.
    """
    checked: list[str] = []

    def demand(name: str, residual: RingMatrix) -> None:
        if not residual.is_zero():
            raise EquationFails(f"{kind}: {name} has residual {residual}")
        checked.append(name)

    if kind == "closed_morphism":
        if morphism is None:
            raise ValueError("closed_morphism requires morphism=")
        for name, res in morphism.residuals().items():
            demand(name, res)
    elif kind == "homotopy":
        if morphism is None or homotopy is None:
            raise ValueError("homotopy requires morphism= and homotopy=")
        for name, res in morphism.residuals().items():
            demand(name, res)
        for name, res in homotopy.residuals(morphism).items():
            demand(name, res)
    elif kind == "iso_witness":
        if forward is None or inverse is None:
            raise ValueError("iso_witness requires forward= and inverse=")
        if forward.parity != 0 or inverse.parity != 0:
            raise ValueError("iso witnesses must be even morphisms")
        for name, res in forward.residuals().items():
            demand("forward " + name, res)
        for name, res in inverse.residuals().items():
            demand("inverse " + name, res)
        round_trip = compose(inverse, forward)
        eye = RingMatrix.identity(forward.source.size)
        demand("inverse o forward == id (even)",
               round_trip.on_even - eye)
        demand("inverse o forward == id (odd)", round_trip.on_odd - eye)
        round_trip = compose(forward, inverse)
        eye = RingMatrix.identity(forward.target.size)
        demand("forward o inverse == id (even)",
               round_trip.on_even - eye)
        demand("forward o inverse == id (odd)", round_trip.on_odd - eye)
    else:
        raise ValueError(f"unknown verification kind {kind!r}")
    return VerificationReport(kind, tuple(checked))


# -- unit pivot reduction -------------------------------------------------

@dataclass(frozen=True)
class PivotRecord:
    """One removed trivial summand."""
    factor: str          # "phi" or "psi"
    row_label: str
    col_label: str
    unit: str


def _first_unit(rows: list[list[SparsePoly]]) -> tuple[int, int] | None:
    for i, row in enumerate(rows):
        for j, entry in enumerate(row):
            if entry.is_unit_constant():
                return (i, j)
    return None


def _pivot_out(primary: list[list[SparsePoly]],
               secondary: list[list[SparsePoly]],
               i: int, j: int) -> None:
    """Split off the unit pivot at primary[i][j], updating both factors.

    Row/column operations on the primary factor are mirrored by the
    inverse operations on the secondary factor, so the product with the
    secondary factor is preserved.  Afterwards row i / column j of the
    primary (and column i / row j of the secondary) are removed.
    """
    unit = primary[i][j].constant_value()
    inv = unit.inverse()
    n = len(primary)
    # Clear row i of the primary by column operations col_c -= d*col_j;
    # mirror on the secondary: row_j += d*row_c.
    for c in range(n):
        if c == j or not primary[i][c]:
            continue
        d = primary[i][c] * inv
        for r in range(n):
            primary[r][c] = primary[r][c] - d * primary[r][j]
        for b in range(n):
            secondary[j][b] = secondary[j][b] + d * secondary[c][b]
    # Clear column j of the primary by row operations row_r -= d*row_i;
    # mirror on the secondary: col_i += d*col_r.
    for r in range(n):
        if r == i or not primary[r][j]:
            continue
        d = primary[r][j] * inv
        for c in range(n):
            primary[r][c] = primary[r][c] - d * primary[i][c]
        for a in range(n):
            secondary[a][i] = secondary[a][i] + d * secondary[a][r]
    for c in range(n):
        if c != j and primary[i][c]:
            raise RuntimeError("pivot cleanup left a nonzero row entry")
    for r in range(n):
        if r != i and primary[r][j]:
            raise RuntimeError("pivot cleanup left a nonzero column entry")
    # The secondary factor becomes block-diagonal automatically (the
    # factorization identities force the off-blocks to vanish); check it.
    for b in range(n):
        if b != i and secondary[j][b]:
            raise RuntimeError("pivot did not isolate the complementary row")
        if b != j and secondary[b][i]:
            raise RuntimeError(
                "pivot did not isolate the complementary column")
    del primary[i]
    for row in primary:
        del row[j]
    del secondary[j]
    for row in secondary:
        del row[i]


def unit_pivot_reduce(mf: MatrixFactorization
                      ) -> tuple[MatrixFactorization, tuple[PivotRecord, ...]]:
    """Strip trivial summands (unit pivots in either factor).

    Scans phi first, then psi, row-major, always taking the first unit
    entry; repeats until neither factor contains a unit.  Returns the
    reduced factorization and the log of removed pivots.  A pair that
    reduces completely yields the rank-zero object.

    >>> reduced, log = unit_pivot_reduce(make_mf([["1"]], [["x*y*z"]]))
    >>> reduced.size, len(log)
    (0, 1)
    """
    if mf.is_zero_object():
        return mf, ()
    phi = [list(row) for row in mf.phi.rows]
    psi = [list(row) for row in mf.psi.rows]
    even = list(mf.even_labels)
    odd = list(mf.odd_labels)
    log: list[PivotRecord] = []
    while phi:
        spot = _first_unit(phi)
        if spot is not None:
            i, j = spot
            log.append(PivotRecord("phi", even[i], odd[j], str(phi[i][j])))
            _pivot_out(phi, psi, i, j)
            del even[i]
            del odd[j]
            continue
        spot = _first_unit(psi)
        if spot is not None:
            i, j = spot
            log.append(PivotRecord("psi", odd[i], even[j], str(psi[i][j])))
            _pivot_out(psi, phi, i, j)
            del odd[i]
            del even[j]
            continue
        break
    if not phi:
        return zero_object(mf.potential), tuple(log)
    reduced = make_mf(RingMatrix(phi), RingMatrix(psi), mf.potential,
                      even, odd)
    return reduced, tuple(log)


# -- graded Hom cohomology ------------------------------------------------

def _monomials_of_degree(weights: tuple[int, int, int], degree: int,
                         cache: dict) -> tuple[tuple[int, int, int], ...]:
    if degree < 0:
        return ()
    hit = cache.get(degree)
    if hit is not None:
        return hit
    wx, wy, wz = weights
    out = []
    for a in range(degree // wx + 1):
        rest_a = degree - a * wx
        for b in range(rest_a // wy + 1):
            rest_b = rest_a - b * wy
            if rest_b % wz == 0:
                out.append((a, b, rest_b // wz))
    result = tuple(out)
    cache[degree] = result
    return result


def _module_degrees(mf: MatrixFactorization, weights, h: int
                    ) -> tuple[list[int], list[int]]:
    """Degrees of the even/odd basis making both factors homogeneous.

    deg(phi[i][j]) = odd[j] - even[i] and
    deg(psi[i][j]) = h + even[j] - odd[i].  Each connected component of
    the basis graph is anchored at degree 0 for its first vertex.
    """
    n = mf.size
    even: list[int | None] = [None] * n
    odd: list[int | None] = [None] * n

    def entry_degree(p: SparsePoly, where: str) -> int | None:
        if not p:
            return None
        d = p.weighted_degree_check(weights)
        if not isinstance(d, Fraction):
            raise NonHomogeneousEntry(
                f"{where} mixes weighted degrees: {p}")
        if d.denominator != 1:
            raise NonHomogeneousEntry(
                f"{where} has non-integer weighted degree {d}: {p}")
        return int(d)

    deg_phi = [[entry_degree(mf.phi.entry(i, j), f"phi[{i}][{j}]")
                for j in range(n)] for i in range(n)]
    deg_psi = [[entry_degree(mf.psi.entry(i, j), f"psi[{i}][{j}]")
                for j in range(n)] for i in range(n)]

    for start in range(2 * n):
        side, idx = divmod(start, n)
        store = even if side == 0 else odd
        if store[idx] is not None:
            continue
        store[idx] = 0
        queue = [(side, idx)]
        while queue:
            s, k = queue.pop()
            if s == 0:
                base = even[k]
                for j in range(n):
                    d = deg_phi[k][j]
                    if d is not None:
                        want = base + d
                        if odd[j] is None:
                            odd[j] = want
                            queue.append((1, j))
                        elif odd[j] != want:
                            raise NonHomogeneousEntry(
                                "inconsistent grading through "
                                f"phi[{k}][{j}]")
                for i2 in range(n):
                    d = deg_psi[i2][k]
                    if d is not None:
                        want = h + base - d
                        if odd[i2] is None:
                            odd[i2] = want
                            queue.append((1, i2))
                        elif odd[i2] != want:
                            raise NonHomogeneousEntry(
                                "inconsistent grading through "
                                f"psi[{i2}][{k}]")
            else:
                base = odd[k]
                for i2 in range(n):
                    d = deg_phi[i2][k]
                    if d is not None:
                        want = base - d
                        if even[i2] is None:
                            even[i2] = want
                            queue.append((0, i2))
                        elif even[i2] != want:
                            raise NonHomogeneousEntry(
                                "inconsistent grading through "
                                f"phi[{i2}][{k}]")
                for j in range(n):
                    d = deg_psi[k][j]
                    if d is not None:
                        want = d - h + base
                        if even[j] is None:
                            even[j] = want
                            queue.append((0, j))
                        elif even[j] != want:
                            raise NonHomogeneousEntry(
                                "inconsistent grading through "
                                f"psi[{k}][{j}]")
    return [v for v in even], [v for v in odd]  # type: ignore[misc]


def _rank(columns: list[dict[int, QI]]) -> int:
    """Rank of a sparse matrix given as a list of columns.

    Fraction-free elimination over the Gaussian integers: every column
    is scaled to integer entries, updates use cross-multiplication, and
    the integer content is divided out to keep the numbers small.
    """
    int_cols: list[dict[int, tuple[int, int]]] = []
    row_weight: dict[int, int] = {}
    for col in columns:
        if not col:
            continue
        den = 1
        for v in col.values():
            den = _lcm(den, v.re.denominator)
            den = _lcm(den, v.im.denominator)
        ic = {}
        content = 0
        for r, v in col.items():
            a = int(v.re * den)
            b = int(v.im * den)
            ic[r] = (a, b)
            content = gcd(content, a, b)
            row_weight[r] = row_weight.get(r, 0) + 1
        if content > 1:
            ic = {r: (a // content, b // content)
                  for r, (a, b) in ic.items()}
        int_cols.append(ic)
    int_cols.sort(key=len)
    pivots: dict[int, tuple[tuple[int, int], dict[int, tuple[int, int]]]] \
        = {}
    rank = 0
    for col in int_cols:
        work = dict(col)
        while work:
            hit = None
            for r in work:
                if r in pivots:
                    hit = r
                    break
            if hit is None:
                r = min(work, key=lambda k: (row_weight.get(k, 0), k))
                pivots[r] = (work[r], work)
                rank += 1
                break
            (a, b), pcol = pivots[hit]
            c, d = work[hit]
            big = 0
            for r2, (g0, h0) in work.items():
                nre = a * g0 - b * h0
                nim = a * h0 + b * g0
                work[r2] = (nre, nim)
            for r2, (e, f) in pcol.items():
                sre = c * e - d * f
                sim = c * f + d * e
                g0, h0 = work.get(r2, (0, 0))
                nre, nim = g0 - sre, h0 - sim
                if nre or nim:
                    work[r2] = (nre, nim)
                    big = max(big, nre.bit_length(), nim.bit_length())
                else:
                    work.pop(r2, None)
            work.pop(hit, None)
            if big > 64 and work:
                content = 0
                for g0, h0 in work.values():
                    content = gcd(content, g0, h0)
                if content > 1:
                    work = {r2: (g0 // content, h0 // content)
                            for r2, (g0, h0) in work.items()}
    return rank


class _SliceIndexer:
    """Basis bookkeeping for one graded slice of the Hom complex."""

    def __init__(self):
        self.index: dict[tuple, int] = {}
        self.order: list[tuple] = []

    def get(self, key: tuple) -> int:
        hit = self.index.get(key)
        if hit is None:
            hit = len(self.order)
            self.index[key] = hit
            self.order.append(key)
        return hit


@dataclass(frozen=True)
class HomCohomologyTable:
    """Dimensions of graded Hom cohomology per weighted degree."""
    weights: tuple[int, int, int]
    potential_degree: int
    max_degree: int
    even: dict[int, int]
    odd: dict[int, int]

    def dimension(self, degree: int, parity: int) -> int:
        table = self.even if parity == 0 else self.odd
        return table.get(degree, 0)


def graded_hom_cohomology(source: MatrixFactorization,
                          target: MatrixFactorization,
                          weights: Sequence[int],
                          max_degree: int) -> HomCohomologyTable:
    """Cohomology of the Hom complex, sliced by weighted degree.

    The differential sends an even pair F = (f_even, f_odd) to
    (psi'*f_even - f_odd*psi, phi'*f_odd - f_even*phi) and an odd pair
    C = (c_even, c_odd) to (phi'*c_even + c_odd*psi,
    psi'*c_odd + c_even*phi).  Slices are indexed so that the even
    differential preserves the degree and the odd differential raises
    it by the potential degree h (the 2-periodicity of the complex).
    Dimensions are reported for degrees 0..max_degree.
    """
    w = tuple(int(v) for v in weights)
    if len(w) != 3 or any(v < 1 for v in w):
        raise NoPositiveGrading(f"weights must be positive integers: {w}")
    if source.potential != target.potential:
        raise PotentialMismatch("Hom between different potentials")
    hdeg = source.potential.weighted_degree_check(w)
    if (not isinstance(hdeg, Fraction) or hdeg.denominator != 1
            or hdeg <= 0):
        raise NoPositiveGrading(
            f"potential is not positively graded for weights {w}")
    h = int(hdeg)
    s_even, s_odd = _module_degrees(source, w, h)
    t_even, t_odd = _module_degrees(target, w, h)
    mono_cache: dict[int, tuple] = {}
    ns, nt = source.size, target.size

    def slice_basis(parity: int, d: int) -> list[tuple]:
        out = []
        if parity == 0:
            specs = (("f0", s_even, t_even, 0), ("f1", s_odd, t_odd, 0))
        else:
            specs = (("c0", s_even, t_odd, h), ("c1", s_odd, t_even, 0))
        for tag, sdeg, tdeg, shift in specs:
            for i in range(nt):
                for j in range(ns):
                    need = d + shift + sdeg[j] - tdeg[i]
                    for mono in _monomials_of_degree(w, need, mono_cache):
                        out.append((tag, i, j, mono))
        return out

    def matrix_terms(matrix: RingMatrix) -> list[list[list]]:
        return [[list(matrix.entry(i, j).terms.items())
                 for j in range(matrix.ncols)]
                for i in range(matrix.nrows)]

    t_phi, t_psi = matrix_terms(target.phi), matrix_terms(target.psi)
    s_phi, s_psi = matrix_terms(source.phi), matrix_terms(source.psi)

    def add_entry(tag: str, i: int, j: int, mono, entry_terms, negate: bool,
                  indexer: _SliceIndexer, column: dict) -> None:
        mx, my, mz = mono
        for exps, coeff in entry_terms:
            key = (tag, i, j, (mx + exps[0], my + exps[1], mz + exps[2]))
            idx = indexer.get(key)
            cur = column.get(idx)
            val = -coeff if negate else coeff
            if cur is not None:
                val = cur + val
            if val:
                column[idx] = val
            else:
                column.pop(idx, None)

    def differential_columns(parity: int, d: int
                             ) -> tuple[list[dict[int, QI]], int]:
        """Matrix of the differential leaving slice (parity, d)."""
        basis = slice_basis(parity, d)
        indexer = _SliceIndexer()
        columns: list[dict[int, QI]] = []
        for (tag, i, j, mono) in basis:
            col: dict[int, QI] = {}
            if parity == 0:
                if tag == "f0":
                    # c0 += psi' * F0 ; c1 -= F0 * phi
                    for a in range(nt):
                        add_entry("c0", a, j, mono, t_psi[a][i], False,
                                  indexer, col)
                    for b in range(ns):
                        add_entry("c1", i, b, mono, s_phi[j][b], True,
                                  indexer, col)
                else:
                    # c1 += phi' * F1 ; c0 -= F1 * psi
                    for a in range(nt):
                        add_entry("c1", a, j, mono, t_phi[a][i], False,
                                  indexer, col)
                    for b in range(ns):
                        add_entry("c0", i, b, mono, s_psi[j][b], True,
                                  indexer, col)
            else:
                if tag == "c0":
                    # f0 += phi' * C0 ; f1 += C0 * phi
                    for a in range(nt):
                        add_entry("f0", a, j, mono, t_phi[a][i], False,
                                  indexer, col)
                    for b in range(ns):
                        add_entry("f1", i, b, mono, s_phi[j][b], False,
                                  indexer, col)
                else:
                    # f1 += psi' * C1 ; f0 += C1 * psi
                    for a in range(nt):
                        add_entry("f1", a, j, mono, t_psi[a][i], False,
                                  indexer, col)
                    for b in range(ns):
                        add_entry("f0", i, b, mono, s_psi[j][b], False,
                                  indexer, col)
            columns.append(col)
        return columns, len(basis)

    even_dims: dict[int, int] = {}
    odd_dims: dict[int, int] = {}
    rank_cache: dict[tuple[int, int], int] = {}

    def rank_of(parity: int, d: int) -> int:
        key = (parity, d)
        if key not in rank_cache:
            columns, _ = differential_columns(parity, d)
            rank_cache[key] = _rank(columns)
        return rank_cache[key]

    for d in range(max_degree + 1):
        even_cols, even_dim = differential_columns(0, d)
        rank_even = _rank(even_cols)
        rank_cache[(0, d)] = rank_even
        even_dims[d] = (even_dim - rank_even) - rank_of(1, d - h)
        odd_cols, odd_dim = differential_columns(1, d)
        rank_odd = _rank(odd_cols)
        rank_cache[(1, d)] = rank_odd
        odd_dims[d] = (odd_dim - rank_odd) - rank_even
    return HomCohomologyTable(w, h, max_degree, even_dims, odd_dims)
