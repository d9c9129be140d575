"""Combinatorial models of the compactified Milnor fiber.

Two models are built for every invertible curve polynomial and cross-checked
against each other:

* ``TessellatedSurface``: a 2m-gon whose boundary edges are identified in a
  ``+/-s`` pattern (s odd).  Edges ``a_1 .. a_{2m}`` run counterclockwise,
  ``a_i`` from corner ``c_{i-1}`` to corner ``c_i`` (0-based corners, indices
  mod 2m).  Every even-numbered edge ``a_e`` is identified with the
  orientation reversal of ``a_{e+s}``.  Family data:

  ========  ============  =========
  family    edge count    pattern s
  ========  ============  =========
  Fermat    2pq - 2p      2q - 1
  Chain     2pq           2p - 1
  Loop      2(pq - 1)     2p - 1
  ========  ============  =========

  The polygon is a union of quadrilateral fundamental domains for the
  orbifold-sphere quotient; each domain is a pair of triangles glued along
  the edge joining the order-a and order-b orbifold points.  Boundary
  corners therefore alternate between lifts of two of the three orbifold
  points: a and c for Fermat (odd corners over c), b and c for Chain and
  Loop (odd corners over b, even over c).  The third point lifts to
  interior points of the polygon.

* ``SeidelComplex``: the quotient orbifold sphere carrying an immersed
  circle with three transverse self-intersections X, Y, Z on the equator,
  together with its lift to the Milnor fiber.  The six arcs are::

      U1: X -> Y   U2: Y -> Z   U3: Z -> X   (front hemisphere)
      D1: X -> Y   D2: Y -> Z   D3: Z -> X   (back hemisphere)

  and the immersed circle is traversed as U1 D2 U3 D1 U2 D3.  The five
  complementary faces are two triangles ``T_front = [U1 U2 U3]`` and
  ``T_back = [D3^- D2^- D1^-]`` plus three lens bigons::

      M_C = [D1 U1^-]  between X and Y, containing the order-c point,
      M_A = [D2 U2^-]  between Y and Z, containing the order-a point,
      M_B = [D3 U3^-]  between Z and X, containing the order-b point.

  Lens holonomies are the deck transformations attached to loops around
  the enclosed orbifold points: ``d1`` for M_C, ``d2`` for M_A, ``d3`` for
  M_B, with ``d1 + d2 + d3 = 0``.  In the lifted complex the triangles
  have |G| copies each; each lens face merges into a 2*ord(d)-gon, one per
  coset of the cyclic subgroup generated by its holonomy, assembled from
  ord(d) pullback bigon sheets.

Navigation conventions used by ``lift_step``:

* Tessellation tiles are ``(g, "front")`` / ``(g, "back")``, the lifts of
  the two equator cells, with quotient arcs named after their endpoint
  pair: ``"ab"``, ``"bc"``, ``"ca"``.  Crossing an arc from the front cell
  sends ``g`` to ``g + t(arc)`` with ``t(ab) = 0``, ``t(bc) = -d3``,
  ``t(ca) = +d2``; crossing from the back cell subtracts the same offset.
  Walking around an a-vertex lift alternates "ca" and "ab" crossings and
  every "ca" crossing advances the label by d2, the image of the loop
  around the order-a point (alias ``"gamma1"``).
* Seidel tiles are ``(label, face)`` with face in {T_front, T_back, M_A,
  M_B, M_C}; crossings are lifted arcs ``(arc, g)``.  Arc incidence:
  ``(U_i, g)`` separates the front triangle ``g`` from its lens;
  ``(D1, g)`` bounds back triangle ``g``, ``(D2, g)`` back triangle
  ``g - d1``, ``(D3, g)`` back triangle ``g - d1 - d2``.  Crossing into a
  lens over a punctured orbifold point raises ``BoundaryEdge``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .singularity_core import (
    CoveringHom,
    DiagonalSymmetryGroup,
    Family,
    FiberInvariants,
    InvertiblePolynomial,
    canonical_form,
    chain,
    covering_homomorphism,
    fermat,
    fiber_invariants,
    symmetry_and_weights,
)

__all__ = [
    "BoundaryEdge", "InvariantViolation", "InteriorPoint", "LensFace",
    "OrbitRecord", "SeidelComplex", "TessellatedSurface", "VertexOrbit",
    "build_seidel_complex", "build_tessellation", "cell_complex_json",
    "lift_step", "surface_invariants", "tessellation_svg",
]

Element = tuple[int, ...]
Tile = tuple[Element, str]


class InvariantViolation(RuntimeError):
    """An internal consistency check of a built surface failed."""


class BoundaryEdge(RuntimeError):
    """A navigation step tried to enter a face holding a puncture."""


# ---------------------------------------------------------------------------
# Small union-find used for corner orbits


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)

    def classes(self) -> list[tuple[int, ...]]:
        buckets: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            buckets.setdefault(self.find(i), []).append(i)
        return [tuple(sorted(v)) for _, v in sorted(buckets.items())]


# ---------------------------------------------------------------------------
# The 2m-gon model


@dataclass(frozen=True)
class VertexOrbit:
    """One identified vertex of the glued polygon.

    ``corners`` lists the 0-based polygon corners mapping to it, ``kind``
    names the orbifold point it lies over ("a", "b" or "c").
    """

    index: int
    kind: str
    corners: tuple[int, ...]
    punctured: bool

    @property
    def size(self) -> int:
        return len(self.corners)


@dataclass(frozen=True)
class InteriorPoint:
    """Lifts of an orbifold point that sit inside the polygon."""

    kind: str
    count: int
    punctured: bool


@dataclass(frozen=True)
class OrbitRecord:
    """One line of the orbit table reported by surface_invariants."""

    label: str
    kind: str
    size: int
    punctured: bool


@dataclass(frozen=True)
class TessellatedSurface:
    """The compactified Milnor fiber as a 2m-gon with edge identifications.

    The cell complex after gluing has one face (the polygon), ``m``
    unoriented edges and ``len(vertex_orbits)`` vertices.  ``edge_pairs``
    lists the identified pairs (even label, odd label) of boundary edges;
    edge ``a_e`` is glued to the orientation reversal of its partner.
    """

    polynomial: InvertiblePolynomial
    m: int
    pattern: int
    edge_pairs: tuple[tuple[int, int], ...]
    vertex_orbits: tuple[VertexOrbit, ...]
    interior_points: tuple[InteriorPoint, ...]
    invariants: FiberInvariants

    @property
    def edge_count(self) -> int:
        return self.m

    @property
    def vertex_count(self) -> int:
        return len(self.vertex_orbits)

    @property
    def face_count(self) -> int:
        return 1

    @property
    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.face_count

    @property
    def puncture_count(self) -> int:
        boundary = sum(1 for o in self.vertex_orbits if o.punctured)
        interior = sum(pt.count for pt in self.interior_points
                       if pt.punctured)
        return boundary + interior

    def corner_orbit(self, corner: int) -> VertexOrbit:
        """The vertex orbit containing a 0-based polygon corner."""
        for orbit in self.vertex_orbits:
            if corner % (2 * self.m) in orbit.corners:
                return orbit
        raise ValueError(f"corner {corner} out of range")

    def partner_of(self, edge: int) -> int:
        """The boundary edge glued to 1-based boundary edge ``edge``."""
        for e, o in self.edge_pairs:
            if edge == e:
                return o
            if edge == o:
                return e
        raise ValueError(f"edge label {edge} out of range")

    def boundary_word(self) -> tuple[tuple[int, int], ...]:
        """The polygon boundary as (unoriented edge index, sign) entries.

        Unoriented edges are numbered by their position in ``edge_pairs``;
        the even member of a pair carries sign +1, the odd member -1.
        """
        where = {}
        for idx, (e, o) in enumerate(self.edge_pairs):
            where[e] = (idx, 1)
            where[o] = (idx, -1)
        return tuple(where[i] for i in range(1, 2 * self.m + 1))


_FAMILY_GON = {
    Family.FERMAT: lambda p, q: (2 * p * q - 2 * p, 2 * q - 1),
    Family.CHAIN: lambda p, q: (2 * p * q, 2 * p - 1),
    Family.LOOP: lambda p, q: (2 * (p * q - 1), 2 * p - 1),
}

# Which orbifold point the odd / even boundary corners lie over, and which
# points lift to polygon-interior vertices, per family.
_CORNER_KINDS = {
    Family.FERMAT: {"odd": "c", "even": "a", "interior": ("b",)},
    Family.CHAIN: {"odd": "b", "even": "c", "interior": ("a",)},
    Family.LOOP: {"odd": "b", "even": "c", "interior": ("a",)},
}

_KIND_INDEX = {"a": 0, "b": 1, "c": 2}


def _lift_count(group: DiagonalSymmetryGroup, hom: CoveringHom,
                kind: str) -> int:
    """Number of lifts of an orbifold point in the compactified fiber."""
    image = hom.image_of(_KIND_INDEX[kind] + 1)
    return group.order // group.element_order(image)


def build_tessellation(w: InvertiblePolynomial) -> TessellatedSurface:
    """The 2m-gon model of the compactified Milnor fiber.

    >>> ts = build_tessellation(fermat(5, 2))
    >>> (2 * ts.m, ts.pattern, ts.euler_characteristic)
    (10, 3, -2)
    >>> ts = build_tessellation(chain(4, 2))
    >>> (2 * ts.m, ts.pattern, ts.vertex_count)
    (16, 7, 5)
    """
    can, _ = canonical_form(w)
    fi = fiber_invariants(can)
    group, _, _ = symmetry_and_weights(can)
    hom = covering_homomorphism(can)
    two_m, pattern = _FAMILY_GON[can.family](can.p, can.q)
    if two_m % 2 or pattern % 2 == 0:
        raise InvariantViolation(
            f"bad polygon data ({two_m}, {pattern}) for {can.label()}")
    m = two_m // 2

    pairs = []
    seen_odd = set()
    for e in range(2, two_m + 1, 2):
        o = (e + pattern - 1) % two_m + 1
        if o % 2 == 0 or o in seen_odd:
            raise InvariantViolation(
                f"pattern {pattern} does not match edges of the "
                f"{two_m}-gon into even/odd pairs")
        seen_odd.add(o)
        pairs.append((e, o))

    # Corner identifications: a_e (tail c_{e-1}, head c_e) is glued to the
    # reversal of a_o, so tail ~ head and head ~ tail of the partner.
    uf = _UnionFind(two_m)
    for e, o in pairs:
        uf.union((e - 1) % two_m, o % two_m)
        uf.union(e % two_m, (o - 1) % two_m)

    kinds = _CORNER_KINDS[can.family]
    punctured_kinds = {("a", "b", "c")[i] for i in fi.puncture_flags}
    orbits = []
    for idx, corners in enumerate(uf.classes()):
        parities = {c % 2 for c in corners}
        if len(parities) != 1:
            raise InvariantViolation(
                f"corner orbit {corners} mixes odd and even corners")
        kind = kinds["odd"] if corners[0] % 2 else kinds["even"]
        orbits.append(VertexOrbit(
            idx, kind, corners, kind in punctured_kinds))

    by_kind: dict[str, int] = {}
    for orbit in orbits:
        by_kind[orbit.kind] = by_kind.get(orbit.kind, 0) + 1
    if by_kind.get("c", 0) != fi.d:
        raise InvariantViolation(
            f"{by_kind.get('c', 0)} boundary c-vertices, expected {fi.d}")
    interior = []
    for kind in kinds["interior"]:
        count = _lift_count(group, hom, kind)
        interior.append(InteriorPoint(kind, count, kind in punctured_kinds))
    boundary_kind = kinds["odd"] if kinds["even"] == "c" else kinds["even"]
    missing = _lift_count(group, hom, boundary_kind) - by_kind.get(
        boundary_kind, 0)
    if missing < 0:
        raise InvariantViolation(
            f"more boundary {boundary_kind}-vertices than lifts")
    if missing:
        interior.append(InteriorPoint(
            boundary_kind, missing, boundary_kind in punctured_kinds))

    surface = TessellatedSurface(
        can, m, pattern, tuple(pairs), tuple(orbits), tuple(interior), fi)
    chi = surface.euler_characteristic
    if chi != fi.euler_compact():
        raise InvariantViolation(
            f"chi = {chi} != 2 - 2g = {fi.euler_compact()} "
            f"for {can.label()}")
    if surface.puncture_count != fi.k:
        raise InvariantViolation(
            f"{surface.puncture_count} punctures != k = {fi.k} "
            f"for {can.label()}")
    if chi - surface.puncture_count != fi.euler_punctured():
        raise InvariantViolation(
            f"punctured chi mismatch for {can.label()}")
    return surface


# ---------------------------------------------------------------------------
# The Seidel complex


_ARCS: Mapping[str, tuple[str, str]] = {
    "U1": ("X", "Y"), "U2": ("Y", "Z"), "U3": ("Z", "X"),
    "D1": ("X", "Y"), "D2": ("Y", "Z"), "D3": ("Z", "X"),
}

_CIRCLE_ORDER = ("U1", "D2", "U3", "D1", "U2", "D3")

_QUOTIENT_FACES: Mapping[str, tuple[tuple[str, int], ...]] = {
    "T_front": (("U1", 1), ("U2", 1), ("U3", 1)),
    "T_back": (("D3", -1), ("D2", -1), ("D1", -1)),
    "M_C": (("D1", 1), ("U1", -1)),
    "M_A": (("D2", 1), ("U2", -1)),
    "M_B": (("D3", 1), ("U3", -1)),
}

# lens face -> (upper arc, lower arc, enclosed point kind, loop index)
_LENS_DATA = {
    "M_C": ("U1", "D1", "c", 3),
    "M_A": ("U2", "D2", "a", 1),
    "M_B": ("U3", "D3", "b", 2),
}

# Counterclockwise rotation at each crossing: four arc ends, each tagged
# with the direction ("out" of or "in" to the vertex) and the lift-index
# offset of the arc lift incident to X_g / Y_g / Z_g.
_ROTATIONS = {
    "X": (("U1", "out", ()), ("U3", "in", ()),
          ("D3", "in", (-1, 2)), ("D1", "out", ())),
    "Y": (("U2", "out", ()), ("U1", "in", ()),
          ("D1", "in", (-1, 3)), ("D2", "out", ())),
    "Z": (("U3", "out", ()), ("U2", "in", ()),
          ("D2", "in", (-1, 1)), ("D3", "out", ())),
}


@dataclass(frozen=True)
class LensFace:
    """A bigon face of the quotient enclosing one orbifold point."""

    name: str
    arc_up: str
    arc_down: str
    point_kind: str
    holonomy: Element
    order: int
    punctured: bool


@dataclass(frozen=True)
class SeidelComplex:
    """The immersed-circle complex on the quotient sphere and its lift.

    The quotient has vertices X, Y, Z, six arcs and five faces (two
    triangles, three lens bigons).  Lifted tiles are ``(label, face)``
    pairs where the label is a symmetry-group element for triangles and
    the minimal coset representative of the lens holonomy subgroup for
    lens faces.
    """

    polynomial: InvertiblePolynomial
    group: DiagonalSymmetryGroup
    hom: CoveringHom
    invariants: FiberInvariants
    lenses: tuple[LensFace, ...]
    red_dot_arc: str
    tiles: tuple[Tile, ...]
    edge_incidence: Mapping[tuple[str, Element], tuple[Tile, Tile]]

    @property
    def vertices(self) -> tuple[str, str, str]:
        return ("X", "Y", "Z")

    @property
    def arcs(self) -> Mapping[str, tuple[str, str]]:
        return dict(_ARCS)

    @property
    def circle_traversal(self) -> tuple[str, ...]:
        return _CIRCLE_ORDER

    @property
    def quotient_faces(self) -> Mapping[str, tuple[tuple[str, int], ...]]:
        return {k: v for k, v in _QUOTIENT_FACES.items()}

    @property
    def quotient_euler_characteristic(self) -> int:
        return 3 - 6 + 5

    def lens(self, name: str) -> LensFace:
        for lens in self.lenses:
            if lens.name == name:
                return lens
        raise ValueError(f"unknown lens face {name!r}")

    @property
    def holonomies(self) -> tuple[Element, Element, Element]:
        """(d1, d2, d3) for (M_C, M_A, M_B); they sum to the identity."""
        return (self.lens("M_C").holonomy, self.lens("M_A").holonomy,
                self.lens("M_B").holonomy)

    @property
    def puncture_faces(self) -> frozenset:
        return frozenset(
            lens.name for lens in self.lenses if lens.punctured)

    def face_copies(self, face: str) -> int:
        return sum(1 for _, name in self.tiles if name == face)

    def sheet_count(self, face: str) -> int:
        """Pullback sheets of a quotient face: always |G_W| (free action)."""
        if face not in _QUOTIENT_FACES:
            raise ValueError(f"unknown face {face!r}")
        return self.group.order

    def lens_tile(self, name: str, g: Element) -> Tile:
        """The lens tile of face ``name`` over the coset of ``g``."""
        lens = self.lens(name)
        coset = sorted(
            self.group.add(g, self.group.scale(k, lens.holonomy))
            for k in range(lens.order))
        return (coset[0], name)

    def tile_boundary(self, tile: Tile) -> tuple[
            tuple[str, Element, int], ...]:
        """Counterclockwise boundary word of a lifted tile.

        Entries are (arc, lift index, sign); sign -1 traverses the arc lift
        against its orientation.
        """
        label, face = tile
        g = self.group.normalize(label)
        d1, d2, _ = self.holonomies
        if face == "T_front":
            return (("U1", g, 1), ("U2", g, 1), ("U3", g, 1))
        if face == "T_back":
            return (("D3", self.group.add(g, self.group.add(d1, d2)), -1),
                    ("D2", self.group.add(g, d1), -1), ("D1", g, -1))
        lens = self.lens(face)
        word = []
        h = g
        for _ in range(lens.order):
            step = self.group.add(h, lens.holonomy)
            word.append((lens.arc_down, h, 1))
            word.append((lens.arc_up, step, -1))
            h = step
        if h != g:
            raise InvariantViolation(
                f"lens boundary of {tile} does not close")
        return tuple(word)

    def arc_endpoints(self, arc: str, g: Element) -> tuple[
            tuple[str, Element], tuple[str, Element]]:
        """Tail and head vertices (name, label) of the arc lift (arc, g).

        Lifts of U1..U3 start and end at index g; the back arcs advance the
        head by the holonomy of their lens: (D1, g) runs from X_g to
        Y_{g+d1}, (D2, g) from Y_g to Z_{g+d2}, (D3, g) from Z_g to
        X_{g+d3}.
        """
        g = self.group.normalize(g)
        tail, head = _ARCS[arc]
        if arc.startswith("U"):
            return ((tail, g), (head, g))
        lens_name = {"D1": "M_C", "D2": "M_A", "D3": "M_B"}[arc]
        return ((tail, g),
                (head, self.group.add(g, self.lens(lens_name).holonomy)))

    def vertex_rotation(self, vertex: str, g: Element) -> tuple[
            tuple[str, str, Element], ...]:
        """The four arc ends around a lifted crossing, counterclockwise.

        Entries are (arc, "out" | "in", lift index).
        """
        g = self.group.normalize(g)
        out = []
        for arc, direction, offset in _ROTATIONS[vertex]:
            if offset:
                scale, loop = offset
                shift = self.group.scale(scale, self.hom.image_of(loop))
                out.append((arc, direction, self.group.add(g, shift)))
            else:
                out.append((arc, direction, g))
        return tuple(out)


def build_seidel_complex(
        w: InvertiblePolynomial, red_dot_arc: str = "D1") -> SeidelComplex:
    """The immersed-circle complex for W, with its symmetry-group lift.

    >>> s = build_seidel_complex(fermat(3, 4))
    >>> (s.quotient_euler_characteristic, s.face_copies("M_A"))
    (2, 4)
    """
    if red_dot_arc not in _ARCS:
        raise ValueError(f"unknown arc {red_dot_arc!r} for the red dot")
    can, _ = canonical_form(w)
    fi = fiber_invariants(can)
    group, _, _ = symmetry_and_weights(can)
    hom = covering_homomorphism(can)

    punctured_kinds = {("a", "b", "c")[i] for i in fi.puncture_flags}
    lenses = []
    for name, (arc_up, arc_down, kind, loop) in _LENS_DATA.items():
        holonomy = hom.image_of(loop)
        lenses.append(LensFace(
            name, arc_up, arc_down, kind, holonomy,
            group.element_order(holonomy), kind in punctured_kinds))
    d_total = group.identity
    for lens in lenses:
        d_total = group.add(d_total, lens.holonomy)
    if d_total != group.identity:
        raise InvariantViolation(
            f"lens holonomies sum to {d_total}, not the identity")

    complex_ = SeidelComplex(
        can, group, hom, fi, tuple(lenses), red_dot_arc, (), {})

    tiles: list[Tile] = []
    for g in group.elements():
        tiles.append((g, "T_front"))
        tiles.append((g, "T_back"))
    for lens in lenses:
        reps = set()
        for g in group.elements():
            reps.add(complex_.lens_tile(lens.name, g))
        tiles.extend(sorted(reps))

    d1, d2, _d3 = (complex_.lens("M_C").holonomy,
                   complex_.lens("M_A").holonomy,
                   complex_.lens("M_B").holonomy)
    incidence: dict[tuple[str, Element], tuple[Tile, Tile]] = {}
    for g in group.elements():
        incidence[("U1", g)] = ((g, "T_front"),
                                complex_.lens_tile("M_C", g))
        incidence[("U2", g)] = ((g, "T_front"),
                                complex_.lens_tile("M_A", g))
        incidence[("U3", g)] = ((g, "T_front"),
                                complex_.lens_tile("M_B", g))
        incidence[("D1", g)] = ((g, "T_back"),
                                complex_.lens_tile("M_C", g))
        incidence[("D2", g)] = ((group.add(g, group.neg(d1)), "T_back"),
                                complex_.lens_tile("M_A", g))
        incidence[("D3", g)] = (
            (group.add(g, group.neg(group.add(d1, d2))), "T_back"),
            complex_.lens_tile("M_B", g))

    built = SeidelComplex(
        can, group, hom, fi, tuple(lenses), red_dot_arc,
        tuple(tiles), incidence)
    _check_seidel(built)
    return built


def _check_seidel(s: SeidelComplex):
    group = s.group
    expected = 2 * group.order + sum(
        group.order // lens.order for lens in s.lenses)
    if len(s.tiles) != len(set(s.tiles)) or len(s.tiles) != expected:
        raise InvariantViolation(
            f"{len(s.tiles)} tiles, expected {expected}")
    for lens in s.lenses:
        copies = s.face_copies(lens.name)
        if copies * lens.order != group.order:
            raise InvariantViolation(
                f"{copies} copies of {lens.name} with stabilizer order "
                f"{lens.order} in a group of order {group.order}")
    sides: dict[tuple[str, Element], int] = {}
    for tile in s.tiles:
        word = s.tile_boundary(tile)
        starts, stops = [], []
        for arc, g, sign in word:
            tail, head = s.arc_endpoints(arc, g)
            starts.append(tail if sign == 1 else head)
            stops.append(head if sign == 1 else tail)
        for i, start in enumerate(starts):
            if start != stops[i - 1]:
                raise InvariantViolation(
                    f"boundary of {tile} breaks at position {i}")
        for arc, g, _ in word:
            sides[(arc, g)] = sides.get((arc, g), 0) + 1
            if tile not in s.edge_incidence[(arc, g)]:
                raise InvariantViolation(
                    f"tile {tile} missing from incidence of ({arc}, {g})")
    if any(count != 2 for count in sides.values()):
        raise InvariantViolation("an arc lift without two face sides")
    if len(sides) != 6 * group.order:
        raise InvariantViolation(
            f"{len(sides)} arc lifts, expected {6 * group.order}")
    chi = 3 * group.order - 6 * group.order + len(s.tiles)
    if chi != s.invariants.euler_compact():
        raise InvariantViolation(
            f"lifted chi = {chi} != {s.invariants.euler_compact()}")
    punctures = sum(
        s.face_copies(lens.name) for lens in s.lenses if lens.punctured)
    if punctures != s.invariants.k:
        raise InvariantViolation(
            f"{punctures} puncture faces != k = {s.invariants.k}")


# ---------------------------------------------------------------------------
# Invariant reporting and navigation


def surface_invariants(s) -> tuple[int, int, int, tuple[OrbitRecord, ...]]:
    """(Euler characteristic, genus, puncture count, orbit table).

    >>> surface_invariants(build_tessellation(fermat(5, 2)))[:3]
    (-2, 2, 1)
    >>> surface_invariants(build_tessellation(chain(2, 4)))[:3]
    (-4, 3, 2)
    """
    if isinstance(s, TessellatedSurface):
        chi = s.euler_characteristic
        records = [
            OrbitRecord(f"v{o.index}", o.kind, o.size, o.punctured)
            for o in s.vertex_orbits]
        records.extend(
            OrbitRecord(f"interior-{pt.kind}", pt.kind, pt.count,
                        pt.punctured)
            for pt in s.interior_points)
        k = s.puncture_count
    elif isinstance(s, SeidelComplex):
        chi = (3 * s.group.order - 6 * s.group.order + len(s.tiles))
        records = [OrbitRecord(v, "crossing", s.group.order, False)
                   for v in s.vertices]
        for face in ("T_front", "T_back"):
            records.append(OrbitRecord(face, "triangle",
                                       s.face_copies(face), False))
        for lens in s.lenses:
            records.append(OrbitRecord(
                lens.name, f"lens-{lens.point_kind}",
                s.face_copies(lens.name), lens.punctured))
        k = sum(s.face_copies(lens.name) for lens in s.lenses
                if lens.punctured)
    else:
        raise TypeError(f"unsupported surface {type(s).__name__}")
    genus2 = 2 - chi
    if genus2 % 2:
        raise InvariantViolation(f"odd 2g = {genus2}")
    return (chi, genus2 // 2, k, tuple(records))


_TESS_ARC_ALIASES = {"gamma1": "ca"}


def lift_step(s, tile, crossing, allow_punctures: bool = False):
    """The tile adjacent to ``tile`` across ``crossing``.

    For a ``TessellatedSurface``, tiles are ``(g, "front" | "back")`` cells
    of the equator tiling and the crossing is a quotient arc name "ab",
    "bc" or "ca" ("gamma1" is accepted for "ca": crossing it from the
    front cell multiplies the label by the deck image of the loop around
    the order-a point).  For a ``SeidelComplex``, tiles are its lifted
    tiles and the crossing is an arc lift ``(arc, g)``.

    >>> ts = build_tessellation(fermat(3, 4))
    >>> lift_step(ts, ((0, 0), "front"), "gamma1")
    ((1, 0), 'back')
    >>> lift_step(ts, lift_step(ts, ((0, 0), "front"), "bc"), "bc")
    ((0, 0), 'front')
    """
    if isinstance(s, TessellatedSurface):
        return _lift_step_tessellation(s, tile, crossing)
    if isinstance(s, SeidelComplex):
        return _lift_step_seidel(s, tile, crossing, allow_punctures)
    raise TypeError(f"unsupported surface {type(s).__name__}")


def _lift_step_tessellation(s: TessellatedSurface, tile, crossing):
    group, _, _ = symmetry_and_weights(s.polynomial)
    hom = covering_homomorphism(s.polynomial)
    label, cell = tile
    if cell not in ("front", "back"):
        raise ValueError(f"unknown cell {cell!r}")
    arc = _TESS_ARC_ALIASES.get(crossing, crossing)
    offsets = {
        "ab": group.identity,
        "bc": group.neg(hom.image_of(2)),
        "ca": hom.image_of(1),
    }
    if arc not in offsets:
        raise ValueError(f"unknown arc {crossing!r}")
    g = group.normalize(label)
    if cell == "front":
        return (group.add(g, offsets[arc]), "back")
    return (group.add(g, group.neg(offsets[arc])), "front")


def _lift_step_seidel(s: SeidelComplex, tile, crossing,
                      allow_punctures: bool):
    arc, g = crossing
    key = (arc, s.group.normalize(g))
    if key not in s.edge_incidence:
        raise ValueError(f"unknown arc lift {crossing!r}")
    label, face = tile
    if face in ("T_front", "T_back"):
        tile = (s.group.normalize(label), face)
    else:
        tile = s.lens_tile(face, label)
    first, second = s.edge_incidence[key]
    if tile == first:
        target = second
    elif tile == second:
        target = first
    else:
        raise ValueError(f"crossing {crossing!r} is not on tile {tile!r}")
    if not allow_punctures and target[1] in s.puncture_faces:
        raise BoundaryEdge(
            f"arc lift {crossing!r} borders puncture face {target[1]}")
    return target


# ---------------------------------------------------------------------------
# Emitters


def cell_complex_json(s) -> str:
    """A deterministic JSON description of a built surface."""
    if isinstance(s, TessellatedSurface):
        chi, genus, k, _ = surface_invariants(s)
        data = {
            "model": "tessellation",
            "polynomial": str(s.polynomial),
            "edges": 2 * s.m,
            "pattern": s.pattern,
            "edge_pairs": [list(p) for p in s.edge_pairs],
            "vertex_orbits": [
                {"index": o.index, "kind": o.kind,
                 "corners": list(o.corners), "punctured": o.punctured}
                for o in s.vertex_orbits],
            "interior_points": [
                {"kind": pt.kind, "count": pt.count,
                 "punctured": pt.punctured}
                for pt in s.interior_points],
            "euler_characteristic": chi,
            "genus": genus,
            "punctures": k,
        }
    elif isinstance(s, SeidelComplex):
        chi, genus, k, _ = surface_invariants(s)
        data = {
            "model": "seidel",
            "polynomial": str(s.polynomial),
            "vertices": list(s.vertices),
            "arcs": {name: list(ends) for name, ends in s.arcs.items()},
            "circle_traversal": list(s.circle_traversal),
            "red_dot_arc": s.red_dot_arc,
            "lenses": [
                {"name": lens.name, "point": lens.point_kind,
                 "holonomy": list(lens.holonomy), "order": lens.order,
                 "punctured": lens.punctured}
                for lens in s.lenses],
            "tiles": [[list(label), face] for label, face in s.tiles],
            "euler_characteristic": chi,
            "genus": genus,
            "punctures": k,
        }
    else:
        raise TypeError(f"unsupported surface {type(s).__name__}")
    return json.dumps(data, sort_keys=True, indent=2)


_SVG_COLORS = ("#c6dbef", "#fdd0a2", "#c7e9c0", "#dadaeb", "#fee0d2",
               "#d9d9d9", "#fff7bc", "#e5f5e0")


def _polygon_points(n: int, radius: float = 200.0,
                    center: float = 250.0) -> list[tuple[float, float]]:
    import math
    pts = []
    for i in range(n):
        angle = math.pi / 2 + 2 * math.pi * i / n
        pts.append((center + radius * math.cos(angle),
                    center - radius * math.sin(angle)))
    return pts


def tessellation_svg(s: TessellatedSurface) -> str:
    """An SVG drawing of the 2m-gon: edge identifications are shown by
    matching colors and arrowheads, fundamental domains by interior
    wedges, corners by their vertex-orbit label."""
    two_m = 2 * s.m
    pts = _polygon_points(two_m)
    center = (250.0, 250.0)
    family = s.polynomial.family
    if family is Family.FERMAT:
        region = 2 * s.polynomial.q - 2
    else:
        region = 2
    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="500" height="500" '
        'viewBox="0 0 500 500">',
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="8" refY="5" '
        'markerWidth="6" markerHeight="6" orient="auto-start-reverse">'
        '<path d="M 0 0 L 10 5 L 0 10 z" fill="context-stroke"/>'
        '</marker></defs>',
        f'<title>{s.polynomial} : {two_m}-gon, pattern +/-{s.pattern}'
        '</title>',
    ]
    for start in range(0, two_m, region):
        wedge = [center] + [pts[(start + i) % two_m]
                            for i in range(region + 1)]
        path = " ".join(f"{x:.1f},{y:.1f}" for x, y in wedge)
        color = _SVG_COLORS[(start // region) % len(_SVG_COLORS)]
        out.append(f'<polygon points="{path}" fill="{color}" '
                   'stroke="none" opacity="0.5"/>')
    pair_index = {}
    for idx, (e, o) in enumerate(s.edge_pairs):
        pair_index[e] = idx
        pair_index[o] = idx
    for i in range(1, two_m + 1):
        (x1, y1), (x2, y2) = pts[(i - 1) % two_m], pts[i % two_m]
        color = _SVG_COLORS[pair_index[i] % len(_SVG_COLORS)]
        out.append(
            f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" '
            f'y2="{y2:.1f}" stroke="{color}" stroke-width="4" '
            'marker-end="url(#arrow)"/>')
        mx, my = (x1 + x2) / 2, (y1 + y2) / 2
        ox, oy = (mx - 250.0) * 1.12 + 250.0, (my - 250.0) * 1.12 + 250.0
        out.append(
            f'<text x="{ox:.1f}" y="{oy:.1f}" font-size="11" '
            f'text-anchor="middle">a{i}/e{pair_index[i] + 1}</text>')
    for corner in range(two_m):
        orbit = s.corner_orbit(corner)
        x, y = pts[corner]
        fill = "#d62728" if orbit.punctured else "#1f77b4"
        out.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="4" '
                   f'fill="{fill}"/>')
        ox = (x - 250.0) * 1.22 + 250.0
        oy = (y - 250.0) * 1.22 + 250.0
        out.append(
            f'<text x="{ox:.1f}" y="{oy:.1f}" font-size="10" '
            f'text-anchor="middle">{orbit.kind}{orbit.index}</text>')
    out.append("</svg>")
    return "\n".join(out)
