"""Exact polygon counting for test curves on the lifted Seidel complex.

The Seidel Lagrangian lifts to the Milnor-fiber tessellation built in
:mod:`curvemirror.surface_topology`.  This module refines that cell
complex along a finite set of combinatorial test curves, develops
candidate polygons in the universal cover of the fiber, and assembles
the verified counts into matrix factorizations of the disc potential:
the localized mirror functor on objects and on morphisms.

All arithmetic is exact.  Positions along arcs are fractions, the tile
geometry uses rational points on the unit circle, and every sign is an
integer computation.  No cap is applied silently: enumeration that hits
a depth cap raises :class:`DepthCapReached`, and derived quantities
raise :class:`Incomplete` or :class:`Mismatch` instead of degrading.

Conventions
-----------

* A *test curve* is a chain of straight chords, one per lifted tile,
  recorded as :class:`CurveSegment` entries.  Open curves start and end
  at punctures of lens tiles; closed curves chain around cyclically.
* Crossings with the Lagrangian are triples ``(arc, lift, frac)`` with
  ``frac`` strictly between 0 and 1 measured along the oriented arc.
* Boundary points of a tile sit on a circular arc at the rational
  point ``((1-u^2)/(1+u^2), 2u/(1+u^2))`` where ``u = t - S/2``, ``t``
  is the position along the counterclockwise boundary word and ``S`` is
  the number of sides.  Punctures sit at the origin; for every
  punctured tile the origin is checked to be interior.
* A polygon is accepted only when its boundary develops to an embedded
  disc in the universal cover: the Euler characteristic of the fill is
  checked, no filled face may carry a puncture, and no puncture vertex
  may be interior.
* Signs: fix the output corner ``x_0`` and list the corners
  ``x_0 ... x_K`` counterclockwise, with side ``L_i`` running from
  ``x_i`` to ``x_{i+1}``.  A side other than ``L_0`` traversed against
  its curve orientation contributes ``(-1)^{|x_i|}``, the final side
  ``L_K`` contributing an extra ``(-1)^{|x_0|}``.  Every passage over
  the orientation dot or over a spin marker contributes ``(-1)``.
  Polygons counted for the disc potential instead pick up
  ``(-1)^{|x_i|}`` on every reversed side, with no exemption.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from importlib import resources
from typing import Iterator, Sequence

from .mf_algebra import (
    MatrixFactorization,
    MFMorphism,
    NotAFactorization,
    NotClosed,
    cone,
    make_mf,
    restrict,
    verify_chain_data,
    zero_object,
)
from .polyring import RingMatrix, SparsePoly
from .singularity_core import mirror_data
from .surface_topology import InvariantViolation, SeidelComplex, lift_step

__all__ = [
    "NonTransverse",
    "DepthCapReached",
    "Incomplete",
    "Mismatch",
    "CurveSegment",
    "CombinatorialCurve",
    "IntersectionPoint",
    "CurveCrossing",
    "WedgeGenerator",
    "PolygonContribution",
    "curve_from_json",
    "curve_to_json",
    "named_curve",
    "list_named_curves",
    "validate_curve",
    "translated_curve",
    "reversed_curve",
    "intersect",
    "enumerate_polygons",
    "mirror_object",
    "curve_crossings",
    "crossing_degree",
    "puncture_wedges",
    "mirror_morphism",
    "count_disc_potential",
    "surgery_cone_triangle",
    "seidel_pushoff_curve",
    "search_test_curves",
    "signed_permutation_match",
    "polygon_report_json",
    "DEPTH_CAP_DEFAULT",
    "RED_DOT_FRAC_DEFAULT",
]

DEPTH_CAP_DEFAULT = 64
RED_DOT_FRAC_DEFAULT = Fraction(1, 7)

# Orientation conventions calibrated against the worked examples: a
# transversal crossing of two test curves is odd exactly when the
# ordered pair of travel directions (first curve, second curve) is
# positively oriented; the parity of a puncture wedge additionally
# flips with the side of the sector; and every structure constant of a
# morphism carries a global sign.
_CURVE_CROSS_ODD_IF_POSITIVE = True
_WEDGE_PARITY_FLIP = False
_MORPHISM_SIGN = -1

_VAR_OF_LETTER = {"X": "x", "Y": "y", "Z": "z"}


class NonTransverse(ValueError):
    """Curve data is degenerate; perturb the crossing fractions."""


class DepthCapReached(RuntimeError):
    """Enumeration was cut by the depth cap; partial results attached."""

    def __init__(self, message: str, contributions: tuple = ()):
        super().__init__(message)
        self.contributions = contributions


class Incomplete(RuntimeError):
    """A derived object could not be certified complete."""


class Mismatch(RuntimeError):
    """An independently known value disagrees with the counted one."""


# ---------------------------------------------------------------------------
# curve data


@dataclass(frozen=True)
class CurveSegment:
    """One straight chord of a test curve inside a lifted tile.

    ``entry`` and ``exit`` are crossings ``(arc, lift, frac)`` on the
    tile boundary, or ``None`` at an end segment, where the chord runs
    to the puncture of the tile instead.  ``marks`` counts spin markers
    carried by the chord.
    """

    tile: tuple
    entry: tuple | None
    exit: tuple | None
    marks: int = 0


@dataclass(frozen=True)
class CombinatorialCurve:
    """An embedded test curve on the lifted complex."""

    name: str
    segments: tuple
    closed: bool = False

    def key(self) -> str:
        return curve_to_json(self)


def _normalize_crossing(s: SeidelComplex, crossing):
    if crossing is None:
        return None
    arc, lift, frac = crossing
    frac = Fraction(frac)
    if not 0 < frac < 1:
        raise ValueError(f"crossing fraction {frac} is not strictly inside (0, 1)")
    lift = s.group.normalize(lift)
    if (arc, lift) not in s.edge_incidence:
        raise ValueError(f"unknown arc lift ({arc!r}, {lift})")
    return (arc, lift, frac)


def _normalize_tile(s: SeidelComplex, tile):
    label, face = tile
    if face in ("T_front", "T_back"):
        return (s.group.normalize(label), face)
    return s.lens_tile(face, label)


def validate_curve(s: SeidelComplex, curve: CombinatorialCurve) -> CombinatorialCurve:
    """Normalize labels and check the chaining invariants of a curve.

    Consecutive segments must share their crossing, the shared arc lift
    must separate the two tiles, end segments must sit in punctured
    tiles, and no crossing may be used twice.  Returns the normalized
    curve.
    """
    if not curve.segments:
        raise ValueError(f"curve {curve.name!r} has no segments")
    segs = tuple(
        CurveSegment(
            _normalize_tile(s, seg.tile),
            _normalize_crossing(s, seg.entry),
            _normalize_crossing(s, seg.exit),
            int(seg.marks),
        )
        for seg in curve.segments
    )
    cur = CombinatorialCurve(curve.name, segs, curve.closed)
    if len(segs) == 1 and segs[0].entry is None and segs[0].exit is None:
        if curve.closed:
            raise ValueError(
                f"curve {curve.name!r}: a single free segment must be open")
        if segs[0].tile[1] not in s.puncture_faces:
            raise ValueError(
                f"curve {curve.name!r} ends in unpunctured tile {segs[0].tile}")
        return cur
    if cur.closed:
        if len(segs) < 2:
            raise ValueError(f"closed curve {curve.name!r} is too short")
        pairs = [(i, (i + 1) % len(segs)) for i in range(len(segs))]
        for seg in segs:
            if seg.entry is None or seg.exit is None:
                raise ValueError(
                    f"closed curve {curve.name!r} has a free segment end")
    else:
        pairs = [(i, i + 1) for i in range(len(segs) - 1)]
        if segs[0].entry is not None or segs[-1].exit is not None:
            raise ValueError(
                f"open curve {curve.name!r} must start and end at punctures")
        for tile in (segs[0].tile, segs[-1].tile):
            if tile[1] not in s.puncture_faces:
                raise ValueError(
                    f"curve {curve.name!r} ends in unpunctured tile {tile}")
        for i, seg in enumerate(segs):
            if 0 < i and seg.entry is None:
                raise ValueError(f"curve {curve.name!r}: segment {i} lacks entry")
            if i < len(segs) - 1 and seg.exit is None:
                raise ValueError(f"curve {curve.name!r}: segment {i} lacks exit")
    for i, j in pairs:
        a, b = segs[i], segs[j]
        if a.exit != b.entry:
            raise ValueError(
                f"curve {curve.name!r}: segments {i} and {j} do not share "
                f"a crossing ({a.exit} vs {b.entry})")
        arc, lift, _ = a.exit
        step = lift_step(s, a.tile, (arc, lift), allow_punctures=True)
        if _normalize_tile(s, step) != b.tile:
            raise ValueError(
                f"curve {curve.name!r}: crossing ({arc!r}, {lift}) does not "
                f"lead from {a.tile} to {b.tile}")
    for seg in segs:
        if seg.entry is not None and seg.entry == seg.exit:
            raise NonTransverse(
                f"curve {curve.name!r} runs along an arc at {seg.entry}")
    counts: dict = {}
    for i, _ in pairs:
        crossing = segs[i].exit
        counts[crossing] = counts.get(crossing, 0) + 1
    for key, n in counts.items():
        if n > 1:
            raise ValueError(f"curve {curve.name!r} reuses the crossing {key}")
    return cur


def reversed_curve(curve: CombinatorialCurve, name: str | None = None) -> CombinatorialCurve:
    """The same curve traversed backwards."""
    segs = tuple(
        CurveSegment(seg.tile, seg.exit, seg.entry, seg.marks)
        for seg in reversed(curve.segments)
    )
    return CombinatorialCurve(name or curve.name, segs, curve.closed)


def curve_at_fraction(curve: CombinatorialCurve, frac,
                      name: str | None = None) -> CombinatorialCurve:
    """The same curve with every crossing slid to position ``frac``.

    Sliding keeps the tile-and-arc combinatorics; it is used to keep a
    pair of curves transversal when both would otherwise cross an arc
    lift at the same point.
    """
    frac = Fraction(frac)

    def slide(c):
        if c is None:
            return None
        arc, lift, _ = c
        return (arc, lift, frac)

    segs = tuple(
        CurveSegment(seg.tile, slide(seg.entry), slide(seg.exit), seg.marks)
        for seg in curve.segments
    )
    return CombinatorialCurve(name or curve.name, segs, curve.closed)


def translated_curve(s: SeidelComplex, curve: CombinatorialCurve, g,
                     name: str | None = None) -> CombinatorialCurve:
    """The image of a curve under the deck translation by ``g``."""
    g = s.group.normalize(g)

    def move_crossing(c):
        if c is None:
            return None
        arc, lift, frac = c
        return (arc, s.group.add(lift, g), frac)

    segs = tuple(
        CurveSegment(
            _normalize_tile(s, (s.group.add(seg.tile[0], g), seg.tile[1])),
            move_crossing(seg.entry), move_crossing(seg.exit), seg.marks)
        for seg in curve.segments
    )
    return CombinatorialCurve(name or curve.name, segs, curve.closed)


def _crossing_to_json(c):
    if c is None:
        return None
    arc, lift, frac = c
    return [arc, list(lift), str(frac)]


def _crossing_from_json(c):
    if c is None:
        return None
    arc, lift, frac = c
    return (arc, tuple(lift), Fraction(frac))


def curve_to_json(curve: CombinatorialCurve) -> str:
    """Serialize a curve; inverse of :func:`curve_from_json`."""
    doc = {
        "name": curve.name,
        "closed": curve.closed,
        "segments": [
            {
                "tile": [list(seg.tile[0]), seg.tile[1]],
                "entry": _crossing_to_json(seg.entry),
                "exit": _crossing_to_json(seg.exit),
                "marks": seg.marks,
            }
            for seg in curve.segments
        ],
    }
    return json.dumps(doc, sort_keys=True)


def curve_from_json(text) -> CombinatorialCurve:
    """Parse a curve from its JSON form (a string or a parsed dict)."""
    doc = json.loads(text) if isinstance(text, str) else text
    segs = tuple(
        CurveSegment(
            (tuple(seg["tile"][0]), seg["tile"][1]),
            _crossing_from_json(seg.get("entry")),
            _crossing_from_json(seg.get("exit")),
            int(seg.get("marks", 0)),
        )
        for seg in doc["segments"]
    )
    return CombinatorialCurve(doc["name"], segs, bool(doc.get("closed")))


def _curve_data() -> dict:
    path = resources.files("curvemirror").joinpath("data/curves.json")
    try:
        text = path.read_text()
    except FileNotFoundError:
        return {}
    return json.loads(text)


def list_named_curves(s: SeidelComplex) -> tuple[str, ...]:
    """Names of the stored test curves for this singularity."""
    label = s.polynomial.label()
    data = _curve_data().get(label, {})
    return tuple(sorted(data))


def named_curve(s: SeidelComplex, name: str) -> CombinatorialCurve:
    """Load a stored test curve by name for the singularity of ``s``."""
    label = s.polynomial.label()
    data = _curve_data().get(label, {})
    if name not in data:
        raise KeyError(
            f"no stored curve {name!r} for {label}; have {sorted(data)}")
    return validate_curve(s, curve_from_json(data[name]))


# ---------------------------------------------------------------------------
# exact planar helpers


def _point_on_circle(t: Fraction, sides: int) -> tuple:
    u = t - Fraction(sides, 2)
    d = 1 + u * u
    return ((1 - u * u) / d, 2 * u / d)


def _cross(a, b) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _angle_cmp(a, b) -> int:
    """Compare direction vectors counterclockwise from the +x axis."""
    ha = 0 if (a[1] > 0 or (a[1] == 0 and a[0] > 0)) else 1
    hb = 0 if (b[1] > 0 or (b[1] == 0 and b[0] > 0)) else 1
    if ha != hb:
        return -1 if ha < hb else 1
    c = _cross(a, b)
    if c == 0:
        raise NonTransverse("two directions coincide at a node; perturb fracs")
    return -1 if c > 0 else 1


def _segment_hit(a1, a2, b1, b2):
    """Interior intersection parameters of two straight segments.

    Returns ``None`` when disjoint, ``(t, u)`` with both strictly
    between 0 and 1 for a proper crossing, and raises
    :class:`NonTransverse` for any degenerate contact.
    """
    d1 = _sub(a2, a1)
    d2 = _sub(b2, b1)
    denom = _cross(d1, d2)
    w = _sub(b1, a1)
    if denom == 0:
        if _cross(w, d1) != 0:
            return None

        def param(p):
            q = _sub(p, a1)
            if d1[0] != 0:
                return q[0] / d1[0]
            return q[1] / d1[1]

        lo, hi = sorted((param(b1), param(b2)))
        if hi <= 0 or lo >= 1:
            return None
        raise NonTransverse("collinear curve chords overlap; perturb fracs")
    t = _cross(w, d2) / denom
    u = _cross(w, d1) / denom
    if t < 0 or t > 1 or u < 0 or u > 1:
        return None
    if t in (0, 1) or u in (0, 1):
        raise NonTransverse(
            "curve chords touch at an endpoint; perturb fracs")
    return (t, u)


# ---------------------------------------------------------------------------
# the refined complex


class _RefinedComplex:
    """The lifted tessellation subdivided along a set of test curves.

    Nodes are Seidel corners ``("v", name, g)``, curve crossings
    ``("x", arc, g, frac)``, interior curve-curve crossings
    ``("i", tile, k)`` and punctures ``("c", tile)``.  Edges are arc
    pieces ``("a", arc, g, j)`` and chord pieces
    ``("d", curve, segment, j)``, each carrying its oriented tail and
    head.  Faces keep the surface on their left.
    """

    def __init__(self, s: SeidelComplex, curves: Sequence[CombinatorialCurve],
                 red_dot_frac: Fraction):
        self.s = s
        self.red_dot_frac = Fraction(red_dot_frac)
        if not 0 < self.red_dot_frac < 1:
            raise ValueError(f"red dot fraction {red_dot_frac} out of range")
        self.curves: dict = {}
        for curve in curves:
            cur = validate_curve(s, curve)
            if cur.name in self.curves:
                raise ValueError(f"duplicate curve name {cur.name!r}")
            self.curves[cur.name] = cur
        self.pieces: dict = {}
        self.rotations: dict = {}
        self.left_tile: dict = {}
        self.node_point: dict = {}
        self.crossing_info: dict = {}
        self.interior_info: dict = {}
        self.faces: list = []
        self.halfedge_face: dict = {}
        self.puncture_nodes: set = set()
        self._build()

    def _chords_of(self, curve: CombinatorialCurve):
        segs = curve.segments
        if len(segs) == 1 and segs[0].entry is None and segs[0].exit is None:
            return []
        return list(enumerate(segs))

    def _build(self):
        s = self.s
        per_lift: dict = {}
        for curve in self.curves.values():
            segs = curve.segments
            n = len(segs)
            joints = range(n) if curve.closed else range(n - 1)
            for i in joints:
                arc, lift, frac = segs[i].exit
                table = per_lift.setdefault((arc, lift), {})
                if frac in table:
                    raise NonTransverse(
                        f"two curve crossings share ({arc!r}, {lift}, {frac})")
                table[frac] = curve.name
                self.crossing_info[("x", arc, lift, frac)] = {
                    "curve": curve.name,
                    "seg_out": i,
                    "seg_in": (i + 1) % n,
                }
        dot = self.red_dot_frac
        for (arc, lift), table in per_lift.items():
            if arc == s.red_dot_arc and dot in table:
                raise NonTransverse(
                    f"a crossing sits exactly on the orientation dot of "
                    f"({arc!r}, {lift}); perturb fracs")
        # arc pieces, split at the crossings
        self.arc_pieces: dict = {}
        for arc, lift in s.edge_incidence:
            fracs = sorted(per_lift.get((arc, lift), ()))
            tail, head = s.arc_endpoints(arc, lift)
            nodes = ([("v",) + tail]
                     + [("x", arc, lift, f) for f in fracs]
                     + [("v",) + head])
            ids = []
            for j in range(len(fracs) + 1):
                pid = ("a", arc, lift, j)
                lo = fracs[j - 1] if j > 0 else Fraction(0)
                hi = fracs[j] if j < len(fracs) else Fraction(1)
                self.pieces[pid] = {
                    "kind": "arc",
                    "tail": nodes[j],
                    "head": nodes[j + 1],
                    "curve": None,
                    "dot": arc == s.red_dot_arc and lo < dot < hi,
                    "marks": 0,
                    "tile": None,
                    "geom": None,
                }
                ids.append(pid)
            self.arc_pieces[(arc, lift)] = ids
        for key, (t1, t2) in s.edge_incidence.items():
            left = None
            for tile in (t1, t2):
                for barc, blift, sign in s.tile_boundary(tile):
                    if (barc, blift) == key and sign == 1:
                        left = tile
            if left is None:
                raise InvariantViolation(f"no left tile for arc lift {key}")
            self.left_tile[key] = left
        # per-tile boundary geometry
        tile_nodes: dict = {}
        for tile in s.tiles:
            word = s.tile_boundary(tile)
            sides = len(word)
            entries = []
            for i, (arc, lift, sign) in enumerate(word):
                tail, head = s.arc_endpoints(arc, lift)
                corner = tail if sign == 1 else head
                entries.append((Fraction(i), ("v",) + corner))
                for frac in per_lift.get((arc, lift), ()):
                    t = i + (frac if sign == 1 else 1 - frac)
                    entries.append((Fraction(t), ("x", arc, lift, frac)))
            entries.sort()
            for t, node in entries:
                self.node_point[(tile, node)] = _point_on_circle(t, sides)
            tile_nodes[tile] = entries
        # chords, one per curve segment
        chords_in: dict = {}
        chord_recs: dict = {}
        for curve in self.curves.values():
            for i, seg in self._chords_of(curve):
                tile = seg.tile
                ends = []
                for crossing in (seg.entry, seg.exit):
                    if crossing is None:
                        node = ("c", tile)
                        point = (Fraction(0), Fraction(0))
                        self.node_point[(tile, node)] = point
                    else:
                        node = ("x",) + crossing
                        point = self.node_point.get((tile, node))
                        if point is None:
                            raise InvariantViolation(
                                f"crossing {crossing} is not on the boundary "
                                f"of {tile}")
                    ends.append((node, point))
                (n1, p1), (n2, p2) = ends
                if p1 == p2:
                    raise NonTransverse(
                        f"curve {curve.name!r} has a degenerate chord in {tile}")
                rec = {
                    "curve": curve.name, "seg": i, "tile": tile,
                    "a": n1, "b": n2, "pa": p1, "pb": p2,
                    "marks": seg.marks,
                }
                chords_in.setdefault(tile, []).append(rec)
                chord_recs[(curve.name, i)] = rec
        origin = (Fraction(0), Fraction(0))
        for tile, recs in chords_in.items():
            if tile[1] not in s.puncture_faces:
                continue
            for rec in recs:
                if rec["a"] == ("c", tile) or rec["b"] == ("c", tile):
                    continue
                d = _sub(rec["pb"], rec["pa"])
                c = _cross(d, _sub(origin, rec["pa"]))
                if c == 0:
                    raise NonTransverse(
                        f"a chord of {rec['curve']!r} passes through the "
                        f"puncture of {tile}; perturb fracs")
        for tile in s.tiles:
            if tile[1] not in s.puncture_faces:
                continue
            pts = [self.node_point[(tile, node)] for _, node in tile_nodes[tile]]
            for k in range(len(pts)):
                a, b = pts[k], pts[(k + 1) % len(pts)]
                if _cross(_sub(b, a), _sub(origin, a)) <= 0:
                    raise InvariantViolation(
                        f"puncture of {tile} is not interior to its hull")
        # interior crossings between chords of different curves
        serial = itertools.count()
        cuts: dict = {}
        for tile, recs in chords_in.items():
            for r1, r2 in itertools.combinations(recs, 2):
                shared = {r1["a"], r1["b"]} & {r2["a"], r2["b"]}
                if shared:
                    if shared != {("c", tile)}:
                        raise InvariantViolation(
                            f"chords share a boundary crossing in {tile}")
                    continue
                hit = _segment_hit(r1["pa"], r1["pb"], r2["pa"], r2["pb"])
                if hit is None:
                    continue
                t, u = hit
                if r1["curve"] == r2["curve"]:
                    raise ValueError(
                        f"curve {r1['curve']!r} crosses itself in {tile}")
                node = ("i", tile, next(serial))
                point = (r1["pa"][0] + t * (r1["pb"][0] - r1["pa"][0]),
                         r1["pa"][1] + t * (r1["pb"][1] - r1["pa"][1]))
                self.node_point[(tile, node)] = point
                self.interior_info[node] = {
                    "tile": tile,
                    "chords": ((r1["curve"], r1["seg"]),
                               (r2["curve"], r2["seg"])),
                }
                cuts.setdefault((r1["curve"], r1["seg"]), []).append((t, node))
                cuts.setdefault((r2["curve"], r2["seg"]), []).append((u, node))
        # chord pieces, split at the interior crossings
        self.chord_pieces: dict = {}
        for (cname, seg), rec in chord_recs.items():
            lst = sorted(cuts.get((cname, seg), []))
            params = [t for t, _ in lst]
            if len(set(params)) != len(params):
                raise NonTransverse(
                    f"three chords meet at one point in {rec['tile']}; "
                    f"perturb fracs")
            nodes = [rec["a"]] + [n for _, n in lst] + [rec["b"]]
            points = ([rec["pa"]]
                      + [self.node_point[(rec["tile"], n)] for _, n in lst]
                      + [rec["pb"]])
            ids = []
            for j in range(len(nodes) - 1):
                pid = ("d", cname, seg, j)
                self.pieces[pid] = {
                    "kind": "chord",
                    "tail": nodes[j],
                    "head": nodes[j + 1],
                    "curve": cname,
                    "dot": False,
                    "marks": rec["marks"] if j == 0 else 0,
                    "tile": rec["tile"],
                    "geom": (points[j], points[j + 1]),
                }
                ids.append(pid)
            self.chord_pieces[(cname, seg)] = ids
        self._build_rotations(per_lift)
        self._build_faces()
        self._validate()

    def _travel_dir(self, end):
        """Direction of travel of the piece at the rotation entry ``end``."""
        pid, _ = end
        a, b = self.pieces[pid]["geom"]
        return _sub(b, a)

    def _outgoing_dir(self, end):
        pid, d = end
        a, b = self.pieces[pid]["geom"]
        return _sub(b, a) if d == 1 else _sub(a, b)

    def _build_rotations(self, per_lift):
        s = self.s
        vertices = set()
        for rec in self.pieces.values():
            for node in (rec["tail"], rec["head"]):
                if node[0] == "v":
                    vertices.add(node)
        for node in vertices:
            _, name, lift = node
            out = []
            for arc, direction, g in s.vertex_rotation(name, lift):
                ids = self.arc_pieces[(arc, g)]
                if direction == "out":
                    out.append((ids[0], 1))
                else:
                    out.append((ids[-1], -1))
            self.rotations[node] = out
        for node, info in self.crossing_info.items():
            _, arc, lift, frac = node
            fracs = sorted(per_lift[(arc, lift)])
            k = fracs.index(frac)
            ids = self.arc_pieces[(arc, lift)]
            fwd = (ids[k + 1], 1)
            bwd = (ids[k], -1)
            out_ids = self.chord_pieces[(info["curve"], info["seg_out"])]
            in_ids = self.chord_pieces[(info["curve"], info["seg_in"])]
            end_out = (out_ids[-1], -1)
            end_in = (in_ids[0], 1)
            tile_out = self.pieces[out_ids[-1]]["tile"]
            left = self.left_tile[(arc, lift)]
            if tile_out == left:
                left_end, right_end = end_out, end_in
            else:
                left_end, right_end = end_in, end_out
            self.rotations[node] = [fwd, left_end, bwd, right_end]
            info["exit_on_left"] = tile_out == left
        for node, info in self.interior_info.items():
            ends = []
            for cname, seg in info["chords"]:
                for pid in self.chord_pieces[(cname, seg)]:
                    rec = self.pieces[pid]
                    if rec["tail"] == node:
                        ends.append((pid, 1))
                    if rec["head"] == node:
                        ends.append((pid, -1))
            if len(ends) != 4:
                raise InvariantViolation(
                    f"interior node {node} has {len(ends)} ends")
            ends.sort(key=cmp_to_key(
                lambda a, b: _angle_cmp(self._outgoing_dir(a),
                                        self._outgoing_dir(b))))
            self.rotations[node] = ends
        centers: dict = {}
        for pid, rec in self.pieces.items():
            if rec["kind"] != "chord":
                continue
            if rec["tail"][0] == "c":
                centers.setdefault(rec["tail"], []).append((pid, 1))
            if rec["head"][0] == "c":
                centers.setdefault(rec["head"], []).append((pid, -1))
        for node, ends in centers.items():
            ends.sort(key=cmp_to_key(
                lambda a, b: _angle_cmp(self._outgoing_dir(a),
                                        self._outgoing_dir(b))))
            self.rotations[node] = ends
            self.puncture_nodes.add(node)

    def _halfedge_tail(self, halfedge):
        pid, d = halfedge
        rec = self.pieces[pid]
        return rec["tail"] if d == 1 else rec["head"]

    def _halfedge_tile(self, halfedge):
        """The tile on the left of a directed piece."""
        pid, d = halfedge
        rec = self.pieces[pid]
        if rec["kind"] == "arc":
            _, arc, lift, _ = pid
            t1, t2 = self.s.edge_incidence[(arc, lift)]
            left = self.left_tile[(arc, lift)]
            if d == 1:
                return left
            return t2 if left == t1 else t1
        return rec["tile"]

    def _build_faces(self):
        rot_index = {}
        for node, ends in self.rotations.items():
            for k, he in enumerate(ends):
                rot_index[he] = (node, k)
        seen = set()
        for pid in sorted(self.pieces, key=repr):
            for d in (1, -1):
                start = (pid, d)
                if start in seen:
                    continue
                cycle = []
                h = start
                while True:
                    cycle.append(h)
                    seen.add(h)
                    twin = (h[0], -h[1])
                    node, k = rot_index[twin]
                    ends = self.rotations[node]
                    h = ends[(k - 1) % len(ends)]
                    if h == start:
                        break
                    if h in seen:
                        raise InvariantViolation("face traversal collided")
                tiles = {self._halfedge_tile(he) for he in cycle}
                if len(tiles) != 1:
                    raise InvariantViolation(f"face mixes tiles {tiles}")
                tile = tiles.pop()
                idx = len(self.faces)
                self.faces.append({
                    "cycle": tuple(cycle),
                    "tile": tile,
                    "tri": tile[1] in ("T_front", "T_back"),
                    "punct": False,
                    "corners": tuple(self._halfedge_tail(he) for he in cycle),
                })
                for pos, he in enumerate(cycle):
                    self.halfedge_face[he] = (idx, pos)
        origin = (Fraction(0), Fraction(0))
        for tile in self.s.tiles:
            if tile[1] not in self.s.puncture_faces:
                continue
            if ("c", tile) in self.rotations:
                continue  # rays end at the puncture: it is a vertex instead
            hits = []
            for i, face in enumerate(self.faces):
                if face["tile"] != tile:
                    continue
                inside = True
                for he in face["cycle"]:
                    pid, d = he
                    rec = self.pieces[pid]
                    if rec["kind"] == "arc":
                        a = self.node_point[(tile, rec["tail"])]
                        b = self.node_point[(tile, rec["head"])]
                    else:
                        a, b = rec["geom"]
                    if d == -1:
                        a, b = b, a
                    if _cross(_sub(b, a), _sub(origin, a)) <= 0:
                        inside = False
                        break
                if inside:
                    hits.append(i)
            if len(hits) != 1:
                raise InvariantViolation(
                    f"puncture of {tile} lies in {len(hits)} faces")
            self.faces[hits[0]]["punct"] = True
        self.max_sides = max(len(f["cycle"]) for f in self.faces)
        self.valence = {node: len(ends) for node, ends in self.rotations.items()}

    def neighbor(self, face_idx: int, pos: int):
        he = self.faces[face_idx]["cycle"][pos]
        return self.halfedge_face[(he[0], -he[1])]

    def _validate(self):
        nodes = set()
        for rec in self.pieces.values():
            nodes.add(rec["tail"])
            nodes.add(rec["head"])
        for node, ends in self.rotations.items():
            for he in ends:
                if self._halfedge_tail(he) != node:
                    raise InvariantViolation(
                        f"rotation at {node} contains a foreign end {he}")
        if set(self.rotations) != nodes:
            raise InvariantViolation(
                f"rotation table mismatch at {nodes ^ set(self.rotations)}")
        total = sum(len(f["cycle"]) for f in self.faces)
        if total != 2 * len(self.pieces):
            raise InvariantViolation("faces do not partition the half-edges")
        chi = len(nodes) - len(self.pieces) + len(self.faces)
        expected = 2 - 2 * self.s.invariants.g
        if chi != expected:
            raise InvariantViolation(
                f"refined complex has Euler characteristic {chi}, "
                f"expected {expected}")


_REFINED_CACHE: dict = {}


def _refined(s: SeidelComplex, curves: Sequence[CombinatorialCurve],
             red_dot_frac) -> _RefinedComplex:
    key = (id(s), Fraction(red_dot_frac),
           tuple(sorted(c.key() for c in curves)))
    rc = _REFINED_CACHE.get(key)
    if rc is None or rc.s is not s:
        rc = _RefinedComplex(s, curves, Fraction(red_dot_frac))
        _REFINED_CACHE[key] = rc
    return rc


# ---------------------------------------------------------------------------
# intersection points with the Lagrangian


@dataclass(frozen=True)
class IntersectionPoint:
    """A crossing of a test curve with the Seidel Lagrangian."""

    index: int
    segment: int
    arc: str
    lift: tuple
    frac: Fraction
    degree: int
    label: str

    @property
    def node(self):
        return ("x", self.arc, self.lift, self.frac)


def _points_of(rc: _RefinedComplex, name: str) -> tuple:
    curve = rc.curves[name]
    segs = curve.segments
    n = len(segs)
    joints = range(n) if curve.closed else range(n - 1)
    points = []
    odd = even = 0
    for i in joints:
        arc, lift, frac = segs[i].exit
        degree = 1 if segs[i].tile == rc.left_tile[(arc, lift)] else 0
        if degree == 1:
            odd += 1
            label = f"o{odd}"
        else:
            even += 1
            label = f"e{even}"
        points.append(IntersectionPoint(len(points), i, arc, lift, frac,
                                        degree, label))
    return tuple(points)


def intersect(s: SeidelComplex, curve: CombinatorialCurve, *,
              extra_curves: Sequence[CombinatorialCurve] = (),
              red_dot_frac=RED_DOT_FRAC_DEFAULT) -> tuple:
    """The crossings of a test curve with the lifted Lagrangian.

    Points are ordered along the curve from its first segment; odd
    points are labelled ``o1, o2, ...`` and even points ``e1, e2, ...``.
    """
    curve = validate_curve(s, curve)
    rc = _refined(s, [curve, *extra_curves], red_dot_frac)
    return _points_of(rc, curve.name)


# ---------------------------------------------------------------------------
# the developing cover


class _Cover:
    """Lazily developed universal cover of the refined complex.

    Faces are materialized copies of base faces; gluings along sides
    are recorded symmetrically and corner identifications are kept in a
    union-find.  A fan of sectors around a cover vertex is closed as
    soon as all sectors of the underlying vertex are present.  When the
    development wraps around several vertices before their fans can
    close, two materialized faces may turn out to be the same lift;
    such faces are folded together, which can cascade.  All face ids
    therefore pass through :meth:`find_face` and slots through
    :meth:`canon` before use.
    """

    def __init__(self, rc: _RefinedComplex):
        self.rc = rc
        self.base: list = []
        self.sides: list = []
        self._fparent: dict = {}
        self._parent: dict = {}
        self._queue: list = []
        self._merges: list = []
        self.merge_count = 0

    def new_face(self, base_idx: int) -> int:
        self.base.append(base_idx)
        self.sides.append([None] * len(self.rc.faces[base_idx]["cycle"]))
        return len(self.base) - 1

    def clone(self) -> "_Cover":
        """An independent copy, used to test a speculative folding."""
        other = _Cover(self.rc)
        other.base = list(self.base)
        other.sides = [None if s is None else list(s) for s in self.sides]
        other._fparent = dict(self._fparent)
        other._parent = dict(self._parent)
        other._queue = list(self._queue)
        other._merges = list(self._merges)
        other.merge_count = self.merge_count
        return other

    def find_face(self, f: int) -> int:
        parent = self._fparent
        root = f
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(f, f) != f:
            parent[f], f = root, parent[f]
        return root

    def canon(self, slot):
        return (self.find_face(slot[0]), slot[1])

    def face_info(self, f):
        fc = self.find_face(f)
        bf = self.base[fc]
        return fc, bf, len(self.rc.faces[bf]["cycle"])

    def find(self, slot):
        parent = self._parent
        cur = self.canon(slot)
        trail = []
        on_path = set()
        while True:
            nxt = parent.get(cur)
            if nxt is None:
                break
            trail.append(cur)
            on_path.add(cur)
            cur = self.canon(nxt)
            if cur in on_path:
                # folding faces re-keys slots, which can close a parent
                # chain into a cycle; its members are all identified, so
                # break the cycle at the revisited slot
                parent.pop(cur, None)
                break
        for s in trail:
            if s != cur:
                parent[s] = cur
        return cur

    def _union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self._parent[ra] = rb

    def _set_side(self, f, i, target):
        existing = self.sides[f][i]
        if existing is None:
            self.sides[f][i] = target
            return True
        c = self.canon(existing)
        t = self.canon(target)
        if c == t:
            return False
        if c[1] != t[1]:
            raise InvariantViolation(
                "conflicting cover gluings disagree on the base side")
        self._merges.append((c[0], t[0]))
        return False

    def _glue(self, f1, i1, f2, i2):
        f1 = self.find_face(f1)
        f2 = self.find_face(f2)
        new1 = self._set_side(f1, i1, (f2, i2))
        new2 = self._set_side(f2, i2, (f1, i1))
        if not (new1 or new2):
            return
        m1 = len(self.sides[f1])
        m2 = len(self.sides[f2])
        self._union((f1, i1), (f2, (i2 + 1) % m2))
        self._union((f1, (i1 + 1) % m1), (f2, i2))
        self._queue.extend([(f1, i1), (f1, (i1 + 1) % m1),
                            (f2, i2), (f2, (i2 + 1) % m2)])

    def _merge_faces(self, a, b):
        a = self.find_face(a)
        b = self.find_face(b)
        if a == b:
            return
        if self.base[a] != self.base[b]:
            raise InvariantViolation("cover folds faces with different bases")
        self.merge_count += 1
        rep, dead = (a, b) if a < b else (b, a)
        self._fparent[dead] = rep
        srep = self.sides[rep]
        sdead = self.sides[dead]
        self.sides[dead] = None
        for i in range(len(srep)):
            self._union((rep, i), (dead, i))
            entry = self._parent.pop((dead, i), None)
            if entry is not None:
                self._union((rep, i), entry)
            if sdead[i] is None:
                continue
            self._set_side(rep, i, sdead[i])
            self._queue.append((rep, i))

    def _settle(self):
        while self._merges or self._queue:
            if self._merges:
                a, b = self._merges.pop()
                self._merge_faces(a, b)
                continue
            self._scan(*self._queue.pop())

    def _fold_chain(self, chain, val):
        """Identify sectors a full turn apart in an over-long fan chain."""
        for k in range(len(chain) - val):
            a = chain[k]
            b = chain[k + val]
            if a[1] != b[1]:
                raise InvariantViolation(
                    "sectors a full turn apart sit on different corners")
            self._merges.append((a[0], b[0]))

    def _scan(self, f, j):
        f = self.find_face(f)
        sides = self.sides
        start = (f, j)
        seen = {start}
        ccw = [start]
        cur = start
        closed = False
        while True:
            ff, jj = cur
            target = sides[ff][(jj - 1) % len(sides[ff])]
            if target is None:
                break
            target = self.canon(target)
            if target == start:
                closed = True
                break
            if target in seen:
                raise InvariantViolation("cover fan walk repeats a sector")
            seen.add(target)
            ccw.append(target)
            cur = target
        node = self.rc.faces[self.base[f]]["corners"][j]
        val = self.rc.valence[node]
        if closed:
            if len(ccw) < val:
                raise InvariantViolation(
                    f"closed fan at {node} has {len(ccw)} sectors, "
                    f"valence {val}")
            if len(ccw) > val:
                self._fold_chain(ccw + [start], val)
                self._queue.append(start)
            return
        cw = [start]
        cur = start
        while True:
            ff, jj = cur
            target = sides[ff][jj]
            if target is None:
                break
            g, k = self.canon(target)
            nxt = (g, (k + 1) % len(sides[g]))
            if nxt in seen:
                raise InvariantViolation("cover fan walk repeats a sector")
            seen.add(nxt)
            cw.append(nxt)
            cur = nxt
        chain = ccw[::-1][:-1] + cw
        if len(chain) > val:
            self._fold_chain(chain, val)
            self._queue.append(start)
            return
        if len(chain) == val:
            fc, jc = chain[0]
            fw, jw = chain[-1]
            mc = len(sides[fc])
            want = self.rc.neighbor(self.base[fc], (jc - 1) % mc)
            if want != (self.base[fw], jw):
                raise InvariantViolation("fan closure mismatches base twins")
            self._glue(fc, (jc - 1) % mc, fw, jw)

    def attach(self, f, i):
        """The slot glued to side ``i`` of cover face ``f``."""
        f = self.find_face(f)
        if self.sides[f][i] is None:
            bf, bj = self.rc.neighbor(self.base[f], i)
            g = self.new_face(bf)
            self._glue(f, i, g, bj)
            self._settle()
            f = self.find_face(f)
        return self.canon(self.sides[f][i])

    def slot_halfedge(self, f, i):
        return self.rc.faces[self.base[self.find_face(f)]]["cycle"][i]

    def smooth_next(self, f, i):
        """Continue straight through the valence-4 head of slot ``(f, i)``."""
        f = self.find_face(f)
        g, k = self.attach(f, (i + 1) % len(self.sides[f]))
        return (g, (k + 1) % len(self.sides[g]))


# ---------------------------------------------------------------------------
# polygon walks


@dataclass(frozen=True)
class PolygonContribution:
    """One rigid polygon and its contribution to a structure constant."""

    output: str | None
    input: str | None
    word: tuple
    sign: int
    monomial: SparsePoly
    faces: int


class _WalkSpec:
    """Role bookkeeping for one family of polygon walks."""

    def __init__(self, kind, points, **kw):
        self.kind = kind
        self.points = points
        self.target = kw.get("target")
        self.source = kw.get("source")
        self.input_label = kw.get("input_label")
        self.c_degree = kw.get("c_degree")
        self.dep_curve = kw.get("dep_curve")
        self.arr_curve = kw.get("arr_curve")
        self.close_ray = kw.get("close_ray")
        self.word_cap = kw.get("word_cap", 16)
        self.side_cap = kw.get("side_cap", 256)


def _word_cap(s: SeidelComplex, slack: int = 2) -> int:
    """Bound on the letters of one polygon word.

    Every downstream use of an enumeration feeds an exactly verified
    identity (the factorization of the potential, closedness of a
    morphism, or the potential comparison itself), so a polygon missed
    beyond this bound cannot go unnoticed; the slack keeps a margin of
    visibility above the largest expected monomial.
    """
    w_l = mirror_data(s.polynomial).w_l
    degree = max(sum(exps) for exps, _ in w_l.sorted_terms())
    return degree + slack


def _side_cap(rc: _RefinedComplex) -> int:
    """Bound on consecutive smooth steps between two polygon corners.

    A smooth run along the Seidel Lagrangian passes every arc class
    within one period of the underlying immersed circle, and one of the
    six passes always has the punctured z-lens on its left, so genuine
    runs stop well inside two periods.  Runs along a closed test curve
    are bounded by two wraps.  Hitting the cap flags saturation.
    """
    arc_pieces: dict = {}
    chord_pieces: dict = {}
    for pid in rc.pieces:
        if pid[0] == "a":
            key = (pid[1], pid[2])
            arc_pieces[key] = arc_pieces.get(key, 0) + 1
        else:
            chord_pieces[pid[1]] = chord_pieces.get(pid[1], 0) + 1
    max_arc = max(arc_pieces.values(), default=1)
    max_chord = max(chord_pieces.values(), default=1)
    return 8 + max(12 * max_arc, 2 * max_chord)


def _point_tables(rc: _RefinedComplex) -> dict:
    return {name: {p.node: p for p in _points_of(rc, name)}
            for name in rc.curves}


def _disk_gate(cover: _Cover, slots, cap):
    """Check that a closed walk bounds an embedded puncture-free disc.

    Returns ``(ok, face_count, saturated)``.  Developing the hole may
    fold cover faces, which invalidates ids computed earlier, so the
    flood fill repeats until a pass completes with no folding.
    """
    rc = cover.rc
    for f, i in slots:
        cover.attach(f, i)
    fill = set()
    for _ in range(cap + 8):
        merges_before = cover.merge_count
        boundary_edges = set()
        repeated = False
        for f, i in slots:
            fc = cover.find_face(f)
            tw = cover.attach(fc, i)
            edge = min((fc, i), tw)
            if edge in boundary_edges:
                repeated = True
                break
            boundary_edges.add(edge)
        if repeated:
            if cover.merge_count == merges_before:
                return (False, 0, False)
            continue
        fill = set()
        frontier = [cover.find_face(f) for f, _ in slots]
        overflow = False
        punctured = False
        while frontier:
            f = cover.find_face(frontier.pop())
            if f in fill:
                continue
            fill.add(f)
            if len(fill) > cap:
                overflow = True
                break
            if rc.faces[cover.base[f]]["punct"]:
                punctured = True
                break
            folded = False
            for j in range(len(cover.sides[f])):
                tw = cover.attach(f, j)
                if cover.find_face(f) != f:
                    folded = True
                    break
                if min((f, j), tw) in boundary_edges:
                    continue
                frontier.append(tw[0])
            if folded:
                break
        if cover.merge_count != merges_before:
            continue
        if overflow:
            return (False, len(fill), True)
        if punctured:
            return (False, len(fill), False)
        break
    else:
        raise InvariantViolation("disc fill does not stabilize under folding")
    tails = [cover.find((f, i)) for f, i in slots]
    if len(set(tails)) != len(tails):
        return (False, len(fill), False)
    boundary_roots = set(tails)
    edges = set()
    corners = set()
    for f in fill:
        for j in range(len(cover.sides[f])):
            tw = cover.attach(f, j)
            edges.add(min((f, j), tw))
            root = cover.find((f, j))
            corners.add(root)
            node = rc.faces[cover.base[f]]["corners"][j]
            if node[0] == "c" and root not in boundary_roots:
                return (False, len(fill), False)
    chi = len(corners) - len(edges) + len(fill)
    if chi != 1:
        return (False, len(fill), False)
    return (True, len(fill), False)


def _assemble(events, spec: _WalkSpec, faces: int) -> PolygonContribution:
    corners = []
    runs = [[]]
    for ev in events:
        if ev[0] == "E":
            runs[-1].append(ev)
        else:
            corners.append(ev)
            runs.append([])
    if not corners:
        raise InvariantViolation("a polygon closed without any corner")
    trailing = runs.pop()
    run_after = runs[1:] + [trailing + runs[0]]
    sides = []
    for run in run_after:
        if not run:
            raise InvariantViolation("two polygon corners coincide")
        dirs = {ev[3] for ev in run}
        if len(dirs) != 1:
            raise InvariantViolation("a polygon side changes direction")
        aligned = dirs.pop() == 1
        flips = sum(ev[4] for ev in run)
        sides.append((aligned, flips))
    k = len(corners)
    if spec.kind == "potential":
        sign = 1
        for idx in range(k):
            aligned, flips = sides[idx]
            sign *= (-1) ** flips
            if not aligned:
                sign *= (-1) ** corners[idx][2]
    else:
        out_idx = next(i for i, c in enumerate(corners) if c[1] == "output")
        sign = 1
        for off in range(k):
            aligned, flips = sides[(out_idx + off) % k]
            sign *= (-1) ** flips
            if aligned or off == 0:
                continue
            sign *= (-1) ** corners[(out_idx + off) % k][2]
            if off == k - 1:
                sign *= (-1) ** corners[out_idx][2]
    word = tuple(c[3] for c in corners if c[1] == "b")
    mono = SparsePoly.one()
    for letter in word:
        mono = mono * SparsePoly.var(_VAR_OF_LETTER[letter])
    out_label = in_label = None
    for c in corners:
        if c[1] == "output":
            out_label = c[3]
        elif c[1] == "input":
            in_label = c[3]
    return PolygonContribution(out_label, in_label, word, sign, mono, faces)


def _run_seed(rc: _RefinedComplex, seed_face: int, seed_slot: int,
              spec: _WalkSpec, depth_cap: int, results: list, sat: list):
    """Depth-first enumeration of disc boundaries through one seed slot."""
    if rc.faces[seed_face]["punct"]:
        return
    cover = _Cover(rc)
    f0 = cover.new_face(seed_face)
    h0 = (f0, seed_slot)
    step_cap = depth_cap * rc.max_sides + 8

    events: list = []
    collar: set = set()
    visited_slots = [h0]
    letters = [0]

    def is_visited(root):
        # folding can re-root the corner union-find mid-walk, so the
        # stored slots are re-canonicalized at every membership test
        return any(cover.find(sl) == root for sl in visited_slots)

    def piece_rec(f, i):
        pid, d = cover.slot_halfedge(f, i)
        return pid, d, rc.pieces[pid]

    def face_ok(f):
        return not rc.faces[cover.base[cover.find_face(f)]]["punct"]

    def walked_curve(phase):
        if phase == "CUR":
            return spec.target
        if phase == "DEP":
            return spec.dep_curve
        return spec.arr_curve

    def head_point(node):
        info = rc.crossing_info[node]
        return spec.points[info["curve"]][node]

    def try_close(corner, fold=None):
        if corner is not None:
            events.append(corner)
        slots = [ev[1] for ev in events if ev[0] == "E"]
        gate_cover = cover
        ok = True
        if fold is not None:
            gate_cover = cover.clone()
            gate_cover._merges.append(fold)
            gate_cover._settle()
            ok = gate_cover.find_face(fold[0]) == gate_cover.find_face(fold[1])
        if ok:
            ok, nfaces, gate_sat = _disk_gate(gate_cover, slots, depth_cap)
            if gate_sat:
                sat[0] = True
        if ok:
            results.append(_assemble(list(events), spec, nfaces))
        if corner is not None:
            events.pop()

    def options(f, i, phase, run):
        fc, bf, m = cover.face_info(f)
        nxt = (fc, (i + 1) % m)
        node = rc.faces[bf]["corners"][(i + 1) % m]
        kind = node[0]
        h0c = cover.canon(h0)
        out = []
        if spec.kind == "m2w" and kind == "c":
            # the walked curve terminates at the puncture, so the walk
            # either closes at the wedge generator or dies here; the
            # corner at the puncture vertex may sweep any number of
            # sectors short of a full turn, so the closing turn rotates
            # around the vertex lift looking for the seed slot
            pid_a, d_a = cover.slot_halfedge(fc, i)
            if phase == "ARR" and (pid_a, -d_a) == spec.close_ray:
                cur = nxt
                corner = ("C", "gen", spec.c_degree, None)
                for _ in range(rc.valence[node] - 1):
                    cc = cover.canon(cur)
                    hh = cover.canon(h0)
                    if cc == hh:
                        out.append(("close", corner, None))
                        break
                    if (cc[1] == hh[1]
                            and cover.base[cc[0]] == cover.base[hh[0]]):
                        # the rotation reached the seed slot of another
                        # lift: closing the strip identifies the two,
                        # which the disc gate then tests on a clone
                        out.append(("close", corner, (cc[0], hh[0])))
                        break
                    g, k2 = cover.attach(*cc)
                    cur = (g, (k2 + 1) % len(cover.sides[g]))
            return out
        if nxt == h0c:
            # turning into the seed slot closes the boundary
            if spec.kind == "potential":
                if (kind == "v" and rc.faces[bf]["tri"]
                        and letters[0] < spec.word_cap):
                    out.append(("close", ("C", "b", 1, node[1])))
            elif spec.kind == "m1a" and phase == "CUR":
                out.append(("close", ("C", "input", spec.c_degree,
                                      spec.input_label)))
            elif spec.kind == "m2" and phase == "ARR":
                out.append(("close", ("C", "gen", spec.c_degree, None)))
            return out

        def smooth_ok():
            if run + 1 > spec.side_cap:
                sat[0] = True
                return None
            return cover.smooth_next(fc, i)

        if phase == "LL":
            if kind == "v":
                sm = smooth_ok()
                if sm is not None:
                    if spec.kind == "potential" and sm == cover.canon(h0):
                        out.append(("close", None))
                    elif face_ok(sm[0]):
                        _, _, srec = piece_rec(*sm)
                        if srec["kind"] != "arc":
                            raise InvariantViolation(
                                "smooth continuation left the Lagrangian")
                        out.append((None, sm, "LL", run + 1))
                if rc.faces[bf]["tri"] and letters[0] < spec.word_cap:
                    out.append((("C", "b", 1, node[1]), nxt, "LL", 0))
            elif kind == "x":
                sm = smooth_ok()
                if sm is not None and face_ok(sm[0]):
                    _, _, srec = piece_rec(*sm)
                    if srec["kind"] != "arc":
                        raise InvariantViolation(
                            "smooth continuation left the Lagrangian")
                    out.append((None, sm, "LL", run + 1))
                _, _, rec_n = piece_rec(*nxt)
                if rec_n["kind"] == "chord" and face_ok(nxt[0]):
                    if spec.kind == "m1a" and rec_n["curve"] == spec.target:
                        point = head_point(node)
                        out.append((("C", "output", point.degree,
                                     point.label), nxt, "CUR", 0))
                    elif (spec.kind in ("m2", "m2w")
                          and rec_n["curve"] == spec.arr_curve):
                        point = head_point(node)
                        role = ("output" if spec.arr_curve == spec.target
                                else "input")
                        out.append((("C", role, point.degree, point.label),
                                    nxt, "ARR", 0))
            return out
        if phase in ("CUR", "DEP", "ARR"):
            name = walked_curve(phase)
            if kind in ("x", "i"):
                sm = smooth_ok()
                if sm is not None and face_ok(sm[0]):
                    _, _, srec = piece_rec(*sm)
                    if srec["curve"] != name:
                        raise InvariantViolation(
                            "smooth continuation left the walked curve")
                    out.append((None, sm, phase, run + 1))
            if kind == "x" and phase == "DEP":
                _, _, rec_n = piece_rec(*nxt)
                if rec_n["kind"] == "arc" and face_ok(nxt[0]):
                    point = head_point(node)
                    role = ("output" if spec.dep_curve == spec.target
                            else "input")
                    out.append((("C", role, point.degree, point.label),
                                nxt, "LL", 0))
            return out
        raise InvariantViolation(f"unknown walk phase {phase}")

    def enter(h, phase, corner, run):
        f, i = h
        if not face_ok(f):
            return None
        fc, _, m = cover.face_info(f)
        pid, d, rec = piece_rec(f, i)
        if corner is None:
            # a smooth run that repeats a directed base piece has wrapped
            # a closed strand completely; such a boundary side slides
            # along the strand, so the polygon would not be rigid
            for ev in reversed(events):
                if ev[0] != "E":
                    break
                if ev[2] == pid and ev[3] == d:
                    return None
        undo = {"corner": corner is not None, "collar": None,
                "visited": None, "letter": False}
        if corner is not None:
            events.append(corner)
            if corner[1] == "b":
                letters[0] += 1
                undo["letter"] = True
        if fc not in collar:
            if len({cover.find_face(x) for x in collar}) >= depth_cap:
                sat[0] = True
                if undo["letter"]:
                    letters[0] -= 1
                if corner is not None:
                    events.pop()
                return None
            collar.add(fc)
            undo["collar"] = fc
        flips = (1 if rec["dot"] else 0) + rec["marks"]
        events.append(("E", (fc, i), pid, d, flips))
        if len(events) > step_cap:
            sat[0] = True
            events.pop()
            if undo["collar"] is not None:
                collar.discard(undo["collar"])
            if undo["letter"]:
                letters[0] -= 1
            if corner is not None:
                events.pop()
            return None
        head = (fc, (i + 1) % m)
        restricted = is_visited(cover.find(head))
        if not restricted:
            visited_slots.append(head)
            undo["visited"] = head
        opts = options(f, i, phase, run)
        if restricted:
            opts = [o for o in opts if o[0] == "close"]
        return {"h": h, "undo": undo, "opts": iter(opts)}

    phase0 = "DEP" if spec.kind in ("m2", "m2w") else "LL"
    first = enter(h0, phase0, None, 0)
    if first is None:
        return
    stack = [first]
    while stack:
        frame = stack[-1]
        opt = next(frame["opts"], None)
        if opt is None:
            undo = frame["undo"]
            events.pop()
            if undo["collar"] is not None:
                collar.discard(undo["collar"])
            if undo["visited"] is not None:
                visited_slots.pop()
            if undo["letter"]:
                letters[0] -= 1
            if undo["corner"]:
                events.pop()
            stack.pop()
            continue
        if opt[0] == "close":
            try_close(opt[1])
            continue
        corner, nxt, phase, run = opt
        child = enter(nxt, phase, corner, run)
        if child is not None:
            stack.append(child)


# ---------------------------------------------------------------------------
# the functor on objects


def enumerate_polygons(s: SeidelComplex, curve: CombinatorialCurve, *,
                       depth_cap: int = DEPTH_CAP_DEFAULT,
                       red_dot_frac=RED_DOT_FRAC_DEFAULT,
                       extra_curves: Sequence[CombinatorialCurve] = ()):
    """All rigid polygons with one input and one output corner on ``curve``.

    Raises :class:`DepthCapReached` when any branch of the search was
    cut off by the cap, with the partial results attached, so that
    truncation is reported rather than silent.
    """
    curve = validate_curve(s, curve)
    rc = _refined(s, [curve, *extra_curves], red_dot_frac)
    tables = _point_tables(rc)
    results: list = []
    sat = [False]
    caps = {"word_cap": _word_cap(s), "side_cap": _side_cap(rc)}
    for point in tables[curve.name].values():
        # Each strip boundary alternates between the Lagrangian and the
        # curve, so of its two corners exactly one departs along an arc.
        # Seeding only at arc departures therefore finds every strip once,
        # and that corner is the input of the operation.
        for he in rc.rotations[point.node]:
            pid, d = he
            rec = rc.pieces[pid]
            if rec["kind"] != "arc":
                if rec["curve"] != curve.name:
                    raise InvariantViolation(
                        "foreign chord at an intersection point")
                continue
            face_idx, pos = rc.halfedge_face[he]
            spec = _WalkSpec("m1a", tables, target=curve.name,
                             source=curve.name,
                             input_label=point.label,
                             c_degree=point.degree, **caps)
            _run_seed(rc, face_idx, pos, spec, depth_cap, results, sat)
    if sat[0]:
        raise DepthCapReached(
            f"polygon enumeration for {curve.name!r} hit the depth cap "
            f"{depth_cap}", tuple(results))
    return results


def _restriction_mapping(s: SeidelComplex) -> dict:
    data = mirror_data(s.polynomial)
    g = data.g_poly
    if g.coefficient((0, 0, 1)) != 1:
        raise InvariantViolation(f"fiber relation {g} is not monic in z")
    expr = SparsePoly.var("z") - g
    if any(exps[2] for exps, _ in expr.sorted_terms()):
        raise InvariantViolation(f"solving {g} for z left z behind")
    return {"z": expr}


def _counts_to_mf(points, polys, potential, curve_name) -> MatrixFactorization:
    odd = [p.label for p in points if p.degree == 1]
    even = [p.label for p in points if p.degree == 0]
    if len(odd) != len(even):
        raise NotAFactorization(
            f"curve {curve_name!r} has {len(odd)} odd and {len(even)} even "
            f"intersection points; no square factorization exists")
    coeff: dict = {}
    for poly in polys:
        key = (poly.output, poly.input)
        coeff[key] = coeff.get(key, SparsePoly.zero()) + poly.sign * poly.monomial
    degree_of = {p.label: p.degree for p in points}
    for (out, inp), value in coeff.items():
        if value and degree_of[out] == degree_of[inp]:
            raise NotAFactorization(
                f"polygon count pairs {inp} with {out} of equal parity")
    phi = [[-coeff.get((ei, oj), SparsePoly.zero()) for oj in odd]
           for ei in even]
    psi = [[-coeff.get((oi, ej), SparsePoly.zero()) for ej in even]
           for oi in odd]
    return make_mf(RingMatrix(phi), RingMatrix(psi), potential,
                   even_labels=even, odd_labels=odd)


def mirror_object(s: SeidelComplex, curve: CombinatorialCurve, *,
                  depth_cap: int = DEPTH_CAP_DEFAULT,
                  red_dot_frac=RED_DOT_FRAC_DEFAULT,
                  restricted: bool = False,
                  extra_curves: Sequence[CombinatorialCurve] = ()
                  ) -> MatrixFactorization:
    """The matrix factorization assigned to a test curve.

    The entry in row ``e_i``, column ``o_j`` of the first factor is
    minus the coefficient of ``e_i`` in the differential applied to
    ``o_j``; the second factor collects the even-to-odd counts the same
    way.  With ``restricted=True`` the fiber relation is solved for
    ``z`` and the factorization is pushed down to the transposed
    polynomial in two variables.
    """
    curve = validate_curve(s, curve)
    potential = mirror_data(s.polynomial).w_l
    points = intersect(s, curve, extra_curves=extra_curves,
                       red_dot_frac=red_dot_frac)
    if not points:
        mf = zero_object(potential)
    else:
        try:
            polys = enumerate_polygons(s, curve, depth_cap=depth_cap,
                                       red_dot_frac=red_dot_frac,
                                       extra_curves=extra_curves)
        except DepthCapReached as exc:
            raise Incomplete(
                f"mirror object of {curve.name!r}: {exc}") from exc
        mf = _counts_to_mf(points, polys, potential, curve.name)
    if restricted:
        mf = restrict(mf, _restriction_mapping(s))
    return mf


def count_disc_potential(s: SeidelComplex, *,
                         depth_cap: int = DEPTH_CAP_DEFAULT,
                         red_dot_frac=RED_DOT_FRAC_DEFAULT) -> SparsePoly:
    """Count discs through a marked point of the identity front triangle.

    Every disc through the marked point exposes, with the disc on its
    left, the first side of the lift of the front triangle it passes
    through, because the lens tile behind that side is always punctured.
    Seeding the walk on that single slot therefore finds each disc once
    per passage, which is exactly its counting multiplicity.  The total
    must reproduce the disc potential of the mirror data; any
    difference raises :class:`Mismatch`.
    """
    rc = _refined(s, [], red_dot_frac)
    e = s.group.normalize(tuple(0 for _ in s.hom.image_of(3)))
    tile = (e, "T_front")
    hits = [i for i, f in enumerate(rc.faces) if f["tile"] == tile]
    if len(hits) != 1:
        raise InvariantViolation(f"base triangle {tile} subdivides")
    base_face = hits[0]
    cycle = rc.faces[base_face]["cycle"]
    seed_pos = None
    for pos, (pid, d) in enumerate(cycle):
        if pid[1] == "U1":
            if d != 1:
                raise InvariantViolation(
                    "front triangle traverses U1 backwards")
            seed_pos = pos
    if seed_pos is None:
        raise InvariantViolation("front triangle has no U1 side")
    results: list = []
    sat = [False]
    spec = _WalkSpec("potential", _point_tables(rc),
                     word_cap=_word_cap(s), side_cap=_side_cap(rc))
    _run_seed(rc, base_face, seed_pos, spec, depth_cap, results, sat)
    if sat[0]:
        raise DepthCapReached(
            f"disc potential count hit the depth cap {depth_cap}",
            tuple(results))
    total = SparsePoly.zero()
    for poly in results:
        total = total + poly.sign * poly.monomial
    expected = mirror_data(s.polynomial).w_l
    if total != expected:
        raise Mismatch(
            f"counted disc potential {total} but the mirror data gives "
            f"{expected}")
    return total


# ---------------------------------------------------------------------------
# the functor on morphisms


@dataclass(frozen=True)
class CurveCrossing:
    """A transversal crossing of two test curves inside one tile."""

    node: tuple
    tile: tuple
    first: tuple
    second: tuple
    point: tuple


@dataclass(frozen=True)
class WedgeGenerator:
    """A sector between the rays of two curves at a shared puncture."""

    node: tuple
    tile: tuple
    cw_ray: tuple
    ccw_ray: tuple
    sector: int
    degree: int


def curve_crossings(s: SeidelComplex, l1: CombinatorialCurve,
                    l2: CombinatorialCurve, *,
                    extra_curves: Sequence[CombinatorialCurve] = (),
                    red_dot_frac=RED_DOT_FRAC_DEFAULT) -> tuple:
    """Transversal crossings between two test curves, in a fixed order."""
    rc = _refined(s, [l1, l2, *extra_curves], red_dot_frac)
    out = []
    for node in sorted(rc.interior_info, key=repr):
        info = rc.interior_info[node]
        names = {c for c, _ in info["chords"]}
        if names != {l1.name, l2.name}:
            continue
        first = next(c for c in info["chords"] if c[0] == l1.name)
        second = next(c for c in info["chords"] if c[0] == l2.name)
        out.append(CurveCrossing(node, info["tile"], first, second,
                                 rc.node_point[(info["tile"], node)]))
    return tuple(out)


def _travel_at(rc: _RefinedComplex, name: str, node):
    """Travel direction of a curve at a node it passes through."""
    for end in rc.rotations[node]:
        pid, _ = end
        if rc.pieces[pid]["curve"] == name:
            return rc._travel_dir(end)
    raise ValueError(f"curve {name!r} does not meet node {node}")


def crossing_degree(s: SeidelComplex, l1: CombinatorialCurve,
                    l2: CombinatorialCurve, crossing: CurveCrossing, *,
                    extra_curves: Sequence[CombinatorialCurve] = (),
                    red_dot_frac=RED_DOT_FRAC_DEFAULT) -> int:
    """Degree of a crossing as a generator of morphisms from l1 to l2."""
    rc = _refined(s, [l1, l2, *extra_curves], red_dot_frac)
    t1 = _travel_at(rc, l1.name, crossing.node)
    t2 = _travel_at(rc, l2.name, crossing.node)
    det = _cross(t1, t2)
    if det == 0:
        raise NonTransverse(
            f"curves {l1.name!r} and {l2.name!r} touch tangentially")
    odd = (det > 0) == _CURVE_CROSS_ODD_IF_POSITIVE
    return 1 if odd else 0


def puncture_wedges(s: SeidelComplex, l1: CombinatorialCurve,
                    l2: CombinatorialCurve, *,
                    extra_curves: Sequence[CombinatorialCurve] = (),
                    red_dot_frac=RED_DOT_FRAC_DEFAULT) -> tuple:
    """Sector generators at punctures where both curves end."""
    rc = _refined(s, [l1, l2, *extra_curves], red_dot_frac)
    out = []
    for node in sorted(rc.puncture_nodes, key=repr):
        ends = rc.rotations.get(node)
        if not ends:
            continue
        names = [rc.pieces[pid]["curve"] for pid, _ in ends]
        if l1.name not in names or l2.name not in names:
            continue
        for k, cw in enumerate(ends):
            ccw = ends[(k + 1) % len(ends)]
            c_cw = rc.pieces[cw[0]]["curve"]
            c_ccw = rc.pieces[ccw[0]]["curve"]
            if {c_cw, c_ccw} != {l1.name, l2.name}:
                continue
            trav = {c_cw: rc._travel_dir(cw), c_ccw: rc._travel_dir(ccw)}
            det = _cross(trav[l1.name], trav[l2.name])
            if det == 0:
                raise NonTransverse(
                    f"rays of {l1.name!r} and {l2.name!r} are tangent at "
                    f"the puncture of {node[1]}")
            odd = ((det > 0) == _CURVE_CROSS_ODD_IF_POSITIVE) \
                ^ (c_cw == l1.name) ^ _WEDGE_PARITY_FLIP
            out.append(WedgeGenerator(
                node, node[1],
                (c_cw, cw[0][2]), (c_ccw, ccw[0][2]), k, 1 if odd else 0))
    return tuple(out)


def _morphism_polygons(s, l1, l2, generator, *, depth_cap, red_dot_frac,
                       extra_curves=()):
    rc = _refined(s, [l1, l2, *extra_curves], red_dot_frac)
    tables = _point_tables(rc)
    if isinstance(generator, CurveCrossing):
        kind = "m2"
        degree = crossing_degree(s, l1, l2, generator,
                                 extra_curves=extra_curves,
                                 red_dot_frac=red_dot_frac)
        seeds = [(he, rc.pieces[he[0]]["curve"], None)
                 for he in rc.rotations[generator.node]]
    elif isinstance(generator, WedgeGenerator):
        kind = "m2w"
        degree = generator.degree
        ends = rc.rotations[generator.node]
        cw = ends[generator.sector]
        ccw = ends[(generator.sector + 1) % len(ends)]
        # a strip corner at the wedge may sweep either side of the germ
        # pair, so walks depart along both rays; each must come back
        # along the partner ray
        seeds = [(cw, rc.pieces[cw[0]]["curve"], ccw),
                 (ccw, rc.pieces[ccw[0]]["curve"], cw)]
    else:
        raise TypeError(f"unsupported generator {generator!r}")
    results: list = []
    sat = [False]
    caps = {"word_cap": _word_cap(s), "side_cap": _side_cap(rc)}
    for he, dep, close_ray in seeds:
        face_idx, pos = rc.halfedge_face[he]
        spec = _WalkSpec(kind, tables, source=l1.name, target=l2.name,
                         dep_curve=dep, close_ray=close_ray,
                         arr_curve=l2.name if dep == l1.name else l1.name,
                         c_degree=degree, **caps)
        _run_seed(rc, face_idx, pos, spec, depth_cap, results, sat)
    if sat[0]:
        raise DepthCapReached(
            f"morphism enumeration hit the depth cap {depth_cap}",
            tuple(results))
    return results, degree


def mirror_morphism(s: SeidelComplex, l1: CombinatorialCurve,
                    l2: CombinatorialCurve, generator, *,
                    depth_cap: int = DEPTH_CAP_DEFAULT,
                    red_dot_frac=RED_DOT_FRAC_DEFAULT,
                    restricted: bool = False,
                    extra_curves: Sequence[CombinatorialCurve] = ()
                    ) -> MFMorphism:
    """The morphism of matrix factorizations assigned to a generator.

    ``generator`` is a :class:`CurveCrossing` or a
    :class:`WedgeGenerator` between ``l1`` and ``l2``.  The result is
    verified to be closed; a failure raises
    :class:`curvemirror.mf_algebra.EquationFails`.
    """
    l1 = validate_curve(s, l1)
    l2 = validate_curve(s, l2)
    if l1.name == l2.name:
        raise ValueError("morphism endpoints must be distinct curves")
    src = mirror_object(s, l1, depth_cap=depth_cap,
                        red_dot_frac=red_dot_frac,
                        extra_curves=[l2, *extra_curves])
    tgt = mirror_object(s, l2, depth_cap=depth_cap,
                        red_dot_frac=red_dot_frac,
                        extra_curves=[l1, *extra_curves])
    if src.size == 0 or tgt.size == 0:
        raise ValueError("morphisms to or from the zero object are not "
                         "supported")
    try:
        polys, degree = _morphism_polygons(
            s, l1, l2, generator, depth_cap=depth_cap,
            red_dot_frac=red_dot_frac, extra_curves=extra_curves)
    except DepthCapReached as exc:
        raise Incomplete(f"mirror morphism: {exc}") from exc
    coeff: dict = {}
    for poly in polys:
        key = (poly.output, poly.input)
        coeff[key] = coeff.get(key, SparsePoly.zero()) + poly.sign * poly.monomial
    spoints = {p.label: p for p in intersect(
        s, l1, extra_curves=[l2, *extra_curves], red_dot_frac=red_dot_frac)}
    tpoints = {p.label: p for p in intersect(
        s, l2, extra_curves=[l1, *extra_curves], red_dot_frac=red_dot_frac)}
    for (out, inp), value in coeff.items():
        if not value:
            continue
        if tpoints[out].degree != (spoints[inp].degree + degree) % 2:
            raise NotClosed(
                f"a polygon pairs {inp} with {out}, violating the degree "
                f"of the generator")

    def block(out_labels, in_labels):
        return RingMatrix(
            [[_MORPHISM_SIGN * coeff.get((o, i), SparsePoly.zero())
              for i in in_labels] for o in out_labels])

    if degree % 2 == 1:
        on_even = block(tgt.odd_labels, src.even_labels)
        on_odd = block(tgt.even_labels, src.odd_labels)
    else:
        on_even = block(tgt.even_labels, src.even_labels)
        on_odd = block(tgt.odd_labels, src.odd_labels)
    morphism = MFMorphism(src, tgt, degree % 2, on_even, on_odd)
    if restricted:
        mapping = _restriction_mapping(s)
        morphism = MFMorphism(
            restrict(src, mapping), restrict(tgt, mapping), degree % 2,
            morphism.on_even.substitute(mapping),
            morphism.on_odd.substitute(mapping))
    verify_chain_data("closed_morphism", morphism=morphism)
    return morphism


def surgery_cone_triangle(s: SeidelComplex, l1: CombinatorialCurve,
                          l2: CombinatorialCurve, generator, *,
                          depth_cap: int = DEPTH_CAP_DEFAULT,
                          red_dot_frac=RED_DOT_FRAC_DEFAULT,
                          restricted: bool = False,
                          extra_curves: Sequence[CombinatorialCurve] = ()):
    """The exact triangle realizing surgery at an odd generator.

    Returns ``((source, cone, target), report)`` where the middle term
    is the mapping cone of the mirror morphism of ``generator`` and the
    report certifies the closedness equations of that morphism.
    """
    morphism = mirror_morphism(s, l1, l2, generator, depth_cap=depth_cap,
                               red_dot_frac=red_dot_frac,
                               restricted=restricted,
                               extra_curves=extra_curves)
    if morphism.parity != 1:
        raise ValueError(
            f"surgery needs an odd generator; this one has parity "
            f"{morphism.parity}")
    report = verify_chain_data("closed_morphism", morphism=morphism)
    return ((morphism.source, cone(morphism), morphism.target), report)


# ---------------------------------------------------------------------------
# canonical curves


def seidel_pushoff_curve(s: SeidelComplex, *, name: str = "L_shift",
                         marks: int = 0) -> CombinatorialCurve:
    """A closed parallel push-off of the Seidel Lagrangian.

    The curve follows the left side of the Lagrangian around one
    circuit of the three lens tiles and dips once into the lens behind
    the first upper arc, so that the orientation dot is passed the same
    way the Lagrangian itself passes it.  ``marks`` places spin markers
    on the first segment.
    """
    group = s.group
    e = group.normalize(tuple(0 for _ in s.hom.image_of(3)))
    d1 = s.hom.image_of(3)
    d2 = s.hom.image_of(1)
    h = Fraction(1, 2)
    g2 = group.add(e, d2)
    g12 = group.add(g2, d1)
    lifts = [("U2", e), ("U2", g2), ("U1", g2), ("U1", g12),
             ("U3", g12), ("U3", e), ("U1", e)]
    if len(set(lifts)) != len(lifts):
        raise InvariantViolation(
            "degenerate holonomy: the push-off needs distinct arc lifts")
    c1 = ("U2", e, h)
    c2 = ("U2", g2, h)
    c3 = ("U1", g2, h)
    c4 = ("U1", g12, h)
    c5 = ("U3", g12, h)
    c6 = ("U3", e, h)
    w1 = ("U1", e, Fraction(1, 4))
    w2 = ("U1", e, Fraction(3, 8))

    def front(g):
        return (group.normalize(g), "T_front")

    segments = (
        CurveSegment(front(e), c6, w1, marks),
        CurveSegment(s.lens_tile("M_C", e), w1, w2, 0),
        CurveSegment(front(e), w2, c1, 0),
        CurveSegment(s.lens_tile("M_A", e), c1, c2, 0),
        CurveSegment(front(g2), c2, c3, 0),
        CurveSegment(s.lens_tile("M_C", g2), c3, c4, 0),
        CurveSegment(front(g12), c4, c5, 0),
        CurveSegment(s.lens_tile("M_B", g12), c5, c6, 0),
    )
    return validate_curve(s, CombinatorialCurve(name, segments, closed=True))


def _tile_distances(s: SeidelComplex, target) -> dict:
    dist = {target: 0}
    frontier = [target]
    while frontier:
        nxt = []
        for tile in frontier:
            for arc, lift, _ in s.tile_boundary(tile):
                other = _normalize_tile(
                    s, lift_step(s, tile, (arc, lift), allow_punctures=True))
                if other not in dist:
                    dist[other] = dist[tile] + 1
                    nxt.append(other)
        frontier = nxt
    return dist


def search_test_curves(s: SeidelComplex, start_tile, end_tile,
                       segment_count: int, *, name: str = "L_search",
                       frac=Fraction(1, 2), limit: int | None = None
                       ) -> Iterator[CombinatorialCurve]:
    """Enumerate embedded open test curves between two punctured tiles.

    Curves have exactly ``segment_count`` segments, cross each arc lift
    at most once at position ``frac``, and the chords inside any one
    tile stay disjoint.  Candidates are deduplicated up to the deck
    translations preserving the start tile.
    """
    start_tile = _normalize_tile(s, start_tile)
    end_tile = _normalize_tile(s, end_tile)
    for tile in (start_tile, end_tile):
        if tile[1] not in s.puncture_faces:
            raise ValueError(f"search endpoint {tile} is not punctured")
    dist = _tile_distances(s, end_tile)
    frac = Fraction(frac)
    stabilizer = [g for g in s.group.elements()
                  if _normalize_tile(s, (s.group.add(start_tile[0], g),
                                         start_tile[1])) == start_tile]
    seen_keys: set = set()
    origin = (Fraction(0), Fraction(0))

    def boundary_point(tile, crossing):
        word = s.tile_boundary(tile)
        arc, lift, f = crossing
        for i, (barc, blift, sign) in enumerate(word):
            if (barc, blift) == (arc, lift):
                t = Fraction(i) + (f if sign == 1 else 1 - f)
                return _point_on_circle(t, len(word))
        raise ValueError(f"crossing {crossing} not on tile {tile}")

    def chord_points(tile, entry, exit_c):
        a = origin if entry is None else boundary_point(tile, entry)
        b = origin if exit_c is None else boundary_point(tile, exit_c)
        return (a, b)

    path: list = []
    used: set = set()
    per_tile: dict = {}
    found = [0]

    def disjoint_in(tile, seg_pts):
        for other in per_tile.get(tile, ()):
            shared = ({seg_pts[0], seg_pts[1]}
                      & {other[0], other[1]})
            if shared:
                if shared != {origin}:
                    return False
                continue
            try:
                if _segment_hit(*seg_pts, *other) is not None:
                    return False
            except NonTransverse:
                return False
        return True

    def emit():
        curve = CombinatorialCurve(name, tuple(path), closed=False)
        key = min(curve_to_json(translated_curve(s, curve, g))
                  for g in stabilizer)
        if key in seen_keys:
            return None
        seen_keys.add(key)
        found[0] += 1
        return validate_curve(s, curve)

    def extend(tile, entry):
        remaining = segment_count - len(path) - 1
        if remaining == 0:
            if tile == end_tile:
                pts = chord_points(tile, entry, None)
                if pts[0] != pts[1] and disjoint_in(tile, pts):
                    path.append(CurveSegment(tile, entry, None))
                    curve = emit()
                    path.pop()
                    if curve is not None:
                        yield curve
            return
        if dist.get(tile, segment_count + 1) > remaining:
            return
        for arc, lift, sign in s.tile_boundary(tile):
            if (arc, lift) in used:
                continue
            exit_c = (arc, lift, frac)
            pts = chord_points(tile, entry, exit_c)
            if pts[0] == pts[1] or not disjoint_in(tile, pts):
                continue
            nxt = _normalize_tile(
                s, lift_step(s, tile, (arc, lift), allow_punctures=True))
            used.add((arc, lift))
            path.append(CurveSegment(tile, entry, exit_c))
            per_tile.setdefault(tile, []).append(pts)
            yield from extend(nxt, exit_c)
            per_tile[tile].pop()
            path.pop()
            used.discard((arc, lift))

    for curve in extend(start_tile, None):
        yield curve
        if limit is not None and found[0] >= limit:
            return


# ---------------------------------------------------------------------------
# comparison and reporting helpers


def signed_permutation_match(candidate: MatrixFactorization,
                             target: MatrixFactorization):
    """A signed permutation of bases carrying ``candidate`` to ``target``.

    Returns ``(even_map, odd_map)`` where each map lists
    ``(source_index, sign)`` per target index, or ``None`` when no such
    change of basis exists.  The match is only reported, never applied
    silently.
    """
    n = candidate.size
    if target.size != n or candidate.potential != target.potential:
        return None
    cphi = [[candidate.phi.entry(i, j) for j in range(n)] for i in range(n)]
    tphi = [[target.phi.entry(i, j) for j in range(n)] for i in range(n)]
    cpsi = [[candidate.psi.entry(i, j) for j in range(n)] for i in range(n)]
    tpsi = [[target.psi.entry(i, j) for j in range(n)] for i in range(n)]

    def canon(p: SparsePoly) -> str:
        terms = p.sorted_terms()
        if terms:
            lead = terms[0][1]
            if (lead.re, lead.im) < (0, 0):
                p = -p
        return str(p)

    def row_key(row):
        return sorted(canon(e) for e in row)

    for even_perm in itertools.permutations(range(n)):
        if any(row_key(cphi[even_perm[i]]) != row_key(tphi[i])
               for i in range(n)):
            continue
        for odd_perm in itertools.permutations(range(n)):
            signs = _solve_signs(cphi, tphi, cpsi, tpsi,
                                 even_perm, odd_perm, n)
            if signs is not None:
                se, so = signs
                return (list(zip(even_perm, se)), list(zip(odd_perm, so)))
    return None


def _solve_signs(cphi, tphi, cpsi, tpsi, even_perm, odd_perm, n):
    # want: tphi[i][j] == se[i] * so[j] * cphi[even_perm[i]][odd_perm[j]]
    #   and tpsi[i][j] == so[i] * se[j] * cpsi[odd_perm[i]][even_perm[j]]
    se = [None] * n
    so = [None] * n
    se[0] = 1
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                c = cphi[even_perm[i]][odd_perm[j]]
                t = tphi[i][j]
                if not c and not t:
                    continue
                if c == t:
                    rel = 1
                elif c == -t:
                    rel = -1
                else:
                    return None
                if se[i] is not None and so[j] is None:
                    so[j] = rel * se[i]
                    changed = True
                elif so[j] is not None and se[i] is None:
                    se[i] = rel * so[j]
                    changed = True
                elif se[i] is not None and so[j] is not None:
                    if se[i] * so[j] != rel:
                        return None
    se = [1 if v is None else v for v in se]
    so = [1 if v is None else v for v in so]
    for i in range(n):
        for j in range(n):
            if tphi[i][j] != se[i] * so[j] * cphi[even_perm[i]][odd_perm[j]]:
                return None
            if tpsi[i][j] != so[i] * se[j] * cpsi[odd_perm[i]][even_perm[j]]:
                return None
    return (se, so)


def polygon_report_json(points, contributions) -> str:
    """A stable JSON report of one enumeration run."""
    doc = {
        "points": [
            {
                "label": p.label,
                "degree": p.degree,
                "arc": p.arc,
                "lift": list(p.lift),
                "frac": str(p.frac),
                "segment": p.segment,
            }
            for p in points
        ],
        "polygons": sorted(
            (
                {
                    "output": c.output,
                    "input": c.input,
                    "word": list(c.word),
                    "sign": c.sign,
                    "monomial": str(c.monomial),
                    "faces": c.faces,
                }
                for c in contributions
            ),
            key=lambda d: json.dumps(d, sort_keys=True),
        ),
    }
    return json.dumps(doc, indent=2, sort_keys=True)
