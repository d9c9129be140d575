"""The 2m-gon tessellation model, the immersed-circle complex, their
invariants, and tile navigation on both."""

import json

import pytest
from hypothesis import given, settings, strategies as st

from curvemirror import singularity_core as core
from curvemirror import surface_topology as surf

pq_st = st.tuples(st.integers(2, 6), st.integers(2, 6))
family_builder = {
    core.Family.FERMAT: core.fermat,
    core.Family.CHAIN: core.chain,
    core.Family.LOOP: core.loop,
}
poly_st = st.tuples(
    st.sampled_from(sorted(family_builder, key=lambda f: f.value)),
    pq_st).map(lambda t: family_builder[t[0]](*t[1]))


def orbit_census(ts):
    census = {}
    for orbit in ts.vertex_orbits:
        census.setdefault(orbit.kind, []).append(orbit.size)
    return {kind: sorted(sizes) for kind, sizes in census.items()}


class TestBuildTessellation:
    def test_fermat_5_2_golden(self):
        ts = surf.build_tessellation(core.fermat(5, 2))
        assert (2 * ts.m, ts.pattern) == (10, 3)
        assert ts.vertex_count == 2
        assert ts.euler_characteristic == -2
        assert orbit_census(ts) == {"a": [5], "c": [5]}
        punctured = [o for o in ts.vertex_orbits if o.punctured]
        assert len(punctured) == 1 and punctured[0].kind == "c"
        assert ts.puncture_count == 1

    def test_chain_4_2_golden(self):
        ts = surf.build_tessellation(core.chain(4, 2))
        assert (2 * ts.m, ts.pattern) == (16, 7)
        assert ts.vertex_count == 5
        assert ts.euler_characteristic == -2
        assert orbit_census(ts) == {"b": [2, 2, 2, 2], "c": [8]}
        interior = {pt.kind: (pt.count, pt.punctured)
                    for pt in ts.interior_points}
        assert interior == {"a": (1, True)}
        assert ts.puncture_count == 2

    def test_chain_2_4_golden(self):
        ts = surf.build_tessellation(core.chain(2, 4))
        assert (2 * ts.m, ts.pattern) == (16, 3)
        chi, genus, punctures, _ = surf.surface_invariants(ts)
        assert (chi, genus, punctures) == (-4, 3, 2)

    def test_loop_2_2_golden(self):
        ts = surf.build_tessellation(core.loop(2, 2))
        assert (2 * ts.m, ts.pattern) == (6, 3)
        assert ts.euler_characteristic == 0
        assert ts.puncture_count == 3
        mu = ts.invariants.mu
        assert ts.euler_characteristic - ts.puncture_count == 1 - mu == -3
        assert orbit_census(ts) == {"b": [3], "c": [3]}
        assert all(o.punctured for o in ts.vertex_orbits)

    def test_fermat_2_2_sphere(self):
        ts = surf.build_tessellation(core.fermat(2, 2))
        assert (ts.euler_characteristic, ts.invariants.g) == (2, 0)
        assert orbit_census(ts) == {"a": [2], "c": [1, 1]}

    def test_fermat_3_3(self):
        ts = surf.build_tessellation(core.fermat(3, 3))
        assert orbit_census(ts) == {"a": [3, 3], "c": [2, 2, 2]}
        assert ts.puncture_count == 3

    def test_edge_pairs_form_perfect_matching(self):
        ts = surf.build_tessellation(core.chain(4, 2))
        evens = sorted(e for e, _ in ts.edge_pairs)
        odds = sorted(o for _, o in ts.edge_pairs)
        assert evens == list(range(2, 17, 2))
        assert odds == list(range(1, 16, 2))
        for label in range(1, 17):
            assert ts.partner_of(ts.partner_of(label)) == label

    def test_boundary_word_uses_each_edge_twice(self):
        ts = surf.build_tessellation(core.fermat(5, 2))
        word = ts.boundary_word()
        assert len(word) == 2 * ts.m
        signs = {}
        for edge, sign in word:
            signs.setdefault(edge, []).append(sign)
        assert all(sorted(v) == [-1, 1] for v in signs.values())

    def test_transposed_chain_canonicalized(self):
        w = core.transpose(core.chain(2, 4))
        assert w.is_transposed_chain
        ts = surf.build_tessellation(w)
        assert (2 * ts.m, ts.pattern) == (16, 7)
        assert ts.polynomial == core.chain(4, 2)

    def test_corner_orbit_lookup(self):
        ts = surf.build_tessellation(core.fermat(5, 2))
        assert ts.corner_orbit(1).kind == "c"
        assert ts.corner_orbit(0).kind == "a"
        assert ts.corner_orbit(3) == ts.corner_orbit(13)
        with pytest.raises(ValueError):
            ts.partner_of(0)


class TestSeidelComplex:
    def test_quotient_shape(self):
        s = surf.build_seidel_complex(core.loop(2, 3))
        assert s.quotient_euler_characteristic == 2
        assert set(s.quotient_faces) == {
            "T_front", "T_back", "M_A", "M_B", "M_C"}
        assert len(s.arcs) == 6
        assert s.circle_traversal == ("U1", "D2", "U3", "D1", "U2", "D3")
        assert s.quotient_faces["T_front"] == (
            ("U1", 1), ("U2", 1), ("U3", 1))
        assert s.quotient_faces["M_A"] == (("D2", 1), ("U2", -1))

    def test_fermat_3_4_lens_assembly(self):
        s = surf.build_seidel_complex(core.fermat(3, 4))
        assert s.face_copies("M_A") == 4
        tile = s.lens_tile("M_A", s.group.identity)
        word = s.tile_boundary(tile)
        assert len(word) == 6
        corner_count = {"Y": 0, "Z": 0}
        for arc, g, sign in word:
            tail, head = s.arc_endpoints(arc, g)
            corner_count[(tail if sign == 1 else head)[0]] += 1
        assert corner_count == {"Y": 3, "Z": 3}

    def test_loop_2_2_free_sheets(self):
        s = surf.build_seidel_complex(core.loop(2, 2))
        assert s.group.order == 3
        for face in ("M_A", "M_B", "M_C"):
            assert s.sheet_count(face) == 3
            assert s.face_copies(face) == 1
            assert s.lens(face).order == 3

    def test_copies_times_stabilizer_is_group_order(self):
        s = surf.build_seidel_complex(core.chain(3, 4))
        for lens in s.lenses:
            assert s.face_copies(lens.name) * lens.order == s.group.order
        for face in ("T_front", "T_back"):
            assert s.face_copies(face) == s.group.order

    def test_puncture_faces_by_family(self):
        assert surf.build_seidel_complex(
            core.fermat(3, 4)).puncture_faces == {"M_C"}
        assert surf.build_seidel_complex(
            core.chain(3, 4)).puncture_faces == {"M_A", "M_C"}
        assert surf.build_seidel_complex(
            core.loop(3, 4)).puncture_faces == {"M_A", "M_B", "M_C"}

    def test_holonomies_sum_to_identity(self):
        s = surf.build_seidel_complex(core.fermat(4, 6))
        d1, d2, d3 = s.holonomies
        assert s.group.add(d1, s.group.add(d2, d3)) == s.group.identity
        assert d2 == s.hom.image_of(1)
        assert d3 == s.hom.image_of(2)
        assert d1 == s.hom.image_of(3)

    def test_red_dot_arc(self):
        assert surf.build_seidel_complex(core.fermat(3, 3)).red_dot_arc \
            == "D1"
        s = surf.build_seidel_complex(core.fermat(3, 3), red_dot_arc="D2")
        assert s.red_dot_arc == "D2"
        with pytest.raises(ValueError):
            surf.build_seidel_complex(core.fermat(3, 3), red_dot_arc="E9")

    def test_every_arc_lift_has_two_sides(self):
        s = surf.build_seidel_complex(core.loop(3, 2))
        assert len(s.edge_incidence) == 6 * s.group.order
        for (arc, g), (first, second) in s.edge_incidence.items():
            assert first != second
            assert first in s.tiles and second in s.tiles

    def test_vertex_rotation_offsets(self):
        s = surf.build_seidel_complex(core.fermat(3, 4))
        d1, d2, d3 = s.holonomies
        g = (1, 2)
        rot_x = s.vertex_rotation("X", g)
        assert rot_x[0] == ("U1", "out", g)
        assert rot_x[2] == ("D3", "in", s.group.add(g, s.group.neg(d3)))
        rot_y = s.vertex_rotation("Y", g)
        assert rot_y[2] == ("D1", "in", s.group.add(g, s.group.neg(d1)))
        rot_z = s.vertex_rotation("Z", g)
        assert rot_z[2] == ("D2", "in", s.group.add(g, s.group.neg(d2)))

    def test_back_arc_endpoints_twist(self):
        s = surf.build_seidel_complex(core.chain(3, 2))
        d1, d2, d3 = s.holonomies
        g = (2,)
        assert s.arc_endpoints("D1", g) == (("X", g), ("Y", s.group.add(g, d1)))
        assert s.arc_endpoints("D2", g) == (("Y", g), ("Z", s.group.add(g, d2)))
        assert s.arc_endpoints("D3", g) == (("Z", g), ("X", s.group.add(g, d3)))
        assert s.arc_endpoints("U1", g) == (("X", g), ("Y", g))


class TestSurfaceInvariants:
    def test_tessellation_goldens(self):
        assert surf.surface_invariants(
            surf.build_tessellation(core.fermat(5, 2)))[:3] == (-2, 2, 1)
        assert surf.surface_invariants(
            surf.build_tessellation(core.chain(2, 4)))[:3] == (-4, 3, 2)
        assert surf.surface_invariants(
            surf.build_tessellation(core.fermat(2, 2)))[:3] == (2, 0, 2)

    def test_seidel_goldens(self):
        assert surf.surface_invariants(
            surf.build_seidel_complex(core.fermat(5, 2)))[:3] == (-2, 2, 1)
        assert surf.surface_invariants(
            surf.build_seidel_complex(core.chain(2, 4)))[:3] == (-4, 3, 2)

    def test_orbit_table_contents(self):
        _, _, _, table = surf.surface_invariants(
            surf.build_tessellation(core.fermat(5, 2)))
        by_label = {rec.label: rec for rec in table}
        assert by_label["interior-b"].size == 5
        assert not by_label["interior-b"].punctured
        _, _, _, stable = surf.surface_invariants(
            surf.build_seidel_complex(core.fermat(5, 2)))
        crossings = [rec for rec in stable if rec.kind == "crossing"]
        assert [rec.label for rec in crossings] == ["X", "Y", "Z"]
        assert all(rec.size == 10 for rec in crossings)

    def test_rejects_other_inputs(self):
        with pytest.raises(TypeError):
            surf.surface_invariants(core.fermat(2, 2))
        with pytest.raises(TypeError):
            surf.lift_step("nope", ((0,), "front"), "ab")


class TestLiftStep:
    def test_gamma1_crossing_applies_first_loop_image(self):
        ts = surf.build_tessellation(core.fermat(3, 4))
        assert surf.lift_step(ts, ((0, 0), "front"), "gamma1") \
            == ((1, 0), "back")
        assert surf.lift_step(ts, ((0, 0), "front"), "ca") \
            == ((1, 0), "back")

    def test_crossing_twice_returns(self):
        ts = surf.build_tessellation(core.loop(3, 2))
        for arc in ("ab", "bc", "ca"):
            for cell in ("front", "back"):
                tile = ((1,), cell)
                there = surf.lift_step(ts, tile, arc)
                assert surf.lift_step(ts, there, arc) == tile

    def test_chain_notches_around_a_advance_by_p(self):
        ts = surf.build_tessellation(core.chain(3, 2))
        tile = ((0,), "front")
        for _ in range(3):
            tile = surf.lift_step(ts, tile, "gamma1")
            tile = surf.lift_step(ts, tile, "ab")
        assert tile == ((3,), "front")

    def test_full_turn_around_a_vertex_closes(self):
        ts = surf.build_tessellation(core.fermat(3, 4))
        group, _, _ = core.symmetry_and_weights(ts.polynomial)
        order = group.element_order(
            core.covering_homomorphism(ts.polynomial).image_of(1))
        tile = ((2, 1), "front")
        for _ in range(order):
            tile = surf.lift_step(ts, tile, "ca")
            tile = surf.lift_step(ts, tile, "ab")
        assert tile == ((2, 1), "front")

    def test_unknown_arc(self):
        ts = surf.build_tessellation(core.fermat(3, 4))
        with pytest.raises(ValueError):
            surf.lift_step(ts, ((0, 0), "front"), "xy")
        with pytest.raises(ValueError):
            surf.lift_step(ts, ((0, 0), "middle"), "ab")

    def test_seidel_lens_transit_advances_by_holonomy(self):
        s = surf.build_seidel_complex(core.fermat(3, 4))
        g0 = s.group.identity
        lens_tile = surf.lift_step(s, (g0, "T_front"), ("U2", g0))
        assert lens_tile == (g0, "M_A")
        d2 = s.lens("M_A").holonomy
        out = surf.lift_step(s, lens_tile, ("U2", d2))
        assert out == (d2, "T_front")

    def test_seidel_involution(self):
        s = surf.build_seidel_complex(core.loop(2, 2))
        tile = ((1,), "T_back")
        crossing = ("D1", (1,))
        there = surf.lift_step(s, tile, crossing, allow_punctures=True)
        assert there[1] == "M_C"
        assert surf.lift_step(s, there, crossing, allow_punctures=True) \
            == tile

    def test_boundary_edge_on_puncture_lens(self):
        s = surf.build_seidel_complex(core.chain(4, 2))
        g0 = s.group.identity
        with pytest.raises(surf.BoundaryEdge):
            surf.lift_step(s, (g0, "T_front"), ("U2", g0))
        assert surf.lift_step(
            s, (g0, "T_front"), ("U2", g0), allow_punctures=True) \
            == (g0, "M_A")
        assert surf.lift_step(s, (g0, "T_front"), ("U3", g0)) \
            == (g0, "M_B")

    def test_seidel_bad_inputs(self):
        s = surf.build_seidel_complex(core.fermat(3, 3))
        with pytest.raises(ValueError):
            surf.lift_step(s, ((0, 0), "T_front"), ("U9", (0, 0)))
        with pytest.raises(ValueError):
            surf.lift_step(s, ((1, 1), "T_front"), ("U1", (0, 0)))


class TestEmitters:
    def test_tessellation_json(self):
        ts = surf.build_tessellation(core.chain(4, 2))
        payload = surf.cell_complex_json(ts)
        data = json.loads(payload)
        assert data["model"] == "tessellation"
        assert data["edges"] == 16 and data["pattern"] == 7
        assert data["genus"] == 2 and data["punctures"] == 2
        assert len(data["edge_pairs"]) == 8
        assert payload == surf.cell_complex_json(ts)

    def test_seidel_json(self):
        s = surf.build_seidel_complex(core.loop(2, 2))
        data = json.loads(surf.cell_complex_json(s))
        assert data["model"] == "seidel"
        assert data["red_dot_arc"] == "D1"
        assert len(data["tiles"]) == 3 + 3 + 3
        assert {lens["name"] for lens in data["lenses"]} == {
            "M_A", "M_B", "M_C"}

    def test_json_rejects_other_input(self):
        with pytest.raises(TypeError):
            surf.cell_complex_json(core.fermat(2, 2))

    def test_svg_shape(self):
        ts = surf.build_tessellation(core.chain(4, 2))
        svg = surf.tessellation_svg(ts)
        assert svg.startswith("<svg") and svg.endswith("</svg>")
        assert svg.count("<line") == 16
        assert svg.count("<circle") == 16
        assert "marker-end" in svg
        assert svg == surf.tessellation_svg(ts)

    def test_svg_fermat_wedges(self):
        ts = surf.build_tessellation(core.fermat(3, 4))
        svg = surf.tessellation_svg(ts)
        assert svg.count("<polygon") == 3


class TestInvariantSweeps:
    @settings(max_examples=60, deadline=None)
    @given(poly_st)
    def test_punctured_euler_characteristic(self, w):
        ts = surf.build_tessellation(w)
        chi, _, k, _ = surf.surface_invariants(ts)
        assert chi - k == 1 - ts.invariants.mu

    @settings(max_examples=40, deadline=None)
    @given(poly_st)
    def test_models_agree(self, w):
        tess = surf.surface_invariants(surf.build_tessellation(w))
        seidel = surf.surface_invariants(surf.build_seidel_complex(w))
        assert tess[:3] == seidel[:3]

    @settings(max_examples=60, deadline=None)
    @given(poly_st)
    def test_boundary_c_vertices_count_d(self, w):
        ts = surf.build_tessellation(w)
        c_orbits = [o for o in ts.vertex_orbits if o.kind == "c"]
        assert len(c_orbits) == ts.invariants.d

    @settings(max_examples=40, deadline=None)
    @given(poly_st, st.lists(st.sampled_from(["ab", "bc", "ca"]),
                             min_size=1, max_size=12))
    def test_walks_reverse(self, w, arcs):
        ts = surf.build_tessellation(w)
        start = ((1, 0) if w.family is core.Family.FERMAT else (1,),
                 "front")
        tile = start
        for arc in arcs:
            tile = surf.lift_step(ts, tile, arc)
        for arc in reversed(arcs):
            tile = surf.lift_step(ts, tile, arc)
        assert tile == start

    @settings(max_examples=40, deadline=None)
    @given(poly_st)
    def test_seidel_orbit_sizes_multiply_to_group_order(self, w):
        s = surf.build_seidel_complex(w)
        for lens in s.lenses:
            assert s.face_copies(lens.name) * lens.order == s.group.order
        total_arcs = len(s.edge_incidence)
        assert total_arcs == 6 * s.group.order
