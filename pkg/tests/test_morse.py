import pytest
from hypothesis import given, strategies as st

from morsecert.builders import build_example, hexagon, wedge_of_circles
from morsecert.complex_core import (
    ASCENDING,
    HEAD,
    TAIL,
    PolygonalComplex,
    ProductComplex,
    product_link,
    vertex_link,
)
from morsecert.morse import (
    MorseWeighting,
    ProductWeighting,
    ascending_link,
    corner_heights,
    descending_link,
    finiteness_report,
    morse_image_index,
    validate_morse,
)

nonzero = st.integers(-3, 3).filter(bool)


def torus():
    return PolygonalComplex(
        ("v",), {"a": ("v", "v"), "b": ("v", "v")},
        {"T": (("a", 1), ("b", 1), ("a", -1), ("b", -1))},
    )


@st.composite
def morse_complexes(draw, kinds=("graph", "torus", "hexagon")):
    """(complex, weighting, vertex): graphs with arbitrary degrees, the torus, or a
    rescaled hexagon complex."""
    kind = draw(st.sampled_from(kinds))
    if kind == "graph":
        nv = draw(st.integers(1, 3))
        verts = tuple(f"u{i}" for i in range(nv))
        ne = draw(st.integers(1, 5))
        edges = {f"e{j}": (draw(st.sampled_from(verts)), draw(st.sampled_from(verts))) for j in range(ne)}
        C = PolygonalComplex(verts, edges, {})
        w = MorseWeighting({e: draw(nonzero) for e in edges})
        v = draw(st.sampled_from(verts))
    elif kind == "torus":
        C = torus()
        w = MorseWeighting({"a": draw(nonzero), "b": draw(nonzero)})
        v = "v"
    else:
        C = hexagon().complex
        w = MorseWeighting.constant(C, draw(nonzero))
        v = "v"
    return C, w, v


class TestValidateMorse:
    def test_hexagon_heights(self):
        ex = hexagon()
        assert validate_morse(ex.complex, ex.weighting) == []
        assert set(corner_heights(ex.complex, ex.weighting).values()) == {(0, 1, 2, 3, 2, 1)}

    def test_alternating_square(self):
        C = PolygonalComplex(("v",), {e: ("v", "v") for e in "abcd"}, {"F": tuple((e, 1) for e in "abcd")})
        w = MorseWeighting({"a": 1, "b": -1, "c": 1, "d": -1})
        problems = validate_morse(C, w)
        assert len(problems) == 1 and "4 sign changes" in problems[0]

    def test_zero_weight(self):
        w = MorseWeighting({"a": 0, "b": 1})
        assert any("zero weight" in p for p in validate_morse(wedge_of_circles(), w))

    def test_nonzero_sum(self):
        C = torus()
        C2 = PolygonalComplex(C.vertices, C.edges, {"T": (("a", 1), ("b", 1), ("a", 1), ("b", -1))})
        assert any("!= 0" in p for p in validate_morse(C2, MorseWeighting({"a": 1, "b": 1})))

    @given(morse_complexes())
    def test_generated_data_valid(self, data):
        C, w, _ = data
        assert validate_morse(C, w) == []

    @given(morse_complexes())
    def test_heights_differences_are_weights(self, data):
        C, w, _ = data
        for f, hs in corner_heights(C, w).items():
            bd = C.faces[f]
            for j in range(len(bd)):
                e, s = bd[j]
                assert hs[(j + 1) % len(bd)] - hs[j] == s * w.weights[e]


class TestLinks:
    def test_wedge_ascending_is_two_tails(self):
        C = wedge_of_circles()
        L = ascending_link(C, MorseWeighting.constant(C), "v")
        assert set(L.vertices) == {("a", TAIL), ("b", TAIL)}

    def test_hexagon_ascending_octagon(self):
        ex = hexagon()
        L = ascending_link(ex.complex, ex.weighting, "v")
        want = {frozenset(((f"x{i + 1}", TAIL), (f"x{(i + 1) % 8 + 1}", TAIL))) for i in range(8)}
        assert set(L.base.facets) == want

    def test_hexagon_descending_octagon(self):
        ex = hexagon()
        L = descending_link(ex.complex, ex.weighting, "v")
        want = {frozenset(((f"x{i + 1}", HEAD), (f"x{(i + 1) % 8 + 1}", HEAD))) for i in range(8)}
        assert set(L.base.facets) == want

    @given(morse_complexes())
    def test_partition_of_edge_ends(self, data):
        C, w, v = data
        up = set(ascending_link(C, w, v).vertices)
        down = set(descending_link(C, w, v).vertices)
        assert not up & down
        assert up | down == set(C.edge_ends_at(v))

    @given(morse_complexes())
    def test_negation_swaps(self, data):
        C, w, v = data
        assert ascending_link(C, w.negated(), v).base == descending_link(C, w, v).base
        assert descending_link(C, w.negated(), v).base == ascending_link(C, w, v).base

    @given(st.lists(morse_complexes(("graph", "torus")), min_size=2, max_size=3))
    def test_product_ascending_is_induced_subcomplex(self, parts):
        self.check_product(parts)

    def test_hexagon_product_ascending_is_induced_subcomplex(self):
        ex = hexagon()
        self.check_product([(ex.complex, ex.weighting, "v")] * 2)
        self.check_product([(ex.complex, ex.weighting.negated(), "v"), (torus(), MorseWeighting({"a": 1, "b": -2}), "v")])

    def check_product(self, parts):
        P = ProductComplex(tuple(C for C, _, _ in parts))
        w = ProductWeighting(tuple(wf for _, wf, _ in parts))
        v = tuple(x for _, _, x in parts)
        full = product_link(P, v, list(w.factors))
        keep = [x for x, p in full.polarity.items() if p == ASCENDING]
        if any(not vertex_link(C, x, wf).is_simplicial for C, wf, x in parts):
            return
        assert ascending_link(P, w, v).base == full.base.induced(keep)


class TestImageIndex:
    def test_unit_weights(self):
        C = wedge_of_circles()
        assert morse_image_index(C, MorseWeighting.constant(C)) == 1

    def test_gcd(self):
        assert morse_image_index(wedge_of_circles(), MorseWeighting({"a": 2, "b": 4})) == 2

    def test_hexagon(self):
        ex = hexagon()
        assert morse_image_index(ex.complex, ex.weighting) == 1

    def test_tree_edges_do_not_count(self):
        C = PolygonalComplex(("p", "q"), {"t": ("p", "q"), "l": ("q", "q")}, {})
        assert morse_image_index(C, MorseWeighting({"t": 5, "l": 3})) == 3


class TestFiniteness:
    def report(self, name):
        ex = build_example(name)
        return finiteness_report(
            ascending_link(ex.complex, ex.weighting, ex.vertex),
            descending_link(ex.complex, ex.weighting, ex.vertex),
        )

    def test_hexagon(self):
        r = self.report("hexagon")
        assert (r.kind, r.statement) == ("sharp", "type F_1 but not F_2")

    def test_two_zero_spheres(self):
        r = self.report("raag-1")
        assert r.statement == "type F_0 but not F_1"

    def test_hexagon_product(self):
        r = self.report("hexagon-product")
        assert r.statement == "type F_3 but not F_4"
        assert r.ascending.simply_connected == "yes"

    @pytest.mark.parametrize("name", ["raag-1", "raag-2", "hexagon", "hexagon-product"])
    def test_symmetric(self, name):
        ex = build_example(name)
        a = ascending_link(ex.complex, ex.weighting, ex.vertex)
        d = descending_link(ex.complex, ex.weighting, ex.vertex)
        assert finiteness_report(a, d).statement == finiteness_report(d, a).statement

    @given(morse_complexes())
    def test_symmetric_generated(self, data):
        C, w, v = data
        a, d = ascending_link(C, w, v), descending_link(C, w, v)
        r1, r2 = finiteness_report(a, d), finiteness_report(d, a)
        assert (r1.kind, r1.m, r1.statement) == (r2.kind, r2.m, r2.statement)

    def test_text_names_rule(self):
        text = self.report("hexagon").render_text()
        assert "Rule applied" in text and "contingent on" in text


class TestSerialization:
    def test_weighting_round_trip(self):
        w = MorseWeighting({"a": 1, "b": -2})
        assert MorseWeighting.from_dict(w.to_dict()) == w
        assert w.to_dict() == {"weights": {"a": 1, "b": -2}}
