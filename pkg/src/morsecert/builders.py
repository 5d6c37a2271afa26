"""Builders for the worked examples.

* ``raag(n)``: the product of ``n`` wedges of two circles, every edge of
  degree 1, with the diagonal swap of the two circles.
* ``hexagon``: one vertex, eight loops ``x1..x8`` and eight hexagons, every
  edge of degree 1, with the order-8 shift ``x_i -> x_(i+1)``.
* ``hexagon-product``: two copies of the hexagon complex, the sum Morse
  function, and the diagonal shift.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .complex_core import (
    PolygonalComplex,
    ProductComplex,
    vertex_link,
)
from .morse import MorseWeighting, ProductWeighting
from .symmetry import CellularAutomorphism, ProductAutomorphism

# face i of the default family: x_i x_(i+3) x_i x_(i+1)^-1 x_i^-1 x_(i+1)^-1
DEFAULT_HEXAGON_WORD = ((0, 1), (3, 1), (0, 1), (1, -1), (0, -1), (1, -1))

HEXAGON_PROVENANCE = (
    "Face word derived from the stated link structure (ascending 8-cycle on i-, descending 8-cycle "
    "on i+, cross edges i+ -- (i+-1)- and (i+-3)-); whether it equals the original figure's "
    "boundary word cannot be determined from the text."
)


@dataclass(frozen=True)
class HexagonFaceFamily:
    """Eight faces indexed by Z/8; face ``i`` reads ``x_(i+offset)^sign`` letter by letter."""

    word: tuple[tuple[int, int], ...] = DEFAULT_HEXAGON_WORD
    modulus: int = 8

    def face_boundary(self, i: int) -> tuple[tuple[str, int], ...]:
        n = self.modulus
        return tuple((edge_name((i + off) % n), s) for off, s in self.word)

    def complex(self) -> PolygonalComplex:
        n = self.modulus
        return PolygonalComplex(
            ("v",),
            {edge_name(i): ("v", "v") for i in range(n)},
            {face_name(i): self.face_boundary(i) for i in range(n)},
            {"hexagon_face_word": format_family_word(self.word), "provenance": HEXAGON_PROVENANCE},
        )


def edge_name(i: int) -> str:
    return f"x{i + 1}"


def face_name(i: int) -> str:
    return f"F{i + 1}"


def format_family_word(word) -> str:
    parts = []
    for off, s in word:
        idx = "i" if off == 0 else f"i+{off}"
        parts.append(f"x_{{{idx}}}" + ("" if s > 0 else "^-1"))
    return " ".join(parts)


def expected_hexagon_link_edges(n: int = 8) -> list[frozenset]:
    """Link edges of the hexagon complex as described for the construction,
    with ``i-`` the tail end and ``i+`` the head end of ``x_i``."""
    minus = lambda i: (edge_name(i % n), "tail")  # noqa: E731
    plus = lambda i: (edge_name(i % n), "head")  # noqa: E731
    edges = []
    for i in range(n):
        edges.append(frozenset((minus(i), minus(i + 1))))
        edges.append(frozenset((plus(i), plus(i + 1))))
        for d in (1, -1, 3, -3):
            edges.append(frozenset((plus(i), minus(i + d))))
    return edges


def hexagon_link_matches(C: PolygonalComplex, n: int = 8) -> list[str]:
    """Check the exact-cover invariant: every expected link edge is realized by
    exactly one corner, and no other corners exist."""
    L = vertex_link(C, "v")
    want = expected_hexagon_link_edges(n)
    problems = []
    if len(set(want)) != len(want):
        problems.append("expected edge list has repeats")
    have = {k: len(cs) for k, cs in L.corner_provenance.items()}
    for k in want:
        if have.get(k, 0) != 1:
            problems.append(f"link edge {sorted(k)} realized {have.get(k, 0)} times")
    extra = set(have) - set(want)
    for k in sorted(extra, key=lambda k: sorted(k)):
        problems.append(f"unexpected link edge {sorted(k)}")
    return problems


def wedge_of_circles(names: Sequence[str] = ("a", "b")) -> PolygonalComplex:
    return PolygonalComplex(("v",), {e: ("v", "v") for e in names}, {})


def swap_automorphism(C: PolygonalComplex, a: str = "a", b: str = "b") -> CellularAutomorphism:
    edge_map = {e: (e, 1) for e in C.edges}
    edge_map[a], edge_map[b] = (b, 1), (a, 1)
    return CellularAutomorphism({v: v for v in C.vertices}, edge_map, {})


def shift_automorphism(family: HexagonFaceFamily = HexagonFaceFamily()) -> CellularAutomorphism:
    n = family.modulus
    return CellularAutomorphism(
        {"v": "v"},
        {edge_name(i): (edge_name((i + 1) % n), 1) for i in range(n)},
        {face_name(i): (face_name((i + 1) % n), 0, False) for i in range(n)},
    )


@dataclass
class Example:
    """A complex with Morse weighting, symmetry, base vertex, and face geometry."""

    name: str
    complex: Any  # PolygonalComplex | ProductComplex
    weighting: Any  # MorseWeighting | ProductWeighting
    automorphism: Any  # CellularAutomorphism | ProductAutomorphism
    vertex: Any
    geometry: Any  # str for a 2-complex, list of str for a product
    metadata: dict = field(default_factory=dict)

    @property
    def is_product(self) -> bool:
        return isinstance(self.complex, ProductComplex)

    def to_dict(self) -> dict:
        data = {
            "name": self.name,
            "kind": "product" if self.is_product else "polygonal",
            "complex": self.complex.to_dict(),
            "weighting": self.weighting.to_dict(),
            "automorphism": self.automorphism.to_dict(),
            "vertex": list(self.vertex) if self.is_product else self.vertex,
            "geometry": self.geometry,
        }
        if self.metadata:
            data["metadata"] = self.metadata
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "Example":
        product = data.get("kind", "polygonal") == "product" or "factors" in data["complex"]
        if product:
            C = ProductComplex.from_dict(data["complex"])
            w = ProductWeighting.from_dict(data["weighting"])
            s = ProductAutomorphism.from_dict(data["automorphism"])
            v = tuple(data["vertex"])
            geometry = data.get("geometry") or ["euclidean"] * len(C.factors)
        else:
            C = PolygonalComplex.from_dict(data["complex"])
            w = MorseWeighting.from_dict(data["weighting"])
            s = CellularAutomorphism.from_dict(data["automorphism"])
            v = data["vertex"]
            geometry = data.get("geometry", "euclidean")
        return cls(data.get("name", "custom"), C, w, s, v, geometry, dict(data.get("metadata", {})))


def raag(n: int) -> Example:
    if n < 1:
        raise ValueError("raag(n) needs n >= 1")
    factors = tuple(wedge_of_circles((f"a{k + 1}", f"b{k + 1}")) for k in range(n))
    return Example(
        f"raag-{n}",
        ProductComplex(factors),
        ProductWeighting(tuple(MorseWeighting.constant(F) for F in factors)),
        ProductAutomorphism(tuple(swap_automorphism(F, f"a{k + 1}", f"b{k + 1}") for k, F in enumerate(factors))),
        tuple("v" for _ in factors),
        ["euclidean"] * n,
    )


def hexagon(family: HexagonFaceFamily = HexagonFaceFamily()) -> Example:
    C = family.complex()
    return Example(
        "hexagon",
        C,
        MorseWeighting.constant(C),
        shift_automorphism(family),
        "v",
        "hyperbolic",
        {"provenance": HEXAGON_PROVENANCE},
    )


def hexagon_product(family: HexagonFaceFamily = HexagonFaceFamily()) -> Example:
    X = family.complex()
    return Example(
        "hexagon-product",
        ProductComplex((X, X)),
        ProductWeighting((MorseWeighting.constant(X), MorseWeighting.constant(X))),
        ProductAutomorphism((shift_automorphism(family), shift_automorphism(family))),
        ("v", "v"),
        ["hyperbolic", "hyperbolic"],
        {"provenance": HEXAGON_PROVENANCE},
    )


def build_example(spec: str) -> Example:
    """``raag-N``, ``raag(N)``, ``hexagon``, ``hexagon-product``, or a path to a JSON bundle."""
    s = spec.strip()
    if s in ("hexagon",):
        return hexagon()
    if s in ("hexagon-product", "hexagon_product"):
        return hexagon_product()
    for prefix in ("raag-", "raag(", "raag"):
        if s.startswith(prefix) and s[len(prefix):].rstrip(")").isdigit():
            return raag(int(s[len(prefix):].rstrip(")")))
    path = Path(s[len("custom:"):] if s.startswith("custom:") else s)
    if path.is_file():
        return Example.from_dict(json.loads(path.read_text()))
    raise ValueError(f"unknown example {spec!r} (expected raag-N, hexagon, hexagon-product, or a JSON file)")

