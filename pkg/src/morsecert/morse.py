"""Circle-valued Morse functions given by integer edge degrees.

A weighting assigns each oriented edge the (nonzero) degree with which it
wraps the circle.  The affine extension over a face exists and is nonconstant
exactly when the signed weights around the face sum to zero and the corner
heights are unimodal; nothing else about the function is ever materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Mapping, Sequence, Union

from .complex_core import (
    ASCENDING,
    DESCENDING,
    LinkComplex,
    PolygonalComplex,
    ProductComplex,
    join_links,
    product_link,
    validate_complex,
    vertex_link,
)
from .homology import HomologyProfile, reduced_homology


@dataclass(frozen=True)
class MorseWeighting:
    weights: Mapping[str, int]

    def __post_init__(self):
        object.__setattr__(self, "weights", {str(e): int(w) for e, w in self.weights.items()})

    __hash__ = None

    @classmethod
    def constant(cls, C: PolygonalComplex, value: int = 1) -> "MorseWeighting":
        return cls({e: value for e in C.edges})

    def negated(self) -> "MorseWeighting":
        return MorseWeighting({e: -w for e, w in self.weights.items()})

    def to_dict(self) -> dict:
        return {"weights": dict(self.weights)}

    @classmethod
    def from_dict(cls, data: Mapping) -> "MorseWeighting":
        return cls(dict(data["weights"]))


@dataclass(frozen=True)
class ProductWeighting:
    """Sum of factor degrees: the Morse function (x, y, ...) -> f1(x) + f2(y) + ..."""

    factors: tuple[MorseWeighting, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    __hash__ = None

    def negated(self) -> "ProductWeighting":
        return ProductWeighting(tuple(w.negated() for w in self.factors))

    def to_dict(self) -> dict:
        return {"factors": [w.to_dict() for w in self.factors]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "ProductWeighting":
        return cls(tuple(MorseWeighting.from_dict(w) for w in data["factors"]))


AnyComplex = Union[PolygonalComplex, ProductComplex]
AnyWeighting = Union[MorseWeighting, ProductWeighting]


def corner_heights(C: PolygonalComplex, w: MorseWeighting) -> dict[str, tuple[int, ...]]:
    """Corner heights per face, anchored at 0 on corner 0."""
    out = {}
    for f, bd in C.faces.items():
        h = [0]
        for e, s in bd[:-1]:
            h.append(h[-1] + s * w.weights[e])
        out[f] = tuple(h)
    return out


def _sign_changes(signs: Sequence[int]) -> tuple[int, int]:
    up = down = 0
    for i in range(len(signs)):
        a, b = signs[i - 1], signs[i]
        if a > 0 and b < 0:
            down += 1
        elif a < 0 and b > 0:
            up += 1
    return up, down


def validate_morse(C: AnyComplex, w: AnyWeighting) -> list[str]:
    if isinstance(C, ProductComplex):
        if not isinstance(w, ProductWeighting) or len(w.factors) != len(C.factors):
            return ["product complex needs one weighting per factor"]
        # product cells inherit validity from the factors
        return [f"factor {i}: {m}" for i, (F, wf) in enumerate(zip(C.factors, w.factors)) for m in validate_morse(F, wf)]
    problems = []
    for e in C.edges:
        if e not in w.weights:
            problems.append(f"edge {e}: no weight")
        elif w.weights[e] == 0:
            problems.append(f"edge {e}: zero weight")
    extra = sorted(set(w.weights) - set(C.edges))
    if extra:
        problems.append(f"weights for unknown edges {extra}")
    if problems:
        return problems
    for f, bd in C.faces.items():
        signed = [s * w.weights[e] for e, s in bd]
        total = sum(signed)
        if total != 0:
            problems.append(f"face {f}: signed weight sum {total} != 0")
        up, down = _sign_changes(signed)
        if (up, down) != (1, 1):
            problems.append(f"face {f}: {up + down} sign changes around the boundary (need exactly 2, unimodal heights)")
    return problems


def _require_morse(C, w):
    problems = validate_complex(C) if isinstance(C, PolygonalComplex) else []
    problems += validate_morse(C, w)
    if problems:
        raise ValueError("invalid Morse data: " + "; ".join(problems))


def morse_link(C: AnyComplex, w: AnyWeighting, v) -> LinkComplex:
    """Full link of ``v`` with ascending/descending polarity tags."""
    _require_morse(C, w)
    if isinstance(C, ProductComplex):
        return product_link(C, v, list(w.factors))
    return vertex_link(C, v, w)


def ascending_link(C: AnyComplex, w: AnyWeighting, v) -> LinkComplex:
    """Directions at ``v`` along which the Morse function increases.

    For a product this is the join of the factor ascending links.
    """
    if isinstance(C, ProductComplex):
        _require_morse(C, w)
        return join_links([ascending_link(F, wf, x) for F, wf, x in zip(C.factors, w.factors, v)])
    return morse_link(C, w, v).restrict(ASCENDING)


def descending_link(C: AnyComplex, w: AnyWeighting, v) -> LinkComplex:
    if isinstance(C, ProductComplex):
        _require_morse(C, w)
        return join_links([descending_link(F, wf, x) for F, wf, x in zip(C.factors, w.factors, v)])
    return morse_link(C, w, v).restrict(DESCENDING)


def spanning_tree_loops(C: PolygonalComplex, w: MorseWeighting) -> list[tuple[tuple[tuple[str, int], ...], int]]:
    """One loop per non-tree edge, as ``(signed edge word, weight)``.

    The tree is grown breadth first from the first vertex, scanning edges in
    sorted id order; loops are based at that vertex.
    """
    if not C.vertices:
        raise ValueError("empty complex")
    root = C.vertices[0]
    path = {root: ()}
    height = {root: 0}
    tree = set()
    frontier = [root]
    order = sorted(C.edges)
    while frontier:
        nxt = []
        for x in frontier:
            for e in order:
                tail, head = C.edges[e]
                for here, there, s in ((tail, head, 1), (head, tail, -1)):
                    if here == x and there not in path:
                        path[there] = path[x] + ((e, s),)
                        height[there] = height[x] + s * w.weights[e]
                        tree.add(e)
                        nxt.append(there)
        frontier = nxt
    if len(path) != len(C.vertices):
        raise ValueError("complex is disconnected")
    loops = []
    for e in order:
        if e in tree:
            continue
        tail, head = C.edges[e]
        back = tuple((f, -s) for f, s in reversed(path[head]))
        loops.append((path[tail] + ((e, 1),) + back, height[tail] + w.weights[e] - height[head]))
    return loops


def morse_image_index(C: AnyComplex, w: AnyWeighting) -> int:
    """Index of the image of the induced map on fundamental groups in Z (0 = trivial image)."""
    if isinstance(C, ProductComplex):
        g = 0
        for F, wf in zip(C.factors, w.factors):
            g = gcd(g, morse_image_index(F, wf))
        return g
    g = 0
    for _, weight in spanning_tree_loops(C, w):
        g = gcd(g, weight)
    return g


@dataclass(frozen=True)
class LinkAnalysis:
    connected: bool
    simply_connected: str  # "yes" | "no" | "unknown"
    homology: HomologyProfile
    empty: bool = False

    def to_dict(self) -> dict:
        return {
            "connected": self.connected,
            "simply_connected": self.simply_connected,
            "homology": self.homology.to_dict(),
            "homology_text": self.homology.describe(),
        }


INF = float("inf")


def _connectivity_bound(L: LinkComplex) -> float:
    """A proven lower bound on the connectivity of ``L`` (-2 empty, -1 disconnected)."""
    if not L.vertices:
        return -2
    if L.factors:
        return sum(_connectivity_bound(F) + 2 for F in L.factors) - 2
    if not L.base.is_connected():
        return -1
    if L.base.dimension <= 1 and L.is_simplicial and len(L.base.simplices(1)) == len(L.vertices) - 1:
        return INF
    return 0


def analyze_link(L: LinkComplex) -> LinkAnalysis:
    h = reduced_homology(L.base)
    if not L.vertices:
        return LinkAnalysis(False, "no", h, empty=True)
    connected = L.base.is_connected()
    bound = _connectivity_bound(L)
    if not connected:
        sc = "no"
    elif bound >= 1:
        sc = "yes"
    elif L.base.dimension <= 1:
        # a connected graph is simply connected iff it is a tree (multi-edges and loops count)
        sc = "yes" if L.edge_count == len(L.vertices) - 1 else "no"
    else:
        sc = "unknown"
    return LinkAnalysis(connected, sc, h)


RULES = (
    "both links (m-1)-connected => kernel of type F_m; "
    "additionally both with nonzero reduced H_m => not of type F_(m+1). "
    "(m-1)-connectivity is read off as: nonempty (m=0); connected (m=1); "
    "simply connected with vanishing reduced homology below m (m>=2, Hurewicz)."
)


@dataclass(frozen=True)
class FinitenessReport:
    ascending: LinkAnalysis
    descending: LinkAnalysis
    kind: str  # "sharp" | "lower_bound" | "inconclusive"
    m: int | None
    statement: str
    rule: str
    contingent_on: str = "combinatorial Morse theory for kernels (finiteness read off ascending/descending links)"

    def to_dict(self) -> dict:
        return {
            "ascending": self.ascending.to_dict(),
            "descending": self.descending.to_dict(),
            "conclusion": {"kind": self.kind, "m": self.m, "statement": self.statement},
            "rule": self.rule,
            "contingent_on": self.contingent_on,
        }

    def render_text(self) -> str:
        lines = [
            "Mechanically verified link topology:",
            f"  ascending link:  connected={self.ascending.connected}, simply connected={self.ascending.simply_connected}, {self.ascending.homology.describe()}",
            f"  descending link: connected={self.descending.connected}, simply connected={self.descending.simply_connected}, {self.descending.homology.describe()}",
            f"Rule applied: {self.rule}",
            f"Conclusion (contingent on {self.contingent_on}): {self.statement}",
        ]
        return "\n".join(lines)


def finiteness_report(asc: LinkComplex, desc: LinkComplex) -> FinitenessReport:
    a, d = analyze_link(asc), analyze_link(desc)
    if a.empty or d.empty:
        return FinitenessReport(a, d, "inconclusive", None, "inconclusive: an ascending or descending link is empty", RULES)
    firsts = [x.homology.first_nonzero() for x in (a, d)]
    present = [k for k in firsts if k is not None]
    if not present:
        stmt = "inconclusive: both links are acyclic; no upper bound on finiteness can be read off"
        return FinitenessReport(a, d, "inconclusive", None, stmt, RULES)
    m = min(present)
    if m >= 2 and not (a.simply_connected == "yes" and d.simply_connected == "yes"):
        stmt = (
            f"inconclusive: links are connected with vanishing reduced homology below degree {m}, "
            f"but simple connectivity is undecided; proven: type F_1 at least"
        )
        return FinitenessReport(a, d, "inconclusive", m, stmt, RULES)
    if all(k == m for k in firsts):
        return FinitenessReport(a, d, "sharp", m, f"type F_{m} but not F_{m + 1}", RULES)
    return FinitenessReport(a, d, "lower_bound", m, f"type F_{m} at least", RULES)
