"""Link conditions for non-positive curvature.

Angles are exact rationals measured in units of pi, so ``Fraction(1, 2)`` is a
right angle and the link condition reads "every cycle has angle >= 2".
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

import networkx as nx

from .complex_core import (
    Corner,
    LinkComplex,
    PolygonalComplex,
    ProductComplex,
    SimplicialComplex,
    link_vertex_name,
    validate_complex,
    vertex_link,
)

NPC, CAT_MINUS_ONE, FAIL = "NPC", "CAT(-1)", "fail"
GIRTH_RULE, FLAG_RULE, PRODUCT_RULE = "girth-2pi", "flag", "product-of-NPC"
TWO_PI = Fraction(2)

EUCLIDEAN, HYPERBOLIC = "euclidean", "hyperbolic"


@dataclass(frozen=True)
class CornerAngleAssignment:
    angles: Mapping[Corner, Fraction]

    __hash__ = None

    @classmethod
    def right_angled(cls, C: PolygonalComplex) -> "CornerAngleAssignment":
        return cls({c: Fraction(1, 2) for c in C.corners()})

    def validate(self, C: PolygonalComplex) -> list[str]:
        problems = []
        for c in C.corners():
            a = self.angles.get(c)
            if a is None:
                problems.append(f"corner {c.face}[{c.index}] has no angle")
            elif not 0 < a < 1:
                problems.append(f"corner {c.face}[{c.index}] angle {a}pi outside (0, pi)")
        return problems

    def to_dict(self) -> dict:
        return {f"{c.face}:{c.index}": str(a) for c, a in self.angles.items()}

    @classmethod
    def from_dict(cls, data: Mapping[str, str]) -> "CornerAngleAssignment":
        out = {}
        for key, val in data.items():
            face, _, idx = key.rpartition(":")
            out[Corner(face, int(idx))] = Fraction(val)
        return cls(out)


def _format_angle(a) -> str:
    return "inf" if a == math.inf else str(a)


def angle_text(a) -> str:
    """Human form of a multiple of pi: ``2 pi``, ``3/2 pi``, ``inf``."""
    return "inf" if a == math.inf else f"{a} pi"


@dataclass(frozen=True)
class LinkCycle:
    """A closed edge path in a 2-complex link: ``steps[k] = (x, y, corner)`` goes x -> y."""

    vertex: Any
    steps: tuple[tuple[Any, Any, Corner], ...]
    angle: Fraction

    def to_dict(self) -> dict:
        return {
            "vertex": str(self.vertex),
            "cycle": [
                {"from": link_vertex_name(x), "to": link_vertex_name(y), "face": c.face, "corner": c.index}
                for x, y, c in self.steps
            ],
            "angle": str(self.angle),
        }


def shortest_link_cycle(L: LinkComplex, a: CornerAngleAssignment, vertex=None) -> LinkCycle | None:
    """Minimum-angle embedded cycle in a 1-dimensional link, or None for a forest.

    For each link edge, the cheapest cycle through it is the edge plus a
    shortest path between its ends avoiding it.
    """
    if L.factors or L.base.dimension > 1:
        raise ValueError("cycle search needs a 1-dimensional 2-complex link")
    instances = L.edge_instances()
    weight = {}
    for x, y, c in instances:
        if c not in a.angles:
            raise ValueError(f"missing angle for corner {c.face}[{c.index}]")
        weight[c] = Fraction(a.angles[c])
    adj: dict = {v: [] for v in L.vertices}
    for x, y, c in instances:
        adj[x].append((y, c))
        if x != y:
            adj[y].append((x, c))

    best: LinkCycle | None = None
    for x, y, c in instances:
        if x == y:
            cand = LinkCycle(vertex, ((x, x, c),), weight[c])
        else:
            found = _dijkstra(adj, weight, y, x, skip=c)
            if found is None:
                continue
            dist, path = found
            cand = LinkCycle(vertex, ((x, y, c),) + path, weight[c] + dist)
        if best is None or cand.angle < best.angle:
            best = cand
    return best


def _dijkstra(adj, weight, source, target, skip):
    tie = itertools.count()
    dist = {source: Fraction(0)}
    prev: dict = {}
    heap = [(Fraction(0), next(tie), source)]
    done = set()
    while heap:
        d, _, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == target:
            steps = []
            while u != source:
                p, c = prev[u]
                steps.append((p, u, c))
                u = p
            return d, tuple(reversed(steps))
        for nb, c in adj[u]:
            if c == skip or nb == u:
                continue
            nd = d + weight[c]
            if nb not in dist or nd < dist[nb]:
                dist[nb] = nd
                prev[nb] = (u, c)
                heapq.heappush(heap, (nd, next(tie), nb))
    return None


def verify_cycle(L: LinkComplex, cycle: LinkCycle, a: CornerAngleAssignment) -> bool:
    """Replay a cycle witness: closed, uses existing corners between the stated
    ends, no repeated vertex or corner, and the stated angle sum."""
    steps = cycle.steps
    if not steps:
        return False
    known = {}
    for x, y, c in L.edge_instances():
        known[c] = {x, y}
    visited = []
    corners = []
    for k, (x, y, c) in enumerate(steps):
        if known.get(c) != {x, y}:
            return False
        if steps[k - 1][1] != x:
            return False
        visited.append(x)
        corners.append(c)
    if len(set(visited)) != len(visited) or len(set(corners)) != len(corners):
        return False
    return sum((Fraction(a.angles[c]) for c in corners), Fraction(0)) == cycle.angle


def min_link_cycle_angle(L: LinkComplex, a: CornerAngleAssignment):
    """Least total angle of an embedded link cycle (a Fraction), or ``math.inf``."""
    cyc = shortest_link_cycle(L, a)
    return math.inf if cyc is None else cyc.angle


@dataclass(frozen=True)
class CurvatureCertificate:
    verdict: str
    rule: str
    min_cycle_angle: Any = math.inf  # Fraction or math.inf
    witness: Any = None
    notes: tuple[str, ...] = ()
    factors: tuple["CurvatureCertificate", ...] = field(default=())

    @property
    def nonpositively_curved(self) -> bool:
        return self.verdict in (NPC, CAT_MINUS_ONE)

    def to_dict(self) -> dict:
        wit = self.witness
        if isinstance(wit, LinkCycle):
            wit = wit.to_dict()
        data = {
            "verdict": self.verdict,
            "rule": self.rule,
            "min_cycle_angle": _format_angle(self.min_cycle_angle),
            "witness": wit,
        }
        if self.notes:
            data["notes"] = list(self.notes)
        if self.factors:
            data["factors"] = [f.to_dict() for f in self.factors]
        return data


def _check_geometry(C: PolygonalComplex, a: CornerAngleAssignment, geometry: str) -> str:
    if geometry not in (EUCLIDEAN, HYPERBOLIC):
        raise ValueError(f"unsupported geometry {geometry!r}")
    right = Fraction(1, 2)
    for f, bd in C.faces.items():
        if any(a.angles[Corner(f, j)] != right for j in range(len(bd))):
            raise ValueError(f"unsupported geometry: face {f} is not right-angled")
        if geometry == EUCLIDEAN and len(bd) != 4:
            raise ValueError(f"unsupported geometry: face {f} has {len(bd)} sides; Euclidean faces must be unit squares")
        if geometry == HYPERBOLIC and len(bd) < 5:
            raise ValueError(f"unsupported geometry: a right-angled hyperbolic polygon needs >= 5 sides, face {f} has {len(bd)}")
    if geometry == HYPERBOLIC and C.faces:
        return "faces are regular right-angled hyperbolic polygons (exist for >= 5 sides)"
    if C.faces:
        return "faces are unit Euclidean squares"
    return "no 2-cells: a graph is non-positively curved"


def certify_2complex(C: PolygonalComplex, a: CornerAngleAssignment | None = None, geometry: str = EUCLIDEAN) -> CurvatureCertificate:
    problems = validate_complex(C)
    if problems:
        raise ValueError("invalid complex: " + "; ".join(problems))
    a = a or CornerAngleAssignment.right_angled(C)
    problems = a.validate(C)
    if problems:
        raise ValueError("; ".join(problems))
    note = _check_geometry(C, a, geometry)
    overall = math.inf
    worst = None
    for v in C.vertices:
        cyc = shortest_link_cycle(vertex_link(C, v), a, vertex=v)
        if cyc is not None and cyc.angle < overall:
            overall, worst = cyc.angle, cyc
    if overall < TWO_PI:
        return CurvatureCertificate(FAIL, GIRTH_RULE, overall, worst, (note,))
    verdict = CAT_MINUS_ONE if geometry == HYPERBOLIC and C.faces else NPC
    return CurvatureCertificate(verdict, GIRTH_RULE, overall, None, (note,))


def certify_product(P: ProductComplex, certs: Sequence[CurvatureCertificate]) -> CurvatureCertificate:
    if len(certs) != len(P.factors):
        raise ValueError(f"{len(certs)} certificates for {len(P.factors)} factors")
    least = min((c.min_cycle_angle for c in certs), default=math.inf)
    for i, c in enumerate(certs):
        if not c.nonpositively_curved:
            return CurvatureCertificate(FAIL, PRODUCT_RULE, least, {"factor": i, "witness": c.to_dict()["witness"]}, factors=tuple(certs))
    nontrivial = sum(1 for F in P.factors if F.edges)
    if len(certs) == 1:
        c = certs[0]
        return CurvatureCertificate(c.verdict, c.rule, c.min_cycle_angle, None, c.notes, tuple(certs))
    note = "product metric of non-positively curved factors"
    if nontrivial >= 2:
        note += "; not CAT(-1): contains flats"
    verdict = NPC
    if nontrivial <= 1 and any(c.verdict == CAT_MINUS_ONE for c in certs):
        verdict = CAT_MINUS_ONE
    return CurvatureCertificate(verdict, PRODUCT_RULE, least, None, (note,), tuple(certs))


def is_flag(S: SimplicialComplex) -> tuple[bool, frozenset | None]:
    """Flag test; the witness is a minimal clique of the 1-skeleton spanning no simplex."""
    G = nx.Graph()
    G.add_nodes_from(range(len(S.vertices)))
    G.add_edges_from(S.simplices(1))
    # cliques arrive in order of increasing size, so the first miss is minimal
    for clique in nx.enumerate_all_cliques(G):
        labels = frozenset(S.vertices[i] for i in clique)
        if labels not in S:
            return False, labels
    return True, None
