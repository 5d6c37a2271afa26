"""Combinatorial cell complexes and their vertex links.

A :class:`PolygonalComplex` is a 2-complex given by vertices, oriented edges
and polygonal faces whose boundaries are cyclic words of signed edges.
Products of such complexes are kept formal (:class:`ProductComplex`); the only
thing ever computed about a product is the link of a vertex, which is the join
of the factor links.

Link vertices of a 2-complex are edge-ends ``(edge_id, "tail" | "head")`` and
link edges are face corners.  Corner ``j`` of a face sits at the start of the
``j``-th signed edge of its boundary word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Any, Hashable, Iterable, Mapping, NamedTuple, Sequence

from .homology import HomologyProfile, reduced_homology

TAIL, HEAD = "tail", "head"
ASCENDING, DESCENDING = "ascending", "descending"


class Corner(NamedTuple):
    face: str
    index: int


def _sign_token(sign: int) -> str:
    return "+" if sign > 0 else "-"


def _parse_sign(token: str) -> int:
    if token == "+":
        return 1
    if token == "-":
        return -1
    raise ValueError(f"orientation token must be '+' or '-', got {token!r}")


@dataclass(frozen=True, eq=True)
class PolygonalComplex:
    vertices: tuple[str, ...]
    edges: Mapping[str, tuple[str, str]]
    faces: Mapping[str, tuple[tuple[str, int], ...]] = field(default_factory=dict)
    metadata: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", {e: tuple(th) for e, th in self.edges.items()})
        object.__setattr__(
            self, "faces", {f: tuple((e, int(s)) for e, s in bd) for f, bd in self.faces.items()}
        )

    __hash__ = None  # mappings inside

    def start(self, signed_edge: tuple[str, int]) -> str:
        e, s = signed_edge
        tail, head = self.edges[e]
        return tail if s > 0 else head

    def end(self, signed_edge: tuple[str, int]) -> str:
        e, s = signed_edge
        tail, head = self.edges[e]
        return head if s > 0 else tail

    def edge_ends_at(self, v: str) -> list[tuple[str, str]]:
        ends = []
        for e, (tail, head) in self.edges.items():
            if tail == v:
                ends.append((e, TAIL))
            if head == v:
                ends.append((e, HEAD))
        return ends

    def corner_ends(self, corner: Corner) -> tuple[tuple[str, str], tuple[str, str]]:
        """The two edge-ends a corner joins: end of the incoming edge, start of the outgoing."""
        bd = self.faces[corner.face]
        e_in, s_in = bd[corner.index - 1]
        e_out, s_out = bd[corner.index]
        return (e_in, HEAD if s_in > 0 else TAIL), (e_out, TAIL if s_out > 0 else HEAD)

    def corner_vertex(self, corner: Corner) -> str:
        return self.start(self.faces[corner.face][corner.index])

    def corners(self) -> list[Corner]:
        return [Corner(f, j) for f, bd in self.faces.items() for j in range(len(bd))]

    def to_dict(self) -> dict:
        data = {
            "vertices": list(self.vertices),
            "edges": [{"id": e, "tail": t, "head": h} for e, (t, h) in self.edges.items()],
            "faces": [
                {"id": f, "boundary": [[e, _sign_token(s)] for e, s in bd]}
                for f, bd in self.faces.items()
            ],
        }
        if self.metadata:
            data["metadata"] = dict(self.metadata)
        return data

    @classmethod
    def from_dict(cls, data: Mapping) -> "PolygonalComplex":
        edges = {}
        for rec in data.get("edges", []):
            if rec["id"] in edges:
                raise ValueError(f"duplicate edge id {rec['id']!r}")
            edges[str(rec["id"])] = (str(rec["tail"]), str(rec["head"]))
        faces = {}
        for rec in data.get("faces", []):
            if rec["id"] in faces:
                raise ValueError(f"duplicate face id {rec['id']!r}")
            faces[str(rec["id"])] = tuple((str(e), _parse_sign(s)) for e, s in rec["boundary"])
        return cls(
            tuple(str(v) for v in data.get("vertices", [])),
            edges,
            faces,
            dict(data.get("metadata", {})),
        )


def validate_complex(C: PolygonalComplex) -> list[str]:
    problems = []
    if len(set(C.vertices)) != len(C.vertices):
        problems.append("duplicate vertex ids")
    vset = set(C.vertices)
    for e, (tail, head) in C.edges.items():
        for end, v in (("tail", tail), ("head", head)):
            if v not in vset:
                problems.append(f"edge {e}: unknown {end} vertex {v!r}")
    for f, bd in C.faces.items():
        if len(bd) < 3:
            problems.append(f"face {f}: face length < 3")
        missing = [e for e, _ in bd if e not in C.edges]
        if missing:
            problems.append(f"face {f}: unknown edges {missing}")
            continue
        if any(s not in (1, -1) for _, s in bd):
            problems.append(f"face {f}: orientation must be +1 or -1")
            continue
        for j in range(len(bd)):
            if C.end(bd[j - 1]) != C.start(bd[j]):
                problems.append(f"face {f}: boundary breaks between positions {(j - 1) % len(bd)} and {j}")
    return problems


def _require_valid(C: PolygonalComplex) -> None:
    problems = validate_complex(C)
    if problems:
        raise ValueError("invalid complex: " + "; ".join(problems))


def euler_characteristic(C: PolygonalComplex) -> int:
    _require_valid(C)
    return len(C.vertices) - len(C.edges) + len(C.faces)


@dataclass(frozen=True)
class ProductComplex:
    factors: tuple[PolygonalComplex, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("a product needs at least one factor")

    __hash__ = None

    def vertices(self) -> list[tuple[str, ...]]:
        out: list[tuple[str, ...]] = [()]
        for F in self.factors:
            out = [p + (v,) for p in out for v in F.vertices]
        return out

    def to_dict(self) -> dict:
        return {"factors": [F.to_dict() for F in self.factors]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "ProductComplex":
        return cls(tuple(PolygonalComplex.from_dict(F) for F in data["factors"]))


def validate_product(P: ProductComplex) -> list[str]:
    return [f"factor {i}: {msg}" for i, F in enumerate(P.factors) for msg in validate_complex(F)]


class SimplicialComplex:
    """Finite abstract simplicial complex stored by its maximal simplices.

    Vertex labels are arbitrary hashables; their order in ``vertices`` fixes
    the orientation used for homology.
    """

    def __init__(self, vertices: Iterable[Hashable], simplices: Iterable[Iterable[Hashable]] = ()):
        verts = list(dict.fromkeys(vertices))
        sims = [frozenset(s) for s in simplices]
        known = set(verts)
        for s in sims:
            for x in s:
                if x not in known:
                    known.add(x)
                    verts.append(x)
        self.vertices = tuple(verts)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        faces = {frozenset([v]) for v in self.vertices}
        for s in sims:
            faces |= _all_subsets(s)
        self._faces = frozenset(faces | {frozenset()})
        self.facets = frozenset(
            f for f in self._faces
            if f or not self.vertices
            if not any(f | {x} in self._faces for x in self.vertices if x not in f)
        )

    @classmethod
    def _from_facets(cls, vertices, facets) -> "SimplicialComplex":
        # facets already maximal and covering every vertex
        obj = cls.__new__(cls)
        obj.vertices = tuple(vertices)
        obj.index = {v: i for i, v in enumerate(obj.vertices)}
        obj.facets = frozenset(facets)
        faces = {frozenset()}
        for s in obj.facets:
            faces |= _all_subsets(s)
        obj._faces = frozenset(faces)
        return obj

    def __repr__(self):
        return f"SimplicialComplex({len(self.vertices)} vertices, f={self.f_vector})"

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return set(self.vertices) == set(other.vertices) and self.facets == other.facets

    def __hash__(self):
        return hash((frozenset(self.vertices), self.facets))

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def __contains__(self, simplex) -> bool:
        return frozenset(simplex) in self._faces

    def faces(self) -> frozenset:
        """Every simplex (including the empty one) as a frozenset of labels."""
        return self._faces

    def simplices(self, k: int) -> list[tuple[int, ...]]:
        """k-simplices as sorted tuples of vertex indices, in a fixed order."""
        return self._by_dim.get(k, [])

    @cached_property
    def _by_dim(self) -> dict[int, list[tuple[int, ...]]]:
        out: dict[int, list[tuple[int, ...]]] = {}
        for f in self._faces:
            out.setdefault(len(f) - 1, []).append(tuple(sorted(self.index[x] for x in f)))
        for lst in out.values():
            lst.sort()
        return out

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.simplices(k)) for k in range(0, self.dimension + 1))

    def edges(self) -> list[tuple[Hashable, Hashable]]:
        return [(self.vertices[i], self.vertices[j]) for i, j in self.simplices(1)]

    def induced(self, keep: Iterable[Hashable]) -> "SimplicialComplex":
        keep_set = set(keep)
        verts = [v for v in self.vertices if v in keep_set]
        return SimplicialComplex(verts, (f & keep_set for f in self.facets))

    def relabel(self, mapping: Mapping) -> "SimplicialComplex":
        return SimplicialComplex._from_facets(
            [mapping[v] for v in self.vertices],
            [frozenset(mapping[x] for x in f) for f in self.facets],
        )

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        adj: dict = {v: set() for v in self.vertices}
        for a, b in self.edges():
            adj[a].add(b)
            adj[b].add(a)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for y in adj[stack.pop()]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.vertices)

    def validate(self) -> list[str]:
        problems = []
        for f in self._faces:
            for x in f:
                if f - {x} not in self._faces:
                    problems.append(f"not downward closed at {sorted(map(str, f))}")
        return problems


def _all_subsets(s: frozenset) -> set[frozenset]:
    items = list(s)
    return {frozenset(c) for r in range(len(items) + 1) for c in combinations(items, r)}


def homology(S: SimplicialComplex) -> HomologyProfile:
    return reduced_homology(S)


def join(S: SimplicialComplex, T: SimplicialComplex) -> SimplicialComplex:
    """Simplicial join; labels are tagged ``(0, x)`` / ``(1, y)`` if they collide."""
    if set(S.vertices) & set(T.vertices):
        S = S.relabel({v: (0, v) for v in S.vertices})
        T = T.relabel({v: (1, v) for v in T.vertices})
    return SimplicialComplex._from_facets(
        S.vertices + T.vertices,
        [s | t for s in S.facets for t in T.facets],
    )


@dataclass(frozen=True, eq=False)
class LinkComplex:
    """Link of a vertex.

    ``corner_provenance`` maps each link edge (a frozenset of one or two link
    vertices) to the tuple of face corners realizing it; a frozenset of size
    one is a loop and a tuple of length > 1 is a multi-edge.  Product links
    keep their join factors in ``factors``.
    """

    base: SimplicialComplex
    corner_provenance: Mapping[frozenset, tuple]
    polarity: Mapping[Hashable, str | None] | None = None
    factors: tuple["LinkComplex", ...] = ()

    @property
    def vertices(self) -> tuple:
        return self.base.vertices

    @property
    def edge_count(self) -> int:
        """Link edges counted with multiplicity."""
        if self.factors:
            return len(self.base.simplices(1))
        return sum(len(cs) for cs in self.corner_provenance.values())

    @property
    def is_simplicial(self) -> bool:
        return all(len(k) == 2 and len(cs) == 1 for k, cs in self.corner_provenance.items())

    def edge_instances(self) -> list[tuple[Hashable, Hashable, Any]]:
        """``(x, y, corner)`` for every link edge of a 2-complex link, loops as ``x == y``."""
        out = []
        for key, cs in self.corner_provenance.items():
            ends = sorted(key, key=self.base.index.__getitem__)
            x, y = (ends[0], ends[-1])
            for c in cs:
                out.append((x, y, c))
        return out

    def restrict(self, tag: str) -> "LinkComplex":
        if self.polarity is None:
            raise ValueError("link carries no Morse polarity")
        keep = {v for v, p in self.polarity.items() if p == tag}
        if self.factors:
            return join_links([F.restrict(tag) for F in self.factors])
        prov = {k: cs for k, cs in self.corner_provenance.items() if k <= keep}
        return LinkComplex(
            self.base.induced(keep), prov, {v: self.polarity[v] for v in keep}
        )

    def cells(self) -> list:
        """Cells of the link for the purpose of group actions.

        For a 2-complex link: vertices plus corners (so parallel link edges are
        distinct cells).  For a product link: every nonempty simplex.
        """
        if self.factors:
            return sorted(
                (f for f in self.base.faces() if f),
                key=lambda f: (len(f), sorted(self.base.index[x] for x in f)),
            )
        out: list = [("vertex", v) for v in self.vertices]
        out += [("corner", c) for _, _, c in self.edge_instances()]
        return out


def _polarity_of(end: tuple[str, str], weight: int) -> str:
    up = (end[1] == TAIL) == (weight > 0)
    return ASCENDING if up else DESCENDING


def vertex_link(C: PolygonalComplex, v: str, weighting=None) -> LinkComplex:
    """Link of ``v``: vertices are edge-ends at ``v``, edges are corners at ``v``.

    ``weighting`` (a MorseWeighting or an edge -> int mapping) sets polarity tags.
    """
    _require_valid(C)
    if v not in C.vertices:
        raise KeyError(f"unknown vertex {v!r}")
    ends = C.edge_ends_at(v)
    prov: dict[frozenset, list[Corner]] = {}
    for corner in C.corners():
        if C.corner_vertex(corner) != v:
            continue
        a, b = C.corner_ends(corner)
        prov.setdefault(frozenset((a, b)), []).append(corner)
    simplices = [k for k, cs in prov.items() if len(k) == 2]
    base = SimplicialComplex(ends, simplices)
    polarity = None
    if weighting is not None:
        weights = getattr(weighting, "weights", weighting)
        polarity = {end: _polarity_of(end, weights[end[0]]) for end in ends}
    link = LinkComplex(base, {k: tuple(cs) for k, cs in prov.items()}, polarity)
    assert link.edge_count == sum(1 for c in C.corners() if C.corner_vertex(c) == v)
    return link


def join_links(links: Sequence[LinkComplex]) -> LinkComplex:
    """Join of factor links with labels tagged by factor index."""
    if len(links) == 1 and not links[0].factors:
        return links[0]
    tagged = []
    prov: dict[frozenset, tuple] = {}
    polarity: dict | None = {}
    for i, L in enumerate(links):
        if not L.is_simplicial and not L.factors:
            raise ValueError(f"factor {i}: link has loops or multi-edges and cannot be joined simplicially")
        tagged.append(L.base.relabel({x: (i, x) for x in L.vertices}))
        for key, cs in L.corner_provenance.items():
            prov[frozenset((i, x) for x in key)] = tuple((i, c) for c in cs)
        if L.polarity is None:
            polarity = None
        elif polarity is not None:
            polarity.update({(i, x): p for x, p in L.polarity.items()})
    base = tagged[0]
    for T in tagged[1:]:
        base = join(base, T)
    return LinkComplex(base, prov, polarity, tuple(links))


def product_link(P: ProductComplex, v: Sequence[str], weightings=None) -> LinkComplex:
    if len(v) != len(P.factors):
        raise ValueError(f"vertex has {len(v)} coordinates, product has {len(P.factors)} factors")
    if weightings is None:
        weightings = [None] * len(P.factors)
    if len(weightings) != len(P.factors):
        raise ValueError("one weighting per factor required")
    links = [vertex_link(F, x, w) for F, x, w in zip(P.factors, v, weightings)]
    if len(links) == 1:
        return links[0]
    return join_links(links)


def link_vertex_name(label) -> str:
    """Human name: edge ``e``'s tail end is ``e-``, its head end ``e+``;
    product labels get a ``k:`` factor prefix."""
    if isinstance(label, tuple) and len(label) == 2 and isinstance(label[0], int):
        return f"{label[0]}:{link_vertex_name(label[1])}"
    if isinstance(label, tuple) and len(label) == 2 and label[1] in (TAIL, HEAD):
        return f"{label[0]}{'-' if label[1] == TAIL else '+'}"
    return str(label)


def link_to_dict(L: LinkComplex) -> dict:
    name = link_vertex_name
    data = {
        "vertices": [name(x) for x in L.vertices],
        "f_vector": list(L.base.f_vector),
        "facets": sorted(sorted(name(x) for x in f) for f in L.base.facets),
    }
    if not L.factors:
        data["corners"] = sorted(
            [name(x), name(y), c.face, c.index] for x, y, c in L.edge_instances()
        )
    if L.polarity is not None:
        data["polarity"] = {name(x): p for x, p in L.polarity.items()}
    return data
