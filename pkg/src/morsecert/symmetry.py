"""Cellular automorphisms and the model-situation certificate.

An automorphism maps each edge to a signed edge and each face to a face with
a rotation offset and a reflection flag.  With ``L`` the face length, boundary
position ``j`` of face ``f`` goes to position ``j + r`` of the image face
(same direction), or, when reflected, to position ``j + r`` of the image
face's inverse boundary word.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import reduce
from math import lcm
from typing import Any, Mapping, Union

from .complex_core import (
    HEAD,
    TAIL,
    Corner,
    LinkComplex,
    PolygonalComplex,
    ProductComplex,
    link_vertex_name,
    product_link,
    validate_complex,
    validate_product,
    vertex_link,
)
from .curvature import (
    EUCLIDEAN,
    CornerAngleAssignment,
    angle_text,
    CurvatureCertificate,
    certify_2complex,
    certify_product,
)
from .morse import (
    morse_image_index,
    spanning_tree_loops,
    validate_morse,
)

ORDER_CAP = 100_000


@dataclass(frozen=True)
class CellularAutomorphism:
    vertex_perm: Mapping[str, str]
    edge_map: Mapping[str, tuple[str, int]]
    face_map: Mapping[str, tuple[str, int, bool]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "vertex_perm", dict(self.vertex_perm))
        object.__setattr__(self, "edge_map", {e: (t, int(s)) for e, (t, s) in self.edge_map.items()})
        object.__setattr__(
            self, "face_map", {f: (g, int(r), bool(ref)) for f, (g, r, ref) in self.face_map.items()}
        )

    __hash__ = None

    @classmethod
    def identity(cls, C: PolygonalComplex) -> "CellularAutomorphism":
        return cls(
            {v: v for v in C.vertices},
            {e: (e, 1) for e in C.edges},
            {f: (f, 0, False) for f in C.faces},
        )

    def signed_edge(self, signed: tuple[str, int]) -> tuple[str, int]:
        e, s = signed
        t, o = self.edge_map[e]
        return t, s * o

    def edge_end(self, end: tuple[str, str]) -> tuple[str, str]:
        e, which = end
        t, o = self.edge_map[e]
        if o > 0:
            return t, which
        return t, HEAD if which == TAIL else TAIL

    def position_map(self, f: str, length: int) -> tuple[int, int]:
        """Boundary positions of ``f`` map by ``j -> eps * j + c (mod length)``; returns (eps, c)."""
        _, r, ref = self.face_map[f]
        if ref:
            return -1, (length - 1 - r) % length
        return 1, r % length

    def corner(self, C: PolygonalComplex, c: Corner) -> Corner:
        g, r, ref = self.face_map[c.face]
        L = len(C.faces[c.face])
        if ref:
            return Corner(g, (L - (c.index + r)) % L)
        return Corner(g, (c.index + r) % L)

    def is_identity(self) -> bool:
        return (
            all(a == b for a, b in self.vertex_perm.items())
            and all(e == t and s == 1 for e, (t, s) in self.edge_map.items())
            and all(f == g and r == 0 and not ref for f, (g, r, ref) in self.face_map.items())
        )

    def to_dict(self) -> dict:
        return {
            "vertex_perm": dict(self.vertex_perm),
            "edge_map": {e: [t, "+" if s > 0 else "-"] for e, (t, s) in self.edge_map.items()},
            "face_map": {f: {"face": g, "rotation": r, "reflect": ref} for f, (g, r, ref) in self.face_map.items()},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "CellularAutomorphism":
        def sign(tok):
            if tok in ("+", 1):
                return 1
            if tok in ("-", -1):
                return -1
            raise ValueError(f"bad orientation token {tok!r}")

        return cls(
            dict(data["vertex_perm"]),
            {e: (t, sign(s)) for e, (t, s) in data["edge_map"].items()},
            {f: (rec["face"], int(rec.get("rotation", 0)), bool(rec.get("reflect", False))) for f, rec in data.get("face_map", {}).items()},
        )


def _inverse_word(bd):
    return tuple((e, -s) for e, s in reversed(bd))


def validate_automorphism(C: PolygonalComplex, s: CellularAutomorphism) -> list[str]:
    problems = []
    if set(s.vertex_perm) != set(C.vertices) or set(s.vertex_perm.values()) != set(C.vertices):
        problems.append("vertex map is not a permutation of the vertices")
    if set(s.edge_map) != set(C.edges) or {t for t, _ in s.edge_map.values()} != set(C.edges):
        problems.append("edge map is not a bijection of the edges")
    if set(s.face_map) != set(C.faces) or {g for g, _, _ in s.face_map.values()} != set(C.faces):
        problems.append("face map is not a bijection of the faces")
    if problems:
        return problems
    for e, (tail, head) in C.edges.items():
        t, o = s.edge_map[e]
        ttail, thead = C.edges[t]
        want = (ttail, thead) if o > 0 else (thead, ttail)
        if (s.vertex_perm[tail], s.vertex_perm[head]) != want:
            problems.append(f"edge {e} -> {t}{'+' if o > 0 else '-'} does not preserve incidence")
    for f, bd in C.faces.items():
        g, r, ref = s.face_map[f]
        target = C.faces[g]
        if len(target) != len(bd):
            problems.append(f"face {f} -> {g}: lengths differ")
            continue
        if ref:
            target = _inverse_word(target)
        L = len(bd)
        for j in range(L):
            if s.signed_edge(bd[j]) != target[(j + r) % L]:
                problems.append(f"face {f} -> {g} (rotation {r}, reflect {ref}): boundary mismatch at position {j}")
                break
    return problems


def compose(s1: CellularAutomorphism, s2: CellularAutomorphism, C: PolygonalComplex) -> CellularAutomorphism:
    """``s1 o s2`` (apply ``s2`` first)."""
    vp = {x: s1.vertex_perm[y] for x, y in s2.vertex_perm.items()}
    em = {}
    for e, (t2, o2) in s2.edge_map.items():
        t1, o1 = s1.edge_map[t2]
        em[e] = (t1, o1 * o2)
    fm = {}
    for f, (g2, _, _) in s2.face_map.items():
        L = len(C.faces[f])
        e2, c2 = s2.position_map(f, L)
        g1 = s1.face_map[g2][0]
        e1, c1 = s1.position_map(g2, L)
        eps, c = e1 * e2, (e1 * c2 + c1) % L
        fm[f] = (g1, c, False) if eps > 0 else (g1, (L - 1 - c) % L, True)
    return CellularAutomorphism(vp, em, fm)


def power(s: CellularAutomorphism, k: int, C: PolygonalComplex) -> CellularAutomorphism:
    if k < 0:
        raise ValueError("negative powers are not supported")
    out = CellularAutomorphism.identity(C)
    for _ in range(k):
        out = compose(s, out, C)
    return out


def order_of(s: CellularAutomorphism, C: PolygonalComplex, cap: int = ORDER_CAP) -> int:
    cur = s
    for d in range(1, cap + 1):
        if cur.is_identity():
            return d
        cur = compose(s, cur, C)
    raise ValueError(f"order exceeds {cap}")


@dataclass(frozen=True)
class ProductAutomorphism:
    """Automorphism of a product acting factor by factor."""

    factors: tuple[CellularAutomorphism, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    __hash__ = None

    def to_dict(self) -> dict:
        return {"factors": [f.to_dict() for f in self.factors]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "ProductAutomorphism":
        return cls(tuple(CellularAutomorphism.from_dict(f) for f in data["factors"]))


AnyAutomorphism = Union[CellularAutomorphism, ProductAutomorphism]


def validate_product_automorphism(P: ProductComplex, s: ProductAutomorphism) -> list[str]:
    if len(s.factors) != len(P.factors):
        return [f"{len(s.factors)} factor maps for {len(P.factors)} factors"]
    return [f"factor {i}: {m}" for i, (F, sf) in enumerate(zip(P.factors, s.factors)) for m in validate_automorphism(F, sf)]


def product_order(s: ProductAutomorphism, P: ProductComplex) -> int:
    return reduce(lcm, (order_of(sf, F) for sf, F in zip(s.factors, P.factors)), 1)


def is_weight_equivariant(s: AnyAutomorphism, w) -> bool:
    if isinstance(s, ProductAutomorphism):
        return len(s.factors) == len(w.factors) and all(
            is_weight_equivariant(sf, wf) for sf, wf in zip(s.factors, w.factors)
        )
    for e, (t, o) in s.edge_map.items():
        if w.weights[t] != o * w.weights[e]:
            return False
    return True


def maps_vertex(s: AnyAutomorphism, v):
    if isinstance(s, ProductAutomorphism):
        return tuple(sf.vertex_perm[x] for sf, x in zip(s.factors, v))
    return s.vertex_perm[v]


def link_cell_action(C, s: AnyAutomorphism, v, link: LinkComplex | None = None) -> tuple[LinkComplex, dict]:
    """The permutation ``s`` induces on the cells of the link of a fixed vertex."""
    if maps_vertex(s, v) != v:
        raise ValueError(f"automorphism does not fix vertex {v!r}")
    if isinstance(C, ProductComplex) and len(C.factors) == 1:
        # a one-factor product link is the factor link itself
        return link_cell_action(C.factors[0], s.factors[0], v[0], link)
    if isinstance(C, ProductComplex):
        link = link or product_link(C, v)
        vmap = {(i, end): (i, s.factors[i].edge_end(end)) for (i, end) in link.vertices}
        action = {}
        for cell in link.cells():
            action[cell] = frozenset(vmap[x] for x in cell)
        return link, action
    link = link or vertex_link(C, v)
    action = {}
    for kind, x in link.cells():
        image = s.edge_end(x) if kind == "vertex" else s.corner(C, x)
        action[(kind, x)] = (kind, image)
    return link, action


def _cycle_lengths(action: dict) -> Counter:
    seen = set()
    sizes: Counter = Counter()
    for start in action:
        if start in seen:
            continue
        n = 0
        x = start
        while x not in seen:
            seen.add(x)
            x = action[x]
            n += 1
        sizes[n] += 1
    return sizes


def _power_action(action: dict, k: int) -> dict:
    out = {}
    for x in action:
        y = x
        for _ in range(k):
            y = action[y]
        out[x] = y
    return out


@dataclass(frozen=True)
class LinkActionReport:
    free: bool
    witness: Any
    orbit_sizes: Mapping[int, int]
    cell_count: int
    powers: Mapping[int, bool]  # k -> sigma^k free (informational)

    def witness_text(self) -> str | None:
        if self.witness is None:
            return None
        return _cell_name(self.witness)

    def to_dict(self) -> dict:
        return {
            "free": self.free,
            "witness": self.witness_text(),
            "cell_count": self.cell_count,
            "orbit_sizes": {str(k): v for k, v in sorted(self.orbit_sizes.items())},
            "powers_free": {str(k): v for k, v in sorted(self.powers.items())},
        }


def _cell_name(cell) -> str:
    if isinstance(cell, frozenset):
        return "{" + ", ".join(sorted(link_vertex_name(x) for x in cell)) + "}"
    kind, x = cell
    if kind == "vertex":
        return link_vertex_name(x)
    return f"corner {x.face}[{x.index}]"


def acts_freely_on_link(C, s: AnyAutomorphism, v, order: int | None = None) -> LinkActionReport:
    """No link cell (vertex, corner, or product simplex) is setwise invariant."""
    link, action = link_cell_action(C, s, v)
    fixed = [c for c, img in action.items() if img == c]
    if order is None:
        order = product_order(s, C) if isinstance(C, ProductComplex) else order_of(s, C)
    powers = {}
    for k in range(2, order):
        pk = _power_action(action, k)
        powers[k] = all(pk[c] != c for c in pk)
    return LinkActionReport(
        not fixed,
        fixed[0] if fixed else None,
        dict(_cycle_lengths(action)),
        len(action),
        powers,
    )


CHECK_NAMES = ("npc", "morse_valid", "epi_onto_Z", "equivariant", "fixes_v", "free_on_link", "finite_order")


def _fmt_signed(ref: str, s: int) -> str:
    return ref if s > 0 else f"{ref}^-1"


def choose_t(C, w) -> tuple[tuple[str, int], ...]:
    """A loop at the base vertex of Morse degree 1.

    Shortest spanning-tree loop of weight +-1, ties broken by edge ids
    (product loops are prefixed by their factor index); falls back to a
    Bezout combination of tree loops when no single loop has weight +-1.
    """
    if isinstance(C, ProductComplex):
        loops = []
        for i, (F, wf) in enumerate(zip(C.factors, w.factors)):
            for word, weight in spanning_tree_loops(F, wf):
                loops.append((tuple((f"{i}:{e}", s) for e, s in word), weight))
    else:
        loops = spanning_tree_loops(C, w)
    unit = [(len(word), [e for e, _ in word], word, weight) for word, weight in loops if abs(weight) == 1]
    if unit:
        _, _, word, weight = min(unit, key=lambda t: (t[0], t[1]))
        return word if weight == 1 else tuple((e, -s) for e, s in reversed(word))
    # Bezout: accumulate coefficients with gcd(...) == 1
    coeffs = []
    g = 0
    for word, weight in loops:
        if weight == 0:
            continue
        if g == 0:
            g, coeffs = weight, [(word, 1)]
            continue
        x, y, d = _ext_gcd(g, weight)
        coeffs = [(wd, c * x) for wd, c in coeffs] + [(word, y)]
        g = d
    if abs(g) != 1:
        raise ValueError("weighting is not onto Z; no loop of degree 1 exists")
    out: list[tuple[str, int]] = []
    for word, c in coeffs:
        c *= g  # normalize to +1
        piece = word if c > 0 else tuple((e, -s) for e, s in reversed(word))
        out.extend(list(piece) * abs(c))
    return tuple(out)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (1 if a >= 0 else -1), 0, abs(a)
    x, y, d = _ext_gcd(b, a % b)
    return y, x - (a // b) * y, d


def word_degree(C, w, word) -> int:
    total = 0
    for ref, s in word:
        if isinstance(C, ProductComplex):
            i, _, e = ref.partition(":")
            total += s * w.factors[int(i)].weights[e]
        else:
            total += s * w.weights[ref]
    return total


@dataclass
class ModelSituationCertificate:
    checks: dict
    details: dict
    order: int | None
    chosen_t: tuple | None
    conclusion: str | None
    witness_family: dict | None
    curvature: CurvatureCertificate | None = None
    link_action: LinkActionReport | None = None

    @property
    def success(self) -> bool:
        return self.conclusion is not None

    @property
    def failed_checks(self) -> list[str]:
        return [k for k in CHECK_NAMES if not self.checks.get(k)]

    def to_dict(self) -> dict:
        return {
            "checks": {k: self.checks[k] for k in CHECK_NAMES},
            "details": {k: self.details.get(k) for k in CHECK_NAMES},
            "failed_checks": self.failed_checks,
            "order": self.order,
            "chosen_t": None if self.chosen_t is None else " ".join(_fmt_signed(e, s) for e, s in self.chosen_t),
            "conclusion": self.conclusion,
            "witness_family": self.witness_family,
            "curvature": None if self.curvature is None else self.curvature.to_dict(),
            "link_action": None if self.link_action is None else self.link_action.to_dict(),
        }

    def render_text(self) -> str:
        lines = ["Model situation checks (mechanically verified):"]
        for k in CHECK_NAMES:
            mark = "PASS" if self.checks.get(k) else "FAIL"
            lines.append(f"  [{mark}] {k}: {self.details.get(k, '')}")
        if self.success:
            t = " ".join(_fmt_signed(e, s) for e, s in self.chosen_t)
            lines.append(f"Chosen t = {t} (Morse degree 1).")
            lines.append(
                "Proof sketch: the lift of sigma fixing x0 has x0 as its unique fixed point "
                "(CAT(0) cover + free action on the link); t^n sigma t^-n fixes only t^n x0, at "
                "height h(x0) + n, while every element of K x| <sigma> preserves height."
            )
            lines.append(f"Conclusion: {self.conclusion}")
        else:
            lines.append("Conclusion withheld: failed check(s) " + ", ".join(self.failed_checks))
        return "\n".join(lines)


def witness_family(order: int, count: int = 5) -> dict:
    return {
        "element": "t^n sigma t^-n",
        "order": order,
        "fixed_vertex": "t^n(x0)",
        "height": "f~(x0) + n",
        "samples": [{"n": n, "height_offset": n} for n in range(count)],
    }


def certify_model_situation(
    C,
    w,
    s: AnyAutomorphism,
    v,
    geometry: Any = EUCLIDEAN,
    angles: CornerAngleAssignment | None = None,
    witness_count: int = 5,
) -> ModelSituationCertificate:
    product = isinstance(C, ProductComplex)
    problems = validate_product(C) if product else validate_complex(C)
    if problems:
        raise ValueError("invalid complex: " + "; ".join(problems))
    problems = validate_product_automorphism(C, s) if product else validate_automorphism(C, s)
    if problems:
        raise ValueError("invalid automorphism: " + "; ".join(problems))

    checks: dict[str, bool] = {}
    details: dict[str, str] = {}

    try:
        if product:
            geoms = geometry if isinstance(geometry, (list, tuple)) else [geometry] * len(C.factors)
            curv = certify_product(C, [certify_2complex(F, None, g) for F, g in zip(C.factors, geoms)])
        else:
            curv = certify_2complex(C, angles, geometry)
        checks["npc"] = curv.nonpositively_curved
        details["npc"] = f"{curv.verdict} via {curv.rule}, min link cycle angle {angle_text(curv.min_cycle_angle)}"
    except ValueError as exc:
        curv = None
        checks["npc"] = False
        details["npc"] = str(exc)

    morse_problems = validate_morse(C, w)
    checks["morse_valid"] = not morse_problems
    details["morse_valid"] = "; ".join(morse_problems) or "nonzero degrees, zero-sum unimodal faces"

    try:
        index = morse_image_index(C, w)
        checks["epi_onto_Z"] = index == 1
        details["epi_onto_Z"] = f"image index {index}"
    except (ValueError, KeyError) as exc:
        checks["epi_onto_Z"] = False
        details["epi_onto_Z"] = str(exc)

    try:
        checks["equivariant"] = is_weight_equivariant(s, w)
    except KeyError as exc:
        checks["equivariant"] = False
        details["equivariant"] = f"missing weight {exc}"
    details.setdefault("equivariant", "w(s(e)) = +-w(e) matching orientation" if checks["equivariant"] else "weights not preserved")

    image = maps_vertex(s, v)
    checks["fixes_v"] = image == v
    details["fixes_v"] = f"s({v!r}) = {image!r}"

    order = product_order(s, C) if product else order_of(s, C)
    checks["finite_order"] = order >= 1
    details["finite_order"] = f"order {order}"

    action = None
    if checks["fixes_v"]:
        action = acts_freely_on_link(C, s, v, order)
        checks["free_on_link"] = action.free
        details["free_on_link"] = (
            f"{action.cell_count} link cells, orbit sizes {dict(sorted(action.orbit_sizes.items()))}"
            if action.free else f"invariant link cell {action.witness_text()}"
        )
    else:
        checks["free_on_link"] = False
        details["free_on_link"] = "not applicable: vertex not fixed"

    conclusion = None
    t = None
    family = None
    if all(checks[k] for k in CHECK_NAMES):
        t = choose_t(C, w)
        assert word_degree(C, w, t) == 1
        conclusion = f"K ⋊ ⟨σ⟩ contains infinitely many conjugacy classes of elements of order {order}"
        family = witness_family(order, witness_count)
    return ModelSituationCertificate(checks, details, order, t, conclusion, family, curv, action)
