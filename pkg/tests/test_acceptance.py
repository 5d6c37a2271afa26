"""Acceptance criteria 1-9, exact arithmetic throughout.

Run under pytest (one PASS/FAIL line per criterion in the terminal summary)
or directly: ``python3 tests/test_acceptance.py``.
"""

import random
import sys
import time
from fractions import Fraction

import pytest

from morsecert import group_models as GM
from morsecert import words as W
from morsecert.builders import HexagonFaceFamily, hexagon, hexagon_product, raag, shift_automorphism
from morsecert.complex_core import homology, vertex_link
from morsecert.curvature import CAT_MINUS_ONE, NPC, CornerAngleAssignment, min_link_cycle_angle
from morsecert.free_aut import (
    abelianization,
    conjugation,
    h_generators,
    h_product,
    identity,
    is_inner,
    phi,
    psi,
    sigma,
    verify_relations,
)
from morsecert.morse import MorseWeighting, ProductWeighting, ascending_link, descending_link, finiteness_report
from morsecert.pingpong import PHI1_ABEL, PSI1_ABEL, freeness_chain, pingpong_search, replay
from morsecert.symmetry import CellularAutomorphism, certify_model_situation

CRITERIA = {}


def criterion(n, title, budget):
    def deco(fn):
        CRITERIA[n] = (title, budget, fn)
        return fn
    return deco


def certify(ex):
    return certify_model_situation(ex.complex, ex.weighting, ex.automorphism, ex.vertex, ex.geometry)


def links(ex):
    return (
        ascending_link(ex.complex, ex.weighting, ex.vertex),
        descending_link(ex.complex, ex.weighting, ex.vertex),
    )


def is_octagon(L):
    S = L.base
    degree = {v: 0 for v in S.vertices}
    for a, b in S.edges():
        degree[a] += 1
        degree[b] += 1
    return S.f_vector == (8, 8) and S.is_connected() and set(degree.values()) == {2}


@criterion(1, "raag(n), n = 1..4: order 2, links are joins of n two-point sets, F_(n-1) but not F_n", 5)
def check_raag():
    for n in range(1, 5):
        ex = raag(n)
        cert = certify(ex)
        assert cert.success and cert.order == 2, (n, cert.failed_checks)
        for L in links(ex):
            S = L.base
            factor_of = {x: x[0] if n > 1 else 0 for x in S.vertices}
            assert len(S.vertices) == 2 * n
            assert len(S.facets) == 2 ** n
            assert all(sorted(factor_of[x] for x in f) == list(range(n)) for f in S.facets)
            h = homology(S)
            assert h.group(n - 1) == (1, ())
            assert all(h.is_zero(k) for k in range(-1, n - 1))
        rep = finiteness_report(*links(ex))
        assert rep.statement == f"type F_{n - 1} but not F_{n}"


@criterion(2, "hexagon: 16/48 link, girth angle 2pi, CAT(-1), octagon links, order 8 free", 5)
def check_hexagon():
    ex = hexagon()
    C = ex.complex
    L = vertex_link(C, "v")
    assert (len(L.vertices), L.edge_count) == (16, 48)
    assert min_link_cycle_angle(L, CornerAngleAssignment.right_angled(C)) == Fraction(2)
    cert = certify(ex)
    assert cert.curvature.verdict == CAT_MINUS_ONE
    for half in links(ex):
        assert is_octagon(half)
        h = homology(half.base)
        assert h.group(1) == (1, ()) and h.is_zero(0)
    assert cert.order == 8
    assert cert.link_action.free and cert.link_action.witness is None
    assert cert.conclusion == "K ⋊ ⟨σ⟩ contains infinitely many conjugacy classes of elements of order 8"


@criterion(3, "hexagon-product: 3-sphere links, F_3 but not F_4, NPC, free diagonal shift", 30)
def check_hexagon_product():
    ex = hexagon_product()
    for L in links(ex):
        assert L.base.f_vector == (16, 80, 128, 64)
        h = homology(L.base)
        assert h.group(3) == (1, ())
        assert all(h.is_zero(k) for k in (0, 1, 2))
    assert finiteness_report(*links(ex)).statement == "type F_3 but not F_4"
    cert = certify(ex)
    assert (cert.curvature.verdict, cert.curvature.rule) == (NPC, "product-of-NPC")
    assert cert.link_action.free
    assert set(cert.link_action.orbit_sizes) == {8}
    assert cert.success and cert.order == 8


@criterion(4, "witness invariants 0..5 distinct; no kernel conjugator up to length 6; planted ones found", 60)
def check_oracle():
    budget = 10 ** 6
    for n in (1, 2):
        t = GM.default_t(n)
        ws = [GM.witness(j, t) for j in range(6)]
        assert [GM.iota(w) for w in ws] == list(range(6))
        assert GM.count_elements(n, 6) <= budget
        for j in range(4):
            for k in range(4):
                if j != k:
                    v = GM.conjugacy_oracle(ws[j], ws[k], 6)
                    assert not v.conjugate and v.examined <= budget, (n, j, k)
        rnd = random.Random(n)
        kernel = [c for c in GM.enumerate_elements(n, 3) if GM.morse_degree(c) == 0]
        for c in rnd.sample(kernel, 8):
            g = ws[rnd.randrange(6)]
            h = GM.conjugate(c, g)
            v = GM.conjugacy_oracle(g, h, 6)
            assert v.conjugate and GM.conjugate(v.witness, g) == h
            assert v.witness.length <= c.length


@criterion(5, "iota(c g c^-1) = iota(g) + deg(c) on 2000 random samples", 60)
def check_iota_shift():
    rnd = random.Random(5)

    def word():
        return W.reduce_word(rnd.choice((1, -1, 2, -2)) for _ in range(rnd.randint(0, 6)))

    for trial in range(2000):
        u = (word(), word())
        g = GM.DoubledFreeElement(tuple(W.mul(x, W.inverse(GM.swap(x))) for x in u), True)
        c = GM.DoubledFreeElement((word(), word()), trial % 2 == 1)
        assert GM.iota(GM.conjugate(c, g)) == GM.iota(g) + GM.morse_degree(c)


@criterion(6, "automorphism relations for k = 2, 4, 6 and the abelianization matrices", 60)
def check_relations():
    for k in (2, 4, 6):
        rep = verify_relations(k)
        assert rep.all_hold, rep.failures()
    assert abelianization(phi(1, 2)) == ((2, 1), (1, 1))
    assert abelianization(psi(1, 2)) == ((1, 1), (1, 2))


@criterion(7, "ping-pong certificate with N <= 16 replays; freeness chain assembled", 60)
def check_pingpong():
    cert = pingpong_search(PHI1_ABEL, PSI1_ABEL, 16)
    assert cert is not None, "no ping-pong certificate with N <= 16"
    assert cert.N <= 16 and replay(cert)
    chain = freeness_chain(cert, 4)
    assert any("Hopfian" in line for line in chain)


@criterion(8, "inner test: 100 planted conjugators recovered; phi1, psi1, sigma and 50 H-products outer", 60)
def check_inner():
    rnd = random.Random(8)
    for _ in range(100):
        k = rnd.randint(2, 6)
        x = W.reduce_word(rnd.choice((i, -i)) for i in (rnd.randint(1, k) for _ in range(rnd.randint(0, 6))))
        res = is_inner(conjugation(x, k))
        assert res.inner and res.conjugator == x
    for e in (phi(1, 2), psi(1, 2), sigma(2)):
        assert not is_inner(e).inner
    k, N = 4, 2
    gens = h_generators(k, N)
    tested = 0
    while tested < 50:
        e, inv = h_product([rnd.choice(gens) for _ in range(rnd.randint(1, 4))], k)
        if e == identity(k):
            continue
        assert not is_inner(e, inv).inner, e
        tested += 1


@criterion(9, "negative controls: each broken hypothesis withholds the conclusion and names itself", 30)
def check_negative_controls():
    ex = hexagon()
    C = ex.complex
    # zero-sum broken: flip one letter of the face word; exponent sum becomes 2
    fam = HexagonFaceFamily(((0, 1), (3, 1), (0, 1), (1, 1), (0, -1), (1, -1)))
    D = fam.complex()
    controls = {
        "morse_valid": (D, MorseWeighting.constant(D), shift_automorphism(fam), "v", "hyperbolic"),
        "free_on_link": (C, ex.weighting, CellularAutomorphism.identity(C), "v", "hyperbolic"),
        "epi_onto_Z": (C, MorseWeighting.constant(C, 2), ex.automorphism, "v", "hyperbolic"),
    }
    r = raag(2)
    first, second = r.weighting.factors
    uneven = ProductWeighting((MorseWeighting({"a1": 1, "b1": 2}), second))
    assert first.weights == {"a1": 1, "b1": 1}
    controls["equivariant"] = (r.complex, uneven, r.automorphism, r.vertex, r.geometry)
    for broken, args in controls.items():
        cert = certify_model_situation(*args)
        assert not cert.success and cert.conclusion is None
        assert cert.failed_checks == [broken], (broken, cert.failed_checks)


@pytest.mark.parametrize("n", sorted(CRITERIA), ids=[f"criterion_{n}" for n in sorted(CRITERIA)])
def test_acceptance(n, record_property):
    title, budget, fn = CRITERIA[n]
    record_property("criterion", n)
    record_property("title", title)
    start = time.perf_counter()
    fn()
    elapsed = time.perf_counter() - start
    record_property("seconds", round(elapsed, 2))
    assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget}s"


def main() -> int:
    failures = 0
    for n in sorted(CRITERIA):
        title, budget, fn = CRITERIA[n]
        start = time.perf_counter()
        try:
            fn()
            elapsed = time.perf_counter() - start
            ok = elapsed < budget
            note = f"{elapsed:.2f}s" if ok else f"{elapsed:.2f}s exceeds {budget}s"
        except AssertionError as exc:
            ok, note = False, f"assertion failed: {exc}"
        failures += not ok
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}  ({note})")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
