import random

import pytest
from hypothesis import given, strategies as st

from morsecert import words as W
from morsecert.free_aut import (
    FreeGroupEndo,
    abelianization,
    apply,
    compose,
    conjugation,
    h_generators,
    h_product,
    identity,
    invert,
    is_inner,
    mat_mul,
    phi,
    phi_inverse,
    psi,
    psi_inverse,
    sigma,
    verify_relations,
)

from conftest import free_words

X = ("x1", "x2", "x3", "x4", "x5", "x6")


def word(text, k=2):
    return W.parse_word(text, X[:k])


@st.composite
def endos(draw, k=3, max_len=4):
    return FreeGroupEndo(k, tuple(draw(free_words(k, max_len)) for _ in range(k)))


def random_word(rnd, k, max_len):
    return W.reduce_word(rnd.choice([i, -i]) for i in [rnd.randint(1, k) for _ in range(rnd.randint(0, max_len))])


def brute_inner(e, max_len):
    """Every x of length <= max_len with e = conjugation by x."""
    return [
        x for n in range(max_len + 1) for x in W.reduced_words(e.rank, n)
        if conjugation(x, e.rank) == e
    ]


class TestApply:
    def test_phi(self):
        assert apply(phi(1, 2), (1,)) == word("x1^2 x2")

    def test_sigma(self):
        assert apply(sigma(2), (1,)) == (2,)

    @given(free_words(3))
    def test_identity(self, w):
        assert apply(identity(3), w) == w

    def test_functoriality_thousand_triples(self):
        rnd = random.Random(3)
        for _ in range(1000):
            e1 = FreeGroupEndo(3, tuple(random_word(rnd, 3, 4) for _ in range(3)))
            e2 = FreeGroupEndo(3, tuple(random_word(rnd, 3, 4) for _ in range(3)))
            w = random_word(rnd, 3, 6)
            assert apply(compose(e1, e2), w) == apply(e1, apply(e2, w))

    @given(endos(), endos(), endos())
    def test_compose_associative(self, a, b, c):
        assert compose(compose(a, b), c) == compose(a, compose(b, c))

    def test_serialization(self):
        d = phi(1, 2).to_dict()
        assert d == {"rank": 2, "images": {"x1": "x1 x1 x2", "x2": "x1 x2"}}
        assert FreeGroupEndo.from_dict(d) == phi(1, 2)


class TestRelations:
    @pytest.mark.parametrize("k", [2, 4, 6])
    def test_hold(self, k):
        rep = verify_relations(k)
        assert rep.all_hold, rep.failures()

    def test_inverses(self):
        for k in (2, 4):
            for i in range(1, k // 2 + 1):
                assert compose(phi(i, k), phi_inverse(i, k)) == identity(k)
                assert compose(psi(i, k), psi_inverse(i, k)) == identity(k)

    def test_perturbed_psi(self):
        bad = FreeGroupEndo(2, (word("x2 x1"), word("x2 x1")))
        rep = verify_relations(2, psis={1: bad})
        assert not rep.all_hold
        [fail] = rep.failures()
        assert fail.name == "sigma phi_1 sigma = psi_1"
        assert fail.detail.startswith("x2:")


class TestAbelianization:
    def test_matrices(self):
        assert abelianization(phi(1, 2)) == ((2, 1), (1, 1))
        assert abelianization(psi(1, 2)) == ((1, 1), (1, 2))
        assert abelianization(identity(3)) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    @given(endos(), endos())
    def test_homomorphism(self, a, b):
        assert abelianization(compose(a, b)) == mat_mul(abelianization(a), abelianization(b))


class TestInvert:
    def test_random_products(self):
        rnd = random.Random(5)
        gens = h_generators(4, 1)
        for _ in range(30):
            chosen = [rnd.choice(gens) for _ in range(rnd.randint(1, 5))]
            e, inv = h_product(chosen, 4)
            assert invert(e) == inv

    def test_not_automorphism(self):
        with pytest.raises(ValueError):
            invert(FreeGroupEndo(2, (word("x1^2"), word("x2"))))


class TestInner:
    def test_constructed(self):
        res = is_inner(conjugation(word("x1 x2"), 2))
        assert res.inner and res.conjugator == word("x1 x2")

    def test_identity(self):
        res = is_inner(identity(4))
        assert res.inner and res.conjugator == ()

    @pytest.mark.parametrize("e", [phi(1, 2), psi(1, 2), sigma(2), phi(2, 4)])
    def test_not_inner(self, e):
        assert not is_inner(e).inner

    def test_hundred_planted(self):
        rnd = random.Random(1)
        for _ in range(100):
            k = rnd.randint(2, 6)
            x = random_word(rnd, k, 6)
            res = is_inner(conjugation(x, k))
            assert res.inner and res.conjugator == x
            assert abelianization(conjugation(res.conjugator, k)) == abelianization(identity(k))

    @given(st.lists(st.sampled_from(range(9)), min_size=1, max_size=3))
    def test_matches_brute_force(self, idx):
        gens = h_generators(4, 1)
        e, inv = h_product([gens[i] for i in idx], 4)
        res = is_inner(e, inv)
        brute = brute_inner(e, 2)
        if brute:
            assert res.inner and res.conjugator == brute[0]
        elif res.inner:
            assert len(res.conjugator) > 2

    def test_h_products_nontrivial_are_outer(self):
        rnd = random.Random(2)
        for k, N in ((4, 1), (6, 2)):
            gens = h_generators(k, N)
            for _ in range(40):
                e, inv = h_product([rnd.choice(gens) for _ in range(rnd.randint(1, 6))], k)
                res = is_inner(e, inv)
                if res.inner:
                    assert e == identity(k)

    def test_bad_inverse(self):
        with pytest.raises(ValueError):
            is_inner(phi(1, 2), identity(2))
