"""Endomorphisms of F_k: the automorphisms phi_i, psi_i and the involution sigma,
their relations, abelianization, and the inner-automorphism test.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from . import words as W

Matrix = tuple  # tuple of row tuples


def gen_names(k: int) -> list[str]:
    return [f"x{i + 1}" for i in range(k)]


@dataclass(frozen=True)
class FreeGroupEndo:
    rank: int
    images: tuple[W.Word, ...]

    def __post_init__(self):
        images = tuple(tuple(w) for w in self.images)
        if len(images) != self.rank:
            raise ValueError(f"{len(images)} images for rank {self.rank}")
        for w in images:
            if not W.is_reduced(w) or any(abs(x) > self.rank for x in w):
                raise ValueError(f"image {w} is not a reduced word in x1..x{self.rank}")
        object.__setattr__(self, "images", images)

    def __call__(self, w: Sequence[int]) -> W.Word:
        return apply(self, w)

    def __str__(self) -> str:
        names = gen_names(self.rank)
        return "{" + ", ".join(f"{n} -> {W.format_word(w, names)}" for n, w in zip(names, self.images)) + "}"

    def to_dict(self) -> dict:
        names = gen_names(self.rank)
        return {
            "rank": self.rank,
            "images": {n: " ".join(W.format_word((x,), names) for x in w) or "1" for n, w in zip(names, self.images)},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "FreeGroupEndo":
        k = int(data["rank"])
        names = gen_names(k)
        return cls(k, tuple(W.parse_word(data["images"][n], names) for n in names))


def identity(k: int) -> FreeGroupEndo:
    return FreeGroupEndo(k, tuple((i + 1,) for i in range(k)))


def apply(e: FreeGroupEndo, w: Sequence[int]) -> W.Word:
    if any(abs(x) > e.rank for x in w):
        raise ValueError(f"word uses generators beyond rank {e.rank}")
    return W.substitute(w, e.images)


def compose(e1: FreeGroupEndo, e2: FreeGroupEndo) -> FreeGroupEndo:
    """``e1 o e2``: apply ``e2`` first."""
    if e1.rank != e2.rank:
        raise ValueError(f"rank mismatch: {e1.rank} vs {e2.rank}")
    return FreeGroupEndo(e1.rank, tuple(apply(e1, w) for w in e2.images))


def compose_all(endos: Sequence[FreeGroupEndo], k: int) -> FreeGroupEndo:
    out = identity(k)
    for e in endos:
        out = compose(out, e)
    return out


def endo_power(e: FreeGroupEndo, n: int) -> FreeGroupEndo:
    if n < 0:
        raise ValueError("use the inverse for negative powers")
    return compose_all([e] * n, e.rank)


def _check_index(i: int, k: int) -> None:
    if not 1 <= i <= k // 2:
        raise ValueError(f"index {i} out of range 1..{k // 2} for rank {k}")


def _pair_endo(i: int, k: int, odd_image, even_image) -> FreeGroupEndo:
    _check_index(i, k)
    images = [(j + 1,) for j in range(k)]
    images[2 * i - 2] = W.reduce_word(odd_image)
    images[2 * i - 1] = W.reduce_word(even_image)
    return FreeGroupEndo(k, tuple(images))


def phi(i: int, k: int) -> FreeGroupEndo:
    """x_(2i-1) -> x_(2i-1)^2 x_(2i),  x_(2i) -> x_(2i-1) x_(2i)."""
    a, b = 2 * i - 1, 2 * i
    return _pair_endo(i, k, (a, a, b), (a, b))


def psi(i: int, k: int) -> FreeGroupEndo:
    """x_(2i-1) -> x_(2i) x_(2i-1),  x_(2i) -> x_(2i)^2 x_(2i-1)."""
    a, b = 2 * i - 1, 2 * i
    return _pair_endo(i, k, (b, a), (b, b, a))


def phi_inverse(i: int, k: int) -> FreeGroupEndo:
    a, b = 2 * i - 1, 2 * i
    return _pair_endo(i, k, (a, -b), (b, -a, b))


def psi_inverse(i: int, k: int) -> FreeGroupEndo:
    a, b = 2 * i - 1, 2 * i
    return _pair_endo(i, k, (a, -b, a), (b, -a))


def sigma(k: int) -> FreeGroupEndo:
    """Swap x_(2i-1) <-> x_(2i); a last odd generator is fixed."""
    if k < 1:
        raise ValueError("rank must be positive")
    images = []
    for j in range(1, k + 1):
        if j % 2 == 1:
            images.append((j + 1,) if j + 1 <= k else (j,))
        else:
            images.append((j - 1,))
    return FreeGroupEndo(k, tuple(images))


def conjugation(x: Sequence[int], k: int) -> FreeGroupEndo:
    """The inner automorphism w -> x w x^-1."""
    x = W.reduce_word(x)
    return FreeGroupEndo(k, tuple(W.mul(x, (j + 1,), W.inverse(x)) for j in range(k)))


def abelianization(e: FreeGroupEndo) -> Matrix:
    """Exponent-sum matrix; column j is the image of x_j, so composition maps to matrix product."""
    cols = [W.exponent_vector(w, e.rank) for w in e.images]
    return tuple(tuple(cols[j][i] for j in range(e.rank)) for i in range(e.rank))


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    return tuple(
        tuple(sum(A[i][t] * B[t][j] for t in range(len(B))) for j in range(len(B[0])))
        for i in range(len(A))
    )


@dataclass(frozen=True)
class RelationCheck:
    name: str
    holds: bool
    detail: str = ""


@dataclass(frozen=True)
class RelationReport:
    rank: int
    checks: tuple[RelationCheck, ...]

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks)

    def failures(self) -> list[RelationCheck]:
        return [c for c in self.checks if not c.holds]

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "all_hold": self.all_hold,
            "checks": [{"relation": c.name, "holds": c.holds, "detail": c.detail} for c in self.checks],
        }


def _compare(name: str, lhs: FreeGroupEndo, rhs: FreeGroupEndo) -> RelationCheck:
    names = gen_names(lhs.rank)
    for j, (u, v) in enumerate(zip(lhs.images, rhs.images)):
        if u != v:
            return RelationCheck(
                name, False,
                f"{names[j]}: {W.format_word(u, names)} != {W.format_word(v, names)}",
            )
    return RelationCheck(name, True)


def verify_relations(k: int, phis: Mapping[int, FreeGroupEndo] | None = None, psis: Mapping[int, FreeGroupEndo] | None = None) -> RelationReport:
    """Exact checks of s phi_i s = psi_i, s^2 = 1, and the cross-index commutations.

    ``phis`` / ``psis`` override individual generators (to exercise failures).
    """
    if k < 2:
        raise ValueError("rank must be at least 2")
    m = k // 2
    P = {i: phi(i, k) for i in range(1, m + 1)}
    Q = {i: psi(i, k) for i in range(1, m + 1)}
    P.update(phis or {})
    Q.update(psis or {})
    s = sigma(k)
    checks = [_compare("sigma^2 = 1", compose(s, s), identity(k))]
    for i in range(1, m + 1):
        checks.append(_compare(f"sigma phi_{i} sigma = psi_{i}", compose(s, compose(P[i], s)), Q[i]))
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            if i == j:
                continue
            checks.append(_compare(f"phi_{i} phi_{j} = phi_{j} phi_{i}", compose(P[i], P[j]), compose(P[j], P[i])))
            checks.append(_compare(f"phi_{i} psi_{j} = psi_{j} phi_{i}", compose(P[i], Q[j]), compose(Q[j], P[i])))
    return RelationReport(k, tuple(checks))


# -- inverses by Nielsen reduction -------------------------------------------


def _total(U) -> int:
    return sum(len(u) for u in U)


def invert(e: FreeGroupEndo, max_steps: int = 100_000) -> FreeGroupEndo:
    """Inverse automorphism, found by length-reducing Nielsen moves.

    Keeps ``U = L o e o R`` with ``L`` inner and ``R`` a product of elementary
    Nielsen automorphisms until ``U`` is a signed permutation ``P``; then
    ``e^-1 = R o P^-1 o L``.  Raises ValueError if the reduction gets stuck,
    which in particular happens for every non-automorphism.
    """
    k = e.rank
    U = list(e.images)
    L = identity(k)
    R = identity(k)
    for _ in range(max_steps):
        if all(len(u) == 1 for u in U) and sorted(abs(u[0]) for u in U) == list(range(1, k + 1)):
            # U_j = x_(p(j))^(s_j); P^-1 sends x_(p(j)) to x_j^(s_j)
            inv_images = [None] * k
            for j, u in enumerate(U):
                g = u[0]
                inv_images[abs(g) - 1] = ((j + 1) if g > 0 else -(j + 1),)
            Pinv = FreeGroupEndo(k, tuple(inv_images))
            result = compose(R, compose(Pinv, L))
            if compose(e, result) != identity(k) or compose(result, e) != identity(k):
                raise ValueError("Nielsen reduction produced a non-inverse")
            return result
        if any(len(u) == 0 for u in U):
            raise ValueError("not an automorphism: a generator maps to the identity")
        first = U[0][0]
        if all(len(u) >= 2 and u[0] == first and u[-1] == -first for u in U):
            y = (first,)
            U = [W.mul(W.inverse(y), u, y) for u in U]
            L = compose(conjugation(W.inverse(y), k), L)
            continue
        best = None
        current = _total(U)
        for i in range(k):
            for j in range(k):
                if i == j:
                    continue
                for eps in (1, -1):
                    uj = U[j] if eps > 0 else W.inverse(U[j])
                    xj = (j + 1,) if eps > 0 else (-(j + 1),)
                    xi = (i + 1,)
                    options = (
                        (W.mul(U[i], uj), W.mul(xi, xj)),
                        (W.mul(uj, U[i]), W.mul(xj, xi)),
                        (W.mul(uj, U[i], W.inverse(uj)), W.mul(xj, xi, W.inverse(xj))),
                    )
                    for new, image in options:
                        gain = len(U[i]) - len(new)
                        if gain > 0 and (best is None or gain > best[0]):
                            best = (gain, i, new, image)
        if best is None:
            raise ValueError(f"not an automorphism (Nielsen reduction stuck at total length {current})")
        _, i, new, image = best
        move = list(identity(k).images)
        move[i] = image
        R = compose(R, FreeGroupEndo(k, tuple(move)))
        U[i] = new
    raise ValueError("Nielsen reduction did not finish")


# -- inner automorphisms -----------------------------------------------------


@dataclass(frozen=True)
class InnerTest:
    inner: bool
    conjugator: W.Word | None = None

    def to_dict(self, k: int) -> dict:
        if not self.inner:
            return {"inner": False}
        return {"inner": True, "conjugator": W.format_word(self.conjugator, gen_names(k))}


def is_inner(e: FreeGroupEndo, inverse: FreeGroupEndo | None = None) -> InnerTest:
    """Decide whether ``e`` is conjugation by some ``x``; return ``x``.

    From ``e(x1) = x x1 x^-1``, ``x`` is the conjugating prefix of ``e(x1)``
    times a power of ``x1`` (the centralizer of ``x1``); the finitely many
    powers compatible with ``|e(x2)|`` are tried against every generator.
    """
    k = e.rank
    if inverse is None:
        inverse = invert(e)
    elif compose(e, inverse) != identity(k) or compose(inverse, e) != identity(k):
        raise ValueError("supplied inverse does not invert the endomorphism")
    if k == 1:
        return InnerTest(True, ()) if e.images[0] == (1,) else InnerTest(False)
    prefix, core = W.cyclic_core(e.images[0])
    if core != (1,):
        return InnerTest(False)
    bound = len(e.images[1]) + 1
    for j in sorted(range(-bound, bound + 1), key=lambda j: (abs(j), j)):
        x = W.mul(prefix, W.power((1,), j))
        if all(e.images[i] == W.mul(x, (i + 1,), W.inverse(x)) for i in range(k)):
            return InnerTest(True, x)
    return InnerTest(False)


@dataclass(frozen=True)
class HGenerator:
    name: str
    endo: FreeGroupEndo
    inverse: FreeGroupEndo


def h_generators(k: int, N: int) -> list[HGenerator]:
    """phi_i^N, psi_i^N (and their inverses) and sigma, each with its inverse."""
    gens = []
    for i in range(1, k // 2 + 1):
        f, fi = endo_power(phi(i, k), N), endo_power(phi_inverse(i, k), N)
        g, gi = endo_power(psi(i, k), N), endo_power(psi_inverse(i, k), N)
        gens += [
            HGenerator(f"phi{i}^{N}", f, fi),
            HGenerator(f"phi{i}^-{N}", fi, f),
            HGenerator(f"psi{i}^{N}", g, gi),
            HGenerator(f"psi{i}^-{N}", gi, g),
        ]
    s = sigma(k)
    gens.append(HGenerator("sigma", s, s))
    return gens


def h_product(gens: Sequence[HGenerator], k: int) -> tuple[FreeGroupEndo, FreeGroupEndo]:
    """The composite of ``gens`` (leftmost applied last) together with its inverse."""
    e = compose_all([g.endo for g in gens], k)
    inv = compose_all([g.inverse for g in reversed(gens)], k)
    return e, inv
