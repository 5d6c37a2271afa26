"""Arithmetic in (F2)^n x| <sigma>, sigma swapping a <-> b in every coordinate.

Elements are pairs ``(u, flip)`` with ``u`` a tuple of reduced words over
``{a, b}`` (letters 1 and 2) and multiplication

    (u, e) (v, d) = (u * sigma^e(v), e xor d).

For an involution ``(w, True)`` the word ``w`` factors uniquely as
``u * sigma(u)^-1``; the Morse degree of ``u`` is a conjugacy invariant of
the kernel ``K x| <sigma>`` that shifts by ``deg(c)`` under conjugation by
any ``c``.  That is the algebraic form of the height argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Iterator, Sequence

from . import words as W

NAMES = ("a", "b")
MAX_ORACLE_FACTORS = 2
MAX_ORACLE_LENGTH = 8


def swap(w: Sequence[int]) -> W.Word:
    """The letter swap a <-> b."""
    return tuple((3 - abs(x)) if x > 0 else -(3 - abs(x)) for x in w)


@dataclass(frozen=True)
class DoubledFreeElement:
    coords: tuple[W.Word, ...]
    flip: bool = False

    def __post_init__(self):
        coords = tuple(tuple(c) for c in self.coords)
        for c in coords:
            if not W.is_reduced(c) or any(abs(x) not in (1, 2) for x in c):
                raise ValueError(f"coordinate {c} is not a reduced word over a, b")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "flip", bool(self.flip))

    @property
    def n(self) -> int:
        return len(self.coords)

    @classmethod
    def identity(cls, n: int) -> "DoubledFreeElement":
        return cls(((),) * n, False)

    @classmethod
    def sigma(cls, n: int) -> "DoubledFreeElement":
        return cls(((),) * n, True)

    @classmethod
    def from_words(cls, texts: Sequence[str], flip: bool = False) -> "DoubledFreeElement":
        return cls(tuple(W.parse_word(t, NAMES) for t in texts), flip)

    def __mul__(self, other: "DoubledFreeElement") -> "DoubledFreeElement":
        return multiply(self, other)

    def __pow__(self, k: int) -> "DoubledFreeElement":
        base = self if k >= 0 else invert(self)
        out = DoubledFreeElement.identity(self.n)
        for _ in range(abs(k)):
            out = out * base
        return out

    @property
    def length(self) -> int:
        return sum(len(c) for c in self.coords)

    def __str__(self) -> str:
        body = ", ".join(W.format_word(c, NAMES) for c in self.coords)
        return f"({body}; {'flip' if self.flip else 'no flip'})"

    def to_dict(self) -> dict:
        return {"coords": [W.format_word(c, NAMES) for c in self.coords], "flip": self.flip}

    @classmethod
    def from_dict(cls, data: dict) -> "DoubledFreeElement":
        return cls.from_words(data["coords"], data.get("flip", False))


def multiply(g: DoubledFreeElement, h: DoubledFreeElement) -> DoubledFreeElement:
    if g.n != h.n:
        raise ValueError(f"arity mismatch: {g.n} vs {h.n}")
    coords = tuple(
        W.mul(u, swap(v) if g.flip else v) for u, v in zip(g.coords, h.coords)
    )
    return DoubledFreeElement(coords, g.flip != h.flip)


def invert(g: DoubledFreeElement) -> DoubledFreeElement:
    coords = tuple(W.inverse(swap(u) if g.flip else u) for u in g.coords)
    return DoubledFreeElement(coords, g.flip)


def equal(g: DoubledFreeElement, h: DoubledFreeElement) -> bool:
    return g == h


def conjugate(c: DoubledFreeElement, g: DoubledFreeElement) -> DoubledFreeElement:
    """``c g c^-1``."""
    return multiply(multiply(c, g), invert(c))


def morse_degree(g: DoubledFreeElement) -> int:
    return sum(W.exponent_sum(c) for c in g.coords)


def witness(n: int, t: DoubledFreeElement) -> DoubledFreeElement:
    """``t^n sigma t^-n``."""
    if t.flip or morse_degree(t) != 1:
        raise ValueError("t must have Morse degree 1 and no flip")
    tn = t ** n
    return multiply(multiply(tn, DoubledFreeElement.sigma(t.n)), invert(tn))


def twisted_sqrt_word(w: Sequence[int]) -> W.Word | None:
    """The unique ``u`` with ``w = u * swap(u)^-1``, or None.

    The product ``u * swap(u)^-1`` never cancels at the junction (the swap
    moves every letter), so ``u`` is a prefix of ``w``; every prefix is tried.
    """
    w = tuple(w)
    if swap(w) != W.inverse(w):
        return None
    for k in range(len(w) + 1):
        p = w[:k]
        if W.mul(p, W.inverse(swap(p))) == w:
            return p
    return None


def twisted_sqrt(coords: Sequence[Sequence[int]]) -> tuple[W.Word, ...] | None:
    out = []
    for w in coords:
        u = twisted_sqrt_word(w)
        if u is None:
            return None
        out.append(u)
    return tuple(out)


def iota(g: DoubledFreeElement) -> int:
    """Morse degree of the twisted square root of an involution's coordinates."""
    if not g.flip:
        raise ValueError("iota is defined only for elements with flip")
    u = twisted_sqrt(g.coords)
    if u is None:
        raise ValueError(f"{g} has no twisted square root (it is not an involution)")
    return sum(W.exponent_sum(x) for x in u)


def element_order(g: DoubledFreeElement, cutoff: int = 64) -> int | None:
    """Least ``d <= cutoff`` with ``g^d = 1``; None stands for 'infinite up to the cutoff'."""
    one = DoubledFreeElement.identity(g.n)
    cur = g
    for d in range(1, cutoff + 1):
        if cur == one:
            return d
        cur = multiply(cur, g)
    return None


def _words_by_length(max_len: int) -> list[list[W.Word]]:
    return [list(W.reduced_words(2, k)) for k in range(max_len + 1)]


def enumerate_elements(n: int, max_len: int) -> Iterator[DoubledFreeElement]:
    """Every element with total letter length <= max_len.

    Order: total length, then coordinate lengths, then words in the fixed
    order of :func:`words.reduced_words`, then flip False before True.
    """
    pools = _words_by_length(max_len)
    for total in range(max_len + 1):
        for split in _compositions(total, n):
            for coords in cartesian(*(pools[k] for k in split)):
                yield DoubledFreeElement(coords, False)
                yield DoubledFreeElement(coords, True)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def count_elements(n: int, max_len: int) -> int:
    per = [W.count_reduced_words(2, k) for k in range(max_len + 1)]
    total = 0
    for s in range(max_len + 1):
        for split in _compositions(s, n):
            prod = 1
            for k in split:
                prod *= per[k]
            total += prod
    return 2 * total


@dataclass(frozen=True)
class OracleVerdict:
    conjugate: bool
    witness: DoubledFreeElement | None
    bound: int
    restrict_to_kernel: bool
    examined: int

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "restrict_to_kernel": self.restrict_to_kernel,
            "examined": self.examined,
            "result": self.witness.to_dict() if self.conjugate else "exhausted",
        }


def conjugacy_oracle(
    g: DoubledFreeElement,
    h: DoubledFreeElement,
    max_len: int,
    restrict_to_kernel: bool = True,
) -> OracleVerdict:
    """Exhaustive search for ``c`` with ``c g c^-1 = h`` among all ``c`` of
    total length <= max_len (Morse degree 0 only, if restricted)."""
    if g.n != h.n:
        raise ValueError("arity mismatch")
    if g.n > MAX_ORACLE_FACTORS or max_len > MAX_ORACLE_LENGTH or max_len < 0:
        raise ValueError(
            f"oracle bounds exceeded: need n <= {MAX_ORACLE_FACTORS} and 0 <= L <= {MAX_ORACLE_LENGTH}"
        )
    examined = 0
    for c in enumerate_elements(g.n, max_len):
        if restrict_to_kernel and morse_degree(c) != 0:
            continue
        examined += 1
        if multiply(c, g) == multiply(h, c):
            return OracleVerdict(True, c, max_len, restrict_to_kernel, examined)
    return OracleVerdict(False, None, max_len, restrict_to_kernel, examined)


def default_t(n: int) -> DoubledFreeElement:
    """``t = (a, 1, ..., 1)``."""
    return DoubledFreeElement(((1,),) + ((),) * (n - 1), False)
