"""Reduced words in a free group.

A word is a tuple of nonzero ints: ``i`` is the i-th generator, ``-i`` its
inverse.  Every function returns freely reduced words.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

Word = tuple


def reduce_word(letters: Iterable[int]) -> Word:
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(w: Sequence[int]) -> bool:
    return all(x != 0 for x in w) and all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def mul(*words: Sequence[int]) -> Word:
    out: list[int] = []
    for w in words:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def power(w: Sequence[int], n: int) -> Word:
    base = tuple(w) if n >= 0 else inverse(w)
    return mul(*([base] * abs(n)))


def exponent_sum(w: Sequence[int]) -> int:
    return sum(1 if x > 0 else -1 for x in w)


def exponent_vector(w: Sequence[int], rank: int) -> list[int]:
    vec = [0] * rank
    for x in w:
        vec[abs(x) - 1] += 1 if x > 0 else -1
    return vec


def substitute(w: Sequence[int], images: Sequence[Sequence[int]]) -> Word:
    """Image of ``w`` under the endomorphism sending generator i to images[i-1]."""
    inv = {}
    parts = []
    for x in w:
        if x > 0:
            parts.append(images[x - 1])
        else:
            if x not in inv:
                inv[x] = inverse(images[-x - 1])
            parts.append(inv[x])
    return mul(*parts)


def cyclic_core(w: Sequence[int]) -> tuple[Word, Word]:
    """Split a reduced word as ``p * c * p^-1`` with ``c`` cyclically reduced."""
    w = tuple(w)
    k = 0
    while 2 * k + 1 < len(w) and w[k] == -w[len(w) - 1 - k]:
        k += 1
    return w[:k], w[k:len(w) - k]


def reduced_words(alphabet: int, length: int) -> Iterator[Word]:
    """All reduced words of exactly ``length`` letters, in a fixed order."""
    letters = [x for i in range(1, alphabet + 1) for x in (i, -i)]

    def extend(prefix: tuple):
        if len(prefix) == length:
            yield prefix
            return
        for x in letters:
            if prefix and prefix[-1] == -x:
                continue
            yield from extend(prefix + (x,))

    yield from extend(())


def count_reduced_words(alphabet: int, length: int) -> int:
    if length == 0:
        return 1
    return 2 * alphabet * (2 * alphabet - 1) ** (length - 1)


def format_word(w: Sequence[int], names: Sequence[str]) -> str:
    """Render with exponent syllables, e.g. ``a^3 b^-3``; the empty word is ``1``."""
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = names[abs(w[i]) - 1]
        exp = (j - i) * (1 if w[i] > 0 else -1)
        parts.append(name if exp == 1 else f"{name}^{exp}")
        i = j
    return " ".join(parts)


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Inverse of :func:`format_word`; tokens are whitespace separated."""
    index = {name: i + 1 for i, name in enumerate(names)}
    letters: list[int] = []
    text = text.strip()
    if text in ("", "1"):
        return ()
    for tok in text.split():
        if "^" in tok:
            name, _, exp_s = tok.partition("^")
            exp = int(exp_s)
        else:
            name, exp = tok, 1
        if name not in index:
            raise ValueError(f"unknown generator {name!r} in {text!r}")
        g = index[name]
        letters.extend([g if exp > 0 else -g] * abs(exp))
    return reduce_word(letters)
