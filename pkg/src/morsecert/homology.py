"""Exact integral homology of simplicial complexes via Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:
    from .complex_core import SimplicialComplex


def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix.

    Pure Python integers throughout; the input is not modified.
    """
    a = [list(map(int, row)) for row in matrix]
    if not a or not a[0]:
        return []
    rows, cols = len(a), len(a[0])
    diag: list[int] = []
    t = 0
    while t < rows and t < cols:
        # pivot: smallest nonzero |entry| in the remaining block
        best = None
        for i in range(t, rows):
            row = a[i]
            for j in range(t, cols):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        a[t], a[pi] = a[pi], a[t]
        if pj != t:
            for row in a:
                row[t], row[pj] = row[pj], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                v = a[i][t]
                if v:
                    q = v // p
                    ri, rt = a[i], a[t]
                    for j in range(t, cols):
                        if rt[j]:
                            ri[j] -= q * rt[j]
                    if ri[t]:
                        dirty = True
            rt = a[t]
            for j in range(t + 1, cols):
                v = rt[j]
                if v:
                    q = v // p
                    for i in range(t, rows):
                        if a[i][t]:
                            a[i][j] -= q * a[i][t]
                    if rt[j]:
                        dirty = True
            if not dirty:
                # divisibility of the rest of the block by the pivot
                bad = None
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                for j in range(t, cols):
                    a[t][j] += a[bad][j]
                continue
            # move the smallest remaining entry of row/column t onto the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, rows):
                v = a[i][t]
                if v and abs(v) < best[0]:
                    best = (abs(v), i, t)
            for j in range(t + 1, cols):
                v = a[t][j]
                if v and abs(v) < best[0]:
                    best = (abs(v), t, j)
            _, bi, bj = best
            if bi != t:
                a[t], a[bi] = a[bi], a[t]
            if bj != t:
                for row in a:
                    row[t], row[bj] = row[bj], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def _primary_parts(n: int) -> list[int]:
    parts = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            q = 1
            while n % d == 0:
                n //= d
                q *= d
            parts.append(q)
        d += 1
    if n > 1:
        parts.append(n)
    return parts


def invariant_factors(orders: Sequence[int]) -> tuple[int, ...]:
    """Canonical invariant factors (increasing, each dividing the next) of a
    direct sum of finite cyclic groups; trivial summands are dropped."""
    by_prime: dict[int, list[int]] = {}
    for n in orders:
        if n < 0:
            n = -n
        if n <= 1:
            if n == 0:
                raise ValueError("infinite cyclic summand in torsion list")
            continue
        for q in _primary_parts(n):
            p = next(d for d in range(2, q + 1) if q % d == 0)
            by_prime.setdefault(p, []).append(q)
    if not by_prime:
        return ()
    for qs in by_prime.values():
        qs.sort(reverse=True)
    width = max(len(qs) for qs in by_prime.values())
    factors = []
    for k in range(width):
        f = 1
        for qs in by_prime.values():
            if k < len(qs):
                f *= qs[k]
        factors.append(f)
    return tuple(sorted(factors))


@dataclass(frozen=True)
class HomologyProfile:
    """Reduced integral homology, dimension -1 up to the complex dimension.

    ``groups[k + 1]`` is ``(betti, torsion)`` for dimension ``k``.
    """

    groups: tuple[tuple[int, tuple[int, ...]], ...]

    @property
    def top_dimension(self) -> int:
        return len(self.groups) - 2

    def group(self, k: int) -> tuple[int, tuple[int, ...]]:
        if -1 <= k <= self.top_dimension:
            return self.groups[k + 1]
        return (0, ())

    def betti(self, k: int) -> int:
        return self.group(k)[0]

    def torsion(self, k: int) -> tuple[int, ...]:
        return self.group(k)[1]

    def is_zero(self, k: int) -> bool:
        return self.group(k) == (0, ())

    def is_acyclic_through(self, k: int) -> bool:
        return all(self.is_zero(i) for i in range(-1, k + 1))

    def first_nonzero(self) -> int | None:
        for k in range(-1, self.top_dimension + 1):
            if not self.is_zero(k):
                return k
        return None

    def normalized(self) -> "HomologyProfile":
        groups = list(self.groups)
        while len(groups) > 1 and groups[-1] == (0, ()):
            groups.pop()
        return HomologyProfile(tuple(groups))

    def same_groups(self, other: "HomologyProfile") -> bool:
        return self.normalized() == other.normalized()

    def describe(self) -> str:
        parts = []
        for k in range(-1, self.top_dimension + 1):
            b, tors = self.group(k)
            if b or tors:
                summands = (["Z^%d" % b if b > 1 else "Z"] if b else []) + [f"Z/{d}" for d in tors]
                parts.append(f"H~{k} = " + " + ".join(summands))
        return ", ".join(parts) if parts else "acyclic"

    def to_dict(self) -> dict:
        return {
            str(k): {"betti": b, "torsion": list(t)}
            for k, (b, t) in zip(range(-1, self.top_dimension + 1), self.groups)
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HomologyProfile":
        dims = sorted(int(k) for k in data)
        top = dims[-1] if dims else -1
        groups = []
        for k in range(-1, top + 1):
            entry = data.get(str(k), {"betti": 0, "torsion": []})
            groups.append((int(entry["betti"]), tuple(int(x) for x in entry["torsion"])))
        return cls(tuple(groups))


def boundary_matrix(faces_k: Sequence[tuple[int, ...]], faces_km1: Sequence[tuple[int, ...]]) -> list[list[int]]:
    """Matrix of the simplicial boundary C_k -> C_{k-1} (rows index k-1 faces).

    Simplices are increasing tuples of vertex indices; the (-1)-skeleton is
    the single empty simplex, which gives the augmentation.
    """
    index = {f: i for i, f in enumerate(faces_km1)}
    m = [[0] * len(faces_k) for _ in faces_km1]
    for col, s in enumerate(faces_k):
        for i in range(len(s)):
            m[index[s[:i] + s[i + 1:]]][col] = -1 if i % 2 else 1
    return m


def _rank_and_divisors(matrix: list[list[int]]) -> tuple[int, list[int]]:
    d = smith_diagonal(matrix) if matrix and matrix[0] else []
    return len(d), [x for x in d if x > 1]


def reduced_homology(complex_: "SimplicialComplex") -> HomologyProfile:
    dim = complex_.dimension
    chains = {k: complex_.simplices(k) for k in range(-1, dim + 1)}
    ranks = {}
    divisors = {}
    for k in range(0, dim + 1):
        ranks[k], divisors[k] = _rank_and_divisors(boundary_matrix(chains[k], chains[k - 1]))
    groups = []
    for k in range(-1, dim + 1):
        rank_out = ranks.get(k, 0)
        rank_in = ranks.get(k + 1, 0)
        betti = len(chains[k]) - rank_out - rank_in
        groups.append((betti, invariant_factors(divisors.get(k + 1, []))))
    return HomologyProfile(tuple(groups))


def tensor_and_tor(a: tuple[int, tuple[int, ...]], b: tuple[int, tuple[int, ...]]):
    """Tensor product and Tor of two finitely generated abelian groups given as
    ``(free rank, torsion orders)``; both returned in the same form."""
    ra, ta = a
    rb, tb = b
    tensor_free = ra * rb
    tensor_tors = [d for d in tb for _ in range(ra)] + [d for d in ta for _ in range(rb)]
    tensor_tors += [gcd(x, y) for x in ta for y in tb]
    tor = [gcd(x, y) for x in ta for y in tb]
    return (tensor_free, tensor_tors), (0, tor)


def join_homology_formula(h1: HomologyProfile, h2: HomologyProfile) -> HomologyProfile:
    """Reduced homology of a join predicted from the factors' reduced homology:
    H~_{k+1}(A*B) = sum_{i+j=k} H~_i(A) (x) H~_j(B)  +  sum_{i+j=k-1} Tor(H~_i(A), H~_j(B)).
    """
    top = h1.top_dimension + h2.top_dimension + 1
    acc = {k: [0, []] for k in range(-1, top + 1)}
    for i in range(-1, h1.top_dimension + 1):
        for j in range(-1, h2.top_dimension + 1):
            (tf, tt), (_, tor) = tensor_and_tor(h1.group(i), h2.group(j))
            acc[i + j + 1][0] += tf
            acc[i + j + 1][1] += tt
            if i + j + 2 <= top:
                acc[i + j + 2][1] += tor
    return HomologyProfile(tuple((acc[k][0], invariant_factors(acc[k][1])) for k in range(-1, top + 1)))
