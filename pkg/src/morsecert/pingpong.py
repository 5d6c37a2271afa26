"""Exact ping-pong certificates for two 2x2 integer matrices acting on the
projective line by s -> (p s + q) / (r s + t).

Each matrix M gets a domain ``U+ u U-`` of two closed rational intervals,
``U+`` around the attracting and ``U-`` around the repelling fixed slope of
``M^N``.  The checked inclusions

    M^N (X_other u U+) in U+        M^-N (X_other u U-) in U-

give ``M^(jN) (X_other) in X_M`` for every ``j != 0`` by induction, which is
the ping-pong hypothesis for ``<A^N, B^N>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .free_aut import abelianization, mat_mul, phi, psi

Interval = tuple  # (Fraction, Fraction), lo <= hi

WIDTHS = tuple(Fraction(1, 2 ** j) for j in range(1, 13))


def _mat(M) -> tuple[tuple[int, int], tuple[int, int]]:
    (p, q), (r, t) = M
    return ((int(p), int(q)), (int(r), int(t)))


def det(M) -> int:
    (p, q), (r, t) = M
    return p * t - q * r


def mat_pow(M, n: int):
    out = ((1, 0), (0, 1))
    for _ in range(n):
        out = mat_mul(out, M)
    return out


def mat_inverse(M):
    """Inverse of a unimodular integer matrix."""
    (p, q), (r, t) = M
    d = det(M)
    if d not in (1, -1):
        raise ValueError(f"matrix {M} is not invertible over Z (det {d})")
    return ((t * d, -q * d), (-r * d, p * d))


def image_interval(M, iv: Interval) -> Interval | None:
    """Image of a closed interval of slopes, or None when it passes through infinity."""
    (p, q), (r, t) = M
    lo, hi = iv
    if r != 0:
        pole = Fraction(-t, r)
        if lo <= pole <= hi:
            return None
    a = Fraction(p * lo + q) / (r * lo + t)
    b = Fraction(p * hi + q) / (r * hi + t)
    return (min(a, b), max(a, b))


def contains(outer: Interval, inner: Interval) -> bool:
    return outer[0] <= inner[0] and inner[1] <= outer[1]


def disjoint(a: Interval, b: Interval) -> bool:
    return a[1] < b[0] or b[1] < a[0]


def _fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _fmt_iv(iv: Interval) -> list[str]:
    return [_fmt(iv[0]), _fmt(iv[1])]


@dataclass(frozen=True)
class PingPongCertificate:
    A: tuple
    B: tuple
    N: int
    domain_A: tuple[Interval, Interval]  # (U+, U-)
    domain_B: tuple[Interval, Interval]
    inclusions: tuple[tuple[str, bool], ...]

    def to_dict(self) -> dict:
        return {
            "A": [list(r) for r in self.A],
            "B": [list(r) for r in self.B],
            "N": self.N,
            "domain_A": {"attracting": _fmt_iv(self.domain_A[0]), "repelling": _fmt_iv(self.domain_A[1])},
            "domain_B": {"attracting": _fmt_iv(self.domain_B[0]), "repelling": _fmt_iv(self.domain_B[1])},
            "inclusions": [{"check": c, "holds": ok} for c, ok in self.inclusions],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PingPongCertificate":
        def iv(pair):
            return (Fraction(pair[0]), Fraction(pair[1]))

        return cls(
            _mat(data["A"]),
            _mat(data["B"]),
            int(data["N"]),
            (iv(data["domain_A"]["attracting"]), iv(data["domain_A"]["repelling"])),
            (iv(data["domain_B"]["attracting"]), iv(data["domain_B"]["repelling"])),
            tuple((c["check"], bool(c["holds"])) for c in data.get("inclusions", [])),
        )


def _inclusion_checks(A, B, N, XA, XB) -> list[tuple[str, bool]]:
    out = []
    intervals = [("A+", XA[0]), ("A-", XA[1]), ("B+", XB[0]), ("B-", XB[1])]
    for i in range(4):
        for j in range(i + 1, 4):
            out.append((f"{intervals[i][0]} and {intervals[j][0]} disjoint", disjoint(intervals[i][1], intervals[j][1])))
    for name, M, own, other, oname in (("A", A, XA, XB, "B"), ("B", B, XB, XA, "A")):
        fwd = mat_pow(M, N)
        back = mat_inverse(fwd)
        up, down = own
        for power, target, tname in ((fwd, up, "+"), (back, down, "-")):
            exp = "N" if power is fwd else "-N"
            sources = ((f"{name}{tname}", target), (f"{oname}+", other[0]), (f"{oname}-", other[1]))
            for src_name, src in sources:
                img = image_interval(power, src)
                out.append((f"{name}^{exp}({src_name}) in {name}{tname}", img is not None and contains(target, img)))
    return out


def pingpong_verify(A, B, N: int, XA: Sequence[Interval], XB: Sequence[Interval]) -> bool:
    A, B = _mat(A), _mat(B)
    for M in (A, B):
        if det(M) not in (1, -1):
            raise ValueError(f"matrix {M} is not invertible over Z")
    if N < 1:
        return False
    return all(ok for _, ok in _inclusion_checks(A, B, N, tuple(XA), tuple(XB)))


def replay(cert: PingPongCertificate) -> bool:
    return pingpong_verify(cert.A, cert.B, cert.N, cert.domain_A, cert.domain_B)


def fixed_slope_brackets(M, scale: int = 2 ** 20) -> list[Interval] | None:
    """Rational brackets around the two real fixed slopes, or None when M is
    not hyperbolic or fixes infinity."""
    (p, q), (r, t) = M
    if r == 0:
        return None
    # r s^2 + (t - p) s - q = 0
    b = t - p
    disc = b * b + 4 * r * q
    if disc <= 0:
        return None
    lo_sqrt = Fraction(isqrt(disc * scale * scale), scale)
    hi_sqrt = lo_sqrt + Fraction(1, scale)
    roots = []
    for sgn in (1, -1):
        ends = [(-b + sgn * x) / (2 * r) for x in (lo_sqrt, hi_sqrt)]
        roots.append((min(ends), max(ends)))
    return roots


def _candidate_domains(M, width: Fraction):
    brackets = fixed_slope_brackets(M)
    if brackets is None:
        return []
    grown = [(lo - width, hi + width) for lo, hi in brackets]
    return [(grown[0], grown[1]), (grown[1], grown[0])]


def pingpong_search(A, B, max_n: int = 16) -> PingPongCertificate | None:
    """Smallest N <= max_n with a verified ping-pong configuration; scans N
    outermost, then shrinking interval widths, then the attracting/repelling
    labelling."""
    A, B = _mat(A), _mat(B)
    for M in (A, B):
        if det(M) not in (1, -1):
            raise ValueError(f"matrix {M} is not invertible over Z")
    for N in range(1, max_n + 1):
        for width in WIDTHS:
            for XA in _candidate_domains(A, width):
                for XB in _candidate_domains(B, width):
                    checks = _inclusion_checks(A, B, N, XA, XB)
                    if all(ok for _, ok in checks):
                        return PingPongCertificate(A, B, N, XA, XB, tuple(checks))
    return None


PHI1_ABEL = ((2, 1), (1, 1))
PSI1_ABEL = ((1, 1), (1, 2))


def freeness_chain(cert: PingPongCertificate | None, k: int = 2) -> list[str]:
    """Assemble the freeness argument for <phi_1^N, psi_1^N> from a ping-pong certificate."""
    if cert is None:
        raise ValueError("no ping-pong certificate supplied")
    A, B = abelianization(phi(1, 2)), abelianization(psi(1, 2))
    if (cert.A, cert.B) != (A, B):
        raise ValueError("certificate is not for the abelianizations of phi_1 and psi_1")
    if not replay(cert):
        raise ValueError("ping-pong certificate does not replay")
    N = cert.N
    incl = "; ".join(c for c, _ in cert.inclusions)
    lines = [
        f"1. Ping-pong (exact rational interval arithmetic), N = {N}: {incl}. "
        f"Hence <A^{N}, B^{N}> < GL(2,Z) is free on A^{N}, B^{N}, with A = {[list(r) for r in A]}, B = {[list(r) for r in B]}.",
        f"2. Abelianization Aut(F_2) -> GL(2,Z) sends phi_1^{N} -> A^{N} and psi_1^{N} -> B^{N}.",
        f"3. Hopfian step: the composite F_2 -> <phi_1^{N}, psi_1^{N}> -> <A^{N}, B^{N}> = F_2 sends free generators "
        f"to free generators, so it is a surjective endomorphism of F_2; free groups are Hopfian, so it is injective, "
        f"hence so is the first map and <phi_1^{N}, psi_1^{N}> < Aut(F_2) is free of rank 2.",
    ]
    if k >= 4:
        lines.append(
            f"4. phi_i, psi_i commute with phi_j, psi_j for i != j (verified exactly), so "
            f"<phi_i^{N}, psi_i^{N} : i <= {k // 2}> = (F_2)^{k // 2} in Aut(F_{k})."
        )
    return lines
