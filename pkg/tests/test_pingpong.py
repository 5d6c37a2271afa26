import json
from fractions import Fraction

import pytest

from morsecert.free_aut import abelianization, phi, psi
from morsecert.pingpong import (
    PHI1_ABEL,
    PSI1_ABEL,
    PingPongCertificate,
    fixed_slope_brackets,
    freeness_chain,
    image_interval,
    mat_inverse,
    mat_pow,
    pingpong_search,
    pingpong_verify,
    replay,
)


@pytest.fixture(scope="module")
def cert():
    return pingpong_search(PHI1_ABEL, PSI1_ABEL, 16)


def test_matrices_are_the_abelianizations():
    assert PHI1_ABEL == abelianization(phi(1, 2))
    assert PSI1_ABEL == abelianization(psi(1, 2))


def test_search_finds_certificate(cert):
    assert cert is not None and 1 <= cert.N <= 16
    assert replay(cert)
    assert all(ok for _, ok in cert.inclusions)


def test_minimal(cert):
    assert pingpong_search(PHI1_ABEL, PSI1_ABEL, cert.N - 1) is None


def test_json_round_trip(cert):
    text = json.dumps(cert.to_dict(), sort_keys=True)
    back = PingPongCertificate.from_dict(json.loads(text))
    assert back == cert
    assert json.dumps(back.to_dict(), sort_keys=True) == text
    assert all("/" in x for x in cert.to_dict()["domain_A"]["attracting"])


def test_tampered_certificate_fails(cert):
    lo, hi = cert.domain_A[0]
    wide = (lo - 10, hi + 10)
    assert not pingpong_verify(cert.A, cert.B, cert.N, (wide, cert.domain_A[1]), cert.domain_B)
    assert not pingpong_verify(cert.A, cert.B, 0, cert.domain_A, cert.domain_B)


def test_same_matrix_has_no_certificate():
    assert pingpong_search(PHI1_ABEL, PHI1_ABEL, 6) is None


def test_non_unimodular():
    with pytest.raises(ValueError):
        pingpong_search(((2, 0), (0, 1)), PSI1_ABEL, 2)


def test_chain(cert):
    lines = freeness_chain(cert, 4)
    assert len(lines) == 4
    assert "Hopfian" in lines[2]
    assert f"N = {cert.N}" in lines[0]


def test_chain_requires_certificate():
    with pytest.raises(ValueError):
        freeness_chain(None)


def test_brackets_contain_fixed_points():
    # fixed slopes of s -> (2s + 1) / (s + 1) are the roots of s^2 - s - 1
    f = lambda s: s * s - s - 1  # noqa: E731
    brackets = fixed_slope_brackets(PHI1_ABEL)
    assert len(brackets) == 2
    for lo, hi in brackets:
        assert f(lo) * f(hi) <= 0


def test_interval_images():
    M = mat_pow(PHI1_ABEL, 2)
    assert M == ((5, 3), (3, 2))
    assert image_interval(M, (Fraction(0), Fraction(1))) == (Fraction(3, 2), Fraction(8, 5))
    Minv = mat_inverse(M)
    iv = (Fraction(1, 3), Fraction(1, 2))
    img = image_interval(M, iv)
    assert image_interval(Minv, img) == iv
    assert image_interval(((0, 1), (1, 0)), (Fraction(-1), Fraction(1))) is None
