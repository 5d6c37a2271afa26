"""Certificates for Morse-theoretic finiteness, nonpositive curvature, and
infinitely many conjugacy classes of finite-order elements."""

__version__ = "0.1.0"
