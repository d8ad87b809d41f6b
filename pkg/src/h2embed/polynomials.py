"""Complex polynomial arithmetic and root finding.

Coefficients are stored in ascending degree order; an empty coefficient
array is the zero polynomial.  Root finding goes through the companion
matrix (``numpy.polynomial.polyroots``) followed by a single-linkage
cluster merge, so that multiple roots are reported once with their
multiplicity together with an honest residual bound.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.polynomial.polynomial as npoly

from .errors import ZeroPolynomial

__all__ = [
    "Polynomial",
    "RootSet",
    "DiskPartition",
    "poly_add",
    "poly_sub",
    "poly_mul",
    "poly_scale",
    "poly_pow",
    "poly_derivative",
    "poly_roots",
    "roots_in_disk",
]

DEFAULT_CLUSTER_RADIUS = 1e-6
DEFAULT_BOUNDARY_TOL = 1e-9


@dataclass
class Polynomial:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).ravel()
        n = c.size
        while n > 0 and c[n - 1] == 0:
            n -= 1
        self.coeffs = c[:n].copy()

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.is_zero:
            return np.zeros_like(z)
        return npoly.polyval(z, self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(
            np.all(self.coeffs == other.coeffs)
        )


def _coeffs(p) -> np.ndarray:
    if isinstance(p, Polynomial):
        c = p.coeffs
    else:
        c = np.atleast_1d(np.asarray(p, dtype=complex)).ravel()
    return c if c.size else np.zeros(1, dtype=complex)


def poly_add(p, q) -> Polynomial:
    return Polynomial(npoly.polyadd(_coeffs(p), _coeffs(q)))


def poly_sub(p, q) -> Polynomial:
    return Polynomial(npoly.polysub(_coeffs(p), _coeffs(q)))


def poly_mul(p, q) -> Polynomial:
    return Polynomial(npoly.polymul(_coeffs(p), _coeffs(q)))


def poly_scale(p, c) -> Polynomial:
    return Polynomial(_coeffs(p) * complex(c))


def poly_pow(p, k: int) -> Polynomial:
    if k < 0:
        raise ValueError("nonnegative power required")
    return Polynomial(npoly.polypow(_coeffs(p), k))


def poly_derivative(p) -> Polynomial:
    p = p if isinstance(p, Polynomial) else Polynomial(p)
    if p.degree <= 0:
        return Polynomial([])
    return Polynomial(npoly.polyder(p.coeffs))


@dataclass
class RootSet:
    """Roots with multiplicities plus the worst residual |p(root)| observed."""

    roots: list  # (value, multiplicity) pairs, sorted by (real, imag)
    residual_bound: float

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.roots)

    def values(self):
        return [v for v, _ in self.roots]


def poly_roots(p, cluster_radius: float = DEFAULT_CLUSTER_RADIUS) -> RootSet:
    """All roots of ``p`` with multiplicity.

    Roots closer than ``cluster_radius`` (single linkage) are merged into
    one root at the cluster centroid with the summed multiplicity.  The
    reported ``residual_bound`` is max |p(root)| over the merged roots.
    """
    p = p if isinstance(p, Polynomial) else Polynomial(p)
    if p.is_zero:
        raise ZeroPolynomial("cannot extract roots of the zero polynomial")
    if p.degree == 0:
        return RootSet([], 0.0)
    raw = npoly.polyroots(p.coeffs)

    groups = [[r] for r in raw]
    merged = True
    while merged:
        merged = False
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                if any(
                    abs(a - b) < cluster_radius for a in groups[i] for b in groups[j]
                ):
                    groups[i].extend(groups[j])
                    del groups[j]
                    merged = True
                    break
            if merged:
                break

    roots = [(complex(np.mean(g)), len(g)) for g in groups]
    roots.sort(key=lambda vm: (vm[0].real, vm[0].imag))
    residual = max(abs(complex(p(v))) for v, _ in roots)
    return RootSet(roots, float(residual))


@dataclass
class DiskPartition:
    """Roots split by position relative to the unit circle."""

    inside: list
    boundary: list
    outside: list


def roots_in_disk(rs: RootSet, tol: float = DEFAULT_BOUNDARY_TOL) -> DiskPartition:
    """Classify roots against the unit disk with a boundary band of width ``tol``."""
    inside, boundary, outside = [], [], []
    for v, m in rs.roots:
        r = abs(v)
        if abs(r - 1.0) <= tol:
            boundary.append((v, m))
        elif r < 1.0 - tol:
            inside.append((v, m))
        else:
            outside.append((v, m))
    return DiskPartition(inside, boundary, outside)
