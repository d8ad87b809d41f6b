"""Solving B(z) = beta for finite Blaschke products, and what hangs off it:
critical values, regular-value sampling, Frostman transforms, fixed points
in the disk, and forward orbits toward the attracting fixed point.

A finite Blaschke product of degree N takes every value of the disk exactly
N times; writing B = P/Q turns B(z) = beta into the polynomial equation
P - beta Q = 0, which is how everything here is computed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSymbol,
    DomainError,
    ExhaustedRetries,
    NotContractive,
    ResidualFailure,
)
from .polynomials import (
    DEFAULT_CLUSTER_RADIUS,
    Polynomial,
    RootSet,
    poly_mul,
    poly_roots,
    poly_scale,
    poly_sub,
)
from .symbols import BlaschkeProduct, MobiusMap, taylor_coefficients

__all__ = [
    "PreimageSet",
    "OrbitRecord",
    "solve_blaschke_equation",
    "critical_values",
    "sample_regular_value",
    "frostman_transform",
    "conjugate_by_automorphism",
    "fixed_points_in_disk",
    "interior_fixed_point",
    "dw_orbit",
]


@dataclass
class PreimageSet:
    """Solutions of B(z) = target inside the disk, counted with multiplicity."""

    target: complex
    solutions: RootSet
    all_distinct: bool


def _equation_polynomial(b: BlaschkeProduct, beta: complex) -> Polynomial:
    p, q = b.numerator_denominator()
    return poly_sub(p, poly_scale(q, beta))


def solve_blaschke_equation(
    b: BlaschkeProduct,
    beta,
    tol: float = 1e-10,
    cluster_radius: float = DEFAULT_CLUSTER_RADIUS,
) -> PreimageSet:
    """All deg(B) preimages of ``beta`` under ``b``, with multiplicities.

    Raises :class:`ResidualFailure` if a claimed root fails |B(z) - beta| <= tol.
    """
    beta = complex(beta)
    if b.degree < 1:
        raise DegenerateSymbol("preimages need a nonconstant Blaschke product")
    if abs(beta) >= 1.0:
        raise DomainError("target values must lie in the open disk")
    eq = _equation_polynomial(b, beta)
    rs = poly_roots(eq, cluster_radius)
    if rs.total_multiplicity != b.degree:
        raise ResidualFailure(
            f"expected {b.degree} preimages, root finder produced "
            f"{rs.total_multiplicity}"
        )
    worst = max(abs(complex(b(v)) - beta) for v, _ in rs.roots)
    if worst > tol:
        raise ResidualFailure(
            f"preimage residual {worst:.3e} exceeds tolerance {tol:.3e}"
        )
    values = rs.values()
    sep_ok = all(
        abs(values[i] - values[j]) > cluster_radius
        for i in range(len(values))
        for j in range(i + 1, len(values))
    )
    all_distinct = sep_ok and all(m == 1 for _, m in rs.roots)
    return PreimageSet(beta, rs, all_distinct)


def critical_values(
    b: BlaschkeProduct,
    tol: float = 1e-9,
    cluster_radius: float = DEFAULT_CLUSTER_RADIUS,
) -> list:
    """Values of ``b`` at its critical points in the closed disk.

    Critical points are the roots of P'Q - PQ'; points outside the closed
    disk are discarded.
    """
    if b.degree < 1:
        raise DegenerateSymbol("critical values need a nonconstant Blaschke product")
    p, q = b.numerator_denominator()
    from .polynomials import poly_derivative

    num = poly_sub(poly_mul(poly_derivative(p), q), poly_mul(p, poly_derivative(q)))
    if num.is_zero:
        raise DegenerateSymbol("derivative numerator vanished identically")
    if num.degree == 0:
        return []
    rs = poly_roots(num, cluster_radius)
    vals = [complex(b(v)) for v, _ in rs.roots if abs(v) <= 1.0 + tol]
    vals.sort(key=lambda w: (w.real, w.imag))
    return vals


def sample_regular_value(
    b: BlaschkeProduct,
    seed: int,
    margin: float = 1e-4,
    max_tries: int = 1000,
) -> complex:
    """Deterministically draw beta in the disk, away from every critical value,
    from the origin and from the boundary by at least ``margin``."""
    crit = critical_values(b)
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        r = math.sqrt(rng.uniform()) * (1.0 - 2.0 * margin)
        beta = r * np.exp(2j * np.pi * rng.uniform())
        beta = complex(beta)
        if abs(beta) <= margin:
            continue
        if all(abs(beta - c) > margin for c in crit):
            return beta
    raise ExhaustedRetries(f"no regular value found in {max_tries} draws")


def _fit_rotation(origin_order, zeros, target) -> BlaschkeProduct:
    """Blaschke product with the given zeros whose rotation matches ``target``."""
    bare = BlaschkeProduct(rotation=0.0, origin_order=origin_order, zeros=zeros)
    probes = np.concatenate(
        ([0.0 + 0.0j], 0.4 * np.exp(2j * np.pi * (np.arange(8) + 0.3) / 8))
    )
    bv = np.asarray(bare(probes))
    k = int(np.argmax(np.abs(bv)))
    if abs(bv[k]) < 1e-12:
        raise ResidualFailure("could not anchor the rotation: candidate vanishes")
    ratio = complex(np.asarray(target(probes[k]))) / complex(bv[k])
    return BlaschkeProduct(
        rotation=float(np.angle(ratio)), origin_order=origin_order, zeros=zeros
    )


def _split_origin(rs: RootSet, origin_tol: float = 1e-9):
    origin = 0
    zeros = []
    for v, m in rs.roots:
        if abs(v) < origin_tol:
            origin += m
        else:
            zeros.append((v, m))
    return origin, zeros


def frostman_transform(
    b: BlaschkeProduct,
    lam,
    tol: float = 1e-8,
    cluster_radius: float = DEFAULT_CLUSTER_RADIUS,
):
    """tau_lam . b as a Blaschke product, plus a simple-zero flag.

    The zeros of the transform are the preimages of ``lam`` under ``b``;
    they are simple exactly when b' does not vanish at any of them
    (|b'| > tol is the numerical test).  The rotation is fitted so the
    result evaluates equal to tau_lam(b(z)).
    """
    lam = complex(lam)
    if abs(lam) >= 1.0:
        raise DomainError("Frostman parameter must lie in the open disk")
    pre = solve_blaschke_equation(b, lam, tol=max(tol, 1e-10), cluster_radius=cluster_radius)
    origin, zeros = _split_origin(pre.solutions)
    tau = MobiusMap.disk_involution(lam)
    result = _fit_rotation(origin, zeros, lambda z: tau(b(z)))
    simple = all(abs(complex(b.derivative(v))) > tol for v in pre.solutions.values())
    return result, simple


def conjugate_by_automorphism(
    b: BlaschkeProduct,
    alpha,
    tol: float = 1e-10,
    cluster_radius: float = DEFAULT_CLUSTER_RADIUS,
) -> BlaschkeProduct:
    """tau_alpha . b . tau_alpha as a Blaschke product.

    Its zeros are tau_alpha applied to the preimages of ``alpha``; in
    particular a fixed point alpha of ``b`` maps to an origin zero, so the
    conjugate fixes 0.
    """
    alpha = complex(alpha)
    tau = MobiusMap.disk_involution(alpha)
    pre = solve_blaschke_equation(b, alpha, tol=max(tol, 1e-9), cluster_radius=cluster_radius)
    moved = RootSet(
        [(complex(tau(v)), m) for v, m in pre.solutions.roots],
        pre.solutions.residual_bound,
    )
    origin, zeros = _split_origin(moved)
    return _fit_rotation(origin, zeros, lambda z: tau(b(tau(z))))


def fixed_points_in_disk(phi, tol: float = 1e-9, cluster_radius: float = DEFAULT_CLUSTER_RADIUS):
    """Solutions of phi(z) = z strictly inside the disk, with phi'(z) at each.

    ``phi`` is a Blaschke product or a Mobius map; either reduces to
    polynomial roots.  A holomorphic self-map has at most one interior
    fixed point; more than one signals a numerical anomaly and is warned.
    """
    if isinstance(phi, MobiusMap):
        fp = phi.fixed_point_polynomial()
        deriv = phi.derivative
    elif isinstance(phi, BlaschkeProduct):
        p, q = phi.numerator_denominator()
        fp = poly_sub(p, poly_mul(Polynomial([0.0, 1.0]), q))
        deriv = phi.derivative
    else:
        raise TypeError("fixed points are computed for Blaschke products or Mobius maps")
    if fp.is_zero:
        raise DegenerateSymbol("identity map: every point is fixed")
    if fp.degree == 0:
        return []
    rs = poly_roots(fp, cluster_radius)
    out = [
        (v, complex(deriv(v)))
        for v, _ in rs.roots
        if abs(v) < 1.0 - tol
    ]
    if len(out) > 1:
        import warnings

        warnings.warn(
            "more than one interior fixed point found; "
            "the input is numerically inconsistent with a disk self-map"
        )
    return out


def interior_fixed_point(
    f,
    derivative=None,
    start: complex = 0.0,
    max_iter: int = 400,
    tol: float = 1e-12,
    interior_margin: float = 1e-6,
):
    """Attracting interior fixed point of a non-automorphic self-map, or None.

    Plain forward iteration (the orbit converges to the attracting point
    whenever it lies inside), followed by a few Newton polish steps when a
    derivative is supplied.  Returns None when the orbit drifts to the
    boundary instead.
    """
    z = complex(start)
    for _ in range(max_iter):
        nz = complex(np.asarray(f(z)))
        if abs(nz) > 1.0 - interior_margin:
            return None
        if abs(nz - z) < 1e2 * tol:
            z = nz
            break
        z = nz
    else:
        return None
    if derivative is not None:
        for _ in range(4):
            fz = complex(np.asarray(f(z)))
            dz = complex(np.asarray(derivative(z)))
            denom = dz - 1.0
            if abs(denom) < 1e-14:
                break
            z = z - (fz - z) / denom
    if abs(complex(np.asarray(f(z))) - z) > 1e3 * tol:
        return None
    return z


@dataclass
class OrbitRecord:
    """Forward orbit of a point under iteration of a symbol fixing 0."""

    start: complex
    iterates: np.ndarray
    moduli: np.ndarray


def dw_orbit(psi, z0, n_max: int = 60) -> OrbitRecord:
    """Iterate psi from z0; requires psi(0) = 0 and |psi'(0)| < 1.

    The moduli are nonincreasing (Schwarz lemma) and tend to 0, the
    attracting fixed point of any such non-rotation.  Rotation-like
    symbols (|psi'(0)| within 1e-12 of 1) are refused.
    """
    z0 = complex(z0)
    if abs(z0) >= 1.0:
        raise DomainError("orbit start must lie in the open disk")
    f0 = complex(np.asarray(psi(0.0 + 0.0j)))
    if abs(f0) > 1e-12:
        raise DomainError("orbit iteration requires a symbol fixing the origin")
    c = taylor_coefficients(psi, 2, radius=0.5)
    if abs(c[1]) >= 1.0 - 1e-12:
        raise NotContractive(
            "|psi'(0)| is not below 1: rotation-like symbol, orbit does not converge"
        )
    pts = [z0]
    z = z0
    for _ in range(n_max):
        z = complex(np.asarray(psi(z)))
        pts.append(z)
    iterates = np.array(pts, dtype=complex)
    return OrbitRecord(z0, iterates, np.abs(iterates))
