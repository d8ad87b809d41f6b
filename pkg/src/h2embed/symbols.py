"""Bounded analytic symbols on the unit disk.

Every concrete symbol class here — finite Blaschke product, discrete
singular inner function, rational outer factor, Mobius map, truncated
power series and the product/conjugation wrappers — is a callable,
vectorised over numpy arrays of points in the open disk.

``circle_eval`` is the sanctioned way to evaluate a symbol *on* the unit
circle: singular inner functions extend there with unimodular values off
their atom set, which their ordinary ``__call__`` refuses by contract.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import numpy.polynomial.polynomial as npoly

from .errors import (
    BoundaryZeroWarning,
    DegenerateMap,
    DomainError,
    IllConditioned,
    PoleHit,
)
from .polynomials import (
    DEFAULT_BOUNDARY_TOL,
    DEFAULT_CLUSTER_RADIUS,
    Polynomial,
    poly_mul,
    poly_pow,
    poly_roots,
    roots_in_disk,
)

__all__ = [
    "BlaschkeProduct",
    "SingularMeasure",
    "SingularInner",
    "RationalOuter",
    "FactoredSymbol",
    "MobiusMap",
    "PowerSeries",
    "ProductSymbol",
    "ConjugatedSymbol",
    "circle_eval",
    "factor_polynomial",
    "taylor_coefficients",
]

_POLE_TOL = 1e-14
_OUTER_MODULUS_SLACK = 1e-8


def _as_points(z):
    return np.asarray(z, dtype=complex)


@dataclass
class BlaschkeProduct:
    """Finite Blaschke product: rotation, origin zero order, nonzero zeros.

    ``zeros`` is a list of (alpha, multiplicity) with 0 < |alpha| < 1; a
    zero at the origin lives in ``origin_order`` only.  By default each
    factor is the plain (alpha - z)/(1 - conj(alpha) z); setting
    ``canonical_phases`` multiplies in the classical |alpha|/alpha phase
    per factor.  The explicit ``rotation`` disambiguates either way.
    """

    rotation: float = 0.0
    origin_order: int = 0
    zeros: list = field(default_factory=list)
    canonical_phases: bool = False

    def __post_init__(self):
        if self.origin_order < 0:
            raise ValueError("origin_order must be nonnegative")
        zs = []
        for alpha, mult in self.zeros:
            alpha = complex(alpha)
            mult = int(mult)
            if mult < 1:
                raise ValueError("zero multiplicity must be positive")
            if not 0.0 < abs(alpha) < 1.0:
                raise ValueError(
                    "nonzero Blaschke zeros must satisfy 0 < |alpha| < 1; "
                    "origin zeros belong in origin_order"
                )
            zs.append((alpha, mult))
        self.zeros = zs

    @property
    def degree(self) -> int:
        return self.origin_order + sum(m for _, m in self.zeros)

    @property
    def is_trivial(self) -> bool:
        return self.degree == 0

    def _phase(self) -> complex:
        c = cmath.exp(1j * self.rotation)
        if self.canonical_phases:
            for alpha, m in self.zeros:
                c *= (abs(alpha) / alpha) ** m
        return c

    def __call__(self, z):
        z = _as_points(z)
        out = np.full_like(z, self._phase())
        if self.origin_order:
            out = out * z**self.origin_order
        for alpha, m in self.zeros:
            den = 1.0 - np.conj(alpha) * z
            if np.any(np.abs(den) < _POLE_TOL):
                raise PoleHit(f"evaluation at a pole of the factor with zero {alpha}")
            out = out * ((alpha - z) / den) ** m
        return out

    def numerator_denominator(self):
        """Polynomials (P, Q) with B = P/Q, including phase and origin factor."""
        num = Polynomial([self._phase()])
        if self.origin_order:
            num = poly_mul(num, Polynomial([0] * self.origin_order + [1]))
        den = Polynomial([1.0])
        for alpha, m in self.zeros:
            num = poly_mul(num, poly_pow(Polynomial([alpha, -1.0]), m))
            den = poly_mul(den, poly_pow(Polynomial([1.0, -np.conj(alpha)]), m))
        return num, den

    def derivative(self, z):
        z = _as_points(z)
        p, q = self.numerator_denominator()
        dp = Polynomial(npoly.polyder(p.coeffs)) if p.degree > 0 else Polynomial([])
        dq = Polynomial(npoly.polyder(q.coeffs)) if q.degree > 0 else Polynomial([])
        qz = q(z)
        if np.any(np.abs(qz) < _POLE_TOL):
            raise PoleHit("derivative evaluation at a pole")
        return (dp(z) * qz - p(z) * dq(z)) / qz**2


@dataclass
class SingularMeasure:
    """Finite positive atomic measure on the unit circle."""

    atoms: list  # (location on the circle, mass) pairs

    def __post_init__(self):
        cleaned = []
        for zeta, mass in self.atoms:
            zeta = complex(zeta)
            mass = float(mass)
            if abs(abs(zeta) - 1.0) > 1e-9:
                raise ValueError(f"atom location {zeta} is not on the unit circle")
            if mass <= 0.0:
                raise ValueError("atom masses must be strictly positive")
            cleaned.append((zeta / abs(zeta), mass))
        for i in range(len(cleaned)):
            for j in range(i + 1, len(cleaned)):
                if abs(cleaned[i][0] - cleaned[j][0]) < 1e-12:
                    raise ValueError("atom locations must be distinct")
        self.atoms = cleaned

    @classmethod
    def from_angles(cls, angle_mass_pairs):
        return cls([(cmath.exp(1j * a), m) for a, m in angle_mass_pairs])

    @property
    def total_mass(self) -> float:
        return sum(m for _, m in self.atoms)

    def scaled(self, t: float) -> "SingularMeasure":
        if t < 0:
            raise ValueError("measures scale by nonnegative factors")
        if t == 0:
            return SingularMeasure([])
        return SingularMeasure([(z, t * m) for z, m in self.atoms])


@dataclass
class SingularInner:
    """exp(-sum mass * (zeta + z)/(zeta - z)) over the atoms of the measure.

    Zero-free on the disk with |S(z)| < 1 there and S(0) = exp(-total mass).
    """

    measure: SingularMeasure

    def _herglotz(self, z):
        out = np.zeros_like(z)
        for zeta, mass in self.measure.atoms:
            out = out + mass * (zeta + z) / (zeta - z)
        return out

    def __call__(self, z):
        z = _as_points(z)
        if np.any(np.abs(z) >= 1.0):
            raise DomainError("singular inner functions are evaluated on |z| < 1 only")
        return np.exp(-self._herglotz(z))

    def boundary_value(self, z):
        """Unimodular boundary extension, defined off the atom set."""
        z = _as_points(z)
        for zeta, _ in self.measure.atoms:
            if np.any(np.abs(z - zeta) < 1e-12):
                raise PoleHit(f"boundary evaluation at the atom {zeta}")
        return np.exp(-self._herglotz(z))

    def derivative(self, z):
        z = _as_points(z)
        fac = np.zeros_like(z)
        for zeta, mass in self.measure.atoms:
            fac = fac - 2.0 * mass * zeta / (zeta - z) ** 2
        return self(z) * fac

    @property
    def is_trivial(self) -> bool:
        return not self.measure.atoms


@dataclass
class RationalOuter:
    """a * prod (1 - conj(alpha) z) * prod (z - beta): zero-free on the open disk.

    ``conjugate_factors`` lists alphas in the disk (the reflected factors),
    ``exterior_zeros`` lists betas with |beta| >= 1.
    """

    constant: complex = 1.0
    conjugate_factors: list = field(default_factory=list)
    exterior_zeros: list = field(default_factory=list)

    def __post_init__(self):
        self.constant = complex(self.constant)
        if self.constant == 0:
            raise ValueError("outer constant must be nonzero")
        self.conjugate_factors = [complex(a) for a in self.conjugate_factors]
        self.exterior_zeros = [complex(b) for b in self.exterior_zeros]
        for a in self.conjugate_factors:
            if abs(a) >= 1.0:
                raise ValueError("conjugate factors require |alpha| < 1")
        for b in self.exterior_zeros:
            if abs(b) < 1.0 - _OUTER_MODULUS_SLACK:
                raise ValueError("exterior zeros require |beta| >= 1")
        self._poly = self.as_polynomial()

    def as_polynomial(self) -> Polynomial:
        p = Polynomial([self.constant])
        for a in self.conjugate_factors:
            p = poly_mul(p, Polynomial([1.0, -np.conj(a)]))
        for b in self.exterior_zeros:
            p = poly_mul(p, Polynomial([-b, 1.0]))
        return p

    def __call__(self, z):
        return self._poly(_as_points(z))

    @property
    def is_constant(self) -> bool:
        return not self.conjugate_factors and not self.exterior_zeros


@dataclass
class FactoredSymbol:
    """Product Blaschke * singular inner * rational outer; parts may be absent."""

    blaschke: BlaschkeProduct | None = None
    singular: SingularInner | None = None
    outer: RationalOuter | None = None

    def parts(self):
        return [p for p in (self.blaschke, self.singular, self.outer) if p is not None]

    def __call__(self, z):
        z = _as_points(z)
        out = np.ones_like(z)
        for p in self.parts():
            out = out * p(z)
        return out


@dataclass
class MobiusMap:
    """z -> (a z + b)/(c z + d) with nonvanishing determinant."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        self.a, self.b = complex(self.a), complex(self.b)
        self.c, self.d = complex(self.c), complex(self.d)
        scale = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d), 1.0)
        if abs(self.det) <= 1e-15 * scale**2:
            raise DegenerateMap("ad - bc vanishes")

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __call__(self, z):
        z = _as_points(z)
        den = self.c * z + self.d
        if np.any(np.abs(den) < _POLE_TOL):
            raise PoleHit("Mobius evaluation at its pole")
        return (self.a * z + self.b) / den

    def derivative(self, z):
        z = _as_points(z)
        den = self.c * z + self.d
        if np.any(np.abs(den) < _POLE_TOL):
            raise PoleHit("Mobius derivative at its pole")
        return self.det / den**2

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self after other: (self . other)(z) = self(other(z))."""
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    @staticmethod
    def identity() -> "MobiusMap":
        return MobiusMap(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def disk_involution(cls, alpha) -> "MobiusMap":
        """The self-inverse disk automorphism z -> (alpha - z)/(1 - conj(alpha) z)."""
        alpha = complex(alpha)
        if abs(alpha) >= 1.0:
            raise DomainError("involution center must lie in the open disk")
        return cls(-1.0, alpha, -np.conj(alpha), 1.0)

    def is_disk_automorphism(self, samples: int = 64, tol: float = 1e-9) -> bool:
        """Numerical test: boundary maps to boundary and the origin stays inside."""
        try:
            zeta = np.exp(2j * np.pi * (np.arange(samples) + 0.5) / samples)
            on_circle = np.max(np.abs(np.abs(self(zeta)) - 1.0)) <= tol
            return bool(on_circle and abs(complex(self(0.0))) < 1.0)
        except PoleHit:
            return False

    def fixed_point_polynomial(self) -> Polynomial:
        """c z^2 + (d - a) z - b, whose roots are the fixed points."""
        return Polynomial([-self.b, self.d - self.a, self.c])


def mobius_apply(m: MobiusMap, z):
    return m(z)


def mobius_compose(m1: MobiusMap, m2: MobiusMap) -> MobiusMap:
    return m1.compose(m2)


def mobius_inverse(m: MobiusMap) -> MobiusMap:
    return m.inverse()


@dataclass
class PowerSeries:
    """Truncated Taylor series used as an analytic symbol."""

    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).ravel()
        if self.coeffs.size == 0:
            self.coeffs = np.zeros(1, dtype=complex)

    def __call__(self, z):
        return npoly.polyval(_as_points(z), self.coeffs)


@dataclass
class ProductSymbol:
    """Pointwise product of symbols."""

    factors: list

    def __call__(self, z):
        z = _as_points(z)
        out = np.ones_like(z)
        for f in self.factors:
            out = out * f(z)
        return out


@dataclass
class ConjugatedSymbol:
    """tau_alpha . core . tau_alpha for an inner core (moves a fixed point to 0)."""

    core: object
    alpha: complex

    def __post_init__(self):
        self.alpha = complex(self.alpha)
        self._tau = MobiusMap.disk_involution(self.alpha)

    def __call__(self, z):
        return self._tau(self.core(self._tau(_as_points(z))))


def circle_eval(sym, z):
    """Evaluate a symbol on (or near) the unit circle.

    Dispatches so that singular inner parts use their unimodular boundary
    extension instead of the interior-only ``__call__``.
    """
    z = _as_points(z)
    if isinstance(sym, SingularInner):
        return sym.boundary_value(z)
    if isinstance(sym, FactoredSymbol):
        out = np.ones_like(z)
        for p in sym.parts():
            out = out * circle_eval(p, z)
        return out
    if isinstance(sym, ProductSymbol):
        out = np.ones_like(z)
        for p in sym.factors:
            out = out * circle_eval(p, z)
        return out
    if isinstance(sym, ConjugatedSymbol):
        tau = MobiusMap.disk_involution(sym.alpha)
        return tau(circle_eval(sym.core, tau(z)))
    return sym(z)


def factor_polynomial(
    p,
    tol: float = DEFAULT_BOUNDARY_TOL,
    cluster_radius: float = DEFAULT_CLUSTER_RADIUS,
):
    """Split a polynomial as Blaschke part times rational outer part.

    Zeros strictly inside the disk become Blaschke zeros, with the
    compensating reflected factors absorbed into the outer part so that
    the product reproduces ``p``.  Zeros in the boundary band go to the
    outer part and a :class:`BoundaryZeroWarning` is emitted.
    """
    p = p if isinstance(p, Polynomial) else Polynomial(p)
    if p.is_zero:
        from .errors import ZeroPolynomial

        raise ZeroPolynomial("cannot factor the zero polynomial")
    leading = complex(p.coeffs[-1])
    if p.degree == 0:
        return BlaschkeProduct(), RationalOuter(constant=leading)

    rs = poly_roots(p, cluster_radius)
    part = roots_in_disk(rs, tol)
    if part.boundary:
        warnings.warn(
            f"zeros in the boundary band assigned to the outer part: "
            f"{[v for v, _ in part.boundary]}",
            BoundaryZeroWarning,
        )

    origin_order = 0
    blaschke_zeros = []
    conjugate_factors = []
    sign_flips = 0
    for v, m in part.inside:
        if abs(v) < 1e-9:
            origin_order += m
        else:
            blaschke_zeros.append((v, m))
            conjugate_factors.extend([v] * m)
            sign_flips += m
    exterior = []
    for v, m in part.boundary + part.outside:
        exterior.extend([v] * m)

    blaschke = BlaschkeProduct(origin_order=origin_order, zeros=blaschke_zeros)
    outer = RationalOuter(
        constant=leading * (-1.0) ** sign_flips,
        conjugate_factors=conjugate_factors,
        exterior_zeros=exterior,
    )
    return blaschke, outer


def _next_pow2(n: int) -> int:
    m = 1
    while m < n:
        m *= 2
    return m


def _sample(f, pts: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(f(pts), dtype=complex)
        if vals.shape == pts.shape:
            return vals
    except (TypeError, ValueError):
        pass
    return np.array([complex(f(z)) for z in pts], dtype=complex)


def taylor_coefficients(
    f,
    n: int,
    radius: float = 0.9,
    *,
    return_errors: bool = False,
    error_budget: float = 1e-8,
):
    """First ``n`` Taylor coefficients of a disk-analytic symbol.

    Samples ``f`` uniformly on the circle of the given radius (next power
    of two >= 4n points), inverts by FFT and rescales by radius**(-k).
    With ``return_errors`` a per-coefficient error estimate is returned:
    an aliasing bound from Cauchy estimates on a slightly larger sampling
    circle plus an FFT roundoff term.  Raises :class:`IllConditioned`
    when the radius**(-(n-1)) amplification alone exceeds the budget.
    """
    if n < 1:
        raise ValueError("need at least one coefficient")
    if not 0.0 < radius < 1.0:
        raise DomainError("sampling radius must lie in (0, 1)")
    m = _next_pow2(max(4 * n, 64))
    pts = radius * np.exp(2j * np.pi * np.arange(m) / m)
    vals = _sample(f, pts)
    scale = max(1.0, float(np.max(np.abs(vals))))
    eps = float(np.finfo(float).eps)
    if radius ** (-(n - 1)) * eps * scale > error_budget:
        raise IllConditioned(
            f"radius**-(n-1) amplification exceeds the error budget {error_budget}; "
            "raise the radius or lower n"
        )
    powers = radius ** (-np.arange(n, dtype=float))
    coeffs = (np.fft.fft(vals)[:n] / m) * powers
    if not return_errors:
        return coeffs
    r1 = 0.5 * (1.0 + radius)
    vals1 = _sample(f, r1 * np.exp(2j * np.pi * np.arange(m) / m))
    m1 = float(np.max(np.abs(vals1)))
    q = (radius / r1) ** m
    alias = m1 * (q / (1.0 - q)) * r1 ** (-np.arange(n, dtype=float))
    rounding = m * eps * scale * powers
    return coeffs, alias + rounding
