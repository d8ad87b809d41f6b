"""The embeddability decision engine.

Each decision function returns an :class:`EmbeddabilityReport` carrying a
verdict, a stable governing-result token naming the mathematical fact the
verdict rests on, optional notes and numeric details, and — whenever the
construction is concrete — a handle to the semigroup itself.

Governing-result tokens (also listed in the README):

==============================================  =========================================
token                                           meaning
==============================================  =========================================
inner-toeplitz-dichotomy                        an isometric analytic Toeplitz operator
                                                embeds iff its inner symbol is not a
                                                finite Blaschke product; the semigroup
                                                consists of Toeplitz operators iff the
                                                symbol is zero-free on the disk
outer-symbol-flow                               outer symbols embed via exp(t log F)
inner-outer-product-flow                        zero-free symbols embed into the product
                                                of their singular and outer flows
finite-codimension-obstruction                  a finite nonzero image codimension
                                                (the degree of the Blaschke part) blocks
                                                any embedding
blaschke-nonvanishing-open-question             Blaschke part times nonvanishing
                                                non-inner cofactor: open, undecided here
polynomial-zero-criterion                       a polynomial Toeplitz operator embeds
                                                iff the polynomial has no zero inside
                                                the disk
elliptic-automorphism-semiflow                  elliptic automorphism symbols embed into
                                                the rotation flow conjugated to their
                                                fixed point (composition semigroup)
similar-isometry-shift-embedding                composition operators similar to an
                                                isometry embed through the Wold/shift
                                                construction (never as a composition
                                                semigroup unless the symbol is an
                                                automorphism)
automorphism-semiflow                           non-elliptic disk automorphisms embed
                                                into automorphism semiflows
attractive-elliptic-spiral-condition            a linear fractional self-map with
                                                interior attracting fixed point embeds
                                                into a semiflow iff the spiral-length
                                                inequality holds
boundary-fixed-point-unscoped                   boundary attracting fixed points are
                                                outside this library's decision scope
weighted-isometry-embedding                     with weight an inner multiple of a unit
                                                resolving weight, weighted composition
                                                operators embed
==============================================  =========================================
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .blaschke import (
    conjugate_by_automorphism,
    fixed_points_in_disk,
    interior_fixed_point,
)
from .errors import (
    DegenerateSymbol,
    DomainError,
    NotInner,
    UnsupportedCase,
)
from .operators import (
    boundary_gram,
    composition_matrix,
)
from .polynomials import Polynomial, poly_roots, roots_in_disk
from .symbols import (
    BlaschkeProduct,
    ConjugatedSymbol,
    FactoredSymbol,
    MobiusMap,
    RationalOuter,
    SingularInner,
    factor_polynomial,
)
from .semigroups import (
    ConstantFlow,
    EllipticFlow,
    OuterFlow,
    ProductFlow,
    SingularInnerFlow,
    conjugate_semigroup,
    embed_isometric_composition,
)

__all__ = [
    "Verdict",
    "EmbeddabilityReport",
    "SpiralData",
    "spiral_length",
    "decide_toeplitz",
    "decide_polynomial_toeplitz",
    "decide_composition",
    "decide_lfm",
    "verify_weighted_isometry",
    "build_weight",
    "KoenigsFlow",
]


class Verdict(str, Enum):
    EMBEDDABLE = "Embeddable"
    NOT_EMBEDDABLE = "NotEmbeddable"
    UNKNOWN = "Unknown"
    OUT_OF_SCOPE = "OutOfScope"


@dataclass
class EmbeddabilityReport:
    verdict: Verdict
    governing_result: str
    semigroup: object | None = None
    semigroup_descriptor: str | None = None
    notes: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.semigroup is not None and self.semigroup_descriptor is None:
            self.semigroup_descriptor = getattr(
                self.semigroup, "descriptor", None
            ) or getattr(self.semigroup, "construction", type(self.semigroup).__name__)


@dataclass
class SpiralData:
    """Arc length of the logarithmic spiral t -> exp(t Log lambda), t >= 0."""

    multiplier: complex
    log_value: complex
    length: float


def spiral_length(lam) -> SpiralData:
    """Length of the canonical spiral of a multiplier in the punctured disk.

    The curve exp(t Log lambda) has speed |Log lambda| exp(t Re Log lambda),
    so the total length from 1 to 0 is |Log lambda| / (-Re Log lambda) in
    closed form; for real lambda in (0, 1) this is the straight segment of
    length 1.
    """
    lam = complex(lam)
    if lam == 0 or abs(lam) >= 1.0:
        raise DomainError("spiral multipliers lie in the punctured open disk")
    log_value = cmath.log(lam)
    return SpiralData(lam, log_value, abs(log_value) / (-log_value.real))


# --------------------------------------------------------------------------
# Toeplitz symbols
# --------------------------------------------------------------------------

_UNIMODULAR_TOL = 1e-12


def _blaschke_part(sym: FactoredSymbol):
    b = sym.blaschke
    return b if b is not None and b.degree > 0 else None


def _blaschke_phase(sym: FactoredSymbol) -> complex:
    b = sym.blaschke
    if b is not None and b.degree == 0:
        return cmath.exp(1j * b.rotation)
    return 1.0 + 0.0j


def _singular_part(sym: FactoredSymbol):
    s = sym.singular
    return s if s is not None and not s.is_trivial else None


def _outer_part(sym: FactoredSymbol):
    f = sym.outer
    if f is None:
        return None, 1.0 + 0.0j
    if f.is_constant:
        if abs(abs(f.constant) - 1.0) <= _UNIMODULAR_TOL:
            return None, f.constant  # unimodular constant: inner-trivial phase
        return f, 1.0 + 0.0j
    return f, 1.0 + 0.0j


def _flow_with_phase(parts, phase):
    if abs(phase - 1.0) > _UNIMODULAR_TOL:
        parts = [ConstantFlow(phase)] + parts
    if len(parts) == 1:
        return parts[0]
    return ProductFlow(parts)


def decide_toeplitz(
    sym: FactoredSymbol,
    *,
    declared_infinite_blaschke: bool = False,
    flow_order: int = 64,
) -> EmbeddabilityReport:
    """Embeddability of the analytic Toeplitz operator of a factored symbol.

    Case analysis on the inner-outer factorisation; for inner symbols the
    operator is an isometry and embeds exactly when the symbol is not a
    finite Blaschke product.  ``declared_infinite_blaschke`` marks the
    Blaschke part as infinite (no finite zero list can represent one);
    verdicts for that flag are report-only, with no constructed semigroup.
    """
    b = _blaschke_part(sym)
    s = _singular_part(sym)
    f, phase_outer = _outer_part(sym)
    phase = _blaschke_phase(sym) * phase_outer

    if not declared_infinite_blaschke and b is None and s is None and f is None:
        raise DegenerateSymbol("constant symbols have no embedding content")

    inner_only = f is None

    if declared_infinite_blaschke:
        if inner_only:
            return EmbeddabilityReport(
                Verdict.EMBEDDABLE,
                "inner-toeplitz-dichotomy",
                notes=[
                    "declared infinite Blaschke part: inner, not a finite Blaschke product",
                    "analytic-toeplitz-semigroup: no (symbol has zeros in the disk)",
                    "existence only: no truncated construction for infinite Blaschke data",
                ],
            )
        return EmbeddabilityReport(
            Verdict.UNKNOWN,
            "blaschke-nonvanishing-open-question",
            notes=[
                "declared infinite Blaschke part times a non-vanishing, non-inner cofactor"
            ],
        )

    if inner_only and b is not None and s is None:
        return EmbeddabilityReport(
            Verdict.NOT_EMBEDDABLE,
            "inner-toeplitz-dichotomy",
            notes=[
                "finite Blaschke product symbol",
                f"image codimension equals the degree {b.degree}: finite and nonzero",
            ],
            details={"blaschke_degree": b.degree},
        )

    if inner_only and s is not None:
        notes = [
            "analytic-toeplitz-semigroup: "
            + ("yes" if b is None else "no (symbol has zeros in the disk)")
        ]
        if b is None:
            flow = _flow_with_phase([SingularInnerFlow(s.measure)], phase)
            return EmbeddabilityReport(
                Verdict.EMBEDDABLE, "inner-toeplitz-dichotomy", semigroup=flow, notes=notes
            )
        notes.append("inner but not a finite Blaschke product")
        notes.append("existence via the isometric dichotomy; no flow of Toeplitz symbols")
        return EmbeddabilityReport(
            Verdict.EMBEDDABLE, "inner-toeplitz-dichotomy", notes=notes
        )

    if b is None and s is None:
        flow = _flow_with_phase([OuterFlow(f, flow_order)], phase)
        return EmbeddabilityReport(
            Verdict.EMBEDDABLE, "outer-symbol-flow", semigroup=flow
        )

    if b is None:
        flow = _flow_with_phase(
            [SingularInnerFlow(s.measure), OuterFlow(f, flow_order)], phase
        )
        return EmbeddabilityReport(
            Verdict.EMBEDDABLE,
            "inner-outer-product-flow",
            semigroup=flow,
            notes=["zero-free symbol: product of the singular and outer flows"],
        )

    if s is None:
        return EmbeddabilityReport(
            Verdict.NOT_EMBEDDABLE,
            "finite-codimension-obstruction",
            notes=[
                f"image codimension equals the Blaschke degree {b.degree}: "
                "finite and nonzero"
            ],
            details={"blaschke_degree": b.degree},
        )

    return EmbeddabilityReport(
        Verdict.UNKNOWN,
        "blaschke-nonvanishing-open-question",
        notes=["finite Blaschke part times a non-vanishing, non-inner cofactor"],
    )


def decide_polynomial_toeplitz(
    p, tol: float = 1e-9, flow_order: int = 64
) -> EmbeddabilityReport:
    """Embeddability of a polynomial Toeplitz operator: yes iff no zero
    lies strictly inside the disk.  Boundary-band zeros count as outside
    (they belong to the outer factor) but are flagged for caution."""
    p = p if isinstance(p, Polynomial) else Polynomial(p)
    if p.degree < 1:
        raise DegenerateSymbol("polynomial symbols of degree at least 1 only")
    part = roots_in_disk(poly_roots(p), tol)
    details = {
        "interior_zeros": [v for v, _ in part.inside],
        "boundary_zeros": [v for v, _ in part.boundary],
    }
    if part.inside:
        return EmbeddabilityReport(
            Verdict.NOT_EMBEDDABLE,
            "polynomial-zero-criterion",
            notes=["zeros inside the disk give a finite nonzero image codimension"],
            details=details,
        )
    import warnings as _w

    with _w.catch_warnings():
        _w.simplefilter("ignore")
        _, outer = factor_polynomial(p, tol)
    notes = []
    if part.boundary:
        notes.append(
            "boundary-band zeros assigned to the outer factor; "
            "classification is numerically fragile there"
        )
    return EmbeddabilityReport(
        Verdict.EMBEDDABLE,
        "polynomial-zero-criterion",
        semigroup=OuterFlow(outer, flow_order),
        notes=notes,
        details=details,
    )


# --------------------------------------------------------------------------
# composition symbols
# --------------------------------------------------------------------------


def _automorphism_report(alpha, multiplier) -> EmbeddabilityReport:
    theta = float(np.angle(multiplier))
    return EmbeddabilityReport(
        Verdict.EMBEDDABLE,
        "elliptic-automorphism-semiflow",
        semigroup=EllipticFlow(alpha, theta),
        notes=["semigroup of composition operators"],
        details={"fixed_point": alpha, "multiplier": multiplier, "theta": theta},
    )


def decide_composition(
    phi,
    tol: float = 1e-8,
    *,
    n: int = 16,
    h: float = 0.5,
    times=(0.0, 0.5, 1.0),
    build: bool = True,
) -> EmbeddabilityReport:
    """Embeddability of the composition operator of an inner symbol.

    The decidable class is the symbols similar to an isometry: inner with
    an interior fixed point.  Elliptic automorphisms embed into their
    rotation flow (a composition semigroup); any other inner symbol with
    an interior fixed point embeds through the Wold/shift construction,
    which is never a semigroup of composition operators.  Inner symbols
    without an interior fixed point are out of the decided scope.
    """
    if isinstance(phi, MobiusMap):
        if not phi.is_disk_automorphism(tol=max(tol, 1e-9)):
            raise NotInner("Mobius symbols must be disk automorphisms to be inner")
        fps = fixed_points_in_disk(phi)
        if not fps:
            return EmbeddabilityReport(
                Verdict.OUT_OF_SCOPE,
                "automorphism-semiflow",
                notes=[
                    "automorphism without interior fixed point: semiflow exists, "
                    "construction referenced to the automorphism-flow literature"
                ],
            )
        alpha, mult = fps[0]
        return _automorphism_report(alpha, mult)

    if isinstance(phi, BlaschkeProduct):
        if phi.degree == 0:
            raise DegenerateSymbol("constant symbols have no embedding content")
        if phi.degree == 1:
            a, b, c, d = _mobius_of_degree_one(phi)
            return decide_composition(MobiusMap(a, b, c, d), tol, n=n, h=h, times=times, build=build)
        fps = fixed_points_in_disk(phi)
        if not fps:
            return EmbeddabilityReport(
                Verdict.OUT_OF_SCOPE,
                "boundary-fixed-point-unscoped",
                notes=["no interior fixed point: not similar to an isometry"],
            )
        alpha, mult = fps[0]
        psi = phi if abs(alpha) < 1e-12 else conjugate_by_automorphism(phi, alpha)
        report = EmbeddabilityReport(
            Verdict.EMBEDDABLE,
            "similar-isometry-shift-embedding",
            notes=[
                "not a semigroup of composition operators",
                "symbol is not injective",
            ],
            details={"fixed_point": alpha, "multiplier": mult},
        )
        if build:
            sample = embed_isometric_composition(psi, times, n, h)
            if abs(alpha) >= 1e-12:
                a_mat = composition_matrix(
                    MobiusMap.disk_involution(alpha), n
                ).matrix
                sample = conjugate_semigroup(a_mat, np.linalg.inv(a_mat), sample)
            report.semigroup = sample
            report.semigroup_descriptor = sample.construction
        return report

    if isinstance(phi, SingularInner):
        g = boundary_gram(phi, 3)
        if float(np.max(np.abs(g - np.eye(4)))) > max(tol, 1e-8):
            raise NotInner("boundary Gram of the symbol deviates from the identity")
        alpha = interior_fixed_point(phi, phi.derivative)
        if alpha is None:
            return EmbeddabilityReport(
                Verdict.OUT_OF_SCOPE,
                "boundary-fixed-point-unscoped",
                notes=["no interior fixed point found: not similar to an isometry"],
            )
        mult = complex(np.asarray(phi.derivative(alpha)))
        psi = phi if abs(alpha) < 1e-12 else ConjugatedSymbol(phi, alpha)
        report = EmbeddabilityReport(
            Verdict.EMBEDDABLE,
            "similar-isometry-shift-embedding",
            notes=[
                "not a semigroup of composition operators",
                "symbol is not injective",
            ],
            details={"fixed_point": alpha, "multiplier": mult},
        )
        if build:
            sample = embed_isometric_composition(psi, times, n, h)
            if abs(alpha) >= 1e-12:
                a_mat = composition_matrix(MobiusMap.disk_involution(alpha), n).matrix
                sample = conjugate_semigroup(a_mat, np.linalg.inv(a_mat), sample)
            report.semigroup = sample
            report.semigroup_descriptor = sample.construction
        return report

    raise TypeError(
        "composition verdicts cover Blaschke products, Mobius automorphisms "
        "and singular inner symbols"
    )


def _mobius_of_degree_one(b: BlaschkeProduct):
    """Coefficients of the degree-1 Blaschke product as a Mobius map."""
    phase = cmath.exp(1j * b.rotation)
    if b.origin_order == 1:
        return phase, 0.0, 0.0, 1.0
    (alpha, _), = b.zeros
    if b.canonical_phases:
        phase *= abs(alpha) / alpha
    return -phase, phase * alpha, -np.conj(alpha), 1.0


# --------------------------------------------------------------------------
# linear fractional symbols (semiflow-level decision)
# --------------------------------------------------------------------------


class KoenigsFlow:
    """Semiflow of a linear fractional map with interior attracting fixed
    point: diagonalise between the two fixed points, run the spiral there."""

    multiplicative = False
    descriptor = "linear-fractional-spiral-flow"

    def __init__(self, alpha, beta, multiplier):
        self.alpha = complex(alpha)
        self.beta = beta  # complex or None for infinity
        self.log_multiplier = cmath.log(complex(multiplier))
        if beta is None:
            self._m = MobiusMap(1.0, -self.alpha, 0.0, 1.0)
        else:
            self._m = MobiusMap(1.0, -self.alpha, -1.0 / complex(beta), 1.0)

    def at(self, t: float) -> MobiusMap:
        scale = MobiusMap(cmath.exp(t * self.log_multiplier), 0.0, 0.0, 1.0)
        return self._m.inverse().compose(scale).compose(self._m)


def decide_lfm(m: MobiusMap, tol: float = 1e-9) -> EmbeddabilityReport:
    """Embeddability of a linear fractional self-map into a semiflow of
    analytic self-maps.

    Automorphisms always embed.  An attractive elliptic map (interior
    attracting fixed point alpha, repulsive fixed point beta outside the
    open disk) embeds iff |conj(alpha) - 1/beta| * l <= |phi'(alpha)| *
    |1 - alpha/beta| with l the canonical spiral length of the multiplier.
    Maps with a boundary attracting fixed point are out of decision scope.
    """
    fp = m.fixed_point_polynomial()
    if fp.is_zero:
        return EmbeddabilityReport(
            Verdict.EMBEDDABLE,
            "automorphism-semiflow",
            semigroup=EllipticFlow(0.0, 0.0),
            notes=["identity map"],
        )

    finite_fixed = [v for v, _ in poly_roots(fp).roots] if fp.degree >= 1 else []
    has_infinity = fp.degree < 2  # degree drop: one fixed point escaped to infinity

    if m.is_disk_automorphism(tol=max(tol, 1e-9)):
        interior = [v for v in finite_fixed if abs(v) < 1.0 - tol]
        if interior:
            alpha = interior[0]
            return _automorphism_report(alpha, complex(m.derivative(alpha)))
        return EmbeddabilityReport(
            Verdict.EMBEDDABLE,
            "automorphism-semiflow",
            notes=[
                "hyperbolic or parabolic automorphism: semiflow exists, "
                "construction referenced to the automorphism-flow literature"
            ],
        )

    interior = [v for v in finite_fixed if abs(v) < 1.0 - tol]
    if not interior:
        return EmbeddabilityReport(
            Verdict.OUT_OF_SCOPE,
            "boundary-fixed-point-unscoped",
            notes=["attracting fixed point on the boundary: criterion not restated here"],
        )
    if len(interior) > 1:
        return EmbeddabilityReport(
            Verdict.OUT_OF_SCOPE,
            "boundary-fixed-point-unscoped",
            notes=["two interior fixed points: numerically inconsistent self-map"],
        )
    alpha = interior[0]
    multiplier = complex(m.derivative(alpha))
    others = [v for v in finite_fixed if abs(v - alpha) > 1e-9]
    beta = others[0] if others else (None if has_infinity else None)

    spiral = spiral_length(multiplier)
    inv_beta = 0.0 if beta is None else 1.0 / beta
    lhs = abs(np.conj(alpha) - inv_beta) * spiral.length
    rhs = abs(multiplier) * abs(1.0 - alpha * inv_beta)
    details = {
        "alpha": alpha,
        "beta": beta if beta is not None else math.inf,
        "multiplier": multiplier,
        "spiral_length": spiral.length,
        "lhs": lhs,
        "rhs": rhs,
    }
    if lhs <= rhs + tol:
        return EmbeddabilityReport(
            Verdict.EMBEDDABLE,
            "attractive-elliptic-spiral-condition",
            semigroup=KoenigsFlow(alpha, beta, multiplier),
            notes=["spiral condition holds"],
            details=details,
        )
    return EmbeddabilityReport(
        Verdict.NOT_EMBEDDABLE,
        "attractive-elliptic-spiral-condition",
        notes=["spiral condition fails: not embeddable into a semiflow"],
        details=details,
    )


# --------------------------------------------------------------------------
# weighted composition
# --------------------------------------------------------------------------


def verify_weighted_isometry(w, phi, n_max: int, samples: int = 2048) -> dict:
    """Circle-quadrature check of the weighted-isometry conditions:
    unit weight norm and orthogonality of w to w phi^n for n = 1..n_max."""
    from .symbols import circle_eval

    zeta = np.exp(2j * np.pi * (np.arange(samples) + 0.5) / samples)
    wv = np.asarray(circle_eval(w, zeta), dtype=complex)
    pv = np.asarray(circle_eval(phi, zeta), dtype=complex)
    w2 = np.abs(wv) ** 2
    norm_defect = abs(math.sqrt(float(np.mean(w2))) - 1.0)
    per_n = []
    cur = np.ones_like(pv)
    for _ in range(n_max):
        cur = cur * pv
        per_n.append(abs(complex(np.mean(w2 * np.conj(cur)))))
    return {
        "norm_defect": norm_defect,
        "max_orthogonality_defect": max(per_n) if per_n else 0.0,
        "per_n": per_n,
    }


def build_weight(b: BlaschkeProduct, phi, tol: float = 1e-9) -> BlaschkeProduct:
    """Weight making the weighted composition operator an isometry with
    infinite-codimension image, for symbols fixing the origin.

    With phi(0) = 0 the unit resolving factor can be taken constant, so
    the weight is the Blaschke product itself; each of its zeros
    contributes a reproducing kernel orthogonal to the operator's image.
    Symbols with phi(0) != 0 are unsupported (the general resolving factor
    has no construction here).
    """
    f0 = complex(np.asarray(phi(np.zeros(1, dtype=complex)))[0])
    if abs(f0) > tol:
        raise UnsupportedCase(
            "weight construction implemented only for symbols fixing the origin"
        )
    return b
