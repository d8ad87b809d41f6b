"""Explicit one-parameter semigroups and their truncated operator samples.

Symbol-level flows come in two families: multiplication flows (singular
inner, rational outer via exp(t log F), unimodular constants, and products
of these), whose operators are lower-triangular Toeplitz matrices and obey
the semigroup law exactly at truncation; and composition flows (elliptic
automorphism flows), realised as similarity orbits of exact diagonal
rotations so the operator law again holds to rounding.

An isometric composition operator with symbol fixing 0 embeds through its
Wold decomposition: constants stay put, and the wandering levels ride a
right-translation semigroup on a discretised half line.  Those operators
act on the space constants (+) cells x wandering-fiber, not on H^2_N
itself; the sample carries the isometric embedding of the resolved part of
H^2_N into that space so checks can compare against composition matrices.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadInverse,
    BranchFailure,
    DomainError,
    FractionalTime,
    HorizonOverflow,
    MissingTime,
    NonCommuting,
)
from .operators import (
    DEFAULT_RADIUS,
    TruncatedOperator,
    composition_matrix,
    toeplitz_matrix,
    wold_decompose,
)
from .symbols import (
    MobiusMap,
    PowerSeries,
    ProductSymbol,
    RationalOuter,
    SingularInner,
    SingularMeasure,
)

__all__ = [
    "HalfLineVector",
    "OperatorSemigroupSample",
    "ConstantFlow",
    "SingularInnerFlow",
    "OuterFlow",
    "EllipticFlow",
    "ProductFlow",
    "elliptic_flow",
    "singular_inner_flow",
    "outer_flow",
    "product_flow",
    "shift_semigroup_apply",
    "sample_multiplication_flow",
    "sample_elliptic_flow",
    "embed_isometric_composition",
    "conjugate_semigroup",
    "wold_comparison_defect",
    "conjugated_comparison_defect",
]


# --------------------------------------------------------------------------
# symbol-level flows
# --------------------------------------------------------------------------


def _series_log(f: np.ndarray, n: int) -> np.ndarray:
    """Taylor series of log f from the series of f, principal branch at 0."""
    f = np.asarray(f, dtype=complex)
    if abs(f[0]) < 1e-14:
        raise BranchFailure("cannot anchor log: series constant term vanishes")
    g = np.zeros(n, dtype=complex)
    g[0] = cmath.log(f[0])
    fpad = np.zeros(n, dtype=complex)
    fpad[: min(n, f.size)] = f[:n]
    for k in range(1, n):
        acc = k * fpad[k]
        for j in range(1, k):
            acc -= j * g[j] * fpad[k - j]
        g[k] = acc / (k * fpad[0])
    return g


def _series_exp(g: np.ndarray, n: int) -> np.ndarray:
    """Taylor series of exp g from the series of g."""
    g = np.asarray(g, dtype=complex)
    h = np.zeros(n, dtype=complex)
    h[0] = cmath.exp(g[0])
    for k in range(1, n):
        acc = 0.0 + 0.0j
        for j in range(1, k + 1):
            if j < g.size:
                acc += j * g[j] * h[k - j]
        h[k] = acc / k
    return h


class ConstantFlow:
    """t -> c**t for a nonzero constant, via the principal logarithm."""

    multiplicative = True

    def __init__(self, value):
        self.value = complex(value)
        if self.value == 0:
            raise BranchFailure("constant flow needs a nonzero value")
        self.log_value = cmath.log(self.value)
        self.isometric = abs(abs(self.value) - 1.0) < 1e-12
        self.descriptor = "constant-flow"

    def at(self, t: float) -> PowerSeries:
        return PowerSeries([cmath.exp(t * self.log_value)])


class SingularInnerFlow:
    """t -> the singular inner function of the measure scaled by t."""

    multiplicative = True
    isometric = True
    descriptor = "singular-inner-flow"

    def __init__(self, measure: SingularMeasure):
        self.measure = measure

    def at(self, t: float) -> SingularInner:
        if t < 0:
            raise DomainError("flow times are nonnegative")
        return SingularInner(self.measure.scaled(t))


class OuterFlow:
    """t -> exp(t log F) for a rational outer F, as a truncated power series.

    The branch is anchored by the principal logarithm of F(0); the series
    recurrences for log and exp make the time-1 member reproduce F exactly
    in its first n coefficients.
    """

    multiplicative = True
    isometric = False
    descriptor = "outer-flow"

    def __init__(self, outer: RationalOuter, n: int = 64):
        self.outer = outer
        self.n = n
        f = np.zeros(n, dtype=complex)
        p = outer.as_polynomial().coeffs
        f[: min(n, p.size)] = p[:n]
        self._log = _series_log(f, n)

    def at(self, t: float) -> PowerSeries:
        if t < 0:
            raise DomainError("flow times are nonnegative")
        return PowerSeries(_series_exp(t * self._log, self.n))


class EllipticFlow:
    """t -> tau_alpha . (rotation by theta t) . tau_alpha, the automorphism
    flow fixing alpha."""

    multiplicative = False
    descriptor = "elliptic-flow"

    def __init__(self, alpha, theta: float):
        self.alpha = complex(alpha)
        if abs(self.alpha) >= 1.0:
            raise DomainError("elliptic center must lie in the open disk")
        self.theta = float(theta)
        self.isometric = self.alpha == 0

    def at(self, t: float) -> MobiusMap:
        rot = MobiusMap(cmath.exp(1j * self.theta * t), 0.0, 0.0, 1.0)
        if self.alpha == 0:
            return rot
        tau = MobiusMap.disk_involution(self.alpha)
        return tau.compose(rot).compose(tau)


class ProductFlow:
    """Pointwise product of commuting multiplication flows."""

    multiplicative = True
    descriptor = "product-flow"

    def __init__(self, parts):
        for p in parts:
            if not getattr(p, "multiplicative", False):
                raise NonCommuting(
                    "product flows combine multiplication-type flows only; "
                    "composition flows do not commute with them"
                )
        self.parts = list(parts)
        self.isometric = all(p.isometric for p in self.parts)

    def at(self, t: float):
        if not self.parts:
            return PowerSeries([1.0])
        if len(self.parts) == 1:
            return self.parts[0].at(t)
        return ProductSymbol([p.at(t) for p in self.parts])


def elliptic_flow(alpha, theta: float, t: float) -> MobiusMap:
    return EllipticFlow(alpha, theta).at(t)


def singular_inner_flow(measure: SingularMeasure, t: float) -> SingularInner:
    return SingularInnerFlow(measure).at(t)


def outer_flow(outer: RationalOuter, t: float, n: int = 64) -> PowerSeries:
    return OuterFlow(outer, n).at(t)


def product_flow(parts) -> ProductFlow:
    return ProductFlow(parts)


# --------------------------------------------------------------------------
# discretised half line
# --------------------------------------------------------------------------


@dataclass
class HalfLineVector:
    """Cell-discretised element of L^2 of the half line with vector fibers.

    ``cells[c]`` holds the fiber value on [c h, (c+1) h); the squared norm
    is h times the sum of squared fiber norms.
    """

    grid_step: float
    cells: np.ndarray
    approximate: bool = False

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=complex)
        if cells.ndim == 1:
            cells = cells.reshape(-1, 1)
        if cells.ndim != 2:
            raise ValueError("cells must be a (horizon, fiber) array")
        self.cells = cells
        if self.grid_step <= 0:
            raise ValueError("grid step must be positive")

    @property
    def horizon(self) -> int:
        return self.cells.shape[0]

    @property
    def fiber_dim(self) -> int:
        return self.cells.shape[1]

    def norm(self) -> float:
        return math.sqrt(self.grid_step * float(np.sum(np.abs(self.cells) ** 2)))


def shift_semigroup_apply(
    v: HalfLineVector,
    t: float,
    *,
    allow_fractional: bool = False,
    mass_tol: float = 1e-13,
) -> HalfLineVector:
    """Right translation by t with zero fill.

    For t an integer multiple of the grid step the shift is exact and norm
    preserving; mass that would leave the horizon raises
    :class:`HorizonOverflow`.  Other times need ``allow_fractional`` and
    use linear cell interpolation, flagged approximate in the result.
    """
    if t < 0:
        raise DomainError("shift times are nonnegative")
    h = v.grid_step
    ratio = t / h
    k = int(round(ratio))
    out = np.zeros_like(v.cells)
    if abs(ratio - k) < 1e-12:
        if k == 0:
            return HalfLineVector(h, v.cells.copy(), v.approximate)
        if k >= v.horizon:
            if float(np.max(np.abs(v.cells))) > mass_tol:
                raise HorizonOverflow("shift pushes all mass past the horizon")
            return HalfLineVector(h, out, v.approximate)
        tail = v.cells[v.horizon - k :]
        if float(np.max(np.abs(tail))) > mass_tol:
            raise HorizonOverflow(
                "shifted mass would exceed the horizon; enlarge the horizon"
            )
        out[k:] = v.cells[: v.horizon - k]
        return HalfLineVector(h, out, v.approximate)
    if not allow_fractional:
        raise FractionalTime(
            f"t = {t} is not a multiple of the grid step {h}; "
            "pass allow_fractional=True for interpolated shifts"
        )
    k0 = int(math.floor(ratio))
    frac = ratio - k0
    tail_start = max(0, v.horizon - k0 - 1)
    if k0 + 1 >= v.horizon or float(np.max(np.abs(v.cells[tail_start:]))) > mass_tol:
        raise HorizonOverflow(
            "fractional shift would push mass past the horizon; enlarge the horizon"
        )
    for c in range(v.horizon - 1, -1, -1):
        acc = np.zeros(v.fiber_dim, dtype=complex)
        if 0 <= c - k0 < v.horizon:
            acc += (1.0 - frac) * v.cells[c - k0]
        if 0 <= c - k0 - 1 < v.horizon:
            acc += frac * v.cells[c - k0 - 1]
        out[c] = acc
    return HalfLineVector(h, out, True)


# --------------------------------------------------------------------------
# operator samples
# --------------------------------------------------------------------------


@dataclass
class OperatorSemigroupSample:
    """A semigroup sampled at finitely many times as matrices.

    ``embedding`` (when present) is an isometry from the resolved part of
    H^2_N into the sample's own space; ``resolved_basis`` lists the same
    resolved vectors inside H^2_N.  Flow samples act on H^2_N directly and
    carry neither.
    """

    times: list
    operators: list
    construction: str
    dim: int
    isometric: bool
    embedding: np.ndarray | None = None
    resolved_basis: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def operator_at(self, t: float) -> np.ndarray:
        for tt, op in zip(self.times, self.operators):
            if math.isclose(tt, t, rel_tol=0.0, abs_tol=1e-12):
                return op
        raise MissingTime(f"no operator sampled at t = {t}")

    def has_time(self, t: float) -> bool:
        return any(math.isclose(tt, t, rel_tol=0.0, abs_tol=1e-12) for tt in self.times)

    def test_vectors(self, max_vectors: int | None = None) -> np.ndarray:
        if self.embedding is not None:
            cols = self.embedding
        elif self.resolved_basis is not None:
            cols = self.resolved_basis
        else:
            cols = np.eye(self.dim, dtype=complex)
        if max_vectors is not None:
            cols = cols[:, :max_vectors]
        return cols


def sample_multiplication_flow(
    flow, times, n: int, radius: float = DEFAULT_RADIUS
) -> OperatorSemigroupSample:
    """Toeplitz matrices of a multiplication flow at the given times."""
    if not getattr(flow, "multiplicative", False):
        raise NonCommuting("expected a multiplication-type flow")
    ops = []
    for t in times:
        if t == 0:
            ops.append(np.eye(n, dtype=complex))
        else:
            ops.append(toeplitz_matrix(flow.at(t), n, radius).matrix)
    return OperatorSemigroupSample(
        times=list(times),
        operators=ops,
        construction=flow.descriptor,
        dim=n,
        isometric=flow.isometric,
        meta={"n": n, "flow": flow},
    )


def sample_elliptic_flow(
    alpha, theta: float, times, n: int, radius: float = DEFAULT_RADIUS
) -> OperatorSemigroupSample:
    """Operator sample of the elliptic automorphism flow fixing alpha.

    For alpha = 0 the operators are the exact diagonal rotations (unitary).
    Otherwise they are A diag A^{-1} with A the truncated composition
    matrix of the involution: an exact similarity orbit, which agrees with
    the compressed composition operators up to truncation leakage but
    satisfies the semigroup law to rounding.  Those operators are similar
    to unitaries, not isometric, and the sample says so.
    """
    alpha = complex(alpha)
    flow = EllipticFlow(alpha, theta)
    diag_t = lambda t: np.diag(np.exp(1j * theta * t * np.arange(n)))
    ops = []
    if alpha == 0:
        for t in times:
            ops.append(np.eye(n, dtype=complex) if t == 0 else diag_t(t))
        iso = True
    else:
        a = composition_matrix(MobiusMap.disk_involution(alpha), n, radius).matrix
        a_inv = np.linalg.inv(a)
        for t in times:
            ops.append(np.eye(n, dtype=complex) if t == 0 else a @ diag_t(t) @ a_inv)
        iso = False
    return OperatorSemigroupSample(
        times=list(times),
        operators=ops,
        construction=flow.descriptor,
        dim=n,
        isometric=iso,
        meta={"n": n, "alpha": alpha, "theta": theta},
    )


def sample_spiral_flow(
    conjugator: MobiusMap,
    log_multiplier: complex,
    times,
    n: int,
    radius: float = DEFAULT_RADIUS,
    construction: str = "linear-fractional-spiral-flow",
) -> OperatorSemigroupSample:
    """Operator sample of a flow diagonalised by a Mobius change of
    variable: C of (conjugator^-1 . scale(exp(t L)) . conjugator) realised
    as B diag(exp(j t L)) B^{-1} with B the truncated composition matrix
    of the conjugator.  Exact semigroup law; not isometric in general."""
    b = composition_matrix(conjugator, n, radius).matrix
    b_inv = np.linalg.inv(b)
    ops = []
    for t in times:
        if t == 0:
            ops.append(np.eye(n, dtype=complex))
        else:
            d = np.diag(np.exp(np.arange(n) * t * log_multiplier))
            ops.append(b @ d @ b_inv)
    return OperatorSemigroupSample(
        times=list(times),
        operators=ops,
        construction=construction,
        dim=n,
        isometric=False,
        meta={"n": n},
    )


def _cell_shift(horizon: int, k: int) -> np.ndarray:
    s = np.zeros((horizon, horizon), dtype=complex)
    if k < horizon:
        idx = np.arange(horizon - k)
        s[idx + k, idx] = 1.0
    return s


def embed_isometric_composition(
    psi,
    times,
    n: int,
    h: float,
    horizon: int | None = None,
    *,
    wold=None,
    comp: TruncatedOperator | None = None,
    radius: float = DEFAULT_RADIUS,
    rank_tol: float | None = None,
) -> OperatorSemigroupSample:
    """Embed C_psi (psi inner, psi(0) = 0, not an automorphism) into a
    strongly continuous semigroup sampled at the given times.

    The sample space is constants (+) (horizon cells) x (wandering fiber):
    the unitary part of the Wold decomposition is the constants, where the
    operator acts as the identity (the canonical phase, since C_psi fixes
    1), and the k-th image of a wandering vector rides as the indicator of
    the k-th unit block of cells.  Times must be multiples of the grid
    step h; the operators then are exact cell translations, so the
    semigroup law and isometry hold to rounding, and the time-k operator
    reproduces the k-th power of the composition matrix on the resolved
    subspace.
    """
    comp = comp or composition_matrix(psi, n, radius)
    wold = wold or wold_decompose(psi, n, radius=radius, comp=comp)
    d = wold.wandering_dim
    m = int(round(1.0 / h))
    if abs(m * h - 1.0) > 1e-12 or m < 1:
        raise ValueError("grid step must be 1/m for a positive integer m")
    ks = []
    for t in times:
        if t < 0:
            raise DomainError("sample times are nonnegative")
        k = t / h
        if abs(k - round(k)) > 1e-9:
            raise FractionalTime(
                f"sample time {t} is not a multiple of the grid step {h}"
            )
        ks.append(int(round(k)))
    n_levels = len(wold.levels)
    horizon = horizon if horizon is not None else 4 * n
    kmax = max(ks, default=0)
    if n_levels * m + kmax > horizon:
        raise HorizonOverflow(
            f"levels occupy {n_levels * m} cells and shifts add {kmax}; "
            f"horizon {horizon} is too small"
        )

    dim = 1 + horizon * d
    cols = [wold.unitary_basis[:, 0]]
    col_meta = [None]
    for lv, (basis, ids) in enumerate(zip(wold.levels, wold.chain_ids)):
        for j, i in enumerate(ids):
            cols.append(basis[:, j])
            col_meta.append((lv, i))
    resolved = np.column_stack(cols)

    embedding = np.zeros((dim, resolved.shape[1]), dtype=complex)
    embedding[0, 0] = 1.0
    root_h = math.sqrt(h)
    for cidx, tag in enumerate(col_meta):
        if tag is None:
            continue
        lv, i = tag
        for c in range(lv * m, (lv + 1) * m):
            embedding[1 + c * d + i, cidx] = root_h

    ops = []
    eye_d = np.eye(d, dtype=complex)
    for k in ks:
        v = np.zeros((dim, dim), dtype=complex)
        v[0, 0] = 1.0
        v[1:, 1:] = np.kron(_cell_shift(horizon, k), eye_d)
        ops.append(v)

    chain_loss = {}
    for lv, (ids, losses) in enumerate(zip(wold.chain_ids, wold.chain_losses)):
        for i, loss in zip(ids, losses):
            chain_loss[(lv, i)] = loss

    return OperatorSemigroupSample(
        times=list(times),
        operators=ops,
        construction="wold-shift",
        dim=dim,
        isometric=True,
        embedding=embedding,
        resolved_basis=resolved,
        meta={
            "n": n,
            "h": h,
            "horizon": horizon,
            "fiber_dim": d,
            "col_meta": col_meta,
            "chain_ids": wold.chain_ids,
            "chain_loss": chain_loss,
            "n_levels": n_levels,
        },
    )


def conjugate_semigroup(a, a_inv, sample: OperatorSemigroupSample, tol: float = 1e-8):
    """Conjugate a sampled semigroup by the pair (a, a_inv).

    ``a @ a_inv`` must be the identity within ``tol`` (spectral norm) or
    :class:`BadInverse` is raised.  Flow samples get their operators
    sandwiched; embedded (Wold) samples keep their operators and have
    their resolved H^2_N vectors moved through ``a`` instead, which is how
    conjugation acts on the comparison data.
    """
    a = a.matrix if isinstance(a, TruncatedOperator) else np.asarray(a, dtype=complex)
    a_inv = (
        a_inv.matrix if isinstance(a_inv, TruncatedOperator) else np.asarray(a_inv, dtype=complex)
    )
    gap = float(np.linalg.norm(a @ a_inv - np.eye(a.shape[0]), 2))
    if gap > tol:
        raise BadInverse(f"a @ a_inv deviates from the identity by {gap:.3e}")
    if sample.embedding is None:
        ops = []
        for t, op in zip(sample.times, sample.operators):
            ops.append(op.copy() if t == 0 else a @ op @ a_inv)
        return OperatorSemigroupSample(
            times=list(sample.times),
            operators=ops,
            construction=sample.construction + "+conjugated",
            dim=sample.dim,
            isometric=False,
            meta=dict(sample.meta, conjugated=True),
        )
    meta = dict(sample.meta, conjugated=True)
    return OperatorSemigroupSample(
        times=list(sample.times),
        operators=[op.copy() for op in sample.operators],
        construction=sample.construction + "+conjugated",
        dim=sample.dim,
        isometric=sample.isometric,
        embedding=sample.embedding.copy(),
        resolved_basis=a @ sample.resolved_basis,
        meta=meta,
    )


def _comparison_columns(sample, comp, k: int, chain_loss_budget: float, zero_tol: float):
    """Columns of the resolved basis on which the time-k operator must
    reproduce the k-th composition power: chains still alive k levels up
    without truncation loss, plus chains whose k-step image truncates away."""
    meta = sample.meta
    chain_ids = meta["chain_ids"]
    chain_loss = meta["chain_loss"]
    n_levels = meta["n_levels"]
    ck = np.linalg.matrix_power(comp.matrix, k) if k else np.eye(comp.n, dtype=complex)
    valid = [0]
    basis = meta.get("orig_resolved", None)
    p = sample.resolved_basis if basis is None else basis
    for cidx, tag in enumerate(meta["col_meta"]):
        if tag is None:
            continue
        lv, i = tag
        target = lv + k
        alive = (
            target < n_levels
            and i in chain_ids[target]
            and chain_loss.get((target, i), 1.0) <= chain_loss_budget
            and chain_loss.get((lv, i), 1.0) <= chain_loss_budget
        )
        if alive:
            valid.append(cidx)
        elif float(np.linalg.norm(ck @ p[:, cidx])) <= zero_tol:
            valid.append(cidx)
    return valid, ck


def wold_comparison_defect(
    sample: OperatorSemigroupSample,
    comp: TruncatedOperator,
    k: int,
    *,
    chain_loss_budget: float = 1e-8,
    zero_tol: float = 1e-9,
) -> float:
    """Spectral-norm gap between the sampled time-k operator and the k-th
    power of the composition matrix, both compressed to the resolved basis."""
    e = sample.embedding
    p = sample.resolved_basis
    valid, ck = _comparison_columns(sample, comp, k, chain_loss_budget, zero_tol)
    lhs = e.conj().T @ sample.operator_at(float(k)) @ e
    rhs = p.conj().T @ ck @ p
    diff = (lhs - rhs)[:, valid]
    return float(np.linalg.norm(diff, 2))


def conjugated_comparison_defect(
    sample: OperatorSemigroupSample,
    comp_phi: TruncatedOperator,
    k: int,
    *,
    chain_loss_budget: float = 1e-8,
    zero_tol: float = 1e-9,
) -> float:
    """For a conjugated Wold sample: gap of C_phi^k B - B M_k on valid
    columns, with B the conjugated resolved vectors and M_k the sampled
    operator compressed to resolved coordinates."""
    e = sample.embedding
    b = sample.resolved_basis
    valid, ck = _comparison_columns(sample, comp_phi, k, chain_loss_budget, zero_tol)
    mk = e.conj().T @ sample.operator_at(float(k)) @ e
    diff = (ck @ b - b @ mk)[:, valid]
    return float(np.linalg.norm(diff, 2))
