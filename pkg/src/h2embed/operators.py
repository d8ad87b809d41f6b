"""Truncated matrix models of operators on H^2_N = span{1, z, ..., z^(N-1)}.

All operators are written in the monomial coordinate basis, where the H^2
inner product is the plain l^2 dot product of coefficient vectors.  A
composition operator is stored compressed, P_N C_phi restricted to H^2_N;
isometry is never asserted through the compressed matrix but through the
truncation-free boundary Gram matrix of the symbol powers.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import AutomorphismInput, IllConditioned, IsometryDefect
from .symbols import (
    BlaschkeProduct,
    MobiusMap,
    _next_pow2,
    _sample,
    circle_eval,
    taylor_coefficients,
)

__all__ = [
    "TruncatedOperator",
    "WoldDecomposition",
    "composition_matrix",
    "toeplitz_matrix",
    "weighted_composition_matrix",
    "kernel_vector",
    "boundary_gram",
    "image_orthocomplement_dim",
    "wold_decompose",
]

DEFAULT_RADIUS = 0.9
DEFAULT_RANK_TOL = 1e-8


@dataclass
class TruncatedOperator:
    """N x N matrix acting on Taylor coefficient vectors of length N."""

    n: int
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.shape != (self.n, self.n):
            raise ValueError("matrix shape does not match the truncation order")

    def apply(self, vec):
        return self.matrix @ np.asarray(vec, dtype=complex)

    def __matmul__(self, other):
        if isinstance(other, TruncatedOperator):
            return TruncatedOperator(self.n, self.matrix @ other.matrix)
        return self.matrix @ other


def _amplification_guard(radius: float, n: int, scale: float, budget: float = 1e-8):
    eps = float(np.finfo(float).eps)
    if radius ** (-(n - 1)) * eps * max(1.0, scale) > budget:
        raise IllConditioned(
            "coefficient extraction amplification exceeds the error budget; "
            "raise the radius or lower the truncation order"
        )


def _coeff_grid(n: int, radius: float):
    m = _next_pow2(max(4 * n, 64))
    pts = radius * np.exp(2j * np.pi * np.arange(m) / m)
    powers = radius ** (-np.arange(n, dtype=float))
    return m, pts, powers


def _coeffs_from_samples(samples: np.ndarray, n: int, powers: np.ndarray):
    return (np.fft.fft(samples)[:n] / samples.size) * powers


def composition_matrix(phi, n: int, radius: float = DEFAULT_RADIUS) -> TruncatedOperator:
    """Compressed composition operator: column j holds the Taylor
    coefficients (below degree n) of phi**j."""
    m, pts, powers = _coeff_grid(n, radius)
    vals = _sample(phi, pts)
    _amplification_guard(radius, n, float(np.max(np.abs(vals))))
    out = np.zeros((n, n), dtype=complex)
    out[0, 0] = 1.0
    cur = np.ones_like(vals)
    for j in range(1, n):
        cur = cur * vals
        out[:, j] = _coeffs_from_samples(cur, n, powers)
    return TruncatedOperator(n, out)


def toeplitz_matrix(phi, n: int, radius: float = DEFAULT_RADIUS) -> TruncatedOperator:
    """Multiplication by an H^infinity symbol: lower-triangular Toeplitz with
    first column the Taylor coefficients of phi."""
    c = taylor_coefficients(phi, n, radius)
    first_row = np.zeros(n, dtype=complex)
    first_row[0] = c[0]
    return TruncatedOperator(n, scipy.linalg.toeplitz(c, first_row))


def weighted_composition_matrix(
    w, phi, n: int, radius: float = DEFAULT_RADIUS
) -> TruncatedOperator:
    """Column j holds the Taylor coefficients of w * phi**j."""
    m, pts, powers = _coeff_grid(n, radius)
    wv = _sample(w, pts)
    pv = _sample(phi, pts)
    _amplification_guard(radius, n, float(np.max(np.abs(wv))) * max(1.0, float(np.max(np.abs(pv)))))
    out = np.zeros((n, n), dtype=complex)
    cur = wv.copy()
    out[:, 0] = _coeffs_from_samples(cur, n, powers)
    for j in range(1, n):
        cur = cur * pv
        out[:, j] = _coeffs_from_samples(cur, n, powers)
    return TruncatedOperator(n, out)


def kernel_vector(lam, n: int) -> np.ndarray:
    """Coefficient vector of the reproducing kernel at lam: (1, conj(lam), ...)."""
    lam = complex(lam)
    if abs(lam) >= 1.0:
        from .errors import DomainError

        raise DomainError("kernel points must lie in the open disk")
    return np.conj(lam) ** np.arange(n)


def boundary_gram(phi, d: int, samples: int = 2048) -> np.ndarray:
    """(d+1) x (d+1) Gram matrix of {phi^0, ..., phi^d} by circle quadrature.

    For an inner phi fixing the origin this is the identity, which is the
    truncation-free isometry test for the induced composition operator.
    The quadrature grid is offset by half a step so atoms of singular
    inner symbols at common angles are never hit.
    """
    if samples < 1024 or (samples & (samples - 1)) != 0:
        raise ValueError("sample count must be a power of two, at least 1024")
    zeta = np.exp(2j * np.pi * (np.arange(samples) + 0.5) / samples)
    vals = np.asarray(circle_eval(phi, zeta), dtype=complex)
    powers = [np.ones_like(vals)]
    for _ in range(d):
        powers.append(powers[-1] * vals)
    g = np.empty((d + 1, d + 1), dtype=complex)
    for i in range(d + 1):
        for j in range(i, d + 1):
            g[i, j] = np.mean(powers[i] * np.conj(powers[j]))
            g[j, i] = np.conj(g[i, j])
    return g


def image_orthocomplement_dim(op: TruncatedOperator, tol: float = DEFAULT_RANK_TOL) -> int:
    """n minus the numerical rank (singular values below tol * sigma_max dropped)."""
    s = scipy.linalg.svdvals(op.matrix)
    if s.size == 0 or s[0] == 0.0:
        return op.n
    return int(op.n - np.count_nonzero(s > tol * s[0]))


@dataclass
class WoldDecomposition:
    """Wandering-subspace picture of an isometric composition operator at
    truncation order n.

    The unitary part is the constants; ``levels[k]`` holds an orthonormal
    basis of the k-th image of the wandering subspace that is still
    resolvable inside H^2_n (``levels[0]`` is the wandering basis itself).
    ``chain_ids[k]`` records which wandering vector each column continues,
    and ``chain_losses[k]`` the cumulative norm lost to truncation along
    that chain.  Directions that fell below the retention threshold are
    counted in ``residual_dim``.
    """

    n: int
    unitary_basis: np.ndarray
    wandering_basis: np.ndarray
    levels: list
    chain_ids: list
    chain_losses: list
    residual_dim: int
    orthonormality_defect: float
    meta: dict = field(default_factory=dict)

    @property
    def wandering_dim(self) -> int:
        return self.wandering_basis.shape[1]

    @property
    def level_dims(self) -> list:
        return [lv.shape[1] for lv in self.levels]

    def collected_basis(self) -> np.ndarray:
        return np.column_stack([self.unitary_basis] + list(self.levels))


def _wandering_basis(comp: np.ndarray, rank_tol: float) -> np.ndarray:
    """Orthonormal basis of the orthocomplement of the column space,
    swept along the coordinate directions so structured inputs keep their
    monomial basis vectors."""
    n = comp.shape[0]
    u, s, _ = scipy.linalg.svd(comp)
    rank = int(np.count_nonzero(s > rank_tol * s[0])) if s.size and s[0] > 0 else 0
    col = u[:, :rank]
    proj = np.eye(n, dtype=complex) - col @ col.conj().T
    basis = []
    for idx in range(n):
        v = proj[:, idx].copy()
        for b in basis:
            v -= b * (b.conj() @ v)
        nrm = float(np.linalg.norm(v))
        if nrm > 1e-7:
            basis.append(v / nrm)
        if len(basis) == n - rank:
            break
    return np.column_stack(basis) if basis else np.zeros((n, 0), dtype=complex)


def wold_decompose(
    psi,
    n: int,
    *,
    gram_tol: float = 1e-6,
    retention: float = 0.5,
    rank_tol: float = DEFAULT_RANK_TOL,
    gram_degree: int = 4,
    gram_samples: int = 2048,
    radius: float = DEFAULT_RADIUS,
    comp: TruncatedOperator | None = None,
) -> WoldDecomposition:
    """Wold decomposition data for C_psi at truncation order n.

    ``psi`` must be inner with psi(0) = 0 (certified through the boundary
    Gram matrix; deviation raises :class:`IsometryDefect`) and must not be
    an automorphism (degree-1 Blaschke products and rotation-like symbols
    raise :class:`AutomorphismInput` — a unitary has no wandering part).

    ``rank_tol`` sets the resolution of the wandering subspace.  For
    monomial-like symbols the compressed image is rank deficient exactly;
    for generic symbols the compression of an infinite-codimension image
    is full rank with geometrically decaying singular values, so a coarser
    tolerance (1e-3, say) is needed to resolve wandering directions
    against truncation.
    """
    g = boundary_gram(psi, gram_degree, gram_samples)
    defect = float(np.max(np.abs(g - np.eye(gram_degree + 1))))
    if defect > gram_tol:
        raise IsometryDefect(
            f"boundary Gram deviates from the identity by {defect:.3e}; "
            "the symbol is not inner with a fixed origin (or quadrature is too coarse)"
        )
    if isinstance(psi, BlaschkeProduct) and psi.degree == 1:
        raise AutomorphismInput("degree-1 Blaschke products are automorphisms")
    comp = comp or composition_matrix(psi, n, radius)
    c = comp.matrix
    if not isinstance(psi, BlaschkeProduct) and abs(c[1, 1]) >= 1.0 - 1e-9:
        raise AutomorphismInput("|psi'(0)| is not below 1: rotation-like symbol")

    w = _wandering_basis(c, rank_tol)
    if w.shape[1] == 0:
        raise AutomorphismInput("no wandering directions at this truncation")

    e0 = np.zeros((n, 1), dtype=complex)
    e0[0, 0] = 1.0
    collected = [e0[:, 0]]
    collected.extend(w[:, i] for i in range(w.shape[1]))

    levels = [w]
    chain_ids = [list(range(w.shape[1]))]
    chain_losses = [[0.0] * w.shape[1]]
    current = [(i, w[:, i], 0.0) for i in range(w.shape[1])]
    while current and len(levels) < n:
        nxt = []
        cols, ids, losses = [], [], []
        for i, v, loss in current:
            u = c @ v
            for _ in range(2):  # re-orthogonalise for stability
                for b in collected:
                    u = u - b * (b.conj() @ u)
            nrm = float(np.linalg.norm(u))
            if nrm < retention:
                continue
            u = u / nrm
            new_loss = loss + max(0.0, 1.0 - nrm)
            cols.append(u)
            ids.append(i)
            losses.append(new_loss)
            nxt.append((i, u, new_loss))
            collected.append(u)
        if not cols:
            break
        levels.append(np.column_stack(cols))
        chain_ids.append(ids)
        chain_losses.append(losses)
        current = nxt

    total = sum(lv.shape[1] for lv in levels)
    q = np.column_stack(collected)
    ortho_defect = float(np.max(np.abs(q.conj().T @ q - np.eye(q.shape[1]))))
    return WoldDecomposition(
        n=n,
        unitary_basis=e0,
        wandering_basis=w,
        levels=levels,
        chain_ids=chain_ids,
        chain_losses=chain_losses,
        residual_dim=n - 1 - total,
        orthonormality_defect=ortho_defect,
        meta={"gram_defect": defect, "rank_tol": rank_tol, "retention": retention},
    )
