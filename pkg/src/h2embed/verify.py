"""Property checks over sampled operator semigroups.

Every check returns a :class:`VerificationRecord`: a named defect, the
threshold it was held to, witnesses for the worst offenders, and a pass
flag.  Thresholds are always parameters.  A check that does not apply to
a sample (isometry of a non-isometric flow, Wold reconstruction of an
automorphism) reports ``applicable=False`` and never fails.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AutomorphismInput, MissingTime
from .operators import TruncatedOperator, composition_matrix, wold_decompose
from .semigroups import (
    OperatorSemigroupSample,
    embed_isometric_composition,
    wold_comparison_defect,
)

__all__ = [
    "VerificationRecord",
    "check_semigroup_law",
    "check_isometry",
    "check_noncompactness_proxy",
    "check_strong_continuity",
    "check_wold_reconstruction",
]


@dataclass
class VerificationRecord:
    name: str
    max_defect: float
    threshold: float
    passed: bool
    witnesses: list = field(default_factory=list)
    applicable: bool = True
    details: dict = field(default_factory=dict)


def _inapplicable(name: str, threshold: float, reason: str) -> VerificationRecord:
    return VerificationRecord(
        name=name,
        max_defect=0.0,
        threshold=threshold,
        passed=True,
        applicable=False,
        details={"reason": reason},
    )


def _restrict(sample: OperatorSemigroupSample, mat: np.ndarray) -> np.ndarray:
    if sample.embedding is not None:
        return mat @ sample.embedding
    return mat


def check_semigroup_law(
    sample: OperatorSemigroupSample, pairs, tol: float
) -> VerificationRecord:
    """max over pairs (t, s) of the spectral norm of V(t+s) - V(t) V(s),
    restricted to the resolved subspace for embedded samples."""
    witnesses = []
    worst = 0.0
    for t, s in pairs:
        for needed in (t, s, t + s):
            if not sample.has_time(needed):
                raise MissingTime(f"law check needs an operator at t = {needed}")
        gap = sample.operator_at(t + s) - sample.operator_at(t) @ sample.operator_at(s)
        defect = float(np.linalg.norm(_restrict(sample, gap), 2))
        witnesses.append(((t, s), defect))
        worst = max(worst, defect)
    witnesses.sort(key=lambda w: -w[1])
    return VerificationRecord(
        "semigroup-law", worst, tol, worst <= tol, witnesses[:5]
    )


def check_isometry(
    sample: OperatorSemigroupSample, tol: float, max_vectors: int | None = None
) -> VerificationRecord:
    """max over sampled times and resolved test vectors of | ||V_t x|| - 1 |.

    Not applicable to samples that are not isometric by construction."""
    if not sample.isometric:
        return _inapplicable(
            "isometry", tol, "sample is not isometric by construction"
        )
    vecs = sample.test_vectors(max_vectors)
    witnesses = []
    worst = 0.0
    for t, op in zip(sample.times, sample.operators):
        norms = np.linalg.norm(op @ vecs, axis=0)
        defect = float(np.max(np.abs(norms - 1.0)))
        witnesses.append((f"t={t}", defect))
        worst = max(worst, defect)
    witnesses.sort(key=lambda w: -w[1])
    return VerificationRecord("isometry", worst, tol, worst <= tol, witnesses[:5])


def check_noncompactness_proxy(
    sample: OperatorSemigroupSample, tol: float, max_vectors: int | None = None
) -> VerificationRecord:
    """Certifies ||V_t e_n|| >= 1 - tol on the resolved orthonormal vectors:
    the uniform lower bound a compact operator cannot sustain."""
    if not sample.isometric:
        return _inapplicable(
            "noncompactness-proxy", tol, "sample is not isometric by construction"
        )
    vecs = sample.test_vectors(max_vectors)
    witnesses = []
    worst = 0.0
    for t, op in zip(sample.times, sample.operators):
        norms = np.linalg.norm(op @ vecs, axis=0)
        defect = float(np.max(1.0 - norms))
        witnesses.append((f"t={t}", defect))
        worst = max(worst, defect)
    witnesses.sort(key=lambda w: -w[1])
    return VerificationRecord(
        "noncompactness-proxy", max(worst, 0.0), tol, worst <= tol, witnesses[:5]
    )


def check_strong_continuity(
    sample: OperatorSemigroupSample,
    test_vectors: np.ndarray | None,
    tol: float,
    monotone_slack: float = 1e-10,
) -> VerificationRecord:
    """Along the sample's times sorted downward, ||V_t x - x|| must be
    nonincreasing (within the slack) and end below the tolerance."""
    times = sorted((t for t in sample.times if t > 0), reverse=True)
    if len(times) < 2:
        return _inapplicable(
            "strong-continuity", tol, "need at least two positive times"
        )
    if test_vectors is None:
        test_vectors = sample.test_vectors(4)
    test_vectors = np.atleast_2d(np.asarray(test_vectors, dtype=complex))
    if test_vectors.shape[0] != sample.dim:
        test_vectors = test_vectors.T
    witnesses = []
    worst = 0.0
    eye = np.eye(sample.dim, dtype=complex)
    for j in range(test_vectors.shape[1]):
        x = test_vectors[:, j]
        defects = [
            float(np.linalg.norm((sample.operator_at(t) - eye) @ x)) for t in times
        ]
        increase = max(
            (defects[i + 1] - defects[i] for i in range(len(defects) - 1)),
            default=0.0,
        )
        final = defects[-1]
        defect = max(final, increase)
        witnesses.append((f"vector {j}", defect))
        worst = max(worst, defect)
        if increase > monotone_slack:
            worst = max(worst, tol + increase)  # monotonicity violation fails outright
    witnesses.sort(key=lambda w: -w[1])
    return VerificationRecord(
        "strong-continuity", worst, tol, worst <= tol, witnesses[:5]
    )


def check_wold_reconstruction(
    psi,
    n: int,
    tol: float,
    *,
    h: float = 0.5,
    sample: OperatorSemigroupSample | None = None,
    wold=None,
    comp: TruncatedOperator | None = None,
) -> VerificationRecord:
    """Completeness, orthonormality and time-1 agreement of the Wold/shift
    embedding of C_psi.  Automorphism symbols are inapplicable (their
    composition operator is unitary: no wandering part to reconstruct)."""
    try:
        comp = comp or composition_matrix(psi, n)
        wold = wold or wold_decompose(psi, n, comp=comp)
    except AutomorphismInput as exc:
        return _inapplicable("wold-reconstruction", tol, str(exc))
    completeness_gap = abs(
        n - (1 + sum(wold.level_dims) + wold.residual_dim)
    )
    ortho = wold.orthonormality_defect
    if sample is None:
        sample = embed_isometric_composition(
            psi, (0.0, 1.0), n, h, wold=wold, comp=comp
        )
    agree = wold_comparison_defect(sample, comp, 1)
    worst = max(float(completeness_gap), ortho, agree)
    return VerificationRecord(
        "wold-reconstruction",
        worst,
        tol,
        worst <= tol,
        witnesses=[
            ("completeness", float(completeness_gap)),
            ("orthonormality", ortho),
            ("time-1 agreement", agree),
        ],
        details={"level_dims": wold.level_dims, "residual_dim": wold.residual_dim},
    )
