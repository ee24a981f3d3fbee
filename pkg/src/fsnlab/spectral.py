"""Dense symmetric eigensolver and the eigenpairs the selection rules consume.

A full cyclic-Jacobi decomposition is used instead of an iterative extremal
solver: the networks of interest are small, and reliable detection of
repeated eigenvalues matters more than asymptotic speed (several selection
rules are undefined when the relevant eigenvalue is not simple).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class SpectralError(ValueError):
    """Eigen-computation failed or a spectral precondition is violated."""


# Tolerance policies.  All are overridable per call; the defaults scale with
# the matrix (or vector) magnitude so unit-weight and weighted graphs behave
# alike.
def default_eps_gap(M: np.ndarray) -> float:
    return 1e-8 * max(1.0, float(np.abs(M).max()))


def default_eps_zero(v: np.ndarray) -> float:
    return 1e-8 * float(np.abs(v).max())


EPS_POS = 1e-10

_RESIDUAL_FACTOR = 1e-8
_SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class EigenPair:
    """One eigenvalue with its unit eigenvector.

    ``is_simple`` records whether the eigenvalue is numerically separated
    from the rest of the spectrum; constructions based on the eigenvector
    are undefined when it is False.
    """

    value: float
    vector: np.ndarray
    is_simple: bool = True

    def __post_init__(self):
        vec = np.asarray(self.vector, dtype=float)
        object.__setattr__(self, "vector", vec)
        nrm = np.linalg.norm(vec)
        if abs(nrm - 1.0) > 1e-10:
            raise SpectralError(f"eigenvector norm {nrm} is not 1 within 1e-10")


def sign_normalize(v: np.ndarray) -> np.ndarray:
    """Flip the global sign so the largest-magnitude entry is positive.

    The first index attaining the maximum magnitude breaks ties, which makes
    the convention idempotent and deterministic under repeated application.
    """
    v = np.asarray(v, dtype=float)
    k = int(np.argmax(np.abs(v)))
    return -v if v[k] < 0 else v.copy()


def jacobi_eigh(M: np.ndarray, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.

    Returns (eigenvalues ascending, eigenvectors as columns).  Deterministic:
    rotations are applied in a fixed row-cyclic order with a threshold that
    shrinks as the off-diagonal mass decays.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if M.shape != (n, n):
        raise SpectralError(f"matrix must be square, got shape {M.shape}")
    asym = float(np.abs(M - M.T).max()) if n else 0.0
    if asym > _SYMMETRY_TOL * max(1.0, float(np.abs(M).max())):
        raise SpectralError(f"matrix is not symmetric: |M - M^T| = {asym:.3e}")

    A = (M + M.T) / 2.0
    V = np.eye(n)
    if n == 1:
        return A.diagonal().copy(), V

    scale = float(np.linalg.norm(A, "fro"))
    if scale == 0.0:
        return np.zeros(n), V
    stop = 1e-14 * scale

    for sweep in range(max_sweeps):
        off = float(np.linalg.norm(A - np.diag(A.diagonal()), "fro"))
        if off <= stop:
            break
        # Rotations below this threshold are deferred to a later sweep.
        thresh = off / (n * n) if sweep < 3 else 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= thresh:
                    continue
                app, aqq = A[p, p], A[q, q]
                if abs(apq) <= 1e-300:
                    continue
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.hypot(1.0, tau))
                else:
                    t = -1.0 / (-tau + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rp = A[p, :].copy()
                rq = A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp = A[:, p].copy()
                cq = A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                A[p, q] = 0.0
                A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        raise SpectralError(f"Jacobi sweeps did not converge in {max_sweeps} sweeps")

    w = A.diagonal().copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def _simplicity(w: np.ndarray, idx: int, eps_gap: float) -> bool:
    lo_ok = idx == 0 or (w[idx] - w[idx - 1]) > eps_gap
    hi_ok = idx == len(w) - 1 or (w[idx + 1] - w[idx]) > eps_gap
    return lo_ok and hi_ok


def _check_residual(M: np.ndarray, pair: EigenPair) -> None:
    res = float(np.abs(M @ pair.vector - pair.value * pair.vector).max())
    bound = _RESIDUAL_FACTOR * max(1.0, float(np.abs(M).max()))
    if res > bound:
        raise SpectralError(f"eigen residual {res:.3e} exceeds {bound:.3e}")


def smallest_eigenpairs(M: np.ndarray, k: int,
                        eps_gap: float | None = None) -> list[EigenPair]:
    """The k smallest eigenpairs of a symmetric matrix, ascending."""
    M = np.asarray(M, dtype=float)
    if not 1 <= k <= M.shape[0]:
        raise SpectralError(f"k={k} outside 1..{M.shape[0]}")
    if eps_gap is None:
        eps_gap = default_eps_gap(M)
    w, V = jacobi_eigh(M)
    pairs = []
    for idx in range(k):
        pair = EigenPair(float(w[idx]), V[:, idx], _simplicity(w, idx, eps_gap))
        _check_residual(M, pair)
        pairs.append(pair)
    return pairs


def principal_pair_perturbed(L_B: np.ndarray,
                             eps_gap: float | None = None,
                             eps_pos: float = EPS_POS) -> EigenPair:
    """Smallest eigenpair of a leader-perturbed Laplacian, sign-fixed positive.

    For a connected network with at least one leader this eigenvalue is
    strictly positive and simple, and the eigenvector can be taken entrywise
    positive; violations of either property signal a bad input (disconnected
    network, no leader, or a non-Laplacian matrix) and raise.
    """
    if eps_gap is None:
        eps_gap = default_eps_gap(L_B)
    pair = smallest_eigenpairs(L_B, 1, eps_gap=eps_gap)[0]
    if pair.value <= eps_gap:
        raise SpectralError(
            f"smallest eigenvalue {pair.value:.3e} is not positive; "
            "the network is disconnected or has no leader")
    if not pair.is_simple:
        raise SpectralError("smallest eigenvalue is numerically repeated")
    vec = sign_normalize(pair.vector)
    if float(vec.min()) <= eps_pos:
        raise SpectralError(
            "eigenvector is not strictly positive; "
            "the network is disconnected or the matrix is not a perturbed Laplacian")
    return EigenPair(pair.value, vec, True)


def principal_pair_signed(L_Bs: np.ndarray,
                          eps_gap: float | None = None) -> EigenPair:
    """Smallest eigenpair of a signed perturbed Laplacian.

    Entries carry both signs; the global sign is fixed by
    :func:`sign_normalize`.  Requires a positive simple eigenvalue, which a
    structurally balanced wiring guarantees.
    """
    if eps_gap is None:
        eps_gap = default_eps_gap(L_Bs)
    pair = smallest_eigenpairs(L_Bs, 1, eps_gap=eps_gap)[0]
    if pair.value <= eps_gap:
        raise SpectralError(
            f"smallest eigenvalue {pair.value:.3e} is not positive; "
            "the wiring is unbalanced, disconnected, or leaderless")
    if not pair.is_simple:
        raise SpectralError("smallest eigenvalue is numerically repeated")
    return EigenPair(pair.value, sign_normalize(pair.vector), True)


def fiedler_pair(L: np.ndarray, eps_gap: float | None = None) -> EigenPair:
    """Second-smallest eigenpair of a graph Laplacian.

    Raises when the graph is disconnected (second eigenvalue numerically
    zero).  A repeated second eigenvalue is not an error: the pair comes
    back with ``is_simple`` False and the caller must treat vector-based
    constructions as undefined.
    """
    if eps_gap is None:
        eps_gap = default_eps_gap(L)
    if L.shape[0] < 2:
        raise SpectralError("Fiedler pair needs at least two nodes")
    pairs = smallest_eigenpairs(L, 2, eps_gap=eps_gap)
    lam2 = pairs[1]
    if lam2.value <= eps_gap:
        raise SpectralError(
            f"second eigenvalue {lam2.value:.3e} is numerically zero; "
            "the network is disconnected")
    return EigenPair(lam2.value, sign_normalize(lam2.vector), lam2.is_simple)


def entry_ratio(v: np.ndarray, i: int, j: int,
                eps_zero: float | None = None) -> float:
    """Ratio of eigenvector entries v[i]/v[j] with 1-based indices.

    Total by convention: a zero denominator yields a signed infinity
    carrying the numerator's sign, and 0/0 yields 1 (such pairs only occur
    inside regions whose edges are retained unconditionally).
    """
    v = np.asarray(v, dtype=float)
    if eps_zero is None:
        eps_zero = default_eps_zero(v)
    num, den = float(v[i - 1]), float(v[j - 1])
    num_zero = abs(num) <= eps_zero
    den_zero = abs(den) <= eps_zero
    if den_zero:
        if num_zero:
            return 1.0
        return math.inf if num > 0 else -math.inf
    if num_zero:
        return 0.0
    return num / den
