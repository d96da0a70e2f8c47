"""Dense eigendecomposition of general complex matrices.

Thin wrapper over LAPACK (scipy.linalg.eig) that returns left and right
eigenvectors together, sorts the spectrum by (Re, Im), and rescales the
pairs to biorthonormality <l_i|r_j> = delta_ij where the eigenvalues are
simple.  The relative residual max_i |A r_i - lambda_i r_i| / |A|_F is
reported so callers can reject bad decompositions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..errors import DomainError, YangLeeError


class EigenDecompositionError(YangLeeError):
    pass


@dataclass
class EigenSystem:
    """values[i] with right_vectors[:, i] and left_vectors[:, i].

    Left vectors are stored as ordinary column vectors; the left
    eigenrelation is left_vectors[:, i].conj().T @ A = values[i] * (...).
    """

    values: np.ndarray
    right_vectors: np.ndarray
    left_vectors: np.ndarray
    residual: float


def dense_eig(a) -> EigenSystem:
    """Eigendecomposition with eigenvalues sorted by real part, then imaginary."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DomainError("dense_eig needs a square matrix of dimension >= 1")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix entries must be finite")
    try:
        values, vl, vr = scipy.linalg.eig(a, left=True, right=True)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise EigenDecompositionError(
            f"eigendecomposition failed for dimension {a.shape[0]}: {exc}"
        ) from exc
    order = np.lexsort((values.imag, values.real))
    values = values[order]
    vl = vl[:, order]
    vr = vr[:, order]
    vr = vr / np.linalg.norm(vr, axis=0)
    norm_a = np.linalg.norm(a)
    if norm_a == 0.0:
        residual = 0.0
    else:
        residual = float(
            np.max(np.linalg.norm(a @ vr - vr * values[None, :], axis=0)) / norm_a
        )
    if not np.isfinite(residual) or (a.shape[0] <= 5000 and residual > 1e-10):
        raise EigenDecompositionError(
            f"residual {residual:.3e} too large for dimension {a.shape[0]}"
        )
    # Biorthonormalize pairwise; near-defective pairs (|<l|r>| ~ 0) are left as-is.
    overlap = np.sum(vl.conj() * vr, axis=0)
    safe = np.abs(overlap) > 1e-13
    vr[:, safe] = vr[:, safe] / overlap[safe][None, :]
    return EigenSystem(values=values, right_vectors=vr, left_vectors=vl,
                       residual=residual)
