"""
Subspace Comparison - evaluation/subspace.py

Principal angles between two k-dimensional subspaces of R^d: orthonormalize
both bases (QR), take the singular values of Q_u^T Q_w, clamp them to
[0, 1] and map through arccos. The maximum principal angle is
arccos(sigma_min).
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from egop.gradient import EgopEstimate
from errors import ConfigError, DimensionMismatch, RankDeficientBasis

from logger_config import get_logger
logger = get_logger(__name__)

RANK_TOL = 1e-10
TIE_TOL = 1e-12


@dataclass(frozen=True)
class SubspaceBasis:
    columns: np.ndarray
    flags: tuple = field(default=())

    def __post_init__(self):
        columns = np.asarray(self.columns, dtype=float)
        if columns.ndim == 1:
            columns = columns.reshape(-1, 1)
        object.__setattr__(self, "columns", columns)

    @property
    def d(self) -> int:
        return self.columns.shape[0]

    @property
    def k(self) -> int:
        return self.columns.shape[1]

    @property
    def ill_defined(self) -> bool:
        return "eigenvalue_tie" in self.flags


@dataclass(frozen=True)
class PrincipalAngleReport:
    angles: np.ndarray

    @property
    def max_angle(self) -> float:
        return float(self.angles[-1])


def _orthonormal(basis: SubspaceBasis) -> np.ndarray:
    A = basis.columns
    if A.shape[1] > A.shape[0]:
        raise RankDeficientBasis(f"{A.shape[1]} vectors cannot be independent in R^{A.shape[0]}")
    sigma = scipy.linalg.svdvals(A)
    if sigma.size == 0 or sigma[0] == 0 or sigma[-1] <= RANK_TOL * max(1.0, sigma[0]):
        raise RankDeficientBasis(f"Basis of {A.shape[1]} columns is rank deficient (sigma_min={sigma[-1] if sigma.size else 0:.3g})")
    Q, _ = scipy.linalg.qr(A, mode="economic")
    return Q


def principal_angles(U, W) -> PrincipalAngleReport:
    U = U if isinstance(U, SubspaceBasis) else SubspaceBasis(U)
    W = W if isinstance(W, SubspaceBasis) else SubspaceBasis(W)
    if U.d != W.d or U.k != W.k:
        raise DimensionMismatch(f"Subspaces differ in shape: {U.d}x{U.k} vs {W.d}x{W.k}")
    D = _orthonormal(U).T @ _orthonormal(W)
    sigma = np.clip(scipy.linalg.svdvals(D), 0.0, 1.0)
    # descending singular values give ascending angles
    return PrincipalAngleReport(angles=np.arccos(np.sort(sigma)[::-1]))


def max_principal_angle(U, W) -> float:
    return principal_angles(U, W).max_angle


def top_eigvec_subspace(H, k: int) -> SubspaceBasis:
    """
    Orthonormal eigenvectors of the k largest eigenvalues of a symmetric H,
    each signed so its largest-magnitude entry is positive.
    """
    matrix = H.matrix if isinstance(H, EgopEstimate) else np.asarray(H, dtype=float)
    d = matrix.shape[0]
    if not 1 <= k <= d:
        raise ConfigError(f"Subspace dimension must lie in [1, {d}], got {k}")
    values, vectors = scipy.linalg.eigh((matrix + matrix.T) / 2.0)
    order = np.argsort(values)[::-1]
    values, vectors = values[order], vectors[:, order]

    top = vectors[:, :k].copy()
    pivots = np.argmax(np.abs(top), axis=0)
    signs = np.sign(top[pivots, np.arange(k)])
    top *= np.where(signs == 0, 1.0, signs)

    flags = ()
    if k < d and abs(values[k - 1] - values[k]) <= TIE_TOL:
        logger.warning(f"Eigenvalues {k} and {k + 1} tie ({values[k - 1]:.3g}) - top-{k} subspace is ill-defined")
        flags = ("eigenvalue_tie",)
    return SubspaceBasis(top, flags)
