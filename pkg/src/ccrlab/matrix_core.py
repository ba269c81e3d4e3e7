"""Dense complex linear algebra with certified structure.

Everything here works on plain numpy arrays.  Hermiticity, normality and
normalization are certified against an explicit ToleranceConfig rather
than assumed; routines raise if certification fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import DimensionMismatch, NotHermitian, NotNormal, NotNormalized


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return a


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, "fro"))


def hermiticity_defect(m: np.ndarray) -> float:
    """Max-norm of M - M†, relative to the max-norm of M (0 for M = 0)."""
    m = as_matrix(m)
    scale = float(np.max(np.abs(m)))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T))) / scale


def require_hermitian(m, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    m = as_matrix(m)
    defect = hermiticity_defect(m)
    if defect > tol.hermiticity_tol:
        raise NotHermitian(f"hermiticity defect {defect:.3e} exceeds {tol.hermiticity_tol:.3e}")
    return m


def normality_defect(m: np.ndarray) -> float:
    m = as_matrix(m)
    scale = frobenius(m) ** 2
    if scale == 0.0:
        return 0.0
    return frobenius(m.conj().T @ m - m @ m.conj().T) / scale


def require_normal(m, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    m = as_matrix(m)
    defect = normality_defect(m)
    if defect > max(tol.spectral_tol, 1e-12):
        raise NotNormal(f"normality defect {defect:.3e}")
    return m


def require_normalized(v, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(v) - 1.0) > tol.norm_tol:
        raise NotNormalized(f"norm {np.linalg.norm(v)!r} is not 1 within {tol.norm_tol}")
    return v


@dataclass(frozen=True)
class Subspace:
    """A subspace of C^N given by an orthonormal basis (columns of `basis`)."""

    basis: np.ndarray  # shape (N, k), orthonormal columns

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        if b.ndim != 2:
            raise DimensionMismatch("subspace basis must be a 2d array")
        object.__setattr__(self, "basis", b)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def project(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=complex).reshape(-1)
        return self.basis @ (self.basis.conj().T @ v)

    def distance(self, v: np.ndarray) -> float:
        """Euclidean distance of v from the subspace."""
        v = np.asarray(v, dtype=complex).reshape(-1)
        return float(np.linalg.norm(v - self.project(v)))

    def contains(self, v: np.ndarray, tol: float = 1e-8) -> bool:
        return self.distance(v) <= tol

    def principal_angles(self, other: "Subspace") -> np.ndarray:
        if self.dim == 0 or other.dim == 0:
            return np.zeros(0)
        return scipy.linalg.subspace_angles(self.basis, other.basis)


def fix_phase(basis: np.ndarray, threshold: float = 1e-12) -> np.ndarray:
    """Rotate each column so its first nonzero amplitude is real positive."""
    basis = np.array(basis, dtype=complex)
    for k in range(basis.shape[1]):
        col = basis[:, k]
        nz = np.flatnonzero(np.abs(col) > threshold)
        if nz.size:
            pivot = col[nz[0]]
            basis[:, k] = col * (abs(pivot) / pivot)
    return basis


def span(vectors, rank_tol: float = 1e-12) -> Subspace:
    """Orthonormalize a list of vectors (columns) into a Subspace."""
    a = np.column_stack([np.asarray(v, dtype=complex).reshape(-1) for v in vectors])
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    keep = s > rank_tol * max(1.0, s[0] if s.size else 0.0)
    return Subspace(u[:, keep])


def cluster_indices(values: np.ndarray, tol: float) -> list[list[int]]:
    """Group sorted real values into chains with consecutive gaps <= tol."""
    clusters: list[list[int]] = []
    for k, v in enumerate(values):
        if clusters and abs(v - values[clusters[-1][-1]]) <= tol:
            clusters[-1].append(k)
        else:
            clusters.append([k])
    return clusters


@dataclass(frozen=True)
class SpectralData:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix."""

    eigenvalues: np.ndarray          # real, ascending
    eigenvectors: np.ndarray         # columns, orthonormal
    clusters: list[list[int]] = field(default_factory=list)
    cluster_tol: float = 0.0

    @property
    def dim(self) -> int:
        return self.eigenvectors.shape[0]

    def eigenspace(self, cluster: list[int]) -> Subspace:
        return Subspace(fix_phase(self.eigenvectors[:, cluster]))


def eigh(h, tol: ToleranceConfig = DEFAULT_TOL) -> SpectralData:
    """Spectral decomposition of a certified Hermitian matrix.

    Eigenvalues come back ascending with degeneracy clusters detected at
    cluster_tol relative to the spectral range.
    """
    h = require_hermitian(h, tol)
    vals, vecs = np.linalg.eigh(h)
    scale = max(float(np.max(np.abs(vals))), 1.0) if vals.size else 1.0
    ctol = tol.cluster_tol * scale
    return SpectralData(vals, vecs, cluster_indices(vals, ctol), ctol)


def normal_eig(m, tol: ToleranceConfig = DEFAULT_TOL):
    """Eigenvalues and an orthonormal eigenbasis of a normal matrix.

    Uses the complex Schur form; for a normal matrix the triangular factor
    is diagonal and the Schur basis is an eigenbasis.
    """
    m = require_normal(m, tol)
    t, q = scipy.linalg.schur(m, output="complex")
    return np.diag(t).copy(), q


def eigenspace(m, lam: complex, tol: float, config: ToleranceConfig = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the eigenspace of a normal matrix at lam.

    Eigenvalues within tol * ||M|| of lam are collected; the empty
    subspace is a legal result.
    """
    vals, vecs = normal_eig(m, config)
    scale = max(frobenius(np.asarray(m, dtype=complex)), 1.0)
    keep = np.abs(vals - lam) <= tol * scale
    return Subspace(fix_phase(vecs[:, keep]))


def evolve(h, t: float, hbar: float = 1.0, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Unitary exp(-i H t / hbar) for Hermitian H."""
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    sd = eigh(h, tol)
    phases = np.exp(-1j * sd.eigenvalues * t / hbar)
    return (sd.eigenvectors * phases) @ sd.eigenvectors.conj().T


def commutator(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} are not conformable")
    return a @ b - b @ a
