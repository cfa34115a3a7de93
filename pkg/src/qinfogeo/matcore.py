"""Hermitian linear algebra used by every other module.

Matrices are plain complex ``numpy`` arrays. The helpers here validate and
symmetrize their inputs, diagonalize them, and apply scalar functions
through the spectral theorem.
"""

from typing import Callable, NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-12
SPECTRAL_TOL = 1e-10


class LinAlgContractError(ArithmeticError):
    """An eigendecomposition failed its residual or unitarity bound."""


class DomainError(ValueError):
    """A scalar function was applied outside its domain."""


class SpectralDecomposition(NamedTuple):
    """Eigenvalues in ascending order and the unitary whose columns pair with them."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(A) -> np.ndarray:
    """Return ``A`` as a finite 2-D complex array."""
    M = np.asarray(A, dtype=complex)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix contains NaN or Inf entries")
    return M


def hermitian(H, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate that ``H`` is Hermitian and return its exact symmetrization (H + H*)/2."""
    M = as_matrix(H)
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"Hermitian matrix must be square, got shape {M.shape}")
    scale = max(1.0, float(np.max(np.abs(M))))
    asym = float(np.max(np.abs(M - M.conj().T)))
    if asym > tol * scale:
        raise ValueError(f"matrix is not Hermitian: max |H - H*| = {asym:.3e}")
    return (M + M.conj().T) / 2


def hermitian_eig(H) -> SpectralDecomposition:
    """Diagonalize a Hermitian matrix.

    Backed by LAPACK ``zheevd`` through :func:`numpy.linalg.eigh`, which is
    deterministic for identical input. The residual and unitarity bounds are
    checked on every call.
    """
    M = hermitian(H)
    try:
        w, V = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise LinAlgContractError(f"eigensolver did not converge: {exc}") from exc
    n = M.shape[0]
    residual = np.linalg.norm(M @ V - V * w[None, :])
    if residual > SPECTRAL_TOL * max(1.0, np.linalg.norm(M)):
        raise LinAlgContractError(f"eigendecomposition residual {residual:.3e} exceeds bound")
    unitarity = np.linalg.norm(V.conj().T @ V - np.eye(n))
    if unitarity > SPECTRAL_TOL:
        raise LinAlgContractError(f"eigenvectors not unitary: ||V*V - I|| = {unitarity:.3e}")
    return SpectralDecomposition(w, V)


def spectral_residuals(H, decomposition: SpectralDecomposition) -> tuple[float, float]:
    """Return (||HV - V diag(w)||_F, ||V*V - I||_F)."""
    w, V = decomposition
    M = as_matrix(H)
    return (
        float(np.linalg.norm(M @ V - V * w[None, :])),
        float(np.linalg.norm(V.conj().T @ V - np.eye(len(w)))),
    )


def from_spectrum(values, V: np.ndarray) -> np.ndarray:
    """Assemble V diag(values) V*."""
    return (V * np.asarray(values)[None, :]) @ V.conj().T


def matrix_function(
    H,
    phi: Callable[[np.ndarray], np.ndarray],
    domain: Callable[[np.ndarray], np.ndarray] | None = None,
) -> np.ndarray:
    """Apply ``phi`` to a Hermitian matrix through its eigenvalues.

    ``domain`` is an optional predicate evaluated on the eigenvalues; any
    eigenvalue failing it (or mapping to a non-finite value) raises
    :class:`DomainError`.
    """
    w, V = hermitian_eig(H)
    if domain is not None:
        bad = w[~np.asarray(domain(w), dtype=bool)]
        if bad.size:
            raise DomainError(f"eigenvalue {bad[0]!r} outside the function's domain")
    with np.errstate(all="ignore"):
        fw = np.asarray(phi(w), dtype=float)
    if not np.all(np.isfinite(fw)):
        raise DomainError(f"eigenvalue {w[~np.isfinite(fw)][0]!r} outside the function's domain")
    out = from_spectrum(fw, V)
    return (out + out.conj().T) / 2


def matrix_log(H) -> np.ndarray:
    return matrix_function(H, np.log, domain=lambda w: w > 0)


def matrix_power(H, p: float) -> np.ndarray:
    """Real power of a positive definite matrix."""
    return matrix_function(H, lambda w: w**p, domain=lambda w: w > 0)


def hs_inner(A, B) -> complex:
    """Hilbert-Schmidt inner product Tr A* B, conjugate-linear in ``A``."""
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    return complex(np.vdot(A, B))


def trace_norm(A) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(hermitian_eig(A).eigenvalues)))


def is_positive_definite(H, floor: float = 1e-8) -> bool:
    if floor <= 0:
        raise ValueError("floor must be positive")
    return bool(hermitian_eig(H).eigenvalues[0] >= floor)


def random_hermitian(dim: int, rng=None, scale: float = 1.0) -> np.ndarray:
    """Gaussian Hermitian matrix (GUE-like)."""
    rng = np.random.default_rng(rng)
    G = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (G + G.conj().T) / 2


def random_matrix(rows: int, cols: int | None = None, rng=None) -> np.ndarray:
    """Complex Ginibre matrix with standard normal real and imaginary parts."""
    rng = np.random.default_rng(rng)
    cols = rows if cols is None else cols
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))
