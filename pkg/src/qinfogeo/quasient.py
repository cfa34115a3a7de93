"""Quasi-entropies S^A_f(rho1 || rho2) and their special cases.

Everything is evaluated as a double sum over the eigenpairs of the two
arguments; f(Delta) is never formed as an n^2 x n^2 matrix. Natural
logarithms throughout.
"""

import numpy as np

from .funlib import MonotoneFunction, catalog_get
from .matcore import as_matrix, from_spectrum, hermitian_eig, matrix_log, matrix_power
from .states import DEFAULT_FLOOR, FloorViolation, check_floor

IMAG_TOL = 1e-9


def _positive_eig(rho, floor):
    w, V = hermitian_eig(rho)
    if w[0] < floor:
        raise FloorViolation(f"minimum eigenvalue {w[0]:.3e} below floor {floor:.1e}")
    return w, V


def _real(value: complex, scale: float = 1.0) -> float:
    if abs(value.imag) > IMAG_TOL * max(1.0, abs(value.real), scale):
        raise ArithmeticError(f"imaginary residue {value.imag:.3e} exceeds tolerance")
    return float(value.real)


def relative_modular_apply(rho1, rho2, B, floor: float = DEFAULT_FLOOR) -> np.ndarray:
    """Delta(rho1/rho2) B = rho1 B rho2^-1."""
    B = as_matrix(B)
    lam, U = _positive_eig(rho1, floor)
    mu, V = _positive_eig(rho2, floor)
    if B.shape != (len(lam), len(mu)):
        raise ValueError("dimension mismatch")
    W = U.conj().T @ B @ V
    return U @ ((lam[:, None] / mu[None, :]) * W) @ V.conj().T


def quasi_entropy_terms(f: MonotoneFunction, A, rho1, rho2, floor: float = DEFAULT_FLOOR):
    """Complex double sum sum_ij f(l_i/m_j) m_j |<u_i, A v_j>|^2 before the real-part check."""
    A = as_matrix(A)
    lam, U = _positive_eig(rho1, floor)
    mu, V = _positive_eig(rho2, floor)
    if A.shape != (len(lam), len(mu)) or len(lam) != len(mu):
        raise ValueError(f"dimension mismatch: A {A.shape}, states {len(lam)} and {len(mu)}")
    coeff = f(lam[:, None] / mu[None, :]) * mu[None, :]
    if not np.all(np.isfinite(coeff)):
        raise ValueError(f"{f.selector} is not finite on the eigenvalue ratios")
    W = U.conj().T @ A @ V
    return complex(np.vdot(W, coeff * W))


def quasi_entropy(f: MonotoneFunction, A, rho1, rho2, floor: float = DEFAULT_FLOOR) -> float:
    """S^A_f(rho1 || rho2) = <A rho2^1/2, f(Delta(rho1/rho2)) (A rho2^1/2)>.

    Parameters
    ----------
    f : MonotoneFunction
    A : array_like
        Contrast matrix, n x n.
    rho1, rho2 : array_like
        Positive definite n x n matrices (densities in the usual case); both
        must clear ``floor``.
    """
    return _real(quasi_entropy_terms(f, A, rho1, rho2, floor))


def f_divergence(f: MonotoneFunction, rho1, rho2, floor: float = DEFAULT_FLOOR) -> float:
    """S_f(rho1 || rho2), the quasi-entropy with A = I."""
    n = as_matrix(rho1).shape[0]
    return quasi_entropy(f, np.eye(n), rho1, rho2, floor)


def umegaki(rho1, rho2, floor: float = DEFAULT_FLOOR) -> float:
    """Tr rho1 (log rho1 - log rho2), evaluated with matrix logarithms."""
    R1 = check_floor(rho1, floor)
    R2 = check_floor(rho2, floor)
    return _real(complex(np.trace(R1 @ (matrix_log(R1) - matrix_log(R2)))))


def s_beta(beta: float, rho1, rho2, floor: float = DEFAULT_FLOOR) -> float:
    """(Tr rho1^(1+beta) rho2^(-beta) - 1)/beta for beta in (0, 1)."""
    if not 0 < beta < 1:
        raise ValueError(f"beta={beta!r} outside (0, 1)")
    R1 = check_floor(rho1, floor)
    R2 = check_floor(rho2, floor)
    tr = complex(np.trace(matrix_power(R1, 1 + beta) @ matrix_power(R2, -beta)))
    return (_real(tr) - 1.0) / beta


def s_alpha_degree(alpha: float, rho2, rho1, floor: float = DEFAULT_FLOOR) -> float:
    """Relative entropy of degree alpha, S_alpha(rho2 || rho1) = Tr (I - rho1^a rho2^-a) rho2 / (a(1-a)).

    Note the argument order: the first state is the one appearing on the
    right of the trace.
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha={alpha!r} outside (0, 1)")
    R2 = check_floor(rho2, floor)
    R1 = check_floor(rho1, floor)
    n = R2.shape[0]
    M = (np.eye(n) - matrix_power(R1, alpha) @ matrix_power(R2, -alpha)) @ R2
    return _real(complex(np.trace(M))) / (alpha * (1 - alpha))


def wyd_J(p: float, K, A, B, floor: float = DEFAULT_FLOOR) -> float:
    """J_p(K, A, B) = Tr sqrt(B) K* g_p(L_A R_B^-1)(K sqrt(B)) for positive definite A, B."""
    if not 0 < p <= 2:
        raise ValueError(f"p={p!r} outside (0, 2]")
    return quasi_entropy(catalog_get("wyd_gp", p=p), K, A, B, floor)


def wyd_commutator(p: float, K, A) -> float:
    """-(1/(2p(1-p))) Tr [K, A^p][K, A^(1-p)] for Hermitian K, positive A, p != 1."""
    if p in (0.0, 1.0):
        raise ValueError("p must differ from 0 and 1")
    K = as_matrix(K)
    Ap = matrix_power(A, p)
    Aq = matrix_power(A, 1 - p)
    C1 = K @ Ap - Ap @ K
    C2 = K @ Aq - Aq @ K
    return _real(complex(-np.trace(C1 @ C2) / (2 * p * (1 - p))))


def classical_f_divergence(f: MonotoneFunction, p, q) -> float:
    """D_f(p || q) = sum_i q_i f(p_i/q_i)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("probability vectors differ in length")
    if np.any(q <= 0):
        raise ValueError("q must be strictly positive")
    return float(np.sum(q * f(p / q)))


def probability_vector(p, tol: float = 1e-10) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(p < -1e-12) or abs(p.sum() - 1) > tol:
        raise ValueError("not a probability vector")
    return p
