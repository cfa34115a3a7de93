"""J-operators, monotone metrics, covariances and chi^2 divergences.

For positive definite D1 = sum_i l_i P_i and D2 = sum_j m_j Q_j the
two-parameter operator is

    J^f_{D1,D2} A = sum_ij m_f(l_i, m_j) P_i A Q_j,

with m_f(x, y) = y f(x/y). It is held spectrally (two eigenbases and the
table of means) and only expanded to an n^2 x n^2 matrix by
:func:`superop_matrix` for operator-ordering tests.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev

from .funlib import (
    MonotoneFunction,
    MeanTable,
    catalog_get,
    check_symmetric,
    log_grid,
    mean_table,
)
from .matcore import SpectralDecomposition, as_matrix, hermitian, hermitian_eig, hs_inner, matrix_power
from .quasient import IMAG_TOL, f_divergence
from .states import DEFAULT_FLOOR, FloorViolation, TRACE_TOL, check_floor

HESSIAN_RATIO = 0.1
HESSIAN_LEVELS = 3
RUSKAI_WINDOW = 0.05
RUSKAI_SPAN = 0.1
RUSKAI_DEGREE = 17


@dataclass(frozen=True, eq=False)
class JOperator:
    f: MonotoneFunction
    left: SpectralDecomposition
    right: SpectralDecomposition
    table: MeanTable

    @classmethod
    def build(cls, f: MonotoneFunction, D1, D2=None, floor: float = DEFAULT_FLOOR, check_positive: bool = True) -> "JOperator":
        """Spectral J-operator; ``check_positive=False`` admits sign-changing f for forward use only."""
        left = _positive_eig(D1, floor)
        right = left if D2 is None else _positive_eig(D2, floor)
        if len(left.eigenvalues) != len(right.eigenvalues):
            raise ValueError("D1 and D2 must have the same dimension")
        table = mean_table(f, left.eigenvalues, right.eigenvalues)
        if check_positive and np.any(table.values <= 0):
            raise ValueError(f"{f.selector}: mean table is not strictly positive")
        return cls(f, left, right, table)

    @property
    def dim(self) -> int:
        return len(self.left.eigenvalues)

    def _check(self, A):
        A = as_matrix(A)
        if A.shape != (self.dim, self.dim):
            raise ValueError(f"expected {self.dim}x{self.dim} matrix, got {A.shape}")
        return A

    def apply(self, A) -> np.ndarray:
        U, V = self.left.eigenvectors, self.right.eigenvectors
        W = U.conj().T @ self._check(A) @ V
        return U @ (self.table.values * W) @ V.conj().T

    def inverse_apply(self, C) -> np.ndarray:
        U, V = self.left.eigenvectors, self.right.eigenvectors
        W = U.conj().T @ self._check(C) @ V
        return U @ (W / self.table.values) @ V.conj().T

    def form(self, A, B) -> complex:
        """<A, J B>, evaluated in the eigenbases."""
        U, V = self.left.eigenvectors, self.right.eigenvectors
        WA = U.conj().T @ self._check(A) @ V
        WB = U.conj().T @ self._check(B) @ V
        return complex(np.vdot(WA, self.table.values * WB))

    def inverse_form(self, A, B) -> complex:
        """<A, J^-1 B>."""
        U, V = self.left.eigenvectors, self.right.eigenvectors
        WA = U.conj().T @ self._check(A) @ V
        WB = U.conj().T @ self._check(B) @ V
        return complex(np.vdot(WA, WB / self.table.values))


def _positive_eig(D, floor) -> SpectralDecomposition:
    dec = hermitian_eig(D)
    if dec.eigenvalues[0] < floor:
        raise FloorViolation(f"minimum eigenvalue {dec.eigenvalues[0]:.3e} below floor {floor:.1e}")
    return dec


def _maybe_real(value: complex, scale: float = 1.0):
    if abs(value.imag) <= IMAG_TOL * max(1.0, abs(value.real), scale):
        return float(value.real)
    return value


def _real(value: complex) -> float:
    if abs(value.imag) > IMAG_TOL * max(1.0, abs(value.real)):
        raise ArithmeticError(f"imaginary residue {value.imag:.3e} exceeds tolerance")
    return float(value.real)


def j_apply(f: MonotoneFunction, D1, D2, A, floor: float = DEFAULT_FLOOR) -> np.ndarray:
    return JOperator.build(f, D1, D2, floor).apply(A)


def j_inverse_apply(f: MonotoneFunction, D1, D2, C, floor: float = DEFAULT_FLOOR) -> np.ndarray:
    return JOperator.build(f, D1, D2, floor).inverse_apply(C)


def _require_symmetric(f: MonotoneFunction):
    if not (f.standard or check_symmetric(f)):
        raise ValueError(f"{f.selector} does not satisfy x f(1/x) = f(x); no metric is defined")


def monotone_metric(f: MonotoneFunction, D, A, B=None, floor: float = DEFAULT_FLOOR) -> float:
    """gamma_D(A, B) = <A, (J^f_D)^-1 B> for Hermitian A, B.

    ``f`` must satisfy x f(1/x) = f(x); f(1) != 1 only rescales the metric.
    ``D`` need only be positive definite.
    """
    _require_symmetric(f)
    A = hermitian(A)
    B = A if B is None else hermitian(B)
    return _real(JOperator.build(f, D, None, floor).inverse_form(A, B))


def two_param_metric(f: MonotoneFunction, D1, D2, A, B=None, floor: float = DEFAULT_FLOOR):
    """gamma^f_{D1,D2}(A, B) = <A, (J^f_{D1,D2})^-1 B>.

    Real (returned as float) when A = B; otherwise a complex value is returned
    if its imaginary part is not negligible. D1 and D2 need not have unit trace.
    """
    A = as_matrix(A)
    B = A if B is None else as_matrix(B)
    return _maybe_real(JOperator.build(f, D1, D2, floor).inverse_form(A, B))


def _inverse_log_mean(lam, mu):
    """1/L(x, y) = (log x - log y)/(x - y), the integral of (x+t)^-1 (y+t)^-1 over t > 0."""
    x = lam[:, None]
    y = mu[None, :]
    u = x / y - 1.0
    near = np.abs(u) < 1e-4
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = (np.log(x) - np.log(y)) / (x - y)
    series = (1.0 - u / 2 + u * u / 3) / y
    return np.where(near, series, raw)


def bkm_metric_integral(D, A, B=None, floor: float = DEFAULT_FLOOR) -> float:
    """int_0^inf Tr (D+t)^-1 A (D+t)^-1 B dt, integrated in closed form per eigenpair."""
    A = hermitian(A)
    B = A if B is None else hermitian(B)
    lam, U = _positive_eig(D, floor)
    WA = U.conj().T @ A @ U
    WB = U.conj().T @ B @ U
    K = _inverse_log_mean(lam, lam)
    return _real(complex(np.sum(K * WA.T * WB)))


def bkm_metric_quadrature(D, A, B=None, nodes: int = 64) -> float:
    """Gauss-Legendre evaluation of the BKM integral after t = s u/(1-u).

    The scale s is the geometric mean of the extreme eigenvalues of D, which
    puts the integrand's poles symmetrically away from both ends of [0, 1];
    with s = 1 a 64-node rule is useless once D has eigenvalues near 1e-4.
    """
    A = hermitian(A)
    B = A if B is None else hermitian(B)
    D = hermitian(D)
    n = D.shape[0]
    lam = np.linalg.eigvalsh(D)
    if lam[0] <= 0:
        raise FloorViolation("D must be positive definite")
    s = float(np.sqrt(lam[0] * lam[-1]))
    x, w = np.polynomial.legendre.leggauss(nodes)
    u = (x + 1) / 2
    w = w / 2
    total = 0.0 + 0.0j
    I = np.eye(n)
    for ui, wi in zip(u, w):
        t = s * ui / (1 - ui)
        R = np.linalg.inv(D + t * I)
        total += wi * s * np.trace(R @ A @ R @ B) / (1 - ui) ** 2
    return _real(complex(total))


def generalized_covariance(f: MonotoneFunction, rho, A, B=None, floor: float = DEFAULT_FLOOR) -> complex:
    """qCov^f_rho(A, B) = <A, J^f_rho B> - (Tr rho A*)(Tr rho B)."""
    A = as_matrix(A)
    B = A if B is None else as_matrix(B)
    R = check_floor(rho, floor)
    first = JOperator.build(f, R, None, floor).form(A, B)
    return first - np.conj(np.trace(R @ A)) * np.trace(R @ B)


def kumagai_metric(
    f: MonotoneFunction,
    b: Callable[[float], float],
    c: float,
    rho,
    A,
    B=None,
    floor: float = DEFAULT_FLOOR,
) -> complex:
    """b(Tr rho) conj(Tr A) Tr B + c <A, (J^f_rho)^-1 B> for positive definite rho of any trace."""
    if c <= 0:
        raise ValueError("c must be positive")
    if not f.operator_monotone or abs(f.at_one - 1.0) > 1e-12:
        raise ValueError(f"{f.selector}: need an operator monotone f with f(1) = 1")
    A = as_matrix(A)
    B = A if B is None else as_matrix(B)
    R = check_floor(rho, floor)
    head = b(float(np.trace(R).real)) * np.conj(np.trace(A)) * np.trace(B)
    return complex(head + c * JOperator.build(f, R, None, floor).inverse_form(A, B))


def _require_unit_trace(*states):
    for R in states:
        tr = np.trace(as_matrix(R)).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"chi^2 divergences need unit-trace states, got trace {tr!r}")


def chi2_k_paths(k_inv: MonotoneFunction, rho, sigma, floor: float = DEFAULT_FLOOR) -> tuple[float, float]:
    """(<rho - sigma, Omega (rho - sigma)>, gamma_sigma(rho, rho) - 1) with Omega = (J^{1/k}_sigma)^-1."""
    _require_unit_trace(rho, sigma)
    _require_symmetric(k_inv)
    R = hermitian(rho)
    S = check_floor(sigma, floor)
    J = JOperator.build(k_inv, S, None, floor)
    X = R - S
    return _real(J.inverse_form(X, X)), _real(J.inverse_form(R, R)) - 1.0


def chi2_k(k_inv: MonotoneFunction, rho, sigma, floor: float = DEFAULT_FLOOR) -> float:
    """chi^2_k(rho, sigma) for a standard 1/k; both evaluation paths must agree within 1e-9."""
    primary, cross = chi2_k_paths(k_inv, rho, sigma, floor)
    if abs(primary - cross) > 1e-9 * max(1.0, abs(cross) + 1.0):
        raise ArithmeticError(f"chi^2_k paths disagree: {primary!r} vs {cross!r}")
    return primary


def chi2_alpha(alpha: float, rho, sigma, floor: float = DEFAULT_FLOOR) -> float:
    """Tr rho sigma^-alpha rho sigma^(alpha-1) - 1."""
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha={alpha!r} outside [0, 1]")
    _require_unit_trace(rho, sigma)
    R = hermitian(rho)
    S = check_floor(sigma, floor)
    M = R @ matrix_power(S, -alpha) @ R @ matrix_power(S, alpha - 1)
    return _real(complex(np.trace(M))) - 1.0


def chi2_bures(rho, sigma, floor: float = DEFAULT_FLOOR) -> float:
    """chi^2_k with 1/k(x) = (1+x)/2."""
    return chi2_k(catalog_get("bures"), rho, sigma, floor)


def chi2_bures_integral(rho, sigma, floor: float = DEFAULT_FLOOR) -> float:
    """2 int_0^inf Tr rho e^{-t sigma} rho e^{-t sigma} dt - 1 = 2 sum_ij |rho_ij|^2/(s_i + s_j) - 1."""
    _require_unit_trace(rho, sigma)
    s, V = _positive_eig(sigma, floor)
    W = V.conj().T @ hermitian(rho) @ V
    return float(2 * np.sum(np.abs(W) ** 2 / (s[:, None] + s[None, :])) - 1.0)


def ruskai_f_from_F(F: MonotoneFunction) -> MonotoneFunction:
    """f(t) = (t-1)^2/(F(t) + t F(1/t)).

    The quotient is 0/0 at t = 1 and loses about eps/(t-1)^2 to rounding
    nearby, so for |t-1| < 0.05 it is replaced by a degree-17 Chebyshev
    interpolant through nodes spread over [0.9, 1.1].
    """

    def quotient(t):
        with np.errstate(divide="ignore", invalid="ignore"):
            return (t - 1.0) ** 2 / (F(t) + t * F(1.0 / t))

    k = np.arange(RUSKAI_DEGREE + 1)
    nodes = np.cos(np.pi * (k + 0.5) / (RUSKAI_DEGREE + 1))
    coef = chebyshev.chebfit(nodes, quotient(1.0 + RUSKAI_SPAN * nodes), RUSKAI_DEGREE)

    def f(t):
        t = np.asarray(t, dtype=float)
        near = np.abs(t - 1.0) < RUSKAI_WINDOW
        out = quotient(np.where(near, 2.0, t))
        if np.any(near):
            out = np.where(near, chebyshev.chebval((t - 1.0) / RUSKAI_SPAN, coef), out)
        return out

    grid = log_grid(201)
    values = f(grid)
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise ValueError(f"F(t) + t F(1/t) vanishes or changes sign for {F.selector}")
    at_one = float(chebyshev.chebval(0.0, coef))
    return MonotoneFunction(
        f"ruskai({F.selector})",
        f,
        at_zero=float("nan"),
        operator_monotone=F.operator_convex,
        standard=abs(at_one - 1.0) <= 1e-10,
    )


def _mixed_difference(F, D, A, B, h, floor):
    S = lambda X, Y: f_divergence(F, X, Y, floor)
    return (
        S(D + h * A, D + h * B) - S(D + h * A, D - h * B) - S(D - h * A, D + h * B) + S(D - h * A, D - h * B)
    ) / (4 * h * h)


def hessian_step(D, A, B, ratio: float = HESSIAN_RATIO) -> float:
    """Step h with h max(||A||, ||B||) = ratio * lambda_min(D).

    Truncation of the extrapolated difference is a series in
    r = h ||X|| / lambda_min, while cancellation costs about
    eps |S| / (r^2 lambda_min), so the step has to follow the smallest
    eigenvalue; a fixed step breaks down near the boundary of the state space.
    """
    lam = hermitian_eig(D).eigenvalues[0]
    size = max(np.linalg.norm(A, 2), np.linalg.norm(B, 2))
    if size == 0:
        return ratio * lam
    return float(ratio * lam / size)


def metric_from_divergence_hessian(
    F: MonotoneFunction,
    D,
    A,
    B=None,
    h: float | None = None,
    levels: int = HESSIAN_LEVELS,
    floor: float = DEFAULT_FLOOR,
) -> float:
    """Metric obtained as minus the mixed second derivative of S_F(D + tA || D + sB) at t = s = 0.

    Central mixed differences at steps h, h/2, ..., h/2^(levels-1) combined
    in a Richardson tableau (the difference is even in h, so each column
    removes one power of h^2). With ``h=None`` the step comes from
    :func:`hessian_step`. D must clear ``floor``; stencil points, which stay
    within ``HESSIAN_RATIO`` of its smallest eigenvalue, are checked against
    (1 - HESSIAN_RATIO) * floor.
    """
    if levels < 1:
        raise ValueError("levels must be at least 1")
    D = check_floor(D, floor)
    A = hermitian(A)
    B = A if B is None else hermitian(B)
    for X in (A, B):
        if abs(np.trace(X)) > 1e-10 * max(1.0, np.linalg.norm(X)):
            raise ValueError("tangent directions must be traceless")
    if not np.any(A) or not np.any(B):
        return 0.0
    if h is None:
        h = hessian_step(D, A, B)
    stencil_floor = (1 - HESSIAN_RATIO) * floor
    for X in (A, B):
        for sign in (1, -1):
            check_floor(D + sign * h * X, stencil_floor)
    table = [_mixed_difference(F, D, A, B, h / 2**k, stencil_floor) for k in range(levels)]
    for j in range(1, levels):
        table = [(4**j * table[i + 1] - table[i]) / (4**j - 1) for i in range(len(table) - 1)]
    return -table[0]


def superop_matrix(linear_map: Callable[[np.ndarray], np.ndarray], in_dim: int, out_dim: int | None = None) -> np.ndarray:
    """Matrix of a linear map on in_dim x in_dim matrices in the matrix-unit basis.

    Row-major vectorization: column k*in_dim + l holds vec(map(E_kl)).
    """
    out_dim = in_dim if out_dim is None else out_dim
    M = np.empty((out_dim * out_dim, in_dim * in_dim), dtype=complex)
    E = np.zeros((in_dim, in_dim), dtype=complex)
    for k in range(in_dim):
        for l in range(in_dim):
            E[k, l] = 1.0
            image = as_matrix(linear_map(E.copy()))
            if image.shape != (out_dim, out_dim):
                raise ValueError(f"map returned shape {image.shape}, expected {(out_dim, out_dim)}")
            M[:, k * in_dim + l] = image.reshape(-1)
            E[k, l] = 0.0
    return M


def psd_min_eigenvalue(M, asym_tol: float = 1e-9) -> float:
    """Smallest eigenvalue of the Hermitian part of M; asymmetry over asym_tol (relative) is an error."""
    M = np.asarray(M, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(M))))
    asym = float(np.max(np.abs(M - M.conj().T)))
    if asym > asym_tol * scale:
        raise ArithmeticError(f"superoperator not Hermitian: asymmetry {asym:.3e}")
    return float(np.linalg.eigvalsh((M + M.conj().T) / 2)[0])
