"""Density matrices, Kraus channels and the structural maps built from them."""

from dataclasses import dataclass, field

import numpy as np

from .matcore import as_matrix, hermitian, hermitian_eig, random_hermitian

DEFAULT_FLOOR = 1e-8
TRACE_TOL = 1e-10
MAX_QR_RETRIES = 10


class FloorViolation(ValueError):
    """A density matrix has an eigenvalue below the positivity floor."""


def density(rho, floor: float = DEFAULT_FLOOR) -> np.ndarray:
    """Validate a density matrix and return its symmetrized form.

    The trace must be one within 1e-10 and every eigenvalue at least ``floor``.
    """
    R = hermitian(rho)
    tr = np.trace(R).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"density matrix trace is {tr!r}, expected 1")
    check_floor(R, floor)
    return R


def check_floor(H, floor: float = DEFAULT_FLOOR) -> np.ndarray:
    """Raise :class:`FloorViolation` unless the smallest eigenvalue of ``H`` is >= floor."""
    H = hermitian(H)
    lam = hermitian_eig(H).eigenvalues[0]
    if lam < floor:
        raise FloorViolation(f"minimum eigenvalue {lam:.3e} below floor {floor:.1e}")
    return H


def renormalize(X) -> np.ndarray:
    """Re-symmetrize a channel output and divide by its trace when it is within 1e-10 of one."""
    R = hermitian(X, tol=1e-9)
    tr = np.trace(R).real
    if abs(tr - 1.0) <= TRACE_TOL:
        R = R / tr
    return R


@dataclass(frozen=True)
class KrausChannel:
    """Completely positive map X -> sum_i K_i X K_i*.

    With ``trace_preserving=True`` (the default) construction enforces
    sum_i K_i* K_i = I_in within 1e-10. The adjoint of a channel is built
    with the check switched off, since it is unital rather than trace
    preserving.
    """

    kraus: tuple
    trace_preserving: bool = field(default=True, compare=False)

    def __post_init__(self):
        ops = tuple(as_matrix(K) for K in self.kraus)
        if not ops:
            raise ValueError("at least one Kraus operator is required")
        shape = ops[0].shape
        if any(K.shape != shape for K in ops):
            raise ValueError("Kraus operators must share one shape")
        object.__setattr__(self, "kraus", ops)
        if self.trace_preserving:
            err = self.trace_preservation_error()
            if err > TRACE_TOL:
                raise ValueError(f"sum K*K deviates from identity by {err:.3e}")

    @property
    def in_dim(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.kraus[0].shape[0]

    def trace_preservation_error(self) -> float:
        S = sum(K.conj().T @ K for K in self.kraus)
        return float(np.max(np.abs(S - np.eye(self.in_dim))))

    def __call__(self, X) -> np.ndarray:
        return apply_channel(self, X)

    def adjoint(self) -> "KrausChannel":
        return adjoint_channel(self)


def apply_channel(beta: KrausChannel, X) -> np.ndarray:
    X = as_matrix(X)
    if X.shape != (beta.in_dim, beta.in_dim):
        raise ValueError(f"channel expects {beta.in_dim}x{beta.in_dim} input, got {X.shape}")
    return sum(K @ X @ K.conj().T for K in beta.kraus)


def adjoint_channel(beta: KrausChannel) -> KrausChannel:
    """Hilbert-Schmidt dual X -> sum_i K_i* X K_i."""
    return KrausChannel(tuple(K.conj().T for K in beta.kraus), trace_preserving=False)


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel((np.eye(dim, dtype=complex),))


def unitary_channel(U) -> KrausChannel:
    return KrausChannel((as_matrix(U),))


def partial_trace_channel(dim: int) -> KrausChannel:
    """The map [[B11, B12], [B21, B22]] -> B11 + B22 from 2*dim to dim."""
    K1 = np.hstack([np.eye(dim), np.zeros((dim, dim))]).astype(complex)
    K2 = np.hstack([np.zeros((dim, dim)), np.eye(dim)]).astype(complex)
    return KrausChannel((K1, K2))


def random_density(dim: int, rng=None, floor: float = DEFAULT_FLOOR) -> np.ndarray:
    """Ginibre-ensemble density matrix GG*/Tr(GG*).

    If the smallest eigenvalue lands below ``floor`` the state is mixed with
    I/dim just enough to lift it. ``rng`` is a seed or a numpy Generator.
    """
    if dim < 2:
        raise ValueError("dim must be at least 2")
    rng = np.random.default_rng(rng)
    G = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    R = G @ G.conj().T
    R = (R + R.conj().T) / 2
    R = R / np.trace(R).real
    lam = hermitian_eig(R).eigenvalues[0]
    if lam < floor:
        target = 2 * floor
        t = (target - lam) / (1.0 / dim - lam)
        R = (1 - t) * R + t * np.eye(dim) / dim
    return R


def random_commuting_pair(dim: int, rng=None, floor: float = DEFAULT_FLOOR):
    """Two densities diagonal in a shared random unitary basis, plus that basis."""
    rng = np.random.default_rng(rng)
    U = random_unitary(dim, rng)
    p = _random_simplex(dim, rng, floor)
    q = _random_simplex(dim, rng, floor)
    rho = (U * p[None, :]) @ U.conj().T
    sigma = (U * q[None, :]) @ U.conj().T
    return (rho + rho.conj().T) / 2, (sigma + sigma.conj().T) / 2, U


def _random_simplex(dim, rng, floor):
    w = rng.exponential(size=dim)
    w = w / w.sum()
    return np.maximum(w, 2 * floor) / np.maximum(w, 2 * floor).sum()


def random_probability(dim: int, rng=None, floor: float = DEFAULT_FLOOR) -> np.ndarray:
    return _random_simplex(dim, np.random.default_rng(rng), floor)


def random_unitary(dim: int, rng=None) -> np.ndarray:
    """Haar unitary from the QR decomposition of a Ginibre matrix with phase correction."""
    rng = np.random.default_rng(rng)
    G = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    Q, R = np.linalg.qr(G)
    d = np.diag(R)
    return Q * (d / np.abs(d))[None, :]


def random_cptp(in_dim: int, out_dim: int, env_dim: int, rng=None) -> KrausChannel:
    """Random channel from a Stinespring isometry C^in -> C^out (x) C^env.

    The (out_dim*env_dim) x in_dim Gaussian matrix is orthonormalized by QR and
    cut into env_dim blocks of out_dim rows, one per Kraus operator.
    """
    if env_dim < 1:
        raise ValueError("env_dim must be at least 1")
    if out_dim * env_dim < in_dim:
        raise ValueError("out_dim * env_dim must be >= in_dim for an isometry to exist")
    rng = np.random.default_rng(rng)
    for _ in range(MAX_QR_RETRIES):
        G = rng.normal(size=(out_dim * env_dim, in_dim)) + 1j * rng.normal(size=(out_dim * env_dim, in_dim))
        Q, R = np.linalg.qr(G)
        d = np.diag(R)
        if np.min(np.abs(d)) > 1e-10:
            break
    else:
        raise ArithmeticError("could not draw a full-rank Stinespring matrix")
    V = Q * (d / np.abs(d))[None, :]
    return KrausChannel(tuple(V[e * out_dim:(e + 1) * out_dim, :] for e in range(env_dim)))


def random_traceless_hermitian(dim: int, rng=None) -> np.ndarray:
    """Gaussian Hermitian matrix with (Tr/n) I subtracted."""
    H = random_hermitian(dim, rng)
    return H - np.trace(H).real / dim * np.eye(dim)


def pinch_to_basis(rho, basis) -> np.ndarray:
    """Diagonal of V* rho V as a probability vector."""
    R = hermitian(rho)
    V = as_matrix(basis)
    if V.shape != R.shape:
        raise ValueError("basis and state dimensions differ")
    if np.linalg.norm(V.conj().T @ V - np.eye(V.shape[0])) > 1e-10:
        raise ValueError("basis is not unitary")
    p = np.einsum("ij,ik,kj->j", V.conj(), R, V).real
    return p


def block_embed(D1, D2, B):
    """The doubled pair D = diag(D2, D1), A = [[0, B], [B, 0]].

    D is not renormalized, so Tr D = Tr D1 + Tr D2.
    """
    D1, D2, B = as_matrix(D1), as_matrix(D2), as_matrix(B)
    n = D1.shape[0]
    if D2.shape != (n, n) or B.shape != (n, n):
        raise ValueError("D1, D2 and B must all be n x n")
    Z = np.zeros((n, n), dtype=complex)
    D = np.block([[D2, Z], [Z, D1]])
    A = np.block([[Z, B], [B, Z]])
    return D, A
