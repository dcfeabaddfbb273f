"""
Dense Linear Algebra Kernel
Hermitian eigendecomposition, SVD, pseudoinverse, norms, spectral radius and
the Stein equation solver used by every other service
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from framecast.config import Tolerances, resolve
from framecast.errors import (
    DimensionMismatchError,
    NonFiniteError,
    NotHermitianError,
    ParamRangeError,
    SpectralRadiusError,
)
from framecast.log import get_logger

logger = get_logger(__name__)

# Entries below this fraction of the largest modulus do not fix an eigenvector phase
PHASE_SIGNIFICANCE = 1e-8
# Hard cap on repeated squaring steps of the Stein series
MAX_SQUARINGS = 64


@dataclass(frozen=True)
class EigResult:
    """Ascending eigenvalues with orthonormal eigenvector columns"""
    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class SVDResult:
    """M = left @ diag(singulars) @ right.conj().T with singulars descending"""
    left: np.ndarray
    singulars: np.ndarray
    right: np.ndarray


# ==========================================
# INPUT VALIDATION
# ==========================================

def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite complex 2-D array"""
    A = np.array(M, dtype=complex)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if A.ndim != 2 or A.shape[0] == 0 or A.shape[1] == 0:
        raise DimensionMismatchError(f"{name} must be a non-empty 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFiniteError(f"{name} contains NaN or Inf entries")
    return A


def as_vector(v, name: str = "vector") -> np.ndarray:
    """Coerce to a finite complex 1-D array"""
    x = np.array(v, dtype=complex).ravel()
    if x.size == 0:
        raise DimensionMismatchError(f"{name} must be non-empty")
    if not np.all(np.isfinite(x)):
        raise NonFiniteError(f"{name} contains NaN or Inf entries")
    return x


def as_square(M, name: str = "operator") -> np.ndarray:
    A = as_matrix(M, name)
    if A.shape[0] != A.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {A.shape}")
    return A


def hermitian_defect(M: np.ndarray) -> float:
    return operator_norm(M - M.conj().T)


def ensure_hermitian(M, tol: Optional[Tolerances] = None, name: str = "matrix") -> np.ndarray:
    """Validate Hermitian within tol_identity * ||M|| and return (M + M*) / 2"""
    tol = resolve(tol)
    A = as_square(M, name)
    scale = max(operator_norm(A), 1.0)
    if hermitian_defect(A) > tol.tol_identity * scale:
        raise NotHermitianError(f"{name} is not Hermitian within tolerance")
    return 0.5 * (A + A.conj().T)


# ==========================================
# DECOMPOSITIONS
# ==========================================

def canonical_phase(v: np.ndarray) -> np.ndarray:
    """Rotate v so its first significant entry is real and positive"""
    magnitudes = np.abs(v)
    peak = magnitudes.max() if magnitudes.size else 0.0
    if peak == 0.0:
        return v
    first = int(np.argmax(magnitudes > PHASE_SIGNIFICANCE * peak))
    phase = v[first] / magnitudes[first]
    return v * np.conj(phase)


def herm_eig(M, tol: Optional[Tolerances] = None) -> EigResult:
    """Eigendecomposition of a Hermitian matrix with reproducible ordering"""
    tol = resolve(tol)
    A = ensure_hermitian(M, tol)
    values, vectors = scipy.linalg.eigh(A)
    vectors = np.column_stack([canonical_phase(vectors[:, j]) for j in range(vectors.shape[1])])

    # ties: order by position of the first significant component
    scale = max(float(np.max(np.abs(values))), 1.0)
    order = list(range(len(values)))
    start = 0
    while start < len(values):
        stop = start + 1
        while stop < len(values) and values[stop] - values[start] <= tol.tol_identity * scale:
            stop += 1
        if stop - start > 1:
            def lead(j):
                column = np.abs(vectors[:, j])
                return int(np.argmax(column > PHASE_SIGNIFICANCE * column.max()))
            order[start:stop] = sorted(order[start:stop], key=lead)
        start = stop
    return EigResult(values=values[order].real.copy(), vectors=vectors[:, order])


def svd(M) -> SVDResult:
    """Thin singular value decomposition"""
    A = as_matrix(M)
    try:
        U, s, Vh = scipy.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError:
        logger.warning("gesdd failed to converge, retrying with gesvd")
        U, s, Vh = scipy.linalg.svd(A, full_matrices=False, lapack_driver="gesvd")
    return SVDResult(left=U, singulars=s, right=Vh.conj().T)


def rank_cutoff(singulars: np.ndarray, tol: Optional[Tolerances] = None) -> float:
    """Absolute singular value cutoff shared by rank, kernel and pseudoinverse"""
    tol = resolve(tol)
    sigma_max = float(singulars[0]) if len(singulars) else 0.0
    return tol.rank_tol * sigma_max


def matrix_rank(M, tol: Optional[Tolerances] = None) -> int:
    s = svd(M).singulars
    if len(s) == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rank_cutoff(s, tol)))


def null_space(M, tol: Optional[Tolerances] = None) -> np.ndarray:
    """Orthonormal basis (columns) of the kernel of M"""
    A = as_matrix(M)
    U, s, Vh = scipy.linalg.svd(A, full_matrices=True)
    rank = 0 if len(s) == 0 or s[0] == 0.0 else int(np.sum(s > rank_cutoff(s, tol)))
    return Vh[rank:].conj().T


def range_basis(M, tol: Optional[Tolerances] = None) -> np.ndarray:
    """Orthonormal basis (columns) of the range of M"""
    result = svd(M)
    s = result.singulars
    rank = 0 if len(s) == 0 or s[0] == 0.0 else int(np.sum(s > rank_cutoff(s, tol)))
    return result.left[:, :rank]


def pinv(M, rank_tol: Optional[float] = None, tol: Optional[Tolerances] = None) -> np.ndarray:
    """Moore-Penrose pseudoinverse; singular values <= rank_tol are dropped"""
    result = svd(M)
    s = result.singulars
    cutoff = rank_cutoff(s, tol) if rank_tol is None else rank_tol
    inverse = np.zeros_like(s)
    keep = s > cutoff
    inverse[keep] = 1.0 / s[keep]
    return (result.right * inverse) @ result.left.conj().T


# ==========================================
# NORMS AND SPECTRA
# ==========================================

def operator_norm(M) -> float:
    """Largest singular value"""
    A = np.asarray(M, dtype=complex)
    if A.ndim == 1:
        return float(np.linalg.norm(A))
    if A.size == 0:
        return 0.0
    if not np.all(np.isfinite(A)):
        raise NonFiniteError("matrix contains NaN or Inf entries")
    return float(scipy.linalg.svdvals(A)[0])


def eigenvalues(M) -> np.ndarray:
    """Eigenvalues of a general square matrix from its complex Schur form"""
    A = as_square(M)
    triangular, _ = scipy.linalg.schur(A, output="complex")
    return np.diag(triangular).copy()


def spectral_radius(M) -> float:
    """Largest eigenvalue modulus"""
    return float(np.max(np.abs(eigenvalues(M))))


# ==========================================
# STEIN EQUATION
# ==========================================

def _stein_direct(T: np.ndarray, W: np.ndarray) -> np.ndarray:
    # row-major vec: vec(T S T*) = (T kron conj(T)) vec(S)
    d = T.shape[0]
    system = np.eye(d * d, dtype=complex) - np.kron(T, T.conj())
    return scipy.linalg.solve(system, W.reshape(-1)).reshape(d, d)


def _stein_squaring(T: np.ndarray, W: np.ndarray) -> np.ndarray:
    # S_{2n} = S_n + A S_n A* with A = T^n
    S = W.copy()
    A = T.copy()
    for step in range(MAX_SQUARINGS):
        increment = A @ S @ A.conj().T
        S = S + increment
        if operator_norm(increment) <= np.finfo(float).eps * max(operator_norm(S), 1e-300):
            logger.debug("Stein squaring converged after %d steps", step + 1)
            break
        A = A @ A
    return S


def stein_solve(T, W, tol: Optional[Tolerances] = None) -> np.ndarray:
    """Solve S - T S T* = W for Hermitian PSD W and spectral radius(T) < 1"""
    tol = resolve(tol)
    T = as_square(T, "T")
    W = ensure_hermitian(W, tol, "W")
    if W.shape != T.shape:
        raise DimensionMismatchError(f"T has shape {T.shape} but W has shape {W.shape}")

    radius = spectral_radius(T)
    if radius >= 1.0 - tol.radius_margin:
        raise SpectralRadiusError(
            f"spectral radius {radius:.6g} >= 1 - {tol.radius_margin:g}: the Stein series diverges",
            details={"spectral_radius": radius},
        )
    if radius > 0.999:
        logger.warning("spectral radius %.6g is close to 1; Stein solution is ill-conditioned", radius)

    if T.shape[0] <= tol.stein_direct_max_dim:
        logger.debug("Stein solve: direct Kronecker system, d=%d", T.shape[0])
        S = _stein_direct(T, W)
    else:
        logger.debug("Stein solve: series squaring, d=%d", T.shape[0])
        S = _stein_squaring(T, W)
    return 0.5 * (S + S.conj().T)


def stein_residual(T: np.ndarray, S: np.ndarray, W: np.ndarray) -> float:
    """||S - T S T* - W||"""
    return operator_norm(S - T @ S @ T.conj().T - W)


# ==========================================
# FUNCTIONAL CALCULUS
# ==========================================

def apply_hermitian_function(T, f: Callable[[float], complex], tol: Optional[Tolerances] = None) -> np.ndarray:
    """f(T) = Q f(Lambda) Q* for Hermitian T"""
    decomposition = herm_eig(T, tol)
    mapped = []
    for value in decomposition.values:
        try:
            with np.errstate(all="raise"):
                image = complex(f(float(value)))
        except (ValueError, ZeroDivisionError, OverflowError, FloatingPointError) as e:
            raise ParamRangeError(f"function undefined at eigenvalue {value:.6g}: {e}")
        if not np.isfinite(image):
            raise ParamRangeError(f"function undefined at eigenvalue {value:.6g}")
        mapped.append(image)
    Q = decomposition.vectors
    return (Q * np.array(mapped)) @ Q.conj().T
