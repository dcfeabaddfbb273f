"""
Frame Systems Service
Synthesis / analysis / frame operators, optimal frame bounds, duals, the
spectral frame-sequence test and the scalar-frame check
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import scipy.linalg

from framecast.config import Tolerances, resolve
from framecast.errors import (
    DegenerateSystemError,
    DimensionMismatchError,
    NonFiniteError,
    NotAFrameError,
    ZeroVectorError,
)
from framecast.log import get_logger
from framecast.services import numerics

logger = get_logger(__name__)


@dataclass(frozen=True)
class FrameSystem:
    """Ordered vectors f_k in C^dim; vector j carries index index_origin + j"""
    dim: int
    vectors: np.ndarray  # shape (K, dim)
    index_origin: int = 0

    def __post_init__(self):
        vectors = np.array(self.vectors, dtype=complex)
        if vectors.size == 0:
            raise DegenerateSystemError("frame system has no vectors")
        if vectors.ndim == 1:
            vectors = vectors.reshape(1, -1)
        if vectors.ndim != 2 or vectors.shape[1] != self.dim:
            raise DimensionMismatchError(
                f"every vector must have dimension {self.dim}, got array of shape {vectors.shape}"
            )
        if not np.all(np.isfinite(vectors)):
            raise NonFiniteError("frame vectors contain NaN or Inf entries")
        vectors.setflags(write=False)
        object.__setattr__(self, "vectors", vectors)

    @classmethod
    def from_vectors(cls, vectors: Sequence, index_origin: int = 0) -> "FrameSystem":
        if len(vectors) == 0:
            raise DegenerateSystemError("frame system has no vectors")
        rows = [numerics.as_vector(v, "frame vector") for v in vectors]
        dims = {row.size for row in rows}
        if len(dims) != 1:
            raise DimensionMismatchError(f"frame vectors have differing dimensions {sorted(dims)}")
        return cls(dim=rows[0].size, vectors=np.vstack(rows), index_origin=index_origin)

    @classmethod
    def from_columns(cls, matrix: np.ndarray, index_origin: int = 0) -> "FrameSystem":
        matrix = np.asarray(matrix, dtype=complex)
        return cls(dim=matrix.shape[0], vectors=matrix.T, index_origin=index_origin)

    def __len__(self) -> int:
        return self.vectors.shape[0]

    @property
    def indices(self) -> List[int]:
        return list(range(self.index_origin, self.index_origin + len(self)))


@dataclass(frozen=True)
class FrameReport:
    """Optimal frame bounds of a system or of a frame operator"""
    lower_bound: float
    upper_bound: float
    rank: int
    dim: int
    spans_space: bool
    tight: bool
    tightness_defect: float
    synthesis_norm_sq: float
    spectrum: np.ndarray = field(repr=False)

    @property
    def frame_sequence_only(self) -> bool:
        return not self.spans_space


@dataclass(frozen=True)
class FrameSequenceReport:
    restricted_spectrum: np.ndarray
    full_spectrum: np.ndarray
    synthesis_norm_sq: float
    contained: bool
    full_spectrum_bound: bool


@dataclass(frozen=True)
class ScalarFrameReport:
    sum: float
    norm_sq: float
    lower: float
    upper: float
    lower_ok: bool
    upper_ok: bool
    frame_sequence_only: bool


# ==========================================
# OPERATORS
# ==========================================

def synthesis_matrix(F: FrameSystem) -> np.ndarray:
    """dim x K matrix whose column k is f_k"""
    return F.vectors.T.copy()


def analysis_coefficients(F: FrameSystem, f) -> np.ndarray:
    """Coefficients <f, f_k>, linear in f and conjugate-linear in f_k"""
    f = numerics.as_vector(f, "f")
    if f.size != F.dim:
        raise DimensionMismatchError(f"f has dimension {f.size}, frame has dimension {F.dim}")
    return F.vectors.conj() @ f


def frame_operator(F: FrameSystem) -> np.ndarray:
    """S = U U* = sum_k f_k f_k*"""
    U = synthesis_matrix(F)
    S = U @ U.conj().T
    return 0.5 * (S + S.conj().T)


# ==========================================
# BOUNDS
# ==========================================

def bounds_from_operator(S: np.ndarray, tol: Optional[Tolerances] = None) -> FrameReport:
    """Optimal bounds as the extreme eigenvalues of a frame operator restricted to its range"""
    tol = resolve(tol)
    spectrum = numerics.herm_eig(S, tol).values
    upper = float(spectrum[-1])
    if upper <= 0.0:
        raise DegenerateSystemError("frame operator is zero: the system has no nonzero vector")
    cutoff = tol.rank_tol * upper
    nonzero = spectrum[spectrum > cutoff]
    rank = int(nonzero.size)
    dim = S.shape[0]
    lower = float(nonzero[0])
    spans = rank == dim
    tightness_defect = float((upper - max(float(spectrum[0]), 0.0)) / upper)
    return FrameReport(
        lower_bound=lower,
        upper_bound=upper,
        rank=rank,
        dim=dim,
        spans_space=spans,
        tight=spans and tightness_defect <= tol.tol_identity,
        tightness_defect=tightness_defect,
        synthesis_norm_sq=upper,
        spectrum=spectrum,
    )


def frame_bounds(F: FrameSystem, tol: Optional[Tolerances] = None) -> FrameReport:
    """Optimal frame bounds; A is a frame bound for C^dim only when spans_space"""
    report = bounds_from_operator(frame_operator(F), tol)
    if not report.spans_space:
        logger.debug("system of %d vectors spans rank %d < %d: frame sequence only",
                     len(F), report.rank, F.dim)
    return report


def frame_sequence_test(F: FrameSystem, tol: Optional[Tolerances] = None) -> FrameSequenceReport:
    """Spectrum of U*U on N(U)-perp inside ]0, ||U||^2] and sigma(U*U) inside [0, ||U||^2]"""
    tol = resolve(tol)
    U = synthesis_matrix(F)
    gram = U.conj().T @ U
    full = numerics.herm_eig(gram, tol).values[::-1]
    norm_sq = numerics.operator_norm(U) ** 2
    if norm_sq == 0.0:
        raise DegenerateSystemError("frame system has only zero vectors")
    cutoff = tol.rank_tol * norm_sq
    slack = tol.tol_identity * norm_sq
    restricted = full[full > cutoff]
    return FrameSequenceReport(
        restricted_spectrum=np.sort(restricted),
        full_spectrum=np.sort(np.where(np.abs(full) <= cutoff, 0.0, full)),
        synthesis_norm_sq=norm_sq,
        contained=bool(restricted.size > 0 and restricted.min() > cutoff and restricted.max() <= norm_sq + slack),
        full_spectrum_bound=bool(full.min() >= -slack and full.max() <= norm_sq + slack),
    )


def scalar_frame_check(F: FrameSystem, f, tol: Optional[Tolerances] = None) -> ScalarFrameReport:
    """Check A||f||^2 <= sum |<f, f_k>|^2 <= B||f||^2 for one nonzero f"""
    tol = resolve(tol)
    f = numerics.as_vector(f, "f")
    norm_sq = float(np.vdot(f, f).real)
    if norm_sq == 0.0:
        raise ZeroVectorError("the scalar-frame check needs a nonzero vector")
    report = frame_bounds(F, tol)
    total = float(np.sum(np.abs(analysis_coefficients(F, f)) ** 2))
    lower = report.lower_bound * norm_sq
    upper = report.upper_bound * norm_sq
    slack = tol.tol_identity * upper
    return ScalarFrameReport(
        sum=total,
        norm_sq=norm_sq,
        lower=lower,
        upper=upper,
        lower_ok=total >= lower - slack,
        upper_ok=total <= upper + slack,
        frame_sequence_only=not report.spans_space,
    )


def lemma_witness(F: FrameSystem, tol: Optional[Tolerances] = None) -> Optional[np.ndarray]:
    """Unit vector orthogonal to span(F), or None when F spans C^dim"""
    kernel = numerics.null_space(synthesis_matrix(F).conj().T, tol)
    if kernel.shape[1] == 0:
        return None
    return numerics.canonical_phase(kernel[:, 0])


# ==========================================
# DUALS
# ==========================================

def canonical_dual(F: FrameSystem, tol: Optional[Tolerances] = None) -> FrameSystem:
    """The dual frame {S^-1 f_k}"""
    report = frame_bounds(F, tol)
    if not report.spans_space:
        raise NotAFrameError(
            f"system spans rank {report.rank} < {F.dim}; no canonical dual for C^{F.dim}",
            details={"rank": report.rank, "dim": F.dim},
        )
    dual = scipy.linalg.solve(frame_operator(F), synthesis_matrix(F), assume_a="her")
    return FrameSystem.from_columns(dual, index_origin=F.index_origin)


def duality_defect(F: FrameSystem, G: FrameSystem) -> float:
    """||U_F U_G* - I||; zero exactly when G is a dual of F"""
    if F.dim != G.dim or len(F) != len(G):
        raise DimensionMismatchError(
            f"systems differ in shape: ({F.dim}, {len(F)}) vs ({G.dim}, {len(G)})"
        )
    product = synthesis_matrix(F) @ synthesis_matrix(G).conj().T
    return numerics.operator_norm(product - np.eye(F.dim))
