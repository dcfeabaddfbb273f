"""
Iterated Systems Service
Everything specific to orbits {T^k phi}: generation, operator recovery, the
Stein representation test, the multiplication-operator representation,
range diagnostics, Z-indexed tight orbits and the block decomposition search
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from framecast.config import Tolerances, resolve
from framecast.errors import (
    DimensionMismatchError,
    NotCyclicError,
    ParamRangeError,
    SingularOperatorError,
    SpectralRadiusError,
)
from framecast.log import get_logger
from framecast.services import numerics
from framecast.services.frames import (
    FrameReport,
    FrameSystem,
    bounds_from_operator,
    frame_bounds,
    synthesis_matrix,
)

logger = get_logger(__name__)

# m eigenvalues within max(1, ||T||) * BLOCK_MERGE_TOL^(2/m) of their mean share one block
BLOCK_MERGE_TOL = 1e-6
BESSEL_FAILS = "Bessel fails"


# ==========================================
# DOMAIN TYPES
# ==========================================

@dataclass(frozen=True)
class IteratedSystem:
    """{T^k phi}; horizon None stands for the infinite orbit"""
    T: np.ndarray
    phi: np.ndarray
    horizon: Optional[int] = None

    def __post_init__(self):
        T, phi = _operator_and_vector(self.T, self.phi)
        if self.horizon is not None and self.horizon < 1:
            raise ParamRangeError(f"horizon must be >= 1, got {self.horizon}")
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "phi", phi)

    @property
    def infinite(self) -> bool:
        return self.horizon is None


@dataclass(frozen=True)
class PowerDecayReport:
    decays: bool
    spectral_radius: float


@dataclass(frozen=True)
class BesselReport:
    bessel: bool
    trace_bound: Optional[float]
    restricted_radius: float
    cyclic_dim: int
    degenerate: bool = False


@dataclass(frozen=True)
class OrbitOperator:
    """Closed-form frame operator of the infinite orbit {T^k phi}_{k>=0}"""
    S: np.ndarray
    report: FrameReport
    restricted_radius: float
    cyclic_dim: int


@dataclass(frozen=True)
class RecoveryResult:
    T_hat: np.ndarray
    residual: float
    consistent: bool
    kernel_shift_invariant: bool
    norm_of_T_hat: float


@dataclass(frozen=True)
class IndependenceReport:
    independent: bool
    rank: int


@dataclass(frozen=True)
class RangePoint:
    point: complex
    rank_defect: int
    smallest_singular: float

    @property
    def dense_range(self) -> bool:
        return self.rank_defect == 0


@dataclass(frozen=True)
class RangeDiagnostics:
    points: List[RangePoint]
    rank: int
    closed_range: bool = True


@dataclass(frozen=True)
class RepresentationReport:
    condition_i: bool
    spectral_radius: float
    S: Optional[np.ndarray]
    S_invertible: bool
    stein_residual: Optional[float]
    is_frame: bool
    bounds: Optional[Tuple[float, float]]


@dataclass(frozen=True)
class SteinIdentityStep:
    n: int
    identity_defect: float
    tail_quadratic: float


@dataclass(frozen=True)
class SpectralRep:
    """Diagonalization of Hermitian T relative to the scalar spectral measure of phi"""
    nodes: np.ndarray
    weights: np.ndarray
    transform: np.ndarray
    total_mass: float
    unitarity_defect: float
    multiplication_defect: float


@dataclass(frozen=True)
class ZTightReport:
    tight: bool
    tightness_defect: float
    isometry_defect: float
    unitary: bool
    is_frame: bool
    period: Optional[int]
    index_origin: int
    length: int
    bounds: Tuple[float, float]

    @property
    def exact_period(self) -> bool:
        return self.period is not None

    @property
    def certified_tight(self) -> bool:
        return self.exact_period and self.tight

    @property
    def implication_holds(self) -> bool:
        return not self.certified_tight or self.unitary


@dataclass(frozen=True)
class DualOperatorReport:
    reconstruction_defect: float
    TU_star_defect: float
    operators_equal: bool
    hypotheses_hold: bool
    period: Optional[int]


@dataclass(frozen=True)
class BlockCertificate:
    eigenvalue: complex
    basis: np.ndarray
    restricted_radius: float
    invariance_defect: float
    certified: bool
    generator: Optional[np.ndarray] = None
    block_bounds: Optional[Tuple[float, float]] = None
    reason: Optional[str] = None
    attempts: int = 0

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True)
class ConjectureCertificate:
    blocks: List[BlockCertificate]
    covers_space: bool
    span_rank: int
    invariance_defect: float


@dataclass(frozen=True)
class MembershipReport:
    member: bool
    reason: Optional[str] = None
    witness: Optional[np.ndarray] = field(default=None, repr=False)


# ==========================================
# HELPERS
# ==========================================

def _operator_and_vector(T, phi) -> Tuple[np.ndarray, np.ndarray]:
    T = numerics.as_square(T, "T")
    phi = numerics.as_vector(phi, "phi")
    if phi.size != T.shape[0]:
        raise DimensionMismatchError(f"phi has dimension {phi.size}, T acts on C^{T.shape[0]}")
    return T, phi


def cyclic_basis(T, phi, tol: Optional[Tolerances] = None) -> np.ndarray:
    """Orthonormal basis of span{phi, T phi, T^2 phi, ...} by Arnoldi with reorthogonalization"""
    tol = resolve(tol)
    T, phi = _operator_and_vector(T, phi)
    norm = float(np.linalg.norm(phi))
    if norm == 0.0:
        return np.zeros((T.shape[0], 0), dtype=complex)
    cutoff = tol.rank_tol * max(numerics.operator_norm(T), np.finfo(float).tiny)
    columns = [phi / norm]
    for _ in range(T.shape[0] - 1):
        Q = np.column_stack(columns)
        w = T @ columns[-1]
        for _ in range(2):
            w = w - Q @ (Q.conj().T @ w)
        size = float(np.linalg.norm(w))
        if size <= cutoff:
            break
        columns.append(w / size)
    return np.column_stack(columns)


def restricted_radius(T, phi, tol: Optional[Tolerances] = None) -> Tuple[float, np.ndarray]:
    """Spectral radius of T on the cyclic subspace of phi, with that subspace's basis"""
    Q = cyclic_basis(T, phi, tol)
    if Q.shape[1] == 0:
        return 0.0, Q
    H = Q.conj().T @ np.asarray(T, dtype=complex) @ Q
    return numerics.spectral_radius(H), Q


def truncation_tail_bound(rho: float, S_norm: float, K: int) -> float:
    """rho^(2K) ||S_inf|| / (1 - rho^2): bound on ||S_inf - S_K||"""
    if rho >= 1.0:
        return float("inf")
    return float(rho ** (2 * K) * S_norm / (1.0 - rho ** 2))


def detect_period(T: np.ndarray, max_period: int, tol: Optional[Tolerances] = None) -> Optional[int]:
    """Smallest N <= max_period with T^N = I, else None"""
    tol = resolve(tol)
    identity = np.eye(T.shape[0], dtype=complex)
    power = identity
    for N in range(1, max_period + 1):
        power = T @ power
        if numerics.operator_norm(power - identity) <= tol.tol_identity:
            return N
    return None


def _spectral_clusters(values: np.ndarray, scale: float) -> List[List[int]]:
    """Index groups of eigenvalues that may come from one defective block.

    Rounding splits a size-m Jordan block into m eigenvalues on a circle of
    radius about eps^(1/m), so a group of m values is accepted when it fits in
    a disk of radius scale * BLOCK_MERGE_TOL^(2/m) around its mean. Largest
    groups are taken first.
    """
    remaining = list(range(len(values)))
    groups: List[List[int]] = []
    while remaining:
        best = [remaining[0]]
        for seed in remaining:
            ordered = sorted(remaining, key=lambda j: abs(values[j] - values[seed]))
            for m in range(len(ordered), len(best), -1):
                members = ordered[:m]
                center = np.mean(values[members])
                if np.max(np.abs(values[members] - center)) <= scale * BLOCK_MERGE_TOL ** (2.0 / m):
                    best = members
                    break
        groups.append(sorted(best))
        remaining = [j for j in remaining if j not in best]
    return groups


# ==========================================
# GENERATION AND DECAY
# ==========================================

def iterate(T, phi, K: int) -> FrameSystem:
    """(phi, T phi, ..., T^(K-1) phi) with index origin 0"""
    T, phi = _operator_and_vector(T, phi)
    if K < 1:
        raise ParamRangeError(f"number of steps must be >= 1, got {K}")
    vectors = [phi]
    for _ in range(K - 1):
        vectors.append(T @ vectors[-1])
    return FrameSystem(dim=phi.size, vectors=np.vstack(vectors), index_origin=0)


def power_decay_test(T, tol: Optional[Tolerances] = None) -> PowerDecayReport:
    """(T*)^n phi -> 0 for every phi exactly when the spectral radius is below 1"""
    tol = resolve(tol)
    radius = numerics.spectral_radius(T)
    return PowerDecayReport(decays=radius < 1.0 - tol.radius_margin, spectral_radius=radius)


def bessel_test(T, phi, tol: Optional[Tolerances] = None) -> BesselReport:
    """Bessel property of the infinite orbit, decided on the cyclic subspace of phi"""
    tol = resolve(tol)
    T, phi = _operator_and_vector(T, phi)
    if not np.any(phi):
        return BesselReport(bessel=True, trace_bound=0.0, restricted_radius=0.0,
                            cyclic_dim=0, degenerate=True)
    rho, Q = restricted_radius(T, phi, tol)
    if rho >= 1.0 - tol.radius_margin:
        return BesselReport(bessel=False, trace_bound=None, restricted_radius=rho, cyclic_dim=Q.shape[1])
    H = Q.conj().T @ T @ Q
    psi = Q.conj().T @ phi
    S_restricted = numerics.stein_solve(H, np.outer(psi, psi.conj()), tol)
    return BesselReport(
        bessel=True,
        trace_bound=float(np.trace(S_restricted).real),
        restricted_radius=rho,
        cyclic_dim=Q.shape[1],
    )


def orbit_frame_operator(T, phi, tol: Optional[Tolerances] = None) -> OrbitOperator:
    """S = sum_k T^k phi phi* (T*)^k solved on the cyclic subspace of phi"""
    tol = resolve(tol)
    T, phi = _operator_and_vector(T, phi)
    rho, Q = restricted_radius(T, phi, tol)
    if Q.shape[1] == 0:
        raise ParamRangeError("the zero generator has no orbit frame operator")
    if rho >= 1.0 - tol.radius_margin:
        raise SpectralRadiusError(
            f"restricted spectral radius {rho:.6g} >= 1: the orbit is not a Bessel sequence",
            details={"restricted_radius": rho},
        )
    H = Q.conj().T @ T @ Q
    psi = Q.conj().T @ phi
    S = Q @ numerics.stein_solve(H, np.outer(psi, psi.conj()), tol) @ Q.conj().T
    S = 0.5 * (S + S.conj().T)
    return OrbitOperator(S=S, report=bounds_from_operator(S, tol), restricted_radius=rho, cyclic_dim=Q.shape[1])


# ==========================================
# OPERATOR RECOVERY
# ==========================================

def recover_operator(F: FrameSystem, tol: Optional[Tolerances] = None) -> RecoveryResult:
    """Least-norm T_hat with T_hat f_k = f_(k+1), plus consistency and shift-invariance flags"""
    tol = resolve(tol)
    if len(F) < 2:
        raise ParamRangeError("operator recovery needs at least two vectors")
    U = synthesis_matrix(F)
    F1, F2 = U[:, :-1], U[:, 1:]
    T_hat = F2 @ numerics.pinv(F1, tol=tol)

    scale = max(float(np.max(np.linalg.norm(U, axis=0))), np.finfo(float).tiny)
    residual = float(np.max(np.linalg.norm(T_hat @ F1 - F2, axis=0))) / scale

    # kernel vectors with vanishing last coefficient must stay in the kernel after the right shift
    kernel = numerics.null_space(U, tol)
    shift_invariant = True
    if kernel.shape[1] > 0:
        inner = numerics.null_space(kernel[-1:, :], tol)
        truncated = kernel @ inner
        if truncated.shape[1] > 0:
            shifted = np.vstack([np.zeros((1, truncated.shape[1])), truncated[:-1, :]])
            defect = numerics.operator_norm(U @ shifted) / scale
            shift_invariant = defect <= tol.tol_identity

    consistent = residual <= tol.tol_identity
    logger.debug("recovered operator from %d vectors: residual %.3g", len(F), residual)
    return RecoveryResult(
        T_hat=T_hat,
        residual=residual,
        consistent=consistent,
        kernel_shift_invariant=shift_invariant,
        norm_of_T_hat=numerics.operator_norm(T_hat),
    )


def linear_independence_test(F: FrameSystem, tol: Optional[Tolerances] = None) -> IndependenceReport:
    rank = numerics.matrix_rank(synthesis_matrix(F), tol)
    return IndependenceReport(independent=rank == len(F), rank=rank)


def range_diagnostics(T, lambda_grid: Optional[Sequence[complex]] = None,
                      tol: Optional[Tolerances] = None) -> RangeDiagnostics:
    """Rank defect and smallest singular value of T - lambda I over eigenvalues plus a grid"""
    tol = resolve(tol)
    T = numerics.as_square(T, "T")
    d = T.shape[0]
    merge = tol.tol_identity * max(1.0, numerics.operator_norm(T))
    candidates = sorted(numerics.eigenvalues(T), key=lambda z: (round(z.real, 12), round(z.imag, 12)))
    candidates += [complex(z) for z in (lambda_grid or [])]
    points: List[complex] = []
    for z in candidates:
        if all(abs(z - p) > merge for p in points):
            points.append(z)

    report = []
    for z in points:
        shifted = T - z * np.eye(d)
        singulars = numerics.svd(shifted).singulars
        rank = numerics.matrix_rank(shifted, tol)
        report.append(RangePoint(point=complex(z), rank_defect=d - rank,
                                 smallest_singular=float(singulars[-1])))
    return RangeDiagnostics(points=report, rank=numerics.matrix_rank(T, tol))


# ==========================================
# OPERATOR RESPONSE AND STEIN CHARACTERIZATION
# ==========================================

def _unit(e, tol: Tolerances) -> np.ndarray:
    e = numerics.as_vector(e, "e")
    if abs(float(np.linalg.norm(e)) - 1.0) > tol.tol_identity:
        raise ParamRangeError(f"e must be a unit vector, got norm {np.linalg.norm(e):.6g}")
    return e


def operator_response_matrix(g, e, tol: Optional[Tolerances] = None) -> np.ndarray:
    """Matrix of the rank-one map f -> <f, g> e"""
    tol = resolve(tol)
    e = _unit(e, tol)
    g = numerics.as_vector(g, "g")
    if g.size != e.size:
        raise DimensionMismatchError(f"g has dimension {g.size}, e has dimension {e.size}")
    return np.outer(e, g.conj())


def operator_response(g, e, f, tol: Optional[Tolerances] = None) -> np.ndarray:
    """<f, g> e"""
    Lambda = operator_response_matrix(g, e, tol)
    f = numerics.as_vector(f, "f")
    if f.size != Lambda.shape[1]:
        raise DimensionMismatchError(f"f has dimension {f.size}, expected {Lambda.shape[1]}")
    return Lambda @ f


def representation_check(T, f1, tol: Optional[Tolerances] = None) -> RepresentationReport:
    """Decay of (T*)^n plus an invertible solution of T S T* = S - f1 f1*"""
    tol = resolve(tol)
    T, f1 = _operator_and_vector(T, f1)
    decay = power_decay_test(T, tol)
    if not decay.decays:
        return RepresentationReport(
            condition_i=False, spectral_radius=decay.spectral_radius, S=None,
            S_invertible=False, stein_residual=None, is_frame=False, bounds=None,
        )
    W = np.outer(f1, f1.conj())
    S = numerics.stein_solve(T, W, tol)
    residual = numerics.operator_norm(T @ S @ T.conj().T - S + W)
    spectrum = numerics.herm_eig(S, tol).values
    lam_min, lam_max = float(spectrum[0]), float(spectrum[-1])
    invertible = lam_max > 0.0 and lam_min > tol.rank_tol * lam_max
    return RepresentationReport(
        condition_i=True,
        spectral_radius=decay.spectral_radius,
        S=S,
        S_invertible=invertible,
        stein_residual=residual,
        is_frame=invertible,
        bounds=(lam_min, lam_max) if invertible else None,
    )


def stein_identity_check(T, f1, n_max: int = 10, tol: Optional[Tolerances] = None) -> List[SteinIdentityStep]:
    """T^n S (T*)^n = S - sum_{k<n} T^k f1 f1* (T*)^k and the decay of <S (T*)^n f, (T*)^n f>"""
    tol = resolve(tol)
    T, f1 = _operator_and_vector(T, f1)
    S = numerics.stein_solve(T, np.outer(f1, f1.conj()), tol)
    S_norm = max(numerics.operator_norm(S), np.finfo(float).tiny)
    steps = []
    partial = np.zeros_like(S)
    power = np.eye(T.shape[0], dtype=complex)
    for n in range(n_max + 1):
        left = power @ S @ power.conj().T
        defect = numerics.operator_norm(left - (S - partial)) / S_norm
        steps.append(SteinIdentityStep(n=n, identity_defect=defect,
                                       tail_quadratic=numerics.operator_norm(left)))
        orbit = power @ f1
        partial = partial + np.outer(orbit, orbit.conj())
        power = T @ power
    return steps


def frame_generator_test(T, phi, tol: Optional[Tolerances] = None) -> MembershipReport:
    """Is {T^k phi}_{k>=0} a frame for the whole space?"""
    tol = resolve(tol)
    T, phi = _operator_and_vector(T, phi)
    if not np.any(phi):
        return MembershipReport(member=False, reason="zero generator")
    bessel = bessel_test(T, phi, tol)
    if not bessel.bessel:
        return MembershipReport(member=False, reason=BESSEL_FAILS)
    if bessel.cyclic_dim < T.shape[0]:
        return MembershipReport(member=False, reason="not cyclic")
    orbit = orbit_frame_operator(T, phi, tol)
    if not orbit.report.spans_space:
        return MembershipReport(member=False, reason="not cyclic")
    return MembershipReport(member=True, witness=phi)


# ==========================================
# MULTIPLICATION-OPERATOR REPRESENTATION
# ==========================================

def multiplication_rep(T, phi, tol: Optional[Tolerances] = None) -> SpectralRep:
    """Unitary V onto L^2(sigma(T), mu_phi) with V T V* = multiplication by x"""
    tol = resolve(tol)
    T = numerics.ensure_hermitian(T, tol, "T")
    phi = numerics.as_vector(phi, "phi")
    if phi.size != T.shape[0]:
        raise DimensionMismatchError(f"phi has dimension {phi.size}, T acts on C^{T.shape[0]}")
    decomposition = numerics.herm_eig(T, tol)
    values, Q = decomposition.values, decomposition.vectors

    spread = float(values[-1] - values[0])
    merge = tol.node_merge_tol * spread
    groups: List[List[int]] = [[0]]
    for j in range(1, len(values)):
        if values[j] - values[groups[-1][0]] <= merge:
            groups[-1].append(j)
        else:
            groups.append([j])
    if any(len(group) > 1 for group in groups):
        repeated = [float(values[group[0]]) for group in groups if len(group) > 1]
        logger.warning("merged spectral nodes at %s", repeated)
        raise NotCyclicError(
            "T has a repeated eigenvalue: no vector is cyclic",
            details={"repeated_eigenvalues": repeated},
        )

    amplitudes = Q.conj().T @ phi
    weights = np.abs(amplitudes) ** 2
    threshold = tol.rank_tol * float(np.linalg.norm(phi))
    if not np.all(np.abs(amplitudes) > threshold) or threshold == 0.0:
        vanishing = [float(values[j]) for j in range(len(values)) if abs(amplitudes[j]) <= threshold]
        raise NotCyclicError(
            "phi has no component in some eigenspace: the spectral measure misses a node",
            details={"vanishing_nodes": vanishing},
        )

    # V h = (q_i* h / a_i)_i and V* u = sum_i u_i a_i q_i
    V = (Q.conj().T) / amplitudes[:, None]
    V_star = Q * amplitudes[None, :]
    root = np.sqrt(weights)
    euclidean = root[:, None] * V  # V in orthonormal coordinates of L^2(mu)
    identity = np.eye(len(values))
    unitarity = max(
        numerics.operator_norm(euclidean.conj().T @ euclidean - identity),
        numerics.operator_norm(euclidean @ euclidean.conj().T - identity),
    )
    multiplied = root[:, None] * (V @ T @ V_star) / root[None, :]
    multiplication = numerics.operator_norm(multiplied - np.diag(values))
    return SpectralRep(
        nodes=values.copy(),
        weights=weights,
        transform=V,
        total_mass=float(np.sum(weights)),
        unitarity_defect=unitarity,
        multiplication_defect=multiplication,
    )


def spectral_transform(rep: SpectralRep, T, phi, coefficients: Sequence[complex]) -> Tuple[np.ndarray, float]:
    """V applied to p(T) phi for p = sum_j c_j x^j, and | ||p(T)phi||^2 - int |p|^2 dmu |"""
    T, phi = _operator_and_vector(T, phi)
    image = np.zeros_like(phi)
    for c in reversed(list(coefficients)):
        image = T @ image + complex(c) * phi
    values = rep.transform @ image
    isometry = abs(float(np.vdot(image, image).real) - float(np.sum(np.abs(values) ** 2 * rep.weights)))
    return values, isometry


# ==========================================
# Z-INDEXED ORBITS
# ==========================================

def _invertible(T: np.ndarray, tol: Tolerances) -> np.ndarray:
    singulars = numerics.svd(T).singulars
    if singulars[-1] <= numerics.rank_cutoff(singulars, tol) or singulars[0] == 0.0:
        raise SingularOperatorError("T is not invertible", details={"smallest_singular": float(singulars[-1])})
    return scipy.linalg.inv(T)


def z_orbit(T, f0, K: int, tol: Optional[Tolerances] = None) -> Tuple[FrameSystem, Optional[int]]:
    """{T^k f0}_{k=-K..K}, or the exact group orbit k = 0..N-1 when T^N = I for some N <= 2K+1"""
    tol = resolve(tol)
    T, f0 = _operator_and_vector(T, f0)
    period = detect_period(T, 2 * K + 1, tol)
    if period is not None:
        logger.debug("T^%d = I: using the exact orbit", period)
        return iterate(T, f0, period), period
    T_inv = _invertible(T, tol)
    backward = [f0]
    for _ in range(K):
        backward.append(T_inv @ backward[-1])
    forward = [f0]
    for _ in range(K):
        forward.append(T @ forward[-1])
    vectors = list(reversed(backward[1:])) + forward
    return FrameSystem(dim=f0.size, vectors=np.vstack(vectors), index_origin=-K), None


def z_tight_unitary_check(T, f0, K: int, tol: Optional[Tolerances] = None) -> ZTightReport:
    """Tightness of the Z-indexed orbit against unitarity of T"""
    tol = resolve(tol)
    T, f0 = _operator_and_vector(T, f0)
    if K < 1:
        raise ParamRangeError(f"truncation K must be >= 1, got {K}")
    _invertible(T, tol)
    system, period = z_orbit(T, f0, K, tol)
    report = frame_bounds(system, tol)
    identity = np.eye(T.shape[0])
    isometry = max(
        numerics.operator_norm(T.conj().T @ T - identity),
        numerics.operator_norm(T @ T.conj().T - identity),
    )
    result = ZTightReport(
        tight=report.tight,
        tightness_defect=report.tightness_defect,
        isometry_defect=isometry,
        unitary=isometry <= tol.tol_identity,
        is_frame=report.spans_space,
        period=period,
        index_origin=system.index_origin,
        length=len(system),
        bounds=(report.lower_bound, report.upper_bound),
    )
    if not result.implication_holds:
        logger.warning("tight exact orbit with non-unitary T (isometry defect %.3g)", isometry)
    return result


def dual_operator_check(T, f0, U, g0, K: int, tol: Optional[Tolerances] = None) -> DualOperatorReport:
    """Dual orbits {T^k f0}, {U^k g0}: reconstruction defect, ||T U* - I|| and U = T"""
    tol = resolve(tol)
    T, f0 = _operator_and_vector(T, f0)
    U, g0 = _operator_and_vector(U, g0)
    if T.shape != U.shape:
        raise DimensionMismatchError(f"T has shape {T.shape} but U has shape {U.shape}")
    if K < 0:
        raise ParamRangeError(f"truncation K must be >= 0, got {K}")

    period_T = detect_period(T, 2 * K + 1, tol)
    period_U = detect_period(U, 2 * K + 1, tol)
    if period_T is not None and period_U is not None:
        period = int(np.lcm(period_T, period_U))
        exponents = range(period)
    else:
        period = None
        exponents = range(-K, K + 1)

    T_inv = _invertible(T, tol) if period is None and K > 0 else None
    U_inv = _invertible(U, tol) if period is None and K > 0 else None

    def power(M, M_inv, k):
        if k >= 0:
            return np.linalg.matrix_power(M, k)
        return np.linalg.matrix_power(M_inv, -k)

    identity = np.eye(T.shape[0])
    reconstruction = np.zeros_like(identity, dtype=complex)
    for k in exponents:
        reconstruction += np.outer(power(T, T_inv, k) @ f0, (power(U, U_inv, k) @ g0).conj())
    reconstruction_defect = numerics.operator_norm(reconstruction - identity)
    tu_defect = numerics.operator_norm(T @ U.conj().T - identity)
    isometry = numerics.operator_norm(T.conj().T @ T - identity)
    scale = max(1.0, numerics.operator_norm(T))
    return DualOperatorReport(
        reconstruction_defect=reconstruction_defect,
        TU_star_defect=tu_defect,
        operators_equal=numerics.operator_norm(U - T) <= tol.tol_identity * scale,
        hypotheses_hold=isometry <= tol.tol_identity and reconstruction_defect <= tol.tol_identity,
        period=period,
    )


# ==========================================
# BLOCK DECOMPOSITION SEARCH
# ==========================================

def generalized_eigenspaces(T, tol: Optional[Tolerances] = None) -> List[Tuple[complex, np.ndarray]]:
    """(eigenvalue, orthonormal basis of its generalized eigenspace), largest modulus first.

    Each basis is the leading block of a Schur form reordered to put the
    cluster's eigenvalues first.
    """
    tol = resolve(tol)
    T = numerics.as_square(T, "T")
    values = numerics.eigenvalues(T)
    groups = _spectral_clusters(values, max(1.0, numerics.operator_norm(T)))
    centers = [complex(np.mean(values[group])) for group in groups]
    order = sorted(range(len(groups)),
                   key=lambda g: (-round(abs(centers[g]), 12), round(float(np.angle(centers[g])), 12)))
    spaces = []
    for g in order:
        group, center = groups[g], centers[g]
        inner = float(np.max(np.abs(values[group] - center)))
        others = [abs(values[j] - center) for j in range(len(values)) if j not in group]
        radius = inner + 0.5 * (min(others) - inner) if others else np.inf
        _, Z, selected = scipy.linalg.schur(T, output="complex", sort=lambda z: abs(z - center) <= radius)
        if selected != len(group):
            logger.warning("eigenvalue %s: reordered Schur form selected %d values, cluster has %d",
                           center, selected, len(group))
        if len(group) > 1:
            logger.debug("merged %d eigenvalues near %s into one block", len(group), center)
        spaces.append((center, Z[:, :selected]))
    return spaces


def chain_head(T: np.ndarray, eigenvalue: complex, basis: np.ndarray, tol: Tolerances) -> np.ndarray:
    """Unit vector of the block orthogonal to ker (T - lambda)^(m-1): a cyclic vector when one exists"""
    m = basis.shape[1]
    H = basis.conj().T @ T @ basis - eigenvalue * np.eye(m)
    if m == 1:
        head = np.ones(1, dtype=complex)
    else:
        lower = numerics.null_space(np.linalg.matrix_power(H, m - 1), tol)
        complement = numerics.null_space(lower.conj().T, tol) if lower.shape[1] else np.eye(m)
        head = complement[:, 0] if complement.shape[1] else np.ones(m, dtype=complex) / np.sqrt(m)
    return numerics.canonical_phase(basis @ head)


def _certify_block(T: np.ndarray, eigenvalue: complex, basis: np.ndarray, trials: int,
                   seed: int, tol: Tolerances) -> BlockCertificate:
    m = basis.shape[1]
    H = basis.conj().T @ T @ basis
    invariance = numerics.operator_norm(T @ basis - basis @ H)
    rho = numerics.spectral_radius(H)
    common = dict(eigenvalue=eigenvalue, basis=basis, restricted_radius=rho, invariance_defect=invariance)
    if rho >= 1.0 - tol.radius_margin:
        return BlockCertificate(certified=False, reason=f"{BESSEL_FAILS}: restricted spectral radius {rho:.6g} >= 1",
                                **common)

    candidates = [basis.conj().T @ chain_head(T, eigenvalue, basis, tol), np.ones(m, dtype=complex)]
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        candidates.append(rng.standard_normal(m) + 1j * rng.standard_normal(m))

    for attempt, psi in enumerate(candidates, start=1):
        check = representation_check(H, psi, tol)
        if check.is_frame:
            generator = numerics.canonical_phase(basis @ psi)
            return BlockCertificate(certified=True, generator=generator, block_bounds=check.bounds,
                                    attempts=attempt, **common)
    return BlockCertificate(certified=False, reason=f"no cyclic generator among {len(candidates)} candidates",
                            attempts=len(candidates), **common)


def conjecture_explore(T, trials: int = 100, seed: int = 0, tol: Optional[Tolerances] = None) -> ConjectureCertificate:
    """Invariant block decomposition with a certified frame generator per block"""
    tol = resolve(tol)
    T = numerics.as_square(T, "T")
    if trials < 0:
        raise ParamRangeError(f"trials must be >= 0, got {trials}")
    blocks = []
    for index, (eigenvalue, basis) in enumerate(generalized_eigenspaces(T, tol)):
        block = _certify_block(T, eigenvalue, basis, trials, seed + index, tol)
        logger.debug("block %d (eigenvalue %s, dim %d): %s", index, eigenvalue, block.dim,
                     "certified" if block.certified else block.reason)
        blocks.append(block)
    d = T.shape[0]
    total_dim = sum(block.dim for block in blocks)
    # the blocks must be independent, not just add up to d
    span_rank = numerics.matrix_rank(np.hstack([block.basis for block in blocks]), tol)
    return ConjectureCertificate(
        blocks=blocks,
        covers_space=total_dim == d and span_rank == d and all(block.certified for block in blocks),
        span_rank=span_rank,
        invariance_defect=max(block.invariance_defect for block in blocks),
    )


def frame_operator_class_test(T, tol: Optional[Tolerances] = None) -> MembershipReport:
    """Does some phi make {T^k phi}_{k>=0} a frame? Needs radius < 1 and a cyclic vector"""
    tol = resolve(tol)
    T = numerics.as_square(T, "T")
    decay = power_decay_test(T, tol)
    if not decay.decays:
        return MembershipReport(member=False, reason=f"spectral radius {decay.spectral_radius:.6g} >= 1")
    d = T.shape[0]
    spaces = generalized_eigenspaces(T, tol)
    for eigenvalue, basis in spaces:
        geometric = d - numerics.matrix_rank(T - eigenvalue * np.eye(d), tol)
        if geometric > 1:
            return MembershipReport(member=False, reason=f"derogatory: eigenvalue {eigenvalue:.6g} "
                                                         f"has geometric multiplicity {geometric}")
    witness = sum(chain_head(T, eigenvalue, basis, tol) for eigenvalue, basis in spaces)
    if representation_check(T, witness, tol).is_frame:
        return MembershipReport(member=True, witness=witness)
    return MembershipReport(member=False, reason="no certified generator for the whole space")
