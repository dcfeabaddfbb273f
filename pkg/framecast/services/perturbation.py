"""
Perturbation Stability Service
Explicit perturbed frame bounds, a certified perturbation fit and the sampled
check that a perturbed orbit keeps its operator representation
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from framecast.config import Tolerances, resolve
from framecast.errors import (
    AdmissibilityError,
    DimensionMismatchError,
    NotAFrameError,
    ParamRangeError,
)
from framecast.log import get_logger
from framecast.services import numerics
from framecast.services.dynamics import RecoveryResult, recover_operator
from framecast.services.frames import FrameSystem, frame_bounds, synthesis_matrix

logger = get_logger(__name__)


@dataclass(frozen=True)
class PerturbationParams:
    lambda1: float = 0.0
    lambda2: float = 0.0
    mu: float = 0.0
    reference_bound: Optional[float] = None

    def __post_init__(self):
        for name in ("lambda1", "lambda2", "mu"):
            if getattr(self, name) < 0:
                raise ParamRangeError(f"{name} must be >= 0, got {getattr(self, name)}")

    def admissible_for(self, A: float) -> bool:
        return max(self.lambda1 + self.mu / np.sqrt(A), self.lambda2) < 1.0

    @property
    def admissible(self) -> Optional[bool]:
        if self.reference_bound is None:
            return None
        return self.admissible_for(self.reference_bound)


@dataclass(frozen=True)
class PerturbationReport:
    params: PerturbationParams
    predicted_bounds: Optional[Tuple[float, float]]
    actual_bounds: Optional[Tuple[float, float]]
    sandwich_ok: bool
    max_violation_ratio: Optional[float] = None
    hypothesis_holds: Optional[bool] = None
    representation: Optional[RecoveryResult] = None
    kernel_inclusion_defect: Optional[float] = None
    trials: int = 0
    seed: Optional[int] = None


@dataclass(frozen=True)
class ScalarPerturbationReport:
    """The perturbation hypothesis for one fixed f, in terms of scalar sequences"""
    h_sum: float
    t_sum: float
    max_violation_ratio: float


def _check_shapes(F: FrameSystem, G: FrameSystem) -> None:
    if F.dim != G.dim or len(F) != len(G):
        raise DimensionMismatchError(
            f"systems differ in shape: ({F.dim}, {len(F)}) vs ({G.dim}, {len(G)})"
        )


def _check_lambda(value: float, name: str) -> None:
    if not 0.0 < value < 1.0:
        raise ParamRangeError(f"{name} must lie in (0, 1), got {value}")


def _unit_gaussian(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return z / np.linalg.norm(z)


# ==========================================
# BOUNDS
# ==========================================

def casazza_bounds(A: float, B: float, p: PerturbationParams) -> Tuple[float, float]:
    """Frame bounds of a perturbed system:
    A (1 - (l1 + l2 + mu/sqrt(A)) / (1 + l2))^2 and B (1 + (l1 + l2 + mu/sqrt(B)) / (1 - l2))^2
    """
    if A <= 0 or B <= 0:
        raise ParamRangeError(f"frame bounds must be positive, got A={A}, B={B}")
    if not p.admissible_for(A):
        raise AdmissibilityError(
            f"max(lambda1 + mu/sqrt(A), lambda2) = "
            f"{max(p.lambda1 + p.mu / np.sqrt(A), p.lambda2):.6g} is not below 1",
            details={"lambda1": p.lambda1, "lambda2": p.lambda2, "mu": p.mu, "A": A},
        )
    lower = A * (1.0 - (p.lambda1 + p.lambda2 + p.mu / np.sqrt(A)) / (1.0 + p.lambda2)) ** 2
    upper = B * (1.0 + (p.lambda1 + p.lambda2 + p.mu / np.sqrt(B)) / (1.0 - p.lambda2)) ** 2
    return float(lower), float(upper)


def perturbation_fit(F: FrameSystem, G: FrameSystem, tol: Optional[Tolerances] = None) -> PerturbationParams:
    """Certified triple (0, 0, ||U_F - U_G||)"""
    _check_shapes(F, G)
    mu = numerics.operator_norm(synthesis_matrix(F) - synthesis_matrix(G))
    reference = frame_bounds(F, tol)
    A = reference.lower_bound if reference.spans_space else None
    return PerturbationParams(lambda1=0.0, lambda2=0.0, mu=mu, reference_bound=A)


def kernel_inclusion_defect(F: FrameSystem, G: FrameSystem, tol: Optional[Tolerances] = None) -> float:
    """||U_F P|| / ||U_F|| with P the projection onto ker U_G; zero iff ker U_G lies in ker U_F"""
    _check_shapes(F, G)
    U_F = synthesis_matrix(F)
    kernel = numerics.null_space(synthesis_matrix(G), tol)
    if kernel.shape[1] == 0:
        return 0.0
    return numerics.operator_norm(U_F @ kernel) / max(numerics.operator_norm(U_F), np.finfo(float).tiny)


def sandwich_verify(F: FrameSystem, G: FrameSystem, tol: Optional[Tolerances] = None) -> PerturbationReport:
    """Predicted bounds from the certified fit against the actual bounds of G"""
    tol = resolve(tol)
    _check_shapes(F, G)
    reference = frame_bounds(F, tol)
    if not reference.spans_space:
        raise NotAFrameError(f"reference system spans rank {reference.rank} < {F.dim}")
    params = perturbation_fit(F, G, tol)
    predicted = casazza_bounds(reference.lower_bound, reference.upper_bound, params)
    actual_report = frame_bounds(G, tol)
    actual = (actual_report.lower_bound, actual_report.upper_bound)
    return PerturbationReport(
        params=params,
        predicted_bounds=predicted,
        actual_bounds=actual,
        sandwich_ok=_sandwiched(predicted, actual, actual_report.spans_space, tol),
    )


def _sandwiched(predicted: Tuple[float, float], actual: Tuple[float, float], spans: bool,
                tol: Tolerances) -> bool:
    slack = tol.tol_identity * max(predicted[1], 1.0)
    return spans and predicted[0] <= actual[0] + slack and actual[1] <= predicted[1] + slack


# ==========================================
# OPERATOR REPRESENTATION UNDER PERTURBATION
# ==========================================

def _violation(h: np.ndarray, t: np.ndarray, c: np.ndarray, lambda1: float, lambda2: float) -> float:
    lhs = abs(np.dot(c, h - t))
    rhs = lambda1 * abs(np.dot(c, h)) + lambda2 * abs(np.dot(c, t))
    return float(lhs - rhs)


def prop28_check(F: FrameSystem, G: FrameSystem, lambda1: float, lambda2: float,
                 trials: Optional[int] = None, seed: Optional[int] = None,
                 tol: Optional[Tolerances] = None) -> PerturbationReport:
    """Sample |sum c_k <f_k - g_k, f>| <= l1 |sum c_k <f_k, f>| + l2 |sum c_k <g_k, f>| and,
    when no violation is found, bound G and recover its representing operator"""
    tol = resolve(tol)
    trials = tol.default_trials if trials is None else trials
    seed = tol.default_seed if seed is None else seed
    _check_lambda(lambda1, "lambda1")
    _check_lambda(lambda2, "lambda2")
    _check_shapes(F, G)
    if trials < 1:
        raise ParamRangeError(f"trials must be >= 1, got {trials}")
    reference = frame_bounds(F, tol)
    if not reference.spans_space:
        raise NotAFrameError(f"reference system spans rank {reference.rank} < {F.dim}")

    scale = numerics.operator_norm(synthesis_matrix(F)) + numerics.operator_norm(synthesis_matrix(G))
    worst = -np.inf
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        f = _unit_gaussian(rng, F.dim)
        c = _unit_gaussian(rng, len(F))
        h = F.vectors @ f.conj()
        t = G.vectors @ f.conj()
        worst = max(worst, _violation(h, t, c, lambda1, lambda2) / scale)
    holds = worst <= tol.tol_identity
    logger.debug("perturbation hypothesis over %d trials: max violation ratio %.3g", trials, worst)

    params = PerturbationParams(lambda1=lambda1, lambda2=lambda2, mu=0.0,
                                reference_bound=reference.lower_bound)
    inclusion = kernel_inclusion_defect(F, G, tol)
    if not holds:
        return PerturbationReport(
            params=params, predicted_bounds=None, actual_bounds=None, sandwich_ok=False,
            max_violation_ratio=float(worst), hypothesis_holds=False,
            kernel_inclusion_defect=inclusion, trials=trials, seed=seed,
        )

    predicted = casazza_bounds(reference.lower_bound, reference.upper_bound, params)
    actual_report = frame_bounds(G, tol)
    actual = (actual_report.lower_bound, actual_report.upper_bound)
    return PerturbationReport(
        params=params,
        predicted_bounds=predicted,
        actual_bounds=actual,
        sandwich_ok=_sandwiched(predicted, actual, actual_report.spans_space, tol),
        max_violation_ratio=float(worst),
        hypothesis_holds=True,
        representation=recover_operator(G, tol),
        kernel_inclusion_defect=inclusion,
        trials=trials,
        seed=seed,
    )


def scalar_perturbation_check(F: FrameSystem, G: FrameSystem, f, lambda1: float, lambda2: float,
                              trials: int = 1000, seed: int = 0) -> ScalarPerturbationReport:
    """The hypothesis for one f through h_k = <f_k, f> and t_k = <g_k, f>"""
    _check_lambda(lambda1, "lambda1")
    _check_lambda(lambda2, "lambda2")
    _check_shapes(F, G)
    f = numerics.as_vector(f, "f")
    if f.size != F.dim:
        raise DimensionMismatchError(f"f has dimension {f.size}, systems have dimension {F.dim}")
    h = F.vectors @ f.conj()
    t = G.vectors @ f.conj()
    scale = max(float(np.linalg.norm(h) + np.linalg.norm(t)), np.finfo(float).tiny)
    worst = -np.inf
    for trial in range(trials):
        c = _unit_gaussian(np.random.default_rng([seed, trial]), len(F))
        worst = max(worst, _violation(h, t, c, lambda1, lambda2) / scale)
    return ScalarPerturbationReport(
        h_sum=float(np.sum(np.abs(h) ** 2)),
        t_sum=float(np.sum(np.abs(t) ** 2)),
        max_violation_ratio=float(worst),
    )
