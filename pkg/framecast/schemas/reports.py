"""
Report Schemas
One pydantic model per analysis result, built from the service dataclasses
"""

from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from framecast.schemas.documents import (
    encode_complex,
    encode_matrix,
    encode_real,
    encode_reals,
    encode_vector,
)

Complex = List[float]
ComplexVector = List[List[float]]
ComplexMatrix = List[List[List[float]]]


def _optional_real(x) -> Optional[float]:
    return None if x is None else encode_real(x)


def _optional_pair(pair) -> Optional[List[float]]:
    return None if pair is None else [encode_real(pair[0]), encode_real(pair[1])]


# ==========================================
# ENUMS
# ==========================================

class FrameStatus(str, Enum):
    FRAME = "frame"
    FRAME_SEQUENCE_ONLY = "frame_sequence_only"


# ==========================================
# FRAMES
# ==========================================

class FrameSequenceModel(BaseModel):
    restricted_spectrum: List[float] = Field(..., description="Spectrum of U*U on N(U)-perp")
    full_spectrum: List[float] = Field(..., description="Spectrum of U*U")
    synthesis_norm_sq: float
    contained: bool = Field(..., description="Restricted spectrum inside ]0, ||U||^2]")
    full_spectrum_bound: bool = Field(..., description="Full spectrum inside [0, ||U||^2]")

    @classmethod
    def from_result(cls, result) -> "FrameSequenceModel":
        return cls(
            restricted_spectrum=encode_reals(result.restricted_spectrum),
            full_spectrum=encode_reals(result.full_spectrum),
            synthesis_norm_sq=encode_real(result.synthesis_norm_sq),
            contained=result.contained,
            full_spectrum_bound=result.full_spectrum_bound,
        )


class FrameBoundsModel(BaseModel):
    lower_bound: float = Field(..., description="Optimal lower bound (on the span when not a frame)")
    upper_bound: float = Field(..., description="Optimal upper bound")
    rank: int
    dim: int
    spans_space: bool
    tight: bool
    tightness_defect: float
    synthesis_norm_sq: float
    spectrum: List[float] = Field(..., description="Ascending eigenvalues of the frame operator")

    @classmethod
    def from_result(cls, result) -> "FrameBoundsModel":
        return cls(
            lower_bound=encode_real(result.lower_bound),
            upper_bound=encode_real(result.upper_bound),
            rank=result.rank,
            dim=result.dim,
            spans_space=result.spans_space,
            tight=result.tight,
            tightness_defect=encode_real(result.tightness_defect),
            synthesis_norm_sq=encode_real(result.synthesis_norm_sq),
            spectrum=encode_reals(result.spectrum),
        )


class FrameAnalysisReport(BaseModel):
    """Report of the analyze command"""
    status: FrameStatus
    length: int
    index_origin: int
    bounds: FrameBoundsModel
    frame_sequence: FrameSequenceModel
    orthogonal_witness: Optional[ComplexVector] = Field(
        None, description="Unit vector orthogonal to the span, when the system does not span"
    )


# ==========================================
# ITERATED SYSTEMS
# ==========================================

class InfiniteOrbitReport(BaseModel):
    """Closed-form frame operator of {T^k phi}_{k>=0}"""
    S: ComplexMatrix
    bounds: FrameBoundsModel
    status: FrameStatus
    restricted_radius: float
    cyclic_dim: int
    trace_bound: float = Field(..., description="sum_k ||T^k phi||^2")
    tail_bounds: Dict[str, float] = Field(..., description="Bound on ||S - S_K|| keyed by K")

    @classmethod
    def from_result(cls, orbit, trace_bound: float, tails: Dict[int, float]) -> "InfiniteOrbitReport":
        return cls(
            S=encode_matrix(orbit.S),
            bounds=FrameBoundsModel.from_result(orbit.report),
            status=FrameStatus.FRAME if orbit.report.spans_space else FrameStatus.FRAME_SEQUENCE_ONLY,
            restricted_radius=encode_real(orbit.restricted_radius),
            cyclic_dim=orbit.cyclic_dim,
            trace_bound=encode_real(trace_bound),
            tail_bounds={str(K): encode_real(value) for K, value in tails.items()},
        )


class RecoveryReport(BaseModel):
    T_hat: ComplexMatrix
    residual: float
    consistent: bool
    kernel_shift_invariant: bool
    norm_of_T_hat: float
    independent: Optional[bool] = None
    rank: Optional[int] = None

    @classmethod
    def from_result(cls, result, independence=None) -> "RecoveryReport":
        return cls(
            T_hat=encode_matrix(result.T_hat),
            residual=encode_real(result.residual),
            consistent=result.consistent,
            kernel_shift_invariant=result.kernel_shift_invariant,
            norm_of_T_hat=encode_real(result.norm_of_T_hat),
            independent=None if independence is None else independence.independent,
            rank=None if independence is None else independence.rank,
        )


class RangePointModel(BaseModel):
    point: Complex
    rank_defect: int
    smallest_singular: float
    dense_range: bool


class RangeDiagnosticsModel(BaseModel):
    rank: int
    closed_range: bool
    points: List[RangePointModel]

    @classmethod
    def from_result(cls, result) -> "RangeDiagnosticsModel":
        return cls(
            rank=result.rank,
            closed_range=result.closed_range,
            points=[
                RangePointModel(
                    point=encode_complex(p.point),
                    rank_defect=p.rank_defect,
                    smallest_singular=encode_real(p.smallest_singular),
                    dense_range=p.dense_range,
                )
                for p in result.points
            ],
        )


class SteinIdentityStepModel(BaseModel):
    n: int
    identity_defect: float
    tail_quadratic: float


class RepresentationCheckReport(BaseModel):
    """Stein characterization of {T^k f1} being a frame"""
    condition_i: bool = Field(..., description="(T*)^n f -> 0 for every f")
    spectral_radius: float
    S: Optional[ComplexMatrix] = None
    S_invertible: bool
    stein_residual: Optional[float] = None
    is_frame: bool
    bounds: Optional[List[float]] = None
    stein_identity: List[SteinIdentityStepModel] = Field(default_factory=list)
    range: RangeDiagnosticsModel

    @classmethod
    def from_result(cls, result, steps, diagnostics) -> "RepresentationCheckReport":
        return cls(
            condition_i=result.condition_i,
            spectral_radius=encode_real(result.spectral_radius),
            S=None if result.S is None else encode_matrix(result.S),
            S_invertible=result.S_invertible,
            stein_residual=_optional_real(result.stein_residual),
            is_frame=result.is_frame,
            bounds=_optional_pair(result.bounds),
            stein_identity=[
                SteinIdentityStepModel(
                    n=step.n,
                    identity_defect=encode_real(step.identity_defect),
                    tail_quadratic=encode_real(step.tail_quadratic),
                )
                for step in steps
            ],
            range=RangeDiagnosticsModel.from_result(diagnostics),
        )


class SpectralRepReport(BaseModel):
    """Multiplication-operator representation of Hermitian T"""
    nodes: List[float]
    weights: List[float]
    transform: ComplexMatrix
    total_mass: float
    unitarity_defect: float
    multiplication_defect: float
    transform_values: Optional[ComplexVector] = Field(None, description="V p(T) phi at the nodes")
    transform_isometry_defect: Optional[float] = None

    @classmethod
    def from_result(cls, rep, transformed=None) -> "SpectralRepReport":
        return cls(
            transform_values=None if transformed is None else encode_vector(transformed[0]),
            transform_isometry_defect=None if transformed is None else encode_real(transformed[1]),
            nodes=encode_reals(rep.nodes),
            weights=encode_reals(rep.weights),
            transform=encode_matrix(rep.transform),
            total_mass=encode_real(rep.total_mass),
            unitarity_defect=encode_real(rep.unitarity_defect),
            multiplication_defect=encode_real(rep.multiplication_defect),
        )


class ZTightModel(BaseModel):
    tight: bool
    tightness_defect: float
    isometry_defect: float
    unitary: bool
    is_frame: bool
    period: Optional[int] = None
    index_origin: int
    length: int
    bounds: List[float]
    certified_tight: bool

    @classmethod
    def from_result(cls, result) -> "ZTightModel":
        return cls(
            tight=result.tight,
            tightness_defect=encode_real(result.tightness_defect),
            isometry_defect=encode_real(result.isometry_defect),
            unitary=result.unitary,
            is_frame=result.is_frame,
            period=result.period,
            index_origin=result.index_origin,
            length=result.length,
            bounds=_optional_pair(result.bounds),
            certified_tight=result.certified_tight,
        )


# ==========================================
# MEMBERSHIP AND BLOCKS
# ==========================================

class MembershipModel(BaseModel):
    member: bool
    reason: Optional[str] = None
    witness: Optional[ComplexVector] = None

    @classmethod
    def from_result(cls, result) -> "MembershipModel":
        return cls(
            member=result.member,
            reason=result.reason,
            witness=None if result.witness is None else encode_vector(result.witness),
        )


class ClassifyReport(BaseModel):
    generator: MembershipModel = Field(..., description="Is {T^k phi} a frame?")
    operator: MembershipModel = Field(..., description="Does some phi make {T^k phi} a frame?")
    z_orbit: Optional[ZTightModel] = Field(None, description="Z-indexed orbit, when T is invertible")


class BlockModel(BaseModel):
    eigenvalue: Complex
    dim: int
    basis: ComplexMatrix
    restricted_radius: float
    invariance_defect: float
    certified: bool
    generator: Optional[ComplexVector] = None
    block_bounds: Optional[List[float]] = None
    reason: Optional[str] = None
    attempts: int = Field(
        ..., description="Candidates tried; the chain head comes first, then all-ones, then seeded random"
    )

    @classmethod
    def from_result(cls, block) -> "BlockModel":
        return cls(
            eigenvalue=encode_complex(block.eigenvalue),
            dim=block.dim,
            basis=encode_matrix(block.basis),
            restricted_radius=encode_real(block.restricted_radius),
            invariance_defect=encode_real(block.invariance_defect),
            certified=block.certified,
            generator=None if block.generator is None else encode_vector(block.generator),
            block_bounds=_optional_pair(block.block_bounds),
            reason=block.reason,
            attempts=block.attempts,
        )


class ConjectureReport(BaseModel):
    blocks: List[BlockModel]
    covers_space: bool
    span_rank: int = Field(..., description="Rank of the stacked block bases")
    invariance_defect: float
    trials: int
    seed: int

    @classmethod
    def from_result(cls, certificate, trials: int, seed: int) -> "ConjectureReport":
        return cls(
            blocks=[BlockModel.from_result(block) for block in certificate.blocks],
            covers_space=certificate.covers_space,
            span_rank=certificate.span_rank,
            invariance_defect=encode_real(certificate.invariance_defect),
            trials=trials,
            seed=seed,
        )


# ==========================================
# PERTURBATION
# ==========================================

class PerturbationParamsModel(BaseModel):
    lambda1: float
    lambda2: float
    mu: float
    reference_bound: Optional[float] = None
    admissible: Optional[bool] = None


class PerturbationModel(BaseModel):
    """Predicted against actual bounds of a perturbed system"""
    params: PerturbationParamsModel
    predicted_bounds: Optional[List[float]] = None
    actual_bounds: Optional[List[float]] = None
    sandwich_ok: bool
    max_violation_ratio: Optional[float] = None
    hypothesis_holds: Optional[bool] = None
    representation: Optional[RecoveryReport] = None
    kernel_inclusion_defect: Optional[float] = None
    trials: int = 0
    seed: Optional[int] = None

    @classmethod
    def from_result(cls, report) -> "PerturbationModel":
        p = report.params
        return cls(
            params=PerturbationParamsModel(
                lambda1=encode_real(p.lambda1),
                lambda2=encode_real(p.lambda2),
                mu=encode_real(p.mu),
                reference_bound=_optional_real(p.reference_bound),
                admissible=p.admissible,
            ),
            predicted_bounds=_optional_pair(report.predicted_bounds),
            actual_bounds=_optional_pair(report.actual_bounds),
            sandwich_ok=report.sandwich_ok,
            max_violation_ratio=_optional_real(report.max_violation_ratio),
            hypothesis_holds=report.hypothesis_holds,
            representation=None if report.representation is None
            else RecoveryReport.from_result(report.representation),
            kernel_inclusion_defect=_optional_real(report.kernel_inclusion_defect),
            trials=report.trials,
            seed=report.seed,
        )


class PerturbReport(BaseModel):
    """Report of the perturb command"""
    sandwich: Optional[PerturbationModel] = Field(None, description="Bounds from the certified fit (0, 0, mu)")
    sandwich_rejected: Optional[str] = Field(None, description="Why the certified fit was not admissible")
    operator_representation: Optional[PerturbationModel] = Field(
        None, description="Sampled (lambda1, lambda2) hypothesis with recovered operator"
    )


# ==========================================
# GOLDEN SUITE
# ==========================================

class GoldenManifest(BaseModel):
    tool_version: str
    documents: Dict[str, str] = Field(..., description="Document name -> SHA-256 of its bytes")


class GoldenReport(BaseModel):
    mode: str
    directory: str
    matched: List[str] = Field(default_factory=list)
    mismatched: List[str] = Field(default_factory=list)
    missing: List[str] = Field(default_factory=list, description="Stored names the suite no longer produces")
    unrecorded: List[str] = Field(default_factory=list, description="Suite cases without a stored digest")
    documents: Dict[str, str] = Field(default_factory=dict)
