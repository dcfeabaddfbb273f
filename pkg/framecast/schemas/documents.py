"""
Document Schemas
JSON envelope for operators, vectors, systems and reports, with canonical
encoding and content digests
"""

import hashlib
import json
import math
from enum import Enum
from typing import Annotated, Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator

from framecast import __version__
from framecast.errors import DimensionMismatchError, NonFiniteError

ComplexPair = Annotated[List[float], Field(min_length=2, max_length=2, description="[re, im]")]


class DocumentKind(str, Enum):
    OPERATOR = "operator"
    VECTOR = "vector"
    SYSTEM = "system"
    REPORT = "report"


class Meta(BaseModel):
    """Provenance block carried by every document"""
    tool_version: str = Field(__version__, description="framecast version that wrote the document")
    seed: Optional[int] = Field(None, description="Random seed, when randomness was used")
    tolerances: Dict[str, float] = Field(default_factory=dict, description="Active tolerances")
    command: Optional[str] = Field(None, description="Command that produced a report")
    inputs: Dict[str, str] = Field(default_factory=dict, description="SHA-256 digests of input documents")


class Document(BaseModel):
    """Top-level JSON document"""
    kind: DocumentKind
    payload: Dict[str, Any]
    meta: Meta = Field(default_factory=Meta)


# ==========================================
# PAYLOADS
# ==========================================

class OperatorPayload(BaseModel):
    matrix: List[List[ComplexPair]] = Field(..., description="Rows of [re, im] entries")

    @field_validator("matrix")
    @classmethod
    def rectangular(cls, rows):
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        if len({len(row) for row in rows}) != 1:
            raise ValueError("matrix rows have differing lengths")
        return rows


class VectorPayload(BaseModel):
    entries: List[ComplexPair] = Field(..., min_length=1, description="[re, im] entries")


class SystemPayload(BaseModel):
    dim: int = Field(..., ge=1, description="Ambient dimension")
    index_origin: int = Field(0, description="Index of the first vector")
    vectors: List[List[ComplexPair]] = Field(..., description="Vectors, each of length dim")


# ==========================================
# ENCODING
# ==========================================

def _finite(x: float) -> float:
    if not math.isfinite(x):
        raise NonFiniteError("documents cannot hold NaN or Inf")
    x = float(format(x, ".17g"))
    return 0.0 if x == 0.0 else x


def encode_real(x) -> float:
    return _finite(float(x))


def encode_reals(values) -> List[float]:
    return [encode_real(x) for x in np.asarray(values, dtype=float).ravel()]


def encode_complex(z) -> List[float]:
    z = complex(z)
    return [_finite(z.real), _finite(z.imag)]


def encode_vector(v) -> List[List[float]]:
    return [encode_complex(z) for z in np.asarray(v, dtype=complex).ravel()]


def encode_matrix(M) -> List[List[List[float]]]:
    return [encode_vector(row) for row in np.atleast_2d(np.asarray(M, dtype=complex))]


def decode_vector(entries) -> np.ndarray:
    values = np.array([complex(re, im) for re, im in entries], dtype=complex)
    if not np.all(np.isfinite(values)):
        raise NonFiniteError("vector contains NaN or Inf entries")
    return values


def decode_matrix(rows) -> np.ndarray:
    return np.vstack([decode_vector(row) for row in rows])


# ==========================================
# DOCUMENT BUILDERS
# ==========================================

def operator_document(M, meta: Optional[Meta] = None) -> Document:
    payload = OperatorPayload(matrix=encode_matrix(M))
    return Document(kind=DocumentKind.OPERATOR, payload=payload.model_dump(), meta=meta or Meta())


def vector_document(v, meta: Optional[Meta] = None) -> Document:
    payload = VectorPayload(entries=encode_vector(v))
    return Document(kind=DocumentKind.VECTOR, payload=payload.model_dump(), meta=meta or Meta())


def system_document(system, meta: Optional[Meta] = None) -> Document:
    payload = SystemPayload(
        dim=system.dim,
        index_origin=system.index_origin,
        vectors=[encode_vector(v) for v in system.vectors],
    )
    return Document(kind=DocumentKind.SYSTEM, payload=payload.model_dump(), meta=meta or Meta())


def report_document(report: BaseModel, meta: Meta) -> Document:
    return Document(kind=DocumentKind.REPORT, payload=report.model_dump(mode="json"), meta=meta)


def payload_to_operator(document: Document) -> np.ndarray:
    return decode_matrix(OperatorPayload(**document.payload).matrix)


def payload_to_vector(document: Document) -> np.ndarray:
    return decode_vector(VectorPayload(**document.payload).entries)


def payload_to_system(document: Document):
    from framecast.services.frames import FrameSystem

    payload = SystemPayload(**document.payload)
    for position, vector in enumerate(payload.vectors):
        if len(vector) != payload.dim:
            raise DimensionMismatchError(
                f"vector {position} has length {len(vector)}, system dim is {payload.dim}"
            )
    vectors = [decode_vector(v) for v in payload.vectors]
    matrix = np.vstack(vectors) if vectors else np.zeros((0, payload.dim), dtype=complex)
    return FrameSystem(dim=payload.dim, vectors=matrix, index_origin=payload.index_origin)


# ==========================================
# CANONICAL BYTES
# ==========================================

def canonical_bytes(document: Document) -> bytes:
    """Sorted keys, compact separators, UTF-8"""
    data = document.model_dump(mode="json")
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def digest(document: Document) -> str:
    return hashlib.sha256(canonical_bytes(document)).hexdigest()
