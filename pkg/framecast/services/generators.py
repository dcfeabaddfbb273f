"""
Example Generators
Harmonic (tight unitary orbit), seeded random contractions and Jordan blocks
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict

import numpy as np

from framecast.errors import ParamRangeError
from framecast.log import get_logger
from framecast.services import numerics

logger = get_logger(__name__)


class GeneratorKind(str, Enum):
    HARMONIC = "harmonic"
    CONTRACTION = "contraction"
    JORDAN = "jordan"


@dataclass(frozen=True)
class GeneratedExample:
    kind: GeneratorKind
    T: np.ndarray
    phi: np.ndarray
    params: Dict[str, Any] = field(default_factory=dict)


def harmonic(d: int, N: int) -> GeneratedExample:
    """T = diag(1, w, ..., w^(d-1)) with w = exp(2 pi i / N) and f0 = all ones; T^N = I"""
    if d < 1:
        raise ParamRangeError(f"dimension must be >= 1, got {d}")
    if N < d:
        raise ParamRangeError(f"harmonic size N must be >= d, got N={N}, d={d}")
    roots = np.exp(2j * np.pi * np.arange(d) / N)
    return GeneratedExample(
        kind=GeneratorKind.HARMONIC,
        T=np.diag(roots),
        phi=np.ones(d, dtype=complex),
        params={"d": d, "N": N},
    )


def contraction(dim: int, rho: float, seed: int = 0) -> GeneratedExample:
    """Seeded complex Gaussian T rescaled to spectral radius rho; rho = 0 gives a strictly upper triangular T"""
    if dim < 1:
        raise ParamRangeError(f"dimension must be >= 1, got {dim}")
    if not 0.0 <= rho < 1.0:
        raise ParamRangeError(f"target spectral radius must lie in [0, 1), got {rho}")
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    if rho == 0.0:
        T = np.triu(G, k=1)
    else:
        radius = numerics.spectral_radius(G)
        if radius == 0.0:
            raise ParamRangeError("sampled matrix has spectral radius 0; choose another seed")
        T = G * (rho / radius)
    phi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    logger.debug("contraction sample dim=%d rho=%g seed=%d", dim, rho, seed)
    return GeneratedExample(
        kind=GeneratorKind.CONTRACTION,
        T=T,
        phi=phi,
        params={"dim": dim, "rho": rho, "seed": seed},
    )


def jordan(lam: complex, size: int) -> GeneratedExample:
    """lam I + ones on the superdiagonal, with the cyclic vector e_size"""
    if size < 1:
        raise ParamRangeError(f"block size must be >= 1, got {size}")
    lam = complex(lam)
    if not np.isfinite(lam):
        raise ParamRangeError("eigenvalue must be finite")
    T = lam * np.eye(size, dtype=complex) + np.eye(size, k=1, dtype=complex)
    phi = np.zeros(size, dtype=complex)
    phi[-1] = 1.0
    return GeneratedExample(
        kind=GeneratorKind.JORDAN,
        T=T,
        phi=phi,
        params={"lambda": [lam.real, lam.imag], "size": size},
    )
