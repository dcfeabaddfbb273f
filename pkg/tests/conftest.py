import os

import numpy as np
import pytest

from framecast.config import Tolerances
from framecast.schemas.documents import canonical_bytes
from framecast.services import numerics
from framecast.services.frames import FrameSystem


@pytest.fixture
def tol():
    return Tolerances()


@pytest.fixture
def random_hermitian():
    def factory(d, seed):
        rng = np.random.default_rng(seed)
        A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        return (A + A.conj().T) / 2
    return factory


@pytest.fixture
def random_contraction():
    """Complex Gaussian T scaled to a given spectral radius, plus a generator"""
    def factory(d, radius, seed):
        rng = np.random.default_rng(seed)
        G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        T = G * (radius / numerics.spectral_radius(G))
        phi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        return T, phi
    return factory


@pytest.fixture
def random_frame():
    def factory(d, K, seed):
        rng = np.random.default_rng(seed)
        vectors = rng.standard_normal((K, d)) + 1j * rng.standard_normal((K, d))
        return FrameSystem(dim=d, vectors=vectors)
    return factory


@pytest.fixture
def write_document(tmp_path):
    def writer(name, document):
        path = os.path.join(tmp_path, f"{name}.json")
        with open(path, "wb") as handle:
            handle.write(canonical_bytes(document))
        return path
    return writer
