import numpy as np
import pytest
from numpy.testing import assert_allclose

from framecast.errors import ParamRangeError
from framecast.services import numerics
from framecast.services.dynamics import iterate
from framecast.services.frames import frame_operator
from framecast.services.generators import contraction, harmonic, jordan


def test_harmonic_orbit_frame_operator():
    example = harmonic(2, 4)
    assert_allclose(np.diag(example.T), [1, 1j], atol=1e-15)
    assert_allclose(frame_operator(iterate(example.T, example.phi, 4)), 4 * np.eye(2), atol=1e-12)


@pytest.mark.parametrize("rho", [0.3, 0.9])
def test_contraction_radius(rho):
    example = contraction(4, rho, seed=11)
    assert numerics.spectral_radius(example.T) == pytest.approx(rho, abs=1e-10)


def test_zero_radius_gives_nilpotent_sample():
    T = contraction(4, 0.0, seed=11).T
    assert_allclose(np.linalg.matrix_power(T, 4), 0, atol=1e-12)


def test_contraction_is_seeded():
    assert_allclose(contraction(3, 0.5, seed=1).T, contraction(3, 0.5, seed=1).T)
    assert not np.allclose(contraction(3, 0.5, seed=1).T, contraction(3, 0.5, seed=2).T)


def test_jordan_block():
    example = jordan(0.5, 2)
    assert_allclose(example.T, [[0.5, 1.0], [0.0, 0.5]])
    assert_allclose(example.phi, [0.0, 1.0])


@pytest.mark.parametrize("build", [
    lambda: harmonic(3, 2),
    lambda: harmonic(0, 2),
    lambda: contraction(2, 1.0),
    lambda: contraction(0, 0.5),
    lambda: jordan(0.5, 0),
])
def test_parameter_ranges(build):
    with pytest.raises(ParamRangeError):
        build()
