import numpy as np
import pytest
from numpy.testing import assert_allclose

from framecast.errors import DegenerateSystemError, DimensionMismatchError, NotAFrameError, ZeroVectorError
from framecast.services.frames import (
    FrameSystem,
    analysis_coefficients,
    canonical_dual,
    duality_defect,
    frame_bounds,
    frame_operator,
    frame_sequence_test,
    lemma_witness,
    scalar_frame_check,
)

E1, E2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])


def test_orthonormal_basis_is_tight():
    report = frame_bounds(FrameSystem.from_vectors([E1, E2]))
    assert report.lower_bound == pytest.approx(1.0)
    assert report.upper_bound == pytest.approx(1.0)
    assert report.tight
    assert report.spans_space


def test_redundant_system_bounds_and_spectrum():
    F = FrameSystem.from_vectors([E1, E1, E2])
    report = frame_bounds(F)
    assert report.lower_bound == pytest.approx(1.0)
    assert report.upper_bound == pytest.approx(2.0)
    assert not report.tight

    sequence = frame_sequence_test(F)
    assert_allclose(sequence.restricted_spectrum, [1.0, 2.0], atol=1e-12)
    assert sequence.contained
    assert sequence.full_spectrum_bound


def test_non_spanning_system_is_frame_sequence_only():
    F = FrameSystem.from_vectors([E1, 2 * E1])
    report = frame_bounds(F)
    assert not report.spans_space
    assert report.frame_sequence_only
    assert report.rank == 1
    assert report.lower_bound == pytest.approx(5.0)
    assert report.tightness_defect == pytest.approx(1.0)
    assert frame_sequence_test(F).contained


@pytest.mark.parametrize("vectors", [[], [np.zeros(2), np.zeros(2)]])
def test_degenerate_systems(vectors):
    with pytest.raises(DegenerateSystemError):
        frame_bounds(FrameSystem.from_vectors(vectors))


def test_mixed_dimensions_rejected():
    with pytest.raises(DimensionMismatchError):
        FrameSystem.from_vectors([[1.0, 0.0], [1.0, 0.0, 0.0]])


def test_analysis_is_conjugate_linear_in_frame_vectors():
    F = FrameSystem.from_vectors([[1.0, 1j]])
    assert_allclose(analysis_coefficients(F, E1), [1.0])
    assert_allclose(analysis_coefficients(F, E2), [-1j])


def test_frame_operator_is_sum_of_outer_products(random_frame):
    F = random_frame(3, 5, seed=0)
    expected = sum(np.outer(v, v.conj()) for v in F.vectors)
    assert_allclose(frame_operator(F), expected, atol=1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_scalar_frame_inequality_on_random_frames(random_frame, seed):
    F = random_frame(3, 6, seed)
    rng = np.random.default_rng(1000 + seed)
    for _ in range(5):
        f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        report = scalar_frame_check(F, f)
        assert report.lower_ok and report.upper_ok
        assert not report.frame_sequence_only


def test_orthogonal_witness_violates_lower_bound():
    F = FrameSystem.from_vectors([E1, 2 * E1])
    witness = lemma_witness(F)
    assert_allclose(witness, E2, atol=1e-12)
    report = scalar_frame_check(F, witness)
    assert report.sum == pytest.approx(0.0, abs=1e-20)
    assert report.frame_sequence_only
    assert not report.lower_ok


def test_spanning_system_has_no_witness():
    assert lemma_witness(FrameSystem.from_vectors([E1, E2, E1 + E2])) is None


def test_scalar_check_rejects_zero_vector():
    with pytest.raises(ZeroVectorError):
        scalar_frame_check(FrameSystem.from_vectors([E1, E2]), np.zeros(2))


def test_canonical_dual_reconstructs(random_frame):
    F = random_frame(3, 7, seed=5)
    dual = canonical_dual(F)
    assert duality_defect(F, dual) <= 1e-10


def test_canonical_dual_needs_a_frame():
    with pytest.raises(NotAFrameError):
        canonical_dual(FrameSystem.from_vectors([E1, 2 * E1]))


@pytest.mark.parametrize("seed", range(20))
def test_reordering_leaves_frame_quantities_unchanged(random_frame, seed):
    F = random_frame(3, 7, seed)
    order = np.random.default_rng(100 + seed).permutation(len(F))
    shuffled = FrameSystem(dim=3, vectors=F.vectors[order])

    assert_allclose(frame_operator(shuffled), frame_operator(F), atol=1e-12)
    original, reordered = frame_bounds(F), frame_bounds(shuffled)
    assert reordered.lower_bound == pytest.approx(original.lower_bound, rel=1e-10)
    assert reordered.upper_bound == pytest.approx(original.upper_bound, rel=1e-10)
    assert reordered.rank == original.rank
    before, after = frame_sequence_test(F), frame_sequence_test(shuffled)
    assert_allclose(after.restricted_spectrum, before.restricted_spectrum, atol=1e-10)
    assert_allclose(after.full_spectrum, before.full_spectrum, atol=1e-10)
    assert after.contained == before.contained
