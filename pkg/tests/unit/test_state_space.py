"""Tests for Born probabilities, reconstruction and physicality."""

import numpy as np
import pytest

from minimax_tomography.core.exceptions import (
    InvalidArgumentError,
    NotInformationallyCompleteError,
)
from minimax_tomography.models.operators import PomKind
from minimax_tomography.models.states import DensityOperator, ProbVector
from minimax_tomography.services.pom_geometry import build_pom
from minimax_tomography.services.state_space import (
    bloch_from_probs,
    born_probs,
    born_probs_bloch,
    check_physical,
    error_prefactor,
    reconstruct_state,
    sic_purity_bound,
    squared_error,
)
from tests.conftest import random_bloch

A1_PROBS = (0.5, 1 / 6, 1 / 6, 1 / 6)


class TestBornProbs:
    """Tests for born_probs."""

    def test_maximally_mixed(self, tetrahedron):
        """Test that the mixed state gives uniform probabilities."""
        p = born_probs(DensityOperator.maximally_mixed(2), tetrahedron)
        np.testing.assert_allclose(p.probs, [0.25] * 4, atol=1e-15)

    def test_pure_state_along_first_leg(self, tetrahedron):
        """Test s = a_1 gives (1/2, 1/6, 1/6, 1/6)."""
        rho = DensityOperator.from_bloch(tetrahedron.directions[0])
        np.testing.assert_allclose(born_probs(rho, tetrahedron).probs, A1_PROBS, atol=1e-15)

    def test_diagonal_state_on_die(self, die4):
        """Test that a diagonal state gives back its diagonal."""
        p = [0.1, 0.2, 0.3, 0.4]
        np.testing.assert_allclose(
            born_probs(DensityOperator.diagonal(p), die4).probs, p, atol=1e-15
        )

    def test_dimension_mismatch(self, die4):
        """Test that a qubit state cannot be measured with a 4-level die."""
        with pytest.raises(InvalidArgumentError):
            born_probs(DensityOperator.maximally_mixed(2), die4)

    def test_batched_bloch(self, tetrahedron, rng):
        """Test that the batched Bloch form agrees with the trace form."""
        s = random_bloch(rng, 20)
        batched = born_probs_bloch(s, tetrahedron)
        for row, vector in zip(batched, s):
            expected = born_probs(DensityOperator.from_bloch(vector), tetrahedron).array
            np.testing.assert_allclose(row, expected, atol=1e-14)
        np.testing.assert_allclose(bloch_from_probs(batched, tetrahedron), s, atol=1e-14)

    def test_sum_of_squares_tracks_bloch_length(self, tetrahedron, rng):
        """Test sum p_k^2 = 1/4 + |s|^2/12 on 1000 random states."""
        s = random_bloch(rng, 1000)
        probs = born_probs_bloch(s, tetrahedron)
        expected = 0.25 + np.sum(s * s, axis=1) / 12.0
        np.testing.assert_allclose(np.sum(probs**2, axis=1), expected, rtol=0, atol=1e-12)


class TestReconstructState:
    """Tests for reconstruct_state."""

    def test_uniform_gives_mixed(self, tetrahedron):
        """Test (1/4, ...) -> 1/2."""
        rho = reconstruct_state(ProbVector.uniform(4), tetrahedron)
        np.testing.assert_allclose(rho.matrix, np.eye(2) / 2, atol=1e-15)

    def test_inverts_born_rule(self, tetrahedron):
        """Test that (1/2, 1/6, 1/6, 1/6) gives the projector along a_1."""
        rho = reconstruct_state(ProbVector(probs=A1_PROBS), tetrahedron)
        np.testing.assert_allclose(rho.bloch_vector().array, tetrahedron.directions[0], atol=1e-14)
        assert rho.purity == pytest.approx(1.0)

    def test_single_detector_is_unphysical(self, tetrahedron):
        """Test that (1, 0, 0, 0) reconstructs to eigenvalues {2, -1}."""
        rho = reconstruct_state(ProbVector(probs=(1, 0, 0, 0)), tetrahedron)
        np.testing.assert_allclose(np.linalg.eigvalsh(rho.matrix), [-1.0, 2.0], atol=1e-14)

    def test_round_trip(self, tetrahedron, rng):
        """Test reconstruct_state(born_probs(rho)) = rho."""
        for s in random_bloch(rng, 10):
            rho = DensityOperator.from_bloch(s)
            restored = reconstruct_state(born_probs(rho, tetrahedron), tetrahedron)
            np.testing.assert_allclose(restored.matrix, rho.matrix, atol=1e-14)

    def test_not_informationally_complete(self):
        """Test that the trine cannot reconstruct a qubit state."""
        with pytest.raises(NotInformationallyCompleteError):
            reconstruct_state(ProbVector.uniform(3), build_pom(PomKind.TRINE))


class TestCheckPhysical:
    """Tests for check_physical."""

    def test_single_detector_tetrahedron(self, tetrahedron):
        """Test that (1, 0, 0, 0) is not a qubit state."""
        check = check_physical(ProbVector(probs=(1, 0, 0, 0)), tetrahedron)
        assert not check.physical
        assert check.sum_sq == 1.0
        assert check.bound == pytest.approx(1 / 3)

    def test_single_detector_die(self, die4):
        """Test that every distribution is physical on a classical die."""
        assert check_physical(ProbVector(probs=(1, 0, 0, 0)), die4).physical

    def test_uniform_tetrahedron(self, tetrahedron):
        """Test the lower end of the purity range."""
        check = check_physical(ProbVector.uniform(4), tetrahedron)
        assert check.physical
        assert check.sum_sq == 0.25

    def test_boundary_is_physical(self, tetrahedron):
        """Test that pure states (sum p^2 = 1/3) pass."""
        assert check_physical(ProbVector(probs=A1_PROBS), tetrahedron).physical

    def test_agrees_with_spectrum(self, tetrahedron, rng):
        """Test that the sum-of-squares test matches the eigenvalue sign."""
        for s in random_bloch(rng, 50, radius=1.5):
            probs = born_probs_bloch(s, tetrahedron)[0]
            if probs.min() < 0:
                continue
            check = check_physical(ProbVector.from_array(probs), tetrahedron)
            assert check.physical == (np.linalg.norm(s) <= 1.0 + 1e-12)
            assert (check.min_eig >= -1e-10) == check.physical

    def test_single_detector_trine(self):
        """Test that (1, 0, 0) is out of reach since every p_k <= 2/3."""
        check = check_physical(ProbVector(probs=(1, 0, 0)), build_pom(PomKind.TRINE))
        assert not check.physical
        assert check.min_eig == pytest.approx(-0.5)

    def test_trine_boundary(self):
        """Test that the pure state along a leg, (2/3, 1/6, 1/6), passes."""
        trine = build_pom(PomKind.TRINE)
        check = check_physical(ProbVector(probs=(2 / 3, 1 / 6, 1 / 6)), trine)
        assert check.physical
        assert check.min_eig == pytest.approx(0.0, abs=1e-12)

    def test_trine_agrees_with_bloch_length(self, rng):
        """Test that trine data is physical exactly when s projected on the plane fits."""
        trine = build_pom(PomKind.TRINE)
        for s in random_bloch(rng, 100, radius=1.5):
            probs = born_probs_bloch(s, trine)[0]
            if probs.min() < 0:
                continue
            normal = np.ones(3) / np.sqrt(3.0)
            in_plane = np.linalg.norm(s - (s @ normal) * normal)
            check = check_physical(ProbVector.from_array(probs), trine)
            assert check.physical == (in_plane <= 1.0 + 1e-12)

    def test_von_neumann_accepts_every_distribution(self):
        """Test that any two-outcome distribution is a qubit state along the axis."""
        pom = build_pom(PomKind.VON_NEUMANN)
        for p in (0.0, 0.3, 1.0):
            assert check_physical(ProbVector(probs=(p, 1 - p)), pom).physical


class TestSquaredError:
    """Tests for squared_error."""

    def test_zero_for_equal(self, tetrahedron):
        """Test p_hat = p."""
        p = ProbVector(probs=A1_PROBS)
        assert squared_error(p, p, tetrahedron) == 0.0

    def test_qubit_example(self, tetrahedron):
        """Test 6 * 1/12 = 1/2."""
        value = squared_error(ProbVector(probs=A1_PROBS), ProbVector.uniform(4), tetrahedron)
        assert value == pytest.approx(0.5, abs=1e-15)

    def test_coin_example(self, coin):
        """Test prefactor 1 on the coin."""
        value = squared_error(ProbVector(probs=(1, 0)), ProbVector.uniform(2), coin)
        assert value == pytest.approx(0.5)

    def test_matches_hilbert_schmidt(self, tetrahedron, rng):
        """Test that the probability form equals tr{(rho_hat - rho)^2}."""
        s = random_bloch(rng, 2)
        rho_a, rho_b = (DensityOperator.from_bloch(v) for v in s)
        diff = rho_a.matrix - rho_b.matrix
        expected = float(np.real(np.trace(diff @ diff)))
        value = squared_error(
            born_probs(rho_a, tetrahedron), born_probs(rho_b, tetrahedron), tetrahedron
        )
        assert value == pytest.approx(expected, rel=1e-12)

    def test_length_mismatch(self, tetrahedron):
        """Test that K must agree."""
        with pytest.raises(InvalidArgumentError):
            squared_error(ProbVector.uniform(2), ProbVector.uniform(2), tetrahedron)


class TestPurityBounds:
    """Tests for the purity bound helpers."""

    def test_sic_bound(self):
        """Test 2/(d(d+1))."""
        assert sic_purity_bound(2) == pytest.approx(1 / 3)
        assert sic_purity_bound(3) == pytest.approx(1 / 6)

    def test_error_prefactor(self, tetrahedron, die4):
        """Test (K-1)K/((d-1)d)."""
        assert error_prefactor(tetrahedron) == 6.0
        assert error_prefactor(die4) == 1.0
