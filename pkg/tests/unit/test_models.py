"""Tests for data models."""

import json

import numpy as np
import pytest
from pydantic import ValidationError

from minimax_tomography.core.exceptions import EmptyDataError
from minimax_tomography.models.estimator_spec import (
    EstimatorKind,
    EstimatorSpec,
    MinimaxCoefficients,
)
from minimax_tomography.models.figures import FigureId, FigureParams, FigureTable
from minimax_tomography.models.operators import (
    HermitianOperator,
    PomKind,
    SymmetricPOM,
    ValidationCheck,
    ValidationReport,
)
from minimax_tomography.models.risk import (
    DiscretePrior,
    EpsilonResult,
    GridSpec,
    OutcomeEnumeration,
    RiskSurface,
    SearchSpec,
)
from minimax_tomography.models.simulation import EmpiricalRisk, SimConfig
from minimax_tomography.models.states import (
    BlochVector,
    CountVector,
    DensityOperator,
    ProbVector,
)


class TestProbVector:
    """Test suite for ProbVector."""

    def test_valid_vector(self):
        """Test creating a ProbVector from a list."""
        p = ProbVector(probs=[0.25, 0.25, 0.5])
        assert p.num_outcomes == 3
        assert p.sum_of_squares == pytest.approx(0.375)

    def test_accepts_numpy_arrays(self):
        """Test that numpy input is coerced to a tuple of floats."""
        p = ProbVector(probs=np.array([0.5, 0.5]))
        assert p.probs == (0.5, 0.5)

    def test_rejects_unnormalized(self):
        """Test that a sum different from 1 is rejected."""
        with pytest.raises(ValidationError):
            ProbVector(probs=[0.5, 0.6])

    def test_rejects_negative(self):
        """Test that clearly negative entries are rejected."""
        with pytest.raises(ValidationError):
            ProbVector(probs=[1.1, -0.1])

    def test_rejects_single_outcome(self):
        """Test that K >= 2 is required."""
        with pytest.raises(ValidationError):
            ProbVector(probs=[1.0])

    def test_from_array_clamps_rounding_negatives(self):
        """Test that tiny negatives from float subtraction are clamped."""
        p = ProbVector.from_array([1.0 + 1e-14, -1e-14])
        assert p.probs[1] == 0.0
        assert sum(p.probs) == pytest.approx(1.0, abs=1e-15)

    def test_uniform(self):
        """Test the flat distribution."""
        assert ProbVector.uniform(4).probs == (0.25, 0.25, 0.25, 0.25)

    def test_is_frozen(self):
        """Test that ProbVector is immutable."""
        p = ProbVector.uniform(2)
        with pytest.raises(ValidationError):
            p.probs = (1.0, 0.0)

    def test_json_round_trip(self):
        """Test serialization through model_dump_json."""
        p = ProbVector(probs=[0.1, 0.2, 0.7])
        assert ProbVector.model_validate_json(p.model_dump_json()) == p


class TestCountVector:
    """Test suite for CountVector."""

    def test_parse(self):
        """Test parsing a comma-separated list."""
        counts = CountVector.parse("4,0,0,0")
        assert counts.counts == (4, 0, 0, 0)
        assert counts.total == 4
        assert counts.num_outcomes == 4

    def test_freqs(self):
        """Test relative frequencies."""
        np.testing.assert_allclose(
            CountVector(counts=(3, 1, 0, 0)).freqs, [0.75, 0.25, 0.0, 0.0]
        )

    def test_empty_data(self):
        """Test that all-zero counts raise EmptyDataError."""
        with pytest.raises(EmptyDataError, match="empty data"):
            CountVector(counts=(0, 0, 0, 0))

    def test_negative_counts(self):
        """Test that negative counts are rejected."""
        with pytest.raises(ValidationError):
            CountVector(counts=(2, -1))

    def test_fractional_counts(self):
        """Test that non-integer counts are rejected."""
        with pytest.raises(ValidationError):
            CountVector(counts=[1.5, 1.0])


class TestBlochVector:
    """Test suite for BlochVector."""

    def test_norm_and_physicality(self):
        """Test the norm and the unit-ball test."""
        assert BlochVector(s=(0.6, 0.0, 0.8)).norm == pytest.approx(1.0)
        assert BlochVector(s=(0.6, 0.0, 0.8)).is_physical
        assert not BlochVector(s=(1.0, 1.0, 0.0)).is_physical

    def test_wrong_length(self):
        """Test that exactly three components are required."""
        with pytest.raises(ValidationError):
            BlochVector(s=(1.0, 0.0))


class TestDensityOperator:
    """Test suite for DensityOperator."""

    def test_from_bloch_pure(self):
        """Test a pure state built from a unit Bloch vector."""
        rho = DensityOperator.from_bloch((0.0, 0.0, 1.0))
        np.testing.assert_allclose(rho.matrix, [[1, 0], [0, 0]], atol=1e-15)
        assert rho.purity == pytest.approx(1.0)
        assert rho.is_physical

    def test_bloch_round_trip(self):
        """Test that bloch_vector inverts from_bloch."""
        s = (0.3, -0.2, 0.5)
        np.testing.assert_allclose(
            DensityOperator.from_bloch(s).bloch_vector().array, s, atol=1e-15
        )

    def test_unphysical_operator(self):
        """Test that |s| > 1 gives a negative eigenvalue."""
        rho = DensityOperator.from_bloch((0.0, 0.0, 3.0))
        assert rho.min_eigenvalue == pytest.approx(-1.0)
        assert not rho.is_physical

    def test_maximally_mixed(self):
        """Test the maximally mixed state."""
        rho = DensityOperator.maximally_mixed(3)
        assert rho.dim == 3
        assert rho.purity == pytest.approx(1.0 / 3.0)

    def test_trace_must_be_one(self):
        """Test that operators with trace other than 1 are rejected."""
        with pytest.raises(ValidationError):
            DensityOperator(op=np.eye(2))

    def test_bloch_vector_needs_qubit(self):
        """Test that Bloch vectors are only defined for d = 2."""
        with pytest.raises(ValueError):
            DensityOperator.maximally_mixed(3).bloch_vector()


class TestHermitianOperator:
    """Test suite for HermitianOperator."""

    def test_rejects_non_hermitian(self):
        """Test that a non-Hermitian matrix is rejected."""
        with pytest.raises(ValidationError):
            HermitianOperator(matrix=[[0, 1], [0, 0]])

    def test_rejects_non_square(self):
        """Test that a non-square matrix is rejected."""
        with pytest.raises(ValidationError):
            HermitianOperator(matrix=np.zeros((2, 3)))

    def test_pairs_round_trip(self):
        """Test the [re, im] pair serialization."""
        op = HermitianOperator(matrix=[[1, 1j], [-1j, 0]])
        restored = HermitianOperator.from_pairs(op.to_pairs())
        np.testing.assert_array_equal(restored.matrix, op.matrix)
        assert op.trace == 1.0


class TestSymmetricPOMModel:
    """Test suite for SymmetricPOM serialization and shape checks."""

    def test_json_round_trip(self, tetrahedron):
        """Test to_json_dict and from_json_dict."""
        data = json.loads(json.dumps(tetrahedron.to_json_dict()))
        restored = SymmetricPOM.from_json_dict(data)
        assert restored.kind == PomKind.TETRAHEDRON
        assert restored.num_outcomes == 4
        np.testing.assert_allclose(restored.outcomes, tetrahedron.outcomes, atol=1e-15)
        np.testing.assert_allclose(restored.directions, tetrahedron.directions)

    def test_shape_mismatch(self):
        """Test that stacks must agree with K and d."""
        with pytest.raises(ValidationError):
            SymmetricPOM(
                kind=PomKind.CLASSICAL_DIE,
                dim=2,
                num_outcomes=3,
                symmetry=1.0,
                outcomes=np.zeros((2, 2, 2)),
            )

    def test_flags(self, tetrahedron, die4):
        """Test the informational-completeness flags."""
        assert tetrahedron.is_qubit_sic
        assert tetrahedron.is_informationally_complete
        assert die4.is_informationally_complete
        assert not die4.is_qubit_sic


class TestValidationReport:
    """Test suite for ValidationReport."""

    def test_summary(self):
        """Test passed and max_residual."""
        report = ValidationReport(
            kind=PomKind.TRINE,
            checks=[
                ValidationCheck(name="a", passed=True, residual=1e-15),
                ValidationCheck(name="b", passed=False, residual=0.01),
            ],
        )
        assert not report.passed
        assert report.max_residual == 0.01
        assert report.check("b").residual == 0.01
        assert report.to_json_dict()["passed"] is False

    def test_missing_check(self):
        """Test that an unknown check name raises KeyError."""
        with pytest.raises(KeyError):
            ValidationReport(kind=PomKind.TRINE).check("gram")


class TestEstimatorSpec:
    """Test suite for EstimatorSpec."""

    def test_json_dict(self):
        """Test the compact JSON form."""
        spec = EstimatorSpec(kind=EstimatorKind.QUANTUM_MINIMAX, epsilon=0.05)
        assert spec.to_json_dict() == {
            "kind": "quantum_minimax",
            "epsilon": 0.05,
            "variant_bn": False,
        }

    def test_from_json(self):
        """Test parsing the documented JSON form."""
        spec = EstimatorSpec.model_validate_json(
            '{"kind":"quantum_minimax","epsilon":0.05,"variant_bn":false}'
        )
        assert spec.kind == EstimatorKind.QUANTUM_MINIMAX
        assert spec.epsilon == 0.05

    def test_beta_required(self):
        """Test that add_beta and mean_mc need beta."""
        with pytest.raises(ValidationError):
            EstimatorSpec(kind=EstimatorKind.ADD_BETA)
        with pytest.raises(ValidationError):
            EstimatorSpec(kind=EstimatorKind.MEAN_MC)

    def test_beta_positive(self):
        """Test that beta = 0 is rejected."""
        with pytest.raises(ValidationError):
            EstimatorSpec(kind=EstimatorKind.ADD_BETA, beta=0.0)

    def test_epsilon_range(self):
        """Test that epsilon is confined to [0, 1/4]."""
        with pytest.raises(ValidationError):
            EstimatorSpec(kind=EstimatorKind.QUANTUM_MINIMAX, epsilon=0.3)
        with pytest.raises(ValidationError):
            EstimatorSpec(kind=EstimatorKind.QUANTUM_MINIMAX, epsilon=-0.01)

    def test_samples_minimum(self):
        """Test that mean_mc needs at least 1000 samples."""
        with pytest.raises(ValidationError):
            EstimatorSpec(kind=EstimatorKind.MEAN_MC, beta=1.0, samples=999)

    def test_label(self):
        """Test the human-readable tags."""
        assert EstimatorSpec(kind=EstimatorKind.ML_CLASSICAL).label == "ml_classical"
        assert (
            EstimatorSpec(kind=EstimatorKind.QUANTUM_MINIMAX, epsilon=0.05).label
            == "quantum_minimax(eps=0.05)"
        )
        assert EstimatorSpec(kind=EstimatorKind.ADD_BETA, beta=0.5).label == "add_beta(beta=0.5)"

    def test_with_epsilon(self):
        """Test copying with a new epsilon."""
        spec = EstimatorSpec(kind=EstimatorKind.ML_QUANTUM_EPSILON)
        assert spec.with_epsilon(0.1).epsilon == 0.1
        with pytest.raises(ValidationError):
            spec.with_epsilon(0.5)

    def test_hashable(self):
        """Test that equal specs hash equally (used as cache keys)."""
        a = EstimatorSpec(kind=EstimatorKind.QUANTUM_MINIMAX, epsilon=0.05)
        b = EstimatorSpec(kind=EstimatorKind.QUANTUM_MINIMAX, epsilon=0.05)
        assert hash(a) == hash(b)
        assert {a: 1}[b] == 1


class TestMinimaxCoefficients:
    """Test suite for MinimaxCoefficients."""

    def test_for_sample_size(self):
        """Test a_4 = 1/3 and b_4 = 2/3."""
        c = MinimaxCoefficients.for_sample_size(4)
        assert c.a == pytest.approx(1.0 / 3.0)
        assert c.b == pytest.approx(2.0 / 3.0)
        assert c.a + c.b == pytest.approx(1.0)

    def test_from_epsilon(self):
        """Test the single-parameter variant."""
        c = MinimaxCoefficients.from_epsilon(10, 0.04)
        assert c.b == pytest.approx(np.sqrt(0.84))
        assert c.a == pytest.approx(1.0 - np.sqrt(0.84))


class TestOutcomeEnumerationModel:
    """Test suite for OutcomeEnumeration."""

    def test_row_sums_checked(self):
        """Test that every row must total N."""
        with pytest.raises(ValidationError):
            OutcomeEnumeration(
                N=2,
                K=2,
                count_vectors=np.array([[2, 0], [1, 0]]),
                log_multinomials=np.zeros(2),
            )

    def test_impossible_counts_masked(self):
        """Test that counts on zero-probability outcomes get -inf."""
        enumeration = OutcomeEnumeration(
            N=2,
            K=2,
            count_vectors=np.array([[2, 0], [1, 1], [0, 2]]),
            log_multinomials=np.log([1.0, 2.0, 1.0]),
        )
        log_l = enumeration.log_likelihoods(np.array([[1.0, 0.0]]))
        assert log_l[0, 0] == 0.0
        assert np.isneginf(log_l[0, 1])
        assert np.isneginf(log_l[0, 2])


class TestDiscretePrior:
    """Test suite for DiscretePrior."""

    def test_uniform(self):
        """Test equal weights."""
        prior = DiscretePrior.uniform([ProbVector(probs=[p, 1 - p]) for p in (0.1, 0.5, 0.9)])
        np.testing.assert_allclose(prior.weight_array, [1 / 3] * 3)
        assert prior.prob_matrix.shape == (3, 2)

    def test_weights_must_sum_to_one(self):
        """Test the weight normalization check."""
        with pytest.raises(ValidationError):
            DiscretePrior(states=(ProbVector.uniform(2),), weights=(0.5,))

    def test_mixed_lengths(self):
        """Test that all states need the same K."""
        with pytest.raises(ValidationError):
            DiscretePrior.uniform([ProbVector.uniform(2), ProbVector.uniform(3)])


class TestRiskSurface:
    """Test suite for RiskSurface."""

    def _surface(self) -> RiskSurface:
        return RiskSurface(
            columns=("sx", "sy", "sz"),
            points=[[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.5, 0.0, 0.0]],
            risks=[0.1, 0.3, 0.05],
        )

    def test_extrema(self):
        """Test arg-max and arg-min lookup."""
        surface = self._surface()
        assert surface.max_risk == 0.3
        assert surface.min_risk == 0.05
        assert surface.max_state.tolist() == [0.0, 0.0, 1.0]
        extrema = surface.extrema_json()
        assert extrema["min_state"] == [0.5, 0.0, 0.0]

    def test_csv_round_trip(self):
        """Test that to_csv output is re-parseable by from_csv."""
        surface = self._surface()
        text = surface.to_csv()
        assert text.splitlines()[0] == "sx,sy,sz,risk"
        assert "\r" not in text
        restored = RiskSurface.from_csv(text)
        np.testing.assert_array_equal(restored.points, surface.points)
        np.testing.assert_array_equal(restored.risks, surface.risks)

    def test_negative_risk_rejected(self):
        """Test that risks must be non-negative."""
        with pytest.raises(ValidationError):
            RiskSurface(columns=("p1", "p2"), points=[[1.0, 0.0]], risks=[-0.1])


class TestSearchModels:
    """Test suite for GridSpec, SearchSpec and EpsilonResult."""

    def test_grid_defaults_from_settings(self):
        """Test that GridSpec reads its defaults from settings."""
        grid = GridSpec()
        assert grid.radii == 25
        assert grid.directions == 162
        assert grid.refine

    def test_search_family_restricted(self):
        """Test that only epsilon families can be searched."""
        with pytest.raises(ValidationError):
            SearchSpec(family=EstimatorKind.ML_CLASSICAL)

    def test_epsilon_result_improvement(self):
        """Test that the optimum may not exceed the epsilon = 0 objective."""
        with pytest.raises(ValidationError):
            EpsilonResult(
                N=4,
                family=EstimatorKind.QUANTUM_MINIMAX,
                epsilon_star=0.1,
                max_risk_at_star=0.2,
                max_risk_at_zero=0.1,
                max_risk_at_quarter=0.3,
            )

    def test_epsilon_table_csv(self):
        """Test the epsilon CSV columns and round trip."""
        result = EpsilonResult(
            N=4,
            family=EstimatorKind.QUANTUM_MINIMAX,
            epsilon_star=0.05,
            max_risk_at_star=0.1,
            max_risk_at_zero=0.12,
            max_risk_at_quarter=0.3,
        )
        text = EpsilonResult.table_to_csv([result])
        assert text.splitlines()[0] == "N,epsilon_star,max_risk_star,max_risk_zero"
        frame = EpsilonResult.table_from_csv(text)
        assert frame["epsilon_star"].tolist() == [0.05]

    def test_epsilon_table_missing_column(self):
        """Test that a table without the required columns is rejected."""
        with pytest.raises(ValueError, match="missing"):
            EpsilonResult.table_from_csv("N,epsilon_star\n4,0.1\n")


class TestSimulationModels:
    """Test suite for simulation models."""

    def test_sim_config_bounds(self):
        """Test that trials and N must be positive."""
        with pytest.raises(ValidationError):
            SimConfig(seed=1, trials=0, N=1)
        with pytest.raises(ValidationError):
            SimConfig(seed=1, trials=1, N=0)

    def test_empirical_risk_dump(self):
        """Test the JSON shape of EmpiricalRisk."""
        assert EmpiricalRisk(mean=0.1, std_err=0.01, trials=10).model_dump() == {
            "mean": 0.1,
            "std_err": 0.01,
            "trials": 10,
        }


class TestFigureTable:
    """Test suite for FigureTable."""

    def test_round_trip(self):
        """Test CSV round trip."""
        table = FigureTable(figure_id=FigureId.FIG1, columns={"p": [0.0, 1.0], "L_1": [0.0, 1.0]})
        restored = FigureTable.from_csv(table.to_csv(), FigureId.FIG1)
        assert restored == table
        assert restored.num_rows == 2

    def test_unequal_lengths(self):
        """Test that columns must have equal length."""
        with pytest.raises(ValidationError):
            FigureTable(figure_id=FigureId.FIG3, columns={"N": [1.0, 2.0], "eps": [0.1]})

    def test_non_finite(self):
        """Test that NaN entries are rejected."""
        with pytest.raises(ValidationError):
            FigureTable(figure_id=FigureId.FIG2, columns={"N": [float("nan")]})

    def test_params_defaults(self):
        """Test the default size grids."""
        params = FigureParams()
        assert params.likelihood_sizes == [1, 2, 5, 10, 100]
        assert params.sample_sizes == [1, 2, 4, 7, 10, 15, 20, 30, 50, 100]
