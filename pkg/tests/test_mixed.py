from __future__ import annotations

import numpy as np
import pytest

from unimeas.linalg import basis_ket, partial_trace, tensor
from unimeas.mixed import mixed_probability, purified_probability, purify
from unimeas.probability import expectation_form
from unimeas.rand import rand_density, rand_ket, rand_observable, rand_projector


class TestPurify:
    def test_pure_input(self):
        pur = purify(np.diag([1.0, 0.0]))
        assert pur.dims == (2, 1)
        np.testing.assert_allclose(pur.state, basis_ket(2, 0), atol=1e-12)

    def test_maximally_mixed_qubit(self):
        pur = purify(np.eye(2) / 2.0)
        assert pur.dims == (2, 2)
        expected = (
            tensor(basis_ket(2, 0), basis_ket(2, 0)) + tensor(basis_ket(2, 1), basis_ket(2, 1))
        ) / np.sqrt(2.0)
        np.testing.assert_allclose(pur.state, expected, atol=1e-12)

    def test_random_reduction(self, rng):
        rho = rand_density(3, rng)
        pur = purify(rho)
        assert np.max(np.abs(pur.reduced() - rho)) <= 1e-10

    def test_reduction_across_dims(self, rng):
        for _ in range(100):
            dim = int(rng.integers(2, 6))
            rho = rand_density(dim, rng)
            pur = purify(rho)
            reduced = partial_trace(
                np.outer(pur.state, pur.state.conj()), pur.dims, keep=0
            )
            assert np.max(np.abs(reduced - rho)) <= 1e-10

    def test_state_is_normalized(self, rng):
        pur = purify(rand_density(4, rng))
        assert np.linalg.norm(pur.state) == pytest.approx(1.0, abs=1e-10)

    def test_ancilla_dim_counts_positive_eigenvalues(self):
        rho = np.diag([0.5, 0.5, 0.0])
        pur = purify(rho)
        assert pur.dims == (3, 2)

    def test_non_psd_rejected(self):
        with pytest.raises(ValueError, match="negative eigenvalue"):
            purify(np.diag([1.5, -0.5]))

    def test_non_unit_trace_rejected(self):
        with pytest.raises(ValueError, match="trace"):
            purify(np.eye(3))


class TestMixedProbability:
    def test_maximally_mixed(self):
        p = mixed_probability(np.eye(2) / 2.0, np.diag([1.0, 0.0]))
        assert p == pytest.approx(0.5, abs=1e-12)

    def test_pure_state_reduces_to_expectation(self, rng):
        psi = rand_ket(3, rng)
        rho = np.outer(psi, psi.conj())
        proj = rand_projector(3, 2, rng)
        assert abs(mixed_probability(rho, proj) - expectation_form(psi, proj)) <= 1e-12

    def test_dual_routes_agree(self, rng):
        """The purified expectation and the direct trace are one number."""
        for _ in range(100):
            dim = int(rng.integers(2, 6))
            rho = rand_density(dim, rng)
            obs = rand_observable(dim, rng)
            proj = obs.projectors[int(rng.integers(obs.outcomes))]
            via_purification = purified_probability(rho, proj)
            via_trace = mixed_probability(rho, proj)
            assert abs(via_purification - via_trace) <= 1e-10

    def test_values_in_unit_interval(self, rng):
        eps = 1e-9
        for _ in range(50):
            rho = rand_density(4, rng)
            proj = rand_projector(4, int(rng.integers(1, 4)), rng)
            p = mixed_probability(rho, proj, eps)
            assert -eps <= p <= 1.0 + eps

    def test_complete_family_sums_to_one(self, rng):
        rho = rand_density(4, rng)
        obs = rand_observable(4, rng, multiplicities=[2, 1, 1])
        total = sum(mixed_probability(rho, p) for p in obs.projectors)
        assert total == pytest.approx(1.0, abs=1e-10)

    def test_invalid_projector_rejected(self, rng):
        with pytest.raises(ValueError, match="idempotent"):
            mixed_probability(rand_density(2, rng), np.diag([2.0, 0.0]))

    def test_dimension_mismatch_rejected(self, rng):
        with pytest.raises(ValueError, match="does not match"):
            mixed_probability(rand_density(3, rng), np.diag([1.0, 0.0]))
