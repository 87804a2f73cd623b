import numpy as np
import pytest

from openqsl import dynamics, linalg
from openqsl.dynamics import (
    LindbladModel,
    adjoint_dissipator,
    dissipator,
    evolve,
    first_passage_time,
    lindblad_rhs,
    liouvillian_matrix,
    theta_dot_exact,
)
from openqsl.errors import (
    DimensionMismatchError,
    IntegrationQualityError,
    NonHermitianError,
    SingularPointError,
    UnreachableTargetError,
)
from openqsl.models import (
    IDENTITY_2,
    SIGMA_MINUS,
    SIGMA_X,
    SIGMA_Z,
    spontaneous_emission_model,
)

from conftest import random_complex_matrix, random_hermitian, random_state

EXCITED = np.array([1.0, 0.0], dtype=complex)
RHO_EXCITED = np.array([[1, 0], [0, 0]], dtype=complex)
RHO_PLUS = 0.5 * np.array([[1, 1], [1, 1]], dtype=complex)


class TestDissipator:
    def test_decay_channel_on_excited_state(self):
        # hand computation: L|0> = sqrt(g)|1>, L^dag L = g|0><0|
        gamma = 1.7
        L = np.sqrt(gamma) * SIGMA_MINUS
        expected = gamma * np.array([[-1, 0], [0, 1]], dtype=complex)
        np.testing.assert_allclose(dissipator(L, RHO_EXCITED), expected, atol=1e-14)

    def test_identity_lindblad_is_trivial(self, rng):
        rho = linalg.projector(random_state(rng, 2))
        np.testing.assert_allclose(
            dissipator(IDENTITY_2, rho), np.zeros((2, 2)), atol=1e-15
        )

    def test_dephasing_kills_coherences(self):
        # sigma_z^2 = I, so D[L]rho = gamma (sigma_z rho sigma_z - rho)
        gamma = 0.6
        L = np.sqrt(gamma) * SIGMA_Z
        expected = gamma * (SIGMA_Z @ RHO_PLUS @ SIGMA_Z - RHO_PLUS)
        got = dissipator(L, RHO_PLUS)
        np.testing.assert_allclose(got, expected, atol=1e-14)
        # equals -2 gamma times the off-diagonal part
        offdiag = RHO_PLUS - np.diag(np.diag(RHO_PLUS))
        np.testing.assert_allclose(got, -2.0 * gamma * offdiag, atol=1e-14)

    def test_traceless(self, rng):
        for dim in (2, 3, 5):
            L = random_complex_matrix(rng, dim)
            rho = linalg.projector(random_state(rng, dim))
            out = dissipator(L, rho)
            assert abs(np.trace(out)) <= 1e-12 * max(linalg.frobenius_norm(rho), 1.0) * (
                linalg.frobenius_norm(L) ** 2 + 1.0
            )

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            dissipator(SIGMA_X, np.eye(3, dtype=complex))


class TestAdjointDissipator:
    def test_decay_channel_on_excited_projector(self):
        gamma = 2.3
        L = np.sqrt(gamma) * SIGMA_MINUS
        np.testing.assert_allclose(
            adjoint_dissipator(L, RHO_EXCITED), -gamma * RHO_EXCITED, atol=1e-14
        )

    def test_identity_is_trivial(self, rng):
        a = random_hermitian(rng, 2)
        np.testing.assert_allclose(
            adjoint_dissipator(IDENTITY_2, a), np.zeros((2, 2)), atol=1e-14
        )

    def test_duality_spot_value(self, rng):
        L = random_complex_matrix(rng, 3)
        a = random_hermitian(rng, 3)
        rho = linalg.projector(random_state(rng, 3))
        lhs = linalg.trace_product(a, dissipator(L, rho))
        rhs = linalg.trace_product(rho, adjoint_dissipator(L, a))
        assert lhs == pytest.approx(rhs, abs=1e-11)

    def test_duality_random_triples(self, rng):
        for _ in range(200):
            dim = int(rng.integers(2, 7))
            L = random_complex_matrix(rng, dim)
            a = random_complex_matrix(rng, dim)
            rho = random_complex_matrix(rng, dim)
            lhs = linalg.trace_product(a, dissipator(L, rho))
            rhs = linalg.trace_product(rho, adjoint_dissipator(L, a))
            assert lhs == pytest.approx(rhs, abs=1e-10)


class TestLindbladRhs:
    def test_zero_generator(self, rng):
        model = LindbladModel(hamiltonian=np.zeros((2, 2), dtype=complex))
        rho = linalg.projector(random_state(rng, 2))
        np.testing.assert_allclose(lindblad_rhs(model, rho), np.zeros((2, 2)), atol=1e-15)

    def test_pure_hamiltonian_term(self):
        omega = 1.3
        model = LindbladModel(hamiltonian=0.5 * omega * SIGMA_X)
        expected = -1j * 0.5 * omega * (SIGMA_X @ RHO_EXCITED - RHO_EXCITED @ SIGMA_X)
        np.testing.assert_allclose(lindblad_rhs(model, RHO_EXCITED), expected, atol=1e-14)

    def test_emission_model_at_excited_state(self):
        gamma = 1.0
        model, _ = spontaneous_emission_model(gamma)
        expected = gamma * np.array([[-1, 0], [0, 1]], dtype=complex)
        np.testing.assert_allclose(lindblad_rhs(model, RHO_EXCITED), expected, atol=1e-14)

    def test_hermiticity_preserving_and_traceless(self, rng):
        for _ in range(10):
            dim = int(rng.integers(2, 5))
            model = LindbladModel(
                hamiltonian=random_hermitian(rng, dim),
                lindblad_ops=(random_complex_matrix(rng, dim),),
            )
            rho = random_hermitian(rng, dim)
            out = lindblad_rhs(model, rho)
            assert linalg.hermiticity_deviation(out) < 1e-12 * max(
                1.0, linalg.frobenius_norm(out)
            )
            assert abs(np.trace(out)) < 1e-12 * max(1.0, linalg.frobenius_norm(rho))


class TestModelValidation:
    def test_rejects_non_hermitian_hamiltonian(self):
        with pytest.raises(NonHermitianError):
            LindbladModel(hamiltonian=np.array([[0, 1], [0, 0]], dtype=complex))

    def test_rejects_mismatched_operator(self):
        with pytest.raises(DimensionMismatchError):
            LindbladModel(
                hamiltonian=np.zeros((2, 2), dtype=complex),
                lindblad_ops=(np.eye(3, dtype=complex),),
            )

    def test_model_arrays_are_immutable(self):
        model, _ = spontaneous_emission_model(1.0)
        with pytest.raises(ValueError):
            model.hamiltonian[0, 0] = 5.0


class TestLiouvillianMatrix:
    def test_matches_direct_rhs(self, rng):
        for _ in range(10):
            dim = int(rng.integers(2, 5))
            model = LindbladModel(
                hamiltonian=random_hermitian(rng, dim),
                lindblad_ops=tuple(
                    random_complex_matrix(rng, dim) for _ in range(int(rng.integers(0, 3)))
                ),
            )
            rho = random_complex_matrix(rng, dim)
            via_matrix = (liouvillian_matrix(model) @ rho.reshape(-1)).reshape(dim, dim)
            np.testing.assert_allclose(via_matrix, lindblad_rhs(model, rho), atol=1e-12)

    def test_propagator_equals_four_stage_step(self, rng):
        model = LindbladModel(
            hamiltonian=random_hermitian(rng, 3),
            lindblad_ops=(random_complex_matrix(rng, 3),),
        )
        rho = linalg.projector(random_state(rng, 3))
        h = 0.01
        prop = dynamics._rk4_propagator(liouvillian_matrix(model), h)
        via_prop = (prop @ rho.reshape(-1)).reshape(3, 3)
        via_stages = dynamics._rk4_step(model, rho, h)
        np.testing.assert_allclose(via_prop, via_stages, atol=1e-14)


class TestEvolve:
    def test_emission_angle_vs_fine_reference(self):
        # oracle: the same generator integrated at dt = 1e-6
        model, psi0 = spontaneous_emission_model(1.0)
        coarse = evolve(model, psi0, 1.0, 1e-4)
        fine = evolve(model, psi0, 1.0, 1e-6)
        assert abs(coarse.bures_angles[-1] - fine.bures_angles[-1]) < 1e-5
        # and against the analytic angle arccos(e^{-gamma t / 2})
        assert coarse.bures_angles[-1] == pytest.approx(
            np.arccos(np.exp(-0.5)), abs=1e-9
        )

    def test_full_rabi_flip(self):
        omega = 1.0
        model = LindbladModel(hamiltonian=0.5 * omega * SIGMA_X)
        traj = evolve(model, EXCITED, np.pi / omega, 1e-4)
        expected = np.array([[0, 0], [0, 1]], dtype=complex)
        assert linalg.frobenius_norm(traj.states[-1] - expected) < 1e-6

    def test_zero_generator_is_static(self):
        model = LindbladModel(hamiltonian=np.zeros((2, 2), dtype=complex))
        traj = evolve(model, EXCITED, 1.0, 1e-2)
        assert np.abs(traj.bures_angles).max() == 0.0
        for state in traj.states:
            np.testing.assert_allclose(state, RHO_EXCITED, atol=1e-15)

    def test_initial_angle_is_zero(self, rng):
        model = LindbladModel(
            hamiltonian=random_hermitian(rng, 3),
            lindblad_ops=(random_complex_matrix(rng, 3),),
        )
        traj = evolve(model, random_state(rng, 3), 0.5, 1e-3)
        assert abs(traj.bures_angles[0]) < 1e-9

    def test_grid_shape_and_monotonicity(self):
        model, psi0 = spontaneous_emission_model(1.0)
        traj = evolve(model, psi0, 1.0, 1e-2)
        assert len(traj.times) == len(traj.states) == len(traj.bures_angles) == 101
        assert np.all(np.diff(traj.times) > 0)

    def test_fourth_order_convergence(self):
        model, psi0 = spontaneous_emission_model(1.0)
        ref = evolve(model, psi0, 2.0, 0.02 / 16)
        errs = []
        for dt in (0.02, 0.01):
            traj = evolve(model, psi0, 2.0, dt)
            stride = len(ref.times[::1]) // len(traj.times[::1])
            stride = (len(ref.times) - 1) // (len(traj.times) - 1)
            diff = traj.states - ref.states[::stride]
            errs.append(np.sqrt((np.abs(diff) ** 2).sum(axis=(1, 2))).max())
        ratio = errs[0] / errs[1]
        assert 12.0 <= ratio <= 20.0

    def test_validation_errors(self):
        model, psi0 = spontaneous_emission_model(1.0)
        with pytest.raises(ValueError):
            evolve(model, psi0, -1.0, 1e-3)
        with pytest.raises(ValueError):
            evolve(model, psi0, 1.0, 2.0)
        with pytest.raises(ValueError):
            evolve(model, np.array([1.0, 1.0]), 1.0, 1e-3)
        with pytest.raises(DimensionMismatchError):
            evolve(model, np.array([1.0, 0.0, 0.0]), 1.0, 1e-3)

    def test_unstable_step_raises_quality_error(self):
        # step size puts the decay mode at h*lambda = -4, outside the RK4
        # stability interval, so the population mode grows ~5x per step
        model, psi0 = spontaneous_emission_model(1.0)
        with pytest.raises(IntegrationQualityError):
            evolve(model, psi0, 40.0, 4.0)

    def test_renormalization_counter_stays_quiet(self):
        model, psi0 = spontaneous_emission_model(1.0)
        traj = evolve(model, psi0, 1.0, 1e-3)
        assert traj.renormalizations <= 2
        assert traj.trace_drift < 1e-12


class TestFirstPassage:
    def test_emission_matches_closed_form(self):
        model, psi0 = spontaneous_emission_model(1.0)
        traj = evolve(model, psi0, 2.0, 1e-3)
        target = np.pi / 4
        expected = -np.log(np.cos(target) ** 2)
        assert first_passage_time(traj, target) == pytest.approx(expected, abs=1e-7)

    def test_target_inside_first_step(self):
        model, psi0 = spontaneous_emission_model(1.0)
        traj = evolve(model, psi0, 1.0, 1e-2)
        # angle halfway through the first step, from the analytic inverse
        target = np.arccos(np.exp(-0.5 * 0.004))
        t = first_passage_time(traj, target)
        assert 0.0 < t < traj.times[1]
        assert t == pytest.approx(0.004, abs=1e-7)

    def test_rabi_first_crossing_is_earliest(self):
        # analytic Rabi oracle: Theta(t) = arccos(|cos(omega t / 2)|), so the
        # first crossing of target is at t = 2 arcsin(sin(target)) / omega
        omega = 1.0
        model = LindbladModel(hamiltonian=0.5 * omega * SIGMA_X)
        traj = evolve(model, EXCITED, 10.0, 1e-3)
        target = 0.3
        expected = 2.0 * np.arcsin(np.sin(target)) / omega
        assert first_passage_time(traj, target) == pytest.approx(expected, abs=1e-7)

    def test_near_orthogonal_rabi_target(self):
        # analytic flip time: |cos(t/2)| = cos(target) gives t = pi - 2e-5
        omega = 1.0
        model = LindbladModel(hamiltonian=0.5 * omega * SIGMA_X)
        traj = evolve(model, EXCITED, 4.0, 1e-4)
        t = first_passage_time(traj, np.pi / 2 - 1e-5)
        assert t == pytest.approx(np.pi - 2e-5, abs=1e-6)

    def test_unreachable_target(self):
        # dephasing saturates the angle at pi/4 for the theta = pi/4 state
        from openqsl.models import DephasingQubitParams, dephasing_model

        model, psi0 = dephasing_model(DephasingQubitParams(omega=1.0, gamma=1.0, theta=np.pi / 4))
        traj = evolve(model, psi0, 20.0, 1e-3)
        with pytest.raises(UnreachableTargetError):
            first_passage_time(traj, 1.5)

    def test_domain_validation(self):
        model, psi0 = spontaneous_emission_model(1.0)
        traj = evolve(model, psi0, 1.0, 1e-2)
        with pytest.raises(ValueError):
            first_passage_time(traj, 0.0)
        with pytest.raises(ValueError):
            first_passage_time(traj, np.pi / 2)


class TestThetaDotExact:
    def test_matches_finite_difference_on_emission(self):
        model, psi0 = spontaneous_emission_model(1.0)
        traj = evolve(model, psi0, 1.0, 1e-4)
        k = 1000  # t = 0.1
        fd = (traj.bures_angles[k + 1] - traj.bures_angles[k - 1]) / (2 * traj.dt)
        exact = theta_dot_exact(model, traj.rho0, traj.states[k], traj.bures_angles[k])
        assert exact == pytest.approx(fd, abs=1e-5)

    def test_matches_finite_difference_along_presets(self):
        from openqsl.models import DephasingQubitParams, dephasing_model

        presets = [
            spontaneous_emission_model(1.0),
            dephasing_model(DephasingQubitParams(omega=1.0, gamma=1.0, theta=np.pi / 4)),
        ]
        for model, psi0 in presets:
            traj = evolve(model, psi0, 2.0, 1e-4)
            # stay clear of theta ~ 0, where theta grows like sqrt(t) and the
            # centered difference loses accuracy to the diverging derivatives
            interior = [
                k
                for k in range(1, len(traj.times) - 1)
                if 0.3 < traj.bures_angles[k] < np.pi / 2 - 0.05
            ]
            assert len(interior) >= 50
            step = max(1, len(interior) // 50)
            for k in interior[::step][:50]:
                fd = (traj.bures_angles[k + 1] - traj.bures_angles[k - 1]) / (2 * traj.dt)
                exact = theta_dot_exact(
                    model, traj.rho0, traj.states[k], traj.bures_angles[k]
                )
                assert exact == pytest.approx(fd, abs=1e-5)

    def test_closed_system_reduction(self, rng):
        # without jump operators only the commutator term contributes
        h = random_hermitian(rng, 2)
        model = LindbladModel(hamiltonian=h)
        psi = random_state(rng, 2)
        traj = evolve(model, psi, 1.0, 1e-3)
        k = 500
        theta = traj.bures_angles[k]
        if not (1e-6 < theta < np.pi / 2 - 1e-6):
            pytest.skip("random draw sat on a singular point")
        expected = float(
            np.real(
                linalg.trace_product(
                    1j * linalg.commutator(traj.rho0, h), traj.states[k]
                )
            )
        ) / np.sin(2 * theta)
        got = theta_dot_exact(model, traj.rho0, traj.states[k], theta)
        assert got == pytest.approx(expected, abs=1e-12)

    def test_singular_points_rejected(self):
        model, psi0 = spontaneous_emission_model(1.0)
        rho0 = linalg.projector(psi0)
        with pytest.raises(SingularPointError):
            theta_dot_exact(model, rho0, rho0, 1e-9)
        with pytest.raises(SingularPointError):
            theta_dot_exact(model, rho0, rho0, np.pi / 2 - 1e-9)
