"""Lindblad generator and fixed-step RK4 trajectory integration.

The generator is time independent, so the classical RK4 step applied to
the linear master equation equals the degree-4 Taylor polynomial of the
step propagator. For small dimensions the integrator therefore precomputes
that polynomial once as a dense superoperator and advances the vectorized
state with one matrix-vector product per step; for larger dimensions it
falls back to the textbook four-stage form. Both paths are the same method
with the same truncation error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatchError,
    IntegrationQualityError,
    NonHermitianError,
    SingularPointError,
    UnreachableTargetError,
)

HAMILTONIAN_HERM_TOL = 1e-10
TRACE_DRIFT_LIMIT = 1e-6
MIN_EIG_LIMIT = -1e-5
RENORM_THRESHOLD = 1e-12
FIRST_PASSAGE_RESOLUTION = 1e-8
# Above this dimension the d^2 x d^2 step propagator is too large to hold.
SUPEROP_DIM_LIMIT = 32


def _readonly(a: np.ndarray) -> np.ndarray:
    a = a.copy()
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LindbladModel:
    """Time-independent Markovian generator (hbar = 1).

    ``hamiltonian`` carries energy units; each entry of ``lindblad_ops``
    carries sqrt(rate) units. An empty operator list is a closed system.
    """

    hamiltonian: np.ndarray
    lindblad_ops: tuple = ()

    def __post_init__(self):
        h = linalg.as_matrix(self.hamiltonian)
        dev = linalg.hermiticity_deviation(h)
        if dev > HAMILTONIAN_HERM_TOL:
            raise NonHermitianError(
                f"hamiltonian deviates from Hermitian by {dev:.3e} "
                f"(tol {HAMILTONIAN_HERM_TOL:g})"
            )
        ops = tuple(linalg.as_matrix(op) for op in self.lindblad_ops)
        for op in ops:
            if op.shape != h.shape:
                raise DimensionMismatchError(
                    f"lindblad operator shape {op.shape} != hamiltonian {h.shape}"
                )
        object.__setattr__(self, "hamiltonian", _readonly(h))
        object.__setattr__(self, "lindblad_ops", tuple(_readonly(op) for op in ops))

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]


def dissipator(l: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """L rho L^dag - {L^dag L, rho}/2; traceless for any rho."""
    linalg._check_same_shape(l, rho)
    ldl = l.conj().T @ l
    return l @ rho @ l.conj().T - 0.5 * (ldl @ rho + rho @ ldl)


def adjoint_dissipator(l: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Heisenberg-picture adjoint: L^dag a L - {L^dag L, a}/2."""
    linalg._check_same_shape(l, a)
    ldl = l.conj().T @ l
    return l.conj().T @ a @ l - 0.5 * (ldl @ a + a @ ldl)


def lindblad_rhs(model: LindbladModel, rho: np.ndarray) -> np.ndarray:
    """-i[H, rho] plus the summed dissipators of the model."""
    if rho.shape != model.hamiltonian.shape:
        raise DimensionMismatchError(
            f"state shape {rho.shape} != model dimension {model.hamiltonian.shape}"
        )
    out = -1j * linalg.commutator(model.hamiltonian, rho)
    for op in model.lindblad_ops:
        out += dissipator(op, rho)
    return out


def liouvillian_matrix(model: LindbladModel) -> np.ndarray:
    """Dense d^2 x d^2 superoperator acting on row-major vectorized states.

    Uses vec(A rho B) = (A kron B^T) vec(rho) for C-ordered flattening.
    """
    h = model.hamiltonian
    d = model.dim
    eye = np.eye(d, dtype=complex)
    a = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for op in model.lindblad_ops:
        ldl = op.conj().T @ op
        a += np.kron(op, op.conj())
        a -= 0.5 * (np.kron(ldl, eye) + np.kron(eye, ldl.T))
    return a


@dataclass(frozen=True)
class Trajectory:
    """One integration run of the master equation.

    ``states[k]`` is the density matrix at ``times[k]``; ``bures_angles``
    is the angle to the initial state at every grid point. ``trace_errors``
    and ``min_eigs`` are per-step diagnostics; ``trace_drift`` / ``min_eig``
    are their worst values over the run. ``renormalizations`` counts the
    steps whose state had to be rescaled by its trace (drift beyond 1e-12),
    so a silently misbehaving integrator shows up in the report.
    """

    times: np.ndarray
    states: np.ndarray
    bures_angles: np.ndarray
    trace_errors: np.ndarray
    min_eigs: np.ndarray
    trace_drift: float
    min_eig: float
    herm_drift: float
    renormalizations: int
    dt: float
    model: LindbladModel
    rho0: np.ndarray


def _rk4_step(model: LindbladModel, rho: np.ndarray, h: float) -> np.ndarray:
    """One classical RK4 step of the master equation."""
    k1 = lindblad_rhs(model, rho)
    k2 = lindblad_rhs(model, rho + (0.5 * h) * k1)
    k3 = lindblad_rhs(model, rho + (0.5 * h) * k2)
    k4 = lindblad_rhs(model, rho + h * k3)
    return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _rk4_propagator(a: np.ndarray, h: float) -> np.ndarray:
    """I + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24 (the RK4 one-step map)."""
    d2 = a.shape[0]
    ha = h * a
    prop = np.eye(d2, dtype=complex)
    term = np.eye(d2, dtype=complex)
    for k in (1, 2, 3, 4):
        term = term @ ha / k
        prop = prop + term
    return prop


def _propagate(model: LindbladModel, rho0: np.ndarray, n_steps: int, h: float):
    """March n_steps of size h; returns (states, trace_errors, n_renorm)."""
    d = model.dim
    states = np.empty((n_steps + 1, d, d), dtype=complex)
    trace_errors = np.empty(n_steps + 1)
    states[0] = rho0
    trace_errors[0] = abs(float(np.trace(rho0).real) - 1.0)
    n_renorm = 0
    diag = np.arange(d) * (d + 1)

    if d <= SUPEROP_DIM_LIMIT:
        prop = _rk4_propagator(liouvillian_matrix(model), h)
        v = rho0.reshape(-1).copy()
        for k in range(1, n_steps + 1):
            v = prop @ v
            tr = float(v[diag].real.sum())
            err = abs(tr - 1.0)
            trace_errors[k] = err
            if err > RENORM_THRESHOLD:
                v /= tr
                n_renorm += 1
            states[k] = v.reshape(d, d)
    else:
        rho = rho0.copy()
        for k in range(1, n_steps + 1):
            rho = _rk4_step(model, rho, h)
            tr = float(np.trace(rho).real)
            err = abs(tr - 1.0)
            trace_errors[k] = err
            if err > RENORM_THRESHOLD:
                rho /= tr
                n_renorm += 1
            states[k] = rho
    return states, trace_errors, n_renorm


def _max_herm_deviation(states: np.ndarray, chunk: int = 8192) -> float:
    worst = 0.0
    for start in range(0, states.shape[0], chunk):
        block = states[start : start + chunk]
        dev = np.abs(block - block.conj().transpose(0, 2, 1)).max()
        worst = max(worst, float(dev))
    return worst


def evolve(model: LindbladModel, psi0, t_end: float, dt: float) -> Trajectory:
    """Integrate from the pure state psi0 over [0, t_end] with step ~dt.

    The grid is n = round(t_end/dt) uniform steps, so halving dt exactly
    halves the step. Bures angles, trace and positivity diagnostics are
    recorded at every grid point; the run is rejected when the trace drift
    exceeds 1e-6 or an eigenvalue falls below -1e-5, which indicates the
    step is too coarse for the generator.
    """
    psi0 = linalg.pure_state(psi0)
    if psi0.size != model.dim:
        raise DimensionMismatchError(
            f"state dimension {psi0.size} != model dimension {model.dim}"
        )
    if not (t_end > 0.0) or not (dt > 0.0):
        raise ValueError("t_end and dt must be positive")
    if dt > t_end * (1.0 + 1e-12):
        raise ValueError("dt must not exceed t_end")

    psi0 = psi0 / np.linalg.norm(psi0)
    rho0 = linalg.projector(psi0)
    n_steps = max(1, int(round(t_end / dt)))
    h = t_end / n_steps

    states, trace_errors, n_renorm = _propagate(model, rho0, n_steps, h)
    times = np.arange(n_steps + 1) * h

    overlaps = np.real(states.reshape(n_steps + 1, -1) @ rho0.reshape(-1).conj())
    # The k=0 overlap is Tr(rho0^2) = 1 exactly for a pure start; pin it so
    # rounding in |psi|^4 cannot produce a spurious ~1e-8 initial angle.
    overlaps[0] = 1.0
    angles = np.arccos(np.sqrt(np.clip(overlaps, 0.0, 1.0)))

    herm_drift = _max_herm_deviation(states)
    # eigvalsh reads the lower triangle only; fine for near-Hermitian states
    # whose asymmetry is tracked separately in herm_drift.
    min_eigs = np.linalg.eigvalsh(states)[:, 0].real
    trace_drift = float(trace_errors.max())
    min_eig = float(min_eigs.min())

    if trace_drift > TRACE_DRIFT_LIMIT or min_eig < MIN_EIG_LIMIT:
        raise IntegrationQualityError(
            f"integration quality failure: trace drift {trace_drift:.3e}, "
            f"min eigenvalue {min_eig:.3e}; retry with a smaller dt"
        )

    return Trajectory(
        times=times,
        states=states,
        bures_angles=angles,
        trace_errors=trace_errors,
        min_eigs=min_eigs,
        trace_drift=trace_drift,
        min_eig=min_eig,
        herm_drift=herm_drift,
        renormalizations=n_renorm,
        dt=h,
        model=model,
        rho0=rho0,
    )


def _angle_after_step(model, rho_start, rho0_flat, tau: float) -> float:
    if tau == 0.0:
        rho = rho_start
    else:
        rho = _rk4_step(model, rho_start, tau)
    f = float(np.real(rho.reshape(-1) @ rho0_flat))
    return float(np.arccos(np.sqrt(min(max(f, 0.0), 1.0))))


def first_passage_time(traj: Trajectory, theta_target: float) -> float:
    """Earliest time the trajectory's Bures angle reaches theta_target.

    Scans the grid for the first crossing (the angle may be non-monotonic,
    e.g. under Rabi oscillation) and refines it by bisection, re-integrating
    a single partial step from the bracketing state, down to 1e-8 in time.
    """
    if not (0.0 < theta_target < np.pi / 2):
        raise ValueError("theta_target must lie in (0, pi/2)")
    angles = traj.bures_angles
    if angles.size == 0:
        raise ValueError("trajectory is empty")

    above = angles >= theta_target
    if not above.any():
        raise UnreachableTargetError(
            f"Bures angle never reached {theta_target:.6g} within horizon "
            f"{traj.times[-1]:.6g} (max angle {angles.max():.6g})"
        )
    idx = int(np.argmax(above))
    if idx == 0:
        return 0.0

    rho_start = traj.states[idx - 1]
    rho0_flat = traj.rho0.reshape(-1).conj()
    h = traj.times[idx] - traj.times[idx - 1]

    if _angle_after_step(traj.model, rho_start, rho0_flat, h) < theta_target:
        # Borderline grid hit (float-level): the grid time is the answer.
        return float(traj.times[idx])

    lo, hi = 0.0, float(h)
    while hi - lo > FIRST_PASSAGE_RESOLUTION:
        mid = 0.5 * (lo + hi)
        if _angle_after_step(traj.model, rho_start, rho0_flat, mid) >= theta_target:
            hi = mid
        else:
            lo = mid
    return float(traj.times[idx - 1] + 0.5 * (lo + hi))


def theta_dot_exact(
    model: LindbladModel, rho0: np.ndarray, rho_t: np.ndarray, theta_t: float
) -> float:
    """Exact instantaneous rate of the Bures angle along the dynamics.

    Evaluates [Tr(i[rho0, H] rho_t) - sum_k Tr(rho_t D_k^dag rho0)] / sin(2 theta),
    which is the time derivative of arccos(sqrt(Tr(rho0 rho_t))) under the
    master equation. Singular at theta = 0 and pi/2 where sin(2 theta) = 0.
    """
    if theta_t < 1e-6 or theta_t > np.pi / 2 - 1e-6:
        raise SingularPointError(
            f"theta = {theta_t:.3e} is within 1e-6 of a singular endpoint"
        )
    num = float(
        np.real(linalg.trace_product(1j * linalg.commutator(rho0, model.hamiltonian), rho_t))
    )
    for op in model.lindblad_ops:
        num -= float(np.real(linalg.trace_product(rho_t, adjoint_dissipator(op, rho0))))
    return num / float(np.sin(2.0 * theta_t))
