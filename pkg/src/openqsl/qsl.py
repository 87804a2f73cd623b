"""Speed-limit quantities and bounds for Markovian dynamics.

All scalars derive from the initial pure state and the generator:

* ``delta_h0``  energy standard deviation (unitary contribution),
* ``g_term``    Frobenius norm of the summed adjoint dissipator applied to
                the initial state (dissipative deformation),
* ``e_term``    summed variance of the jump operators in the initial state
                (fluctuation contribution),
* ``v_coeff``   effective speed 2*delta_h0 + sqrt(2)*g_term.

The evolution-time bound integrates the differential angle bound
(v sin(theta) + e)/sin(2 theta) in closed form; ``f_ratio`` is the same
integral expressed through the ratio r = v/e.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .dynamics import (
    LindbladModel,
    adjoint_dissipator,
    evolve,
    first_passage_time,
)
from .errors import FrozenDynamicsError, SingularPointError, UnreachableTargetError

PURITY_TOL = 1e-9
OVERLAP_IMAG_TOL = 1e-10
OVERLAP_RANGE_TOL = 1e-12
# Dimensionless switch between the closed form and its series limits.
LIMIT_SWITCH = 1e8
BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class QslQuantities:
    """Scalar bundle evaluated at the initial state; all fields >= 0."""

    delta_h0: float
    g_term: float
    e_term: float
    v_coeff: float
    ratio_r: float | None

    @classmethod
    def from_terms(cls, delta_h0: float, g_term: float, e_term: float) -> "QslQuantities":
        delta_h0, g_term, e_term = float(delta_h0), float(g_term), float(e_term)
        v = 2.0 * delta_h0 + math.sqrt(2.0) * g_term
        r = v / e_term if e_term > 0.0 else None
        return cls(delta_h0=delta_h0, g_term=g_term, e_term=e_term, v_coeff=v, ratio_r=r)


@dataclass(frozen=True)
class BoundReport:
    """Comparison of simulated first passage against the time bound.

    ``t_first_passage`` is None when the target angle was not reached
    within the horizon; the bound then holds vacuously.
    """

    theta_target: float
    t_first_passage: float | None
    t_qsl: float
    t_lower: float
    satisfied: bool


def bures_angle(rho0: np.ndarray, rho_t: np.ndarray) -> float:
    """arccos(sqrt(Tr(rho0 rho_t))) for a pure rho0; lies in [0, pi/2]."""
    purity = float(np.real(linalg.trace_product(rho0, rho0)))
    if abs(purity - 1.0) > PURITY_TOL:
        raise ValueError(f"rho0 purity {purity!r} differs from 1 beyond {PURITY_TOL:g}")
    overlap = linalg.trace_product(rho0, rho_t)
    if abs(overlap.imag) > OVERLAP_IMAG_TOL:
        raise ValueError(f"overlap has imaginary part {overlap.imag:.3e}")
    f = overlap.real
    if f < -OVERLAP_RANGE_TOL or f > 1.0 + OVERLAP_RANGE_TOL:
        raise ValueError(f"overlap {f!r} outside [0, 1]")
    return float(np.arccos(np.sqrt(min(max(f, 0.0), 1.0))))


def compute_quantities(model: LindbladModel, psi0) -> QslQuantities:
    """Evaluate all speed-limit scalars from their definitions."""
    psi0 = linalg.pure_state(psi0)
    h = model.hamiltonian
    hpsi = h @ psi0
    mean_h = float(np.real(np.vdot(psi0, hpsi)))
    var_h = float(np.real(np.vdot(hpsi, hpsi))) - mean_h**2
    if var_h < -1e-12:
        raise ValueError(f"energy variance {var_h:.3e} is negative beyond tolerance")
    delta_h0 = math.sqrt(max(var_h, 0.0))

    rho0 = linalg.projector(psi0)
    deformation = np.zeros_like(rho0)
    e_term = 0.0
    for op in model.lindblad_ops:
        deformation += adjoint_dissipator(op, rho0)
        lpsi = op @ psi0
        var_l = float(np.real(np.vdot(lpsi, lpsi))) - abs(np.vdot(psi0, lpsi)) ** 2
        e_term += max(var_l, 0.0)
    g_term = linalg.frobenius_norm(deformation)
    return QslQuantities.from_terms(delta_h0, g_term, e_term)


def theta_dot_bound(q: QslQuantities, theta: float) -> float:
    """Upper bound on the angle rate: (v sin(theta) + e) / sin(2 theta)."""
    if not (0.0 < theta < np.pi / 2):
        raise SingularPointError(f"theta = {theta!r} outside the open interval (0, pi/2)")
    num = (2.0 * q.delta_h0 + math.sqrt(2.0) * q.g_term) * math.sin(theta) + q.e_term
    return num / math.sin(2.0 * theta)


def _bound_integral(v: float, e: float, s: float) -> float:
    """closed form of integral_0^Theta sin(2u) / (v sin(u) + e) du with s = sin(Theta).

    Branches keep the evaluation stable where the closed form degenerates:
    e = 0 gives 2s/v, v = 0 gives s^2/e, and for extreme v*s/e the series
    limit (with its first correction) replaces the log form.
    """
    if e <= 0.0 and v <= 0.0:
        raise FrozenDynamicsError("generator has zero speed; target unreachable")
    if e <= 0.0:
        return 2.0 * s / v
    if v <= 0.0:
        return s * s / e
    x = v * s / e
    if x > LIMIT_SWITCH:
        return 2.0 * s / v
    if x < 1.0 / LIMIT_SWITCH:
        # Leading term plus first correction; avoids the s - log1p cancellation.
        return (s * s / e) * (1.0 - 2.0 * x / 3.0)
    return max((2.0 / v) * (s - (e / v) * math.log1p(x)), 0.0)


def t_qsl(q: QslQuantities, theta_target: float) -> float:
    """Minimum evolution time to reach the target Bures angle."""
    if not (0.0 < theta_target <= np.pi / 2):
        raise ValueError(f"theta_target = {theta_target!r} outside (0, pi/2]")
    return _bound_integral(q.v_coeff, q.e_term, math.sin(theta_target))


def t_qsl_strong_decoherence(q: QslQuantities, theta_target: float) -> float:
    """Fluctuation-dominated limit sin^2(Theta)/e of the time bound."""
    if q.e_term <= 0.0:
        raise FrozenDynamicsError("strong-decoherence limit requires e_term > 0")
    s = math.sin(theta_target)
    return s * s / q.e_term


def f_ratio(r: float, theta_target: float) -> float:
    """Constant-ratio form: t_qsl equals f_ratio(v/e, Theta)/v when e > 0.

    Shares the branch structure of the full bound (evaluated at v = r,
    e = 1), so the identity holds to rounding for every input.
    """
    if r <= 0.0:
        raise ValueError("ratio must be positive")
    return r * _bound_integral(r, 1.0, math.sin(theta_target))


def qsl_lower_bound(q: QslQuantities, theta_target: float) -> float:
    """Algebraic floor sin^2(Theta)/(e + v sin(Theta)) under the time bound."""
    s = math.sin(theta_target)
    den = q.e_term + q.v_coeff * s
    if den <= 0.0:
        raise FrozenDynamicsError("generator has zero speed; target unreachable")
    return s * s / den


def evaluate_bound(
    model: LindbladModel,
    psi0,
    theta_target: float,
    horizon: float,
    dt: float,
) -> BoundReport:
    """Integrate, find the first passage and compare it with the bound."""
    traj = evolve(model, psi0, horizon, dt)
    quantities = compute_quantities(model, psi0)
    bound = t_qsl(quantities, theta_target)
    lower = qsl_lower_bound(quantities, theta_target)
    try:
        t_fp = first_passage_time(traj, theta_target)
    except UnreachableTargetError:
        return BoundReport(
            theta_target=theta_target,
            t_first_passage=None,
            t_qsl=bound,
            t_lower=lower,
            satisfied=True,
        )
    return BoundReport(
        theta_target=theta_target,
        t_first_passage=t_fp,
        t_qsl=bound,
        t_lower=lower,
        satisfied=bool(t_fp >= bound - BOUND_SLACK),
    )
