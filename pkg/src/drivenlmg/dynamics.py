"""Finite-N quantum evolution from spin coherent states.

Trajectories carry normalized spin expectations in a declared frame (lab,
rotating, stroboscopic or effective) plus norm/parity diagnostics, and can
be projected onto the (Q, P) disk.  Stroboscopic evolution reuses a single
cached one-period propagator; the effective evolution exponentiates the
time-averaged rotating-frame Hamiltonian exactly.
"""

from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import solve_ivp

from .errors import IntegrationAccuracyError, InvalidParameterError, UnsupportedResonanceError
from .floquet import DEFAULT_SETTINGS, IntegratorSettings, propagator, _interaction_frame, _twist
from .landscape import QelPoint
from .model import ModelParams, effective_h0_closed_form, rotating_unitary
from .spin import CollectiveSpinOps, bloch_projection, coherent_state, qp_to_angles

FRAMES = ("lab", "rotating", "stroboscopic", "effective")


@dataclass(frozen=True)
class Trajectory:
    """Time series of normalized spin expectations in one frame.

    Expectations are divided by j = N/2.  ``qp_path`` (filled in by
    :func:`project_trajectory`) holds one (Q, P) row per sample with NaN
    rows for samples whose expectation vector had zero length;
    ``radius_path`` is the pre-rescaling |<J>|/N diagnostic.  ``states``
    keeps the full state vectors so frames can be transformed afterwards.
    """

    frame: str
    times: np.ndarray
    jx_expect: np.ndarray
    jy_expect: np.ndarray
    jz_expect: np.ndarray
    norm_drift: np.ndarray
    parity_drift: np.ndarray
    states: np.ndarray | None = None
    qp_path: np.ndarray | None = None
    radius_path: np.ndarray | None = None


def _expectations(ops: CollectiveSpinOps, states: np.ndarray):
    j = ops.j
    ex = np.real(np.einsum("ti,ij,tj->t", states.conj(), ops.jx, states)) / j
    ey = np.real(np.einsum("ti,ij,tj->t", states.conj(), ops.jy, states)) / j
    ez = np.real(np.einsum("ti,ij,tj->t", states.conj(), ops.jz, states)) / j
    return ex, ey, ez


def _parity_expect(ops: CollectiveSpinOps, states: np.ndarray) -> np.ndarray:
    signs = np.real(np.diag(ops.parity))
    return np.einsum("ti,i,ti->t", states.conj(), signs, states).real


def _check_state(psi0: np.ndarray, dim: int) -> np.ndarray:
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (dim,):
        raise InvalidParameterError(f"state must have length {dim}, got shape {psi0.shape}")
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-9:
        raise InvalidParameterError("initial state is not normalized")
    return psi0


def evolve(
    params: ModelParams,
    ops: CollectiveSpinOps,
    psi0: np.ndarray,
    times,
    settings: IntegratorSettings | None = None,
) -> Trajectory:
    """Integrate the lab-frame Schroedinger equation and record observables.

    ``times`` must be non-negative and strictly increasing.  The state is
    propagated in the drive-cancelling interaction frame (an exact change
    of variables) and dressed back at each requested sample.
    """
    settings = settings or DEFAULT_SETTINGS
    psi0 = _check_state(psi0, ops.dim)
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0 or times[0] < 0 or np.any(np.diff(times) <= 0):
        raise InvalidParameterError("times must be non-negative and strictly increasing")
    d2, w, a = _interaction_frame(params, ops)

    def rhs(t, y):
        phase = np.exp(1j * _twist(params, t) * d2)
        return -1j * ((a * phase[None, :] * phase.conj()[:, None]) @ y)

    y0 = w.conj().T @ psi0
    sol = solve_ivp(
        rhs,
        (0.0, float(times[-1])),
        y0,
        t_eval=times,
        method=settings.method,
        rtol=settings.rtol,
        atol=settings.atol,
        max_step=settings.max_step_frac * params.period,
    )
    if not sol.success:
        raise IntegrationAccuracyError(f"state integration failed: {sol.message}")
    phases = np.exp(1j * np.outer(_twist(params, times), d2))
    states = np.einsum("ij,tj->ti", w, phases * sol.y.T)
    norms = np.linalg.norm(states, axis=1)
    drift = np.abs(norms - 1.0)
    if drift.max() > 1e-6:
        raise IntegrationAccuracyError(
            f"norm drift {drift.max():.3e} exceeds 1e-6; tighten rtol/atol"
        )
    par = _parity_expect(ops, states)
    ex, ey, ez = _expectations(ops, states)
    return Trajectory(
        frame="lab",
        times=times,
        jx_expect=ex,
        jy_expect=ey,
        jz_expect=ez,
        norm_drift=drift,
        parity_drift=np.abs(par - par[0]),
        states=states,
    )


def rotating_expectations(
    params: ModelParams, ops: CollectiveSpinOps, trajectory: Trajectory
) -> Trajectory:
    """Re-express a lab trajectory in the rotating frame.

    Computes expectations both from the transformed states U_m(t)^dag |psi>
    and as expectations of the rotated operators U_m J U_m^dag in the lab
    states; the two must agree to 1e-10 (internal identity check).
    """
    if trajectory.states is None:
        raise InvalidParameterError("trajectory does not carry state vectors")
    rot_states = np.empty_like(trajectory.states)
    ex2 = np.empty(len(trajectory.times))
    ey2 = np.empty_like(ex2)
    ez2 = np.empty_like(ex2)
    for idx, t in enumerate(trajectory.times):
        u = rotating_unitary(params, ops, float(t))
        psi = trajectory.states[idx]
        rot_states[idx] = u.conj().T @ psi
        ex2[idx] = np.real(psi.conj() @ (u @ ops.jx @ u.conj().T) @ psi) / ops.j
        ey2[idx] = np.real(psi.conj() @ (u @ ops.jy @ u.conj().T) @ psi) / ops.j
        ez2[idx] = np.real(psi.conj() @ (u @ ops.jz @ u.conj().T) @ psi) / ops.j
    ex, ey, ez = _expectations(ops, rot_states)
    mismatch = max(
        np.abs(ex - ex2).max(), np.abs(ey - ey2).max(), np.abs(ez - ez2).max()
    )
    if mismatch > 1e-10:
        raise IntegrationAccuracyError(
            f"rotating-frame identity violated by {mismatch:.3e}"
        )
    par = _parity_expect(ops, rot_states)
    return replace(
        trajectory,
        frame="rotating",
        jx_expect=ex,
        jy_expect=ey,
        jz_expect=ez,
        parity_drift=np.abs(par - par[0]),
        states=rot_states,
        qp_path=None,
        radius_path=None,
    )


def stroboscopic(
    params: ModelParams,
    ops: CollectiveSpinOps,
    psi0: np.ndarray,
    r_max: int,
    settings: IntegratorSettings | None = None,
) -> Trajectory:
    """States at integer periods t_r = r T by repeated monodromy application."""
    if r_max < 1:
        raise InvalidParameterError(f"r_max must be >= 1, got {r_max}")
    psi0 = _check_state(psi0, ops.dim)
    u_period = propagator(params, ops, params.period, settings)
    states = np.empty((r_max + 1, ops.dim), dtype=complex)
    states[0] = psi0
    for r in range(1, r_max + 1):
        states[r] = u_period @ states[r - 1]
        drift = abs(np.linalg.norm(states[r]) - 1.0)
        if drift > 1e-6:
            raise IntegrationAccuracyError(
                f"accumulated unitarity defect {drift:.3e} at period {r}"
            )
    times = params.period * np.arange(r_max + 1)
    norms = np.linalg.norm(states, axis=1)
    par = _parity_expect(ops, states)
    ex, ey, ez = _expectations(ops, states)
    return Trajectory(
        frame="stroboscopic",
        times=times,
        jx_expect=ex,
        jy_expect=ey,
        jz_expect=ez,
        norm_drift=np.abs(norms - 1.0),
        parity_drift=np.abs(par - par[0]),
        states=states,
    )


def effective_evolution(
    params: ModelParams, ops: CollectiveSpinOps, psi0: np.ndarray, times
) -> Trajectory:
    """Evolution under the time-independent effective Hamiltonian (m = 0).

    Exact exponential propagation by eigendecomposition; the generator
    expectation is conserved to rounding.
    """
    if params.m != 0:
        raise UnsupportedResonanceError("effective evolution is defined for m = 0")
    psi0 = _check_state(psi0, ops.dim)
    times = np.asarray(times, dtype=float)
    h0 = effective_h0_closed_form(params, ops)
    w, v = np.linalg.eigh(h0)
    coeff = v.conj().T @ psi0
    states = np.einsum("ij,tj->ti", v, np.exp(-1j * np.outer(times, w)) * coeff)
    norms = np.linalg.norm(states, axis=1)
    par = _parity_expect(ops, states)
    ex, ey, ez = _expectations(ops, states)
    return Trajectory(
        frame="effective",
        times=times,
        jx_expect=ex,
        jy_expect=ey,
        jz_expect=ez,
        norm_drift=np.abs(norms - 1.0),
        parity_drift=np.abs(par - par[0]),
        states=states,
    )


def project_trajectory(trajectory: Trajectory, n_particles: int) -> Trajectory:
    """Attach the (Q, P) disk projection of the expectation path.

    Samples with a zero-length expectation vector are flagged with NaN
    rows and the path continues.
    """
    j = n_particles / 2
    n = len(trajectory.times)
    qp = np.full((n, 2), np.nan)
    radius = np.full(n, np.nan)
    for idx in range(n):
        try:
            pt = bloch_projection(
                trajectory.jx_expect[idx] * j,
                trajectory.jy_expect[idx] * j,
                trajectory.jz_expect[idx] * j,
                n_particles,
            )
        except Exception:
            continue
        qp[idx] = (pt.q, pt.p)
        radius[idx] = pt.radius
    return replace(trajectory, qp_path=qp, radius_path=radius)


def minimum_to_state(minimum: QelPoint, n_particles: int) -> np.ndarray:
    """Spin coherent state centered at a landscape minimum."""
    theta, phi = qp_to_angles(minimum.q, minimum.p)
    return coherent_state(n_particles, theta, phi)
