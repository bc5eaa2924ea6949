"""The driven collective-spin Hamiltonian and its rotating-frame machinery.

The lab-frame Hamiltonian is

    H(t) = -h Jz - (1/N) [ (gx0 + gx1 cos(omega t)) Jx^2 + gy Jy^2 ],

with a conserved parity.  A resonance index m selects a frame co-rotating
at m*omega/2 about z; on top of that an interaction-picture twist about
Jx^2 removes the oscillating part of the xx coupling.  The generator in
that frame is time-periodic with small oscillating terms, and its time
average (the zero Fourier component) has a closed form for m = 0 built
from zeroth-order Bessel functions of Jx.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import j0

from .errors import IntegrationAccuracyError, InvalidParameterError, UnsupportedResonanceError
from .spin import CollectiveSpinOps, hermitian_function


@dataclass(frozen=True)
class ModelParams:
    """Physical couplings and drive parameters.

    ``h`` is the transverse field (negative by convention), ``gamma0x`` the
    static xx coupling, ``gamma1x`` the drive amplitude, ``gammay`` the yy
    coupling, ``omega`` the drive angular frequency and ``m`` the resonance
    index of the rotating frame.
    """

    h: float
    gamma0x: float
    gamma1x: float
    gammay: float
    omega: float
    n_particles: int
    m: int = 0

    def __post_init__(self):
        if self.omega <= 0:
            raise InvalidParameterError(f"omega must be positive, got {self.omega}")
        if not isinstance(self.n_particles, (int, np.integer)) or self.n_particles < 1:
            raise InvalidParameterError(
                f"n_particles must be a positive integer, got {self.n_particles!r}"
            )
        if not isinstance(self.m, (int, np.integer)) or self.m < 0:
            raise InvalidParameterError(f"m must be a non-negative integer, got {self.m!r}")

    @property
    def period(self) -> float:
        return 2 * np.pi / self.omega


@dataclass(frozen=True)
class OscillatorParams:
    """Quadratic-oscillator reduction of the symmetric phase.

    The squared excitation energy is stored signed (negative means the
    undriven symmetric phase is already unstable); ``drive_coeff`` is the
    coefficient of cos(omega t) in the time-dependent stiffness.
    """

    epsilon_sq: float
    drive_coeff: float
    omega: float
    ground_shift: float

    @property
    def epsilon(self) -> float:
        """Excitation energy; NaN when epsilon_sq < 0."""
        return float(np.sqrt(self.epsilon_sq)) if self.epsilon_sq >= 0 else float("nan")


def _check_dims(params: ModelParams, ops: CollectiveSpinOps):
    if ops.n_particles != params.n_particles:
        raise InvalidParameterError(
            f"operator set built for N={ops.n_particles}, params have N={params.n_particles}"
        )


@lru_cache(maxsize=64)
def _squares(ops: CollectiveSpinOps) -> tuple[np.ndarray, np.ndarray]:
    jx2 = ops.jx @ ops.jx
    jy2 = ops.jy @ ops.jy
    jx2.flags.writeable = False
    jy2.flags.writeable = False
    return jx2, jy2


@lru_cache(maxsize=64)
def _jx_eigh(ops: CollectiveSpinOps) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition jx = W diag(d) W^dagger, cached per operator set."""
    d, w = np.linalg.eigh(ops.jx)
    d.flags.writeable = False
    w.flags.writeable = False
    return d, w


def drive_coupling(params: ModelParams, t: float) -> float:
    """Instantaneous xx coupling gx0 + gx1 cos(omega t)."""
    return params.gamma0x + params.gamma1x * np.cos(params.omega * t)


def hamiltonian_at(params: ModelParams, ops: CollectiveSpinOps, t: float) -> np.ndarray:
    """Lab-frame Hamiltonian matrix at time t."""
    _check_dims(params, ops)
    jx2, jy2 = _squares(ops)
    gx = drive_coupling(params, t)
    return -params.h * ops.jz - (gx * jx2 + params.gammay * jy2) / params.n_particles


def _twist_angle(params: ModelParams, t: float) -> float:
    """Integral of the oscillating xx coupling: gx1 sin(omega t) / (N omega)."""
    return params.gamma1x * np.sin(params.omega * t) / (params.n_particles * params.omega)


def rotating_unitary(params: ModelParams, ops: CollectiveSpinOps, t: float) -> np.ndarray:
    """Frame transformation U_m(t) = exp(+i Theta(t) jx^2) exp(-i m omega t jz / 2).

    The rotating-frame state is U_m(t)^dagger |psi_lab>.  The sign of the
    jx^2 twist is chosen so that the oscillating drive term cancels from
    the rotating-frame generator (see decisions ledger for the rationale).
    U_m(0) is the identity.
    """
    _check_dims(params, ops)
    theta = _twist_angle(params, t)
    half_rot = params.m * params.omega * t / 2
    d, w = _jx_eigh(ops)
    u = (w * np.exp(1j * theta * d * d)) @ w.conj().T
    mz = np.real(np.diag(ops.jz))
    return u * np.exp(-1j * half_rot * mz)[None, :]


def _lambda_ops(params: ModelParams, ops: CollectiveSpinOps, t: float) -> tuple[np.ndarray, np.ndarray]:
    """In-plane operators seen from the co-rotating frame.

    lambda1 = -jy cos - jx sin and lambda2 = jx cos - jy sin with the
    half-resonance angle m omega t / 2.
    """
    ang = params.m * params.omega * t / 2
    c, s = np.cos(ang), np.sin(ang)
    return -ops.jy * c - ops.jx * s, ops.jx * c - ops.jy * s


def rotating_hamiltonian_at(params: ModelParams, ops: CollectiveSpinOps, t: float) -> np.ndarray:
    """Generator of the rotating-frame dynamics at time t.

    Computed exactly as U_m^dagger H U_m plus the analytic frame-derivative
    terms  +Theta'(t) (Uz^dagger jx^2 Uz) - (m omega / 2) jz,  with
    Theta'(t) = gx1 cos(omega t) / N.  At t = 0 this reduces to the
    undriven Hamiltonian shifted by -(m omega / 2) jz.
    """
    _check_dims(params, ops)
    u = rotating_unitary(params, ops, t)
    h = hamiltonian_at(params, ops, t)
    theta_dot = params.gamma1x * np.cos(params.omega * t) / params.n_particles
    _, lam2 = _lambda_ops(params, ops, t)
    out = u.conj().T @ h @ u
    out += theta_dot * (lam2 @ lam2)
    out -= (params.m * params.omega / 2) * ops.jz
    return (out + out.conj().T) / 2


def fourier_component(
    params: ModelParams, ops: CollectiveSpinOps, n: int, samples: int = 256
) -> np.ndarray:
    """Fourier component (1/T) int_0^T H_m(t) exp(-i n omega t) dt.

    Uses the periodic trapezoid rule (spectrally accurate here since the
    integrand is analytic and T-periodic); ``samples`` must be >= 64.
    """
    if samples < 64:
        raise InvalidParameterError(f"samples must be >= 64, got {samples}")
    _check_dims(params, ops)
    ts = np.arange(samples) * (params.period / samples)
    acc = np.zeros((ops.dim, ops.dim), dtype=complex)
    for t in ts:
        acc += rotating_hamiltonian_at(params, ops, t) * np.exp(-1j * n * params.omega * t)
    return acc / samples


def effective_h0_closed_form(params: ModelParams, ops: CollectiveSpinOps) -> np.ndarray:
    """Closed form of the time-averaged rotating-frame Hamiltonian, m = 0 only.

    b1 = J0[(gx1/(N omega)) (2 jx + 1)] and b2 = J0[(4 gx1/(N omega)) (jx + 1)]
    enter as written (products left to right, Hermitian conjugate added):

        h0 = [-h/2 (jz - i jy) b1 + gy/(4N) (jz - i jy)^2 b2 + h.c.]
             - gy/(2N) (jz^2 + jy^2) - gx0/N jx^2
    """
    if params.m != 0:
        raise UnsupportedResonanceError(
            f"closed-form effective Hamiltonian only implemented for m = 0, got m = {params.m}"
        )
    _check_dims(params, ops)
    n, om = params.n_particles, params.omega
    c1 = params.gamma1x / (n * om)
    b1 = hermitian_function(ops.jx, lambda x: j0(c1 * (2 * x + 1)))
    b2 = hermitian_function(ops.jx, lambda x: j0(4 * c1 * (x + 1)))
    jx2, jy2 = _squares(ops)
    a = ops.jz - 1j * ops.jy
    half = -(params.h / 2) * (a @ b1) + (params.gammay / (4 * n)) * (a @ a @ b2)
    out = half + half.conj().T
    out -= (params.gammay / (2 * n)) * (ops.jz @ ops.jz + jy2)
    out -= (params.gamma0x / n) * jx2
    return out


def symmetric_phase_oscillator(params: ModelParams) -> OscillatorParams:
    """Quadratic-oscillator parameters of the symmetric phase.

    epsilon^2 = (h + gy)(h + gx0) (signed; negative flags static
    instability) and the drive stiffness oscillates with coefficient
    gx1 (h + gy).
    """
    eps_sq = (params.h + params.gammay) * (params.h + params.gamma0x)
    drive = params.gamma1x * (params.h + params.gammay)
    return OscillatorParams(
        epsilon_sq=float(eps_sq),
        drive_coeff=float(drive),
        omega=params.omega,
        ground_shift=params.n_particles * params.h / 2,
    )


def oscillator_stability(osc: OscillatorParams, steps: int = 2000) -> tuple[bool, float]:
    """Hill stability of q'' + [epsilon^2 + drive_coeff cos(omega t)] q = 0.

    Integrates the 2x2 fundamental matrix over one period with fixed-step
    RK4 and returns (stable, trace); stable iff |trace| <= 2.  The
    determinant must come back to 1 within 1e-8 (Liouville), otherwise an
    accuracy error is raised suggesting more steps.
    """
    if steps < 1000:
        raise InvalidParameterError(f"steps must be >= 1000, got {steps}")
    period = 2 * np.pi / osc.omega
    dt = period / steps

    def rhs(t, y):
        k = osc.epsilon_sq + osc.drive_coeff * np.cos(osc.omega * t)
        return np.array([y[1], -k * y[0]]) if y.ndim == 1 else np.vstack([y[1], -k * y[0]])

    mono = np.eye(2)
    t = 0.0
    for _ in range(steps):
        k1 = rhs(t, mono)
        k2 = rhs(t + dt / 2, mono + dt / 2 * k1)
        k3 = rhs(t + dt / 2, mono + dt / 2 * k2)
        k4 = rhs(t + dt, mono + dt * k3)
        mono = mono + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += dt
    det = float(np.linalg.det(mono))
    if abs(det - 1.0) > 1e-8:
        raise IntegrationAccuracyError(
            f"monodromy determinant drifted to {det}; increase steps"
        )
    trace = float(np.trace(mono))
    return abs(trace) <= 2.0, trace


def resonance_detuning(params: ModelParams) -> tuple[float, float]:
    """Detuning -h - m omega / 2 and the frame-validity ratio.

    The second value is max(|detuning|, |gx0|, |gy|) / omega; the rotating
    wave approximation is controlled when it is small.
    """
    delta = -params.h - params.m * params.omega / 2
    ratio = max(abs(delta), abs(params.gamma0x), abs(params.gammay)) / params.omega
    return float(delta), float(ratio)
