"""Exact collective-spin algebra on the symmetric (maximal-j) subspace.

All matrices live in the J_z eigenbasis with eigenvalues -j..j ascending,
j = N/2, so states are complex vectors of length N+1.  Operators returned
by :func:`build_ops` are immutable (read-only numpy arrays), which makes
them safe to cache and to share between threads/processes.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import comb

from .errors import DegenerateDirectionError, DomainError, InvalidParameterError

_BOUNDARY_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class CollectiveSpinOps:
    """Collective angular momentum matrices for N spin-1/2 particles.

    Attributes
    ----------
    n_particles : int
        Number of two-level systems N.
    dim : int
        Hilbert-space dimension N+1.
    jx, jy, jz : ndarray
        Hermitian (N+1)x(N+1) matrices; jz is diagonal with entries
        -N/2 .. N/2 ascending.
    parity : ndarray
        The conserved parity exp(i*pi*(jz + j)), diagonal with entries +-1.
    """

    n_particles: int
    dim: int
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray
    parity: np.ndarray

    @property
    def j(self) -> float:
        return self.n_particles / 2


@dataclass(frozen=True)
class BlochPoint:
    """A point of the unit disk together with its Bloch-sphere angles.

    ``alpha_sq = q**2 + p**2`` is the squared disk radius; ``radius`` is the
    length of the raw expectation vector |<J>|/N before rescaling (1/2 for a
    spin coherent state, smaller for spread-out states), kept as a fidelity
    diagnostic by :func:`bloch_projection`.
    """

    q: float
    p: float
    theta: float
    phi: float
    alpha_sq: float
    radius: float | None = None


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@lru_cache(maxsize=64)
def build_ops(n_particles: int) -> CollectiveSpinOps:
    """Construct jx, jy, jz and the parity matrix for N particles.

    Ladder matrix elements are sqrt(j(j+1) - m(m+1)); jx comes out real
    tridiagonal, which keeps its eigendecomposition cheap.
    """
    if not isinstance(n_particles, (int, np.integer)) or isinstance(n_particles, bool):
        raise InvalidParameterError(f"n_particles must be an integer, got {n_particles!r}")
    if n_particles < 1:
        raise InvalidParameterError(f"n_particles must be >= 1, got {n_particles}")
    n = int(n_particles)
    j = n / 2
    m = np.arange(n + 1) - j  # -j .. j ascending
    jz = np.diag(m).astype(complex)
    # j_plus |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>: subdiagonal in ascending basis
    ladder = np.sqrt(j * (j + 1) - m[:-1] * (m[:-1] + 1))
    jp = np.diag(ladder, -1).astype(complex)
    jm = jp.conj().T
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    parity = np.diag(np.where(np.arange(n + 1) % 2 == 0, 1.0, -1.0)).astype(complex)
    return CollectiveSpinOps(
        n_particles=n,
        dim=n + 1,
        jx=_freeze(jx),
        jy=_freeze(jy),
        jz=_freeze(jz),
        parity=_freeze(parity),
    )


def coherent_state(n_particles: int, theta: float, phi: float) -> np.ndarray:
    """Spin coherent state pointing along (theta, phi), as a length-N+1 vector.

    Amplitude on the J_z level m = k - j is
    C(N,k)^(1/2) cos(theta/2)^(N-k) sin(theta/2)^k e^(-i k phi),
    which is the rotated lowest-weight state written without the
    tan(theta/2) parametrization, so theta = pi is regular.
    """
    if not isinstance(n_particles, (int, np.integer)) or n_particles < 1:
        raise InvalidParameterError(f"n_particles must be a positive integer, got {n_particles!r}")
    if not (0.0 <= theta <= np.pi):
        raise InvalidParameterError(f"theta must lie in [0, pi], got {theta}")
    n = int(n_particles)
    k = np.arange(n + 1)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    amp = np.sqrt(comb(n, k)) * c ** (n - k) * s ** k * np.exp(-1j * k * phi)
    amp /= np.linalg.norm(amp)
    return amp


def hermitian_function(h: np.ndarray, f) -> np.ndarray:
    """Apply a real scalar function to a Hermitian matrix via eigendecomposition.

    Returns V f(D) V^dagger for h = V D V^dagger; the result is Hermitian
    whenever f is real-valued on the spectrum.
    """
    h = np.asarray(h)
    defect = np.linalg.norm(h - h.conj().T)
    if defect > 1e-10 * max(1.0, np.linalg.norm(h)):
        raise InvalidParameterError(f"matrix is not Hermitian (defect {defect:.3e})")
    w, v = np.linalg.eigh(h)
    try:
        fw = np.asarray(f(w), dtype=float)
        if fw.shape != w.shape:
            raise ValueError
    except (TypeError, ValueError):
        fw = np.array([float(f(x)) for x in w])
    out = (v * fw) @ v.conj().T
    return (out + out.conj().T) / 2


def angles_to_qp(theta: float, phi: float) -> tuple[float, float]:
    """Bloch angles to disk coordinates: (Q, P) = sin(theta/2) (cos phi, sin phi)."""
    r = np.sin(theta / 2)
    return float(r * np.cos(phi)), float(r * np.sin(phi))


def qp_to_angles(q: float, p: float) -> tuple[float, float]:
    """Disk coordinates to Bloch angles.

    theta = pi - arccos(2(Q^2+P^2) - 1) and phi = atan2(P, Q); the atan2
    keeps the sign of P, which the arccos form of the same map loses.
    The boundary circle Q^2+P^2 = 1 collapses to the north pole, where phi
    is set to 0 by convention.
    """
    u = q * q + p * p
    if u > 1.0 + _BOUNDARY_EPS:
        raise DomainError(f"(q, p) lies outside the unit disk: q^2+p^2 = {u}")
    if u >= 1.0 - _BOUNDARY_EPS:
        return float(np.pi), 0.0
    theta = np.pi - np.arccos(2 * u - 1)
    phi = np.arctan2(p, q)
    if phi <= -np.pi:
        phi = np.pi
    return float(theta), float(phi)


def bloch_projection(
    jx_expect: float, jy_expect: float, jz_expect: float, n_particles: int
) -> BlochPoint:
    """Project an expectation vector <J> onto the Bloch sphere and the disk.

    The vector <J>/N is rescaled radially to length 1/2 (expectation vectors
    of non-coherent states are shorter), angles are read from spherical
    coordinates with X3 = -cos(theta)/2, and (theta, phi) is inverted to
    (Q, P).  The pre-rescaling length is reported in ``radius``.
    """
    if n_particles < 1:
        raise InvalidParameterError(f"n_particles must be >= 1, got {n_particles}")
    v = np.array([jx_expect, jy_expect, jz_expect], dtype=float) / n_particles
    r = float(np.linalg.norm(v))
    if r < 1e-14:
        raise DegenerateDirectionError("expectation vector has zero length")
    x1, x2, x3 = v / (2 * r)
    theta = float(np.arccos(np.clip(-2 * x3, -1.0, 1.0)))
    phi = float(np.arctan2(x2, x1))
    if phi <= -np.pi:
        phi = np.pi
    q, p = angles_to_qp(theta, phi)
    return BlochPoint(q=q, p=p, theta=theta, phi=phi, alpha_sq=q * q + p * p, radius=r)
