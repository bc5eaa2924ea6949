"""The quasienergy landscape on the unit disk and its phase diagrams.

The landscape is the leading O(N) term of the effective Hamiltonian under
a macroscopic coherent displacement alpha = Q + iP; its local minima are
the dynamically stabilized phases, counted here by a grid scan followed by
damped-Newton refinement.  Scalar evaluation is delegated to the kernel
backend (compiled extension or pure numpy fallback).
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels as kern
from .errors import DomainError, InvalidParameterError, UnsupportedResonanceError
from .model import ModelParams

_BOUNDARY_MARGIN = 1e-6  # the boundary circle maps to a single Bloch point
_CLUSTER_RADIUS = 1e-3
_CLASSIFY_TOL = 1e-8

SWEEPABLE = ("gamma0x", "gamma1x", "gammay")


@dataclass(frozen=True)
class QelPoint:
    """A classified stationary point of the landscape."""

    q: float
    p: float
    energy: float
    gradient: np.ndarray
    hessian: np.ndarray
    classification: str  # minimum | saddle | maximum | degenerate

    @property
    def hess_eigs(self) -> tuple[float, float]:
        w = np.linalg.eigvalsh(self.hessian)
        return float(w[0]), float(w[1])


@dataclass(frozen=True)
class MinimaReport:
    """All distinct interior minima for one parameter point.

    Symmetry-related minima count separately.  ``symmetry_partners`` maps
    each flip axis to index pairs (i, j), i <= j, of mirror-image minima;
    ``failures`` lists (q, p, message) for refinements that did not
    converge, and ``degenerate_points`` collects stationary points whose
    Hessian has a near-zero eigenvalue (never silently counted as minima).
    """

    params: ModelParams
    minima: list[QelPoint]
    global_minimum_energy: float
    count: int
    grid_resolution: int
    symmetry_partners: dict[str, list[tuple[int, int]]]
    failures: list[tuple[float, float, str]] = field(default_factory=list)
    degenerate_points: list[QelPoint] = field(default_factory=list)


@dataclass(frozen=True)
class PhaseDiagram:
    """Minima counts over a 2-axis parameter sweep with analytic overlays.

    ``counts[i, k]`` belongs to axis1_values[i], axis2_values[k]; cells
    whose refinement failed carry count -1 and an entry in ``failed``.
    ``lambda1``/``lambda2`` are the origin curvature eigenvalues on the
    same grid (their zero contours are the analytic phase boundaries).
    """

    axis1_name: str
    axis1_values: np.ndarray
    axis2_name: str
    axis2_values: np.ndarray
    counts: np.ndarray
    lambda1: np.ndarray
    lambda2: np.ndarray
    global_min_energy: np.ndarray
    failed: list[tuple[int, int, str]] = field(default_factory=list)


def _kernel_args(params: ModelParams) -> tuple:
    return (params.h, params.gamma0x, params.gamma1x, params.gammay, params.omega)


def _require_m0(params: ModelParams):
    if params.m != 0:
        raise UnsupportedResonanceError("the landscape is implemented for m = 0 only")


def qel(params: ModelParams, q: float, p: float) -> float:
    """Landscape value at (q, p); defined on the closed unit disk."""
    _require_m0(params)
    if q * q + p * p > 1.0 + 1e-12:
        raise DomainError(f"(q, p) outside the unit disk: q^2+p^2 = {q*q+p*p}")
    return kern.qel_value(q, p, *_kernel_args(params))


def qel_gradient(params: ModelParams, q: float, p: float) -> np.ndarray:
    """Analytic gradient; interior points only (the radial derivative is
    singular on the boundary circle)."""
    _require_m0(params)
    if q * q + p * p >= 1.0:
        raise DomainError("gradient is only defined for q^2+p^2 < 1")
    return np.array(kern.qel_grad(q, p, *_kernel_args(params)))


def qel_hessian(params: ModelParams, q: float, p: float) -> np.ndarray:
    """Analytic Hessian; interior points only."""
    _require_m0(params)
    if q * q + p * p >= 1.0:
        raise DomainError("Hessian is only defined for q^2+p^2 < 1")
    hqq, hqp, hpp = kern.qel_hess(q, p, *_kernel_args(params))
    return np.array([[hqq, hqp], [hqp, hpp]])


def origin_eigenvalues(params: ModelParams) -> tuple[float, float]:
    """Curvature eigenvalues of the landscape at the origin.

    lambda1 = -2 (h + gy) is the P-direction curvature and
    lambda2 = -2h - 2 gx0 - (h + gy) (gx1/omega)^2 the Q-direction one.
    """
    lam1 = -2.0 * (params.h + params.gammay)
    lam2 = (
        -2.0 * params.h
        - 2.0 * params.gamma0x
        - (params.h + params.gammay) * (params.gamma1x / params.omega) ** 2
    )
    return float(lam1), float(lam2)


def _classify(hqq: float, hqp: float, hpp: float) -> str:
    w = np.linalg.eigvalsh(np.array([[hqq, hqp], [hqp, hpp]]))
    if min(abs(w[0]), abs(w[1])) <= _CLASSIFY_TOL:
        return "degenerate"
    if w[0] > 0:
        return "minimum"
    if w[1] < 0:
        return "maximum"
    return "saddle"


def _make_point(params: ModelParams, q: float, p: float) -> QelPoint:
    args = _kernel_args(params)
    grad = np.array(kern.qel_grad(q, p, *args))
    hqq, hqp, hpp = kern.qel_hess(q, p, *args)
    return QelPoint(
        q=float(q),
        p=float(p),
        energy=kern.qel_value(q, p, *args),
        gradient=grad,
        hessian=np.array([[hqq, hqp], [hqp, hpp]]),
        classification=_classify(hqq, hqp, hpp),
    )


def _cluster(points: list[tuple[float, float]], radius: float) -> list[tuple[float, float]]:
    """Greedy dedup: keep the first representative of each radius-ball."""
    kept: list[tuple[float, float]] = []
    for q, p in points:
        if all((q - q2) ** 2 + (p - p2) ** 2 > radius * radius for q2, p2 in kept):
            kept.append((q, p))
    return kept


def find_minima(params: ModelParams, grid_n: int = 201, refine_tol: float = 1e-10) -> MinimaReport:
    """Enumerate all distinct interior local minima of the landscape.

    Scans a grid_n x grid_n grid masked to q^2+p^2 <= 1 - 1e-6 for discrete
    local minima, refines each by damped Newton until |grad| < refine_tol,
    clusters within 1e-3 and classifies by the Hessian.  Non-convergent
    refinements are reported in ``failures`` rather than dropped.
    """
    _require_m0(params)
    if grid_n < 101:
        raise InvalidParameterError(f"grid_n must be >= 101, got {grid_n}")
    args = _kernel_args(params)
    axis = np.linspace(-1.0, 1.0, grid_n)
    values = kern.qel_grid(axis, axis, *args)
    u = axis[:, None] ** 2 + axis[None, :] ** 2
    mask = u <= 1.0 - _BOUNDARY_MARGIN
    padded = np.full((grid_n + 2, grid_n + 2), np.inf)
    padded[1:-1, 1:-1] = np.where(mask, values, np.inf)
    center = padded[1:-1, 1:-1]
    is_min = np.isfinite(center)
    for di in (-1, 0, 1):
        for dk in (-1, 0, 1):
            if di == 0 and dk == 0:
                continue
            neighbor = padded[1 + di : grid_n + 1 + di, 1 + dk : grid_n + 1 + dk]
            is_min &= center <= neighbor
    candidates = [(axis[i], axis[k]) for i, k in zip(*np.nonzero(is_min))]

    refined: list[tuple[float, float]] = []
    failures: list[tuple[float, float, str]] = []
    for q0, p0 in candidates:
        q, p, ok, iters = kern.newton_refine(q0, p0, *args, grad_tol=refine_tol)
        if ok:
            refined.append((float(q), float(p)))
        else:
            failures.append(
                (float(q0), float(p0), f"refinement stalled after {iters} iterations")
            )
    refined.sort(key=lambda qp: (kern.qel_value(qp[0], qp[1], *args), qp[0], qp[1]))
    distinct = _cluster(refined, _CLUSTER_RADIUS)

    minima: list[QelPoint] = []
    degenerate: list[QelPoint] = []
    for q, p in distinct:
        pt = _make_point(params, q, p)
        if pt.classification == "minimum":
            minima.append(pt)
        elif pt.classification == "degenerate":
            degenerate.append(pt)
        # saddle/maximum refinements cannot happen from a descent method;
        # anything else is dropped as grid noise
    minima.sort(key=lambda pt: (pt.energy, pt.q, pt.p))

    partners: dict[str, list[tuple[int, int]]] = {"q_flip": [], "p_flip": []}
    for axis_name, flip in (("q_flip", (-1, 1)), ("p_flip", (1, -1))):
        for i, a in enumerate(minima):
            for jdx in range(i, len(minima)):
                b = minima[jdx]
                if (a.q * flip[0] - b.q) ** 2 + (a.p * flip[1] - b.p) ** 2 < _CLUSTER_RADIUS**2:
                    partners[axis_name].append((i, jdx))
                    break
    return MinimaReport(
        params=params,
        minima=minima,
        global_minimum_energy=minima[0].energy if minima else float("nan"),
        count=len(minima),
        grid_resolution=grid_n,
        symmetry_partners=partners,
        failures=failures,
        degenerate_points=degenerate,
    )


def find_stationary_points(
    params: ModelParams, coarse_n: int = 61, grad_tol: float = 1e-10, max_iter: int = 100
) -> list[QelPoint]:
    """All stationary points (any type) found by Newton root search on the
    gradient, seeded from a coarse interior grid.  Used for rim saddles."""
    _require_m0(params)
    args = _kernel_args(params)
    axis = np.linspace(-0.999, 0.999, coarse_n)
    found: list[tuple[float, float]] = []
    for q0 in axis:
        for p0 in axis:
            if q0 * q0 + p0 * p0 > 1.0 - _BOUNDARY_MARGIN:
                continue
            q, p = float(q0), float(p0)
            for _ in range(max_iter):
                gq, gp = kern.qel_grad(q, p, *args)
                gnorm = np.hypot(gq, gp)
                if gnorm < grad_tol:
                    found.append((q, p))
                    break
                hqq, hqp, hpp = kern.qel_hess(q, p, *args)
                det = hqq * hpp - hqp * hqp
                if abs(det) < 1e-14:
                    break
                dq = -(hpp * gq - hqp * gp) / det
                dp = -(hqq * gp - hqp * gq) / det
                dnorm = np.hypot(dq, dp)
                if dnorm > 0.1:
                    dq *= 0.1 / dnorm
                    dp *= 0.1 / dnorm
                q, p = q + dq, p + dp
                if q * q + p * p > 1.0 - _BOUNDARY_MARGIN:
                    break
    found.sort(key=lambda qp: (kern.qel_value(qp[0], qp[1], *args), qp[0], qp[1]))
    return [_make_point(params, q, p) for q, p in _cluster(found, _CLUSTER_RADIUS)]


def _diagram_cell(cell) -> tuple[int, float, str]:
    params, grid_n = cell
    try:
        report = find_minima(params, grid_n=grid_n)
        if report.failures:
            return -1, float("nan"), f"{len(report.failures)} refinement failure(s)"
        return report.count, report.global_minimum_energy, ""
    except Exception as exc:  # pragma: no cover - defensive sweep guard
        return -1, float("nan"), f"{type(exc).__name__}: {exc}"


def phase_diagram(
    params: ModelParams,
    axis1: tuple[str, float, float, int],
    axis2: tuple[str, float, float, int],
    grid_n: int = 201,
    workers: int = 1,
) -> PhaseDiagram:
    """Minima-count diagram over two coupling axes.

    Axes are (name, lo, hi, steps) with name among gamma0x/gamma1x/gammay
    and steps >= 2; cells are independent and can be evaluated by a process
    pool.  Overlays are the origin curvature eigenvalues on the same grid.
    """
    for name, *_ in (axis1, axis2):
        if name not in SWEEPABLE:
            raise InvalidParameterError(f"sweep axis must be one of {SWEEPABLE}, got {name!r}")
    if axis1[3] < 2 or axis2[3] < 2:
        raise InvalidParameterError("each axis needs at least 2 steps")
    vals1 = np.linspace(axis1[1], axis1[2], axis1[3])
    vals2 = np.linspace(axis2[1], axis2[2], axis2[3])
    cells = [
        (replace(params, **{axis1[0]: float(v1), axis2[0]: float(v2)}), grid_n)
        for v1 in vals1
        for v2 in vals2
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_diagram_cell, cells, chunksize=4))
    else:
        results = [_diagram_cell(c) for c in cells]

    counts = np.empty((len(vals1), len(vals2)), dtype=int)
    gmin = np.empty_like(counts, dtype=float)
    lam1 = np.empty_like(gmin)
    lam2 = np.empty_like(gmin)
    failed: list[tuple[int, int, str]] = []
    for idx, (count, energy, message) in enumerate(results):
        i, k = divmod(idx, len(vals2))
        counts[i, k] = count
        gmin[i, k] = energy
        cell_params = cells[idx][0]
        lam1[i, k], lam2[i, k] = origin_eigenvalues(cell_params)
        if count < 0:
            failed.append((i, k, message))
    return PhaseDiagram(
        axis1_name=axis1[0],
        axis1_values=vals1,
        axis2_name=axis2[0],
        axis2_values=vals2,
        counts=counts,
        lambda1=lam1,
        lambda2=lam2,
        global_min_energy=gmin,
        failed=failed,
    )
