"""Floquet phase structure of the periodically driven Lipkin-Meshkov-Glick model.

Subpackages cover the exact collective-spin algebra (:mod:`~drivenlmg.spin`),
the driven Hamiltonian and its rotating frame (:mod:`~drivenlmg.model`),
one-period propagators and quasienergies (:mod:`~drivenlmg.floquet`), the
quasienergy landscape and phase diagrams (:mod:`~drivenlmg.landscape`),
finite-N quantum evolution (:mod:`~drivenlmg.dynamics`) and a data-emitting
command line (:mod:`~drivenlmg.cli`).
"""

from ._kernels import BACKEND as kernel_backend
from .dynamics import (
    Trajectory,
    effective_evolution,
    evolve,
    minimum_to_state,
    project_trajectory,
    rotating_expectations,
    stroboscopic,
)
from .errors import (
    DegenerateDirectionError,
    DomainError,
    DrivenLMGError,
    IntegrationAccuracyError,
    InvalidParameterError,
    UnsupportedResonanceError,
)
from .floquet import (
    IntegratorSettings,
    QuasiSpectrum,
    fold_quasienergy,
    propagator,
    quasienergies,
    rwa_comparison,
)
from .landscape import (
    MinimaReport,
    PhaseDiagram,
    QelPoint,
    find_minima,
    find_stationary_points,
    origin_eigenvalues,
    phase_diagram,
    qel,
    qel_gradient,
    qel_hessian,
)
from .model import (
    ModelParams,
    OscillatorParams,
    drive_coupling,
    effective_h0_closed_form,
    fourier_component,
    hamiltonian_at,
    oscillator_stability,
    resonance_detuning,
    rotating_hamiltonian_at,
    rotating_unitary,
    symmetric_phase_oscillator,
)
from .spin import (
    BlochPoint,
    CollectiveSpinOps,
    angles_to_qp,
    bloch_projection,
    build_ops,
    coherent_state,
    hermitian_function,
    qp_to_angles,
)

__version__ = "0.1.0"
