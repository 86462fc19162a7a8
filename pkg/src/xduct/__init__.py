"""Frequency-domain scattering, transduction efficiency and added noise of a
three-mode electro-optomechanical transducer under constant or parametric
(oscillating) pump driving."""

__version__ = "0.1.0"

from .analytic import (
    ConstIdealElements,
    IdealCase,
    IdealProtocol,
    PdIdealElements,
    const_symmetric,
    eta_sideband_unresolved,
    pd_ideal,
)
from .errors import (
    ConfigError,
    NoCrossingError,
    ParameterError,
    SingularAmplitudeError,
    SolverError,
    StepSizeError,
    XductError,
)
from .experiments import (
    ConvergenceTable,
    SweepResult,
    convergence_study,
    find_crossing,
    sweep_kappa_m,
    sweep_omega,
    tune_unity_efficiency,
)
from .matrices import (
    PortLayout,
    SidebandMatrixSet,
    build_drift_constant,
    build_drift_fourier,
    build_drive_vector,
    build_port_layout,
)
from .metrics import (
    NoiseReport,
    StructureReport,
    added_noise,
    commutator_residual,
    efficiency,
    noise_lower_bound,
    structure_report,
)
from .params import (
    AmplitudeTrajectory,
    DriveMode,
    DriveProtocol,
    SteadyAmplitudes,
    SystemParams,
    hz_to_rad,
    integrate_classical_amplitude,
    rad_to_hz,
    steady_amplitudes,
    steady_state_trajectory,
    validate,
)
from .solver import (
    RecursionChain,
    TransferSolution,
    build_recursion,
    dense_oracle,
    solve_constant,
    solve_parametric,
    solve_point,
    stability_margin,
)

__all__ = [name for name in dir() if not name.startswith("_")]
