"""pbsim: photon blockade in a pumped optomechanical cavity.

A driven optical cavity couples to a mechanical oscillator by radiation
pressure and contains a degenerate parametric amplifier.  The package
provides three cross-validating solution paths for its photon statistics:

* closed-form weak-drive expressions (:mod:`pbsim.analytic`),
* the exact-within-truncation amplitude equations of the reduced cavity
  (:mod:`pbsim.amplitudes`),
* the full Lindblad master equation on the bipartite Fock space
  (:mod:`pbsim.lindblad`, :mod:`pbsim.observables`),

plus pump optimizers for single- and two-photon blockade, and a sweep
front end with reproducible CSV/manifest output (:mod:`pbsim.sweep`,
``pbsim`` CLI).
"""

from ._version import __version__
from .analytic import (
    OptimalPump,
    PerturbativeAmplitudes,
    PumpBranch,
    complex_detuning,
    g2_analytic,
    g3_analytic,
    optimal_1pb,
    optimal_2pb,
    perturbative_amplitudes,
    poisson_deviation,
    spectrum_level,
    two_photon_branch_threshold,
)
from .amplitudes import amplitude_rhs, evolve_amplitudes, probabilities, steady_amplitudes
from .lindblad import (
    Liouvillian,
    build_liouvillian,
    density_diagnostics,
    evolve,
    g2_of_tau,
    steady_residual,
    steady_state,
)
from .observables import (
    ObservableReport,
    Source,
    g2_numeric,
    g3_numeric,
    is_two_photon_blockade,
    mean_photon_number,
    photon_distribution,
    report,
)
from .operators import HamiltonianSet, annihilation, build_hamiltonians, tensor
from .params import (
    SystemParams,
    Truncation,
    default_1pb_params,
    default_2pb_params,
    validate,
)
from .sweep import (
    Axis,
    PresetRun,
    PumpMode,
    SweepResult,
    SweepSpec,
    convergence_study,
    figure_preset,
    rerun_manifest,
    run_sweep,
)

__all__ = [
    "__version__",
    "Axis",
    "HamiltonianSet",
    "Liouvillian",
    "ObservableReport",
    "OptimalPump",
    "PerturbativeAmplitudes",
    "PresetRun",
    "PumpBranch",
    "PumpMode",
    "Source",
    "SweepResult",
    "SweepSpec",
    "SystemParams",
    "Truncation",
    "amplitude_rhs",
    "annihilation",
    "build_hamiltonians",
    "build_liouvillian",
    "complex_detuning",
    "convergence_study",
    "default_1pb_params",
    "default_2pb_params",
    "density_diagnostics",
    "evolve",
    "evolve_amplitudes",
    "figure_preset",
    "g2_analytic",
    "g2_numeric",
    "g2_of_tau",
    "g3_analytic",
    "g3_numeric",
    "is_two_photon_blockade",
    "mean_photon_number",
    "optimal_1pb",
    "optimal_2pb",
    "perturbative_amplitudes",
    "photon_distribution",
    "poisson_deviation",
    "probabilities",
    "report",
    "rerun_manifest",
    "run_sweep",
    "spectrum_level",
    "steady_amplitudes",
    "steady_residual",
    "steady_state",
    "tensor",
    "two_photon_branch_threshold",
    "validate",
]
