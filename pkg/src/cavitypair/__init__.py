"""Entanglement dynamics of two two-level atoms in hopping-coupled thermal cavities.

The package builds the conserved-excitation sectors of the two-cavity model,
propagates thermal ensembles of pure trajectories (or the full master equation
when the cavities and atoms are damped), and reduces everything to the two-atom
density matrix, its concurrence and the population inversion.
"""

from .entanglement import (
    clamp_psd,
    concurrence,
    concurrence_general,
    concurrence_x,
    is_x_form,
    mean_photon,
    partial_trace_fields,
    population_inversion,
)
from .evolution import AtomicEvolution, TimeGrid, reduced_atomic_density
from .hilbert import BasisState, Subspace, cutoff_for, enumerate_subspace
from .lindblad import (
    DissipationParams,
    FullSpace,
    MasterResult,
    StepUnderflowError,
    TraceDriftError,
    integrate_master_equation,
    lindblad_rhs,
    rates_from_cooperative,
    thermal_product_state,
)
from .model import (
    EffectiveParams,
    ModelParams,
    ResonanceError,
    build_delocalized_block,
    build_hamiltonian_block,
    effective_params,
)
from .states import (
    ATOMIC_BASIS,
    AtomicInitialState,
    ThermalEnsemble,
    ThermalSpec,
    atomic_state,
    initial_density,
    thermal_pmf,
)
from .sweeps import (
    ConfigError,
    PointSpec,
    ResultTable,
    SweepSpec,
    parse_config_text,
    preset_names,
    run_figure,
    run_point,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "ATOMIC_BASIS",
    "AtomicEvolution",
    "AtomicInitialState",
    "BasisState",
    "ConfigError",
    "DissipationParams",
    "EffectiveParams",
    "FullSpace",
    "MasterResult",
    "ModelParams",
    "PointSpec",
    "ResonanceError",
    "ResultTable",
    "StepUnderflowError",
    "Subspace",
    "SweepSpec",
    "ThermalEnsemble",
    "ThermalSpec",
    "TimeGrid",
    "TraceDriftError",
    "atomic_state",
    "build_delocalized_block",
    "build_hamiltonian_block",
    "clamp_psd",
    "concurrence",
    "concurrence_general",
    "concurrence_x",
    "cutoff_for",
    "effective_params",
    "enumerate_subspace",
    "initial_density",
    "integrate_master_equation",
    "is_x_form",
    "lindblad_rhs",
    "mean_photon",
    "partial_trace_fields",
    "parse_config_text",
    "population_inversion",
    "preset_names",
    "rates_from_cooperative",
    "reduced_atomic_density",
    "run_figure",
    "run_point",
    "run_sweep",
    "thermal_pmf",
    "thermal_product_state",
    "__version__",
]
