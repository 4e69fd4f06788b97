"""Spreading activation and diffusion-regime analysis on multiplex networks."""

from .dynamics import (
    ALL_LAYERS,
    ActivationState,
    RunResult,
    Seed,
    SimulationConfig,
    advance,
    run,
    seed_state,
    step_multiplex,
    step_single_layer,
)
from .metrics import (
    AGGREGATE,
    ActivationTrace,
    MissingTargetsError,
    batch_metrics,
    extract_trace,
)
from .network import (
    Layer,
    MindsetStream,
    MultiplexNetwork,
    NetworkFormatError,
    build_network,
    induced_subnetwork,
    largest_viable_cluster,
    load_network,
    mindset_stream,
    write_network,
)
from .spectral import (
    Regime,
    SpectralReport,
    classify_regime,
    dx_sweep,
    lambda2,
    laplacian,
    supra_laplacian,
)
from .stats import (
    DegenerateSamplesError,
    GroupComparison,
    cohens_d,
    compare_groups,
    kendall_tau,
    kruskal_wallis,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_LAYERS",
    "AGGREGATE",
    "ActivationState",
    "ActivationTrace",
    "DegenerateSamplesError",
    "GroupComparison",
    "Layer",
    "MindsetStream",
    "MissingTargetsError",
    "MultiplexNetwork",
    "NetworkFormatError",
    "Regime",
    "RunResult",
    "Seed",
    "SimulationConfig",
    "SpectralReport",
    "advance",
    "batch_metrics",
    "build_network",
    "classify_regime",
    "cohens_d",
    "compare_groups",
    "dx_sweep",
    "extract_trace",
    "induced_subnetwork",
    "kendall_tau",
    "kruskal_wallis",
    "lambda2",
    "laplacian",
    "largest_viable_cluster",
    "load_network",
    "mindset_stream",
    "run",
    "seed_state",
    "step_multiplex",
    "step_single_layer",
    "supra_laplacian",
    "write_network",
]
