"""Painleve IV solutions from complex SUSY partners of the harmonic oscillator."""

from .errors import (
    DegenerateG,
    DegenerateLevel,
    GammaPole,
    NotDegenerate,
    PivSusyError,
    RangeExceeded,
    SingularExtremalState,
    SingularPoint,
)
from .painleve import (
    PIVParams,
    PIVSolutionSample,
    family_params,
    g_function,
    g_function_extended,
    g_solution,
    parameter_space_scan,
    piv_residual,
    piv_residual_fd_function,
)
from .pha_ladder import (
    apply_ladder,
    degenerate_ladder_classification,
    fhv_from_g,
    pha_checks,
    q_polynomial,
    spectrum,
)
from .seed_solutions import SeedSpec, build_seed_chain, seed_u_jet
from .special_fns import gamma_fn, hyp1f1, kummer_1f1
from .susy_transform import (
    Family,
    crum_map,
    extremal_state,
    mapped_eigenfunction,
    new_level_eigenfunction,
    partner_potential,
    singularity_scan,
)

__all__ = [
    "DegenerateG",
    "DegenerateLevel",
    "Family",
    "GammaPole",
    "NotDegenerate",
    "PIVParams",
    "PIVSolutionSample",
    "PivSusyError",
    "RangeExceeded",
    "SeedSpec",
    "SingularExtremalState",
    "SingularPoint",
    "apply_ladder",
    "build_seed_chain",
    "crum_map",
    "degenerate_ladder_classification",
    "extremal_state",
    "family_params",
    "fhv_from_g",
    "g_function",
    "g_function_extended",
    "g_solution",
    "gamma_fn",
    "hyp1f1",
    "kummer_1f1",
    "mapped_eigenfunction",
    "new_level_eigenfunction",
    "parameter_space_scan",
    "partner_potential",
    "pha_checks",
    "piv_residual",
    "piv_residual_fd_function",
    "q_polynomial",
    "seed_u_jet",
    "singularity_scan",
    "spectrum",
]
