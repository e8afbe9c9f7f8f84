"""mmkit: computations and inequality checks on finite metric measure spaces.

Subpackages by topic:
  space      spaces, subsets, named families, canonical JSON files
  separation separation distance, medians, Lévy radius, concentration
  transport  couplings, Wasserstein/Prohorov/transportation distances,
             relative entropy, displacement interpolation diagnostics
  spectral   weighted Laplacian, spectra, heat kernels, eigenvalue probes
  harness    verification suites and the separation-reduction probe
  kernels    hot subset-scan kernels (compiled extension or numpy fallback)
"""

from .space import (
    Space,
    Subset,
    build_graph_space,
    build_space,
    family,
    neighborhood,
    read_space,
    set_distance,
    subset_of,
    write_space,
)
from .separation import (
    LevyInterval,
    SeparationCertificate,
    concentration_function,
    conc_sep_checks,
    check_neighborhood_bound,
    levy_radius_bounds,
    lm,
    median_interval,
    separation_distance,
)
from .transport import (
    Measure,
    TransportPlan,
    cd_convexity_check,
    interpolate,
    prohorov,
    relative_entropy,
    restrict_normalize,
    strassen_gap,
    transportation_distance,
    wasserstein2,
)
from .spectral import (
    HeatKernel,
    Spectrum,
    cgy_constant,
    davies_gaffney_check,
    eigen_ratio_probe,
    heat_kernel,
    laplacian,
    spectrum,
    thm1_constant,
)
from .harness import ProbeResult, VerifyConfig, sep_reduction_probe, verify_suite

__version__ = "0.1.0"

__all__ = [
    "Space",
    "Subset",
    "build_space",
    "build_graph_space",
    "family",
    "neighborhood",
    "set_distance",
    "subset_of",
    "read_space",
    "write_space",
    "SeparationCertificate",
    "LevyInterval",
    "separation_distance",
    "median_interval",
    "lm",
    "levy_radius_bounds",
    "concentration_function",
    "conc_sep_checks",
    "check_neighborhood_bound",
    "Measure",
    "TransportPlan",
    "wasserstein2",
    "prohorov",
    "transportation_distance",
    "strassen_gap",
    "relative_entropy",
    "restrict_normalize",
    "interpolate",
    "cd_convexity_check",
    "Spectrum",
    "HeatKernel",
    "laplacian",
    "spectrum",
    "heat_kernel",
    "davies_gaffney_check",
    "cgy_constant",
    "thm1_constant",
    "eigen_ratio_probe",
    "ProbeResult",
    "VerifyConfig",
    "sep_reduction_probe",
    "verify_suite",
]
