"""Thermodynamic formalism on subshifts of finite type.

Pressure and equilibrium states of locally constant potentials, Legendre
duality, multifractal entropy spectra, entropy-controlled paths of
measures, and inverse realization of prescribed pressure curves and
spectra, with brute-force oracles for independent cross-checks.
"""

from .convex import (CmsFunction, GridFunction, cms_from_samples,
                     fenchel_roundtrip_error, grid_function, legendre,
                     spectrum_from_pressure, supporting_intercepts,
                     validate_cms)
from .errors import (ConfigInvalidError, ConvergenceError, EmptyGraphError,
                     HypothesisViolationError, MaxEntropyMismatchError,
                     MaxMismatchError, NegativeValuesError, NonUniqueMaximizerError,
                     NotConcaveError, NotConvexError, NotPrimitiveError,
                     NotSquareError, OrbitNotAdmissibleError,
                     OrbitsIntersectError, PeriodTooLargeError,
                     SftMismatchError, SftSpectraError, SlopesNotStabilizedError,
                     TooLargeError, WitnessNotFoundError,
                     WordNotAdmissibleError, ZeroRowOrColumnError)
from .oracle import (OrbitCatalog, catalog_average_range, enumerate_orbits,
                     periodic_pressure, word_count_spectrum)
from .paths import (ClaimCheck, PathClaimReport, PathSample,
                    equilibrium_modulus, single_sided_path, two_sided_path,
                    verify_path_claims)
from .potentials import (PeriodicOrbit, Potential, affine_combine,
                         birkhoff_average, constant_potential, lift,
                         normalized_separation_potential,
                         orbit_distance_potential, orbits_intersect,
                         periodic_orbit, tabulate)
from .realize import (CohomologyWitness, ManyRealizations, RealizationResult,
                      check_pressure_hypotheses, cohomology_witness,
                      realize_many, realize_pressure, realize_spectrum)
from .sft import (Sft, Word, admissible_words, build_sft,
                  enumerate_cyclic_words, full_shift, golden_mean_shift,
                  higher_block, is_admissible, is_primitive, same_sft,
                  topological_entropy, word)
from .spectra import (RotationInterval, SpectrumGraph, UscReport, UscRow,
                      critical_subgraph_entropy, entropy_spectrum,
                      one_sided_excess, rotation_set, spectrum_distance,
                      spectrum_graph, usc_failure_demo)
from .thermo import (MarkovMeasure, PressureCurve, equilibrium_measure,
                     measure_entropy, measure_integral, orbit_measure,
                     pressure, pressure_curve, pressure_gradient, pressures)

__version__ = "0.1.0"

__all__ = [
    "Sft", "Word", "admissible_words", "build_sft", "enumerate_cyclic_words",
    "full_shift", "golden_mean_shift", "higher_block", "is_admissible",
    "is_primitive", "same_sft", "topological_entropy", "word",
    "PeriodicOrbit", "Potential", "affine_combine", "birkhoff_average",
    "constant_potential", "lift", "normalized_separation_potential",
    "orbit_distance_potential", "orbits_intersect", "periodic_orbit",
    "tabulate",
    "MarkovMeasure", "PressureCurve", "equilibrium_measure",
    "measure_entropy", "measure_integral", "orbit_measure", "pressure",
    "pressure_curve", "pressure_gradient", "pressures",
    "CmsFunction", "GridFunction", "cms_from_samples",
    "fenchel_roundtrip_error", "grid_function", "legendre",
    "spectrum_from_pressure", "supporting_intercepts", "validate_cms",
    "RotationInterval", "SpectrumGraph", "UscReport", "UscRow",
    "critical_subgraph_entropy", "entropy_spectrum", "one_sided_excess",
    "rotation_set", "spectrum_distance", "spectrum_graph",
    "usc_failure_demo",
    "ClaimCheck", "PathClaimReport", "PathSample", "equilibrium_modulus",
    "single_sided_path", "two_sided_path", "verify_path_claims",
    "CohomologyWitness", "ManyRealizations", "RealizationResult",
    "check_pressure_hypotheses", "cohomology_witness", "realize_many",
    "realize_pressure", "realize_spectrum",
    "OrbitCatalog", "catalog_average_range", "enumerate_orbits",
    "periodic_pressure", "word_count_spectrum",
    "SftSpectraError", "NotSquareError", "ZeroRowOrColumnError",
    "NotPrimitiveError", "ConvergenceError", "WordNotAdmissibleError",
    "OrbitNotAdmissibleError", "OrbitsIntersectError", "SftMismatchError",
    "NotConvexError", "NotConcaveError", "SlopesNotStabilizedError",
    "MaxMismatchError", "NonUniqueMaximizerError", "NegativeValuesError",
    "EmptyGraphError", "PeriodTooLargeError", "TooLargeError",
    "HypothesisViolationError", "MaxEntropyMismatchError",
    "WitnessNotFoundError", "ConfigInvalidError",
]
