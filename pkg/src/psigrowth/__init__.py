"""Simulation library for growth processes of extremal points.

Seeds scattered in space grow epigraph-shaped grains; a point is
extremal when its grain is not swallowed by the union of the others.
The package samples such processes (Poisson, binomial, and the
unit-intensity limit process), computes extremality and convex-hull
vertex flags by independent routes, and estimates the scaling laws,
correlation functions, and Gaussian fluctuations of the resulting
point measures.  The ``psi-growth`` command line drives reproducible
experiments from INI configurations.
"""

from .errors import ArgumentError, BiasWarning, DomainError, MethodError
from .geometry import (BallRegion, BoxRegion, CylinderRegion,
                       PointConfiguration, PsiSpec, ScalingExponents,
                       SpaceTimePoint, compute_exponents,
                       downward_cone_contains, psi_eval, psi_inverse,
                       rescale, upward_cone_contains)
from .sampling import (DensitySpec, ball_volume, derive_seed_sequence,
                       read_points_csv, sample_binomial_box,
                       sample_limit_process, sample_poisson_ball,
                       sample_poisson_box, sphere_surface, total_mass,
                       write_points_csv)
from .extremality import (ExtremalityResult, SpaceTimeBox,
                          birth_growth_accept, localization_radii_cone,
                          localization_radius, read_flags_csv,
                          write_flags_csv, xi_downward_cone, xi_envelope,
                          xi_finite_range, xi_restricted)
from .hull import (HullResult, ball_sample, hull_vertex_measure,
                   hull_vertices, shell_prefilter, support_epigraph_extremal)
from .stats import (EstimateReport, TestFunction, auto_time_cap,
                    depoissonization_check, empirical_pairing, estimate_I,
                    estimate_J, estimate_one_point_correlation,
                    estimate_two_point_correlation, fit_scaling_exponent,
                    kernel_correlation_prediction, normality_diagnostics,
                    read_report_json, run_scaling_experiment,
                    write_report_csv, write_report_json,
                    write_report_plotdata)

__version__ = "0.1.0"

__all__ = [
    "ArgumentError", "BiasWarning", "DomainError", "MethodError",
    "BallRegion", "BoxRegion", "CylinderRegion", "PointConfiguration",
    "PsiSpec", "ScalingExponents", "SpaceTimePoint", "compute_exponents",
    "downward_cone_contains", "psi_eval", "psi_inverse", "rescale",
    "upward_cone_contains",
    "DensitySpec", "ball_volume", "derive_seed_sequence", "read_points_csv",
    "sample_binomial_box", "sample_limit_process", "sample_poisson_ball",
    "sample_poisson_box", "sphere_surface", "total_mass", "write_points_csv",
    "ExtremalityResult", "SpaceTimeBox", "birth_growth_accept",
    "localization_radii_cone", "localization_radius", "read_flags_csv",
    "write_flags_csv", "xi_downward_cone", "xi_envelope", "xi_finite_range",
    "xi_restricted",
    "HullResult", "ball_sample", "hull_vertex_measure", "hull_vertices",
    "shell_prefilter", "support_epigraph_extremal",
    "EstimateReport", "TestFunction", "auto_time_cap",
    "depoissonization_check", "empirical_pairing", "estimate_I", "estimate_J",
    "estimate_one_point_correlation", "estimate_two_point_correlation",
    "fit_scaling_exponent", "kernel_correlation_prediction",
    "normality_diagnostics", "read_report_json", "run_scaling_experiment",
    "write_report_csv", "write_report_json", "write_report_plotdata",
    "__version__",
]
