"""Elastic low-rank representation clustering for discretely sampled open curves.

Curves are carried to square-root velocity form, compared on the quotient of
the unit sphere by rotations and reparameterizations, summarized in
per-base-point Gram matrices of tangent vectors, and clustered through a
nuclear-norm-regularized self-expression solve followed by spectral
clustering.  A conventional Euclidean low-rank representation baseline and
generators for the bundled experiments are included.
"""

from .cluster import affinity, sca, spectral_cluster
from .curves import Curve, arc_length, derivative, normalize_length, resample
from .datagen import (
    Dataset,
    WarpConfig,
    default_templates,
    flatten_for_lrr,
    gen_char_trajectories,
    gen_sine_clusters,
    gen_template_clusters,
    perturb_trajectories,
    random_warp,
)
from .elastic import (
    align,
    exp_sphere,
    geodesic,
    geodesic_distance,
    log_quotient,
    log_sphere,
    optimal_rotation,
    optimal_warping,
)
from .exceptions import (
    DegenerateCurveError,
    GeodesicUndefinedError,
    NumericalFailureError,
    OutOfInjectivityError,
)
from .gram import GramTensor, build_gram, eta_bound, load_gram, save_gram
from .pipeline import BenchmarkReport, run_benchmark, run_clrr, run_lrr
from .solver import (
    SolverConfig,
    SolverDiagnostics,
    smooth_gradient,
    solve_clrr,
    solve_lrr,
    svt,
)
from .srvf import Srvf, from_srvf, inner, project_sphere, to_srvf, warp_srvf

__version__ = "0.1.0"
