"""Dimension-adaptive sparse Lagrange interpolation on weighted Leja nodes."""

from .benchmarks import BenchmarkModel, benchmark_spec, borehole, meromorphic, steel_column
from .distributions import Gumbel, Normal, TruncatedNormal, Uniform, from_record
from .leja import LejaSequence, symmetric_leja, unweighted_leja, weighted_leja
from .multiindex import MultiIndexSet, admissible_set, isotropic_set
from .postproc import mean_direct, moment_sampled, rel_mean_error, rms_cv_error
from .sampling import PointStream, mc_reference_mean, sobol_points
from .sparse import BuildReport, SparseSurrogate, adaptive_build, build_on_fixed_set

__all__ = [
    "BenchmarkModel",
    "BuildReport",
    "Gumbel",
    "LejaSequence",
    "MultiIndexSet",
    "Normal",
    "PointStream",
    "SparseSurrogate",
    "TruncatedNormal",
    "Uniform",
    "adaptive_build",
    "admissible_set",
    "benchmark_spec",
    "borehole",
    "build_on_fixed_set",
    "from_record",
    "isotropic_set",
    "mc_reference_mean",
    "mean_direct",
    "meromorphic",
    "moment_sampled",
    "rel_mean_error",
    "rms_cv_error",
    "sobol_points",
    "steel_column",
    "symmetric_leja",
    "unweighted_leja",
    "weighted_leja",
]
