"""Complex floating-point machinery: root finding, nullspaces, clustering, solving."""
from .cluster import ClusterSet, cluster_with_tolerance, normalize_projective, projective_distance
from .linalg import numeric_nullspace, null_vector, numeric_rank
from .poly import NumPoly, relative_residual
from .roots import ConvergenceError, univariate_roots

__all__ = [
    "ClusterSet",
    "ConvergenceError",
    "NumPoly",
    "cluster_with_tolerance",
    "normalize_projective",
    "null_vector",
    "numeric_nullspace",
    "numeric_rank",
    "projective_distance",
    "relative_residual",
    "univariate_roots",
]
