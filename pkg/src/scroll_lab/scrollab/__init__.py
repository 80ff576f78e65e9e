"""The scroll pipeline: frames, line maps, octic fitting, singular loci, classification."""
from .classify import AnalysisReport, classify_net, classify_scroll
from .double import (PreconditionError, double_curve_partners, double_curve_plane_count)
from .frame import (PLUCKER_GRAM, FrameError, IsotropicFrame, QuadricForm6, RankError,
                    isotropic_frame)
from .lines import LineMap, build_line_map, lines_through_point
from .octic import FitError, OcticSurface, fit_scroll, multiplicity_along_curve
from .special import (build_trisecant_scroll, construct_case_b, detect_veronese_containment,
                      random_bicanonical_quadric, singular_curve_case_b)
from .triple import triple_locus_scan

__all__ = [
    "AnalysisReport", "FitError", "FrameError", "IsotropicFrame", "LineMap", "OcticSurface",
    "PLUCKER_GRAM", "PreconditionError", "QuadricForm6", "RankError", "build_line_map",
    "build_trisecant_scroll", "classify_net", "classify_scroll", "construct_case_b",
    "detect_veronese_containment", "double_curve_partners", "double_curve_plane_count",
    "fit_scroll", "isotropic_frame", "lines_through_point", "multiplicity_along_curve",
    "random_bicanonical_quadric", "singular_curve_case_b", "triple_locus_scan",
]
