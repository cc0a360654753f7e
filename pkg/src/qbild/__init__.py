"""S-spectrum, quaternionic numerical range, bild and upper bild of
quaternionic matrices."""
from .geometry import HullPolygon, convex_hull, hausdorff, hull_hausdorff, reflect_conj
from .normal import (
    ckj,
    complex_numrange_hull,
    exact_upper_bild_normal,
    normalize_eigs,
    upper_bild_complex,
    v_bounds,
)
from .numrange import (
    BildCloud,
    RealRangeBounds,
    bild_formula_point,
    cloud_real_extremes,
    nr_point,
    numerical_radius_estimate,
    real_range_oracle,
    refine_numerical_radius,
    sample_cloud,
)
from .qmat import QMatrix, adjoint, chi, inner, op_norm, random_unitary, split
from .quaternion import Quaternion, SimilarityClass, class_rep, embed_class, similar
from .spectrum import SpectrumResult, delta, delta_min_sv, s_radius, s_spectrum, spectrum_distance

__version__ = "0.1.0"
