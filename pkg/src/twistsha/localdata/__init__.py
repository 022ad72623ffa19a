"""Local arithmetic: residue fields, quadratic extensions of Q_p, Tate's algorithm."""

from twistsha.localdata.fields import (
    LocalFieldDesc,
    base_field,
    classify_q2_extension,
    local_field,
    splitting_type,
    square_class_rep,
)
from twistsha.localdata.tate import (
    ReductionData,
    ResidueCurveInfo,
    conductor,
    residue_curve_info,
    tate_reduction,
)

__all__ = [
    "LocalFieldDesc",
    "ReductionData",
    "ResidueCurveInfo",
    "base_field",
    "classify_q2_extension",
    "conductor",
    "local_field",
    "residue_curve_info",
    "splitting_type",
    "square_class_rep",
    "tate_reduction",
]
