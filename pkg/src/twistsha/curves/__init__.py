"""Weierstrass curves over Q and Q(sqrt D), twists, torsion and the sigma-module."""

from twistsha.curves.cohomology import (
    GeneratedSubgroup,
    H1Report,
    SubgroupImages,
    index_E_mod_ND,
    lemma_identities,
    norm_preimages,
    subgroup_images,
    torsion_subgroup,
    verify_h1_order,
)
from twistsha.curves.field import QuadElem, QuadField
from twistsha.curves.weierstrass import CurveError, CurveQ, Point, phi1, phi2, sigma, twist_map

__all__ = [
    "CurveError",
    "CurveQ",
    "GeneratedSubgroup",
    "H1Report",
    "Point",
    "QuadElem",
    "QuadField",
    "SubgroupImages",
    "index_E_mod_ND",
    "lemma_identities",
    "norm_preimages",
    "phi1",
    "phi2",
    "sigma",
    "subgroup_images",
    "torsion_subgroup",
    "twist_map",
    "verify_h1_order",
]
