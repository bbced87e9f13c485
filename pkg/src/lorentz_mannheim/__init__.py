"""Frenet apparatus and Mannheim pairs of non-null curves in Minkowski 3-space."""
from . import curves, frenet, lorentz, mannheim, report
from .curves import arclength_map, make_family, sampled_derivatives
from .frenet import FrenetData, frenet_apparatus, frenet_residual
from .lorentz import CausalClass, causal_character, lorentz_cross, minkowski_dot, pair_angle
from .mannheim import (MannheimLink, check_lemma1_identities, check_orthogonality, check_remark1,
                       check_remark2, classify_case, construct_partner_curve,
                       construct_planar_conjugate, partner_torsion, wm_validate)
from .report import Verdict, aggregate, serialize

__version__ = "0.1.0"
