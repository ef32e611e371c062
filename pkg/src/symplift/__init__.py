"""Lifts of the standard representation of S_d into Sp_2g(Z/2^k) and checks of their classification."""

from .zmod import GramForm, Mat2k, is_symplectic, mat_inverse, pair
from .standard_rep import Permutation, SubsetClass, StandardRep, image_order, standard_rep, v_of_subset
from .transvections import Lifts, Word, canonical_lifts, parse_word, transvection, y_lift
from .layers import SubspaceF2, layer_coords, layer_space, m_project, n_membership, saturate_invariant, sd_act
from .tilde import MTilde, delta8, mtilde_project, ntilde_membership
from .closure import ClosureResult, GroupHandle, close, congruence_intersection, conjugacy_orbit
from .cocycles import (Cocycle, build_phi_c, build_phi_cd, check_conditions_l4, check_conditions_l8,
                       enumerate_l4, enumerate_l8, subgroup_generators)
from .gamma8 import verify_gamma8_containment
from .checks import CheckSpec, Verdict, run_check, run_suite

__version__ = "0.1.0"
