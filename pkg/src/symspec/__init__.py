"""Exact Pfaffian norms, commuting symplectic tuples and the spectral data map."""

__version__ = "0.1.0"

from .rings import QQ, FieldSpec, MultiPoly, PolyRing, Residue, make_variable, poly_coeff, poly_eval
from .linalg import Matrix, char_poly, commutes, conjugate, det, det_bareiss, inverse, trace
from .pfaffian import pf_char_poly, pf_eliminate, pf_matching, pfaffian
from .symplectic import (
    CartanPoint, CommutingTuple, SymplecticSpace, WeylElement, cartan_embed, random_symplectic,
    sample_commuting, standard_space, weyl_act,
)
from .spectral import (
    InvariantElement, MultiIndex, PurePowerCombo, chevalley_restrict, deligne_det_eval, phi, polarize,
    psi, round_trip_check, spectral_eval, spectral_eval_pure,
)
