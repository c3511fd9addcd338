"""Generalised coherent states for finite-dimensional, loop and affine Lie algebras."""

from .ring import Poly, RingError, Var, bernoulli, parse_poly
from .liealg import LieAlgebra, build_chevalley, catalog, lookup, validate
from .coherent import coherent_state, dual_state, norm_poly, vacuum
from .bchreal import DiffOperator, check_realization, oplus, realize

__version__ = "0.1.0"
