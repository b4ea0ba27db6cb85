"""Compression of black-box functions into the extended functional tensor train format.

A function on ``[-1, 1]^d`` is sampled on a Chebyshev grid, its evaluation
tensor is compressed by a fiber-based Tucker sketch whose core is in turn
compressed by TT cross interpolation, and the result is stored as
univariate coefficient factors plus TT cores.

Typical use::

    import numpy as np
    from eftt import eftt_approximate

    model = eftt_approximate(lambda x: np.exp(x.sum(axis=1)), d=5, tol=1e-10)
    model(np.zeros(5)), model.integrate(), model.dofs()
"""

from .cheb_basis import cheb_eval, cheb_integral_weights, cheb_points, chop, dct_matrix
from .cross import CrossSkeleton, PivotError, aca_random, deim
from .eftt import (
    EFTTModel,
    FTTModel,
    direct_tt_approximate,
    eftt_approximate,
    lemma1_bound_check,
    mc_l2_error,
)
from .legendre import cc_weights, legendre_eval, projection_matrix
from .serialize import FormatError, deserialize, load, save, serialize
from .tensor import CachedFunction, FuncTensor, matricize, subtensor_oracle
from .ttcross import NestedIndexSets, TTCores, tt_cross
from .tucker import TuckerSketch, adaptive_sketch, core_oracle, tucker_sketch

__all__ = [
    "CachedFunction",
    "CrossSkeleton",
    "EFTTModel",
    "FTTModel",
    "FormatError",
    "FuncTensor",
    "NestedIndexSets",
    "PivotError",
    "TTCores",
    "TuckerSketch",
    "aca_random",
    "adaptive_sketch",
    "cc_weights",
    "cheb_eval",
    "cheb_integral_weights",
    "cheb_points",
    "chop",
    "core_oracle",
    "dct_matrix",
    "deim",
    "deserialize",
    "direct_tt_approximate",
    "eftt_approximate",
    "legendre_eval",
    "lemma1_bound_check",
    "load",
    "matricize",
    "mc_l2_error",
    "projection_matrix",
    "save",
    "serialize",
    "subtensor_oracle",
    "tt_cross",
    "tucker_sketch",
]
