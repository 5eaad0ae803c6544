"""Exact truncated q-series and Bailey pair machinery."""

from .series import QSeries, SeriesError, equal_up_to, invert, monomial, rescale
from .products import PochSpec, poch, poch_reciprocal, triple_poch_infinite
from .bailey import (
    INFINITY,
    FiniteMonomial,
    InfinityLimit,
    InverseQPower,
    Mono,
    MultifoldPair,
    OnefoldPair,
    check_multifold,
    check_onefold,
    lemma_eval,
    multifold_limit_sum,
    theorem1_lift,
    twofold_from_onefold,
    twofold_lemma_eval,
)

__version__ = "0.1.0"
