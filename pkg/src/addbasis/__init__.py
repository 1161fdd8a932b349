"""Computational workbench for additive bases: exact representation counts,
asymptotic verification, random-sequence simulation, and Goldbach records."""

__version__ = "0.1.0"

from .growth import GrowthFn, classify, growth_fn, parse_growth
from .ntt import CapacityError, NTT_PRIMES
from .representations import (
    ReprTable,
    build_table,
    distinct_representation_bounds,
    r_direct,
    recursion_check,
)
from .sequences import (
    CounterexampleSpec,
    Sequence,
    counterexample_count,
    from_elements,
    generate,
    min_pairwise_gcd,
)

__all__ = [
    "__version__",
    "CapacityError",
    "CounterexampleSpec",
    "GrowthFn",
    "NTT_PRIMES",
    "ReprTable",
    "Sequence",
    "build_table",
    "classify",
    "counterexample_count",
    "distinct_representation_bounds",
    "from_elements",
    "generate",
    "growth_fn",
    "min_pairwise_gcd",
    "parse_growth",
    "r_direct",
    "recursion_check",
]
