"""Trivial-word sampling and exact cogrowth series for finitely
presented groups.

Two halves: a Metropolis chain over freely reduced trivial words with a
stretched Boltzmann stationary distribution (with parallel tempering),
and exact order-by-order solvers for the cogrowth series of
Baumslag-Solitar and small free-product groups, cross-checked by
exhaustive enumeration.
"""

from .presentation import (Presentation, builtin_presentation,
                           parse_presentation)
from .sampler import SamplerConfig, TemperingConfig, run_chain, run_tempered
from .engine import BSSpec, iterate_bs_system, growth_rate_estimate

__all__ = [
    "Presentation", "builtin_presentation", "parse_presentation",
    "SamplerConfig", "TemperingConfig", "run_chain", "run_tempered",
    "BSSpec", "iterate_bs_system", "growth_rate_estimate",
]

__version__ = "0.1.0"
