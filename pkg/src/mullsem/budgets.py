"""Truncation and iteration budgets threaded through the interpreters."""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_DEPTH = 4        # fixpoint unrolling depth k
DEFAULT_BAG = 2          # maximal multiset size m for ! and ?
DEFAULT_CARRIER_CAP = 20000
DEFAULT_ITER_CAP = 10000


@dataclass(frozen=True)
class Budgets:
    depth: int = DEFAULT_DEPTH
    bag: int = DEFAULT_BAG
    carrier_cap: int = DEFAULT_CARRIER_CAP
    iter_cap: int = DEFAULT_ITER_CAP

    def __post_init__(self):
        if self.depth < 0 or self.bag < 0:
            raise ValueError("budgets must be non-negative")
        if self.carrier_cap <= 0 or self.iter_cap <= 0:
            raise ValueError("caps must be positive")


DEFAULT_BUDGETS = Budgets()
