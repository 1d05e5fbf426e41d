"""Search and enumeration limits.

Every limit can be overridden per call; the ``STABBOND_BUDGET`` environment
variable, when set to an integer, replaces the default node budget used by
the isomorphism and measurement searches.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, replace


class BudgetExceeded(RuntimeError):
    """A search ran out of budget before reaching a verdict."""


@dataclass(frozen=True)
class Limits:
    enumeration_cap: int = 20
    partition_cap: int = 20
    refinement_rounds: int = 3
    search_budget: int = 1_000_000
    extraction_max_qubits: int = 6
    persistency_max_qubits: int = 6


def limits(**overrides) -> Limits:
    base = Limits()
    env = os.environ.get("STABBOND_BUDGET")
    if env:
        base = replace(base, search_budget=int(env))
    return replace(base, **overrides) if overrides else base
