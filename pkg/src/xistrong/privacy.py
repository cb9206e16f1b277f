"""Privacy consequences of a measured xi-strength for PAALEC-style aggregation."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PrivacyParams:
    epsilon: float
    delta: float
    Delta: float  # sensitivity
    s: float
    xi: float = 1.0

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not 0 <= self.delta < 1:
            raise ValueError("delta must lie in [0, 1)")
        if not self.Delta > 0:
            raise ValueError("sensitivity must be positive")
        if not self.s > 0:
            raise ValueError("s must be positive")
        if not 0 <= self.xi <= 1:
            raise ValueError("xi must lie in [0, 1]")


def paalec_params(p: PrivacyParams) -> tuple[float, float]:
    """(alpha, beta) = (exp(eps / Delta), 2 ln(1/delta) / s)."""
    if p.delta == 0:
        raise ValueError("beta is undefined for delta = 0")
    return math.exp(p.epsilon / p.Delta), -2.0 * math.log(p.delta) / p.s


@dataclass(frozen=True)
class DPGuarantee:
    epsilon: float
    delta: float
    applies_to: str


def dp_guarantee(p: PrivacyParams) -> tuple[DPGuarantee, DPGuarantee]:
    """Guarantees for members of the largest honest component, and for any node."""
    member = DPGuarantee(p.epsilon, p.delta, "largest-component member")
    anyone = DPGuarantee(p.epsilon, min(1.0, p.delta + (1.0 - p.xi)), "arbitrary node")
    return member, anyone


def noiseless_aggregation_plausible(xi: float, n_honest: int, group_threshold: int) -> bool:
    """Heuristic only: does the largest honest component reach ``group_threshold`` nodes?

    The underlying conditions live in the cited noiseless-privacy literature and are
    not checked here.
    """
    return xi * n_honest >= group_threshold
