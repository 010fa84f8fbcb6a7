import math
from dataclasses import dataclass


@dataclass(frozen=True)
class BayesFactorValue:
    """Log Bayes factor of one model against the null, with the statistics it was computed from."""
    log_bf: float
    q: float
    kappa0: int
    kappa1: int
    rank_deficient: bool = False
    alias_of_null: bool = False

    @property
    def bf(self):
        return math.exp(self.log_bf)


@dataclass(frozen=True)
class InvarianceRow:
    parameterization: str
    rank: int
    q: float
    log_bf: float
