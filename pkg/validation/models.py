from dataclasses import dataclass, field

import numpy as np

GI_TOLERANCE = 1e-8


@dataclass(frozen=True, eq=False)
class GIConstruction:
    """A penalty ``T`` for ``V`` and the inverse ``S = (VᵀV + T)^-1`` it produces.

    ``Q1``/``D`` span the range of ``VᵀV`` and hold its positive eigenvalues,
    ``Q2`` spans its null space.
    """
    V: np.ndarray
    Q1: np.ndarray
    Q2: np.ndarray
    D: np.ndarray
    T: np.ndarray
    S: np.ndarray
    residual: float
    positive_definite: bool
    disjoint: bool

    @property
    def rank(self):
        return self.Q1.shape[1]

    @property
    def passed(self):
        return self.residual <= GI_TOLERANCE and self.positive_definite and self.disjoint


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    value: float = 0.0
    tolerance: float = 0.0
    detail: str = ''


@dataclass(frozen=True)
class ValidationSummary:
    seed: int
    suites: tuple
    results: tuple = field(default=())

    @property
    def passed(self):
        return all(result.passed for result in self.results)

    def failures(self):
        return tuple(result for result in self.results if not result.passed)

    def for_suite(self, suite):
        return tuple(result for result in self.results if result.suite == suite)
