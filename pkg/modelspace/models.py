import math
from dataclasses import dataclass, field

import numpy as np

from design.exceptions import UsageError

SCHEMES = ('constant', 'scott_berger_flat', 'hierarchical')
CLI_NAMES = {'constant': 'constant', 'scott-berger': 'scott_berger_flat', 'hierarchical': 'hierarchical'}


@dataclass(frozen=True)
class ModelPriorScheme:
    """A prior over the 2^(k+L) models of a design with k variables and factors of sizes ``levels``."""
    kind: str
    k: int
    levels: tuple = ()

    def __post_init__(self):
        kind = CLI_NAMES.get(self.kind, self.kind)
        if kind not in SCHEMES:
            raise UsageError(f'unknown model prior {self.kind}; choose from {", ".join(CLI_NAMES)}')
        object.__setattr__(self, 'kind', kind)
        object.__setattr__(self, 'levels', tuple(int(size) for size in self.levels))

    @classmethod
    def for_assembly(cls, kind, assembly):
        return cls(kind, assembly.k, assembly.levels)

    @property
    def p(self):
        return len(self.levels)

    @property
    def L(self):
        return sum(self.levels)

    @property
    def column_count(self):
        return self.k + self.L

    def factor_slices(self):
        slices, start = [], self.k
        for size in self.levels:
            slices.append(slice(start, start + size))
            start += size
        return tuple(slices)

    def log_prior(self, gamma):
        from modelspace.priors import log_prior_bits
        gamma.check_dimensions(self.k, self.levels)
        return float(log_prior_bits(self, np.array([gamma.bits]))[0])

    def prior(self, gamma):
        return math.exp(self.log_prior(gamma))


@dataclass(frozen=True)
class PriorAudit:
    """Exhaustive summary of a model prior."""
    scheme: ModelPriorScheme
    total_mass: float
    null_mass: float
    size_mass: tuple
    variable_marginals: tuple
    factor_marginals: tuple
    level_marginals: tuple
    checks: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(self.checks.values())

    def as_dict(self):
        return {
            'scheme': self.scheme.kind,
            'k': self.scheme.k,
            'levels': list(self.scheme.levels),
            'models': 2 ** self.scheme.column_count,
            'total_mass': self.total_mass,
            'null_mass': self.null_mass,
            'size_mass': list(self.size_mass),
            'variable_marginals': list(self.variable_marginals),
            'factor_marginals': list(self.factor_marginals),
            'level_marginals': [list(values) for values in self.level_marginals],
            'checks': dict(self.checks),
            'passed': self.passed,
        }
