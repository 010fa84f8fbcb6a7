import math
from dataclasses import dataclass

from scipy.special import gammaln

from design.exceptions import DomainError

REFERENCE_N = 100
REFERENCE_KAPPA1 = 3


@dataclass(frozen=True)
class LogValue:
    """A nonzero real stored as ``sign * exp(log_magnitude)``."""
    log_magnitude: float
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DomainError(f'sign must be +1 or -1, got {self.sign}')

    @classmethod
    def one(cls):
        return cls(0.0, 1)

    @classmethod
    def from_value(cls, value):
        if value == 0 or not math.isfinite(value):
            raise DomainError(f'{value} has no finite logarithm')
        return cls(math.log(abs(value)), 1 if value > 0 else -1)

    @property
    def value(self):
        return self.sign * math.exp(self.log_magnitude)

    def __float__(self):
        return self.value

    def __mul__(self, other):
        return LogValue(self.log_magnitude + other.log_magnitude, self.sign * other.sign)


def _robust_log_density(g, n, kappa1):
    return 0.5 * math.log((n + 1) / kappa1) - math.log(2.0) - 1.5 * math.log1p(g)


def _robust_support(n, kappa1):
    return (n + 1) / kappa1 - 1.0, math.inf


def _zellner_siow_log_density(g, n, kappa1):
    if g <= 0:
        return -math.inf
    return 0.5 * math.log(n / 2.0) - gammaln(0.5) - 1.5 * math.log(g) - n / (2.0 * g)


def _hyper_g_n_log_density(g, n, kappa1, a=3.0):
    return math.log((a - 2.0) / (2.0 * n)) - 0.5 * a * math.log1p(g / n)


def _positive_halfline(n, kappa1):
    return 0.0, math.inf


@dataclass(frozen=True)
class HyperGPrior:
    """Mixing density h(g) of a conventional prior.

    ``robust`` has a closed-form Bayes factor; every other family goes
    through quadrature. Densities may depend on the sample size ``n`` and on
    ``kappa1``, the rank of the model design.
    """
    family: str
    name: str
    log_density_fn: object = None
    support_fn: object = None

    @classmethod
    def robust(cls):
        return cls('robust', 'robust', _robust_log_density, _robust_support)

    @classmethod
    def custom(cls, density, support, name='custom'):
        """A user density ``density(g, n, kappa1)``; ``support`` is ``(lo, hi)`` or ``support(n, kappa1)``."""
        def log_density(g, n, kappa1):
            value = density(g, n, kappa1)
            return math.log(value) if value > 0 else -math.inf

        support_fn = support if callable(support) else (lambda n, kappa1: tuple(support))
        return cls('custom', name, log_density, support_fn).checked()

    @classmethod
    def zellner_siow(cls):
        return cls('custom', 'zellner-siow', _zellner_siow_log_density, _positive_halfline)

    @classmethod
    def hyper_g_n(cls):
        return cls('custom', 'hyper-g-n', _hyper_g_n_log_density, _positive_halfline)

    @classmethod
    def named(cls, name):
        presets = {'robust': cls.robust, 'zellner-siow': cls.zellner_siow, 'hyper-g-n': cls.hyper_g_n}
        if name not in presets:
            raise DomainError(f'unknown hyper-g family {name}; choose from {", ".join(presets)}')
        return presets[name]().checked()

    def checked(self, n=REFERENCE_N, kappa1=REFERENCE_KAPPA1):
        """Return ``self`` after checking by quadrature that the density integrates to 1 at ``(n, kappa1)``."""
        from numerics.integration import check_normalized

        check_normalized(self, n, kappa1)
        return self

    @property
    def is_robust(self):
        return self.family == 'robust'

    def log_density(self, g, n, kappa1):
        return self.log_density_fn(g, n, kappa1)

    def support(self, n, kappa1):
        lo, hi = self.support_fn(n, kappa1)
        if not 0 <= lo < hi:
            raise DomainError(
                f'{self.name} prior has empty support ({lo}, {hi}) for n={n}, kappa1={kappa1}')
        return lo, hi
