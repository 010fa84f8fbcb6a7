import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ModelRecord:
    gamma: object
    log_prior: float
    log_bf: float
    rank: int
    q: float
    log_posterior: float
    alias_of_null: bool = False
    aliases: tuple = ()
    alias_count: int = 0

    @property
    def posterior(self):
        return math.exp(self.log_posterior)

    @property
    def prior(self):
        return math.exp(self.log_prior)


@dataclass(frozen=True)
class PosteriorReport:
    """Normalized posterior over the enumerated model space and its inclusion summaries.

    Only the null model and the ``top_models`` are kept as records. A record
    lists the indices of up to a fixed number of its aliases (models with the
    same rank and SSE ratio, hence the same Bayes factor) and counts all of
    them. Level inclusions are grouped by factor.
    """
    schema: object
    prior_kind: str
    hyper_prior: str
    n: int
    sse0: float
    log_normalizer: float
    model_count: int
    evaluations: int
    total_posterior: float
    mean_model_size: float
    null_record: ModelRecord
    factor_inclusion: tuple
    variable_inclusion: tuple
    level_inclusion: tuple
    top_models: tuple

    def highest_probability_model(self):
        return self.top_models[0]

    def record(self, index):
        """The record of model ``index`` if it is the null model or among the top models."""
        if index == 0:
            return self.null_record
        for record in self.top_models:
            if record.gamma.index == index:
                return record
        raise KeyError(index)

    def median_probability_model(self):
        """Columns whose inclusion probability exceeds one half."""
        inclusions = list(self.variable_inclusion) + [v for group in self.level_inclusion for v in group]
        return tuple(label for label, value in zip(self.schema.column_labels(), inclusions) if value > 0.5)


@dataclass(frozen=True)
class BaselineSensitivity:
    """P(A|y) of one factor under the indicator coding and under each corner coding."""
    factor: str
    indicator: float
    by_baseline: tuple

    def as_dict(self):
        return {
            'factor': self.factor,
            'indicator_coding': self.indicator,
            'baseline_coding': {label: value for label, value in self.by_baseline},
        }
