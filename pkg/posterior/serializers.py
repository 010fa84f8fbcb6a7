"""JSON document for a :class:`PosteriorReport` (the canonical output).

Layout, version ``factor-selection-report/1``::

    {
      "format": "factor-selection-report/1",
      "design": {"n", "k0", "k", "p", "levels": {factor: [labels]}, "models"},
      "prior": scheme, "hyper_prior": family,
      "null_model": {"sse", "prior", "posterior"},
      "factor_inclusion": {factor: probability},
      "variable_inclusion": {variable: probability},
      "level_inclusion": {factor: {level: probability}},
      "mean_model_size": number,
      "median_probability_model": [column labels],
      "top_models": [{"position", "model", "columns", "prior", "log_prior",
                      "log_bayes_factor", "posterior", "rank", "sse_ratio",
                      "alias_of_null", "aliases", "alias_count"}],
      "baseline_sensitivity": {...},    (only with --baseline-demo)
      "prior_audit": {...}              (only with --prior-audit)
    }

Keys keep this order and numbers are written with ``repr`` precision, so a
rerun on the same inputs is byte-identical.
"""
import json

from design.models import ModelGamma

FORMAT = 'factor-selection-report/1'


def _model_entry(position, record, report):
    schema = report.schema
    aliases = [ModelGamma.from_index(index, schema.k, schema.levels).describe(schema) for index in record.aliases]
    return {
        'position': position,
        'model': record.gamma.describe(schema),
        'columns': list(record.gamma.labels(schema)),
        'prior': record.prior,
        'log_prior': record.log_prior,
        'log_bayes_factor': record.log_bf,
        'posterior': record.posterior,
        'rank': record.rank,
        'sse_ratio': record.q,
        'alias_of_null': record.alias_of_null,
        'aliases': aliases,
        'alias_count': record.alias_count,
    }


def report_as_dict(report, baseline=None, audit=None):
    schema = report.schema
    document = {
        'format': FORMAT,
        'design': {
            'n': report.n,
            'k0': schema.k0,
            'k': schema.k,
            'p': schema.p,
            'levels': {name: list(labels) for name, labels in schema.factor_columns},
            'models': report.model_count,
        },
        'prior': report.prior_kind,
        'hyper_prior': report.hyper_prior,
        'null_model': {
            'sse': report.sse0,
            'prior': report.null_record.prior,
            'posterior': report.null_record.posterior,
        },
        'factor_inclusion': dict(zip(schema.factor_names, report.factor_inclusion)),
        'variable_inclusion': dict(zip(schema.variable_columns, report.variable_inclusion)),
        'level_inclusion': {
            name: dict(zip(labels, values))
            for (name, labels), values in zip(schema.factor_columns, report.level_inclusion)
        },
        'mean_model_size': report.mean_model_size,
        'median_probability_model': list(report.median_probability_model()),
        'top_models': [_model_entry(position, record, report)
                       for position, record in enumerate(report.top_models, start=1)],
    }
    if baseline is not None:
        document['baseline_sensitivity'] = baseline.as_dict()
    if audit is not None:
        document['prior_audit'] = audit.as_dict()
    return document


def dumps_report(report, baseline=None, audit=None):
    return json.dumps(report_as_dict(report, baseline, audit), indent=2, allow_nan=False) + '\n'
