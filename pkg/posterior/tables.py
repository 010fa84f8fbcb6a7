"""Aligned text views of a report; every number printed to 6 significant digits."""
import pandas as pd


def _fmt(value):
    return f'{value:.6g}'


def inclusion_table(report):
    """Inclusion probabilities of factors and variables."""
    schema = report.schema
    columns = list(schema.factor_names) + list(schema.variable_columns)
    values = list(report.factor_inclusion) + list(report.variable_inclusion)
    frame = pd.DataFrame([values], columns=columns, index=['inclusion'])
    return frame.to_string(float_format=_fmt)


def level_table(report):
    """Inclusion probabilities of the levels, one column per (factor, level)."""
    schema = report.schema
    columns = pd.MultiIndex.from_tuples(
        [(name, label) for name, labels in schema.factor_columns for label in labels],
        names=['factor', 'level'],
    )
    values = [value for group in report.level_inclusion for value in group]
    frame = pd.DataFrame([values], columns=columns, index=['inclusion'])
    return frame.to_string(float_format=_fmt)


def top_models_table(report):
    frame = pd.DataFrame(
        [
            {
                'model': record.gamma.describe(report.schema),
                'prior': record.prior,
                'log BF': record.log_bf,
                'posterior': record.posterior,
                'rank': record.rank,
            }
            for record in report.top_models
        ],
        index=pd.RangeIndex(1, len(report.top_models) + 1),
    )
    return frame.to_string(float_format=_fmt)


def baseline_table(baseline):
    rows = [('indicator coding', baseline.indicator)]
    rows += [(f'baseline {label}', value) for label, value in baseline.by_baseline]
    frame = pd.DataFrame(rows, columns=['coding', f'P({baseline.factor}|y)']).set_index('coding')
    return frame.to_string(float_format=_fmt)


def audit_table(audit):
    scheme = audit.scheme
    frame = pd.DataFrame(
        {'mass': list(audit.size_mass)},
        index=pd.RangeIndex(0, scheme.column_count + 1, name='model size'),
    )
    lines = [
        f'{scheme.kind} prior, k={scheme.k}, levels={list(scheme.levels)}',
        f'total mass {_fmt(audit.total_mass)}  P(M_0) {_fmt(audit.null_mass)}',
        frame.to_string(float_format=_fmt),
    ]
    lines += [f'{name}: {"pass" if ok else "FAIL"}' for name, ok in audit.checks.items()]
    return '\n'.join(lines)


def render_report(report, baseline=None, audit=None):
    sections = [
        f'Posterior model probabilities, {report.prior_kind} prior, '
        f'{report.hyper_prior} mixing density, n={report.n}',
        '',
        'Inclusion probabilities of factors and variables',
        inclusion_table(report),
    ]
    if report.schema.p:
        sections += ['', 'Inclusion probabilities of levels of factors', level_table(report)]
    sections += ['', 'Top models', top_models_table(report)]
    if baseline is not None:
        sections += ['', 'Baseline sensitivity', baseline_table(baseline)]
    if audit is not None:
        sections += ['', 'Prior audit', audit_table(audit)]
    return '\n'.join(sections) + '\n'
