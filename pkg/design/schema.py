"""Schema documents.

A schema is an INI document with four sections::

    [response]
    column = bmi

    [sure]
    columns = age, height

    [variables]
    columns = x1, x2

    [factors]
    sports = 1, 2, 3, 4, 5, 6
    sleep = low, mid, high

``[sure]``, ``[variables]`` and ``[factors]`` may be empty or absent. Factor
order and level order are taken as written. Names and labels may not contain
commas.
"""
import configparser
import io
import logging

from design.exceptions import ConfigError, SchemaError
from design.forms import SchemaForm
from design.models import PredictorSchema

logger = logging.getLogger(__name__)


def _parser():
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    return parser


def parse_schema(text):
    parser = _parser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise SchemaError(f'schema is not a valid INI document: {exc}') from exc
    if not parser.has_option('response', 'column'):
        raise SchemaError('schema needs a [response] section with a column entry')
    factors = dict(parser.items('factors')) if parser.has_section('factors') else {}
    form = SchemaForm(
        data={
            'response': parser.get('response', 'column'),
            'sure': parser.get('sure', 'columns', fallback=''),
            'variables': parser.get('variables', 'columns', fallback=''),
            **{'factor:' + name: labels for name, labels in factors.items()},
        },
        factors=factors,
    )
    if not form.is_valid():
        messages = [f'{field}: {" ".join(errors)}' for field, errors in form.errors.items()]
        raise SchemaError(f'invalid schema: {"; ".join(messages)}')
    return PredictorSchema(
        response_column=form.cleaned_data['response'],
        sure_columns=form.cleaned_data['sure'],
        variable_columns=form.cleaned_data['variables'],
        factor_columns=form.factor_columns(),
    )


def read_schema(path):
    try:
        with open(path, encoding='utf-8') as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f'cannot read schema file {path}: {exc}') from exc
    schema = parse_schema(text)
    logger.info('schema %s: k0=%d k=%d levels=%s', path, schema.k0, schema.k, schema.levels)
    return schema


def dumps_schema(schema):
    parser = _parser()
    parser['response'] = {'column': schema.response_column}
    parser['sure'] = {'columns': ', '.join(schema.sure_columns)}
    parser['variables'] = {'columns': ', '.join(schema.variable_columns)}
    parser['factors'] = {name: ', '.join(labels) for name, labels in schema.factor_columns}
    buffer = io.StringIO()
    parser.write(buffer)
    return buffer.getvalue()


def write_schema(schema, path):
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(dumps_schema(schema))
