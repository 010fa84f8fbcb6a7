import logging

import numpy as np
import pandas as pd

from design.conf import get_setting
from design.exceptions import ConfigError, EmptyCellError, InsufficientDataError, SchemaError
from design.linalg import numerical_rank
from design.models import DesignAssembly, PredictorSchema
from design.schema import read_schema

logger = logging.getLogger(__name__)

DELIMITERS = {'comma': ',', 'tab': '\t'}


def ingest(data_path, schema, delimiter=None):
    """Read a delimited data file and assemble the full-model design for ``schema``.

    ``schema`` is a :class:`PredictorSchema` or the path of a schema document.
    Every cell is read as text first: factor cells stay strings, the other
    declared columns must parse as finite reals.
    """
    if not isinstance(schema, PredictorSchema):
        schema = read_schema(schema)
    delimiter = DELIMITERS.get(delimiter, delimiter) or get_setting('DELIMITER')
    try:
        frame = pd.read_csv(data_path, sep=delimiter, dtype=str, encoding='utf-8',
                            keep_default_na=False, skipinitialspace=True)
    except FileNotFoundError as exc:
        raise ConfigError(f'data file {data_path} does not exist') from exc
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise SchemaError(f'cannot parse data file {data_path}: {exc}') from exc
    assembly = assemble(frame, schema)
    logger.info('ingested %s: n=%d k0=%d k=%d L=%d', data_path, assembly.n, assembly.k0, assembly.k, assembly.L)
    return schema, assembly


def _numeric_block(frame, columns):
    if not columns:
        return np.empty((len(frame), 0))
    block = frame[list(columns)].apply(lambda column: pd.to_numeric(column.str.strip(), errors='coerce'))
    values = block.to_numpy(dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise SchemaError(
            f'column {columns[col]} row {row + 1}: {frame[columns[col]].iloc[row]!r} is not a finite number')
    return values


def _dummies(frame, name, labels):
    values = frame[name].str.strip()
    unseen = sorted(set(values) - set(labels))
    if unseen:
        raise SchemaError(f'factor {name} has levels not declared in the schema: {", ".join(unseen)}')
    block = np.column_stack([(values == label).to_numpy(dtype=float) for label in labels])
    counts = block.sum(axis=0).astype(int)
    empty = [label for label, count in zip(labels, counts) if count == 0]
    if empty:
        raise EmptyCellError(f'factor {name} has levels without observations: {", ".join(empty)}')
    return block, tuple(counts)


def assemble(frame, schema):
    """Build the validated :class:`DesignAssembly` from a frame of text cells."""
    missing = [name for name in schema.data_columns if name not in frame.columns]
    if missing:
        raise SchemaError(f'columns missing from the data: {", ".join(missing)}')
    frame = frame[list(schema.data_columns)].astype(str)
    blank = frame.apply(lambda column: column.str.strip().isin(['', 'NA', 'NaN', 'nan', 'null']))
    if blank.to_numpy().any():
        column = frame.columns[np.argwhere(blank.to_numpy())[0][1]]
        raise SchemaError(f'column {column} has missing values; only complete cases are supported')

    y = _numeric_block(frame, [schema.response_column])[:, 0]
    X0 = np.column_stack([np.ones(len(frame)), _numeric_block(frame, schema.sure_columns)])
    X = _numeric_block(frame, schema.variable_columns)
    blocks, counts = [], []
    for name, labels in schema.factor_columns:
        block, cell_counts = _dummies(frame, name, labels)
        blocks.append(block)
        counts.append(cell_counts)
    Z = np.hstack(blocks) if blocks else np.empty((len(frame), 0))

    assembly = DesignAssembly(schema=schema, y=y, X0=X0, X=X, Z=Z, cell_counts=tuple(counts))
    check_assembly(assembly)
    return assembly


def check_assembly(assembly):
    n, k0, k = assembly.n, assembly.k0, assembly.k
    if n < k0 + k + 1:
        raise InsufficientDataError(f'n={n} observations, at least k0 + k + 1 = {k0 + k + 1} needed')
    if numerical_rank(assembly.X0) < k0:
        raise SchemaError('the sure columns (with the intercept) are collinear')
    absorbed = {name for name, _ in assembly.baselines}
    for (name, _), block in zip(assembly.schema.factor_columns,
                                (assembly.Z[:, s] for s in assembly.factor_slices())):
        if name not in absorbed and not np.all(block.sum(axis=1) == 1):
            raise SchemaError(f'factor {name}: every observation needs exactly one level')
    expected = k0 + k + assembly.L - assembly.p
    rank = numerical_rank(np.hstack([assembly.X0, assembly.candidates]))
    if rank != expected:
        logger.warning('full design has rank %d, expected k0 + k + L - p = %d; '
                       'some candidate columns are collinear', rank, expected)
