"""Seeded synthetic datasets used by the tests and the ``validate`` command.

"Exact" designs put the noise in the within-cell space: residuals have zero
mean in every cell and are orthogonal to the sure columns, so sums of squares
are known in closed form and extra level columns explain nothing beyond the
cell means.
"""
from pathlib import Path

import numpy as np
import pandas as pd

from design.ingest import assemble
from design.linalg import residualize
from design.models import PredictorSchema
from design.schema import write_schema


def level_labels(size):
    return tuple(str(j + 1) for j in range(size))


def balanced_levels(rng, n, size):
    """A shuffled level assignment with every level observed at least ``n // size`` times."""
    codes = np.arange(n) % size
    rng.shuffle(codes)
    return codes


def frame_from_arrays(y, sure=None, variables=None, factors=None):
    """Text frame plus schema from arrays; factors map a name to integer level codes (0-based)."""
    sure = sure or {}
    variables = variables or {}
    factors = factors or {}
    columns = {'y': y, **sure, **variables}
    frame = pd.DataFrame({name: [repr(float(v)) for v in values] for name, values in columns.items()})
    factor_columns = []
    for name, (codes, size) in factors.items():
        labels = level_labels(size)
        frame[name] = [labels[c] for c in codes]
        factor_columns.append((name, labels))
    schema = PredictorSchema(
        response_column='y',
        sure_columns=tuple(sure),
        variable_columns=tuple(variables),
        factor_columns=tuple(factor_columns),
    )
    return frame, schema


def assembly_from_arrays(y, sure=None, variables=None, factors=None):
    frame, schema = frame_from_arrays(y, sure, variables, factors)
    return assemble(frame, schema)


def one_factor_exact(size=6, per_level=80, active_level=0, shift=2.0, seed=0):
    """One factor, intercept only; only ``active_level`` moves the mean, by ``shift`` noise sds.

    The within-cell sum of squares is exactly ``n - size``, i.e. the residual
    standard deviation is 1.
    """
    rng = np.random.default_rng(seed)
    codes = np.repeat(np.arange(size), per_level)
    noise = rng.standard_normal(codes.size)
    for j in range(size):
        noise[codes == j] -= noise[codes == j].mean()
    noise *= np.sqrt((codes.size - size) / (noise @ noise))
    y = 10.0 + shift * (codes == active_level) + noise
    return frame_from_arrays(y, factors={'A': (codes, size)})


def pure_noise(n=200, k=1, size=3, seed=0):
    """Response orthogonal to every candidate column: every model has the null SSE."""
    rng = np.random.default_rng(seed)
    variables = {f'x{i + 1}': rng.standard_normal(n) for i in range(k)}
    codes = balanced_levels(rng, n, size)
    dummies = np.eye(size)[codes]
    X0 = np.ones((n, 1))
    full = np.column_stack([X0, *variables.values(), dummies])
    noise = residualize(full, rng.standard_normal((n, 1)))[:, 0]
    y = 5.0 + noise
    return frame_from_arrays(y, variables=variables, factors={'A': (codes, size)})


def obesity_like(n=1002, seed=0):
    """Shape of a childhood obesity study: 3 sure covariates, 2 variables, factors with 6 and 3 levels."""
    rng = np.random.default_rng(seed)
    sure = {
        'age': rng.uniform(6.0, 12.0, n),
        'height': rng.normal(135.0, 10.0, n),
        'weight': rng.normal(32.0, 6.0, n),
    }
    variables = {
        'x1': rng.normal(0.0, 1.0, n),
        'x2': rng.normal(0.0, 1.0, n),
    }
    sports = balanced_levels(rng, n, 6)
    sleep = balanced_levels(rng, n, 3)
    y = (
        8.0
        + 0.05 * sure['age'] - 0.02 * sure['height'] + 0.3 * sure['weight']
        + 0.8 * variables['x1'] + 0.05 * variables['x2']
        + 1.0 * (sports == 0)
        + np.array([0.4, -0.3, 0.0])[sleep]
        + rng.normal(0.0, 1.5, n)
    )
    return frame_from_arrays(y, sure=sure, variables=variables,
                             factors={'sports': (sports, 6), 'sleep': (sleep, 3)})


def two_level(n=8, shift=1.0, seed=0):
    rng = np.random.default_rng(seed)
    codes = np.arange(n) % 2
    y = 1.0 + shift * codes + rng.standard_normal(n)
    return frame_from_arrays(y, factors={'A': (codes, 2)})


def random_factor_design(rng, size, per_level_range=(2, 5), covariate=False, effects=1.0):
    """A random one-factor design (intercept, optional sure covariate) with unequal cells."""
    per_level = rng.integers(per_level_range[0], per_level_range[1] + 1, size)
    codes = np.repeat(np.arange(size), per_level)
    n = codes.size
    sure = {'z': rng.standard_normal(n)} if covariate else None
    y = rng.normal(0.0, effects, size)[codes] + rng.standard_normal(n)
    if covariate:
        y = y + 0.5 * sure['z']
    return assembly_from_arrays(y, sure=sure, factors={'A': (codes, size)})


def write_dataset(frame, schema, directory, name='data', delimiter=','):
    """Write ``frame`` and its schema document into ``directory``; returns both paths."""
    directory = Path(directory)
    data_path = directory / f'{name}.csv'
    schema_path = directory / f'{name}.ini'
    frame.to_csv(data_path, sep=delimiter, index=False)
    write_schema(schema, schema_path)
    return data_path, schema_path
