from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from design.exceptions import SchemaError, UsageError

INTERCEPT = '(intercept)'


@dataclass(frozen=True)
class PredictorSchema:
    """Role of every column: response, sure variables, candidate variables and factors.

    The intercept is never listed; it is always the first sure variable.
    Factors keep their declared level order, which fixes the dummy column
    order and therefore the bit positions of every model.
    """
    response_column: str
    sure_columns: tuple = ()
    variable_columns: tuple = ()
    factor_columns: tuple = ()
    baseline_coded: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'sure_columns', tuple(self.sure_columns))
        object.__setattr__(self, 'variable_columns', tuple(self.variable_columns))
        object.__setattr__(self, 'factor_columns', tuple(
            (name, tuple(str(label) for label in labels)) for name, labels in self.factor_columns
        ))
        self.validate()

    def validate(self):
        names = [self.response_column, *self.sure_columns, *self.variable_columns, *self.factor_names]
        duplicated = sorted({name for name in names if names.count(name) > 1})
        if duplicated:
            raise SchemaError(f'column names must be distinct: {", ".join(duplicated)}')
        if INTERCEPT in names:
            raise SchemaError(f'{INTERCEPT} is reserved for the implicit intercept')
        for name, labels in self.factor_columns:
            # a corner-coded factor keeps one column fewer than its declared levels
            if len(labels) < (1 if name in self.baseline_coded else 2):
                raise SchemaError(f'factor {name} needs at least 2 levels, got {len(labels)}')
            if len(set(labels)) != len(labels):
                raise SchemaError(f'factor {name} declares a level twice')

    @property
    def factor_names(self):
        return tuple(name for name, _ in self.factor_columns)

    @property
    def levels(self):
        return tuple(len(labels) for _, labels in self.factor_columns)

    @property
    def k0(self):
        return 1 + len(self.sure_columns)

    @property
    def k(self):
        return len(self.variable_columns)

    @property
    def p(self):
        return len(self.factor_columns)

    @property
    def L(self):
        return sum(self.levels)

    @property
    def data_columns(self):
        return (self.response_column, *self.sure_columns, *self.variable_columns, *self.factor_names)

    def factor_index(self, factor):
        if isinstance(factor, str):
            if factor not in self.factor_names:
                raise UsageError(f'unknown factor {factor}')
            return self.factor_names.index(factor)
        if not 0 <= factor < self.p:
            raise UsageError(f'factor index {factor} out of range 0..{self.p - 1}')
        return factor

    def level_index(self, factor, level):
        labels = self.factor_columns[self.factor_index(factor)][1]
        if isinstance(level, str):
            if level not in labels:
                raise UsageError(f'unknown level {level} of factor {factor}')
            return labels.index(level)
        if not 0 <= level < len(labels):
            raise UsageError(f'level index {level} out of range 0..{len(labels) - 1}')
        return level

    def column_labels(self):
        """Labels of the k + L candidate columns in bit order."""
        labels = list(self.variable_columns)
        for name, levels in self.factor_columns:
            labels.extend(f'{name}={label}' for label in levels)
        return tuple(labels)


@dataclass(frozen=True, eq=False)
class DesignAssembly:
    """Numeric blocks of the full model: ``y``, ``X0`` (sure), ``X`` (variables), ``Z`` (level dummies).

    Arrays are made read-only on construction so an assembly can be shared
    between worker threads.
    """
    schema: PredictorSchema
    y: np.ndarray
    X0: np.ndarray
    X: np.ndarray
    Z: np.ndarray
    cell_counts: tuple
    baselines: tuple = field(default=())

    def __post_init__(self):
        for name in ('y', 'X0', 'X', 'Z'):
            array = np.array(getattr(self, name), dtype=float)
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        object.__setattr__(self, 'cell_counts', tuple(tuple(int(c) for c in counts) for counts in self.cell_counts))

    @property
    def n(self):
        return self.y.shape[0]

    @property
    def k0(self):
        return self.X0.shape[1]

    @property
    def k(self):
        return self.X.shape[1]

    @property
    def levels(self):
        return self.schema.levels

    @property
    def p(self):
        return len(self.levels)

    @property
    def L(self):
        return self.Z.shape[1]

    @property
    def column_count(self):
        return self.k + self.L

    @cached_property
    def candidates(self):
        """``[X | Z]``, the columns a model switches on and off."""
        matrix = np.hstack([self.X, self.Z])
        matrix.setflags(write=False)
        return matrix

    @cached_property
    def exact_fit_sse(self):
        """SSE at or below which a fit is exact up to rounding: eps * n * yᵀy."""
        return float(np.finfo(float).eps * self.n * (self.y @ self.y))

    def factor_slices(self):
        slices, start = [], 0
        for size in self.levels:
            slices.append(slice(start, start + size))
            start += size
        return tuple(slices)

    def null_model(self):
        return ModelGamma.null(self.k, self.levels)

    def full_model(self):
        return ModelGamma.full(self.k, self.levels)

    def with_baseline(self, factor, level):
        """Corner coding of one factor: the baseline level's column is absorbed into the null."""
        r = self.schema.factor_index(factor)
        j = self.schema.level_index(r, level)
        name, labels = self.schema.factor_columns[r]
        reduced = labels[:j] + labels[j + 1:]
        factor_columns = list(self.schema.factor_columns)
        factor_columns[r] = (name, reduced)
        column = self.factor_slices()[r].start + j
        counts = list(self.cell_counts)
        counts[r] = counts[r][:j] + counts[r][j + 1:]
        return replace(
            self,
            schema=replace(self.schema, factor_columns=tuple(factor_columns),
                           baseline_coded=self.schema.baseline_coded + (name,)),
            Z=np.delete(self.Z, column, axis=1),
            cell_counts=tuple(counts),
            baselines=self.baselines + ((name, labels[j]),),
        )


@dataclass(frozen=True)
class ModelGamma:
    """Inclusion bits over the k variables and the L level columns of a design."""
    variable_bits: tuple
    level_bits: tuple
    levels: tuple

    def __post_init__(self):
        object.__setattr__(self, 'variable_bits', tuple(int(b) for b in self.variable_bits))
        object.__setattr__(self, 'level_bits', tuple(int(b) for b in self.level_bits))
        object.__setattr__(self, 'levels', tuple(int(size) for size in self.levels))
        if len(self.level_bits) != sum(self.levels):
            raise UsageError(f'{len(self.level_bits)} level bits for factors of sizes {self.levels}')
        if any(b not in (0, 1) for b in self.bits):
            raise UsageError('inclusion bits must be 0 or 1')

    @classmethod
    def null(cls, k, levels):
        return cls((0,) * k, (0,) * sum(levels), levels)

    @classmethod
    def full(cls, k, levels):
        return cls((1,) * k, (1,) * sum(levels), levels)

    @classmethod
    def from_bits(cls, bits, k, levels):
        bits = tuple(bits)
        return cls(bits[:k], bits[k:], levels)

    @classmethod
    def from_index(cls, index, k, levels):
        """Model number ``index`` in lexicographic order (the first column is the most significant bit)."""
        width = k + sum(levels)
        bits = tuple((index >> (width - 1 - j)) & 1 for j in range(width))
        return cls.from_bits(bits, k, levels)

    @property
    def k(self):
        return len(self.variable_bits)

    @property
    def bits(self):
        return self.variable_bits + self.level_bits

    @property
    def index(self):
        value = 0
        for bit in self.bits:
            value = (value << 1) | bit
        return value

    @property
    def size(self):
        return sum(self.bits)

    @property
    def is_null(self):
        return self.size == 0

    def active_levels(self):
        """k_γ^h, the number of active levels of each factor."""
        counts, start = [], 0
        for size in self.levels:
            counts.append(sum(self.level_bits[start:start + size]))
            start += size
        return tuple(counts)

    @property
    def variable_count(self):
        return sum(self.variable_bits)

    @property
    def factor_count(self):
        return sum(1 for count in self.active_levels() if count > 0)

    def check_dimensions(self, k, levels):
        if self.k != k or self.levels != tuple(levels):
            raise UsageError(
                f'model has dimensions (k={self.k}, levels={self.levels}), design has (k={k}, levels={tuple(levels)})')

    def labels(self, schema):
        return tuple(label for label, bit in zip(schema.column_labels(), self.bits) if bit)

    def describe(self, schema):
        labels = self.labels(schema)
        return ' + '.join(labels) if labels else '(null)'
