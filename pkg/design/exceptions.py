class SelectionError(Exception):
    """Base class for every failure the selection engine reports.

    ``code`` is the stable machine-readable tag and ``exit_code`` the process
    status the management commands return for it.
    """
    code = 'error'
    exit_code = 1

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = context

    def machine_line(self):
        return f'error={self.code} message={" ".join(str(self).split())}'


class ConfigError(SelectionError):
    code = 'config'
    exit_code = 2


class UsageError(SelectionError):
    code = 'usage'
    exit_code = 2


class SchemaError(SelectionError):
    code = 'schema'
    exit_code = 3


class EmptyCellError(SchemaError):
    code = 'empty-cell'


class InsufficientDataError(SchemaError):
    code = 'insufficient-data'


class DegenerateDataError(SchemaError):
    code = 'degenerate-data'


class CapacityError(SelectionError):
    code = 'capacity'
    exit_code = 4


class DomainError(SelectionError):
    code = 'domain'


class NumericError(SelectionError):
    code = 'numeric'


class ConstructionError(SelectionError):
    code = 'construction'


class ValidationFailure(SelectionError):
    code = 'validation'
    exit_code = 5
