from django.conf import settings

DEFAULTS = {
    'TOP_N': 10,
    'MAX_ENUMERATED_COLUMNS': 25,
    'N_JOBS': 1,
    'DELIMITER': ',',
    'SERIES_MAX_TERMS': 10000,
    'QUADRATURE_RTOL': 1e-10,
    'VALIDATION_SEED': 20190919,
}


def get_setting(name):
    """Read a FACTOR_SELECTION setting, falling back to the shipped default."""
    if settings.configured:
        overrides = getattr(settings, 'FACTOR_SELECTION', {})
        if name in overrides:
            return overrides[name]
    return DEFAULTS[name]
