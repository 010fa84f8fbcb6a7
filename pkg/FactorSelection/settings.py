import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.getenv('SECRET_KEY', 'dev-secret-key')

DEBUG = os.getenv('DEBUG', 'False').lower() in ('true', '1', 't')


# Application definition

INSTALLED_APPS = [
    #locally made APPs
    'design.apps.DesignConfig',
    'numerics.apps.NumericsConfig',
    'bayesfactor.apps.BayesfactorConfig',
    'modelspace.apps.ModelspaceConfig',
    'posterior.apps.PosteriorConfig',
    'validation.apps.ValidationConfig',
    'selection.apps.SelectionConfig',
]

# Nothing is persisted: reports are written as files, so no database is configured.
DATABASES = {}

USE_TZ = True
TIME_ZONE = 'UTC'
LANGUAGE_CODE = 'en'


# Selection engine
# Every run parameter is an explicit command flag; these are the defaults
# and numerical tolerances shared by all apps.

FACTOR_SELECTION = {
    'TOP_N': 10,
    'MAX_ENUMERATED_COLUMNS': 25,
    'N_JOBS': 1,
    'DELIMITER': ',',
    'SERIES_MAX_TERMS': 10000,
    'QUADRATURE_RTOL': 1e-10,
    'VALIDATION_SEED': 20190919,
}


# Logging
# Reports go to stdout or files, logs always go to stderr.

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        app: {'handlers': ['console'], 'level': 'WARNING', 'propagate': False}
        for app in ('design', 'numerics', 'bayesfactor', 'modelspace', 'posterior', 'validation', 'selection')
    },
}
