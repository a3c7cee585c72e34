import os
from pathlib import Path
from decouple import config, Csv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('SECRET_KEY', default='zetafred-local-only')
DEBUG = config('DEBUG', default=False, cast=bool)
ALLOWED_HOSTS = []

# Application definition
DJANGO_APPS = [
    'django.contrib.contenttypes',
]

THIRD_PARTY_APPS = [
    'rest_framework',
]

LOCAL_APPS = [
    'expansions',
    'special',
    'operators',
    'spectral',
    'fredholm',
    'asymptotics',
    'verifier',
]

INSTALLED_APPS = DJANGO_APPS + THIRD_PARTY_APPS + LOCAL_APPS

# No persistence layer: every result is a file or an exit code.
DATABASES = {}

USE_TZ = True
TIME_ZONE = config('TIME_ZONE', default='UTC')

# REST Framework Configuration (serializers only, no views)
REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'COERCE_DECIMAL_TO_STRING': False,
}

# Numerical settings
ZETAFRED = {
    'PRECISION': config('ZETAFRED_PRECISION', default='double'),
    'EXTENDED_DPS': config('ZETAFRED_EXTENDED_DPS', default=40, cast=int),
    'REGINT_TOL': config('ZETAFRED_REGINT_TOL', default=1e-10, cast=float),
    'REGINT_FLOOR': config('ZETAFRED_REGINT_FLOOR', default=1e-12, cast=float),
    'REGINT_DPS': config('ZETAFRED_REGINT_DPS', default=40, cast=int),
    'HEAT_TRACE_TOL': config('ZETAFRED_HEAT_TRACE_TOL', default=1e-14, cast=float),
    'HEAT_TRACE_FLOOR': config('ZETAFRED_HEAT_TRACE_FLOOR', default=1e-3, cast=float),
    'HEAT_SPLIT': config('ZETAFRED_HEAT_SPLIT', default=0.1, cast=float),
    'WINDOW_TOL': config('ZETAFRED_WINDOW_TOL', default=1e-10, cast=float),
    'HEAT_MAX_TERMS': config('ZETAFRED_HEAT_MAX_TERMS', default=10_000_000, cast=int),
    'FREDHOLM_TOL': config('ZETAFRED_FREDHOLM_TOL', default=1e-12, cast=float),
    'ROUTE_TOL': config('ZETAFRED_ROUTE_TOL', default=1e-7, cast=float),
    'IDENTITY_TOL': config('ZETAFRED_IDENTITY_TOL', default=1e-6, cast=float),
    'CONSTANT_TERM_TOL': config('ZETAFRED_CONSTANT_TERM_TOL', default=1e-3, cast=float),
    'FIT_CONDITION_LIMIT': config('ZETAFRED_FIT_CONDITION_LIMIT', default=1e10, cast=float),
    'FIT_Z0': config('ZETAFRED_FIT_Z0', default=25.0, cast=float),
    'FIT_POINTS': config('ZETAFRED_FIT_POINTS', default=6, cast=int),
    'FIT_RESIDUAL_TOL': config('ZETAFRED_FIT_RESIDUAL_TOL', default=1e-6, cast=float),
    'FIT_MATCH_TOL': config('ZETAFRED_FIT_MATCH_TOL', default=1e-3, cast=float),
    'RESOLVENT_SPLIT': config('ZETAFRED_RESOLVENT_SPLIT', default=100.0, cast=float),
    'IDENTITY_Z_GRID': config('ZETAFRED_IDENTITY_Z_GRID', default='0.5,1,2,4', cast=Csv(float)),
    'DERIVATIVE_STEPS': config('ZETAFRED_DERIVATIVE_STEPS', default='1e-2,5e-3,2.5e-3', cast=Csv(float)),
}

LOG_LEVEL = config('ZETAFRED_LOG_LEVEL', default='WARNING')
LOG_DIR = config('ZETAFRED_LOG_DIR', default='')

# Logging Configuration
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': LOG_LEVEL,
    },
    'loggers': {
        app: {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        }
        for app in LOCAL_APPS + ['zetafred']
    },
}

if LOG_DIR:
    os.makedirs(LOG_DIR, exist_ok=True)
    LOGGING['handlers']['file'] = {
        'level': 'INFO',
        'class': 'logging.FileHandler',
        'filename': os.path.join(LOG_DIR, 'zetafred.log'),
        'formatter': 'verbose',
    }
    for logger_config in LOGGING['loggers'].values():
        logger_config['handlers'].append('file')
