"""
Django settings for the qcube project.

The project has no web surface: Django provides configuration, logging, the
run-history database and the management-command CLI.

For the full list of Django settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# Load environment variables from .env if present
dotenv_path = BASE_DIR / '.env'
try:
    if dotenv_path.exists():
        load_dotenv(dotenv_path)
except PermissionError:
    pass


def _env_bool(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in {'1', 'true', 'yes', 'on'}


def _env_bh_bounds(name: str, default: str) -> dict[int, float]:
    raw = os.getenv(name, default)
    bounds: dict[int, float] = {}
    for chunk in raw.split(','):
        if not chunk.strip():
            continue
        degree, _, value = chunk.partition(':')
        bounds[int(degree)] = float(value)
    return bounds


# SECURITY WARNING: only meaningful if a web surface is ever added.
SECRET_KEY = os.getenv('DJANGO_SECRET_KEY', 'django-insecure-qcube-local-only')

DEBUG = _env_bool('DJANGO_DEBUG', False)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'pauli',
    'cube',
    'inequalities',
    'learning',
    'experiments',
]


# Database
# https://docs.djangoproject.com/en/5.2/ref/settings/#databases

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Norm cache (operator and sup norms keyed by the polynomial's canonical text)
CACHES = {
    'default': {
        'BACKEND': 'django.core.cache.backends.locmem.LocMemCache',
        'LOCATION': 'qcube-norms',
        'TIMEOUT': None,
        'OPTIONS': {
            'MAX_ENTRIES': 4096,
        },
    }
}


# Logging
QCUBE_LOG_LEVEL = os.getenv('QCUBE_LOG_LEVEL', 'INFO').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        app: {'handlers': ['console'], 'level': QCUBE_LOG_LEVEL, 'propagate': False}
        for app in ('pauli', 'cube', 'inequalities', 'learning', 'experiments')
    },
}


# Numerical limits and experiment defaults
QCUBE_DENSE_LIMIT = int(os.getenv('QCUBE_DENSE_LIMIT', '10'))
QCUBE_EXHAUSTIVE_CUBE_LIMIT = int(os.getenv('QCUBE_EXHAUSTIVE_CUBE_LIMIT', '24'))
QCUBE_SUP_NORM_SAMPLES = int(os.getenv('QCUBE_SUP_NORM_SAMPLES', '100000'))
QCUBE_BH_BOUNDS = _env_bh_bounds('QCUBE_BH_BOUNDS', '1:2,2:4,3:8')
QCUBE_WORKERS = int(os.getenv('QCUBE_WORKERS', '1'))
QCUBE_RECORD_RUNS = _env_bool('QCUBE_RECORD_RUNS', True)

# Default primary key field type
# https://docs.djangoproject.com/en/5.2/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'
