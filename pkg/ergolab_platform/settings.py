"""
Django settings for the ergolab project.

Ergolab is a command-line laboratory; Django provides the settings layer,
the management-command surface, the run ledger (ORM) and the test runner.
Tunables are read from the environment or a `.env` file via python-decouple.
"""

from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# No web surface is served; the key only satisfies Django's checks.
SECRET_KEY = config('SECRET_KEY', default='ergolab-local-only-key')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',

    # Third party apps
    'rest_framework',

    # Local apps
    'core.apps.CoreConfig',
    'words.apps.WordsConfig',
    'shiftspace.apps.ShiftspaceConfig',
    'gluing.apps.GluingConfig',
    'measures.apps.MeasuresConfig',
    'splicer.apps.SplicerConfig',
    'cocycle.apps.CocycleConfig',
    'boweneye.apps.BoweneyeConfig',
    'cli.apps.CliConfig',
]


# Database
# The run ledger (`--record`) is the only persisted state.

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': config('ERGOLAB_DB_PATH', default=str(BASE_DIR / 'ergolab.sqlite3')),
    }
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Ergolab tunables

ERGOLAB = {
    'TOOL_NAME': 'ergolab',
    'TOOL_VERSION': '1.0.0',
    'SCHEMA_VERSION': '1',
    'THREADS': config('ERGOLAB_THREADS', default=1, cast=int),
    'ENUM_CAP': config('ERGOLAB_ENUM_CAP', default=22, cast=int),
    'COUNT_CAP': config('ERGOLAB_COUNT_CAP', default=64, cast=int),
    'MEASURE_DEPTH': config('ERGOLAB_MEASURE_DEPTH', default=6, cast=int),
    'MAX_WORD_LENGTH': config('ERGOLAB_MAX_WORD_LENGTH', default=67108864, cast=int),
    'SEARCH_BUDGET': config('ERGOLAB_SEARCH_BUDGET', default=2000000, cast=int),
    'GAP_SEARCH_LIMIT': config('ERGOLAB_GAP_SEARCH_LIMIT', default=64, cast=int),
    'ARTIFACT_DIR': config('ERGOLAB_ARTIFACT_DIR', default=str(BASE_DIR / 'artifacts')),
}


# Logging
# Logs go to stderr only; artifacts never carry log output.

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        name: {
            'handlers': ['console'],
            'level': config('ERGOLAB_LOG_LEVEL', default='INFO'),
            'propagate': False,
        }
        for name in (
            'core', 'words', 'shiftspace', 'gluing', 'measures',
            'splicer', 'cocycle', 'boweneye', 'cli',
        )
    },
}


# Default primary key field type

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'
