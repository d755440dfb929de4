"""
Test-specific Django settings for ergolab
"""

from .settings import *
import tempfile

# Test database - use in-memory SQLite for speed
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': ':memory:',
    }
}


# Disable migrations during tests for speed
class DisableMigrations:
    def __contains__(self, item):
        return True

    def __getitem__(self, item):
        return None


MIGRATION_MODULES = DisableMigrations()

# Keep test output quiet
for _logger in LOGGING['loggers'].values():
    _logger['level'] = 'WARNING'

# Artifacts from command tests land in a throwaway directory
ERGOLAB = {
    **ERGOLAB,
    'ARTIFACT_DIR': tempfile.mkdtemp(prefix='ergolab-test-'),
    'THREADS': 1,
}

# Test-specific settings
TEST_RUNNER = 'django.test.runner.DiscoverRunner'
