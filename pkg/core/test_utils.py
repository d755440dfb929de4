"""
Base test classes and utility functions for all test suites
"""

import io
import json
from pathlib import Path

import factory.random
from django.conf import settings
from django.core.management import call_command
from django.test import SimpleTestCase, TestCase

from shiftspace.oracles import brute_legal, literal_legal
from shiftspace.subshifts import build_subshift

FACTORY_SEED = 20240601


class BaseTestCase(SimpleTestCase):
    """Base test class with seeded factories and domain assertions"""

    def setUp(self):
        """Reseed factory_boy so generated data is reproducible"""
        factory.random.reseed_random(FACTORY_SEED)

    def assertLegal(self, shift, word, brute=False):
        """Assert legality under the vectorized scan and an independent oracle"""
        shift = build_subshift(shift)
        self.assertTrue(shift.is_legal(word), f'{word!r} should be legal in {shift!r}')
        oracle = brute_legal(shift, word) if brute else literal_legal(shift, word.symbols)
        self.assertTrue(oracle, f'oracle rejects {word!r} in {shift!r}')

    def assertIllegal(self, shift, word):
        shift = build_subshift(shift)
        self.assertFalse(shift.is_legal(word), f'{word!r} should be illegal in {shift!r}')
        self.assertFalse(literal_legal(shift, word.symbols))

    def assertWordEqual(self, first, second):
        self.assertEqual(tuple(first), tuple(second))


class CommandTestMixin:
    """Helpers for driving management commands and reading their artifacts"""

    def run_command(self, *args):
        """Run a management command, returning (stdout, stderr)"""
        stdout, stderr = io.StringIO(), io.StringIO()
        call_command(*args, stdout=stdout, stderr=stderr)
        return stdout.getvalue(), stderr.getvalue()

    def run_failing_command(self, expected_exit, *args):
        """Run a command expected to exit non-zero; return the parsed error JSON"""
        stdout, stderr = io.StringIO(), io.StringIO()
        with self.assertRaises(SystemExit) as ctx:
            call_command(*args, stdout=stdout, stderr=stderr)
        self.assertEqual(ctx.exception.code, expected_exit)
        payload = json.loads(stderr.getvalue().strip().splitlines()[-1])
        self.assertEqual(payload['schema_version'], settings.ERGOLAB['SCHEMA_VERSION'])
        return payload['error']

    def artifact_path(self, name):
        return str(Path(settings.ERGOLAB['ARTIFACT_DIR']) / name)

    def load_artifact(self, path):
        """Load a JSON artifact and check its common envelope"""
        data = json.loads(Path(path).read_text())
        self.assertEqual(data['schema_version'], settings.ERGOLAB['SCHEMA_VERSION'])
        self.assertEqual(data['tool']['name'], settings.ERGOLAB['TOOL_NAME'])
        self.assertEqual(data['tool']['version'], settings.ERGOLAB['TOOL_VERSION'])
        self.assertEqual(len(data['config_hash']), 64)
        self.assertIn('seed', data)
        self.assertIn('results', data)
        return data


class CommandTestCase(CommandTestMixin, BaseTestCase):
    """Base class for command tests that do not touch the run ledger"""


class LedgerTestCase(CommandTestMixin, TestCase):
    """Base class for tests that read or write the run ledger"""

    def setUp(self):
        factory.random.reseed_random(FACTORY_SEED)
