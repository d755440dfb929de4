"""
Shared machinery for the ergolab management commands.

Each command declares its actions; every action gets its own argparse
subparser carrying the common experiment flags plus the action's own. A run
merges the optional TOML config with the flags, validates the result,
dispatches to ``handle_<action>`` and writes the artifact. Domain errors are
reported as JSON on stderr and mapped to exit statuses.
"""

import argparse
import json
import logging
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from django.conf import settings
from django.core.management.base import BaseCommand
from rest_framework import serializers

from core.exceptions import AcceptanceFailure, CapExceeded, ErgolabError, InvalidParameters
from shiftspace.language import random_legal_word
from shiftspace.subshifts import build_subshift
from words.codec import parse_word

from . import artifacts
from .models import ExperimentRun
from .serializers import build_observable, validate_config, validate_params

logger = logging.getLogger(__name__)

SECTIONS = ('spec', 'observable', 'budgets', 'output', 'params')

# flag dest -> (config section, key)
SECTION_FLAGS = {
    'spec_type': ('spec', 'type'),
    'kappa': ('spec', 'kappa'),
    'alphabet': ('spec', 'alphabet'),
    'min_run': ('spec', 'min_run'),
    'forbidden': ('spec', 'forbidden'),
    'observable_kind': ('observable', 'kind'),
    'observable_word': ('observable', 'word'),
    'observable_path': ('observable', 'path'),
    'enum_cap': ('budgets', 'enum_cap'),
    'v_max': ('budgets', 'v_max'),
    'f_budget': ('budgets', 'f_budget'),
    'g_budget': ('budgets', 'g_budget'),
    'out': ('output', 'path'),
    'format': ('output', 'format'),
}


def read_text(value):
    """``@path`` reads a file, anything else is taken literally"""
    if isinstance(value, str) and value.startswith('@'):
        path = Path(value[1:])
        if not path.is_file():
            raise InvalidParameters('input file not found', path=str(path))
        return path.read_text(encoding='utf-8')
    return value


def read_word(value):
    return parse_word(read_text(value))


def read_json(value):
    """JSON from ``@path`` or inline text; an artifact envelope yields its results"""
    text = read_text(value if str(value).lstrip().startswith(('{', '@')) else f'@{value}')
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidParameters('input is not valid JSON', error=str(exc)) from None
    if isinstance(data, dict) and 'schema_version' in data and 'results' in data:
        return data['results']
    return data


def load_config_file(path):
    if not path:
        return {}
    try:
        with open(path, 'rb') as handle:
            data = tomllib.load(handle)
    except FileNotFoundError:
        raise InvalidParameters('config file not found', path=str(path)) from None
    except tomllib.TOMLDecodeError as exc:
        raise InvalidParameters('config file is not valid TOML', error=str(exc)) from None
    unknown = sorted(set(data) - set(SECTIONS) - {'seed'})
    if unknown:
        raise InvalidParameters('unknown config sections', unknown=unknown)
    return data


@dataclass
class Outcome:
    """What an action hands back for the artifact"""
    results: dict
    header: tuple = None
    rows: list = None
    verdict: str = 'ok'
    error: ErgolabError = None


@dataclass
class Run:
    """A validated invocation"""
    command: str
    action: str
    config: dict
    params: dict
    threads: int
    output: dict = field(default_factory=dict)
    artifact: str = ''

    @cached_property
    def shift(self):
        return build_subshift(self.config['spec'])

    @cached_property
    def observable(self):
        return build_observable(self.config['observable'], self.shift.alphabet)

    @property
    def seed(self):
        return self.config['seed']

    @property
    def budgets(self):
        return self.config['budgets']

    def rng(self):
        return np.random.default_rng(self.seed)

    def word(self, key='word', length=None):
        """The word given as a parameter, or a seeded random legal word"""
        if self.params.get(key):
            return read_word(self.params[key])
        if length is None:
            raise InvalidParameters(f'{key} is required')
        return random_legal_word(self.shift, length, self.rng())

    def check_enum_cap(self, n, name='n'):
        cap = self.budgets.get('enum_cap')
        if cap is not None and n > cap:
            raise CapExceeded(f'{name} = {n} is beyond the enum_cap budget', cap=cap, **{name: n})


class ErgolabCommand(BaseCommand):
    """
    Base class: subclasses set ``actions`` and implement ``handle_<action>``.
    A command with ``subcommands = False`` has a single action and no subparser.
    """
    actions = {}
    subcommands = True
    requires_system_checks = []

    def add_arguments(self, parser):
        if not self.subcommands:
            (action,) = self.actions
            parser.set_defaults(action=action)
            self.add_common_arguments(parser)
            getattr(self, f'arguments_{action}')(parser)
            return
        subparsers = parser.add_subparsers(dest='action', required=True, metavar='action')
        for action, params_class in self.actions.items():
            sub = subparsers.add_parser(action, help=(params_class.__doc__ or '').strip() or None)
            self.add_common_arguments(sub)
            getattr(self, f'arguments_{action.replace("-", "_")}')(sub)

    def add_common_arguments(self, parser):
        group = parser.add_argument_group('experiment')
        group.add_argument('--config', help='TOML experiment config; flags override its values')
        group.add_argument(
            '--spec', dest='spec_type', choices=['paper', 'full', 'sgap', 'sft'],
            default=argparse.SUPPRESS,
        )
        group.add_argument('--kappa', default=argparse.SUPPRESS, help='exact fraction, e.g. 1/4')
        group.add_argument('--alphabet', type=int, default=argparse.SUPPRESS)
        group.add_argument('--min-run', dest='min_run', type=int, default=argparse.SUPPRESS)
        group.add_argument('--forbidden', nargs='+', default=argparse.SUPPRESS)
        group.add_argument(
            '--observable', dest='observable_kind', choices=['coordinate', 'indicator', 'table'],
            default=argparse.SUPPRESS,
        )
        group.add_argument('--observable-word', dest='observable_word', default=argparse.SUPPRESS)
        group.add_argument('--observable-path', dest='observable_path', default=argparse.SUPPRESS)
        group.add_argument('--seed', type=int, default=argparse.SUPPRESS)
        group.add_argument('--enum-cap', dest='enum_cap', type=int, default=argparse.SUPPRESS)
        group.add_argument('--v-max', dest='v_max', type=int, default=argparse.SUPPRESS)
        group.add_argument('--f-budget', dest='f_budget', type=int, default=argparse.SUPPRESS)
        group.add_argument('--g-budget', dest='g_budget', type=int, default=argparse.SUPPRESS)
        output = parser.add_argument_group('output')
        output.add_argument('--out', default=argparse.SUPPRESS)
        output.add_argument('--format', choices=['json', 'csv'], default=argparse.SUPPRESS)
        output.add_argument('--threads', type=int, help='defaults to ERGOLAB_THREADS')
        output.add_argument('--record', action='store_true', help='add a row to the run ledger')
        output.add_argument('--replay', help='re-run the config of an artifact and compare results')

    def collect_config(self, options):
        data = load_config_file(options.get('config'))
        config = {section: dict(data.get(section, {})) for section in SECTIONS}
        if 'seed' in data:
            config['seed'] = data['seed']
        for dest, (section, key) in SECTION_FLAGS.items():
            if dest in options:
                config[section][key] = options[dest]
        for name in self.actions[options['action']]().fields:
            if name in options:
                config['params'][name] = options[name]
        if 'seed' in options:
            config['seed'] = options['seed']
        return config

    def replayed_config(self, options, config):
        """Config of a recorded artifact; only output settings come from flags"""
        path = Path(options['replay'])
        if not path.is_file():
            raise InvalidParameters('replay artifact not found', path=str(path))
        try:
            recorded = json.loads(path.read_text(encoding='utf-8'))
        except ValueError:
            raise InvalidParameters('replay needs a JSON artifact', path=str(path)) from None
        if (recorded.get('command'), recorded.get('action')) != (self.command_name, options['action']):
            raise InvalidParameters(
                'artifact was written by another action',
                command=recorded.get('command'), action=recorded.get('action'),
            )
        replay = dict(recorded['config'])
        replay['output'] = config['output']
        return replay, recorded

    @property
    def command_name(self):
        return self.__module__.rsplit('.', 1)[-1]

    def handle(self, *args, **options):
        action = options['action']
        record = options.get('record')
        run = None
        try:
            config = self.collect_config(options)
            recorded = None
            if options.get('replay'):
                config, recorded = self.replayed_config(options, config)
            validated = validate_config(config)
            params = validate_params(self.actions[action], validated['params'])
            validated['params'] = params
            output = validated.pop('output')
            threads = max(1, options.get('threads') or settings.ERGOLAB['THREADS'])
            run = Run(self.command_name, action, validated, params, threads, output)
            logger.info('%s %s: seed %d, %d threads', run.command, action, run.seed, threads)
            outcome = getattr(self, f'handle_{action.replace("-", "_")}')(run)
            path = run.artifact = self.write_artifact(run, outcome)
            if recorded is not None:
                self.compare_replay(recorded, outcome)
            if outcome.error is not None:
                raise outcome.error
        except serializers.ValidationError as exc:
            self.fail(InvalidParameters('configuration failed validation', errors=exc.detail), run, options, record)
        except ErgolabError as exc:
            self.fail(exc, run, options, record)
        else:
            if record:
                self.record(run, 0, path, outcome.verdict)
            self.stdout.write(str(path))

    def write_artifact(self, run, outcome):
        payload = artifacts.envelope(run.command, run.action, run.config, outcome.results)
        fmt = run.output['format']
        path = run.output.get('path') or artifacts.default_path(run.command, run.action, fmt)
        if fmt == 'csv':
            header, rows = outcome.header, outcome.rows
            if header is None:
                header, rows = ('field', 'value'), artifacts.flatten(outcome.results)
            return artifacts.write_csv(path, payload, header, rows)
        return artifacts.write_json(path, payload)

    def compare_replay(self, recorded, outcome):
        fresh = json.loads(artifacts.canonical_json(outcome.results))
        if fresh != recorded.get('results'):
            raise AcceptanceFailure('replay does not reproduce the recorded results')

    def fail(self, exc, run, options, record):
        logger.error('%s: %s', exc.code, exc.message)
        self.stderr.write(json.dumps(artifacts.error_payload(exc), sort_keys=True), style_func=lambda text: text)
        if record and run is not None:
            verdict = 'failed' if isinstance(exc, AcceptanceFailure) else 'error'
            self.record(run, exc.exit_code, run.artifact, verdict, exc.code)
        sys.exit(exc.exit_code)

    def record(self, run, exit_status, path, verdict, error_code=''):
        ExperimentRun.objects.create(
            command=run.command,
            action=run.action,
            config_hash=artifacts.config_hash(run.command, run.action, run.config),
            seed=run.seed,
            exit_status=exit_status,
            artifact_path=str(path),
            verdict=verdict,
            error_code=error_code,
        )


def verdict(passed):
    return 'passed' if passed else 'failed'
