"""
Artifact files written by every command.

JSON artifacts carry a fixed envelope (schema version, tool, config hash,
seed, config, results) and are written with sorted keys, so the same
configuration and seed always produce the same bytes. CSV artifacts start
with ``# key=value`` provenance lines followed by an RFC 4180 table with LF
line endings.
"""

import csv
import hashlib
import json
import logging
from fractions import Fraction
from pathlib import Path

import numpy as np
from django.conf import settings

from words.codec import to_compact
from words.sequences import Word

logger = logging.getLogger(__name__)


def _jsonable(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Word):
        return to_compact(value)
    raise TypeError(f'{type(value).__name__} is not JSON serializable')


def canonical_json(data):
    return json.dumps(data, sort_keys=True, separators=(',', ':'), allow_nan=False, default=_jsonable)


def config_hash(command, action, config):
    """sha256 of the canonical command, action and validated config"""
    payload = canonical_json({'command': command, 'action': action, 'config': config})
    return hashlib.sha256(payload.encode('utf-8')).hexdigest()


def tool_info():
    return {'name': settings.ERGOLAB['TOOL_NAME'], 'version': settings.ERGOLAB['TOOL_VERSION']}


def envelope(command, action, config, results):
    return {
        'schema_version': settings.ERGOLAB['SCHEMA_VERSION'],
        'tool': tool_info(),
        'command': command,
        'action': action,
        'config_hash': config_hash(command, action, config),
        'seed': config['seed'],
        'config': config,
        'results': results,
    }


def default_path(command, action, fmt):
    return Path(settings.ERGOLAB['ARTIFACT_DIR']) / f'{command}-{action}.{fmt}'


def dumps(payload):
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False, default=_jsonable) + '\n'


def write_json(path, payload):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8', newline='\n') as handle:
        handle.write(dumps(payload))
    logger.info('wrote %s', path)
    return path


def flatten(results, prefix=''):
    """(field, value) rows for results without a natural table"""
    rows = []
    for key in sorted(results):
        value = results[key]
        name = f'{prefix}{key}'
        if isinstance(value, dict):
            rows.extend(flatten(value, f'{name}.'))
        elif isinstance(value, (list, tuple)):
            rows.append((name, canonical_json(value)))
        else:
            rows.append((name, _cell(value)))
    return rows


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, (Fraction, Word, np.generic)):
        return _jsonable(value)
    return value


def write_csv(path, payload, header, rows):
    """Provenance lines from the envelope, then the table"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8', newline='') as handle:
        for key in ('schema_version', 'command', 'action', 'config_hash', 'seed'):
            handle.write(f'# {key}={payload[key]}\n')
        handle.write(f"# tool={payload['tool']['name']} {payload['tool']['version']}\n")
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(header)
        writer.writerows([_cell(value) for value in row] for row in rows)
    logger.info('wrote %s', path)
    return path


def read_csv(path):
    """(provenance dict, header, rows) from a CSV artifact"""
    provenance, lines = {}, []
    with Path(path).open(encoding='utf-8', newline='') as handle:
        for line in handle:
            if line.startswith('# '):
                key, _, value = line[2:].rstrip('\n').partition('=')
                provenance[key] = value
            else:
                lines.append(line)
    table = list(csv.reader(lines))
    return provenance, table[0], table[1:]


def error_payload(exc):
    return {'schema_version': settings.ERGOLAB['SCHEMA_VERSION'], 'error': exc.as_dict()}
