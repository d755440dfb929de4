"""
Serialization of words: compact strings and JSON integer arrays.

Compact strings use ``m`` for -1, ``p`` for +1 (``1`` is accepted on input),
digits for 0 and 2..9 and ``a``..``e`` for 10..14.
"""

import json

from core.exceptions import InvalidParameters

from .sequences import Word

_ENCODE = {-1: 'm', 0: '0', 1: 'p'}
_ENCODE.update({value: str(value) for value in range(2, 10)})
_ENCODE.update({10 + i: letter for i, letter in enumerate('abcde')})
_DECODE = {char: value for value, char in _ENCODE.items()}
_DECODE['1'] = 1


def to_compact(word):
    return ''.join(_ENCODE[s] for s in word)


def from_compact(text):
    text = text.strip()
    try:
        return Word([_DECODE[char] for char in text])
    except KeyError as exc:
        raise InvalidParameters(
            f'unknown symbol {exc.args[0]!r} in compact word', text=text[:64]
        ) from None


def to_json(word):
    return json.dumps(list(word.symbols))


def from_json(payload):
    values = json.loads(payload) if isinstance(payload, str) else payload
    if not isinstance(values, list) or not all(isinstance(v, int) for v in values):
        raise InvalidParameters('a JSON word must be an array of integers')
    return Word(values)


def parse_word(value):
    """Accept a compact string, a JSON integer array or an existing word"""
    if isinstance(value, Word):
        return value
    if isinstance(value, (list, tuple)):
        return from_json(list(value))
    text = str(value).strip()
    if text.startswith('['):
        return from_json(text)
    return from_compact(text)
