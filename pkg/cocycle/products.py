"""
Locally constant matrix cocycles over a subshift.

``A_n(x) = A(T^{n-1}x) ... A(Tx) A(x)``. Products are accumulated with a
per-step renormalization: after each multiplication the largest entry is
factored out into a running log-sum, so exponents stay finite for orbit
segments of any length.
"""

import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from core.exceptions import AlphabetMismatch, InvalidParameters, SingularMatrix, WindowOverrun
from words.codec import parse_word, to_compact
from words.sequences import Alphabet

logger = logging.getLogger(__name__)

MAX_DIM = 8
MIN_ABS_DET = 1e-9


def spectral_norm(matrix):
    return float(np.linalg.norm(matrix, 2))


def frobenius_norm(matrix):
    return float(np.linalg.norm(matrix, 'fro'))


NORMS = {'spectral': spectral_norm, 'frobenius': frobenius_norm}


def _norm(kind):
    try:
        return NORMS[kind]
    except KeyError:
        raise InvalidParameters(f'unknown norm kind {kind!r}', choices=sorted(NORMS)) from None


@dataclass(frozen=True, eq=False)
class CocycleSpec:
    """GL(d)-valued function of the first ``window`` symbols"""
    alphabet: Alphabet
    dim: int
    window: int
    matrices: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.dim <= MAX_DIM:
            raise InvalidParameters(f'dimension must lie in 1..{MAX_DIM}', dim=self.dim)
        if self.window < 1:
            raise InvalidParameters('window must be a positive integer', window=self.window)
        size = self.alphabet.size ** self.window
        matrices = np.asarray(self.matrices, dtype=np.float64)
        if matrices.shape != (size, self.dim, self.dim):
            raise InvalidParameters(
                'cocycle table must hold one d x d matrix per word',
                expected=[size, self.dim, self.dim], received=list(matrices.shape),
            )
        if not np.isfinite(matrices).all():
            raise InvalidParameters('matrix entries must be finite')
        dets = np.abs(np.linalg.det(matrices))
        if (dets < MIN_ABS_DET).any():
            word = self.alphabet.words(self.window)[int(np.flatnonzero(dets < MIN_ABS_DET)[0])]
            raise SingularMatrix('cocycle matrix is not invertible', word=to_compact(word))
        matrices = matrices.copy()
        matrices.setflags(write=False)
        object.__setattr__(self, 'matrices', matrices)

    @classmethod
    def constant(cls, matrix, alphabet=None):
        alphabet = alphabet or Alphabet()
        matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
        return cls(alphabet, matrix.shape[0], 1, np.broadcast_to(matrix, (alphabet.size,) + matrix.shape))

    @classmethod
    def from_json(cls, payload, alphabet=None):
        """Load ``{dim, window, entries: [{word, matrix}]}`` with row-major matrices"""
        data = json.loads(payload) if isinstance(payload, str) else payload
        try:
            dim = int(data['dim'])
            window = int(data['window'])
            entries = data['entries']
        except (KeyError, TypeError, ValueError):
            raise InvalidParameters('cocycle JSON needs dim, window and entries') from None
        if alphabet is None:
            alphabet = Alphabet(data.get('alphabet', (-1, 0, 1)))
        keyed = {}
        for entry in entries:
            matrix = np.asarray(entry['matrix'], dtype=np.float64)
            if matrix.size != dim * dim:
                raise InvalidParameters('matrix has the wrong size', word=entry['word'], dim=dim)
            keyed[parse_word(entry['word']).symbols] = matrix.reshape(dim, dim)
        matrices = []
        for word in alphabet.words(window):
            if word.symbols not in keyed:
                raise InvalidParameters('cocycle table is not total', missing=to_compact(word))
            matrices.append(keyed[word.symbols])
        return cls(alphabet, dim, window, np.stack(matrices))

    def to_dict(self):
        return {
            'alphabet': self.alphabet.descriptor(),
            'dim': self.dim,
            'window': self.window,
            'entries': [
                {'word': to_compact(word), 'matrix': matrix.reshape(-1).tolist()}
                for word, matrix in zip(self.alphabet.words(self.window), self.matrices)
            ],
        }

    @property
    def norm(self):
        """Largest absolute matrix entry"""
        return float(np.abs(self.matrices).max())

    def widen(self, window):
        """The same cocycle read through a longer window"""
        if window < self.window:
            raise InvalidParameters('cannot shrink a cocycle window')
        spread = self.alphabet.size ** (window - self.window)
        index = np.arange(self.alphabet.size ** window) // spread
        return CocycleSpec(self.alphabet, self.dim, window, self.matrices[index])

    def matrix(self, word):
        word = parse_word(word)
        if len(word) != self.window:
            raise InvalidParameters('word length must equal the window', window=self.window)
        codes = self.alphabet.codes(word)
        return self.matrices[int(self.alphabet.encode(codes, self.window)[0])]


def _indices(A, word, start, n):
    if start < 0 or n < 1:
        raise InvalidParameters('need start >= 0 and n >= 1', start=start, n=n)
    if start + n + A.window - 1 > len(word):
        raise WindowOverrun(
            'cocycle windows run past the end of the word',
            needed=start + n + A.window - 1, length=len(word),
        )
    codes = A.alphabet.codes(word[start:start + n + A.window - 1])
    return A.alphabet.encode(codes, A.window)


def _products(A, word, start, n):
    """Yield (log_scale, P) with A_k(T^start w) = exp(log_scale) P for k = 1..n"""
    product = np.eye(A.dim)
    log_scale = 0.0
    for index in _indices(A, word, start, n):
        product = A.matrices[index] @ product
        scale = float(np.abs(product).max())
        product /= scale
        log_scale += math.log(scale)
        yield log_scale, product


def log_norm(A, word, n, start=0, kind='spectral'):
    """log ||A_n(T^start w)||"""
    norm = _norm(kind)
    for log_scale, product in _products(A, word, start, n):
        pass
    return log_scale + math.log(norm(product))


def lyapunov_estimate(A, word, n, kind='spectral'):
    """chi_n = (1/n) log ||A_n(w)||"""
    return log_norm(A, word, n, kind=kind) / n


@dataclass
class LyapunovTrace:
    norm_kind: str
    values: list = field(default_factory=list)

    @property
    def lo(self):
        return min(chi for _, chi in self.values)

    @property
    def hi(self):
        return max(chi for _, chi in self.values)

    def rows(self):
        """CSV rows (n, chi_n)"""
        return list(self.values)

    def to_dict(self):
        return {'norm_kind': self.norm_kind, 'lo': self.lo, 'hi': self.hi, 'count': len(self.values)}


def lyapunov_trace(A, word, n_lo, n_hi, kind='spectral'):
    """chi_n for every n in [n_lo, n_hi] from a single pass"""
    if n_lo < 1 or n_hi < n_lo:
        raise InvalidParameters('need 1 <= N0 <= N1', N0=n_lo, N1=n_hi)
    norm = _norm(kind)
    trace = LyapunovTrace(norm_kind=kind)
    for n, (log_scale, product) in enumerate(_products(A, word, 0, n_hi), start=1):
        if n >= n_lo:
            trace.values.append((n, (log_scale + math.log(norm(product))) / n))
    return trace


def lyapunov_irregularity_gap(A, word, n_lo, n_hi, kind='spectral'):
    """(min, max) of chi_n over n in [N0, N1]"""
    trace = lyapunov_trace(A, word, n_lo, n_hi, kind)
    logger.debug('lyapunov gap over [%d, %d]: %.6f .. %.6f', n_lo, n_hi, trace.lo, trace.hi)
    return trace.lo, trace.hi


def random_cocycle(alphabet, dim, window, rng):
    """Strictly diagonally dominant table, hence invertible"""
    size = alphabet.size ** window
    matrices = rng.uniform(-1.0, 1.0, (size, dim, dim)) + (dim + 1) * np.eye(dim)
    return CocycleSpec(alphabet, dim, window, matrices)


def scalar_cocycle(f, dim=1):
    """A^f(v) = exp(f(v)) I_d"""
    matrices = np.exp(f.table)[:, None, None] * np.eye(dim)
    return CocycleSpec(f.alphabet, dim, f.window, matrices)


def perturb(A, f, k):
    """A_(k)(v) = exp(f(v)/k) A(v), both tables read through the wider window"""
    if not isinstance(k, int) or k < 1:
        raise InvalidParameters('k must be a positive integer', k=k)
    if A.alphabet != f.alphabet:
        raise AlphabetMismatch('cocycle and observable use different alphabets')
    window = max(A.window, f.window)
    A = A.widen(window)
    f = f.widen(window)
    return CocycleSpec(A.alphabet, A.dim, window, np.exp(f.table / k)[:, None, None] * A.matrices)
