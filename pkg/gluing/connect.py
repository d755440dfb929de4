"""
Connecting gaps between legal words.

``minimal_gap`` asks for the smallest zero-run ``v`` making ``w 0^v u``
legal. Only the junction contexts of ``w`` and ``u`` matter, so the
exhaustive verifier groups words by context and weights each class by the
number of words sharing it.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from django.conf import settings

from core.exceptions import IllegalWord, InvalidParameters
from shiftspace.language import LanguageCounter, count_language, random_legal_word
from shiftspace.subshifts import build_subshift
from words.codec import to_compact
from words.sequences import Word

logger = logging.getLogger(__name__)


def default_v_max(shift, n):
    bound = shift.gap_bound(n)
    return bound if bound is not None else settings.ERGOLAB['GAP_SEARCH_LIMIT']


def _search_gap(shift, tail, head, v_max):
    closed = shift.junction_gap(tail, head)
    if closed is not None:
        return closed if closed <= v_max else None

    def legal(v):
        return shift.is_legal(tail + Word.zeros(v) + head)

    if legal(0):
        return 0
    if v_max < 1:
        return None
    if not shift.gap_monotone:
        return next((v for v in range(1, v_max + 1) if legal(v)), None)
    if not legal(v_max):
        return None
    lo, hi = 1, v_max
    while lo < hi:
        mid = (lo + hi) // 2
        if legal(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


_context_gap = lru_cache(maxsize=65536)(_search_gap)


def context_gap(shift, tail, head, v_max):
    """minimal_gap on junction contexts that are already known; not memoized"""
    return _search_gap(shift, tail, head, v_max)


def minimal_gap(shift, w, u, v_max=None):
    """Smallest v in [0, v_max] with w 0^v u legal, or None"""
    shift = build_subshift(shift)
    for name, word in (('w', w), ('u', u)):
        if not shift.is_legal(word):
            raise IllegalWord(f'{name} is not in the language', word=to_compact(word))
    if v_max is None:
        v_max = default_v_max(shift, len(u))
    if v_max < 0:
        raise InvalidParameters('v_max must be non-negative', v_max=v_max)
    return _context_gap(shift, shift.tail_context(w), shift.head_context(u), v_max)


def gap_is_monotone_from(shift, w, u, start, upto):
    """w 0^v u stays legal for every v in [start, upto]"""
    return all(shift.is_legal(w + Word.zeros(v) + u) for v in range(start, upto + 1))


@dataclass(frozen=True)
class GlueWitness:
    w: Word
    u: Word
    gap: int

    def reverify(self, shift):
        """Legal at the gap and, for a positive gap, illegal one below it"""
        if not shift.is_legal(self.w + Word.zeros(self.gap) + self.u):
            return False
        if self.gap >= 1 and shift.is_legal(self.w + Word.zeros(self.gap - 1) + self.u):
            return False
        return True

    def to_dict(self):
        return {'w': to_compact(self.w), 'u': to_compact(self.u), 'gap': self.gap}


@dataclass
class LengthStats:
    """Per-|u| summary of minimal gaps"""
    n: int
    pairs: int = 0
    max_gap: int = 0
    bound: int = None

    @property
    def max_ratio(self):
        return Fraction(self.max_gap, self.n)

    @property
    def gluing_ratio(self):
        return Fraction(self.max_gap, self.max_gap + self.n)

    def to_dict(self):
        return {
            'n': self.n,
            'pairs': self.pairs,
            'max_gap': self.max_gap,
            'bound': self.bound,
            'max_ratio': str(self.max_ratio),
            'max_ratio_float': float(self.max_ratio),
            'gluing_ratio': str(self.gluing_ratio),
        }


@dataclass
class GlueReport:
    mode: str
    n_max: int
    w_max: int
    seed: int = 0
    pairs_tested: int = 0
    max_min_gap: int = 0
    per_length: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def to_dict(self):
        return {
            'mode': self.mode,
            'n_max': self.n_max,
            'w_max': self.w_max,
            'seed': self.seed,
            'pairs_tested': self.pairs_tested,
            'max_min_gap': self.max_min_gap,
            'per_length': [self.per_length[n].to_dict() for n in sorted(self.per_length)],
            'witnesses': [w.to_dict() for w in self.witnesses],
            'failures': self.failures,
            'passed': self.passed,
        }

    def rows(self):
        """CSV rows (n, pairs, max_gap, bound, max_ratio, gluing_ratio)"""
        return [
            (s.n, s.pairs, s.max_gap, s.bound, float(s.max_ratio), float(s.gluing_ratio))
            for s in (self.per_length[n] for n in sorted(self.per_length))
        ]


def tail_classes(shift, w_max):
    """{tail context: (multiplicity, first word)} over legal words of length 1..w_max"""
    classes = {}
    for length in range(1, w_max + 1):
        for word in count_language(shift, length, listing=True).words:
            tail = shift.tail_context(word)
            count, first = classes.get(tail, (0, word))
            classes[tail] = (count + 1, first)
    return classes


def _first_completion(shift, counter, prefix, state, remaining):
    """Lexicographically first legal word of the given length extending ``prefix``"""
    out = list(prefix)
    while remaining:
        for symbol in shift.alphabet:
            following = shift.step(state, symbol)
            if following is not None and counter.completions(following, remaining - 1):
                out.append(symbol)
                state = following
                remaining -= 1
                break
    return Word(out)


def head_classes(shift, n):
    """
    {head context: (multiplicity, first word)} over legal words of length n.

    Prefixes are grown until the head context can no longer change; every
    completion of such a prefix shares its head.
    """
    counter = LanguageCounter(shift)
    classes = {}
    symbols = shift.alphabet.symbols

    def visit(prefix, state):
        word = Word(prefix)
        if len(prefix) == n or shift.head_closed(word):
            remaining = n - len(prefix)
            multiplicity = counter.completions(state, remaining)
            if not multiplicity:
                return
            head = shift.head_context(word)
            if head in classes:
                count, first = classes[head]
                classes[head] = (count + multiplicity, first)
            else:
                first = _first_completion(shift, counter, prefix, state, remaining)
                classes[head] = (multiplicity, first)
            return
        for symbol in symbols:
            following = shift.step(state, symbol)
            if following is not None:
                prefix.append(symbol)
                visit(prefix, following)
                prefix.pop()

    visit([], shift.initial_state())
    return classes


def _length_stats(shift, n, tails):
    bound = shift.gap_bound(n)
    v_max = default_v_max(shift, n)
    stats = LengthStats(n=n, bound=bound)
    witness, failures = None, []
    for head, (u_count, u_first) in head_classes(shift, n).items():
        for tail, (w_count, w_first) in tails.items():
            gap = _context_gap(shift, tail, head, v_max)
            stats.pairs += w_count * u_count
            if gap is None or (bound is not None and gap > bound):
                failures.append({
                    'w': to_compact(w_first), 'u': to_compact(u_first),
                    'gap': gap, 'bound': bound,
                })
                continue
            candidate = GlueWitness(w_first, u_first, gap)
            if witness is None or gap > witness.gap or (
                gap == witness.gap and _key(candidate) < _key(witness)
            ):
                witness = candidate
            stats.max_gap = max(stats.max_gap, gap)
    return stats, witness, failures


def _key(witness):
    return (len(witness.w), witness.w.symbols, witness.u.symbols)


def verify_m_transitivity(shift, n_max, sample=0, seed=0, w_max=None, threads=None):
    """
    Check that every tested legal pair (w, u) with |u| <= n_max connects
    through a zero-run no longer than the gap bound of |u|.

    ``sample = 0`` runs exhaustively over context classes; otherwise
    ``sample`` random pairs are drawn from a generator seeded with ``seed``.
    """
    shift = build_subshift(shift)
    if n_max < 1:
        raise InvalidParameters('n_max must be at least 1', n_max=n_max)
    w_max = min(n_max, 8) if w_max is None else w_max
    if sample:
        return _sampled(shift, n_max, sample, seed, w_max)
    if w_max > settings.ERGOLAB['ENUM_CAP']:
        raise InvalidParameters('w_max is beyond the listing cap', w_max=w_max)
    tails = tail_classes(shift, w_max)
    lengths = range(1, n_max + 1)
    threads = max(1, int(threads or settings.ERGOLAB['THREADS']))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda n: _length_stats(shift, n, tails), lengths))
    else:
        results = [_length_stats(shift, n, tails) for n in lengths]
    report = GlueReport(mode='exhaustive', n_max=n_max, w_max=w_max, seed=seed)
    for stats, witness, failures in results:
        report.per_length[stats.n] = stats
        report.pairs_tested += stats.pairs
        report.max_min_gap = max(report.max_min_gap, stats.max_gap)
        if witness is not None:
            report.witnesses.append(witness)
        report.failures.extend(failures)
    logger.info(
        'verified %d pairs up to |u| = %d: max gap %d, %d failures',
        report.pairs_tested, n_max, report.max_min_gap, len(report.failures),
    )
    return report


def _sampled(shift, n_max, sample, seed, w_max):
    rng = np.random.default_rng(seed)
    report = GlueReport(mode='sampled', n_max=n_max, w_max=w_max, seed=seed)
    best = {}
    for _ in range(sample):
        w = random_legal_word(shift, int(rng.integers(1, w_max + 1)), rng)
        n = int(rng.integers(1, n_max + 1))
        u = random_legal_word(shift, n, rng)
        bound = shift.gap_bound(n)
        gap = minimal_gap(shift, w, u, default_v_max(shift, n))
        stats = report.per_length.setdefault(n, LengthStats(n=n, bound=bound))
        stats.pairs += 1
        report.pairs_tested += 1
        if gap is None or (bound is not None and gap > bound):
            report.failures.append({'w': to_compact(w), 'u': to_compact(u), 'gap': gap, 'bound': bound})
            continue
        stats.max_gap = max(stats.max_gap, gap)
        report.max_min_gap = max(report.max_min_gap, gap)
        if n not in best or gap > best[n].gap:
            best[n] = GlueWitness(w, u, gap)
    report.witnesses = [best[n] for n in sorted(best)]
    return report
