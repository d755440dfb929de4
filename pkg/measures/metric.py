"""
Truncated weak* metric and accumulation profiles.

The test-function family is the sequence of cylinder indicators in
length-lex order ([a] for every symbol, then every length-2 word, ...).
Truncating after K terms leaves an unexplored tail of at most 2^-K.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from core.exceptions import InsufficientDepth, InvalidParameters, NonPeriodicMeasure
from words.codec import to_compact
from words.sequences import Alphabet

from .empirical import empirical_measure, integrate

logger = logging.getLogger(__name__)

FAMILY = 'cylinder-indicators/length-lex'


class MetricTruncation:
    """The first K cylinders of the test-function family"""

    def __init__(self, K, alphabet=None):
        if K < 1:
            raise InvalidParameters('K must be at least 1', K=K)
        self.K = K
        self.alphabet = alphabet or Alphabet()
        self.cylinders = []
        for length in itertools.count(1):
            for word in self.alphabet.words(length):
                self.cylinders.append(word)
                if len(self.cylinders) == K:
                    break
            if len(self.cylinders) == K:
                break

    @property
    def max_length(self):
        return len(self.cylinders[-1])

    @property
    def tail(self):
        return 2.0 ** -self.K

    def describe(self):
        return {
            'family': FAMILY,
            'K': self.K,
            'cylinders': [to_compact(c) for c in self.cylinders],
            'tail': self.tail,
        }


def rho_distance(mu, nu, trunc):
    """(value, tail): sum of 2^-i |mu(C_i) - nu(C_i)| over the first K cylinders"""
    for measure in (mu, nu):
        if measure.depth < trunc.max_length:
            raise InsufficientDepth(
                'measure depth is below the longest truncated cylinder',
                depth=measure.depth, needed=trunc.max_length,
            )
        if measure.alphabet != trunc.alphabet:
            raise InvalidParameters('measure and truncation use different alphabets')
    value = 0.0
    for i, cylinder in enumerate(trunc.cylinders, start=1):
        delta = abs(mu.count(cylinder) / mu.sample_count - nu.count(cylinder) / nu.sample_count)
        value += delta * 2.0 ** -i
    return value, trunc.tail


def within(mu, nu, tau, trunc):
    """True when rho(mu, nu) < tau is certified despite the truncation"""
    value, tail = rho_distance(mu, nu, trunc)
    return value + tail < tau


@dataclass
class AccumulationProfile:
    checkpoints: list
    measures: list
    distances: list = field(default_factory=list)
    dispersion: float = 0.0
    tail: float = 0.0

    def rows(self):
        """CSV rows (checkpoint_i, checkpoint_j, value, tail)"""
        return [(self.checkpoints[i], self.checkpoints[j], value, self.tail) for i, j, value in self.distances]

    def to_dict(self):
        return {
            'checkpoints': self.checkpoints,
            'dispersion': self.dispersion,
            'tail': self.tail,
            'distances': [
                {'i': self.checkpoints[i], 'j': self.checkpoints[j], 'value': value}
                for i, j, value in self.distances
            ],
        }


def accumulation_profile(word, checkpoints, depth, trunc):
    """Measures at each checkpoint and their largest pairwise distance"""
    checkpoints = [int(c) for c in checkpoints]
    if not checkpoints:
        raise InvalidParameters('need at least one checkpoint')
    if any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise InvalidParameters('checkpoints must be strictly increasing')
    measures = [empirical_measure(word, n, depth, trunc.alphabet) for n in checkpoints]
    profile = AccumulationProfile(checkpoints=checkpoints, measures=measures, tail=trunc.tail)
    for i, j in itertools.combinations(range(len(measures)), 2):
        value, _ = rho_distance(measures[i], measures[j], trunc)
        profile.distances.append((i, j, value))
        profile.dispersion = max(profile.dispersion, value)
    logger.debug('profile over %d checkpoints: dispersion %.6f', len(checkpoints), profile.dispersion)
    return profile


def integral_spread(f, measures):
    """max - min of ∫f dmu over the measures, exact when the table is rational"""
    exact = f.exact is not None
    integrals = [integrate(f, mu, exact=exact) for mu in measures]
    return max(integrals) - min(integrals)


def kappa_controlled_certify(f, measures, kappa):
    """
    True certifies that f is kappa-controlled: the supplied invariant
    measures spread ∫f by more than kappa (sup f - inf f). False is
    inconclusive.
    """
    if not measures:
        raise InvalidParameters('need at least one measure')
    for mu in measures:
        if not mu.periodic:
            raise NonPeriodicMeasure('only full-period measures are invariant')
    spread = integral_spread(f, measures)
    if f.exact is not None and not isinstance(kappa, float):
        kappa = Fraction(kappa)
        oscillation = max(f.exact) - min(f.exact)
    else:
        spread = float(spread)
        kappa = float(kappa)
        oscillation = f.oscillation
    return spread > kappa * oscillation
