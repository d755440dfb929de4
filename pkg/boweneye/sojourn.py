"""
Sojourn-time model of a planar flow with an attracting heteroclinic cycle.

An orbit spiralling towards the cycle alternates between the neighbourhoods
of two saddles A and B. Leaving A after time s it stays near B for
``lambda * s``; leaving B after time s it stays near A for ``sigma * s``.
With ``lambda * sigma > 1`` the sojourns grow geometrically and the time
averages swing between two limit measures without converging.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from core.exceptions import InvalidParameters

logger = logging.getLogger(__name__)

SADDLES = ('A', 'B')


@dataclass(frozen=True)
class EyeParams:
    """Eigenvalue magnitudes at the two saddles"""
    alpha_plus: float
    alpha_minus: float
    beta_plus: float
    beta_minus: float

    def __post_init__(self):
        values = (self.alpha_plus, self.alpha_minus, self.beta_plus, self.beta_minus)
        if not all(np.isfinite(v) and v > 0 for v in values):
            raise InvalidParameters('eigenvalue magnitudes must be positive', values=list(values))
        if not self.alpha_minus * self.beta_minus > self.alpha_plus * self.beta_plus:
            raise InvalidParameters(
                'the cycle must be dissipative (lambda * sigma > 1)',
                lam=self.lam, sigma=self.sigma,
            )

    @classmethod
    def from_ratios(cls, lam, sigma):
        return cls(alpha_plus=1.0, alpha_minus=float(lam), beta_plus=1.0, beta_minus=float(sigma))

    @property
    def lam(self):
        return self.alpha_minus / self.beta_plus

    @property
    def sigma(self):
        return self.beta_minus / self.alpha_plus

    def to_dict(self):
        return {
            'alpha_plus': self.alpha_plus,
            'alpha_minus': self.alpha_minus,
            'beta_plus': self.beta_plus,
            'beta_minus': self.beta_minus,
            'lambda': self.lam,
            'sigma': self.sigma,
        }


@dataclass(frozen=True)
class SojournTrace:
    saddles: tuple
    durations: np.ndarray = field(repr=False)
    transit: float = 0.0

    @cached_property
    def starts(self):
        before = np.concatenate(([0.0], np.cumsum(self.durations)[:-1]))
        return before + self.transit * np.arange(len(self.durations))

    @cached_property
    def ends(self):
        return self.starts + self.durations

    @cached_property
    def a_time_before(self):
        """Time spent near A before each sojourn starts"""
        a_durations = np.where(np.asarray(self.saddles) == 'A', self.durations, 0.0)
        return np.concatenate(([0.0], np.cumsum(a_durations)[:-1]))

    @property
    def total(self):
        return float(self.ends[-1])

    @property
    def cycles(self):
        return len(self.durations) // 2

    def rows(self):
        """CSV rows (k, saddle, duration, cumulative)"""
        return [
            (i // 2 + 1, saddle, float(duration), float(end))
            for i, (saddle, duration, end) in enumerate(zip(self.saddles, self.durations, self.ends))
        ]


def sojourn_sequence(p, s0, K, transit=0.0):
    """2K alternating sojourns A, B, A, ... starting with s0 near A"""
    if not s0 > 0:
        raise InvalidParameters('s0 must be positive', s0=s0)
    if K < 1:
        raise InvalidParameters('K must be at least 1', K=K)
    if transit < 0:
        raise InvalidParameters('transit time must be non-negative', transit=transit)
    durations = np.empty(2 * K)
    durations[0::2] = s0 * (p.lam * p.sigma) ** np.arange(K)
    durations[1::2] = p.lam * durations[0::2]
    if not np.isfinite(durations).all():
        raise InvalidParameters('sojourn durations overflow; reduce K', K=K)
    durations.setflags(write=False)
    return SojournTrace(SADDLES * K, durations, float(transit))


def _a_time(trace, t):
    """Time near A up to each t (array)"""
    t = np.asarray(t, dtype=np.float64)
    index = np.clip(np.searchsorted(trace.starts, t, side='right') - 1, 0, None)
    inside = np.clip(t - trace.starts[index], 0.0, trace.durations[index])
    in_a = np.asarray(trace.saddles)[index] == 'A'
    return trace.a_time_before[index] + np.where(in_a, inside, 0.0)


def _check_times(trace, t):
    t = np.asarray(t, dtype=np.float64)
    if not ((t > 0) & (t <= trace.total)).all():
        raise InvalidParameters('t must lie in (0, total trace time]', total=trace.total)
    return t


def time_average_weights(trace, t):
    """
    (w_A, w_B): fractions of [0, t] spent near A and near B. With zero
    transit time w_B = 1 - w_A; otherwise the travel share is in neither.
    """
    t = _check_times(trace, t)
    w_a = float(_a_time(trace, t) / t)
    if trace.transit == 0:
        return w_a, 1.0 - w_a
    passed = np.searchsorted(trace.starts, t, side='right') - 1
    travel = trace.transit * passed + max(0.0, min(trace.transit, float(t - trace.ends[passed])))
    return w_a, 1.0 - w_a - travel / float(t)


def accumulation_endpoints(p):
    """mu1 = (sigma, 1)/(1 + sigma) and mu2 = (1, lambda)/(1 + lambda) as (w_A, w_B)"""
    mu1 = (p.sigma / (1 + p.sigma), 1 / (1 + p.sigma))
    mu2 = (1 / (1 + p.lam), p.lam / (1 + p.lam))
    return mu1, mu2


@dataclass
class CycleExtremes:
    rows: list
    fit_cycle: int
    constant: float

    def bounded(self, tolerance=1e-9):
        """Errors from the fit cycle on stay below C (lambda sigma)^-k"""
        return all(
            max(err_hi, err_lo) <= bound * (1 + tolerance) + 1e-15
            for k, _, _, err_hi, err_lo, bound in self.rows if k >= self.fit_cycle
        )

    def to_dict(self):
        return {
            'fit_cycle': self.fit_cycle,
            'constant': self.constant,
            'bounded': self.bounded(),
            'cycles': [
                {'k': k, 'max_w_a': hi, 'min_w_a': lo, 'err_max': err_hi, 'err_min': err_lo, 'bound': bound}
                for k, hi, lo, err_hi, err_lo, bound in self.rows
            ],
        }


def cycle_extremes(p, trace, fit_cycle=5):
    """
    Per cycle k, the extremes of w_A (at the ends of the A and B sojourns)
    and their distance to the limits, with C fitted at ``fit_cycle``.
    """
    if not 1 <= fit_cycle <= trace.cycles:
        raise InvalidParameters('fit cycle outside the trace', fit_cycle=fit_cycle, cycles=trace.cycles)
    mu1, mu2 = accumulation_endpoints(p)
    growth = p.lam * p.sigma
    ends = trace.ends
    highs = _a_time(trace, ends[0::2]) / ends[0::2]
    lows = _a_time(trace, ends[1::2]) / ends[1::2]
    errors = [(abs(hi - mu1[0]), abs(lo - mu2[0])) for hi, lo in zip(highs, lows)]
    constant = max(errors[fit_cycle - 1]) * growth ** fit_cycle
    rows = [
        (k, float(hi), float(lo), float(err_hi), float(err_lo), constant * growth ** -k)
        for k, (hi, lo, (err_hi, err_lo)) in enumerate(zip(highs, lows, errors), start=1)
    ]
    return CycleExtremes(rows, fit_cycle, constant)


@dataclass
class CoverageReport:
    grid: list
    distances: list
    eps: float

    @property
    def hits(self):
        return [d <= self.eps for d in self.distances]

    @property
    def all_passed(self):
        return all(self.hits)

    @property
    def misses(self):
        return [c for c, hit in zip(self.grid, self.hits) if not hit]

    def to_dict(self):
        return {
            'eps': self.eps,
            'all_passed': self.all_passed,
            'points': [
                {'c': c, 'distance': d, 'hit': hit}
                for c, d, hit in zip(self.grid, self.distances, self.hits)
            ],
            'misses': self.misses,
        }


def segment_coverage_check(p, s0, K, grid, eps, samples_per_sojourn=256, transit=0.0):
    """Does w_A(t) come within eps of every grid point of [mu2, mu1] in the last two cycles?"""
    if grid < 1:
        raise InvalidParameters('grid must be at least 1', grid=grid)
    if eps < 0:
        raise InvalidParameters('eps must be non-negative', eps=eps)
    if samples_per_sojourn < 1:
        raise InvalidParameters('need at least one sample per sojourn')
    trace = sojourn_sequence(p, s0, K, transit)
    mu1, mu2 = accumulation_endpoints(p)
    if grid == 1:
        points = np.array([mu1[0]])
    else:
        points = np.linspace(mu2[0], mu1[0], grid)
    last = slice(max(0, len(trace.durations) - 4), None)
    fractions = np.arange(1, samples_per_sojourn + 1) / samples_per_sojourn
    t = (trace.starts[last][:, None] + trace.durations[last][:, None] * fractions).reshape(-1)
    w_a = _a_time(trace, t) / t
    distances = np.abs(w_a[None, :] - points[:, None]).min(axis=1)
    report = CoverageReport([float(c) for c in points], [float(d) for d in distances], float(eps))
    logger.info('coverage over %d grid points: %d misses', grid, len(report.misses))
    return report
