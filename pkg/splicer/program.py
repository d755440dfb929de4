"""
Orbit splicing: long legal words whose Birkhoff averages swing between two
targets at prescribed checkpoints.

A program alternates runs of a high block and a low block, each glued to
what came before through the exact minimal zero-run. Every run is at least
``growth`` times the length of everything before it, then lengthened until
the average at its end reaches the scheduled target. Window sums are kept
per segment, in closed form over each periodic run, so the planned averages
are the averages the built word will show without the word being built.
"""

import logging
import math
from dataclasses import dataclass, field

from django.conf import settings

from core.exceptions import (
    IllegalWord,
    InfeasibleTargets,
    InvalidParameters,
    LegalityViolation,
)
from gluing.connect import context_gap, default_v_max
from shiftspace.language import periodic_point_legal
from shiftspace.subshifts import PaperShift, build_subshift
from words.codec import parse_word, to_compact
from words.observables import CylinderFunction, birkhoff_sums, irregularity_gap
from words.sequences import Word

logger = logging.getLogger(__name__)

BOUND_TOLERANCE = 1e-9


@dataclass(frozen=True)
class OscillationSpec:
    f: CylinderFunction
    alpha: float
    beta: float
    tau: float = 0.0
    num_checkpoints: int = 6
    growth: float = 10.0

    def __post_init__(self):
        if not self.alpha < self.beta:
            raise InvalidParameters('need alpha < beta', alpha=self.alpha, beta=self.beta)
        if self.tau < 0:
            raise InvalidParameters('tau must be non-negative', tau=self.tau)
        if self.num_checkpoints < 1:
            raise InvalidParameters('need at least one checkpoint')
        if self.growth <= 1:
            raise InvalidParameters('growth factor must exceed 1', growth=self.growth)

    @property
    def midpoint(self):
        return (self.alpha + self.beta) / 2

    def target(self, k):
        """Checkpoints alternate high, low, high, ..."""
        return self.beta if k % 2 == 0 else self.alpha

    def reached(self, k, average):
        if k % 2 == 0:
            return average >= self.beta - self.tau
        return average <= self.alpha + self.tau

    def margin(self, k, average):
        if k % 2 == 0:
            return average - (self.beta - self.tau)
        return (self.alpha + self.tau) - average

    def to_dict(self):
        return {
            'alpha': self.alpha,
            'beta': self.beta,
            'tau': self.tau,
            'num_checkpoints': self.num_checkpoints,
            'growth': self.growth,
            'observable': self.f.to_dict(),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            f=CylinderFunction.from_json(data['observable']),
            alpha=float(data['alpha']),
            beta=float(data['beta']),
            tau=float(data.get('tau', 0.0)),
            num_checkpoints=int(data.get('num_checkpoints', 6)),
            growth=float(data.get('growth', 10.0)),
        )


def oscillation_hypothesis_margin(osc, kappa):
    """(beta - alpha) - 2 kappa (sup f - inf f); must be positive on PaperShift"""
    return (osc.beta - osc.alpha) - 2 * float(kappa) * osc.f.oscillation


@dataclass(frozen=True)
class Segment:
    block: Word
    reps: int
    gap: int

    @property
    def length(self):
        return self.gap + self.reps * len(self.block)

    def word(self):
        return Word.zeros(self.gap) + self.block * self.reps

    def to_dict(self):
        return {'block': to_compact(self.block), 'reps': self.reps, 'gap': self.gap}

    @classmethod
    def from_dict(cls, data):
        return cls(parse_word(data['block']), int(data['reps']), int(data['gap']))


@dataclass(frozen=True)
class AveragingBound:
    """|avg over T windows - block average over n| <= ((T - n) / T) (B - A)"""
    checkpoint: int
    windows: int
    block_windows: int
    lhs: float
    bound: float

    @property
    def holds(self):
        return self.lhs <= self.bound + BOUND_TOLERANCE

    def to_dict(self):
        return {
            'checkpoint': self.checkpoint,
            'windows': self.windows,
            'block_windows': self.block_windows,
            'lhs': self.lhs,
            'bound': self.bound,
            'holds': self.holds,
        }


@dataclass
class SpliceProgram:
    shift: dict
    osc: OscillationSpec = None
    segments: list = field(default_factory=list)
    checkpoints: list = field(default_factory=list)
    predicted: list = field(default_factory=list)
    margins: list = field(default_factory=list)
    bound_checks: list = field(default_factory=list)

    @property
    def length(self):
        return self.checkpoints[-1] if self.checkpoints else 0

    @property
    def targets(self):
        return [self.osc.target(k) for k in range(len(self.checkpoints))]

    @property
    def margin(self):
        return min(self.margins) if self.margins else 0.0

    @property
    def certified(self):
        return all(m >= 0 for m in self.margins) and all(c.holds for c in self.bound_checks)

    def to_dict(self):
        return {
            'shift': self.shift,
            'oscillation': self.osc.to_dict() if self.osc else None,
            'segments': [s.to_dict() for s in self.segments],
            'checkpoints': self.checkpoints,
            'targets': self.targets if self.osc else [],
            'predicted': self.predicted,
            'margins': self.margins,
            'margin': self.margin,
            'bound_checks': [c.to_dict() for c in self.bound_checks],
            'certified': self.certified,
            'length': self.length,
        }

    @classmethod
    def from_dict(cls, data):
        osc = data.get('oscillation')
        return cls(
            shift=data['shift'],
            osc=OscillationSpec.from_dict(osc) if osc else None,
            segments=[Segment.from_dict(s) for s in data.get('segments', [])],
            checkpoints=[int(c) for c in data.get('checkpoints', [])],
            predicted=[float(p) for p in data.get('predicted', [])],
            margins=[float(m) for m in data.get('margins', [])],
            bound_checks=[
                AveragingBound(c['checkpoint'], c['windows'], c['block_windows'], c['lhs'], c['bound'])
                for c in data.get('bound_checks', [])
            ],
        )


def _periodic_sum(f, block, count):
    """Sum of f over the first ``count`` windows of block^∞"""
    if count <= 0:
        return 0.0
    period = len(block)
    cycle = f.values(block * (1 + math.ceil((f.window - 1) / period)), period)
    full, rest = divmod(count, period)
    return math.fsum((full * math.fsum(cycle), math.fsum(cycle[:rest])))


def _piece(block, reps, start, stop):
    """Symbols start:stop of block^reps without building the whole run"""
    period = len(block)
    first = start // period
    copies = min(reps, -(-stop // period)) - first
    offset = first * period
    return (block * copies)[start - offset:stop - offset]


def _window_sum(f, pieces):
    """Sum of f over every full window of u_1^r_1 u_2^r_2 ..."""
    width = f.window
    pieces = [(block, reps) for block, reps in pieces if reps > 0 and len(block)]
    parts = []
    for i, (block, reps) in enumerate(pieces):
        size = reps * len(block)
        parts.append(_periodic_sum(f, block, size - width + 1))
        if width == 1:
            continue
        # windows starting in the last width - 1 symbols run into later pieces
        edge = min(size, width - 1)
        crossing = [_piece(block, reps, size - edge, size)]
        need = width - 1
        for later, times in pieces[i + 1:]:
            if need <= 0:
                break
            take = min(need, times * len(later))
            crossing.append(_piece(later, times, 0, take))
            need -= take
        joined = Word.concat(crossing)
        count = len(joined) - width + 1
        if count > 0:
            parts.append(math.fsum(f.values(joined, count)))
    return math.fsum(parts)


def _block_average(f, block):
    """Average of f along the periodic point block^∞"""
    return _periodic_sum(f, block, len(block)) / len(block)


class _Planner:
    """Running state of a program under construction"""

    def __init__(self, shift, osc):
        self.shift = shift
        self.osc = osc
        self.f = osc.f
        self.window = osc.f.window
        self.max_length = settings.ERGOLAB['MAX_WORD_LENGTH']
        self.program = SpliceProgram(shift=shift.descriptor(), osc=osc)
        self.length = 0
        self.total = 0.0
        self.tail = Word.empty()
        self.edge = Word.empty()

    def trial(self, k, block, reps):
        """(gap, segment window sum, average at the segment end)"""
        size = reps * len(block)
        if k == 0:
            gap = 0
        else:
            head = self.shift.head_context(block * reps)
            gap = context_gap(self.shift, self.tail, head, default_v_max(self.shift, size))
            if gap is None:
                raise InfeasibleTargets('blocks cannot be glued within the gap search limit', checkpoint=k)
        count = len(self.edge) + gap + size - self.window + 1
        windows = self.length + gap + size - self.window + 1
        if count < 1 or windows < 1:
            return gap, 0.0, None
        piece = _window_sum(self.f, ((self.edge, 1), (Word.zeros(1), gap), (block, reps)))
        return gap, piece, math.fsum((self.total, piece)) / windows

    def fits(self, block, reps, gap):
        return self.length + gap + reps * len(block) <= self.max_length

    def out_of_reach(self, k, average):
        return InfeasibleTargets(
            'targets are out of reach within the word length budget',
            checkpoint=k, target=self.osc.target(k),
            best_average=average, max_length=self.max_length,
        )

    def choose_reps(self, k, block, reps):
        """Smallest passing repetition count found by doubling then bisection"""
        ceiling = (self.max_length - self.length) // len(block)
        failed, average = None, None
        while True:
            if reps > ceiling:
                raise self.out_of_reach(k, average)
            gap, _, average = self.trial(k, block, reps)
            if average is not None and self.osc.reached(k, average):
                break
            if reps == ceiling:
                raise self.out_of_reach(k, average)
            failed = reps
            reps = min(2 * reps, ceiling)
        if failed is not None:
            lo, hi = failed + 1, reps
            while lo < hi:
                mid = (lo + hi) // 2
                trial_gap, _, trial_average = self.trial(k, block, mid)
                if trial_average is not None and self.osc.reached(k, trial_average):
                    hi, gap, average = mid, trial_gap, trial_average
                else:
                    lo = mid + 1
            reps = hi
        if not self.fits(block, reps, gap):
            raise self.out_of_reach(k, average)
        return reps

    def commit(self, k, block, reps):
        gap, piece, average = self.trial(k, block, reps)
        run = block * reps
        added = Word.zeros(gap) + run
        self.program.segments.append(Segment(block, reps, gap))
        self.tail = self.shift.tail_context(self.tail + added)
        combined = self.edge + added
        self.edge = combined[max(0, len(combined) - (self.window - 1)):] if self.window > 1 else Word.empty()
        self.total = math.fsum((self.total, piece))
        self.length += len(added)
        windows = self.length - self.window + 1
        self.program.checkpoints.append(self.length)
        self.program.predicted.append(average)
        self.program.margins.append(self.osc.margin(k, average))
        inside = len(run) - self.window + 1
        if inside >= 1:
            block_average = _periodic_sum(self.f, block, inside) / inside
            bound = (windows - inside) / windows * self.f.oscillation
            self.program.bound_checks.append(
                AveragingBound(self.length, windows, inside, abs(average - block_average), bound)
            )
        logger.debug('checkpoint %d at %d: average %.6f (gap %d, reps %d)', k, self.length, average, gap, reps)


def plan_oscillation(shift, osc, blocks, base_reps=1):
    """Plan a program whose checkpoint averages alternate high and low"""
    shift = build_subshift(shift)
    p_lo, p_hi = (parse_word(b) for b in blocks)
    for name, block in (('p_lo', p_lo), ('p_hi', p_hi)):
        if len(block) == 0:
            raise InvalidParameters(f'{name} must be nonempty')
        if not periodic_point_legal(shift, block, 0):
            raise IllegalWord(f'{name} does not repeat legally', block=to_compact(block))
    a_lo, a_hi = _block_average(osc.f, p_lo), _block_average(osc.f, p_hi)
    if not a_lo < osc.alpha:
        raise InvalidParameters('low block average must lie below alpha', a_lo=a_lo, alpha=osc.alpha)
    if not a_hi > osc.beta:
        raise InvalidParameters('high block average must lie above beta', a_hi=a_hi, beta=osc.beta)
    if isinstance(shift, PaperShift) and oscillation_hypothesis_margin(osc, shift.kappa) <= 0:
        raise InvalidParameters(
            'beta - alpha must exceed 2 kappa (sup f - inf f)',
            margin=oscillation_hypothesis_margin(osc, shift.kappa),
        )
    planner = _Planner(shift, osc)
    for k in range(osc.num_checkpoints):
        block = p_hi if k % 2 == 0 else p_lo
        if k == 0:
            reps = max(base_reps, math.ceil(osc.f.window / len(block)))
        else:
            reps = max(1, math.ceil(osc.growth * planner.length / len(block)))
        reps = planner.choose_reps(k, block, reps)
        planner.commit(k, block, reps)
    program = planner.program
    logger.info(
        'planned %d checkpoints, length %d, margin %.6f',
        len(program.checkpoints), program.length, program.margin,
    )
    return program


def build_point(shift, program):
    """Concatenate the program and re-check legality"""
    shift = build_subshift(shift)
    word = Word.concat([segment.word() for segment in program.segments])
    if len(word) != program.length:
        raise LegalityViolation('built length disagrees with the program', length=len(word))
    if not shift.is_legal(word):
        raise LegalityViolation('built word is not in the language', length=len(word))
    return word


@dataclass
class OscillationReport:
    checkpoints: list
    averages: list
    passed: list
    lo: float
    hi: float

    @property
    def all_passed(self):
        return all(self.passed)

    @property
    def spread(self):
        return self.hi - self.lo

    def to_dict(self):
        return {
            'checkpoints': self.checkpoints,
            'averages': self.averages,
            'passed': self.passed,
            'all_passed': self.all_passed,
            'irregularity_gap': {'lo': self.lo, 'hi': self.hi, 'spread': self.spread},
        }


def verify_oscillation(word, osc, checkpoints):
    """Check each checkpoint average sits on its scheduled side of the midpoint"""
    if not checkpoints:
        raise InvalidParameters('need at least one checkpoint')
    checkpoints = [int(c) for c in checkpoints]
    if any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise InvalidParameters('checkpoints must be strictly increasing', checkpoints=checkpoints)
    if checkpoints[-1] > len(word):
        raise InvalidParameters('last checkpoint runs past the word', checkpoint=checkpoints[-1], length=len(word))
    points = [c - (osc.f.window - 1) for c in checkpoints]
    if points[0] < 1:
        raise InvalidParameters('first checkpoint is shorter than the observable window')
    sums = birkhoff_sums(osc.f, word, points[-1])
    averages = [float(sums[n - 1] / n) for n in points]
    passed = []
    for k, average in enumerate(averages):
        if k % 2 == 0:
            passed.append(average > osc.midpoint + osc.tau)
        else:
            passed.append(average < osc.midpoint - osc.tau)
    lo, hi = irregularity_gap(osc.f, word, points[0], points[-1])
    return OscillationReport(list(checkpoints), averages, passed, lo, hi)
