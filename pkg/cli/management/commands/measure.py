import argparse
from fractions import Fraction

from django.conf import settings

from cli.base import ErgolabCommand, Outcome, read_word, verdict
from cli.serializers import EmpiricalParams, KappaCheckParams, ProfileParams, RhoParams
from core.exceptions import IllegalWord, InvalidParameters
from measures.empirical import empirical_measure, integrate, periodic_measure
from measures.metric import (
    MetricTruncation,
    accumulation_profile,
    integral_spread,
    kappa_controlled_certify,
    rho_distance,
)
from shiftspace.language import periodic_point_legal
from shiftspace.subshifts import PaperShift
from words.codec import to_compact


class Command(ErgolabCommand):
    help = 'Empirical measures, truncated weak* distances and kappa-control certificates'
    actions = {
        'empirical': EmpiricalParams,
        'rho': RhoParams,
        'profile': ProfileParams,
        'kappa-check': KappaCheckParams,
    }

    def arguments_empirical(self, parser):
        parser.add_argument('--word', default=argparse.SUPPRESS, help='compact word or @file')
        parser.add_argument('--n', type=int, default=argparse.SUPPRESS)
        parser.add_argument('--depth', type=int, default=argparse.SUPPRESS)

    def arguments_rho(self, parser):
        self.arguments_empirical(parser)
        parser.add_argument('--other', default=argparse.SUPPRESS, help='second word, compact or @file')
        parser.add_argument('--other-n', dest='other_n', type=int, default=argparse.SUPPRESS)
        parser.add_argument('--K', type=int, default=argparse.SUPPRESS)

    def arguments_profile(self, parser):
        parser.add_argument('--word', default=argparse.SUPPRESS, help='compact word or @file')
        parser.add_argument('--checkpoints', nargs='+', type=int, default=argparse.SUPPRESS)
        parser.add_argument('--depth', type=int, default=argparse.SUPPRESS)
        parser.add_argument('--K', type=int, default=argparse.SUPPRESS)

    def arguments_kappa_check(self, parser):
        parser.add_argument('--blocks', nargs='+', default=argparse.SUPPRESS, help='periodic blocks')

    def _depth(self, run, trunc=None):
        depth = run.params.get('depth') or settings.ERGOLAB['MEASURE_DEPTH']
        if trunc is not None and run.params.get('depth') is None:
            depth = max(depth, trunc.max_length)
        return depth

    def handle_empirical(self, run):
        word = read_word(run.params['word'])
        mu = empirical_measure(word, run.params['n'], self._depth(run), run.shift.alphabet)
        results = mu.to_dict()
        results['max_marginal_defect'] = mu.max_marginal_defect
        rows = [(entry['word'], entry['freq']) for entry in results['entries']]
        return Outcome(results, ('word', 'freq'), rows)

    def handle_rho(self, run):
        params = run.params
        trunc = MetricTruncation(params['K'], run.shift.alphabet)
        depth = self._depth(run, trunc)
        mu = empirical_measure(read_word(params['word']), params['n'], depth, trunc.alphabet)
        other_n = params.get('other_n') or params['n']
        nu = empirical_measure(read_word(params['other']), other_n, depth, trunc.alphabet)
        value, tail = rho_distance(mu, nu, trunc)
        results = {'value': value, 'tail': tail, 'n': params['n'], 'other_n': other_n, 'truncation': trunc.describe()}
        return Outcome(results)

    def handle_profile(self, run):
        trunc = MetricTruncation(run.params['K'], run.shift.alphabet)
        word = read_word(run.params['word'])
        profile = accumulation_profile(word, run.params['checkpoints'], self._depth(run, trunc), trunc)
        results = profile.to_dict()
        results['truncation'] = trunc.describe()
        return Outcome(results, ('checkpoint_i', 'checkpoint_j', 'value', 'tail'), profile.rows())

    def handle_kappa_check(self, run):
        if not isinstance(run.shift, PaperShift):
            raise InvalidParameters('kappa-check needs the kappa gap family (--spec paper)')
        f = run.observable
        depth = max(f.window, settings.ERGOLAB['MEASURE_DEPTH'])
        measures = []
        for text in run.params['blocks']:
            block = read_word(text)
            if len(block) and not periodic_point_legal(run.shift, block, 0):
                raise IllegalWord('block does not repeat legally', block=to_compact(block))
            measures.append(periodic_measure(block, depth, run.shift.alphabet))
        exact = f.exact is not None
        kappa = run.shift.kappa
        certified = kappa_controlled_certify(f, measures, kappa)
        spread = integral_spread(f, measures)
        oscillation = max(f.exact) - min(f.exact) if exact else f.oscillation
        integrals = [integrate(f, mu, exact=exact) for mu in measures]
        results = {
            'kappa': str(kappa),
            'spread': str(spread) if isinstance(spread, Fraction) else spread,
            'oscillation': str(oscillation) if isinstance(oscillation, Fraction) else oscillation,
            'threshold': str(kappa * oscillation) if exact else float(kappa) * oscillation,
            'certified': certified,
            'integrals': [
                {'block': to_compact(read_word(text)), 'integral': str(value) if exact else value}
                for text, value in zip(run.params['blocks'], integrals)
            ],
        }
        rows = [(item['block'], item['integral']) for item in results['integrals']]
        return Outcome(results, ('block', 'integral'), rows, verdict(certified))
