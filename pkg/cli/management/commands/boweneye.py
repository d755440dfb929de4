import argparse

from boweneye.sojourn import (
    EyeParams,
    accumulation_endpoints,
    cycle_extremes,
    segment_coverage_check,
    sojourn_sequence,
    time_average_weights,
)
from cli.base import ErgolabCommand, Outcome, verdict
from cli.serializers import CoverageParams, EyeParamsSerializer, WeightsParams


def eye(params):
    p = EyeParams.from_ratios(params['lam'], params['sigma'])
    trace = sojourn_sequence(p, params['s0'], params['K'], params['transit'])
    return p, trace


def endpoints(p):
    mu1, mu2 = accumulation_endpoints(p)
    return {'mu1': list(mu1), 'mu2': list(mu2)}


class Command(ErgolabCommand):
    help = 'Sojourn times and time averages near an attracting heteroclinic cycle'
    actions = {
        'trace': EyeParamsSerializer,
        'weights': WeightsParams,
        'coverage': CoverageParams,
    }

    def arguments_trace(self, parser):
        parser.add_argument('--lam', type=float, default=argparse.SUPPRESS)
        parser.add_argument('--sigma', type=float, default=argparse.SUPPRESS)
        parser.add_argument('--s0', type=float, default=argparse.SUPPRESS)
        parser.add_argument('--K', type=int, default=argparse.SUPPRESS, help='number of A-B cycles')
        parser.add_argument('--transit', type=float, default=argparse.SUPPRESS)

    def arguments_weights(self, parser):
        self.arguments_trace(parser)
        parser.add_argument('--t', nargs='+', type=float, default=argparse.SUPPRESS)

    def arguments_coverage(self, parser):
        self.arguments_trace(parser)
        parser.add_argument('--grid', type=int, default=argparse.SUPPRESS)
        parser.add_argument('--eps', type=float, default=argparse.SUPPRESS)
        parser.add_argument('--samples', type=int, default=argparse.SUPPRESS)
        parser.add_argument('--fit-cycle', dest='fit_cycle', type=int, default=argparse.SUPPRESS)

    def handle_trace(self, run):
        p, trace = eye(run.params)
        rows = trace.rows()
        results = {
            'params': p.to_dict(),
            'endpoints': endpoints(p),
            'total': trace.total,
            'cycles': trace.cycles,
            'sojourns': [
                {'k': k, 'saddle': saddle, 'duration': duration, 'cumulative': cumulative}
                for k, saddle, duration, cumulative in rows
            ],
        }
        return Outcome(results, ('k', 'saddle', 'duration', 'cumulative'), rows)

    def handle_weights(self, run):
        p, trace = eye(run.params)
        rows = [(t, *time_average_weights(trace, t)) for t in run.params['t']]
        results = {
            'params': p.to_dict(),
            'endpoints': endpoints(p),
            'total': trace.total,
            'points': [{'t': t, 'w_a': w_a, 'w_b': w_b} for t, w_a, w_b in rows],
        }
        return Outcome(results, ('t', 'w_a', 'w_b'), rows)

    def handle_coverage(self, run):
        params = run.params
        p, trace = eye(params)
        coverage = segment_coverage_check(
            p, params['s0'], params['K'], params['grid'], params['eps'],
            samples_per_sojourn=params['samples'], transit=params['transit'],
        )
        extremes = cycle_extremes(p, trace, params['fit_cycle'])
        passed = coverage.all_passed and extremes.bounded()
        results = {
            'params': p.to_dict(),
            'endpoints': endpoints(p),
            'coverage': coverage.to_dict(),
            'extremes': extremes.to_dict(),
            'passed': passed,
        }
        rows = [(point['c'], point['distance'], point['hit']) for point in results['coverage']['points']]
        return Outcome(results, ('c', 'distance', 'hit'), rows, verdict(passed))
