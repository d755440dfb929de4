import argparse

from cli.base import ErgolabCommand, Outcome, read_json, verdict
from cli.serializers import LyapunovParams, PerturbCheckParams
from cocycle.products import (
    CocycleSpec,
    lyapunov_estimate,
    lyapunov_trace,
    perturb,
    random_cocycle,
    scalar_cocycle,
)
from words.observables import birkhoff_average

IDENTITY_TOLERANCE = 1e-9


class Command(ErgolabCommand):
    help = 'Lyapunov estimates of locally constant matrix cocycles'
    actions = {
        'lyapunov': LyapunovParams,
        'perturb-check': PerturbCheckParams,
    }

    def _cocycle_arguments(self, parser):
        parser.add_argument('--cocycle', default=argparse.SUPPRESS, help='cocycle JSON file')
        parser.add_argument('--dim', type=int, default=argparse.SUPPRESS)
        parser.add_argument('--word', default=argparse.SUPPRESS, help='compact word or @file; seeded if absent')

    def arguments_lyapunov(self, parser):
        self._cocycle_arguments(parser)
        parser.add_argument('--n-lo', dest='n_lo', type=int, default=argparse.SUPPRESS)
        parser.add_argument('--n-hi', dest='n_hi', type=int, default=argparse.SUPPRESS)
        parser.add_argument('--norm', choices=['spectral', 'frobenius'], default=argparse.SUPPRESS)

    def arguments_perturb_check(self, parser):
        self._cocycle_arguments(parser)
        parser.add_argument('--n', type=int, default=argparse.SUPPRESS)
        parser.add_argument('--k', type=int, default=argparse.SUPPRESS)

    def _load(self, run):
        if run.params.get('cocycle'):
            return CocycleSpec.from_json(read_json(run.params['cocycle']), run.shift.alphabet)
        return None

    def handle_lyapunov(self, run):
        params = run.params
        A = self._load(run) or scalar_cocycle(run.observable, params['dim'])
        word = run.word(length=params['n_hi'] + A.window - 1)
        trace = lyapunov_trace(A, word, params['n_lo'], params['n_hi'], params['norm'])
        results = trace.to_dict()
        results.update({
            'dim': A.dim,
            'window': A.window,
            'n_lo': params['n_lo'],
            'n_hi': params['n_hi'],
            'gap': trace.hi - trace.lo,
            'final': trace.values[-1][1],
        })
        return Outcome(results, ('n', 'chi'), trace.rows())

    def handle_perturb_check(self, run):
        params = run.params
        f = run.observable
        A = self._load(run) or random_cocycle(run.shift.alphabet, params['dim'], 1, run.rng())
        n, k = params['n'], params['k']
        perturbed = perturb(A, f, k)
        word = run.word(length=n + perturbed.window - 1)
        base = lyapunov_estimate(A, word, n)
        average = birkhoff_average(f, word, n)
        chi = lyapunov_estimate(perturbed, word, n)
        error = abs(chi - (base + average / k))
        results = {
            'n': n,
            'k': k,
            'chi': chi,
            'chi_base': base,
            'birkhoff_average': average,
            'error': error,
            'tolerance': IDENTITY_TOLERANCE,
            'passed': error <= IDENTITY_TOLERANCE,
        }
        return Outcome(results, verdict=verdict(results['passed']))
