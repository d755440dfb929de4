import argparse

from cli.base import ErgolabCommand, Outcome, read_word, verdict
from cli.serializers import FalsifyParams, MinGapParams, VerifyParams
from gluing.connect import default_v_max, minimal_gap, verify_m_transitivity
from gluing.falsifier import app_falsifier, search_size
from words.codec import to_compact


class Command(ErgolabCommand):
    help = 'Connecting gaps, m-transitivity checks and approximate-product falsification'
    actions = {
        'min-gap': MinGapParams,
        'verify': VerifyParams,
        'app-falsify': FalsifyParams,
    }

    def arguments_min_gap(self, parser):
        parser.add_argument('--w', default=argparse.SUPPRESS, help='compact word or @file')
        parser.add_argument('--u', default=argparse.SUPPRESS, help='compact word or @file')

    def arguments_verify(self, parser):
        parser.add_argument('--n', type=int, default=argparse.SUPPRESS, help='largest |u|')
        parser.add_argument('--w-max', dest='w_max', type=int, default=argparse.SUPPRESS)
        parser.add_argument('--sample', type=int, default=argparse.SUPPRESS, help='0 runs exhaustively')

    def arguments_app_falsify(self, parser):
        parser.add_argument('--n', type=int, default=argparse.SUPPRESS)

    def handle_min_gap(self, run):
        w, u = read_word(run.params['w']), read_word(run.params['u'])
        v_max = run.budgets.get('v_max')
        if v_max is None:
            v_max = default_v_max(run.shift, len(u))
        gap = minimal_gap(run.shift, w, u, v_max)
        results = {
            'w': to_compact(w),
            'u': to_compact(u),
            'gap': gap,
            'bound': run.shift.gap_bound(len(u)),
            'v_max': v_max,
            'found': gap is not None,
        }
        return Outcome(results)

    def handle_verify(self, run):
        n, sample = run.params['n'], run.params['sample']
        w_max = run.params.get('w_max')
        if not sample:
            run.check_enum_cap(w_max if w_max is not None else min(n, 8), 'w_max')
        report = verify_m_transitivity(
            run.shift, n, sample=sample, seed=run.seed, w_max=w_max, threads=run.threads,
        )
        header = ('n', 'pairs', 'max_gap', 'bound', 'max_ratio', 'gluing_ratio')
        return Outcome(report.to_dict(), header, report.rows(), verdict(report.passed))

    def handle_app_falsify(self, run):
        n = run.params['n']
        f_budget = run.budgets.get('f_budget', 1)
        g_budget = run.budgets.get('g_budget', 1)
        witness = app_falsifier(run.shift, n, f_budget, g_budget, threads=run.threads)
        results = {
            'n': n,
            'f_budget': f_budget,
            'g_budget': g_budget,
            'search_size': search_size(n, f_budget, g_budget, run.shift.alphabet.size),
            'found': witness is not None,
            'witness': witness.to_dict() if witness else None,
        }
        return Outcome(results)
