import argparse
import math

from cli.base import ErgolabCommand, Outcome
from cli.serializers import CountParams, EntropyParams
from shiftspace.language import count_language, entropy_estimate
from words.codec import to_compact


class Command(ErgolabCommand):
    help = 'Count the language of a subshift and estimate its entropy'
    actions = {
        'count': CountParams,
        'entropy': EntropyParams,
    }

    def arguments_count(self, parser):
        parser.add_argument('--n', type=int, default=argparse.SUPPRESS)
        parser.add_argument('--list', dest='listing', action='store_true', default=argparse.SUPPRESS)

    def arguments_entropy(self, parser):
        parser.add_argument('--n', type=int, default=argparse.SUPPRESS)
        parser.add_argument('--delta', type=float, default=argparse.SUPPRESS)
        parser.add_argument('--window', type=int, default=argparse.SUPPRESS)

    def handle_count(self, run):
        n, listing = run.params['n'], run.params['listing']
        if listing:
            run.check_enum_cap(n)
        result = count_language(run.shift, n, listing=listing, threads=run.threads)
        if listing:
            rows = [(i, to_compact(word)) for i, word in enumerate(result.words)]
            return Outcome(result.to_dict(), ('index', 'word'), rows)
        return Outcome(result.to_dict(), ('n', 'count'), [(result.n, result.count)])

    def handle_entropy(self, run):
        estimate = entropy_estimate(run.shift, **run.params)
        rows = [
            (n, count, ratio, log_growth if math.isfinite(log_growth) else None)
            for n, count, ratio, log_growth in estimate.rows
        ]
        results = estimate.to_dict()
        if not math.isfinite(results['log_growth']):
            results['log_growth'] = None
        results['growth'] = [
            {'n': n, 'count': count, 'ratio': ratio, 'log_growth': log_growth}
            for n, count, ratio, log_growth in rows
        ]
        return Outcome(results, ('n', 'count', 'ratio', 'log_growth'), rows)
