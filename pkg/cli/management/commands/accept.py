import argparse

from cli.acceptance import run_acceptance
from cli.base import ErgolabCommand, Outcome, verdict
from cli.serializers import AcceptParams
from core.exceptions import AcceptanceFailure


class Command(ErgolabCommand):
    help = 'Run the acceptance suite; exits 3 when a criterion fails'
    actions = {
        'run': AcceptParams,
    }
    subcommands = False

    def arguments_run(self, parser):
        parser.add_argument('--only', nargs='+', type=int, default=argparse.SUPPRESS, help='criterion numbers')

    def handle_run(self, run):
        report = run_acceptance(run.params['only'], seed=run.seed, threads=run.threads)
        error = None
        if not report.passed:
            error = AcceptanceFailure('acceptance criteria failed', failed=report.failed)
        return Outcome(report.to_dict(), ('number', 'name', 'passed'), report.rows(), verdict(report.passed), error)
