import argparse
import hashlib
from pathlib import Path

from django.conf import settings

from cli.base import ErgolabCommand, Outcome, read_json, read_word, verdict
from cli.serializers import PlanParams, ProgramParams
from core.exceptions import InvalidParameters
from shiftspace.oracles import literal_legal
from shiftspace.subshifts import PaperShift, build_subshift
from splicer.program import (
    OscillationSpec,
    SpliceProgram,
    build_point,
    oscillation_hypothesis_margin,
    plan_oscillation,
    verify_oscillation,
)
from words.codec import to_compact


def load_program(value):
    data = read_json(value)
    if not isinstance(data, dict) or 'segments' not in data:
        raise InvalidParameters('not a splice program')
    program = SpliceProgram.from_dict(data)
    if program.osc is None:
        raise InvalidParameters('splice program carries no oscillation targets')
    return program


class Command(ErgolabCommand):
    help = 'Plan, build and verify points whose Birkhoff averages oscillate'
    actions = {
        'plan': PlanParams,
        'build': ProgramParams,
        'verify': ProgramParams,
    }

    def arguments_plan(self, parser):
        parser.add_argument('--alpha', type=float, default=argparse.SUPPRESS)
        parser.add_argument('--beta', type=float, default=argparse.SUPPRESS)
        parser.add_argument('--tau', type=float, default=argparse.SUPPRESS)
        parser.add_argument('--checkpoints', type=int, default=argparse.SUPPRESS)
        parser.add_argument('--growth', type=float, default=argparse.SUPPRESS)
        parser.add_argument('--blocks', nargs=2, metavar=('LOW', 'HIGH'), default=argparse.SUPPRESS)
        parser.add_argument('--base-reps', dest='base_reps', type=int, default=argparse.SUPPRESS)

    def arguments_build(self, parser):
        parser.add_argument('--program', default=argparse.SUPPRESS, help='plan artifact or program JSON')
        parser.add_argument('--word-out', dest='word_out', default=argparse.SUPPRESS)

    def arguments_verify(self, parser):
        parser.add_argument('--program', default=argparse.SUPPRESS, help='plan artifact or program JSON')
        parser.add_argument('--word', default=argparse.SUPPRESS, help='@file with the built word')

    def handle_plan(self, run):
        params = run.params
        osc = OscillationSpec(
            f=run.observable,
            alpha=params['alpha'],
            beta=params['beta'],
            tau=params['tau'],
            num_checkpoints=params['checkpoints'],
            growth=params['growth'],
        )
        program = plan_oscillation(run.shift, osc, params['blocks'], params['base_reps'])
        results = program.to_dict()
        if isinstance(run.shift, PaperShift):
            results['hypothesis_margin'] = oscillation_hypothesis_margin(osc, run.shift.kappa)
        rows = [
            (k, checkpoint, target, predicted, margin, check.lhs, check.bound)
            for k, (checkpoint, target, predicted, margin, check) in enumerate(zip(
                program.checkpoints, program.targets, program.predicted,
                program.margins, program.bound_checks,
            ))
        ]
        header = ('k', 'checkpoint', 'target', 'predicted', 'margin', 'bound_lhs', 'bound_rhs')
        return Outcome(results, header, rows, verdict(program.certified))

    def handle_build(self, run):
        program = load_program(run.params['program'])
        word = build_point(program.shift, program)
        text = to_compact(word)
        path = Path(run.params.get('word_out') or Path(settings.ERGOLAB['ARTIFACT_DIR']) / 'splice-build.word')
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + '\n', encoding='utf-8')
        results = {
            'length': len(word),
            'sha256': hashlib.sha256(text.encode('ascii')).hexdigest(),
            'prefix': text[:64],
            'legal': True,
        }
        return Outcome(results)

    def handle_verify(self, run):
        program = load_program(run.params['program'])
        shift = build_subshift(program.shift)
        if run.params.get('word'):
            word = read_word(run.params['word'])
        else:
            word = build_point(shift, program)
        if len(word) < program.length:
            raise InvalidParameters('word is shorter than the program', length=len(word), needed=program.length)
        report = verify_oscillation(word, program.osc, program.checkpoints)
        legal = bool(shift.is_legal(word)) and literal_legal(shift, word.symbols)
        results = report.to_dict()
        results['legal'] = legal
        results['length'] = len(word)
        rows = list(zip(report.checkpoints, report.averages, report.passed))
        return Outcome(results, ('checkpoint', 'average', 'passed'), rows, verdict(report.all_passed and legal))
