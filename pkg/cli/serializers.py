"""
Validation of experiment configurations.

A configuration is the merge of an optional TOML file and command-line
flags (flags win). Sections mirror the file layout: ``[spec]``,
``[observable]``, ``[budgets]``, ``[params]``, ``[output]`` and ``seed``.
"""

from fractions import Fraction
from pathlib import Path

from rest_framework import serializers

from core.exceptions import InvalidParameters
from shiftspace.subshifts import build_subshift
from words.observables import CylinderFunction

FRACTION_PATTERN = r'^\d+(/\d+)?$'


class SubshiftSerializer(serializers.Serializer):
    """Subshift descriptor; kappa only as an exact fraction string"""
    type = serializers.ChoiceField(choices=['paper', 'full', 'sgap', 'sft'], default='paper')
    kappa = serializers.RegexField(FRACTION_PATTERN, default='1/1')
    alphabet = serializers.IntegerField(min_value=1, max_value=16, default=3)
    min_run = serializers.IntegerField(min_value=1, default=2)
    forbidden = serializers.ListField(child=serializers.CharField(), default=list)

    def validate_kappa(self, value):
        try:
            kappa = Fraction(value)
        except ZeroDivisionError:
            raise serializers.ValidationError('kappa denominator must be positive') from None
        if kappa <= 0:
            raise serializers.ValidationError('kappa must be positive')
        return str(kappa)

    def validate(self, data):
        if data['type'] == 'sft' and not data['forbidden']:
            raise serializers.ValidationError({'forbidden': 'an sft needs at least one forbidden word'})
        return data


def subshift_descriptor(data):
    """The descriptor understood by build_subshift, keeping only relevant keys"""
    kind = data['type']
    if kind == 'paper':
        return {'type': kind, 'kappa': data['kappa']}
    if kind == 'full':
        return {'type': kind, 'alphabet': data['alphabet']}
    if kind == 'sgap':
        return {'type': kind, 'min_run': data['min_run']}
    return {'type': kind, 'forbidden': list(data['forbidden']), 'alphabet': data['alphabet']}


class ObservableSerializer(serializers.Serializer):
    kind = serializers.ChoiceField(choices=['coordinate', 'indicator', 'table'], default='coordinate')
    word = serializers.CharField(required=False)
    path = serializers.CharField(required=False)

    def validate(self, data):
        if data['kind'] == 'indicator' and not data.get('word'):
            raise serializers.ValidationError({'word': 'an indicator needs a cylinder word'})
        if data['kind'] == 'table':
            if not data.get('path'):
                raise serializers.ValidationError({'path': 'a table observable needs a JSON file'})
            if not Path(data['path']).is_file():
                raise serializers.ValidationError({'path': 'observable file not found'})
        return data


def build_observable(data, alphabet):
    if data['kind'] == 'coordinate':
        return CylinderFunction.coordinate(alphabet)
    if data['kind'] == 'indicator':
        return CylinderFunction.indicator(alphabet, data['word'])
    return CylinderFunction.from_json(Path(data['path']).read_text(), alphabet)


class BudgetsSerializer(serializers.Serializer):
    enum_cap = serializers.IntegerField(min_value=1, required=False)
    v_max = serializers.IntegerField(min_value=0, required=False)
    f_budget = serializers.IntegerField(min_value=0, required=False)
    g_budget = serializers.IntegerField(min_value=0, required=False)


class OutputSerializer(serializers.Serializer):
    path = serializers.CharField(required=False)
    format = serializers.ChoiceField(choices=['json', 'csv'], default='json')


class ExperimentConfigSerializer(serializers.Serializer):
    spec = SubshiftSerializer()
    observable = ObservableSerializer()
    budgets = BudgetsSerializer()
    output = OutputSerializer()
    params = serializers.DictField()
    seed = serializers.IntegerField(min_value=0, default=0)


# Per-action parameters

class CountParams(serializers.Serializer):
    n = serializers.IntegerField(min_value=0)
    listing = serializers.BooleanField(default=False)


class EntropyParams(serializers.Serializer):
    n = serializers.IntegerField(min_value=2)
    delta = serializers.FloatField(min_value=0, default=0.05)
    window = serializers.IntegerField(min_value=1, default=3)


class MinGapParams(serializers.Serializer):
    w = serializers.CharField()
    u = serializers.CharField()


class VerifyParams(serializers.Serializer):
    n = serializers.IntegerField(min_value=1)
    w_max = serializers.IntegerField(min_value=1, required=False)
    sample = serializers.IntegerField(min_value=0, default=0)


class FalsifyParams(serializers.Serializer):
    n = serializers.IntegerField(min_value=2)


class PlanParams(serializers.Serializer):
    alpha = serializers.FloatField()
    beta = serializers.FloatField()
    tau = serializers.FloatField(min_value=0, default=0.0)
    checkpoints = serializers.IntegerField(min_value=1, default=6)
    growth = serializers.FloatField(default=10.0)
    blocks = serializers.ListField(child=serializers.CharField(), min_length=2, max_length=2, default=['m', 'p'])
    base_reps = serializers.IntegerField(min_value=1, default=1)


class ProgramParams(serializers.Serializer):
    program = serializers.CharField()
    word = serializers.CharField(required=False)
    word_out = serializers.CharField(required=False)


class EmpiricalParams(serializers.Serializer):
    word = serializers.CharField()
    n = serializers.IntegerField(min_value=1)
    depth = serializers.IntegerField(min_value=1, required=False)


class RhoParams(EmpiricalParams):
    other = serializers.CharField()
    other_n = serializers.IntegerField(min_value=1, required=False)
    K = serializers.IntegerField(min_value=1, default=12)


class ProfileParams(serializers.Serializer):
    word = serializers.CharField()
    checkpoints = serializers.ListField(child=serializers.IntegerField(min_value=1), min_length=1)
    depth = serializers.IntegerField(min_value=1, required=False)
    K = serializers.IntegerField(min_value=1, default=12)


class KappaCheckParams(serializers.Serializer):
    blocks = serializers.ListField(child=serializers.CharField(), min_length=1)


class LyapunovParams(serializers.Serializer):
    cocycle = serializers.CharField(required=False)
    dim = serializers.IntegerField(min_value=1, max_value=8, default=2)
    word = serializers.CharField(required=False)
    n_lo = serializers.IntegerField(min_value=1, default=1)
    n_hi = serializers.IntegerField(min_value=1)
    norm = serializers.ChoiceField(choices=['spectral', 'frobenius'], default='spectral')

    def validate(self, data):
        if data['n_hi'] < data['n_lo']:
            raise serializers.ValidationError({'n_hi': 'need n_lo <= n_hi'})
        return data


class PerturbCheckParams(serializers.Serializer):
    cocycle = serializers.CharField(required=False)
    dim = serializers.IntegerField(min_value=1, max_value=8, default=2)
    word = serializers.CharField(required=False)
    n = serializers.IntegerField(min_value=1)
    k = serializers.IntegerField(min_value=1)


class EyeParamsSerializer(serializers.Serializer):
    lam = serializers.FloatField(min_value=0, default=2.0)
    sigma = serializers.FloatField(min_value=0, default=2.0)
    s0 = serializers.FloatField(default=1.0)
    K = serializers.IntegerField(min_value=1, default=20)
    transit = serializers.FloatField(min_value=0, default=0.0)


class WeightsParams(EyeParamsSerializer):
    t = serializers.ListField(child=serializers.FloatField(), min_length=1)


class CoverageParams(EyeParamsSerializer):
    grid = serializers.IntegerField(min_value=1, default=50)
    eps = serializers.FloatField(min_value=0, default=0.02)
    samples = serializers.IntegerField(min_value=1, default=256)
    fit_cycle = serializers.IntegerField(min_value=1, default=5)


class AcceptParams(serializers.Serializer):
    only = serializers.ListField(child=serializers.IntegerField(min_value=1, max_value=11), default=list)


def validate_params(serializer_class, params):
    """Validated action parameters; unknown keys are rejected"""
    serializer = serializer_class(data=params)
    serializer.is_valid(raise_exception=True)
    unknown = sorted(set(params) - set(serializer.fields))
    if unknown:
        raise InvalidParameters('unknown parameters', unknown=unknown)
    return dict(serializer.validated_data)


def validate_config(config):
    """Validated ExperimentConfig dict with a build_subshift descriptor"""
    serializer = ExperimentConfigSerializer(data=config)
    serializer.is_valid(raise_exception=True)
    data = serializer.validated_data
    spec = subshift_descriptor(data['spec'])
    build_subshift(spec)
    return {
        'spec': spec,
        'observable': dict(data['observable']),
        'budgets': dict(data['budgets']),
        'output': dict(data['output']),
        'params': dict(data['params']),
        'seed': data['seed'],
    }
