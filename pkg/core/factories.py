"""
Factory classes for creating test data across all apps
"""

import factory
import numpy as np
from factory.django import DjangoModelFactory
from factory.random import randgen

from boweneye.sojourn import EyeParams
from cocycle.products import CocycleSpec, random_cocycle
from shiftspace.language import random_legal_word
from shiftspace.subshifts import PaperShift
from words.observables import CylinderFunction
from words.sequences import Alphabet, Word


def _numpy_rng():
    """numpy generator seeded from factory_boy's shared random state"""
    return np.random.default_rng(randgen.getrandbits(32))


class WordFactory(factory.Factory):
    """Factory for random words over an alphabet"""

    class Meta:
        model = Word

    class Params:
        length = 12
        alphabet = Alphabet()

    symbols = factory.LazyAttribute(
        lambda obj: [randgen.choice(obj.alphabet.symbols) for _ in range(obj.length)]
    )


class LegalWordFactory(factory.Factory):
    """Factory for random words in the language of a subshift"""

    class Meta:
        model = Word

    class Params:
        length = 12
        shift = factory.LazyFunction(lambda: PaperShift('1/4'))

    symbols = factory.LazyAttribute(
        lambda obj: random_legal_word(obj.shift, obj.length, _numpy_rng()).symbols
    )


class CylinderFunctionFactory(factory.Factory):
    """Factory for observables with small integer tables"""

    class Meta:
        model = CylinderFunction

    alphabet = Alphabet()
    window = 2
    values = factory.LazyAttribute(
        lambda obj: [randgen.randint(-3, 3) for _ in range(obj.alphabet.size ** obj.window)]
    )

    @classmethod
    def _create(cls, model_class, alphabet, window, values):
        return model_class.from_values(alphabet, window, values)

    _build = _create


class CocycleFactory(factory.Factory):
    """Factory for invertible matrix cocycles (diagonally dominant tables)"""

    class Meta:
        model = CocycleSpec

    alphabet = Alphabet()
    dim = 2
    window = 1
    matrices = factory.LazyAttribute(
        lambda obj: random_cocycle(obj.alphabet, obj.dim, obj.window, _numpy_rng()).matrices
    )


class EyeParamsFactory(factory.Factory):
    """Factory for Bowen-eye parameters; defaults give lambda = sigma = 2"""

    class Meta:
        model = EyeParams

    alpha_plus = 1.0
    alpha_minus = 2.0
    beta_plus = 1.0
    beta_minus = 2.0


class ExperimentRunFactory(DjangoModelFactory):
    """Factory for run ledger rows"""

    class Meta:
        model = 'cli.ExperimentRun'

    command = 'lang'
    action = 'count'
    config_hash = factory.Sequence(lambda n: f'{n:064x}')
    seed = 0
    exit_status = 0
    artifact_path = factory.LazyAttribute(lambda obj: f'artifacts/{obj.command}-{obj.action}.json')
    verdict = 'ok'
