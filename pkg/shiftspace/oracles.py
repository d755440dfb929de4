"""
Independent pure-Python legality oracles.

These read the forbidden-word rules literally and share no code with the
vectorized scans or the automata in ``subshifts``; tests and the acceptance
suite compare the two.
"""

import itertools
import math

import numpy as np

from .subshifts import FiniteTypeShift, FullShift, GapShift, PaperShift, build_subshift


def _m(kappa, n):
    return math.floor(kappa * n) + 1


def literal_paper_legal(symbols, kappa):
    """R1 and R2 with the literal "exists j <= r with k <= m(j)" test"""
    size = len(symbols)
    for i in range(size - 1):
        if symbols[i] * symbols[i + 1] < 0:
            return False
    for i in range(size):
        if symbols[i] == 0:
            continue
        k = 0
        while i + 1 + k < size and symbols[i + 1 + k] == 0:
            k += 1
        if k == 0:
            continue
        j = 0
        start = i + 1 + k
        while start + j < size and symbols[start + j] != 0:
            j += 1
            if k <= _m(kappa, j):
                return False
    return True


def is_forbidden(shift, symbols):
    """True when ``symbols`` is itself one of the forbidden words"""
    if isinstance(shift, FullShift):
        return False
    if isinstance(shift, FiniteTypeShift):
        return symbols in {w.symbols for w in shift.forbidden}
    if isinstance(shift, GapShift):
        size = len(symbols)
        return (
            size >= 2 and symbols[0] == 1 and symbols[-1] == 1
            and all(s == 0 for s in symbols[1:-1]) and size - 2 < shift.min_run
        )
    if isinstance(shift, PaperShift):
        if len(symbols) == 2 and symbols[0] * symbols[1] < 0:
            return True
        if len(symbols) < 3 or symbols[0] == 0:
            return False
        k = 0
        while k + 1 < len(symbols) and symbols[k + 1] == 0:
            k += 1
        tail = symbols[1 + k:]
        return k >= 1 and bool(tail) and all(tail) and k <= _m(shift.kappa, len(tail))
    raise TypeError(f'no oracle for {shift!r}')


def brute_legal(shift, word):
    """Scan every sub-word against the forbidden set; cubic, for short words"""
    shift = build_subshift(shift)
    symbols = tuple(word)
    size = len(symbols)
    return not any(
        is_forbidden(shift, symbols[i:j])
        for i in range(size) for j in range(i + 1, size + 1)
    )


def literal_legal(shift, symbols):
    """Linear literal check used for naive enumeration"""
    if isinstance(shift, PaperShift):
        return literal_paper_legal(symbols, shift.kappa)
    if isinstance(shift, GapShift):
        last = None
        for i, symbol in enumerate(symbols):
            if symbol == 1:
                if last is not None and i - last - 1 < shift.min_run:
                    return False
                last = i
        return True
    if isinstance(shift, FiniteTypeShift):
        patterns = [w.symbols for w in shift.forbidden]
        return not any(
            symbols[i:i + len(p)] == p
            for p in patterns for i in range(len(symbols) - len(p) + 1)
        )
    return True


def naive_count(shift, n):
    """|L_n| by enumerating alphabet^n and filtering"""
    shift = build_subshift(shift)
    return sum(
        1 for symbols in itertools.product(shift.alphabet.symbols, repeat=n)
        if literal_legal(shift, symbols)
    )


def sgap_growth_root(min_run):
    """Largest real root of x^(s+1) - x^s - 1"""
    coefficients = np.zeros(min_run + 2)
    coefficients[0] = 1.0
    coefficients[1] -= 1.0
    coefficients[-1] -= 1.0
    roots = np.roots(coefficients)
    real = roots[np.abs(roots.imag) < 1e-9].real
    return float(real.max())
