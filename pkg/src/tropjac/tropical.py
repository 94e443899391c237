"""Max-plus arithmetic, tropical polynomials and the span/dimension checks.

A tropical number is either a :class:`~fractions.Fraction` or the singleton
``BOTTOM`` standing for minus infinity. Vectors are plain tuples.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import EmptyPolynomialError, LengthMismatchError


class _Bottom:
    """The tropical zero (minus infinity). Compares below every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BOTTOM"

    def __str__(self):
        return "-inf"

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __hash__(self):
        return hash("tropjac.BOTTOM")

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()

TropNum = Union[Fraction, _Bottom]
TropVector = tuple


def trop(x) -> TropNum:
    """Coerce ints, strings and Fractions; ``None``/BOTTOM map to BOTTOM."""
    if x is None or x is BOTTOM:
        return BOTTOM
    return Fraction(x)


def tadd(a: TropNum, b: TropNum) -> TropNum:
    if a is BOTTOM:
        return b
    if b is BOTTOM:
        return a
    return a if a >= b else b


def tmul(a: TropNum, b: TropNum) -> TropNum:
    if a is BOTTOM or b is BOTTOM:
        return BOTTOM
    return a + b


def tsum(values: Iterable[TropNum]) -> TropNum:
    out = BOTTOM
    for v in values:
        out = tadd(out, v)
    return out


def tvec(values: Sequence) -> TropVector:
    return tuple(trop(v) for v in values)


def scale(c: TropNum, v: TropVector) -> TropVector:
    return tuple(tmul(c, x) for x in v)


def vec_add(v: TropVector, w: TropVector) -> TropVector:
    if len(v) != len(w):
        raise LengthMismatchError(f"lengths {len(v)} and {len(w)}")
    return tuple(tadd(a, b) for a, b in zip(v, w))


def combination(coefficients: Sequence[TropNum], vectors: Sequence[TropVector]) -> TropVector:
    """Tropical linear combination max_j (c_j + v_j), coordinatewise."""
    if not vectors:
        raise ValueError("need at least one vector")
    out = tuple(BOTTOM for _ in vectors[0])
    for c, v in zip(coefficients, vectors):
        out = vec_add(out, scale(c, v))
    return out


def tpoly_eval(coefficients: Mapping[tuple, TropNum], x: Sequence) -> TropNum:
    """Evaluate max over terms of (coefficient + <exponent, x>)."""
    if not coefficients:
        raise EmptyPolynomialError("tropical polynomial has no terms")
    xs = tuple(Fraction(v) for v in x)
    out = BOTTOM
    for exponent, coeff in coefficients.items():
        if len(exponent) != len(xs):
            raise LengthMismatchError("exponent and point lengths differ")
        if any(e < 0 for e in exponent):
            raise ValueError(f"negative exponent {exponent}")
        term = tmul(trop(coeff), sum((e * xi for e, xi in zip(exponent, xs)), Fraction(0)))
        out = tadd(out, term)
    return out


def proj_equiv(v: TropVector, w: TropVector) -> bool:
    """True iff w = lambda + v for a single finite scalar lambda."""
    if len(v) != len(w):
        raise LengthMismatchError(f"lengths {len(v)} and {len(w)}")
    if all(x is BOTTOM for x in v) or all(x is BOTTOM for x in w):
        raise ValueError("projective representatives need a finite entry")
    shift = None
    for a, b in zip(v, w):
        if (a is BOTTOM) != (b is BOTTOM):
            return False
        if a is BOTTOM:
            continue
        if shift is None:
            shift = b - a
        elif b - a != shift:
            return False
    return True


def residuate(v: TropVector, generators: Sequence[TropVector]) -> list[TropNum]:
    """Greatest coefficients c with combination(c, generators) <= v.

    All-bottom generators get coefficient BOTTOM (they contribute nothing).
    """
    coeffs: list[TropNum] = []
    for gen in generators:
        if len(gen) != len(v):
            raise LengthMismatchError(f"lengths {len(gen)} and {len(v)}")
        c: TropNum | None = None
        for vi, gi in zip(v, gen):
            if gi is BOTTOM:
                continue
            cand = BOTTOM if vi is BOTTOM else vi - gi
            c = cand if c is None else min(c, cand)
        coeffs.append(BOTTOM if c is None else c)
    return coeffs


def in_tropical_span(v: TropVector, generators: Sequence[TropVector]) -> bool:
    if not generators:
        return all(x is BOTTOM for x in v)
    coeffs = residuate(v, generators)
    return combination(coeffs, generators) == tuple(v)


def vn_generators(n: int) -> list[TropVector]:
    """e_1..e_n of V_n: zeros with BOTTOM in position j."""
    return [tuple(BOTTOM if i == j else Fraction(0) for i in range(n)) for j in range(n)]


def vn_reduction_check(
    n: int,
    coefficients: Sequence[TropNum],
    k: int,
    elements: Sequence[TropVector] | None = None,
) -> bool:
    """Is the combination of k scaled elements of V_n reproduced by two of them?

    ``elements`` defaults to the generators e_1..e_k. The search runs over
    every 2-element subset (which also covers single elements).
    """
    if not 3 <= k <= n:
        raise ValueError(f"need 3 <= k <= n, got k={k}, n={n}")
    if len(coefficients) != k:
        raise LengthMismatchError(f"expected {k} coefficients")
    vs = list(elements) if elements is not None else vn_generators(n)[:k]
    if len(vs) != k:
        raise LengthMismatchError(f"expected {k} elements")
    target = combination([trop(c) for c in coefficients], vs)
    return any(in_tropical_span(target, [vs[i], vs[j]]) for i, j in itertools.combinations(range(k), 2))


def random_vn_element(n: int, rng: random.Random, denom: int = 6, spread: int = 12) -> TropVector:
    coeffs = [Fraction(rng.randint(-spread, spread), rng.randint(1, denom)) for _ in range(n)]
    return combination(coeffs, vn_generators(n))


def sampled_dimension_below(
    generators: Sequence[TropVector],
    k: int,
    trials: int,
    seed: int = 0,
    denom: int = 6,
) -> bool:
    """Sampled test of "dimension smaller than k" for the module spanned by ``generators``.

    Each trial draws k random module elements and a random combination of them,
    then asks whether a proper subset reproduces it. A False answer is a
    certificate; True only means no counterexample among ``trials`` samples.
    """
    rng = random.Random(seed)
    m = len(generators)

    def element():
        return combination(
            [Fraction(rng.randint(-10, 10), rng.randint(1, denom)) for _ in range(m)], generators
        )

    for _ in range(trials):
        vs = [element() for _ in range(k)]
        cs = [Fraction(rng.randint(-10, 10), rng.randint(1, denom)) for _ in range(k)]
        target = combination(cs, vs)
        if not any(
            in_tropical_span(target, [vs[j] for j in range(k) if j != skip]) for skip in range(k)
        ):
            return False
    return True
