"""The tropical Riemann theta function and its corner locus.

In pairing coordinates u (see :mod:`tropjac.homology`) the theta function is

    Theta(u) = max over n in Z^g of  n.u - 1/2 n^T Q n.

Completing the square, n.u - 1/2 n^T Q n = 1/2 c^T Q c - 1/2 |n - c|_Q^2 with
c = Q^{-1} u, so the maximizers are exactly the lattice points closest to c in
the Q-norm. They are found by exact layered enumeration over the ellipsoid
|n - c|_Q^2 <= R^2, with R^2 taken from the rounded centre.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _linalg as la
from .homology import PeriodMatrix, as_period_matrix


@dataclass(frozen=True)
class ThetaValue:
    value: Fraction
    maximizers: tuple[tuple[int, ...], ...]

    @property
    def on_corner(self) -> bool:
        return len(self.maximizers) >= 2

    def slope_range(self, direction: Sequence) -> tuple[Fraction, Fraction]:
        """(min, max) of n.d over the maximizers: the one-sided derivatives along d."""
        s = [la.dot(n, direction) for n in self.maximizers]
        return min(s), max(s)


def _int_window(center: Fraction, r: Fraction) -> range:
    """All integers k with (k - center)^2 <= r."""
    if r < 0:
        return range(0)
    s = math.isqrt(math.floor(r)) + 1
    lo = math.floor(center - s)
    hi = math.ceil(center + s)
    while lo <= hi and (lo - center) ** 2 > r:
        lo += 1
    while hi >= lo and (hi - center) ** 2 > r:
        hi -= 1
    return range(lo, hi + 1)


def closest_vectors(Q, c: Sequence) -> tuple[Fraction, list[tuple[int, ...]]]:
    """All n in Z^g minimizing (n-c)^T Q (n-c), with that minimum."""
    Q = as_period_matrix(Q)
    g = Q.g
    c = la.as_vector(c)
    if g == 0:
        return Fraction(0), [()]
    L, d = Q.ldl
    n0 = tuple(round(x) for x in c)
    best = Q.quad(la.vsub(n0, c))
    found: list[tuple[int, ...]] = []
    n = [0] * g

    def rec(i: int, partial: Fraction):
        nonlocal best, found
        if i < 0:
            if partial < best:
                best, found = partial, [tuple(n)]
            elif partial == best:
                found.append(tuple(n))
            return
        shift = sum((L[j][i] * (n[j] - c[j]) for j in range(i + 1, g)), Fraction(0))
        center = c[i] - shift
        for k in _int_window(center, (best - partial) / d[i]):
            y = k - center
            nxt = partial + d[i] * y * y
            if nxt <= best:
                n[i] = k
                rec(i - 1, nxt)

    rec(g - 1, Fraction(0))
    return best, sorted(set(found))


def theta(Q, u: Sequence) -> ThetaValue:
    Q = as_period_matrix(Q)
    u = la.as_vector(u)
    if len(u) != Q.g:
        raise ValueError(f"expected a {Q.g}-vector")
    _, ns = closest_vectors(Q, Q.solve(u))
    n = ns[0]
    value = la.dot(n, u) - Q.quad(n) / 2
    return ThetaValue(value, tuple(ns))


def theta_translated(Q, u: Sequence, lam: Sequence) -> ThetaValue:
    return theta(Q, la.vsub(u, lam))


def on_theta_divisor(Q, u: Sequence) -> bool:
    return theta(Q, u).on_corner


def quasiperiod_check(Q, u: Sequence, m: Sequence[int]) -> bool:
    """Theta(u + Qm) == Theta(u) + m.u + 1/2 m^T Q m, with maximizers shifted by m."""
    Q = as_period_matrix(Q)
    lhs = theta(Q, la.vadd(u, Q.apply(m)))
    rhs = theta(Q, u)
    shifted = tuple(sorted(tuple(a + b for a, b in zip(n, m)) for n in rhs.maximizers))
    return lhs.value == rhs.value + la.dot(m, u) + Q.quad(m) / 2 and lhs.maximizers == shifted


def legendre(Q, n: Sequence[int]) -> Fraction:
    """Intercept of the affine piece with slope n: 1/2 n^T Q n."""
    return as_period_matrix(Q).quad(n) / 2


def canonical_point(Q, u: Sequence) -> tuple:
    """u - Q n* for the lexicographically smallest lattice point n* closest to Q^{-1} u."""
    Q = as_period_matrix(Q)
    _, ns = closest_vectors(Q, Q.solve(u))
    return la.vsub(u, Q.apply(ns[0]))


__all__ = [
    "PeriodMatrix",
    "ThetaValue",
    "canonical_point",
    "closest_vectors",
    "legendre",
    "on_theta_divisor",
    "quasiperiod_check",
    "theta",
    "theta_translated",
]
