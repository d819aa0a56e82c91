"""Rational points on affine algebras, for sampling-based checks.

Points are found by back-substitution through a lexicographic Groebner basis:
variables are fixed from the last to the first, each either freely (when no
basis element constrains it) or as a rational root of the constraining
univariate polynomials.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd

from .kernel import LEX


def _divisors(n):
    n = abs(n)
    out = set()
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.add(i)
            out.add(n // i)
        i += 1
    return sorted(out)


def rational_roots(coeffs):
    """Rational roots of Σ coeffs[d] t^d (coeffs as Fractions, index = degree)."""
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    if not coeffs:
        return None  # the zero polynomial: every value is a root
    if len(coeffs) == 1:
        return []
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    roots = set()
    low = 0
    while ints[low] == 0:
        low += 1
    if low:
        roots.add(Fraction(0))
    ints = ints[low:]
    if len(ints) == 1:
        return sorted(roots)
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            for s in (1, -1):
                t = Fraction(s * p, q)
                if sum(c * t**d for d, c in enumerate(ints)) == 0:
                    roots.add(t)
    return sorted(roots)


def _univariate(poly, var, values):
    """Substitute known values, returning coefficients in ``var`` (None if other unknowns remain)."""
    coeffs = {}
    for e, c in poly.terms.items():
        t = c
        for i, a in enumerate(e):
            if i == var or not a:
                continue
            if i not in values:
                return None
            t *= values[i] ** a
        coeffs[e[var]] = coeffs.get(e[var], 0) + t
    deg = max(coeffs) if coeffs else 0
    return [Fraction(coeffs.get(d, 0)) for d in range(deg + 1)]


def sample_point(algebra, rng: random.Random, box=3, tries=200, corner=False):
    """A random rational point satisfying the relations, or None."""
    ring = algebra.ring
    gb = [g for g in algebra.relations.groebner(LEX) if g]
    n = ring.nvars
    by_lead = {i: [] for i in range(n)}
    for g in gb:
        used = g.variables()
        if not used:
            return None  # unit ideal: no points
        by_lead[min(used)].append(g)
    for _ in range(tries):
        values = {}
        ok = True
        for var in reversed(range(n)):
            constraints = [_univariate(g, var, values) for g in by_lead[var]]
            constraints = [c for c in constraints if c is not None]
            if not constraints:
                values[var] = Fraction(rng.choice([-1, 0, 1])) if corner else Fraction(rng.randint(-box, box))
                continue
            common = None
            for c in constraints:
                rts = rational_roots(c)
                if rts is None:
                    continue
                common = set(rts) if common is None else common & set(rts)
            if common is None:
                values[var] = Fraction(rng.randint(-box, box))
                continue
            if not common:
                ok = False
                break
            values[var] = rng.choice(sorted(common))
        if not ok:
            continue
        pt = [values[i] for i in range(n)]
        if all(g.evaluate(pt) == 0 for g in algebra.relations.nonzero_gens()):
            return pt
    return None


def sample_points(algebra, count, seed=0, box=3):
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count and attempts < count * 20:
        attempts += 1
        p = sample_point(algebra, rng, box, corner=attempts % 4 == 0)
        if p is not None:
            out.append(p)
    return out
