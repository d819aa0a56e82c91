"""Sparse multivariate polynomials over the rationals.

A polynomial is a map from exponent tuples to nonzero ``Fraction`` coefficients,
tied to a :class:`PolyRing` that names the variables.  Polynomials are treated
as immutable values.

String form (parsed and printed canonically)::

    poly    := ["+" | "-"] term (("+" | "-") term)*
    term    := factor ("*" factor)*
    factor  := NUM ["/" NUM] | NAME ["^" NUM]

Printed terms are sorted by descending graded reverse lexicographic order, the
coefficient ``1`` is omitted and ``-1`` becomes a leading minus sign.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

from ..errors import ParseError
from .orders import GREVLEX

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_TOKEN = re.compile(r"\s*(?:(\d+)(?:/(\d+))?|([A-Za-z_][A-Za-z0-9_]*)|(\^)|(\*)|([+-]))")


class PolyRing:
    """Polynomial ring Q[names]; equality is by variable names."""

    __slots__ = ("names", "index", "_hash")

    def __init__(self, names):
        if isinstance(names, str):
            names = [n.strip() for n in names.split(",") if n.strip()]
        names = tuple(names)
        for n in names:
            if not _NAME.match(n):
                raise ParseError(f"invalid variable name {n!r}")
        if len(set(names)) != len(names):
            raise ParseError(f"duplicate variable names in {names}")
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}
        self._hash = hash(names)

    @property
    def nvars(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"PolyRing({','.join(self.names)!r})"

    def __call__(self, value):
        if isinstance(value, Polynomial):
            return value.embed(self)
        if isinstance(value, str):
            return self.parse(value)
        return self.constant(value)

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return self.constant(1)

    def constant(self, c):
        c = Fraction(c)
        return Polynomial(self, {(0,) * len(self.names): c} if c else {})

    def gen(self, name):
        i = self.index[name] if isinstance(name, str) else name
        e = [0] * len(self.names)
        e[i] = 1
        return Polynomial(self, {tuple(e): Fraction(1)})

    def gens(self):
        return [self.gen(i) for i in range(len(self.names))]

    def monomial(self, exp, coeff=1):
        return Polynomial(self, {tuple(exp): Fraction(coeff)})

    def extend(self, names):
        """Ring with ``names`` appended after the current variables."""
        return PolyRing(self.names + tuple(names))

    def fresh_names(self, stem, count):
        """``count`` names ``stem1, stem2, ...`` avoiding clashes with this ring."""
        out = []
        i = 1
        while len(out) < count:
            n = f"{stem}{i}"
            if n not in self.index:
                out.append(n)
            i += 1
        return out

    def parse(self, text):
        return _parse(self, text)


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms):
        # callers hand over ownership of ``terms``; zero coefficients are dropped
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}
        self._hash = None

    # -- basic protocol -------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()))

    def sort_key(self):
        return tuple(sorted(self.terms.items()))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __repr__(self):
        return f"Polynomial({str(self)!r})"

    def __str__(self):
        return format_polynomial(self)

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Rational)):
            return self.ring.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) - c
        return Polynomial(self.ring, out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            c = Fraction(other)
            return Polynomial(self.ring, {e: v * c for e, v in self.terms.items()} if c else {})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Polynomial(self.ring, mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- structure ------------------------------------------------------
    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def variables(self):
        """Indices of variables that occur."""
        used = set()
        for e in self.terms:
            used.update(i for i, a in enumerate(e) if a)
        return sorted(used)

    def variable_names(self):
        return [self.ring.names[i] for i in self.variables()]

    def leading_term(self, order=GREVLEX):
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def leading_monomial(self, order=GREVLEX):
        return max(self.terms, key=order.key)

    def monic(self, order=GREVLEX):
        if not self.terms:
            return self
        return self / self.leading_term(order)[1]

    def diff(self, var):
        i = self.ring.index[var] if isinstance(var, str) else var
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return Polynomial(self.ring, out)

    def weighted_degrees(self, weights):
        return {sum(a * w for a, w in zip(e, weights)) for e in self.terms}

    def evaluate(self, point):
        """Value at a rational point (sequence indexed like the ring variables)."""
        point = [Fraction(v) for v in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, a in zip(point, e):
                if a:
                    t *= v ** a
            total += t
        return total

    def substitute(self, images, ring=None):
        """Ring map sending variable ``i`` to ``images[i]`` (all in ``ring``)."""
        if ring is None:
            ring = images[0].ring if images else self.ring
        powers = [dict() for _ in images]

        def power(i, a):
            cache = powers[i]
            if a not in cache:
                cache[a] = images[i] ** a
            return cache[a]

        out = {}
        for e, c in self.terms.items():
            acc = {(0,) * ring.nvars: c}
            for i, a in enumerate(e):
                if a:
                    acc = mul_terms(acc, power(i, a).terms)
                    if not acc:
                        break
            for ee, cc in acc.items():
                out[ee] = out.get(ee, 0) + cc
        return Polynomial(ring, out)

    def subs(self, mapping):
        """Substitute some variables by polynomials of the same ring (by name)."""
        images = [mapping.get(n, g) for n, g in zip(self.ring.names, self.ring.gens())]
        images = [self.ring(v) if not isinstance(v, Polynomial) else v for v in images]
        return self.substitute(images, self.ring)

    def embed(self, ring):
        """Reinterpret in ``ring`` by variable names; every used name must exist there."""
        if ring == self.ring:
            return self
        pos = []
        for i in self.variables():
            name = self.ring.names[i]
            if name not in ring.index:
                raise ValueError(f"variable {name} not in {ring}")
            pos.append((i, ring.index[name]))
        n = ring.nvars
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for i, j in pos:
                ne[j] = e[i]
            out[tuple(ne)] = c
        return Polynomial(ring, out)

    def coefficients_in(self, names):
        """Split as a polynomial in ``names`` with coefficients in the other variables.

        Returns ``{exponent tuple over names: coefficient polynomial}``.
        """
        idx = [self.ring.index[n] for n in names]
        out = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in idx)
            rest = list(e)
            for i in idx:
                rest[i] = 0
            d = out.setdefault(key, {})
            d[tuple(rest)] = c
        return {k: Polynomial(self.ring, v) for k, v in out.items()}


def mul_terms(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _format_coeff(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p):
    if not p.terms:
        return "0"
    names = p.ring.names
    pieces = []
    for e in sorted(p.terms, key=GREVLEX.key, reverse=True):
        c = p.terms[e]
        sign = "-" if c < 0 else "+"
        c = abs(c)
        factors = [n if a == 1 else f"{n}^{a}" for n, a in zip(names, e) if a]
        if not factors:
            body = _format_coeff(c)
        elif c == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_format_coeff(c)] + factors)
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def _tokens(text):
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        pos = m.end()
        num, den, name, caret, star, sign = m.groups()
        if num is not None:
            yield ("num", Fraction(int(num), int(den) if den is not None else 1))
        elif name is not None:
            yield ("name", name)
        elif caret:
            yield ("^", None)
        elif star:
            yield ("*", None)
        else:
            yield ("sign", sign)


def _parse(ring, text):
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    toks = list(_tokens(text))
    if not toks:
        raise ParseError("empty polynomial string")
    n = ring.nvars
    out = {}
    i = 0

    def expect_factor(i):
        if i >= len(toks):
            raise ParseError(f"truncated polynomial {text!r}")
        kind, val = toks[i]
        if kind == "num":
            # NUM/NUM is lexed as one token; a bare "/" never reaches here
            return val, None, i + 1
        if kind == "name":
            if val not in ring.index:
                raise ParseError(f"unknown variable {val!r} in {text!r}")
            exp = 1
            i += 1
            if i < len(toks) and toks[i][0] == "^":
                if i + 1 >= len(toks) or toks[i + 1][0] != "num" or toks[i + 1][1].denominator != 1:
                    raise ParseError(f"bad exponent in {text!r}")
                exp = int(toks[i + 1][1])
                i += 2
            return None, (ring.index[val], exp), i
        raise ParseError(f"unexpected token {val or kind!r} in {text!r}")

    first = True
    while i < len(toks):
        sign = 1
        if toks[i][0] == "sign":
            sign = -1 if toks[i][1] == "-" else 1
            i += 1
        elif not first:
            raise ParseError(f"expected + or - in {text!r}")
        first = False
        coeff = Fraction(sign)
        exp = [0] * n
        while True:
            c, v, i = expect_factor(i)
            if c is not None:
                coeff *= c
            else:
                exp[v[0]] += v[1]
            if i < len(toks) and toks[i][0] == "*":
                i += 1
                continue
            break
        e = tuple(exp)
        out[e] = out.get(e, 0) + coeff
    return Polynomial(ring, out)
