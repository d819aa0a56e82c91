"""Ideals of polynomial rings and the Groebner-backed operations on them."""

from __future__ import annotations

from collections import OrderedDict
from threading import Lock

from ..errors import VerificationError
from .groebner import active_budget, groebner_terms, reduce_terms, spoly_terms
from .orders import GREVLEX, MonomialOrder, block
from .polynomial import Polynomial, PolyRing

_CACHE_SIZE = 4096
_gb_cache: OrderedDict = OrderedDict()
_cache_lock = Lock()


def clear_cache():
    with _cache_lock:
        _gb_cache.clear()


def _cache_key(ring, gens, order):
    return (ring.names, tuple(sorted(g.sort_key() for g in gens if g)), order)


def _to_poly(ring, terms):
    return Polynomial(ring, terms)


class Ideal:
    """Ideal generated by ``gens`` in ``ring``.

    Equality is mathematical (same ideal), checked through reduced Groebner
    bases.  Bases are cached per monomial order.
    """

    def __init__(self, ring, gens=()):
        if isinstance(ring, Polynomial):
            raise TypeError("first argument must be a PolyRing")
        out = []
        for g in gens:
            if isinstance(g, str):
                g = ring.parse(g)
            elif not isinstance(g, Polynomial):
                g = ring.constant(g)
            elif g.ring != ring:
                g = g.embed(ring)
            out.append(g)
        self.ring = ring
        self.gens = tuple(out)
        self._gb = {}

    def __repr__(self):
        return f"Ideal<{', '.join(map(str, self.gens)) or '0'}>"

    def nonzero_gens(self):
        return [g for g in self.gens if g]

    # -- Groebner bases ---------------------------------------------------
    def groebner(self, order: MonomialOrder = GREVLEX, parallel=False):
        """Reduced Groebner basis, sorted by descending leading monomial."""
        if order in self._gb:
            return self._gb[order]
        key = _cache_key(self.ring, self.gens, order)
        with _cache_lock:
            hit = _gb_cache.get(key)
            if hit is not None:
                _gb_cache.move_to_end(key)
        if hit is None:
            res = groebner_terms(
                [g.terms for g in self.gens if g], self.ring.nvars, order.key, parallel=parallel
            )
            hit = tuple(_to_poly(self.ring, t) for t in res.basis)
            with _cache_lock:
                _gb_cache[key] = hit
                if len(_gb_cache) > _CACHE_SIZE:
                    _gb_cache.popitem(last=False)
        self._gb[order] = hit
        return hit

    def _basis_entries(self, order):
        out = []
        for g in self.groebner(order):
            lm = g.leading_monomial(order)
            out.append((lm, g.terms[lm], g.terms))
        return out

    def normal_form(self, f, order: MonomialOrder = GREVLEX):
        f = self._coerce(f)
        if not f:
            return f
        rem = reduce_terms(f.terms, self._basis_entries(order), order.key, active_budget())
        return Polynomial(self.ring, rem)

    reduce = normal_form

    def _coerce(self, f):
        if isinstance(f, str):
            return self.ring.parse(f)
        if not isinstance(f, Polynomial):
            return self.ring.constant(f)
        if f.ring != self.ring:
            return f.embed(self.ring)
        return f

    def contains(self, f):
        return not self.normal_form(f)

    __contains__ = contains

    def contains_ideal(self, other):
        return all(self.contains(g) for g in other.gens)

    def is_unit(self):
        gb = self.groebner()
        return len(gb) == 1 and gb[0].is_constant()

    def is_zero(self):
        return not any(self.gens)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        if other.ring != self.ring:
            other = other.embed(self.ring)
        return self.groebner() == other.groebner()

    def __hash__(self):
        return hash(self.groebner())

    def __add__(self, other):
        if isinstance(other, Ideal):
            return Ideal(self.ring, self.gens + tuple(g.embed(self.ring) for g in other.gens))
        return Ideal(self.ring, self.gens + tuple(self._coerce(g) for g in other))

    def __mul__(self, other):
        return Ideal(self.ring, [a * b for a in self.nonzero_gens() for b in other.nonzero_gens()])

    def embed(self, ring):
        return Ideal(ring, [g.embed(ring) for g in self.gens])

    def canonical_strings(self):
        return [str(g) for g in self.groebner()]

    def minimal_gens(self):
        """Reduced Groebner basis as a deterministic generating set."""
        return list(self.groebner())

    # -- certificates -------------------------------------------------------
    def lift(self, f, order: MonomialOrder = GREVLEX):
        """Cofactors ``q`` with ``f == sum(q[i] * gens[i])``, or None if f is not in the ideal.

        The identity is re-verified by plain arithmetic before returning.
        """
        f = self._coerce(f)
        ring = self.ring
        gens = [g.terms for g in self.gens]
        res = groebner_terms(gens, ring.nvars, order.key, track=True)
        entries = []
        for t in res.basis:
            lm = max(t, key=order.key)
            entries.append((lm, t[lm], t))
        quotients = [dict() for _ in entries]
        rem = reduce_terms(f.terms, entries, order.key, active_budget(), quotients=quotients)
        if rem:
            return None
        cof = [ring.zero() for _ in self.gens]
        for q, parts in zip(quotients, res.cofactors):
            qp = Polynomial(ring, q)
            if not qp:
                continue
            for i, part in enumerate(parts):
                if part:
                    cof[i] = cof[i] + qp * Polynomial(ring, dict(part))
        check = ring.zero()
        for q, g in zip(cof, self.gens):
            check = check + q * g
        if check != f:
            raise VerificationError("ideal membership certificate failed to verify")
        return cof

    # -- ideal operations ---------------------------------------------------
    def quotient(self, f):
        return ideal_quotient(self, f)

    def saturation(self, f):
        return saturation(self, f)

    def eliminate(self, kill):
        return eliminate(self, kill)

    def radical_contains(self, f):
        return radical_membership(f, self)


def groebner_basis(I: Ideal, order: MonomialOrder = GREVLEX, parallel=False):
    return list(I.groebner(order, parallel=parallel))


def normal_form(f, I: Ideal, order: MonomialOrder = GREVLEX):
    return I.normal_form(f, order)


def is_groebner(basis, order: MonomialOrder):
    """Buchberger criterion: every S-polynomial reduces to zero by ``basis``."""
    polys = [g for g in basis if g]
    if not polys:
        return True
    entries = []
    for g in polys:
        lm = g.leading_monomial(order)
        entries.append((lm, g.terms[lm], g.terms))
    budget = active_budget()
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            s = spoly_terms(polys[i].terms, polys[j].terms, order.key)
            if reduce_terms(s, entries, order.key, budget):
                return False
    return True


def exact_divide(p: Polynomial, d: Polynomial):
    """``p / d`` when ``d`` divides ``p`` in the polynomial ring, else None."""
    if not d:
        raise ZeroDivisionError("division by the zero polynomial")
    lm = d.leading_monomial()
    q = {}
    rem = reduce_terms(p.terms, [(lm, d.terms[lm], d.terms)], GREVLEX.key, active_budget(), quotients=[q])
    if rem:
        return None
    return Polynomial(p.ring, q)


def _with_prefix(ring, prefix_names):
    """Ring with ``prefix_names`` first, then the old variables."""
    return PolyRing(tuple(prefix_names) + tuple(ring.names))


def ideal_quotient(I: Ideal, f) -> Ideal:
    """(I : f) via I ∩ <f> computed with an auxiliary variable."""
    f = I._coerce(f)
    if not f:
        raise ValueError("ideal quotient by zero")
    ring = I.ring
    (t,) = ring.fresh_names("_t", 1)
    big = _with_prefix(ring, [t])
    tv = big.gen(t)
    gens = [tv * g.embed(big) for g in I.nonzero_gens()] + [(1 - tv) * f.embed(big)]
    gb = Ideal(big, gens).groebner(block(1))
    out = []
    for g in gb:
        if g.terms and all(e[0] == 0 for e in g.terms):
            q = exact_divide(g.embed(ring), f)
            if q is None:
                raise VerificationError("intersection element not divisible by f")
            out.append(q)
    return Ideal(ring, out or [ring.zero()])


def saturation(I: Ideal, f):
    """(I : f^∞) and the least n with (I : f^n) = (I : f^(n+1))."""
    cur = I
    n = 0
    while True:
        nxt = ideal_quotient(cur, f)
        if nxt.contains_ideal(cur) and cur.contains_ideal(nxt):
            return cur, n
        cur = nxt
        n += 1


def eliminate(I: Ideal, kill) -> Ideal:
    """I ∩ Q[remaining variables], returned as an ideal of the smaller ring."""
    kill = [k for k in dict.fromkeys(kill)]
    ring = I.ring
    kill_in = [k for k in kill if k in ring.index]
    keep = [n for n in ring.names if n not in set(kill_in)]
    sub = PolyRing(keep)
    if not kill_in:
        return Ideal(sub, [g.embed(sub) for g in I.gens])
    big = PolyRing(tuple(kill_in) + tuple(keep))
    gb = Ideal(big, [g.embed(big) for g in I.gens]).groebner(block(len(kill_in)))
    nk = len(kill_in)
    out = [g.embed(sub) for g in gb if all(not any(e[:nk]) for e in g.terms)]
    return Ideal(sub, out or [sub.zero()])


def radical_membership(f, I: Ideal) -> bool:
    """f ∈ √I via 1 ∈ I + <1 - t f>."""
    f = I._coerce(f)
    if not f:
        return True
    ring = I.ring
    (t,) = ring.fresh_names("_r", 1)
    big = ring.extend([t])
    tv = big.gen(t)
    J = Ideal(big, [g.embed(big) for g in I.nonzero_gens()] + [1 - tv * f.embed(big)])
    return J.is_unit()


def kernel_of_ring_map(images, target_relations: Ideal | None = None, source_names=None) -> Ideal:
    """Relations among ``images`` modulo ``target_relations``.

    The result lives in ``PolyRing(source_names)`` (default ``x1..xn``).
    """
    images = list(images)
    if not images:
        raise ValueError("kernel of a map from the zero-variable ring")
    target = images[0].ring
    if source_names is None:
        source_names = [f"x{i + 1}" for i in range(len(images))]
    source = PolyRing(source_names)
    # internal names that cannot collide with the target ring
    internal = []
    i = 0
    while len(internal) < len(images):
        i += 1
        n = f"_k{i}"
        if n not in target.index:
            internal.append(n)
    big = PolyRing(tuple(target.names) + tuple(internal))
    gens = [big.gen(n) - img.embed(big) for n, img in zip(internal, images)]
    if target_relations is not None:
        gens += [g.embed(big) for g in target_relations.nonzero_gens()]
    gb = Ideal(big, gens).groebner(block(target.nvars))
    nt = target.nvars
    mid = PolyRing(internal)
    out = []
    for g in gb:
        if all(not any(e[:nt]) for e in g.terms):
            out.append(g.embed(mid).substitute(source.gens(), source))
    return Ideal(source, out or [source.zero()])


def subring_membership(f: Polynomial, gens, relations: Ideal | None = None, names=None):
    """Decide whether ``f`` lies in the subalgebra generated by ``gens`` (mod relations).

    Returns ``(True, expr)`` with ``expr`` a polynomial in new variables
    (``names``, default ``g1..gn``) such that ``expr(gens) ≡ f``, else
    ``(False, None)``.
    """
    gens = list(gens)
    target = f.ring
    if names is None:
        names = [f"g{i + 1}" for i in range(len(gens))]
    internal = []
    i = 0
    while len(internal) < len(gens):
        i += 1
        n = f"_s{i}"
        if n not in target.index:
            internal.append(n)
    big = PolyRing(tuple(target.names) + tuple(internal))
    ideal_gens = [big.gen(n) - g.embed(big) for n, g in zip(internal, gens)]
    if relations is not None:
        ideal_gens += [g.embed(big) for g in relations.nonzero_gens()]
    J = Ideal(big, ideal_gens)
    order = block(target.nvars)
    nf = J.normal_form(f.embed(big), order)
    nt = target.nvars
    if any(any(e[:nt]) for e in nf.terms):
        return False, None
    src = PolyRing(names)
    expr = nf.embed(PolyRing(internal)).substitute(src.gens(), src)
    check = expr.substitute(gens, target) - f
    if relations is not None:
        if not relations.contains(check):
            raise VerificationError("subring membership expression failed to verify")
    elif check:
        raise VerificationError("subring membership expression failed to verify")
    return True, expr


def unit_ideal(ring):
    return Ideal(ring, [ring.one()])


def zero_ideal(ring):
    return Ideal(ring, [ring.zero()])


__all__ = [
    "Ideal",
    "groebner_basis",
    "normal_form",
    "is_groebner",
    "exact_divide",
    "ideal_quotient",
    "saturation",
    "eliminate",
    "radical_membership",
    "kernel_of_ring_map",
    "subring_membership",
    "unit_ideal",
    "zero_ideal",
]
