"""Buchberger's algorithm over the rationals.

Polynomials are handled here as raw term dicts ``{exponent: Fraction}`` for
speed; :mod:`nrgit.kernel.ideal` wraps the results.  Pair selection is the
sugar strategy with ties broken by (order key of the lcm, i, j), which makes
every run deterministic.  Useless pairs are dropped by the coprime criterion
and by the chain criterion against pending pairs.

Every term cancellation counts as one step against a :class:`StepBudget`.
"""

from __future__ import annotations

import contextlib
import contextvars
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ResourceLimitExceeded

DEFAULT_STEP_BUDGET = 10**6


class StepBudget:
    def __init__(self, limit=DEFAULT_STEP_BUDGET):
        self.limit = limit
        self.used = 0

    def charge(self, n=1, progress=None):
        self.used += n
        if self.limit is not None and self.used > self.limit:
            raise ResourceLimitExceeded(
                f"step budget of {self.limit} reduction steps exceeded",
                steps=self.used,
                progress=progress,
            )


_current_budget = contextvars.ContextVar("nrgit_budget", default=None)


@contextlib.contextmanager
def step_budget(limit=DEFAULT_STEP_BUDGET):
    """Share one budget across every Groebner computation inside the block."""
    budget = StepBudget(limit)
    token = _current_budget.set(budget)
    try:
        yield budget
    finally:
        _current_budget.reset(token)


def active_budget():
    b = _current_budget.get()
    return b if b is not None else StepBudget()


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_exp(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _axpy(p, c, m, g):
    """p - c * x^m * g, in place on p."""
    for e, v in g.items():
        ne = _add_exp(e, m)
        nv = p.get(ne, 0) - c * v
        if nv:
            p[ne] = nv
        else:
            p.pop(ne, None)


def _scaled(g, c, m):
    return {_add_exp(e, m): c * v for e, v in g.items()}


class _Cof:
    """Cofactor vector: list of term dicts, one per input generator."""

    __slots__ = ("parts",)

    def __init__(self, parts):
        self.parts = parts

    @classmethod
    def unit(cls, n, i, nvars):
        parts = [dict() for _ in range(n)]
        parts[i] = {(0,) * nvars: Fraction(1)}
        return cls(parts)

    def copy(self):
        return _Cof([dict(p) for p in self.parts])

    def axpy(self, c, m, other):
        for mine, theirs in zip(self.parts, other.parts):
            _axpy(mine, c, m, theirs)

    def scale(self, c):
        for p in self.parts:
            for e in p:
                p[e] *= c


@dataclass
class GBResult:
    basis: list  # list of term dicts, monic, sorted by descending leading monomial
    cofactors: list | None  # per basis element, per input generator term dicts
    steps: int


def reduce_terms(p, basis, key, budget, cofs=None, pcof=None, quotients=None):
    """Full reduction of ``p`` by ``basis`` (list of (lm, lc, terms)).

    ``cofs``/``pcof`` carry cofactor bookkeeping; ``quotients`` (a list of dicts)
    records the division quotients when given.
    """
    p = dict(p)
    rem = {}
    while p:
        lm = max(p, key=key)
        lc = p[lm]
        for idx, (glm, glc, g) in enumerate(basis):
            if _divides(glm, lm):
                m = _sub_exp(lm, glm)
                c = lc / glc
                _axpy(p, c, m, g)
                if pcof is not None:
                    pcof.axpy(c, m, cofs[idx])
                if quotients is not None:
                    q = quotients[idx]
                    q[m] = q.get(m, 0) + c
                budget.charge(1)
                break
        else:
            rem[lm] = lc
            del p[lm]
    return rem


def _reduce_job(args):
    p, basis, key, budget = args
    return reduce_terms(p, basis, key, budget)


def groebner_terms(polys, nvars, key, track=False, parallel=False, budget=None):
    """Reduced Groebner basis of the given term dicts.

    With ``track`` the result carries cofactors expressing every basis element
    in the inputs.  ``parallel`` reduces all pairs of the current minimal sugar
    concurrently; the reduced basis is unique, so the output is identical.
    """
    if budget is None:
        budget = active_budget()
    start = budget.used
    ngens = len(polys)
    basis = []  # entries (lm, lc, terms)
    sugar = []
    cofs = [] if track else None
    zero = (0,) * nvars

    def add(terms, s, cof):
        lm = max(terms, key=key)
        basis.append((lm, terms[lm], terms))
        sugar.append(s)
        if track:
            cofs.append(cof)

    for i, p in enumerate(polys):
        if p:
            add(dict(p), max(sum(e) for e in p), _Cof.unit(ngens, i, nvars) if track else None)

    def make_pairs(new):
        out = []
        lm_n = basis[new][0]
        for i in range(new):
            lcm = _lcm(basis[i][0], lm_n)
            s = max(sugar[i] + sum(lcm) - sum(basis[i][0]), sugar[new] + sum(lcm) - sum(lm_n))
            out.append((s, key(lcm), i, new, lcm))
        return out

    pending = []
    for n in range(len(basis)):
        pending.extend(make_pairs(n))
    pending_set = {(p[2], p[3]) for p in pending}

    def chain_useless(i, j, lcm):
        for k, (lmk, _, _) in enumerate(basis):
            if k == i or k == j:
                continue
            if _divides(lmk, lcm):
                a = (min(i, k), max(i, k))
                b = (min(j, k), max(j, k))
                if a not in pending_set and b not in pending_set:
                    return True
        return False

    def spoly(i, j, lcm):
        lmi, lci, gi = basis[i]
        lmj, lcj, gj = basis[j]
        mi, mj = _sub_exp(lcm, lmi), _sub_exp(lcm, lmj)
        s = _scaled(gi, 1 / lci, mi)
        _axpy(s, 1 / lcj, mj, gj)
        cof = None
        if track:
            cof = _Cof([dict() for _ in range(ngens)])
            cof.axpy(-1 / lci, mi, cofs[i])
            cof.axpy(1 / lcj, mj, cofs[j])
        return s, cof

    while pending:
        pending.sort(key=lambda t: (t[0], t[1], t[2], t[3]))
        if parallel and not track:
            smin = pending[0][0]
            batch = [t for t in pending if t[0] == smin]
            pending = [t for t in pending if t[0] != smin]
        else:
            batch = [pending.pop(0)]
        jobs = []
        for s, _, i, j, lcm in batch:
            pending_set.discard((i, j))
            if all(a == 0 or b == 0 for a, b in zip(basis[i][0], basis[j][0])):
                continue
            if chain_useless(i, j, lcm):
                continue
            sp, cof = spoly(i, j, lcm)
            budget.charge(1, progress={"basis_size": len(basis), "pending_pairs": len(pending)})
            jobs.append((s, sp, cof))
        if parallel and len(jobs) > 1:
            snapshot = list(basis)
            with ThreadPoolExecutor() as ex:
                rems = list(ex.map(_reduce_job, [(sp, snapshot, key, budget) for _, sp, _ in jobs]))
            results = list(zip([j[0] for j in jobs], rems, [None] * len(jobs)))
        else:
            results = []
            for s, sp, cof in jobs:
                r = reduce_terms(sp, basis, key, budget, cofs, cof)
                results.append((s, r, cof))
        for s, r, cof in results:
            if not r:
                continue
            if parallel and len(jobs) > 1:
                # the batch was reduced against a snapshot; finish against the current basis
                r = reduce_terms(r, basis, key, budget)
                if not r:
                    continue
            add(r, s, cof)
            new = len(basis) - 1
            if basis[new][0] == zero:
                # the unit ideal: stop early
                pending = []
                break
            np = make_pairs(new)
            pending.extend(np)
            pending_set.update((t[2], t[3]) for t in np)

    red, red_cofs = _reduce_basis(basis, cofs, key, budget)
    return GBResult(red, red_cofs, budget.used - start)


def _reduce_basis(basis, cofs, key, budget):
    track = cofs is not None
    if not basis:
        return [], ([] if track else None)
    nvars = len(basis[0][0])
    zero = (0,) * nvars
    for idx, (lm, lc, g) in enumerate(basis):
        if lm == zero:
            one = {zero: Fraction(1)}
            if track:
                c = cofs[idx].copy()
                c.scale(1 / lc)
                return [one], [c.parts]
            return [one], None
    # minimalize: keep the first element with each leading monomial, drop divisible ones
    keep = []
    for idx, (lm, _, _) in enumerate(basis):
        dominated = False
        for jdx, (lm2, _, _) in enumerate(basis):
            if jdx == idx:
                continue
            if _divides(lm2, lm) and (lm2 != lm or jdx < idx):
                dominated = True
                break
        if not dominated:
            keep.append(idx)
    keep.sort(key=lambda i: key(basis[i][0]), reverse=True)
    minimal = [basis[i] for i in keep]
    mcofs = [cofs[i] for i in keep] if track else None
    out, out_cofs = [], []
    for pos, (lm, lc, g) in enumerate(minimal):
        others = minimal[:pos] + minimal[pos + 1:]
        ocofs = (mcofs[:pos] + mcofs[pos + 1:]) if track else None
        # the leading term survives; reduce the tail only
        tail = dict(g)
        del tail[lm]
        pcof = None
        if track:
            pcof = mcofs[pos].copy()
        rtail = reduce_terms(tail, others, key, budget, ocofs, pcof)
        inv = 1 / lc
        terms = {lm: Fraction(1)}
        for e, v in rtail.items():
            terms[e] = v * inv
        out.append(terms)
        if track:
            pcof.scale(inv)
            out_cofs.append(pcof.parts)
    return out, (out_cofs if track else None)


def spoly_terms(f, g, key):
    lmf = max(f, key=key)
    lmg = max(g, key=key)
    lcm = _lcm(lmf, lmg)
    s = _scaled(f, 1 / f[lmf], _sub_exp(lcm, lmf))
    _axpy(s, 1 / g[lmg], _sub_exp(lcm, lmg), g)
    return s
