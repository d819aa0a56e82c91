"""Finitely presented algebras graded by a one-parameter torus, and their charts.

An algebra is ``Q[y_1..y_n] / relations`` with an integer weight on each
generator.  Three modes exist:

``affine``      all generator weights are <= 0, so no element has positive weight
``projective``  a cone: every generator also has projective degree 1
``graded``      no sign condition (used internally for localizations)
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .errors import ConditionFailure, ValidationError
from .kernel import Ideal, PolyRing, Polynomial, kernel_of_ring_map, radical_membership

MODES = ("affine", "projective", "graded")


class GradedAlgebra:
    def __init__(self, ring, weights, relations=(), mode="affine", check=True):
        if mode not in MODES:
            raise ValidationError(f"unknown mode {mode!r}")
        if isinstance(ring, (list, tuple, str)):
            ring = PolyRing(ring)
        weights = tuple(int(w) for w in weights)
        if len(weights) != ring.nvars:
            raise ValidationError("one weight per generator is required")
        self.ring = ring
        self.weights = weights
        self.mode = mode
        if isinstance(relations, Ideal):
            rel = relations if relations.ring == ring else relations.embed(ring)
        else:
            rel = Ideal(ring, list(relations))
        self.relations = rel
        if check:
            self._validate()

    def _validate(self):
        if self.mode == "affine":
            bad = [n for n, w in zip(self.ring.names, self.weights) if w > 0]
            if bad:
                raise ValidationError(
                    f"affine algebras need nonpositive weights; positive on {', '.join(bad)}"
                )
        for g in self.relations.nonzero_gens():
            if not self.is_homogeneous(g):
                raise ValidationError(f"relation {g} is not weight-homogeneous")
            if self.mode == "projective" and len({sum(e) for e in g.terms}) > 1:
                raise ValidationError(f"relation {g} is not homogeneous for the projective degree")

    # -- basics ---------------------------------------------------------------
    @property
    def names(self):
        return self.ring.names

    @property
    def nvars(self):
        return self.ring.nvars

    def weight_of(self, name):
        return self.weights[self.ring.index[name]]

    def gens(self):
        return self.ring.gens()

    def element(self, f):
        if isinstance(f, Polynomial):
            return f if f.ring == self.ring else f.embed(self.ring)
        if isinstance(f, str):
            return self.ring.parse(f)
        return self.ring.constant(f)

    def monomial_weight(self, exp):
        return sum(a * w for a, w in zip(exp, self.weights))

    def weights_of(self, f):
        return {self.monomial_weight(e) for e in f.terms}

    def is_homogeneous(self, f):
        return len(self.weights_of(f)) <= 1

    def weight(self, f):
        """Weight of a nonzero homogeneous element."""
        ws = self.weights_of(f)
        if len(ws) != 1:
            raise ValueError(f"{f} is not a nonzero homogeneous element")
        return next(iter(ws))

    def reduce(self, f):
        return self.relations.normal_form(self.element(f))

    def is_zero(self, f):
        return self.relations.contains(self.element(f))

    def is_nilpotent(self, f):
        return radical_membership(self.element(f), self.relations)

    def is_zero_algebra(self):
        return self.relations.is_unit()

    def with_relations(self, extra):
        """Quotient by additional (homogeneous) relations."""
        return GradedAlgebra(self.ring, self.weights, self.relations + list(extra), self.mode)

    def describe(self):
        return {
            "vars": [{"name": n, "weight": w} for n, w in zip(self.names, self.weights)],
            "relations": self.relations.canonical_strings() if self.relations.nonzero_gens() else [],
            "mode": self.mode,
        }

    def __repr__(self):
        vs = ", ".join(f"{n}:{w}" for n, w in zip(self.names, self.weights))
        return f"GradedAlgebra[{self.mode}]({vs} | {list(map(str, self.relations.nonzero_gens()))})"


def weight_decompose(algebra: GradedAlgebra, f):
    """Split the normal form of ``f`` into weight-homogeneous parts, by ascending weight."""
    f = algebra.reduce(f)
    parts = defaultdict(dict)
    for e, c in f.terms.items():
        parts[algebra.monomial_weight(e)][e] = c
    return [(w, Polynomial(algebra.ring, parts[w])) for w in sorted(parts)]


def _monomials_of_degree(n, d):
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        yield tuple(e)


def _leading_monomials(algebra):
    return [g.leading_monomial() for g in algebra.relations.groebner() if g]


def _is_standard(exp, lms):
    return not any(all(a <= b for a, b in zip(lm, exp)) for lm in lms)


def standard_monomials(algebra, degree):
    """Standard monomials of the given total degree (a basis of that graded piece)."""
    lms = _leading_monomials(algebra)
    out = [e for e in _monomials_of_degree(algebra.nvars, degree) if _is_standard(e, lms)]
    return out


def graded_piece_basis(algebra: GradedAlgebra, proj_degree=None, weight=0):
    """Monomial basis of the (degree, weight) piece, as polynomials.

    In affine mode the degree is ignored and the whole weight piece is returned,
    which requires every generator to have negative weight.
    """
    ring = algebra.ring
    if algebra.mode == "projective":
        if proj_degree is None or proj_degree < 0:
            raise ValidationError("projective pieces need a nonnegative degree")
        exps = [e for e in standard_monomials(algebra, proj_degree) if algebra.monomial_weight(e) == weight]
        return [ring.monomial(e) for e in exps]
    if any(w == 0 for w in algebra.weights):
        raise ValidationError("weight piece is infinite-dimensional: a generator has weight 0")
    if any(w > 0 for w in algebra.weights):
        raise ValidationError("weight pieces are only bounded for nonpositive weights")
    if weight > 0:
        return []
    lms = _leading_monomials(algebra)
    out = []
    # total degree is at most |weight| since every weight is <= -1
    for d in range(0, -weight + 1):
        for e in _monomials_of_degree(algebra.nvars, d):
            if algebra.monomial_weight(e) == weight and _is_standard(e, lms):
                out.append(ring.monomial(e))
    return out


@dataclass
class Chart:
    """Principal open chart X_f, presented as an affine graded algebra.

    ``algebra`` is the degree-zero localization.  Each chart variable stands
    for ``numerators[name] / f^power`` in the base; ``localization`` is the
    full ring S[z_f]/(z_f f - 1).
    """

    name: str
    base: GradedAlgebra
    f: Polynomial
    algebra: GradedAlgebra
    numerators: dict
    power: int = 1
    localization: GradedAlgebra | None = None
    inverse_name: str | None = None
    fast: bool = True
    meaning: dict = field(default_factory=dict)

    def dehomogenize(self, g):
        """Image in the chart of a homogeneous base element of degree power*n, as g / f^n."""
        g = self.base.element(g)
        if self.base.mode != "projective":
            return self.algebra.reduce(g.embed(self.algebra.ring))
        if not g:
            return self.algebra.ring.zero()
        degs = {sum(e) for e in g.terms}
        if len(degs) != 1 or next(iter(degs)) % self.power:
            raise ValueError(f"{g} is not homogeneous of a degree divisible by {self.power}")
        if self.fast:
            fi = self.base.ring.index[self.f.variable_names()[0]]
            ring = self.algebra.ring
            pos = [ring.index.get(n) for n in self.base.names]
            out = {}
            for e, c in g.terms.items():
                ne = [0] * ring.nvars
                zero = False
                for i, a in enumerate(e):
                    if i == fi or not a:
                        continue
                    if pos[i] is None:
                        zero = True
                        break
                    ne[pos[i]] += a
                if zero:
                    continue
                t = tuple(ne)
                out[t] = out.get(t, 0) + c
            return self.algebra.reduce(Polynomial(ring, out))
        return self.algebra.reduce(self._general_dehomogenize(g))

    def _general_dehomogenize(self, g):
        ring = self.algebra.ring
        base = self.base
        lookup = {}
        for name, num in self.numerators.items():
            lookup[next(iter(num.terms))] = ring.gen(name)
        out = ring.zero()
        for e, c in g.terms.items():
            # split the monomial into chunks of degree ``power`` in a fixed way
            flat = [i for i, a in enumerate(e) for _ in range(a)]
            prod = ring.constant(c)
            for s in range(0, len(flat), self.power):
                chunk = [0] * base.nvars
                for i in flat[s:s + self.power]:
                    chunk[i] += 1
                mono = base.reduce(base.ring.monomial(tuple(chunk)))
                piece = ring.zero()
                for me, mc in mono.terms.items():
                    piece = piece + lookup[me] * mc
                prod = prod * piece
            out = out + prod
        return out


def _nilpotent_probe(algebra, f, bound=8):
    """Bounded power probe: True if f^n is zero for some n <= bound."""
    p = algebra.ring.one()
    for _ in range(bound):
        p = algebra.reduce(p * f)
        if not p:
            return True
    return False


def make_chart(base: GradedAlgebra, f: Polynomial, degree: int):
    """Chart X_f for a homogeneous element f of projective degree ``degree``."""
    f = base.element(f)
    wf = base.weight(f)
    ring = base.ring
    # full localization S[z]/(z f - 1)
    (zname,) = ring.fresh_names("z", 1) if "z" in ring.index else ("z",)
    lring = ring.extend([zname])
    zl = lring.gen(zname)
    loc = GradedAlgebra(
        lring,
        base.weights + (-wf,),
        [g.embed(lring) for g in base.relations.nonzero_gens()] + [zl * f.embed(lring) - 1],
        mode="graded",
    )
    fname = str(f)
    if degree == 1 and len(f.terms) == 1 and len(f.variables()) == 1 and next(iter(f.terms.values())) == 1:
        # dehomogenize: set f = 1; the chart variable y stands for y/f
        v = f.variable_names()[0]
        keep = [n for n in ring.names if n != v]
        cring = PolyRing(keep)
        images = [cring.gen(n) if n != v else cring.one() for n in ring.names]
        rels = [g.substitute(images, cring) for g in base.relations.nonzero_gens()]
        cweights = [base.weight_of(n) - wf for n in keep]
        # generators of positive chart weight are zero in the base; kill them
        dead = [n for n, w in zip(keep, cweights) if w > 0]
        for n in dead:
            if not base.is_zero(ring.gen(n)):
                raise ValidationError(f"generator {n} outweighs the maximal-weight piece")
        if dead:
            rels += [cring.gen(n) for n in dead]
        alg = GradedAlgebra(cring, [min(w, 0) for w in cweights], rels, mode="affine")
        return Chart(
            name=f"X_{fname}",
            base=base,
            f=f,
            algebra=alg,
            numerators={n: ring.gen(n) for n in keep},
            power=1,
            localization=loc,
            inverse_name=zname,
            fast=True,
            meaning={n: f"{n}/{v}" for n in keep},
        )
    # general homogeneous localization: q_mu = mu / f over standard monomials mu of degree ``degree``
    monos = standard_monomials(base, degree)
    qnames = [f"q{i + 1}" for i in range(len(monos))]
    images = [ring.monomial(e).embed(lring) * zl for e in monos]
    rel = kernel_of_ring_map(images, loc.relations, source_names=qnames)
    qweights = [base.monomial_weight(e) - wf for e in monos]
    cring = rel.ring
    rels = rel.nonzero_gens()
    for n, w in zip(qnames, qweights):
        if w > 0:
            rels.append(cring.gen(n))
    alg = GradedAlgebra(cring, [min(w, 0) for w in qweights], rels, mode="affine")
    return Chart(
        name=f"X_{fname}",
        base=base,
        f=f,
        algebra=alg,
        numerators={n: ring.monomial(e) for n, e in zip(qnames, monos)},
        power=degree,
        localization=loc,
        inverse_name=zname,
        fast=False,
        meaning={n: f"({ring.monomial(e)})/({fname})" for n, e in zip(qnames, monos)},
    )


def affine_chart(algebra: GradedAlgebra):
    """The whole affine scheme viewed as its own (trivial) chart."""
    if algebra.mode != "affine":
        raise ValidationError("affine_chart needs an affine algebra")
    one = algebra.ring.one()
    return Chart(
        name="X",
        base=algebra,
        f=one,
        algebra=algebra,
        numerators={n: algebra.ring.gen(n) for n in algebra.names},
        power=0,
        localization=algebra,
        fast=True,
        meaning={n: n for n in algebra.names},
    )


@dataclass
class MinimalLocus:
    w_max: int
    charts: list
    nonempty: bool
    piece: list  # basis of the (m, w_max) piece
    nilpotent: list  # basis elements found nilpotent
    covers: bool  # chart elements plus relations form an irrelevant ideal, so X0_min = X


def max_weight_and_x0min(algebra: GradedAlgebra, m=1):
    """Maximal weight of the degree-m piece and the charts covering X0_min."""
    if algebra.mode != "projective":
        raise ValidationError("X0_min is defined for projective cones")
    if m < 1:
        raise ValidationError("degree m must be positive")
    if algebra.is_zero_algebra():
        raise ValidationError("the zero algebra has no maximal weight")
    exps = standard_monomials(algebra, m)
    if not exps:
        raise ValidationError(f"degree-{m} piece is zero")
    w_max = max(algebra.monomial_weight(e) for e in exps)
    piece = [algebra.ring.monomial(e) for e in exps if algebra.monomial_weight(e) == w_max]
    charts, nil = [], []
    for f in piece:
        if algebra.is_nilpotent(f):
            nil.append(f)
        else:
            charts.append(make_chart(algebra, f, m))
    covers = False
    if charts:
        J = algebra.relations + [c.f for c in charts]
        covers = all(radical_membership(g, J) for g in algebra.gens())
    return MinimalLocus(w_max, charts, bool(charts), piece, nil, covers)


def zmin_presentation(algebra: GradedAlgebra, m=1):
    """Cone over Z_min: the subring generated by the (m, w_max) piece."""
    loc = max_weight_and_x0min(algebra, m)
    if not loc.nonempty:
        raise ConditionFailure(
            "X0_min is empty: every maximal-weight section is nilpotent",
            certificate={"nilpotent": [str(f) for f in loc.nilpotent]},
        )
    piece = loc.piece
    names = []
    for i, f in enumerate(piece):
        vs = f.variable_names()
        if m == 1 and len(vs) == 1:
            names.append(vs[0])
        else:
            names.append(f"p{i + 1}")
    if len(set(names)) != len(names):
        names = [f"p{i + 1}" for i in range(len(piece))]
    rel = kernel_of_ring_map(piece, algebra.relations, source_names=names)
    return GradedAlgebra(rel.ring, [loc.w_max] * len(piece), rel.nonzero_gens(), mode="projective")
