"""Commuting homogeneous derivations, the coaction, Fitting ideals and the UU / WUU checks.

Derivation indices are 0-based throughout the Python API.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil, factorial

from .errors import ConditionFailure, ValidationError
from .graded import GradedAlgebra, _monomials_of_degree, affine_chart, max_weight_and_x0min
from .kernel import Ideal, Polynomial, radical_membership, saturation
from .kernel.linalg import det_poly, minors, rank


class DerivationSet:
    """r commuting derivations of common weight w > 0, given on generators."""

    def __init__(self, algebra: GradedAlgebra, w, images, check=True):
        self.algebra = algebra
        self.w = int(w)
        ring = algebra.ring
        rows = []
        for img in images:
            if isinstance(img, dict):
                unknown = set(img) - set(ring.names)
                if unknown:
                    raise ValidationError(f"derivation mentions unknown generators {sorted(unknown)}")
                row = [algebra.reduce(algebra.element(img.get(n, 0))) for n in ring.names]
            else:
                row = [algebra.reduce(algebra.element(v)) for v in img]
                if len(row) != ring.nvars:
                    raise ValidationError("derivation row length differs from the number of generators")
            rows.append(tuple(row))
        self.images = tuple(rows)
        if check:
            self._validate()

    @property
    def r(self):
        return len(self.images)

    def _validate(self):
        alg = self.algebra
        if self.w <= 0:
            raise ValidationError("the derivation weight w must be positive")
        for i, row in enumerate(self.images):
            for n, img in zip(alg.names, row):
                if not img:
                    continue
                ws = alg.weights_of(img)
                want = alg.weight_of(n) + self.w
                if ws != {want}:
                    raise ValidationError(
                        f"derivation {i}: image of {n} has weights {sorted(ws)}, expected {want}"
                    )
                if alg.mode == "projective" and {sum(e) for e in img.terms} != {1}:
                    raise ValidationError(f"derivation {i}: image of {n} is not of degree 1")
        for i in range(self.r):
            for g in alg.relations.nonzero_gens():
                if not alg.is_zero(self.apply(i, g)):
                    raise ValidationError(f"derivation {i} does not preserve relation {g}")
        for i in range(self.r):
            for j in range(i + 1, self.r):
                for n in alg.names:
                    y = alg.ring.gen(n)
                    c = self.apply(i, self.apply(j, y)) - self.apply(j, self.apply(i, y))
                    if not alg.is_zero(c):
                        raise ValidationError(f"derivations {i} and {j} do not commute on {n}")

    def apply(self, i, f, reduce=True):
        """Leibniz extension of derivation ``i`` applied to ``f``."""
        alg = self.algebra
        f = alg.element(f)
        out = alg.ring.zero()
        row = self.images[i]
        for j in f.variables():
            if row[j]:
                out = out + f.diff(j) * row[j]
        return alg.reduce(out) if reduce else out

    def nilpotency_bound(self, name):
        """N with ξ^N(y) = 0 forced by weights: ceil((1 - wt(y)) / w)."""
        return max(1, ceil((1 - self.algebra.weight_of(name)) / self.w))

    def rows_as_dicts(self):
        return [{n: str(v) for n, v in zip(self.algebra.names, row) if v} for row in self.images]

    def recombine(self, matrix):
        """New derivation set with ξ'_i = Σ_j matrix[i][j] ξ_j."""
        rows = []
        for coeffs in matrix:
            row = []
            for j in range(self.algebra.nvars):
                acc = self.algebra.ring.zero()
                for c, old in zip(coeffs, self.images):
                    if c:
                        acc = acc + old[j] * Fraction(c)
                row.append(acc)
            rows.append(row)
        return DerivationSet(self.algebra, self.w, rows, check=False)

    def __repr__(self):
        return f"DerivationSet(r={self.r}, w={self.w}, {self.rows_as_dicts()})"


def apply_derivation(D: DerivationSet, i, f):
    return D.apply(i, f)


def coaction_ring(D: DerivationSet):
    """Ring A[u_1..u_r] with fresh names for the dual coordinates."""
    ring = D.algebra.ring
    unames = [f"u{i + 1}" for i in range(D.r)]
    if any(n in ring.index for n in unames):
        unames = ring.fresh_names("u_", D.r)
    return ring.extend(unames), unames


def _exp_flow(D, i, g, big, nvars, uvar, max_terms=10000):
    """exp(u_i ξ_i) g in the extended ring, with ξ_i(u) = 0."""
    alg = D.algebra
    row = [v.embed(big) for v in D.images[i]]
    rel = Ideal(big, [r.embed(big) for r in alg.relations.nonzero_gens()])
    total = g
    cur = g
    n = 0
    while True:
        nxt = big.zero()
        for j in cur.variables():
            if j < nvars and row[j]:
                nxt = nxt + cur.diff(j) * row[j]
        nxt = rel.normal_form(nxt) if rel.nonzero_gens() else nxt
        if not nxt:
            return total
        n += 1
        if n > max_terms:
            raise ValidationError("derivation is not locally nilpotent on this element")
        cur = nxt
        total = total + cur * uvar**n * Fraction(1, factorial(n))


def coaction(D: DerivationSet, f, ring_and_names=None):
    """σ*(f) = Σ_α u^α/α! ξ^α(f) in A[u_1..u_r]."""
    big, unames = ring_and_names or coaction_ring(D)
    g = D.algebra.element(f).embed(big)
    nvars = D.algebra.nvars
    for i in reversed(range(D.r)):
        g = _exp_flow(D, i, g, big, nvars, big.gen(unames[i]))
    return g


def flow_point(D: DerivationSet, point, t):
    """Image of a rational point under the group element with parameters t."""
    big, unames = coaction_ring(D)
    vals = list(point) + list(t)
    out = []
    for n in D.algebra.names:
        out.append(coaction(D, D.algebra.ring.gen(n), (big, unames)).evaluate(vals))
    return out


def action_matrix(D: DerivationSet):
    """Rows are derivations, columns generators: M[i][j] = ξ_i.y_j."""
    return [list(row) for row in D.images]


class FittingLadder:
    """Fit_k = ideal of (r-k)-minors of the action matrix, with Fit_{<0} = 0 and Fit_{>=r} = 1."""

    def __init__(self, D: DerivationSet):
        self.D = D
        self.matrix = action_matrix(D)
        self._fit = {}
        self._minors = {}

    @property
    def r(self):
        return self.D.r

    def minors(self, k):
        """List of (rows, cols, value) for the (r-k)-minors, values reduced."""
        if k in self._minors:
            return self._minors[k]
        alg = self.D.algebra
        size = self.r - k
        if size <= 0 or k < 0:
            out = []
        else:
            out = [(rs, cs, alg.reduce(v)) for rs, cs, v in minors(self.matrix, size, alg.ring.one())]
        self._minors[k] = out
        return out

    def fit(self, k):
        if k in self._fit:
            return self._fit[k]
        alg = self.D.algebra
        ring = alg.ring
        if k < 0:
            I = Ideal(ring, [ring.zero()])
        elif k >= self.r:
            I = Ideal(ring, [ring.one()])
        else:
            vals = []
            seen = set()
            for _, _, v in self.minors(k):
                if v and v not in seen:
                    seen.add(v)
                    vals.append(v)
            I = Ideal(ring, vals or [ring.zero()])
        self._fit[k] = I
        return I

    def with_relations(self, k):
        return self.fit(k) + self.D.algebra.relations

    def is_zero(self, k):
        alg = self.D.algebra
        return all(alg.is_zero(g) for g in self.fit(k).gens)

    def is_unit(self, k):
        return self.with_relations(k).is_unit()

    def first_nonzero(self):
        """k = min{i : Fit_i != 0}, or None for the zero algebra."""
        if self.D.algebra.is_zero_algebra():
            return None
        for k in range(0, self.r + 1):
            if not self.is_zero(k):
                return k
        return self.r


def fitting_ideal(D_or_ladder, k):
    ladder = D_or_ladder if isinstance(D_or_ladder, FittingLadder) else FittingLadder(D_or_ladder)
    return ladder.fit(k)


def evaluate_matrix(M, point):
    return [[v.evaluate(point) for v in row] for row in M]


def check_point(algebra: GradedAlgebra, point):
    point = [Fraction(v) for v in point]
    if len(point) != algebra.nvars:
        raise ValidationError(f"point has {len(point)} coordinates, expected {algebra.nvars}")
    for g in algebra.relations.nonzero_gens():
        if g.evaluate(point) != 0:
            raise ValidationError(f"point {list(map(str, point))} fails relation {g}")
    return point


def stab_dim_at_point(D: DerivationSet, point):
    """r - rank of the action matrix evaluated at a rational point."""
    point = check_point(D.algebra, point)
    if D.r == 0:
        return 0
    return D.r - rank(evaluate_matrix(action_matrix(D), point))


@dataclass
class UUResult:
    holds: bool
    k: int | None
    witness: dict = field(default_factory=dict)

    def to_json(self):
        return {"holds": self.holds, "k": self.k, "witness": self.witness}


def check_UU(D: DerivationSet):
    """Condition UU on an affine chart: Fit_{k-1} = 0 and Fit_k = 1 for k the first nonzero index."""
    ladder = FittingLadder(D)
    alg = D.algebra
    if alg.is_zero_algebra():
        return UUResult(True, None, {"empty_chart": True}), ladder
    k = ladder.first_nonzero()
    I = ladder.with_relations(k)
    if I.is_unit():
        gens = list(I.gens)
        cof = I.lift(alg.ring.one())
        cert = [
            {"generator": str(g), "cofactor": str(c)} for g, c in zip(gens, cof) if c
        ]
        return UUResult(True, k, {"unit_certificate": cert}), ladder
    nonzero = next(g for g in ladder.fit(k).gens if not alg.is_zero(g))
    witness = {
        "k_min": k,
        "fit_k_groebner": I.canonical_strings(),
        "nonzero_element_of_fit_k": str(nonzero),
        "reason": f"Fit_{k} is nonzero but not the unit ideal",
    }
    nil = [str(g) for g in ladder.fit(k).gens if g and alg.is_nilpotent(g)]
    if nil and len(nil) == len([g for g in ladder.fit(k).gens if not alg.is_zero(g)]):
        witness["nilpotent_witness"] = nil
    return UUResult(False, None, witness), ladder


def restrict_to_chart(D: DerivationSet, chart):
    """Derivations induced on the degree-zero localization of a chart."""
    base = chart.base
    if chart.algebra is base:
        return D
    for i in range(D.r):
        if not base.is_zero(D.apply(i, chart.f)):
            raise ValidationError(f"derivation {i} does not kill the chart element {chart.f}")
    rows = []
    for i in range(D.r):
        row = {}
        for name, num in chart.numerators.items():
            row[name] = chart.dehomogenize(D.apply(i, num))
        rows.append(row)
    return DerivationSet(chart.algebra, D.w, rows)


@dataclass
class Candidate:
    a: Polynomial
    rows: tuple
    gs: tuple

    def to_json(self):
        return {"a": str(self.a), "rows": list(self.rows), "g": [str(g) for g in self.gs]}


def weight_pool(algebra: GradedAlgebra, weight, degree):
    """Nonzero standard monomials of the given weight and total degree 1..degree."""
    ring = algebra.ring
    lms = [g.leading_monomial() for g in algebra.relations.groebner() if g]
    out = []
    for d in range(1, degree + 1):
        for e in _monomials_of_degree(ring.nvars, d):
            if algebra.monomial_weight(e) != weight:
                continue
            if any(all(a <= b for a, b in zip(lm, e)) for lm in lms):
                continue
            out.append(ring.monomial(e))
    return out


def determinant_candidates(D: DerivationSet, k, pool_degree=2):
    """All a = det(ξ_{rows}.g) with g drawn from weight -w monomials, weight 0 and nonzero."""
    alg = D.algebra
    size = D.r - k
    if size <= 0:
        return [Candidate(alg.ring.one(), (), ())]
    pool = weight_pool(alg, -D.w, pool_degree)
    table = {}
    for g in pool:
        table[g] = [D.apply(i, g) for i in range(D.r)]
    out = []
    seen = set()
    for gs in combinations(pool, size):
        for rows in combinations(range(D.r), size):
            mat = [[table[g][i] for g in gs] for i in rows]
            a = alg.reduce(det_poly(mat, alg.ring.one()))
            if not a:
                continue
            norm = a.monic()
            if norm in seen:
                continue
            seen.add(norm)
            out.append(Candidate(a, rows, gs))
    return out


@dataclass
class WUUChartWitness:
    chart: object
    D: DerivationSet
    k_chart: int | None
    uu: bool
    candidates: list
    accepted: list
    rejected: list

    def to_json(self):
        return {
            "chart": self.chart.name,
            "uu": self.uu,
            "k_chart": self.k_chart,
            "accepted": [c.to_json() for c in self.accepted],
            "rejected": self.rejected,
        }


@dataclass
class WUUResult:
    holds: bool
    status: str  # "holds" | "fails" | "inconclusive"
    k: int | None
    chart: object = None
    a: Polynomial | None = None
    witnesses: list = field(default_factory=list)
    reason: str = ""

    def to_json(self):
        return {
            "holds": self.holds,
            "status": self.status,
            "k": self.k,
            "chart": self.chart.name if self.chart is not None else None,
            "a": str(self.a) if self.a is not None else None,
            "charts": [w.to_json() for w in self.witnesses],
            "reason": self.reason,
        }


def _charts_of(algebra, m):
    if algebra.mode == "affine":
        return [affine_chart(algebra)]
    loc = max_weight_and_x0min(algebra, m)
    if not loc.nonempty:
        raise ConditionFailure(
            "X0_min is empty: every maximal-weight section is nilpotent",
            certificate={"w_max": loc.w_max, "nilpotent": [str(f) for f in loc.nilpotent]},
        )
    return loc.charts


def minimal_rank(chart_derivations):
    """k = min over charts of the first nonzero Fitting index."""
    ks = []
    for Dc in chart_derivations:
        if Dc.algebra.is_zero_algebra():
            continue
        ks.append(FittingLadder(Dc).first_nonzero())
    return min(ks) if ks else None


def check_WUU(D: DerivationSet, m=1, pool_degree=2):
    """Condition WUU with a constructive witness per chart of X0_min."""
    alg = D.algebra
    charts = _charts_of(alg, m)
    chart_D = [restrict_to_chart(D, c) for c in charts]
    k = minimal_rank(chart_D)
    witnesses = []
    best = None
    for chart, Dc in zip(charts, chart_D):
        calg = Dc.algebra
        ladder = FittingLadder(Dc)
        kc = ladder.first_nonzero()
        uu = kc == k and ladder.is_unit(k)
        cands = determinant_candidates(Dc, k, pool_degree)
        accepted, rejected = [], []
        prev = ladder.fit(k - 1)
        for c in cands:
            if calg.is_nilpotent(c.a):
                rejected.append({"a": str(c.a), "reason": "nilpotent"})
                continue
            sat, _ = saturation(calg.relations, c.a)
            if not all(sat.contains(g) for g in prev.gens):
                rejected.append({"a": str(c.a), "reason": f"Fit_{k - 1} survives on the locus a != 0"})
                continue
            accepted.append(c)
        if uu and not accepted:
            accepted.append(Candidate(calg.ring.one(), (), ()))
        w = WUUChartWitness(chart, Dc, kc, uu, cands, accepted, rejected)
        witnesses.append(w)
        if accepted and best is None:
            best = (chart, accepted[0].a)
    if best is not None:
        return WUUResult(True, "holds", k, best[0], best[1], witnesses, "")
    # definite failure: every weight-0 generator of Fit_k is nilpotent on every chart
    definite = True
    for Dc in chart_D:
        calg = Dc.algebra
        for _, _, v in FittingLadder(Dc).minors(k):
            if v and calg.is_homogeneous(v) and calg.weight(v) == 0 and not calg.is_nilpotent(v):
                definite = False
    if definite:
        reason = f"every weight-0 generator of Fit_{k} is nilpotent on every chart"
        return WUUResult(False, "fails", k, None, None, witnesses, reason)
    reason = f"no determinant witness found with pool degree {pool_degree}; try a larger pool"
    return WUUResult(False, "inconclusive", k, None, None, witnesses, reason)


def localize_derivations(D: DerivationSet, f):
    """Derivations on A[z]/(z f - 1), with ξ(z) = -z^2 ξ(f)."""
    alg = D.algebra
    f = alg.element(f)
    ring = alg.ring
    (zname,) = ring.fresh_names("z", 1) if "z" in ring.index else ("z",)
    big = ring.extend([zname])
    z = big.gen(zname)
    fb = f.embed(big)
    loc = GradedAlgebra(
        big,
        alg.weights + (-alg.weight(f),),
        [g.embed(big) for g in alg.relations.nonzero_gens()] + [z * fb - 1],
        mode="graded",
    )
    rows = []
    for i, row in enumerate(D.images):
        new = [v.embed(big) for v in row]
        new.append(-(z**2) * D.apply(i, f).embed(big))
        rows.append(new)
    return DerivationSet(loc, D.w, rows)
