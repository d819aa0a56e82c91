"""Quotients under Condition UU: slices, invariants, orbit solving, gluing, θ-window."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial

from .action import (
    DerivationSet,
    FittingLadder,
    check_UU,
    coaction,
    coaction_ring,
    restrict_to_chart,
)
from .errors import ConditionFailure, ValidationError, VerificationError
from .graded import GradedAlgebra, affine_chart, max_weight_and_x0min, standard_monomials
from .kernel import Ideal, Polynomial, PolyRing, kernel_of_ring_map, subring_membership
from .kernel.linalg import adjugate_column, det_rational, inverse, nullspace
from .kernel.linalg import minors as all_minors

MAX_BASIS_CHANGES = 20


@dataclass
class SliceData:
    D: DerivationSet  # original derivations on the chart
    basis_change: list  # rows: new ξ'_i = Σ_j B[i][j] ξ_j; the first r-k span the slice directions
    s_subset: tuple  # indices (in the pre-permutation basis) spanning the stabiliser complement
    xs: list  # slice coordinates, weight -w, with ξ'_i x_j = δ_ij
    k: int
    new_D: DerivationSet = None

    @property
    def algebra(self):
        return self.D.algebra

    def to_json(self):
        return {
            "basis_change": [[str(c) for c in row] for row in self.basis_change],
            "s_subset": list(self.s_subset),
            "slices": [str(x) for x in self.xs],
            "k": self.k,
        }


def _identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _unit_rows(D, k):
    """First row subset R of size r-k whose maximal minors generate the unit ideal."""
    alg = D.algebra
    size = D.r - k
    M = [list(row) for row in D.images]
    for R in combinations(range(D.r), size):
        sub = [M[i] for i in R]
        mins = all_minors(sub, size, alg.ring.one())
        I = Ideal(alg.ring, [v for _, _, v in mins] + alg.relations.nonzero_gens())
        if I.is_unit():
            return R, mins
    return None, None


def find_slices(D: DerivationSet, k, seed=0):
    """Slice coordinates x_1..x_{r-k} for an affine chart where UU holds with rank k."""
    alg = D.algebra
    if alg.mode == "projective":
        raise ValidationError("slices are computed on affine charts")
    ladder = FittingLadder(D)
    if not ladder.is_zero(k - 1) or not ladder.is_unit(k):
        raise ConditionFailure(f"Condition UU with rank {k} does not hold on this chart")
    r = D.r
    size = r - k
    if size == 0:
        return SliceData(D, _identity(r), tuple(range(r)), [], k, D)
    rng = random.Random(seed)
    change = _identity(r)
    work = D
    R = None
    for attempt in range(MAX_BASIS_CHANGES + 1):
        R, mins = _unit_rows(work, k)
        if R is not None:
            break
        while True:
            change = [[Fraction(rng.randint(-3, 3)) for _ in range(r)] for _ in range(r)]
            if det_rational(change) != 0:
                break
        work = D.recombine(change)
    if R is None:
        raise ConditionFailure(
            f"no row subset with unit maximal minors after {MAX_BASIS_CHANGES} basis changes"
        )
    S = tuple(i for i in range(r) if i not in R)
    order = list(R) + list(S)
    B = [change[i] for i in order]
    newD = D.recombine(B)
    xs = _lift_slices(newD, size, mins)
    # Gaussian repair: make ξ'_i x_j the identity if it is merely an invertible constant matrix
    T = [[newD.apply(i, x) for x in xs] for i in range(size)]
    if not all(v.is_constant() for row in T for v in row):
        raise VerificationError("slice derivative matrix is not constant")
    Tc = [[v.constant_value() for v in row] for row in T]
    if Tc != _identity(size):
        if det_rational(Tc) == 0:
            raise VerificationError("slice derivative matrix is singular")
        # ξ_i x_j = T_ij, so x' = x · T^{-1} gives the identity
        Ti = inverse(Tc)
        xs = [sum((xs[a] * Ti[a][j] for a in range(size)), alg.ring.zero()) for j in range(size)]
        xs = [alg.reduce(x) for x in xs]
    for i in range(size):
        for j in range(size):
            v = newD.apply(i, xs[j])
            if v != (1 if i == j else 0):
                raise VerificationError("slice identity ξ_i x_j = δ_ij failed")
    for x in xs:
        if x and alg.weights_of(x) != {-D.w}:
            raise VerificationError("slice is not of weight -w")
    return SliceData(D, B, S, xs, k, newD)


def _lift_slices(newD, size, mins):
    """x_i from a unit certificate of the maximal minors of the first ``size`` rows.

    With 1 = Σ_S h_S det(M_R[:, S]) the column c = Σ_S h_S adj(M_R[:, S]) e_i
    solves M_R c = e_i; keeping the weight-0 part of c against the weight -w
    generators gives an element x_i with ξ'_a x_i = δ_ai.
    """
    alg = newD.algebra
    ring = alg.ring
    n = alg.nvars
    M = [list(newD.images[i]) for i in range(size)]
    cols = [cs for _, cs, _ in mins]
    dets = [v for _, _, v in mins]
    I = Ideal(ring, dets + alg.relations.nonzero_gens())
    cof = I.lift(ring.one())
    hs = cof[: len(dets)]
    xs = []
    for i in range(size):
        c = [ring.zero() for _ in range(n)]
        for h, cs in zip(hs, cols):
            if not h:
                continue
            sub = [[M[a][b] for b in cs] for a in range(size)]
            adj = adjugate_column(sub, i, ring.one())
            for pos, col in enumerate(cs):
                c[col] = c[col] + h * adj[pos]
        x = ring.zero()
        for j in range(n):
            if alg.weights[j] != -newD.w or not c[j]:
                continue
            c0 = {e: v for e, v in alg.reduce(c[j]).terms.items() if alg.monomial_weight(e) == 0}
            if c0:
                x = x + Polynomial(ring, c0) * ring.gen(j)
        xs.append(alg.reduce(x))
    return xs


def _exp_minus(D, i, x, f):
    """exp(-x ξ_i) f = Σ_n (-x)^n / n! ξ_i^n f."""
    alg = D.algebra
    total = f
    cur = f
    n = 0
    while True:
        cur = D.apply(i, cur)
        if not cur:
            return alg.reduce(total)
        n += 1
        if n > 10000:
            raise ValidationError("derivation is not locally nilpotent")
        total = total + cur * (-x) ** n * Fraction(1, factorial(n))


def dixmier_project(slices: SliceData, f, verify=True):
    """π(f) = exp(-x_{r'} ξ'_{r'}) ∘ ... ∘ exp(-x_1 ξ'_1) f, checked invariant under every ξ."""
    D = slices.new_D
    alg = D.algebra
    g = alg.reduce(alg.element(f))
    for i, x in enumerate(slices.xs):
        g = _exp_minus(D, i, x, g)
    if verify:
        for i in range(slices.D.r):
            if slices.D.apply(i, g):
                raise VerificationError(f"projection of {f} is not invariant under derivation {i}")
    return g


@dataclass
class InvariantPresentation:
    generators: list  # invariant elements of the chart algebra
    names: list
    relations: Ideal  # in Q[names]
    section_relations: Ideal  # chart relations + slices: A/(xs) ≅ A^U

    def to_json(self):
        return {
            "generators": {n: str(g) for n, g in zip(self.names, self.generators)},
            "relations": [str(g) for g in self.relations.groebner()] if not self.relations.is_zero() else [],
        }


def invariant_presentation(slices: SliceData, names=None):
    alg = slices.algebra
    gens = []
    for y in alg.gens():
        p = dixmier_project(slices, y)
        if p and p not in gens and not alg.is_zero(p):
            gens.append(p)
    if names is None:
        names = [f"v{i + 1}" for i in range(len(gens))]
    if gens:
        rel = kernel_of_ring_map(gens, alg.relations, source_names=names)
        # A^U ≅ A/(xs): the same relations come out modulo the slices
        sec = alg.relations + slices.xs
        check = kernel_of_ring_map(gens, sec, source_names=names)
        if check != rel:
            raise VerificationError("invariant ring does not match A/(slices)")
    else:
        rel = Ideal(PolyRing([]), [])
        sec = alg.relations + slices.xs
    return InvariantPresentation(gens, names, rel, sec)


def polynomial_ring_certificate(slices: SliceData, inv: InvariantPresentation):
    """Every generator lies in Q[invariants, slices], and the slices are independent over the invariants."""
    alg = slices.algebra
    basis = list(inv.generators) + list(slices.xs)
    snames = [f"s{i + 1}" for i in range(len(slices.xs))]
    all_names = list(inv.names) + snames
    expressions = {}
    for n, y in zip(alg.names, alg.gens()):
        ok, expr = subring_membership(y, basis, alg.relations, names=all_names)
        if not ok:
            return False, {"not_generated": n}
        expressions[n] = str(expr)
    if not basis:
        return True, {"expressions": expressions}
    combined = kernel_of_ring_map(basis, alg.relations, source_names=all_names)
    if inv.generators:
        base = Ideal(combined.ring, [g.embed(combined.ring) for g in inv.relations.gens])
    else:
        base = Ideal(combined.ring, [])
    independent = combined == base
    return independent, {"expressions": expressions, "independent": independent}


def solve_group_element(slices: SliceData, inv: InvariantPresentation, p, q):
    """Parameters t (original basis) with t·p = q when p, q share invariants, else None."""
    alg = slices.algebra
    p = [Fraction(v) for v in p]
    q = [Fraction(v) for v in q]
    for g in inv.generators:
        if g.evaluate(p) != g.evaluate(q):
            return None
    r = slices.D.r
    tn = [Fraction(0)] * r
    for i, x in enumerate(slices.xs):
        tn[i] = x.evaluate(q) - x.evaluate(p)
    B = slices.basis_change
    t = [sum((B[i][j] * tn[i] for i in range(r)), Fraction(0)) for j in range(r)]
    big, unames = coaction_ring(slices.D)
    moved = [coaction(slices.D, y, (big, unames)).evaluate(p + t) for y in alg.gens()]
    if moved != q:
        raise VerificationError("points with equal invariants are not related by the solved element")
    return t


@dataclass
class ChartQuotient:
    chart: object
    D: DerivationSet
    k: int
    slices: SliceData
    invariants: InvariantPresentation

    def to_json(self):
        return {
            "chart": self.chart.name,
            "meaning": self.chart.meaning,
            "algebra": self.chart.algebra.describe(),
            "derivations": self.D.rows_as_dicts(),
            "k": self.k,
            "slices": self.slices.to_json(),
            "invariants": self.invariants.to_json(),
        }


def chart_quotient(chart, D_chart, seed=0):
    res, _ = check_UU(D_chart)
    if not res.holds:
        raise ConditionFailure(f"Condition UU fails on chart {chart.name}", certificate=res.witness)
    if res.k is None:
        raise ConditionFailure(f"chart {chart.name} is empty")
    sl = find_slices(D_chart, res.k, seed)
    inv = invariant_presentation(sl)
    return ChartQuotient(chart, D_chart, res.k, sl, inv)


@dataclass
class TransitionData:
    charts: list
    g: dict  # (j, i) -> element of chart i equal to f_j / f_i
    expressions: dict  # (j, i) -> expression in the invariant generator names of chart i
    skipped: list
    cocycle_verified: bool

    def to_json(self):
        return {
            "transitions": [
                {"from": i, "to": j, "g": str(self.g[(j, i)]), "in_invariants": self.expressions[(j, i)]}
                for (j, i) in sorted(self.g, key=lambda t: (t[1], t[0]))
            ],
            "skipped_pairs": [list(p) for p in self.skipped],
            "cocycle_verified": self.cocycle_verified,
        }


def _to_localization(chart, g, ring, fs, z, others):
    """Chart element g ↦ class in S[z]/(z · Π fs - 1) of the matching fraction."""
    num_map = []
    scale = ring.one()
    for f in others:
        scale = scale * f.embed(ring)
    for n in chart.algebra.names:
        num_map.append(chart.numerators[n].embed(ring) * scale * z)
    return g.substitute(num_map, ring)


def glue_transitions(quotients):
    """g_ji = f_j/f_i on each overlap, with the cocycle checked on every triple overlap."""
    n = len(quotients)
    g, expr, skipped = {}, {}, []
    if n <= 1:
        return TransitionData([q.chart.name for q in quotients], g, expr, skipped, True)
    base = quotients[0].chart.base
    fs = [q.chart.f for q in quotients]

    def empty(*idx):
        prod = base.ring.one()
        for i in idx:
            prod = prod * fs[i]
        return base.is_nilpotent(prod)

    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if empty(i, j):
                if i < j:
                    skipped.append((i, j))
                continue
            qi = quotients[i]
            gji = qi.chart.dehomogenize(fs[j])
            for d in range(qi.D.r):
                if qi.D.apply(d, gji):
                    raise VerificationError(f"transition f_{j}/f_{i} is not invariant")
            ok, e = subring_membership(
                gji, qi.invariants.generators, qi.chart.algebra.relations, names=qi.invariants.names
            )
            if not ok:
                raise VerificationError(f"transition f_{j}/f_{i} is not in the invariant ring")
            g[(j, i)] = gji
            expr[(j, i)] = str(e)
    ring = base.ring
    (zname,) = ring.fresh_names("_w", 1)
    big = ring.extend([zname])
    z = big.gen(zname)
    for a, b, c in combinations(range(n), 3):
        if empty(a, b, c):
            continue
        prod_f = fs[a].embed(big) * fs[b].embed(big) * fs[c].embed(big)
        I = Ideal(big, [r.embed(big) for r in base.relations.nonzero_gens()] + [z * prod_f - 1])
        # g_ab on chart b, g_bc on chart c, g_ca on chart a
        pieces = [((a, b), b, (a, c)), ((b, c), c, (a, b)), ((c, a), a, (b, c))]
        total = big.one()
        for key, home, other in pieces:
            others = [fs[o] for o in other]
            total = total * _to_localization(quotients[home].chart, g[key], big, fs, z, others)
        if not I.contains(total - 1):
            raise VerificationError(f"cocycle condition fails on charts {(a, b, c)}")
    # pairwise inverse check g_ij g_ji = 1
    for i, j in combinations(range(n), 2):
        if (j, i) not in g:
            continue
        prod_f = fs[i].embed(big) * fs[j].embed(big)
        I = Ideal(big, [r.embed(big) for r in base.relations.nonzero_gens()] + [z * prod_f - 1])
        lhs = _to_localization(quotients[i].chart, g[(j, i)], big, fs, z, [fs[j]])
        rhs = _to_localization(quotients[j].chart, g[(i, j)], big, fs, z, [fs[i]])
        if not I.contains(lhs * rhs - 1):
            raise VerificationError(f"transition between charts {i} and {j} is not invertible")
    return TransitionData([q.chart.name for q in quotients], g, expr, skipped, True)


@dataclass
class ThetaWindow:
    weights: list
    theta: Fraction | None
    top: int

    def semistable(self, point):
        """Point given as coordinates aligned with ``weights``."""
        if self.theta is None:
            return False
        top = any(v != 0 for v, w in zip(point, self.weights) if w == self.top)
        low = any(v != 0 for v, w in zip(point, self.weights) if w < self.top)
        return top and low

    def to_json(self):
        return {
            "weights": list(self.weights),
            "theta": None if self.theta is None else str(self.theta),
            "semistable_empty": self.theta is None,
        }


def theta_window(weights):
    """θ at the midpoint of (−max, −2ndmax), over the distinct weights."""
    weights = [int(w) for w in weights]
    if not weights:
        raise ValidationError("the invariant section space is empty")
    distinct = sorted(set(weights), reverse=True)
    if len(distinct) == 1:
        return ThetaWindow(weights, None, distinct[0])
    theta = -Fraction(distinct[0] + distinct[1], 2)
    return ThetaWindow(weights, theta, distinct[0])


def invariant_sections(D: DerivationSet, m):
    """Basis of the U-invariant part of the degree-m piece, grouped by weight."""
    alg = D.algebra
    exps = standard_monomials(alg, m)
    by_weight = {}
    for e in exps:
        by_weight.setdefault(alg.monomial_weight(e), []).append(e)
    out = []
    ring = alg.ring
    for wt in sorted(by_weight, reverse=True):
        monos = by_weight[wt]
        # columns: monomials of this weight; rows: (derivation, target monomial)
        rows = {}
        for col, e in enumerate(monos):
            for i in range(D.r):
                img = D.apply(i, ring.monomial(e))
                for te, c in img.terms.items():
                    rows.setdefault((i, te), [Fraction(0)] * len(monos))[col] += c
        mat = list(rows.values())
        if mat:
            null = nullspace(mat)
        else:
            null = [[Fraction(int(a == b)) for b in range(len(monos))] for a in range(len(monos))]
        for vec in null:
            terms = {monos[c]: v for c, v in enumerate(vec) if v}
            out.append((wt, Polynomial(ring, terms)))
    return out


def uhat_quotient_report(D: DerivationSet, m=1, seed=0, k_stable=None):
    """Charts of X0_min with their UU quotients, invariant sections, θ and the gluing data."""
    alg = D.algebra
    if alg.mode != "projective":
        raise ValidationError("the Û-quotient report needs a projective cone")
    loc = max_weight_and_x0min(alg, m)
    if not loc.nonempty:
        raise ConditionFailure(
            "X0_min is empty: every maximal-weight section is nilpotent",
            certificate={"w_max": loc.w_max, "nilpotent": [str(f) for f in loc.nilpotent]},
        )
    quotients = []
    ks = set()
    for chart in loc.charts:
        Dc = restrict_to_chart(D, chart)
        cq = chart_quotient(chart, Dc, seed)
        quotients.append(cq)
        ks.add(cq.k)
    if len(ks) > 1:
        raise ConditionFailure(f"stabiliser rank is not constant over X0_min: {sorted(ks)}")
    trans = glue_transitions(quotients)
    sections = invariant_sections(D, m)
    window = theta_window([w for w, _ in sections]) if sections else None
    chart_reports = []
    for cq in quotients:
        rep = cq.to_json()
        lower = [s for w, s in sections if window is not None and w < window.top]
        lower_chart = [cq.chart.dehomogenize(s) for s in lower]
        extra = []
        if k_stable:
            extra = [cq.chart.dehomogenize(alg.element(g)) for g in k_stable]
        if window is None or window.theta is None:
            ss = False
        else:
            ss = any(not cq.chart.algebra.is_nilpotent(s) for s in lower_chart)
            if ss and extra:
                prod_ok = False
                for s in lower_chart:
                    for e in extra:
                        if not cq.chart.algebra.is_nilpotent(s * e):
                            prod_ok = True
                ss = prod_ok
        rep["semistable_nonempty"] = ss
        rep["unstable_locus"] = [str(s) for s in lower_chart if s]
        chart_reports.append(rep)
    return {
        "kind": "uhat_quotient",
        "m": m,
        "w_max": loc.w_max,
        "covers_whole_cone": loc.covers,
        "k": next(iter(ks)) if ks else None,
        "charts": chart_reports,
        "transitions": trans.to_json(),
        "invariant_sections": [{"weight": w, "section": str(s)} for w, s in sections],
        "theta_window": window.to_json() if window else None,
        "semistable_charts": [r["chart"] for r in chart_reports if r["semistable_nonempty"]],
    }


def affine_quotient_report(D: DerivationSet, seed=0):
    alg = D.algebra
    chart = affine_chart(alg)
    cq = chart_quotient(chart, D, seed)
    return {"kind": "affine_quotient", "k": cq.k, "charts": [cq.to_json()]}
