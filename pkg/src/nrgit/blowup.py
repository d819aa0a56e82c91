"""Blowing up a chart along the U-sweep of the unstable locus, turning WUU into UU.

On a chart with algebra A, the centre seed is I = <negative-weight generators>
+ Fit_k and the centre is J = {g : σ*(g) ∈ I·A[u]}.  For a determinant
a = det(ξ_{rows}.g_•) the affine blow-up chart is A[J/a], presented by fresh
variables z_h = h/a over the generators h of J.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .action import (
    Candidate,
    DerivationSet,
    FittingLadder,
    check_UU,
    coaction,
    coaction_ring,
    determinant_candidates,
)
from .errors import ConditionFailure, VerificationError
from .graded import GradedAlgebra
from .kernel import Ideal, PolyRing, kernel_of_ring_map, radical_membership, saturation
from .kernel.linalg import det_poly


@dataclass
class CentreData:
    D: DerivationSet
    k: int
    I: Ideal
    J: Ideal
    chart: object = None

    def to_json(self):
        return {
            "k": self.k,
            "I": _gb_strings(self.I, self.D.algebra),
            "J": _gb_strings(self.J, self.D.algebra),
        }


def _gb_strings(I, alg):
    full = I + alg.relations
    if full.is_unit():
        return ["1"]
    return [str(g) for g in full.groebner() if not alg.is_zero(g)]


def centre_ideal(D: DerivationSet, k, chart=None):
    alg = D.algebra
    ring = alg.ring
    neg = [ring.gen(n) for n, w in zip(alg.names, alg.weights) if w < 0]
    fit = FittingLadder(D).fit(k)
    I = Ideal(ring, neg + [g for g in fit.gens if g])
    if (I + alg.relations).is_unit():
        J = Ideal(ring, [ring.one()])
        return CentreData(D, k, I, J, chart)
    big, unames = coaction_ring(D)
    images = [coaction(D, y, (big, unames)) for y in alg.gens()]
    target = Ideal(big, [g.embed(big) for g in alg.relations.nonzero_gens() + I.nonzero_gens()])
    ker = kernel_of_ring_map(images, target, source_names=alg.names)
    J = Ideal(ring, [g.embed(ring) for g in ker.gens])
    Jr = J + alg.relations
    gens = [g for g in Jr.groebner() if not alg.is_zero(g)]
    J = Ideal(ring, gens or [ring.zero()])
    for i in range(D.r):
        for h in J.gens:
            if not Jr.contains(D.apply(i, h)):
                raise VerificationError(f"centre is not stable under derivation {i}")
    if not (I + alg.relations).contains_ideal(J):
        raise VerificationError("centre is not contained in its seed ideal")
    return CentreData(D, k, I, J, chart)


def candidate_a_elements(centre: CentreData, pool_degree=2):
    """Determinant elements a that are non-nilpotent, lie in J, and clear Fit_{k-1} where a != 0."""
    D, k = centre.D, centre.k
    alg = D.algebra
    prev = FittingLadder(D).fit(k - 1)
    Jr = centre.J + alg.relations
    out = []
    for c in determinant_candidates(D, k, pool_degree):
        if alg.is_nilpotent(c.a):
            continue
        if not Jr.contains(c.a):
            continue
        sat, _ = saturation(alg.relations, c.a)
        if not all(sat.contains(g) for g in prev.gens):
            continue
        out.append(c)
    return out


def select_cover(candidates, algebra):
    """Greedy subset of candidates whose loci {a != 0} are not already covered."""
    chosen = []
    for c in candidates:
        covered = Ideal(algebra.ring, [d.a for d in chosen] + algebra.relations.nonzero_gens())
        if chosen and radical_membership(c.a, covered):
            continue
        chosen.append(c)
    return chosen


@dataclass
class BlowupChart:
    centre: CentreData
    candidate: Candidate
    algebra: GradedAlgebra
    lifted: DerivationSet
    zmap: dict  # z name -> generator h of J with z = h/a
    constants: list  # (h, c) for generators h of J equal to c·a
    saturation_exponent: int
    name: str = ""
    b: list = field(default_factory=list)

    @property
    def a(self):
        return self.candidate.a

    def to_json(self):
        return {
            "name": self.name,
            "a": str(self.a),
            "rows": list(self.candidate.rows),
            "g": [str(g) for g in self.candidate.gs],
            "z": {n: f"({h})/({self.a})" for n, h in self.zmap.items()},
            "algebra": self.algebra.describe(),
            "lifted_derivations": self.lifted.rows_as_dicts(),
            "b_elements": [str(b) for b in self.b],
        }


def _fresh_z(ring, count):
    out, i = [], 0
    while len(out) < count:
        i += 1
        n = f"z{i}"
        if n not in ring.index:
            out.append(n)
    return out


def blowup_chart(centre: CentreData, cand: Candidate, name=""):
    D = centre.D
    alg = D.algebra
    ring = alg.ring
    a = alg.reduce(cand.a)
    if centre.J.is_unit() or (centre.J + alg.relations).is_unit():
        hs = [ring.one()]
    else:
        hs = list(centre.J.gens)
    zh, consts = [], []
    lca = a.terms[a.leading_monomial()]
    for h in hs:
        lch = h.terms[h.leading_monomial()]
        if (h * lca - a * lch).is_zero():
            # h is a constant multiple of a, so h/a needs no new variable
            consts.append((h, lch / lca))
            continue
        zh.append(h)
    znames = _fresh_z(ring, len(zh))
    big = ring.extend(znames)
    ab = a.embed(big)
    weights = list(alg.weights) + [alg.weight(h) - alg.weight(a) for h in zh]
    gens = [g.embed(big) for g in alg.relations.nonzero_gens()]
    gens += [ab * big.gen(z) - h.embed(big) for z, h in zip(znames, zh)]
    sat, n = saturation(Ideal(big, gens), ab)
    balg = GradedAlgebra(big, weights, sat.nonzero_gens(), mode=alg.mode if alg.mode != "projective" else "graded")
    # lifted derivations: ξ(z_h) = (ξh - z_h ξa) / a, division certified in the saturated ring
    with_a = Ideal(big, [ab] + list(sat.nonzero_gens()))
    rows = []
    for i in range(D.r):
        row = {nm: D.images[i][j].embed(big) for j, nm in enumerate(alg.names)}
        xa = D.apply(i, a).embed(big)
        for z, h in zip(znames, zh):
            num = D.apply(i, h).embed(big) - big.gen(z) * xa
            num = balg.reduce(num)
            if not num:
                row[z] = big.zero()
                continue
            cof = with_a.lift(num)
            if cof is None:
                raise VerificationError(f"a does not divide the lifted derivative of {z}")
            q = balg.reduce(cof[0])
            if not balg.is_zero(ab * q - num):
                raise VerificationError("division by a is not exact")
            row[z] = q
        rows.append(row)
    lifted = DerivationSet(balg, D.w, rows)
    bc = BlowupChart(centre, cand, balg, lifted, dict(zip(znames, zh)), consts, n, name)
    bc.b = b_elements(bc)
    return bc


def b_elements(bc: BlowupChart):
    """b_i = det with row i replaced by (g_1..g_{r-k}); checks ξ_{rows_i} b_j = δ_ij a and b_i ∈ J."""
    D = bc.centre.D
    alg = D.algebra
    rows, gs = bc.candidate.rows, bc.candidate.gs
    size = len(rows)
    if size == 0:
        return []
    mat = [[D.apply(i, g) for g in gs] for i in rows]
    out = []
    for i in range(size):
        m = [list(r) for r in mat]
        m[i] = list(gs)
        out.append(alg.reduce(det_poly(m, alg.ring.one())))
    a = alg.reduce(bc.a)
    Jr = bc.centre.J + alg.relations
    for i, ri in enumerate(rows):
        for j, b in enumerate(out):
            want = a if i == j else alg.ring.zero()
            if not alg.is_zero(D.apply(ri, b) - want):
                raise VerificationError(f"ξ_{ri} b_{j} differs from δ·a")
    for b in out:
        if not Jr.contains(b):
            raise VerificationError(f"b-element {b} is not in the centre")
    return out


def divide_by_a(bc: BlowupChart, f):
    """The element f/a of the blow-up chart for f ∈ J, as a polynomial in the chart variables."""
    alg = bc.centre.D.algebra
    big = bc.algebra.ring
    hs = list(bc.zmap.values())
    const_h = [h for h, _ in bc.constants]
    gens = hs + const_h + alg.relations.nonzero_gens()
    cof = Ideal(alg.ring, gens).lift(alg.element(f))
    if cof is None:
        raise VerificationError(f"{f} is not in the centre")
    out = big.zero()
    for (z, h), c in zip(bc.zmap.items(), cof):
        out = out + c.embed(big) * big.gen(z)
    for (_, lam), c in zip(bc.constants, cof[len(hs):len(hs) + len(const_h)]):
        out = out + c.embed(big) * lam
    # relation cofactors contribute (rel/a)·c, which is zero in the saturated ring
    res = bc.algebra.reduce(out)
    if not bc.algebra.is_zero(bc.a.embed(big) * res - alg.element(f).embed(big)):
        raise VerificationError("quotient by a does not multiply back")
    return res


@dataclass
class UpstairsCertificate:
    holds: bool
    k: int
    witness_matrix: list
    witness_det: str

    def to_json(self):
        return {
            "holds": self.holds,
            "k": self.k,
            "witness_matrix": self.witness_matrix,
            "witness_det": self.witness_det,
        }


def verify_uu_upstairs(bc: BlowupChart, k):
    """Fit_{k-1} = 0 and Fit_k = 1 on the blow-up chart, with det(ξ_i (b_j/a)) = 1 as witness."""
    L = bc.lifted
    balg = L.algebra
    ladder = FittingLadder(L)
    if not ladder.is_zero(k - 1):
        raise VerificationError(f"Fit_{k - 1} does not vanish on the blow-up chart")
    if not ladder.is_unit(k):
        raise VerificationError(f"Fit_{k} is not the unit ideal on the blow-up chart")
    rows = bc.candidate.rows
    if not rows:
        return UpstairsCertificate(True, k, [], "1")
    quots = [divide_by_a(bc, b) for b in bc.b]
    W = [[L.apply(i, q) for q in quots] for i in rows]
    d = balg.reduce(det_poly(W, balg.ring.one()))
    if d != 1:
        raise VerificationError(f"witness determinant is {d}, not 1")
    res, _ = check_UU(L)
    if not res.holds or res.k != k:
        raise VerificationError("Condition UU check disagrees upstairs")
    return UpstairsCertificate(True, k, [[str(v) for v in row] for row in W], str(d))


def localization_check(bc: BlowupChart):
    """Where a is invertible the blow-up changes nothing: ker(A[J/a][t] → A_a) = presentation + <a t - 1>."""
    alg = bc.centre.D.algebra
    ring = alg.ring
    (t,) = ring.fresh_names("_t", 1)
    tr = ring.extend([t])
    tv = tr.gen(t)
    target = Ideal(tr, [g.embed(tr) for g in alg.relations.nonzero_gens()] + [alg.element(bc.a).embed(tr) * tv - 1])
    images = [tr.gen(n) for n in alg.names]
    images += [h.embed(tr) * tv for h in bc.zmap.values()]
    images += [tv]
    big = bc.algebra.ring
    (s,) = big.fresh_names("_t", 1)
    src_names = list(big.names) + [s]
    ker = kernel_of_ring_map(images, target, source_names=src_names)
    src = ker.ring
    sv = src.gen(s)
    pres = Ideal(src, [g.embed(src) for g in bc.algebra.relations.nonzero_gens()] + [bc.a.embed(src) * sv - 1])
    return ker == pres


@dataclass
class BlowupReport:
    charts: list
    centres: list
    certificates: list

    def to_json(self):
        return {
            "centres": self.centres,
            "charts": [
                dict(bc.to_json(), uu_certificate=cert.to_json())
                for bc, cert in zip(self.charts, self.certificates)
            ],
        }


def blowup_chart_set(D_chart: DerivationSet, k, pool_degree=2, chart=None, prefix=""):
    """Centre, covering set of a's and verified blow-up charts for one base chart."""
    centre = centre_ideal(D_chart, k, chart)
    cands = candidate_a_elements(centre, pool_degree)
    if not cands:
        raise ConditionFailure(
            f"no determinant witness a on chart {prefix or 'X'} with pool degree {pool_degree}",
            certificate={"inconclusive": True},
        )
    chosen = select_cover(cands, D_chart.algebra)
    charts, certs = [], []
    for idx, c in enumerate(chosen):
        bc = blowup_chart(centre, c, name=f"{prefix}[a={c.a}]")
        certs.append(verify_uu_upstairs(bc, k))
        charts.append(bc)
    return centre, charts, certs
