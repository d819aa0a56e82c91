"""Stratification by stabiliser dimension, read off the Fitting ladder.

The stratum of dimension δ is V(Fit_{δ-1}) minus V(Fit_δ), stored as a pair of
ideals (both including the ambient relations).
"""

from __future__ import annotations

from dataclasses import dataclass

from .action import DerivationSet, FittingLadder, check_point
from .errors import VerificationError
from .graded import GradedAlgebra
from .kernel import Ideal, radical_membership


@dataclass
class Stratum:
    delta: int
    closed_ideal: Ideal
    removed_ideal: Ideal
    ambient: GradedAlgebra
    empty: bool

    def contains_point(self, point):
        if any(g.evaluate(point) != 0 for g in self.closed_ideal.gens):
            return False
        return any(g.evaluate(point) != 0 for g in self.removed_ideal.gens)

    def to_json(self):
        return {
            "delta": self.delta,
            "closed_ideal": _strings(self.closed_ideal),
            "removed_ideal": _strings(self.removed_ideal),
            "empty": self.empty,
        }


def _strings(I):
    return [str(g) for g in I.groebner()] if not I.is_zero() else []


def stratify(D: DerivationSet, ladder: FittingLadder | None = None):
    """Strata for δ = 0..r, each flagged empty when V(closed) ⊆ V(removed)."""
    ladder = ladder or FittingLadder(D)
    alg = D.algebra
    out = []
    for delta in range(0, D.r + 1):
        closed = ladder.with_relations(delta - 1)
        removed = ladder.with_relations(delta)
        empty = all(radical_membership(g, closed) for g in removed.gens)
        out.append(Stratum(delta, closed, removed, alg, empty))
    return out


def point_stratum(strata, point):
    """The unique δ whose stratum contains the rational point."""
    if not strata:
        raise ValueError("no strata given")
    point = check_point(strata[0].ambient, point)
    hits = [s.delta for s in strata if s.contains_point(point)]
    if len(hits) != 1:
        raise VerificationError(f"point {point} lies in {len(hits)} strata")
    return hits[0]


def restrict_derivations(D: DerivationSet, delta, ladder: FittingLadder | None = None):
    """Derivations on the closure V(Fit_{δ-1}) of the stratum δ.

    Raises VerificationError if Fit_{δ-1} is not stable under the derivations,
    which cannot happen for a correct action.
    """
    ladder = ladder or FittingLadder(D)
    alg = D.algebra
    fit = ladder.fit(delta - 1)
    extra = [g for g in fit.gens if not alg.is_zero(g)]
    if not extra:
        return D
    target = ladder.with_relations(delta - 1)
    for i in range(D.r):
        for g in extra:
            if not target.contains(D.apply(i, g)):
                raise VerificationError(f"derivation {i} does not preserve Fit_{delta - 1}")
    new_alg = alg.with_relations(extra)
    rows = [[new_alg.reduce(v) for v in row] for row in D.images]
    return DerivationSet(new_alg, D.w, rows)


def is_equivariant(D: DerivationSet, ideal: Ideal):
    """ξ_i(g) ∈ ideal + relations for every generator g."""
    J = ideal + D.algebra.relations
    return all(J.contains(D.apply(i, g)) for i in range(D.r) for g in ideal.gens)
