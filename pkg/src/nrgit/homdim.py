"""Hom-space dimension between sums of line bundles on the projective line.

For E1 = ⊕ O(a_i) and E2 = ⊕ O(b_j), dim Hom(E2, E1) = Σ dim H0(O(a_i - b_j)),
and H0(O(d)) has the degree-d monomials in two variables as a basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError


def monomial_count(d):
    """Number of monomials s^i t^j with i + j = d, by enumeration."""
    if d < 0:
        return 0
    return sum(1 for i in range(d + 1) for j in range(d + 1) if i + j == d)


def closed_form(d):
    return max(0, d + 1)


@dataclass
class HNType:
    a_list: list
    b_list: list

    def __post_init__(self):
        if not self.a_list or not self.b_list:
            raise ValidationError("both degree lists must be nonempty")
        ma = Fraction(sum(self.a_list), len(self.a_list))
        mb = Fraction(sum(self.b_list), len(self.b_list))
        if not ma > mb:
            raise ValidationError(
                f"slope condition violated: mean(a) = {ma} must exceed mean(b) = {mb}"
            )


def homdim(tau: HNType):
    """δ and the per-pair table [(a_i, b_j, dim)]."""
    table = []
    for a in tau.a_list:
        for b in tau.b_list:
            table.append((a, b, monomial_count(a - b)))
    return sum(t[2] for t in table), table


def homdim_report(a_list, b_list):
    delta, table = homdim(HNType(list(a_list), list(b_list)))
    return {
        "kind": "homdim",
        "a": list(a_list),
        "b": list(b_list),
        "delta": delta,
        "pairs": [{"a": a, "b": b, "dim": d} for a, b, d in table],
    }
