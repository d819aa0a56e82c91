"""Monomial orders on exponent vectors.

Every order is exposed as a sort key: ``key(a) > key(b)`` iff monomial ``a``
is larger than ``b``.  Variable precedence is declaration order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property


def _grevlex(exp):
    return (sum(exp), tuple(-e for e in reversed(exp)))


@dataclass(frozen=True)
class MonomialOrder:
    kind: str  # "lex" | "grevlex" | "block"
    nblock: int = 0  # size of the eliminated prefix for kind == "block"

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.nblock < 0:
            raise ValueError("block size must be nonnegative")

    @cached_property
    def key(self):
        if self.kind == "lex":
            return _lex
        if self.kind == "grevlex":
            return _grevlex
        n = self.nblock

        def block_key(exp):
            return (_grevlex(exp[:n]), _grevlex(exp[n:]))

        return block_key

    def __str__(self):
        return f"block({self.nblock})" if self.kind == "block" else self.kind


def _lex(exp):
    return exp


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


def block(n: int) -> MonomialOrder:
    """Elimination order: the first ``n`` variables dominate, grevlex within blocks."""
    return MonomialOrder("block", n)
