import pytest
import sympy

from nrgit.action import FittingLadder, localize_derivations
from nrgit.errors import ValidationError
from nrgit.instance import restrict_to_stratum_closure
from nrgit.kernel import Ideal
from nrgit.points import sample_points
from nrgit.strata import is_equivariant, point_stratum, stratify


def test_strata_examples(corpus):
    s = stratify(corpus("E1").D)
    assert [t.empty for t in s] == [False, True]
    E4 = corpus("E4").D
    s = stratify(E4)
    ring = E4.algebra.ring
    assert s[0].closed_ideal == Ideal(ring, [0]) and s[0].removed_ideal == Ideal(ring, ["y"])
    assert s[1].closed_ideal == Ideal(ring, ["y"]) and s[1].removed_ideal.is_unit()
    E2 = corpus("E2").D
    s = stratify(E2)
    assert s[0].empty and not s[1].empty
    assert s[1].closed_ideal == Ideal(E2.algebra.ring, ["e"])


def test_point_stratum_examples(corpus):
    E4 = corpus("E4").D
    s = stratify(E4)
    assert point_stratum(s, [1, 0]) == 1
    assert point_stratum(s, [0, 1]) == 0
    s1 = stratify(corpus("E1").D)
    for p in ([0, 0], [3, -2], [1, 7]):
        assert point_stratum(s1, p) == 0


@pytest.mark.parametrize("name", ["E1", "E2", "E3", "E4"])
def test_strata_cover_and_match_rank(corpus, name):
    D = corpus(name).D
    s = stratify(D)
    for p in sample_points(D.algebra, 25, seed=7):
        hits = [t.delta for t in s if t.contains_point(p)]
        M = sympy.Matrix([[sympy.Rational(str(v.evaluate(p))) for v in row] for row in D.images])
        assert hits == [D.r - M.rank()]


@pytest.mark.parametrize("name", ["E1", "E2", "E3", "E4", "W2-proj"])
def test_fitting_ideals_are_equivariant(corpus, name):
    D = corpus(name).D
    L = FittingLadder(D)
    for k in range(D.r + 1):
        assert is_equivariant(D, L.fit(k))


def test_closure_restriction(corpus):
    inst = restrict_to_stratum_closure(corpus("E4"), 1)
    assert inst.algebra.relations == Ideal(inst.algebra.ring, ["y"])
    assert all(inst.algebra.is_zero(v) for v in inst.D.images[0])
    inst = restrict_to_stratum_closure(corpus("E2"), 1)
    assert inst.algebra.relations == Ideal(inst.algebra.ring, ["e"])
    assert all(inst.algebra.is_zero(v) for v in inst.D.images[0])
    with pytest.raises(ValidationError):
        restrict_to_stratum_closure(corpus("E4"), 3)


def test_strata_commute_with_localization(corpus):
    # restricting to y != 0 keeps only the free stratum of E4
    D = corpus("E4").D
    L = localize_derivations(D, "y")
    s = stratify(L)
    assert not s[0].empty and s[1].empty
