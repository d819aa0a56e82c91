import pytest

from nrgit.action import FittingLadder, restrict_to_chart
from nrgit.blowup import (
    blowup_chart,
    blowup_chart_set,
    candidate_a_elements,
    centre_ideal,
    divide_by_a,
    localization_check,
    verify_uu_upstairs,
)
from nrgit.errors import ConditionFailure
from nrgit.graded import affine_chart, max_weight_and_x0min
from nrgit.kernel import Ideal


def test_centres(corpus):
    E4 = corpus("E4").D
    c = centre_ideal(E4, 0)
    ring = E4.algebra.ring
    assert c.I == Ideal(ring, ["x", "y"]) and c.J == Ideal(ring, ["x", "y"])
    c = centre_ideal(corpus("E1").D, 0)
    assert c.I.is_unit() and c.J.is_unit()
    E2 = corpus("E2").D
    c = centre_ideal(E2, 0)
    full = E2.algebra.relations
    assert c.I + full == Ideal(E2.algebra.ring, ["x", "e"])
    assert c.J + full == Ideal(E2.algebra.ring, ["x", "e"])


def test_candidates(corpus):
    c = centre_ideal(corpus("E4").D, 0)
    assert [str(a.a) for a in candidate_a_elements(c, 1)] == ["y"]
    c = centre_ideal(corpus("E2").D, 0)
    assert candidate_a_elements(c, 1) == []


def test_e4_chart(corpus):
    E4 = corpus("E4").D
    centre = centre_ideal(E4, 0)
    (cand,) = candidate_a_elements(centre, 1)
    bc = blowup_chart(centre, cand)
    ring = bc.algebra.ring
    (z,) = bc.zmap
    assert bc.algebra.relations == Ideal(ring, [f"y*{z} - x"])
    assert bc.lifted.apply(0, ring.gen(z)) == 1
    assert list(map(str, bc.b)) == ["x"]
    assert E4.apply(0, bc.b[0]) == E4.algebra.ring.parse("y")
    cert = verify_uu_upstairs(bc, 0)
    assert cert.witness_matrix == [["1"]]
    assert localization_check(bc)


def test_e4_exceptional_divisor(corpus):
    # E = V(a): the chart ring becomes k[z] with x = 0, and U translates z
    centre = centre_ideal(corpus("E4").D, 0)
    bc = blowup_chart(centre, candidate_a_elements(centre, 1)[0])
    alg = bc.algebra.with_relations([bc.algebra.ring.parse("y")])
    (z,) = bc.zmap
    assert alg.is_zero("x") and not alg.is_nilpotent(z)
    assert bc.lifted.apply(0, bc.algebra.ring.gen(z)) == 1


def test_w2_chart_data(corpus):
    D = corpus("W2-proj").D
    loc = max_weight_and_x0min(D.algebra)
    (xh,) = [c for c in loc.charts if c.name == "X_h"]
    Dc = restrict_to_chart(D, xh)
    centre = centre_ideal(Dc, 0, xh)
    ring = Dc.algebra.ring
    assert centre.J == Ideal(ring, ["x1", "x2", "y"]) * Ideal(ring, ["x1", "x2", "y"])
    cands = candidate_a_elements(centre, 2)
    assert "y^2" in [str(c.a) for c in cands]
    (c,) = [c for c in cands if str(c.a) == "y^2"]
    bc = blowup_chart(centre, c)
    # Cramer: b_i is the determinant with row i replaced by the g's
    assert sorted(map(str, bc.b)) == ["x1*y", "x2*y"]
    cert = verify_uu_upstairs(bc, 0)
    assert cert.witness_det == "1"
    for b in bc.b:
        assert bc.algebra.is_zero(bc.a.embed(bc.algebra.ring) * divide_by_a(bc, b) - b.embed(bc.algebra.ring))


def test_blowup_set_refuses_e2(corpus):
    D = corpus("E2").D
    with pytest.raises(ConditionFailure):
        blowup_chart_set(D, 0, 2, affine_chart(D.algebra), "X")


@pytest.mark.parametrize("name", ["E4-proj", "W2-proj"])
def test_every_upstairs_chart_is_uu(corpus, name):
    D = corpus(name).D
    for chart in max_weight_and_x0min(D.algebra).charts:
        Dc = restrict_to_chart(D, chart)
        centre, charts, certs = blowup_chart_set(Dc, 0, 2, chart, chart.name)
        assert charts
        for bc in charts:
            L = FittingLadder(bc.lifted)
            assert L.is_zero(-1) and L.is_unit(0)
            # the centre is stable under the action
            for i in range(Dc.r):
                for h in centre.J.gens:
                    assert (centre.J + Dc.algebra.relations).contains(Dc.apply(i, h))
