import random
from fractions import Fraction

import pytest

from quivergrass.degeneration import (
    CancellationToken,
    SubspaceFamily,
    UnipotentCurve,
    apply_curve,
    limit_at_infinity,
    unipotent_degenerate,
    verify_dominance,
)
from quivergrass.errors import Cancelled, EndpointMismatch, RankDrop
from quivergrass.realize import QModel, SubmodulePresentation
from quivergrass.skeleta import ProjectiveContext
from quivergrass.univariate import RationalFunction, UPoly, parse_rational_function

from support import random_algebra, random_curve, random_submodule, two_loops


def two_loop_setup():
    ctx = ProjectiveContext(two_loops(), ["1"] * 3)
    model = QModel(ctx)
    c = SubmodulePresentation.from_terms(ctx, [[(1, 1, [])], [(1, 3, [])]], model)
    return ctx, model, c


def test_zero_curve_fixes_the_submodule():
    ctx, model, c = two_loop_setup()
    rep = unipotent_degenerate(ctx, c, UnipotentCurve(ctx, {}))
    assert rep.limit.equals(c)
    assert rep.verdict == "equal" and not rep.proper


def test_constant_curve_moves_within_the_orbit():
    ctx, model, c = two_loop_setup()
    g = UnipotentCurve.from_spec(ctx, {1: [(2, ["b"], 2)], 3: [(-1, ["a"], 2)]})
    rep = unipotent_degenerate(ctx, c, g)
    assert rep.verdict == "equal"
    assert rep.iso.kind == "isomorphic-witness"
    again = unipotent_degenerate(ctx, rep.limit, UnipotentCurve(ctx, {}))
    assert again.limit.equals(rep.limit)


def test_reparametrization_does_not_change_the_limit():
    ctx, model, c = two_loop_setup()
    g = UnipotentCurve.from_spec(ctx, {1: [("t", ["b"], 1), ("-t", ["a"], 2)]})
    base = limit_at_infinity(apply_curve(g, c))
    for a, b in [(1, 5), (3, 0), (Fraction(-1, 2), 7)]:
        assert limit_at_infinity(apply_curve(g.reparametrize(a, b), c)).equals(base)


def test_two_loop_first_step():
    ctx, model, c = two_loop_setup()
    g = UnipotentCurve.from_spec(ctx, {1: [("t", ["b"], 1), ("-t", ["a"], 2)]})
    rep = unipotent_degenerate(ctx, c, g)
    expected = SubmodulePresentation.from_terms(ctx, [[(1, 1, ["a"])], [(1, 1, ["b"]), (-1, 2, ["a"])], [(1, 3, [])]], model)
    assert rep.limit.equals(expected)
    assert rep.layering.layers == ((1,), (2,), (2,))
    assert rep.limit_layering.layers == ((2,), (2,), (1,))
    assert rep.verdict == "strictly-dominates"
    assert rep.proper


def test_curve_validation():
    ctx, model, c = two_loop_setup()
    with pytest.raises(EndpointMismatch):
        UnipotentCurve.from_spec(ctx, {4: [("t", ["a"], 1)]})
    with pytest.raises(EndpointMismatch):
        UnipotentCurve.from_spec(ctx, {1: [("t", [], 2)]})


def test_dependent_family_raises_rank_drop():
    ctx, model, c = two_loop_setup()
    row = [UPoly([1]) if k == 0 else UPoly() for k in range(model.dim)]
    fam = SubspaceFamily([row, [x * UPoly([0, 1]) for x in row]], model.dim, 2, model)
    with pytest.raises(RankDrop):
        limit_at_infinity(fam)


def test_cancellation():
    ctx, model, c = two_loop_setup()
    token = CancellationToken()
    token.cancel()
    g = UnipotentCurve.from_spec(ctx, {1: [("t", ["b"], 1), ("-t", ["a"], 2)]})
    with pytest.raises(Cancelled):
        unipotent_degenerate(ctx, c, g, token=token)


def test_random_curves_never_violate_dominance():
    rng = random.Random(6)
    for _ in range(25):
        alg = random_algebra(rng, max_vertices=2, max_L=2)
        vs = alg.quiver.vertices
        slots = sorted([rng.choice(vs) for _ in range(2)], key=vs.index)
        ctx = ProjectiveContext(alg, slots, "big")
        model = QModel(ctx)
        c = random_submodule(rng, ctx, model, inside_radical=False)
        rep = unipotent_degenerate(ctx, c, random_curve(rng, ctx))
        assert rep.limit.dim == c.dim
        assert rep.verdict in ("equal", "strictly-dominates")


def test_parse_rational_function():
    f = parse_rational_function("(3*t^2+1)/(t)")
    assert f(Fraction(2)) == Fraction(13, 2)
    assert parse_rational_function("-2")(5) == -2
    assert parse_rational_function("1/2*t")(4) == 2
    assert parse_rational_function("tau - 1")(1) == 0
    assert parse_rational_function("(t^2-1)/(t-1)") == parse_rational_function("t+1")
    for bad in ["x", "(t", "t^", "1/0", "t)"]:
        with pytest.raises((ValueError, ZeroDivisionError)):
            parse_rational_function(bad)


def test_rational_function_compose():
    f = parse_rational_function("1/(t+1)")
    g = f.compose_linear(2, 3)
    assert g(Fraction(1)) == f(Fraction(5))


def test_verify_dominance_examples():
    ctx, model, c = two_loop_setup()
    c1 = SubmodulePresentation.from_terms(ctx, [[(1, 1, ["a"])], [(1, 1, ["b"]), (-1, 2, ["a"])], [(1, 3, [])]], model)
    c2 = SubmodulePresentation.from_terms(
        ctx, [[(1, 2, ["b", "a"])], [(1, 1, ["b"]), (-1, 2, ["a"])], [(1, 1, ["a", "b"])], [(1, 3, [])]], model)
    m, m1, m2 = c.quotient(), c1.quotient(), c2.quotient()
    assert verify_dominance(m, m1) == "strictly-dominates"
    assert verify_dominance(m, m) == "equal"
    assert verify_dominance(m1, m2) == "strictly-dominates"
    assert verify_dominance(m1, m) == "violates"


def test_apply_curve_ranks():
    ctx, model, c = two_loop_setup()
    assert c.dim == 10
    zero = apply_curve(UnipotentCurve(ctx, {}), c)
    assert zero.k == 10 and all(x.degree <= 0 for row in zero.rows for x in row)
    pencil = UnipotentCurve.from_spec(ctx, {1: [("t", ["a"], 2), ("-t", ["b"], 2)], 3: [("t", ["a"], 1), ("t", ["b"], 1)]})
    assert apply_curve(pencil, c).k == 10


def test_specialization_approaches_the_limit():
    from quivergrass.linalg import RowSpace

    ctx, model, c = two_loop_setup()
    g = UnipotentCurve.from_spec(ctx, {1: [("t", ["b"], 1), ("-t", ["a"], 2)]})
    fam = apply_curve(g, c)
    lim = limit_at_infinity(fam).basis()

    rs = RowSpace(model.dim)
    for v in lim:
        rs.add(v)

    def defect(tau):
        # every unit vector of g_tau(C) lies close to the limit for large tau
        worst = Fraction(0)
        for row in fam.at(Fraction(tau)):
            scale = max(abs(x) for x in row)
            worst = max(worst, max(abs(x) for x in rs.reduce([x / scale for x in row])))
        return worst

    d = [defect(10 ** k) for k in (2, 4, 6)]
    assert d[0] > d[1] > d[2] and d[2] < Fraction(1, 1000)
