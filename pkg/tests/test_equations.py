import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quivergrass.algebra import AlgebraPresentation
from quivergrass.equations import (
    STRATEGIES,
    PointData,
    ReductionStats,
    big_presentation,
    evaluate_membership,
    normal_form,
    sigma_ideal,
)
from quivergrass.errors import MissingCoordinate
from quivergrass.polynomial import Polynomial
from quivergrass.quiver import Quiver
from quivergrass.skeleta import Coordinate, ProjectiveContext, Skeleton, critical_data

from support import a2, a3, kronecker, random_algebra, random_modpath, random_polynomial, all_skeleta_up_to, two_loops


def sk(ctx, ws):
    return Skeleton([ctx.parse_word(w) for w in ws], ctx)


def test_single_rewrite_kronecker():
    ctx = ProjectiveContext.small(kronecker(), [2, 0])
    w = ctx.parse_word
    sigma = sk(ctx, ["z1", "z2", "az1", "bz1", "az2"])
    cd = critical_data(sigma)
    nf = normal_form({w("cz1"): Polynomial.constant(1)}, sigma, cd)
    pos = cd.index()
    assert nf == {m: Polynomial.var(pos[Coordinate(w("cz1"), m)]) for m in (w("az1"), w("bz1"), w("az2"))}
    # σ paths are already normal
    assert normal_form({w("az2"): Polynomial.constant(3)}, sigma, cd) == {w("az2"): Polynomial.constant(3)}


def test_a3_paths_and_constant_generator():
    ctx = ProjectiveContext.small(a3(), [1, 0, 0])
    w = ctx.parse_word
    short = sk(ctx, ["z1", "az1"])
    assert normal_form({w("baz1"): Polynomial.constant(1)}, short) == {}
    full = sk(ctx, ["z1", "az1", "baz1"])
    assert sigma_ideal(full).is_zero()
    ctx_r = ProjectiveContext.small(a3(relation=True), [1, 0, 0])
    ideal = sigma_ideal(sk(ctx_r, ["z1", "az1", "baz1"]))
    assert ideal.generators == [Polynomial.constant(1)]
    assert not evaluate_membership(ideal, PointData(ideal.critical, {}, default_zero=True))


def test_two_loop_ideal():
    ctx = ProjectiveContext.small(two_loops(), [1])
    w = ctx.parse_word
    sigma = sk(ctx, ["z1", "az1", "baz1"])
    cd = critical_data(sigma)
    ideal = sigma_ideal(sigma)
    names = {nu.name() for nu in cd.N}
    assert names == {"X[bz1 ; az1]", "X[bz1 ; baz1]", "X[aaz1 ; baz1]"}
    pos = cd.index()
    gens = set(ideal.generators)
    assert gens == {Polynomial.var(pos[Coordinate(w("aaz1"), w("baz1"))]),
                    Polynomial.var(pos[Coordinate(w("bz1"), w("az1"))])}
    ok = PointData(cd, {Coordinate(w("bz1"), w("baz1")): 5}, default_zero=True)
    assert evaluate_membership(ideal, ok)
    bad = PointData(cd, {Coordinate(w("bz1"), w("az1")): 1}, default_zero=True)
    assert not evaluate_membership(ideal, bad)
    text = ideal.to_text()
    assert "X[0] = X[bz1 ; az1]" in text or "X[0] = X[bz1 ; baz1]" in text


def test_missing_coordinate_is_an_error():
    ctx = ProjectiveContext.small(two_loops(), [1])
    sigma = sk(ctx, ["z1", "az1", "baz1"])
    ideal = sigma_ideal(sigma)
    with pytest.raises(MissingCoordinate):
        evaluate_membership(ideal, PointData(ideal.critical, {0: 1}))


def test_big_presentation_a2():
    ctx = ProjectiveContext.big(a2(), [2, 1])
    sigma = sk(ctx, ["z1", "z2", "az1"])
    ideal = big_presentation(sigma)
    assert ideal.free_variables == [1]
    assert all(1 not in g.variables() for g in ideal.generators)
    small = ProjectiveContext.small(a2(), [2, 0])
    with pytest.raises(ValueError):
        big_presentation(sk(small, ["z1", "z2", "az1"]))


def test_big_presentation_keeps_free_coordinates_out():
    rng = random.Random(11)
    for _ in range(15):
        alg = random_algebra(rng, max_vertices=3, max_L=2)
        vs = alg.quiver.vertices
        slots = sorted([rng.choice(vs), rng.choice(vs)], key=vs.index)
        v = slots[0]
        ctx = ProjectiveContext(alg, slots, "big")
        for s in all_skeleta_up_to(ProjectiveContext(alg, [v], "small"), 3):
            sigma = Skeleton(s.paths, ctx)
            ideal = big_presentation(sigma)
            free = set(ideal.free_variables)
            assert all(not free.intersection(g.variables()) for g in ideal.generators)


def _random_element(rng, ctx, nvars, n=4):
    y = {}
    for _ in range(rng.randint(1, n)):
        mp = random_modpath(rng, ctx, ctx.algebra.L + 1)
        y[mp] = y.get(mp, Polynomial()) + random_polynomial(rng, nvars)
    return y


def _add(a, b, lam=Fraction(1)):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Polynomial()) + Polynomial.constant(lam) * v
    return {k: v for k, v in out.items() if v}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_normal_form_linear_and_strategy_free(seed):
    rng = random.Random(seed)
    alg = random_algebra(rng, max_vertices=3, max_L=2)
    v = rng.choice(alg.quiver.vertices)
    ctx = ProjectiveContext.small(alg, [1 if w == v else 0 for w in alg.quiver.vertices])
    skels = all_skeleta_up_to(ctx, 4)
    sigma = rng.choice(skels)
    cd = critical_data(sigma)
    n = len(cd.N)
    y1, y2 = _random_element(rng, ctx, n), _random_element(rng, ctx, n)
    lam = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    forms = [normal_form(y1, sigma, cd, strategy=s, rng=random.Random(seed)) for s in STRATEGIES]
    assert forms[0] == forms[1] == forms[2]
    lhs = normal_form(_add(y1, y2, lam), sigma, cd)
    rhs = _add(normal_form(y1, sigma, cd), normal_form(y2, sigma, cd), lam)
    assert lhs == rhs
    stats = ReductionStats()
    normal_form(y1, sigma, cd, stats=stats)
    assert stats.max_depth <= alg.L + 1


def test_combining_relations_keeps_the_vanishing_set():
    q = Quiver(["1"], [("a", "1", "1"), ("b", "1", "1")])
    r1 = [(1, q.word("ab")), (-1, q.word("ba"))]
    r2 = [(1, q.word("aa"))]
    r2b = [(1, q.word("aa")), (2, q.word("ab")), (-2, q.word("ba"))]
    A = AlgebraPresentation(q, [r1, r2], 2)
    B = AlgebraPresentation(q, [r1, r2b], 2)
    rng = random.Random(1)
    ctxA = ProjectiveContext.small(A, [2])
    ctxB = ProjectiveContext.small(B, [2])
    for s in all_skeleta_up_to(ctxA, 4):
        ia = sigma_ideal(s)
        sb = Skeleton(s.paths, ctxB)
        ib = sigma_ideal(sb)
        n = len(ia.critical.N)
        for _ in range(20):
            vals = {i: Fraction(rng.choice([0, 0, 1, -1, 2])) for i in range(n)}
            pa = PointData(ia.critical, vals)
            pb = PointData(ib.critical, vals)
            assert evaluate_membership(ia, pa) == evaluate_membership(ib, pb)


def test_generator_coefficients_are_rational():
    q = Quiver(["1"], [("a", "1", "1"), ("b", "1", "1")])
    A = AlgebraPresentation(q, [[(Fraction(1, 3), q.word("ab")), (Fraction(-2, 7), q.word("ba"))]], 2)
    ctx = ProjectiveContext.small(A, [1])
    for s in all_skeleta_up_to(ctx, 4):
        for g in sigma_ideal(s).generators:
            assert all(isinstance(c, Fraction) for c in g.terms.values())
