"""Shared fixtures: small named algebras, random generators and brute-force oracles."""
import itertools
import random
from fractions import Fraction

from quivergrass.algebra import AlgebraPresentation
from quivergrass.equations import PointData
from quivergrass.polynomial import Polynomial
from quivergrass.quiver import ModPath, Quiver
from quivergrass.realize import QModel, SubmodulePresentation
from quivergrass.skeleta import ProjectiveContext, Skeleton, is_skeleton


def loops(names, squares=True, L=2):
    """One vertex with the given loops; relations x^2 for every loop."""
    q = Quiver(["1"], [(x, "1", "1") for x in names])
    rels = [[(1, q.word(x + x))] for x in names] if squares else []
    return AlgebraPresentation(q, rels, L)


def two_loops():
    return loops("ab", L=2)


def three_loops():
    return loops("abc", L=3)


def kronecker(k=3):
    q = Quiver(["1", "2"], [(x, "1", "2") for x in "abcdefgh"[:k]])
    return AlgebraPresentation(q, [], 1)


def two_cycle():
    q = Quiver(["1", "2"], [("a", "1", "2"), ("b", "2", "1")])
    return AlgebraPresentation(q, [], 1)


def a2():
    q = Quiver(["1", "2"], [("a", "1", "2")])
    return AlgebraPresentation(q, [], 1)


def a3(relation=False):
    q = Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")])
    rels = [[(1, q.word("ba"))]] if relation else []
    return AlgebraPresentation(q, rels, 2)


def rand_fraction(rng, lo=-3, hi=3, den=3):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_algebra(rng, max_vertices=4, max_arrows=4, max_L=3, max_relations=2):
    n = rng.randint(1, max_vertices)
    vertices = [str(i + 1) for i in range(n)]
    k = rng.randint(1, max_arrows)
    arrows = [(f"x{i}", rng.choice(vertices), rng.choice(vertices)) for i in range(k)]
    q = Quiver(vertices, arrows)
    L = rng.randint(1, max_L)
    rels = []
    from quivergrass.quiver import paths_up_to_length

    pool = {}
    for v in vertices:
        for p in paths_up_to_length(q, v, L):
            if p.length >= 2:
                pool.setdefault((p.source, p.target), []).append(p)
    keys = sorted(pool)
    for _ in range(rng.randint(0, max_relations)):
        if not keys:
            break
        paths = pool[rng.choice(keys)]
        chosen = rng.sample(paths, min(len(paths), rng.randint(1, 2)))
        rels.append([(rng.choice([1, -1, 2, Fraction(1, 2)]), p) for p in chosen])
    return AlgebraPresentation(q, rels, L)


def brute_paths(q, source, L):
    """All arrow sequences of length ≤ L that compose, by filtering the full product."""
    out = []
    names = [a.name for a in q.arrows]
    for n in range(L + 1):
        for seq in itertools.product(names, repeat=n):
            cur, ok = source, True
            for name in seq:
                a = q.arrow(name)
                if a.source != cur:
                    ok = False
                    break
                cur = a.target
            if ok:
                out.append(seq)
    return out


def all_skeleta_up_to(ctx, max_size):
    """Every skeleton of ctx (small setting) with at most max_size paths, by closure growth."""
    q = ctx.quiver
    start = frozenset(ctx.top_path(r) for r in range(1, ctx.t + 1))
    if len(start) > max_size:
        return []
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for s in frontier:
            if len(s) == max_size:
                continue
            for mp in s:
                if mp.length >= ctx.algebra.L:
                    continue
                for a in q.out_arrows(mp.target):
                    ext = ModPath(mp.slot, q.extend(mp.path, a))
                    if ext in s:
                        continue
                    t = s | {ext}
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
        frontier = nxt
    return [Skeleton(s, ctx) for s in seen]


def random_polynomial(rng, nvars, terms=3, max_deg=2):
    p = Polynomial()
    for _ in range(rng.randint(0, terms)):
        mono = Polynomial.constant(rand_fraction(rng))
        for _ in range(rng.randint(0, max_deg)):
            if nvars:
                mono = mono * Polynomial.var(rng.randrange(nvars))
        p = p + mono
    return p


def random_modpath(rng, ctx, max_len):
    r = rng.randint(1, ctx.t)
    path = ctx.quiver.trivial(ctx.e(r))
    for _ in range(rng.randint(0, max_len)):
        outs = ctx.quiver.out_arrows(path.target)
        if not outs:
            break
        path = ctx.quiver.extend(path, rng.choice(outs))
    return ModPath(r, path)


def random_submodule(rng, ctx, model=None, ngens=None, inside_radical=True, density=0.4):
    """Λ-submodule of Q generated by a few random vertex-homogeneous vectors."""
    model = model or QModel(ctx)
    gens = []
    q = ctx.quiver
    for _ in range(ngens if ngens is not None else rng.randint(0, 3)):
        v = rng.choice(q.vertices)
        vec = [Fraction(0)] * model.dim
        for k, e in enumerate(model.basis.elements):
            if e.target != v or (inside_radical and e.length == 0):
                continue
            if rng.random() < density:
                vec[k] = rand_fraction(rng)
        if any(vec):
            gens.append(vec)
    return SubmodulePresentation(ctx, gens, model)


def zero_point(crit):
    return PointData(crit, {}, default_zero=True)


def random_curve(rng, ctx, max_terms=3, max_len=2):
    """Unipotent curve with polynomial coefficients of degree ≤ 2 on random positive-length paths."""
    from quivergrass.degeneration import CurveTerm, UnipotentCurve
    from quivergrass.univariate import RationalFunction, UPoly

    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        mp = random_modpath(rng, ctx, max_len)
        if mp.length == 0:
            continue
        targets = [r for r in range(1, ctx.t + 1) if ctx.e(r) == mp.target]
        if not targets:
            continue
        r = rng.choice(targets)
        coeff = RationalFunction(UPoly([rand_fraction(rng) for _ in range(rng.randint(1, 3))]))
        terms.setdefault(r, []).append(CurveTerm(coeff, mp.path, mp.slot))
    return UnipotentCurve(ctx, terms)
