"""Concrete modules from points, skeleta of modules, Hom spaces and orbit dimensions."""
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (
    ModuleRealization,
    RelationsVerdict,
    TruncatedBasis,
    projective_realization,
    relations_check,
    truncated_module_basis,
)
from .equations import PointData
from .errors import AlgebraMismatch, InvalidTops, QuiverGrassError, TopNotDominated, ValidationError
from .layering import SemisimpleSequence, layering_of, radical_series
from .linalg import Matrix, RowSpace, inverse, sparse_nullspace, zeros
from .quiver import ModPath
from .skeleta import (
    ProjectiveContext,
    Skeleton,
    Coordinate,
    CriticalData,
    _extend,
    critical_data,
)

__all__ = [
    "realize_point",
    "relations_check",
    "RelationsVerdict",
    "skeleta_of_module",
    "hom_dim",
    "radical_submodule",
    "unipotent_orbit_dim",
    "iso_probe",
    "IsoVerdict",
    "coordinates_of_module",
    "SubmodulePresentation",
    "QModel",
    "point_submodule",
    "sub_realization",
]


def _vertex_positions(paths: Sequence[ModPath], quiver) -> Tuple[Dict[str, List[ModPath]], Dict[ModPath, int]]:
    comp: Dict[str, List[ModPath]] = {v: [] for v in quiver.vertices}
    for p in paths:
        comp[p.target].append(p)
    pos = {}
    for v, ps in comp.items():
        for i, p in enumerate(ps):
            pos[p] = i
    return comp, pos


def realize_point(sigma: Skeleton, critical: Optional[CriticalData], c: PointData) -> ModuleRealization:
    """The module with basis σ in which each critical path acts through its σ-set coefficients."""
    ctx = sigma.ctx
    critical = critical or c.critical
    q = ctx.quiver
    L = ctx.algebra.L
    comp, pos = _vertex_positions(sigma.ordered, q)
    index = critical.index()
    maps = {}
    for a in q.arrows:
        m = zeros(len(comp[a.target]), len(comp[a.source]))
        for j, p in enumerate(comp[a.source]):
            img = ModPath(p.slot, q.extend(p.path, a))
            if img in sigma.paths:
                m[pos[img]][j] = Fraction(1)
            elif img.length <= L:
                for member in critical.sigma_sets[img]:
                    x = c[index[Coordinate(img, member)]]
                    if x:
                        m[pos[member]][j] += x
        maps[a.name] = m
    dims = [len(comp[v]) for v in q.vertices]
    tops = []
    for p in sigma.ordered:
        if p.length == 0:
            vec = [Fraction(0)] * len(comp[p.target])
            vec[pos[p]] = Fraction(1)
            tops.append((p.target, vec))
    labels = {v: [str(p) for p in comp[v]] for v in q.vertices}
    return ModuleRealization(ctx.algebra, dims, maps, tops, labels)


def _check_tops(m: ModuleRealization, tops, series) -> None:
    q = m.algebra.quiver
    per_v: Dict[str, RowSpace] = {}
    for v in q.vertices:
        rs = RowSpace(m.dim_at(v))
        for b in series[1][v]:
            rs.add(b)
        per_v[v] = rs
    for v, vec in tops:
        if not per_v[v].add(vec):
            raise InvalidTops("top elements are dependent modulo JM")
    for v in q.vertices:
        if len(per_v[v]) != m.dim_at(v):
            top_dim = m.dim_at(v) - len(series[1][v])
            count = sum(1 for w, _ in tops if w == v)
            if count != top_dim:
                raise InvalidTops(f"top elements at {v} do not span the top ({count} of {top_dim})")


def skeleta_of_module(m: ModuleRealization, tops=None, ctx: Optional[ProjectiveContext] = None) -> List[Skeleton]:
    """All skeleta σ such that the paths of σ applied to the tops give layer-wise bases.

    ``tops`` is a list of (vertex, vector), grouped by vertex in vertex order;
    slot r of ``ctx`` is mapped to ``tops[r-1]``.
    """
    tops = list(tops if tops is not None else m.tops)
    algebra = m.algebra
    q = algebra.quiver
    series = radical_series(m)
    _check_tops(m, tops, series)
    if ctx is None:
        ctx = ProjectiveContext(algebra, [v for v, _ in tops])
    if list(ctx.slots) != [v for v, _ in tops]:
        raise InvalidTops("tops do not match the slots of the context")
    s = layering_of(m)
    L = algebra.L

    images: Dict[ModPath, List[Fraction]] = {}

    def image(mp: ModPath):
        if mp not in images:
            images[mp] = m.apply(mp.path, tops[mp.slot - 1][1])
        return images[mp]

    def independent(v: str, l: int, cands: List[ModPath], k: int):
        # k-subsets whose images are independent modulo J^{l+1}M at v
        base = RowSpace(m.dim_at(v))
        for b in series[l + 1][v]:
            base.add(b)
        out = []

        def grow(start, rs, picked):
            if len(picked) == k:
                out.append(tuple(picked))
                return
            for i in range(start, len(cands) - (k - len(picked)) + 1):
                nxt = rs.copy()
                if nxt.add(image(cands[i])):
                    grow(i + 1, nxt, picked + [cands[i]])

        grow(0, base, [])
        return out

    level0 = tuple(ctx.top_path(r) for r in range(1, ctx.t + 1))
    results = []

    def rec(l: int, acc, last):
        if l > L or not any(s.layers[l]):
            if all(not any(x) for x in s.layers[l:]):
                results.append(acc)
            return
        cands = _extend(ctx, last)
        per_vertex = []
        for v, k in zip(q.vertices, s.layers[l]):
            per_vertex.append(independent(v, l, [c for c in cands if c.target == v], k) if k else [()])
        for combo in itertools.product(*per_vertex):
            chosen = tuple(itertools.chain.from_iterable(combo))
            rec(l + 1, acc + chosen, chosen)

    rec(1, level0, level0)
    out = [Skeleton(paths, ctx) for paths in results]
    return sorted(out, key=Skeleton.sort_key)


def hom_dim(m: ModuleRealization, n: ModuleRealization) -> Tuple[int, List[Dict[str, Matrix]]]:
    """dim Hom(m, n) with a basis; a homomorphism is a dict vertex -> matrix (dim n_v x dim m_v)."""
    if m.algebra != n.algebra:
        raise AlgebraMismatch("modules live over different algebras")
    q = m.algebra.quiver
    # unknown layout: for each vertex v, the entries of f_v in row-major order
    offset = {}
    total = 0
    for v in q.vertices:
        offset[v] = total
        total += n.dim_at(v) * m.dim_at(v)
    rows = []
    for a in q.arrows:
        i, j = a.source, a.target
        X, Y = m.maps[a.name], n.maps[a.name]
        mi, mj, ni, nj = m.dim_at(i), m.dim_at(j), n.dim_at(i), n.dim_at(j)
        # (f_j X)_{r,c} - (Y f_i)_{r,c} = 0 for r < nj, c < mi
        for r in range(nj):
            for c in range(mi):
                eq: Dict[int, Fraction] = {}
                for k in range(mj):
                    if X[k][c]:
                        col = offset[j] + r * mj + k
                        eq[col] = eq.get(col, 0) + X[k][c]
                for k in range(ni):
                    if Y[r][k]:
                        col = offset[i] + k * mi + c
                        eq[col] = eq.get(col, 0) - Y[r][k]
                if any(eq.values()):
                    rows.append(eq)
    basis = sparse_nullspace(rows, total)
    out = []
    for vec in basis:
        f = {}
        for v in q.vertices:
            mv, nv = m.dim_at(v), n.dim_at(v)
            f[v] = [[vec[offset[v] + r * mv + c] for c in range(mv)] for r in range(nv)]
        out.append(f)
    return len(out), out


def sub_realization(m: ModuleRealization, spaces: Dict[str, Matrix]) -> ModuleRealization:
    """Restriction of m to an arrow-stable subspace given by RREF row bases per vertex."""
    q = m.algebra.quiver
    piv = {}
    for v in q.vertices:
        piv[v] = [next(i for i, x in enumerate(row) if x) for row in spaces[v]]
    maps = {}
    for a in q.arrows:
        src, tgt = spaces[a.source], spaces[a.target]
        mat = zeros(len(tgt), len(src))
        for j, b in enumerate(src):
            img = m.act(a.name, b)
            # RREF basis: coordinates are the entries at the pivot columns
            for i, p in enumerate(piv[a.target]):
                mat[i][j] = img[p]
            check = [Fraction(0)] * len(img)
            for i, row in enumerate(tgt):
                if mat[i][j]:
                    check = [x + mat[i][j] * y for x, y in zip(check, row)]
            if check != img:
                raise ValidationError("subspace is not arrow-stable")
        maps[a.name] = mat
    return ModuleRealization(m.algebra, [len(spaces[v]) for v in q.vertices], maps)


def radical_submodule(m: ModuleRealization) -> ModuleRealization:
    """JM with its basis taken from the reduced echelon form of Σ Im(X_α)."""
    return sub_realization(m, radical_series(m)[1])


def unipotent_orbit_dim(ctx: ProjectiveContext, m: ModuleRealization) -> int:
    """dim Hom(Q, JM) - dim Hom(M, JM) for the projective Q of ``ctx``."""
    q = m.algebra.quiver
    top = layering_of(m).top
    slots = [sum(1 for s in ctx.slots if s == v) for v in q.vertices]
    if any(x > y for x, y in zip(top, slots)):
        raise TopNotDominated(f"top {top} of the module exceeds the top {tuple(slots)} of Q")
    Q = projective_realization(ctx.algebra, ctx.slots)
    jm = radical_submodule(m)
    return hom_dim(Q, jm)[0] - hom_dim(m, jm)[0]


@dataclass
class IsoVerdict:
    kind: str  # "isomorphic-witness", "not-isomorphic" or "inconclusive"
    witness: Optional[Dict[str, Matrix]] = None
    trials: int = 0
    reason: str = ""


def _random_fraction(rng: random.Random, num_range=(-10, 10), den_range=(1, 10)) -> Fraction:
    return Fraction(rng.randint(*num_range), rng.randint(*den_range))


def iso_probe(m: ModuleRealization, n: ModuleRealization, trials: int = 20, seed: int = 0,
              num_range=(-10, 10), den_range=(1, 10)) -> IsoVerdict:
    """Randomized isomorphism test: invariants first, then random elements of Hom(m, n)."""
    if m.algebra != n.algebra:
        raise AlgebraMismatch("modules live over different algebras")
    if m.dims != n.dims:
        return IsoVerdict("not-isomorphic", reason="dimension vectors differ")
    try:
        if layering_of(m) != layering_of(n):
            return IsoVerdict("not-isomorphic", reason="radical layerings differ")
    except QuiverGrassError:
        pass
    dmn, basis = hom_dim(m, n)
    dnm, _ = hom_dim(n, m)
    dmm, _ = hom_dim(m, m)
    dnn, _ = hom_dim(n, n)
    if len({dmn, dnm, dmm, dnn}) != 1:
        return IsoVerdict("not-isomorphic", reason="Hom dimensions differ")
    rng = random.Random(seed)
    q = m.algebra.quiver
    for t in range(1, trials + 1):
        if t == 1 and m.key() == n.key():
            coeffs = None
        else:
            coeffs = [_random_fraction(rng, num_range, den_range) for _ in basis]
        f = {}
        for v in q.vertices:
            d = m.dim_at(v)
            if coeffs is None:
                f[v] = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
            else:
                mat = zeros(d, d)
                for c, b in zip(coeffs, basis):
                    if c:
                        for i in range(d):
                            for j in range(d):
                                mat[i][j] += c * b[v][i][j]
                f[v] = mat
        if all(m.dim_at(v) == 0 or inverse(f[v]) is not None for v in q.vertices):
            return IsoVerdict("isomorphic-witness", f, t)
    return IsoVerdict("inconclusive", trials=trials)


def coordinates_of_module(sigma: Skeleton, critical: CriticalData, m: ModuleRealization, tops=None,
                          extra_tops=None) -> PointData:
    """The point c of a module for which σ is a skeleton (the map ψ).

    ``extra_tops`` gives, in the big setting, the images of the slots outside
    the top of σ (as (vertex, vector)), which fix the N₀ coordinates.
    """
    ctx = sigma.ctx
    tops = list(tops if tops is not None else m.tops)
    q = ctx.quiver
    top_of = {}
    for r, (v, vec) in zip(sigma.top_slots, tops):
        top_of[r] = vec
    if extra_tops:
        absent = [r for r in range(1, ctx.t + 1) if r not in top_of]
        for r, (v, vec) in zip(absent, extra_tops):
            top_of[r] = vec
    image = {mp: m.apply(mp.path, top_of[mp.slot]) for mp in sigma.ordered}
    comp: Dict[str, List[ModPath]] = {v: [] for v in q.vertices}
    for mp in sigma.ordered:
        comp[mp.target].append(mp)
    inv = {}
    for v in q.vertices:
        mat = [[image[mp][i] for mp in comp[v]] for i in range(m.dim_at(v))]
        iv = inverse(mat) if mat else []
        if iv is None:
            raise ValidationError(f"σ is not a basis of the module at vertex {v}")
        inv[v] = iv
    values = {}
    index = critical.index()
    for crit in critical.critical_paths:
        if crit.slot not in top_of:
            continue
        vec = m.apply(crit.path, top_of[crit.slot])
        v = crit.target
        coeffs = [sum((x * y for x, y in zip(row, vec) if x and y), Fraction(0)) for row in inv[v]]
        members = set(critical.sigma_sets[crit])
        for mp, x in zip(comp[v], coeffs):
            if mp in members:
                values[index[Coordinate(crit, mp)]] = x
            elif x:
                raise ValidationError(f"{crit} has support outside its σ-set")
    return PointData(critical, values, default_zero=True)


class QModel:
    """Arrow action on coordinate vectors of Q = ⊕ Λz_r in its truncated basis."""

    def __init__(self, ctx: ProjectiveContext):
        self.ctx = ctx
        self.basis: TruncatedBasis = truncated_module_basis(ctx.algebra, ctx.slots)
        q = ctx.quiver
        self.act_table: Dict[str, List[Dict[int, Fraction]]] = {}
        for a in q.arrows:
            col = []
            for e in self.basis.elements:
                if e.target != a.source:
                    col.append({})
                else:
                    col.append(self.basis.coords(ModPath(e.slot, q.extend(e.path, a))))
            self.act_table[a.name] = col
        self.vertex_of = [e.target for e in self.basis.elements]

    @property
    def dim(self) -> int:
        return self.basis.dim

    def act(self, arrow: str, vec: Sequence) -> list:
        """α · v for a coordinate vector with entries in any ring supporting + and *."""
        out = [0] * self.dim
        table = self.act_table[arrow]
        for k, x in enumerate(vec):
            if x:
                for k2, y in table[k].items():
                    out[k2] = out[k2] + x * y
        return out

    def vertex_components(self, vec: Sequence) -> List[list]:
        out = []
        for v in self.ctx.quiver.vertices:
            w = [x if self.vertex_of[k] == v else 0 for k, x in enumerate(vec)]
            if any(w):
                out.append(w)
        return out

    def element(self, terms) -> List[Fraction]:
        """Vector of Σ c · p z_r from (coefficient, slot, arrows) triples."""
        vec = [Fraction(0)] * self.dim
        for c, slot, arrows in terms:
            mp = self.ctx.modpath(slot, arrows)
            for k, x in self.basis.coords(mp).items():
                vec[k] += Fraction(c) * x
        return vec

    def submodule_span(self, generators: Sequence[Sequence[Fraction]]) -> RowSpace:
        """K-basis (RREF) of the Λ-submodule generated by the given vectors."""
        rs = RowSpace(self.dim)
        queue = []
        for g in generators:
            for w in self.vertex_components([Fraction(x) for x in g]):
                if rs.add(w):
                    queue.append(w)
        while queue:
            w = queue.pop()
            for a in self.ctx.quiver.arrows:
                img = self.act(a.name, w)
                if any(img) and rs.add(img):
                    queue.append(img)
        return rs


class SubmodulePresentation:
    """A Λ-submodule C of Q given by generators in the truncated basis of Q."""

    def __init__(self, ctx: ProjectiveContext, generators: Sequence[Sequence[Fraction]], model: QModel = None):
        self.ctx = ctx
        self.model = model or QModel(ctx)
        self.generators = [[Fraction(x) for x in g] for g in generators]
        for g in self.generators:
            if len(g) != self.model.dim:
                raise ValidationError("generator length does not match dim Q")
        self._span = None

    @classmethod
    def from_terms(cls, ctx: ProjectiveContext, generators, model: QModel = None) -> "SubmodulePresentation":
        model = model or QModel(ctx)
        return cls(ctx, [model.element(g) for g in generators], model)

    def span(self) -> RowSpace:
        if self._span is None:
            self._span = self.model.submodule_span(self.generators)
        return self._span

    @property
    def dim(self) -> int:
        return len(self.span())

    def basis(self) -> Matrix:
        return self.span().basis()

    def equals(self, other: "SubmodulePresentation") -> bool:
        return self.basis() == other.basis()

    def quotient(self) -> ModuleRealization:
        """Q/C on the basis of truncated-basis elements that are not pivots of C."""
        span = self.span()
        model = self.model
        q = self.ctx.quiver
        pivots = set(span.pivots)
        keep = [k for k in range(model.dim) if k not in pivots]
        comp: Dict[str, List[int]] = {v: [] for v in q.vertices}
        for k in keep:
            comp[model.vertex_of[k]].append(k)
        pos = {k: i for v in q.vertices for i, k in enumerate(comp[v])}
        maps = {}
        for a in q.arrows:
            mat = zeros(len(comp[a.target]), len(comp[a.source]))
            for j, k in enumerate(comp[a.source]):
                e = [Fraction(0)] * model.dim
                e[k] = Fraction(1)
                img = span.reduce(model.act(a.name, e))
                for k2, x in enumerate(img):
                    if x:
                        mat[pos[k2]][j] = x
            maps[a.name] = mat
        tops = []
        for r in range(1, self.ctx.t + 1):
            v = self.ctx.e(r)
            z = span.reduce(model.element([(1, r, [])]))
            tops.append((v, [z[k] for k in comp[v]]))
        labels = {v: [str(model.basis.elements[k]) for k in comp[v]] for v in q.vertices}
        return ModuleRealization(self.ctx.algebra, [len(comp[v]) for v in q.vertices], maps, tops, labels)


def point_submodule(sigma: Skeleton, critical: CriticalData, c: PointData, model: QModel = None) -> SubmodulePresentation:
    """U(c): generated by αpz_r - Σ c qz_s over the critical paths (and z_r - Σ c qz_s in the big setting)."""
    ctx = sigma.ctx
    model = model or QModel(ctx)
    index = critical.index()
    gens = []
    for crit in critical.critical_paths:
        terms = [(1, crit.slot, list(crit.path.arrows))]
        for member in critical.sigma_sets[crit]:
            x = c[index[Coordinate(crit, member)]]
            if x:
                terms.append((-x, member.slot, list(member.path.arrows)))
        gens.append(model.element(terms))
    return SubmodulePresentation(ctx, gens, model)
