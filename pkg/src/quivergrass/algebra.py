"""The algebra KΓ/I with a Loewy bound, modelled on truncated path spaces.

Projective modules are represented by the span of all paths of length at
most L out of the top elements, modulo the span of two-sided multiples
``u·ρ·v`` of the relations (terms longer than L dropped, since they lie in
the ideal anyway). The elimination runs with columns sorted by path length,
so each pivot sits on the shortest path of its row and the non-pivot paths
of length l form a basis of the l-th radical layer.
"""
import heapq
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    LengthExceedsBound,
    NonNormedRelation,
    ShortRelation,
    ValidationError,
)
from .linalg import Matrix, zeros
from .quiver import ModPath, Path, Quiver, compose, paths_up_to_length


@dataclass(frozen=True)
class Relation:
    terms: Tuple[Tuple[Fraction, Path], ...]

    def __init__(self, terms):
        terms = tuple((Fraction(c), p) for c, p in terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise ValidationError("empty relation")
        paths = [p for _, p in terms]
        if len(set(paths)) != len(paths):
            raise ValidationError("duplicate path in relation")
        if any(c == 0 for c, _ in terms):
            raise ValidationError("zero coefficient in relation")

    @property
    def source(self) -> str:
        return self.terms[0][1].source

    @property
    def min_length(self) -> int:
        return min(p.length for _, p in self.terms)

    @property
    def max_length(self) -> int:
        return max(p.length for _, p in self.terms)

    def __str__(self):
        parts = []
        for c, p in self.terms:
            parts.append(f"{c}*{p.word()}" if c != 1 else p.word())
        return " + ".join(parts)


@dataclass
class ValidationReport:
    valid: bool
    relation_count: int
    appended_paths: int
    effective_count: int

    def __bool__(self):
        return self.valid


class AlgebraPresentation:
    """Λ = KΓ/I where I is generated by ``relations`` and all paths of length L+1."""

    def __init__(self, quiver: Quiver, relations: Sequence = (), loewy_bound: int = 1, check: bool = True):
        self.quiver = quiver
        self.relations: Tuple[Relation, ...] = tuple(
            r if isinstance(r, Relation) else Relation(r) for r in relations
        )
        self.L = int(loewy_bound)
        self._lock = threading.Lock()
        self._vertex_bases: Dict[str, "VertexBasis"] = {}
        if check:
            validate(self)

    @property
    def loewy_bound(self) -> int:
        return self.L

    def key(self):
        rels = tuple(tuple((c, p.arrows, p.source) for c, p in r.terms) for r in self.relations)
        return (self.quiver.vertices, self.quiver.arrows, rels, self.L)

    def __eq__(self, other):
        return isinstance(other, AlgebraPresentation) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"AlgebraPresentation({self.quiver!r}, {[str(r) for r in self.relations]}, L={self.L})"

    def long_paths(self) -> List[Path]:
        """All paths of length exactly L+1, canonical order."""
        out = []
        for v in self.quiver.vertices:
            out.extend(p for p in paths_up_to_length(self.quiver, v, self.L + 1) if p.length == self.L + 1)
        return out

    def effective_relations(self) -> List[Relation]:
        """Given relations followed by every path of length L+1."""
        return list(self.relations) + [Relation([(1, p)]) for p in self.long_paths()]

    def left_generators(self) -> List[Relation]:
        """A generating set of I as a left ideal, every element normed.

        Each relation ρ is multiplied on the right by all paths v ending at
        its source; terms longer than L are dropped, since they are left
        multiples of length-(L+1) paths, which are appended at the end.
        """
        q = self.quiver
        out = []
        seen = set()
        for rho in self.relations:
            for v0 in q.vertices:
                for v in paths_up_to_length(q, v0, self.L - rho.min_length):
                    if v.target != rho.source:
                        continue
                    terms = [(c, compose(p, v)) for c, p in rho.terms if p.length + v.length <= self.L]
                    if not terms:
                        continue
                    key = tuple((c, p) for c, p in terms)
                    if key in seen:
                        continue
                    seen.add(key)
                    out.append(Relation(terms))
        out.extend(Relation([(1, p)]) for p in self.long_paths())
        return out

    def vertex_basis(self, v: str) -> "VertexBasis":
        with self._lock:
            vb = self._vertex_bases.get(v)
            if vb is None:
                vb = VertexBasis(self, v)
                self._vertex_bases[v] = vb
            return vb


def validate(presentation: AlgebraPresentation) -> ValidationReport:
    """Check norming and length bounds; report the effective relation count."""
    L = presentation.L
    if L < 0:
        raise ValidationError("loewy_bound must be nonnegative")
    q = presentation.quiver
    for rho in presentation.relations:
        sources = {p.source for _, p in rho.terms}
        if len(sources) != 1:
            raise NonNormedRelation(f"relation {rho} has paths from several source vertices")
        for _, p in rho.terms:
            # re-walk the path against the quiver to catch foreign arrows
            q.path(p.source, p.arrows)
            if p.length < 2:
                raise ShortRelation(f"relation {rho} has a term of length {p.length}")
            if p.length > L:
                raise LengthExceedsBound(f"relation {rho} has a term longer than L = {L}")
    appended = len(presentation.long_paths())
    n = len(presentation.relations)
    return ValidationReport(True, n, appended, n + appended)


class VertexBasis:
    """Basis of Λe_v from truncated path-space elimination.

    ``paths`` are the basis paths (non-pivot columns) in canonical order;
    ``coords(path)`` expresses any path from v in that basis.
    """

    def __init__(self, algebra: AlgebraPresentation, v: str):
        q = algebra.quiver
        L = algebra.L
        self.vertex = v
        self.all_paths: List[Path] = paths_up_to_length(q, v, L)
        self.col: Dict[Path, int] = {p: i for i, p in enumerate(self.all_paths)}
        self._pivot_rows: Dict[int, Dict[int, Fraction]] = {}
        by_len: Dict[int, List[Path]] = {}
        for p in self.all_paths:
            by_len.setdefault(p.length, []).append(p)
        for rho in algebra.relations:
            for v_path in self.all_paths:
                if v_path.target != rho.source or v_path.length + rho.min_length > L:
                    continue
                inner = [(c, compose(p, v_path)) for c, p in rho.terms if p.length + v_path.length <= L]
                if not inner:
                    continue
                for c_u in _left_multiples(q, inner, L):
                    vec = {}
                    for c, p in c_u:
                        i = self.col[p]
                        vec[i] = vec.get(i, Fraction(0)) + c
                    self._insert(vec)
        self.basis_cols: List[int] = [i for i in range(len(self.all_paths)) if i not in self._pivot_rows]
        self.paths: List[Path] = [self.all_paths[i] for i in self.basis_cols]
        self.index: Dict[Path, int] = {p: k for k, p in enumerate(self.paths)}
        self._coord_cache: Dict[Path, Dict[int, Fraction]] = {}
        self._cache_lock = threading.Lock()

    def _reduce(self, vec: Dict[int, Fraction]) -> Dict[int, Fraction]:
        w = {k: x for k, x in vec.items() if x}
        heap = [k for k in w if k in self._pivot_rows]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            f = w.get(c)
            if not f:
                continue
            for k, x in self._pivot_rows[c].items():
                y = w.get(k, Fraction(0)) - f * x
                if y:
                    if k not in w and k in self._pivot_rows:
                        heapq.heappush(heap, k)
                    w[k] = y
                else:
                    w.pop(k, None)
        return w

    def _insert(self, vec: Dict[int, Fraction]) -> None:
        w = self._reduce(vec)
        if not w:
            return
        p = min(w)
        inv = 1 / w[p]
        self._pivot_rows[p] = {k: x * inv for k, x in w.items()}

    @property
    def dim(self) -> int:
        return len(self.paths)

    def coords(self, path: Path) -> Dict[int, Fraction]:
        """Coordinates of the residue of ``path`` (source v) in the basis ``paths``."""
        if path.source != self.vertex:
            raise ValidationError(f"path {path} does not start at {self.vertex}")
        with self._cache_lock:
            hit = self._coord_cache.get(path)
        if hit is not None:
            return hit
        i = self.col.get(path)
        if i is None:
            out: Dict[int, Fraction] = {}
        else:
            red = self._reduce({i: Fraction(1)})
            pos = {c: k for k, c in enumerate(self.basis_cols)}
            out = {pos[c]: x for c, x in sorted(red.items())}
        with self._cache_lock:
            self._coord_cache[path] = out
        return out

    def layer_dims(self, quiver: Quiver) -> List[List[int]]:
        """Per length l, the count of basis paths of length l ending at each vertex."""
        L = max((p.length for p in self.all_paths), default=0)
        out = [[0] * quiver.n for _ in range(L + 1)]
        for p in self.paths:
            out[p.length][quiver.vertex_index[p.target]] += 1
        return out


def _left_multiples(quiver: Quiver, inner, L: int):
    """Term lists of u·(Σ c p) over all paths u, dropping terms longer than L."""
    min_len = min(p.length for _, p in inner)
    targets = sorted({p.target for _, p in inner}, key=quiver.vertex_index.get)
    out = []
    for t in targets:
        for u in paths_up_to_length(quiver, t, L - min_len):
            terms = [(c, compose(u, p)) for c, p in inner if p.target == t and p.length + u.length <= L]
            if terms:
                out.append(terms)
    return out


@dataclass
class TruncatedBasis:
    """Basis of Q = ⊕_r Λz_r; element k is ``elements[k]`` (a ModPath)."""

    algebra: AlgebraPresentation
    top_slots: Tuple[str, ...]
    elements: List[ModPath]
    offsets: List[int]

    @property
    def dim(self) -> int:
        return len(self.elements)

    def coords(self, mp: ModPath) -> Dict[int, Fraction]:
        """Sparse coordinates of the residue of a module-path (zero if longer than L)."""
        v = self.top_slots[mp.slot - 1]
        if mp.path.source != v:
            raise ValidationError(f"{mp} does not start at the norming vertex of slot {mp.slot}")
        if mp.length > self.algebra.L:
            return {}
        off = self.offsets[mp.slot - 1]
        return {off + k: x for k, x in self.algebra.vertex_basis(v).coords(mp.path).items()}

    def vector(self, mp: ModPath) -> List[Fraction]:
        out = [Fraction(0)] * self.dim
        for k, x in self.coords(mp).items():
            out[k] = x
        return out

    def layer(self, k: int) -> int:
        return self.elements[k].length

    def layer_dims(self) -> List[List[int]]:
        q = self.algebra.quiver
        out = [[0] * q.n for _ in range(self.algebra.L + 1)]
        for e in self.elements:
            out[e.length][q.vertex_index[e.target]] += 1
        return out


def truncated_module_basis(presentation: AlgebraPresentation, top_slots: Sequence[str]) -> TruncatedBasis:
    """Basis of ⊕ Λz_r, slot r normed by ``top_slots[r-1]``."""
    validate(presentation)
    elements: List[ModPath] = []
    offsets = []
    for r, v in enumerate(top_slots, start=1):
        offsets.append(len(elements))
        vb = presentation.vertex_basis(v)
        elements.extend(ModPath(r, p) for p in vb.paths)
    return TruncatedBasis(presentation, tuple(top_slots), elements, offsets)


class ModuleRealization:
    """A finite-dimensional representation: one matrix per arrow.

    ``dims`` follows the quiver's vertex order. ``maps[a]`` has shape
    dims[target] x dims[source] and acts on column vectors. ``tops`` is an
    optional list of (vertex, vector) marked generators.
    """

    def __init__(self, algebra: AlgebraPresentation, dims: Sequence[int], maps: Dict[str, Matrix],
                 tops: Optional[List[Tuple[str, List[Fraction]]]] = None,
                 labels: Optional[Dict[str, List[str]]] = None):
        self.algebra = algebra
        q = algebra.quiver
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != q.n:
            raise ValidationError("dimension list does not match the vertex count")
        self.maps: Dict[str, Matrix] = {}
        for a in q.arrows:
            m = maps.get(a.name)
            ds, dt = self.dim_at(a.source), self.dim_at(a.target)
            if m is None:
                m = zeros(dt, ds)
            m = [[Fraction(x) for x in row] for row in m]
            if len(m) != dt or any(len(row) != ds for row in m):
                raise ValidationError(f"matrix for arrow {a.name} has the wrong shape")
            self.maps[a.name] = m
        self.tops = list(tops) if tops else []
        self.labels = labels
        self._sparse: Dict[str, list] = {}

    def dim_at(self, v: str) -> int:
        return self.dims[self.algebra.quiver.vertex_index[v]]

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def _columns(self, name: str):
        cols = self._sparse.get(name)
        if cols is None:
            m = self.maps[name]
            a = self.algebra.quiver.arrow(name)
            cols = [[(i, row[j]) for i, row in enumerate(m) if row[j]] for j in range(self.dim_at(a.source))]
            self._sparse[name] = cols
        return cols

    def act(self, name: str, vec: Sequence[Fraction]) -> List[Fraction]:
        """Image of a vector under one arrow map."""
        a = self.algebra.quiver.arrow(name)
        out = [Fraction(0)] * self.dim_at(a.target)
        for x, col in zip(vec, self._columns(name)):
            if x:
                for i, y in col:
                    out[i] += x * y
        return out

    def apply(self, path: Path, vec: Sequence[Fraction]) -> List[Fraction]:
        """Act by a path on a vector in the component at path.source."""
        w = list(vec)
        for name in path.arrows:
            w = self.act(name, w)
        return w

    def map_of(self, path: Path) -> Matrix:
        """Matrix of a path, dims[target] x dims[source]."""
        n = self.dim_at(path.source)
        cols = []
        for j in range(n):
            e = [Fraction(0)] * n
            e[j] = Fraction(1)
            cols.append(self.apply(path, e))
        rows = self.dim_at(path.target)
        return [[cols[j][i] for j in range(n)] for i in range(rows)]

    def direct_sum(self, other: "ModuleRealization") -> "ModuleRealization":
        q = self.algebra.quiver
        maps = {}
        for a in q.arrows:
            A, B = self.maps[a.name], other.maps[a.name]
            ds1, dt1 = self.dim_at(a.source), self.dim_at(a.target)
            ds2, dt2 = other.dim_at(a.source), other.dim_at(a.target)
            m = zeros(dt1 + dt2, ds1 + ds2)
            for i in range(dt1):
                for j in range(ds1):
                    m[i][j] = A[i][j]
            for i in range(dt2):
                for j in range(ds2):
                    m[dt1 + i][ds1 + j] = B[i][j]
            maps[a.name] = m
        dims = [x + y for x, y in zip(self.dims, other.dims)]
        tops = []
        for v, vec in self.tops:
            tops.append((v, list(vec) + [Fraction(0)] * other.dim_at(v)))
        for v, vec in other.tops:
            tops.append((v, [Fraction(0)] * self.dim_at(v) + list(vec)))
        return ModuleRealization(self.algebra, dims, maps, tops)

    def key(self):
        return (self.dims, tuple((a, tuple(map(tuple, m))) for a, m in sorted(self.maps.items())))


def simple_module(algebra: AlgebraPresentation, v: str) -> ModuleRealization:
    dims = [1 if w == v else 0 for w in algebra.quiver.vertices]
    return ModuleRealization(algebra, dims, {}, tops=[(v, [Fraction(1)])])


def projective_realization(presentation: AlgebraPresentation, top_slots: Sequence[str]) -> ModuleRealization:
    """Q = ⊕ Λz_r acting on the truncated basis; marked tops are the z_r."""
    tb = truncated_module_basis(presentation, top_slots)
    return realization_from_basis(tb)


def realization_from_basis(tb: TruncatedBasis) -> ModuleRealization:
    q = tb.algebra.quiver
    comp: Dict[str, List[int]] = {v: [] for v in q.vertices}
    for k, e in enumerate(tb.elements):
        comp[e.target].append(k)
    pos = {}
    for v, ks in comp.items():
        for i, k in enumerate(ks):
            pos[k] = i
    maps = {}
    for a in q.arrows:
        src, tgt = comp[a.source], comp[a.target]
        m = zeros(len(tgt), len(src))
        for j, k in enumerate(src):
            e = tb.elements[k]
            img = ModPath(e.slot, q.extend(e.path, a))
            for k2, x in tb.coords(img).items():
                m[pos[k2]][j] = x
        maps[a.name] = m
    dims = [len(comp[v]) for v in q.vertices]
    tops = []
    for r in range(1, len(tb.top_slots) + 1):
        v = tb.top_slots[r - 1]
        k = tb.offsets[r - 1]
        vec = [Fraction(0)] * len(comp[v])
        vec[pos[k]] = Fraction(1)
        tops.append((v, vec))
    labels = {v: [str(tb.elements[k]) for k in comp[v]] for v in q.vertices}
    return ModuleRealization(tb.algebra, dims, maps, tops, labels)


def projective_radical_layers(presentation: AlgebraPresentation, top_slots: Sequence[str]):
    """Radical layers of ⊕ Λz_r as a SemisimpleSequence."""
    from .layering import SemisimpleSequence

    tb = truncated_module_basis(presentation, top_slots)
    return SemisimpleSequence(tb.layer_dims())


@dataclass
class RelationsVerdict:
    ok: bool
    relation: Optional[str] = None
    vertex: Optional[str] = None
    basis_index: Optional[int] = None

    def __bool__(self):
        return self.ok


def relations_check(m: ModuleRealization, algebra: Optional[AlgebraPresentation] = None) -> RelationsVerdict:
    """All effective relations act as zero; the witness is the first failure.

    Relations are tested on every basis vector of their source component.
    Paths of length L+1 are tested as a batch: J^{L+1} M must vanish.
    """
    algebra = algebra or m.algebra
    q = algebra.quiver
    for rho in algebra.relations:
        v = rho.source
        n = m.dim_at(v)
        for j in range(n):
            e = [Fraction(0)] * n
            e[j] = Fraction(1)
            acc: Dict[str, List[Fraction]] = {}
            for c, p in rho.terms:
                w = m.apply(p, e)
                cur = acc.setdefault(p.target, [Fraction(0)] * m.dim_at(p.target))
                for i, x in enumerate(w):
                    if x:
                        cur[i] += c * x
            if any(any(x for x in w) for w in acc.values()):
                return RelationsVerdict(False, str(rho), v, j)
    from .layering import radical_series

    top = radical_series(m)[-1]
    if not any(top.values()):
        return RelationsVerdict(True)
    # some path of length L+1 acts nontrivially; walk the paths to name one
    for v in q.vertices:
        n = m.dim_at(v)
        for j in range(n):
            e = [Fraction(0)] * n
            e[j] = Fraction(1)
            frontier = [(q.trivial(v), e)]
            for _ in range(algebra.L + 1):
                frontier = [(q.extend(p, a), m.act(a.name, w)) for p, w in frontier if any(w)
                            for a in q.out_arrows(p.target)]
            for p, w in frontier:
                if any(w):
                    return RelationsVerdict(False, p.word(), v, j)
    return RelationsVerdict(True)
