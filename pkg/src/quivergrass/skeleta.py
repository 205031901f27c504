"""Skeleta, critical paths, σ-sets and the coordinate index N."""
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import InvalidSkeleton, ValidationError
from .layering import SemisimpleSequence, cover_slots
from .quiver import ModPath, Path

SMALL = "small"
BIG = "big"


class ProjectiveContext:
    """A projective ⊕ Λz_r with numbered top elements, slot r normed by ``slots[r-1]``.

    Small setting: the distinguished cover of a top T. Big setting: the
    cover of ⊕ S_i^{d_i}, where d is a full dimension vector.
    """

    def __init__(self, algebra, slots: Sequence[str], setting: str = SMALL):
        if setting not in (SMALL, BIG):
            raise ValidationError(f"unknown setting {setting!r}")
        q = algebra.quiver
        idx = [q.vertex_index[v] for v in slots]
        if idx != sorted(idx):
            raise ValidationError("slots must be grouped by vertex in vertex order")
        self.algebra = algebra
        self.slots: Tuple[str, ...] = tuple(slots)
        self.setting = setting

    @classmethod
    def small(cls, algebra, top: Sequence[int]) -> "ProjectiveContext":
        return cls(algebra, cover_slots(algebra, top), SMALL)

    @classmethod
    def big(cls, algebra, dimension_vector: Sequence[int]) -> "ProjectiveContext":
        return cls(algebra, cover_slots(algebra, dimension_vector), BIG)

    @classmethod
    def for_sequence(cls, algebra, s: SemisimpleSequence, setting: str = SMALL) -> "ProjectiveContext":
        if setting == SMALL:
            return cls.small(algebra, s.top)
        return cls.big(algebra, s.total)

    @property
    def quiver(self):
        return self.algebra.quiver

    @property
    def t(self) -> int:
        return len(self.slots)

    def e(self, r: int) -> str:
        return self.slots[r - 1]

    def top_path(self, r: int) -> ModPath:
        return ModPath(r, self.quiver.trivial(self.e(r)))

    def key(self, mp: ModPath):
        """Canonical ModPath order: slot, then canonical path order."""
        return (mp.slot, self.quiver.path_key(mp.path))

    def modpath(self, slot: int, arrows: Sequence[str]) -> ModPath:
        if not 1 <= slot <= self.t:
            raise ValidationError(f"slot {slot} out of range 1..{self.t}")
        return ModPath(slot, self.quiver.path(self.e(slot), arrows))

    def parse_word(self, text: str) -> ModPath:
        """Parse ``"gbaz1"``-style product notation with single-letter arrows."""
        w, _, r = text.rpartition("z")
        return self.modpath(int(r), list(reversed(w)))

    def groups(self) -> Dict[str, List[int]]:
        out: Dict[str, List[int]] = {}
        for r, v in enumerate(self.slots, start=1):
            out.setdefault(v, []).append(r)
        return out

    def __eq__(self, other):
        return isinstance(other, ProjectiveContext) and (self.algebra, self.slots, self.setting) == (
            other.algebra, other.slots, other.setting)

    def __hash__(self):
        return hash((self.slots, self.setting))

    def __repr__(self):
        return f"ProjectiveContext({list(self.slots)}, {self.setting})"


class Skeleton:
    """A finite set of module-paths closed under initial subpaths."""

    def __init__(self, paths: Iterable[ModPath], ctx: ProjectiveContext):
        self.ctx = ctx
        self.paths: FrozenSet[ModPath] = frozenset(paths)
        self.ordered: List[ModPath] = sorted(self.paths, key=ctx.key)

    def __contains__(self, mp):
        return mp in self.paths

    def __iter__(self):
        return iter(self.ordered)

    def __len__(self):
        return len(self.paths)

    def __eq__(self, other):
        return isinstance(other, Skeleton) and self.paths == other.paths

    def __hash__(self):
        return hash(self.paths)

    def __repr__(self):
        return "Skeleton{" + ", ".join(str(p) for p in self.ordered) + "}"

    def sort_key(self):
        return tuple(self.ctx.key(p) for p in self.ordered)

    def level(self, l: int) -> List[ModPath]:
        return [p for p in self.ordered if p.length == l]

    @property
    def top_slots(self) -> List[int]:
        return [p.slot for p in self.ordered if p.length == 0]

    @property
    def dimension_vector(self) -> Tuple[int, ...]:
        q = self.ctx.quiver
        d = [0] * q.n
        for p in self.paths:
            d[q.vertex_index[p.target]] += 1
        return tuple(d)

    def text(self) -> str:
        return "".join(p.text() + "\n" for p in self.ordered)


def is_skeleton(paths: Iterable[ModPath], ctx: ProjectiveContext) -> bool:
    paths = set(paths)
    L = ctx.algebra.L
    for mp in paths:
        if not 1 <= mp.slot <= ctx.t or mp.path.source != ctx.e(mp.slot):
            return False
        if mp.length > L:
            return False
        if mp.length and ModPath(mp.slot, mp.path.prefix(mp.length - 1)) not in paths:
            return False
    if ctx.setting == SMALL:
        return all(ctx.top_path(r) in paths for r in range(1, ctx.t + 1))
    return True


def require_skeleton(paths: Iterable[ModPath], ctx: ProjectiveContext) -> Skeleton:
    paths = list(paths)
    if not is_skeleton(paths, ctx):
        raise InvalidSkeleton("path set is not a skeleton in this context")
    return Skeleton(paths, ctx)


def compatible_sequence(sigma: Skeleton) -> SemisimpleSequence:
    """Layer l at vertex i counts the paths of length l in σ ending at e_i."""
    q = sigma.ctx.quiver
    layers = [[0] * q.n for _ in range(sigma.ctx.algebra.L + 1)]
    for p in sigma.paths:
        layers[p.length][q.vertex_index[p.target]] += 1
    return SemisimpleSequence(layers)


def _choose_level(candidates: List[ModPath], counts: Sequence[int], vertices) -> Iterable[Tuple[ModPath, ...]]:
    by_v: Dict[str, List[ModPath]] = {v: [] for v in vertices}
    for c in candidates:
        by_v[c.target].append(c)
    per_vertex = []
    for v, k in zip(vertices, counts):
        if k > len(by_v[v]):
            return []
        per_vertex.append(list(itertools.combinations(by_v[v], k)))
    return (tuple(itertools.chain.from_iterable(combo)) for combo in itertools.product(*per_vertex))


def _extend(ctx: ProjectiveContext, level: Sequence[ModPath]) -> List[ModPath]:
    q = ctx.quiver
    out = []
    for mp in level:
        for a in q.out_arrows(mp.target):
            out.append(ModPath(mp.slot, q.extend(mp.path, a)))
    return sorted(out, key=ctx.key)


def _grow(ctx: ProjectiveContext, s: SemisimpleSequence, level0: Tuple[ModPath, ...]) -> List[Tuple[ModPath, ...]]:
    vertices = ctx.quiver.vertices
    results = []

    def rec(l: int, acc: Tuple[ModPath, ...], last: Tuple[ModPath, ...]):
        if l == len(s.layers):
            results.append(acc)
            return
        counts = s.layers[l]
        if not any(counts):
            # all later layers must be empty too
            if any(any(x) for x in s.layers[l:]):
                return
            results.append(acc)
            return
        for chosen in _choose_level(_extend(ctx, last), counts, vertices):
            rec(l + 1, acc + chosen, chosen)

    rec(1, level0, level0)
    return results


def canonical_relabel(sigma: Skeleton) -> Skeleton:
    """Minimal representative under slot permutations that fix norming vertices."""
    ctx = sigma.ctx
    trees: Dict[int, List[ModPath]] = {r: [] for r in range(1, ctx.t + 1)}
    for p in sigma.paths:
        trees[p.slot].append(p)

    def tree_key(r):
        ps = trees[r]
        present = ctx.top_path(r) in sigma.paths
        return (0 if present else 1, tuple(sorted(ctx.quiver.path_key(p.path) for p in ps)))

    relabel = {}
    for v, rs in ctx.groups().items():
        for new, old in zip(rs, sorted(rs, key=tree_key)):
            relabel[old] = new
    return Skeleton((ModPath(relabel[p.slot], p.path) for p in sigma.paths), ctx)


def enumerate_skeleta(ctx: ProjectiveContext, s: SemisimpleSequence, dedupe_top_permutations: bool = False,
                      parallel: int = 1) -> List[Skeleton]:
    """All skeleta in ``ctx`` compatible with ``s``, in canonical order.

    In the big setting the top slots may be any t_i of the d_i slots at
    each vertex; with deduplication only the first t_i are used.
    """
    L = ctx.algebra.L
    q = ctx.quiver
    s = s.padded(max(L + 1, len(s.layers)))
    if len(s.layers) > L + 1:
        return []
    groups = ctx.groups()
    if ctx.setting == SMALL:
        if tuple(len(groups.get(v, [])) for v in q.vertices) != s.top:
            raise ValidationError("context slots do not match the top of the sequence")
        top_choices = [tuple(range(1, ctx.t + 1))]
    else:
        if tuple(len(groups.get(v, [])) for v in q.vertices) != s.total:
            raise ValidationError("context slots do not match the dimension vector of the sequence")
        per_v = []
        for v, t in zip(q.vertices, s.top):
            rs = groups.get(v, [])
            per_v.append([rs[:t]] if dedupe_top_permutations else list(itertools.combinations(rs, t)))
        top_choices = [tuple(itertools.chain.from_iterable(c)) for c in itertools.product(*per_v)]

    def work(tops):
        level0 = tuple(ctx.top_path(r) for r in tops)
        return _grow(ctx, s, level0)

    if parallel > 1 and len(top_choices) > 1:
        with ThreadPoolExecutor(max_workers=parallel) as ex:
            raw = [x for chunk in ex.map(work, top_choices) for x in chunk]
    else:
        raw = [x for tops in top_choices for x in work(tops)]
    out = {}
    for paths in raw:
        sk = Skeleton(paths, ctx)
        if dedupe_top_permutations:
            sk = canonical_relabel(sk)
        out[sk.paths] = sk
    return sorted(out.values(), key=Skeleton.sort_key)


@dataclass(frozen=True)
class Coordinate:
    """An element (critical path, σ-set member) of N."""

    critical: ModPath
    member: ModPath

    def name(self) -> str:
        return f"X[{self.critical} ; {self.member}]"


@dataclass
class CriticalData:
    skeleton: Skeleton
    critical_paths: List[ModPath]
    sigma_sets: Dict[ModPath, List[ModPath]]
    N: List[Coordinate]
    n1: int

    @property
    def N1(self) -> List[Coordinate]:
        return self.N[: self.n1]

    @property
    def N0(self) -> List[Coordinate]:
        return self.N[self.n1:]

    def index(self) -> Dict[Coordinate, int]:
        return {nu: i for i, nu in enumerate(self.N)}

    def variables_of(self, crit: ModPath) -> List[int]:
        pos = self.index()
        return [pos[Coordinate(crit, q)] for q in self.sigma_sets[crit]]


def critical_data(sigma: Skeleton, ctx: Optional[ProjectiveContext] = None) -> CriticalData:
    """σ-critical paths (positive length first, then absent top elements), σ-sets and N."""
    ctx = ctx or sigma.ctx
    L = ctx.algebra.L
    positive = [c for c in _extend(ctx, sigma.ordered) if c not in sigma.paths and c.length <= L]
    positive = sorted(set(positive), key=ctx.key)
    zero = []
    if ctx.setting == BIG:
        zero = [ctx.top_path(r) for r in range(1, ctx.t + 1) if ctx.top_path(r) not in sigma.paths]
    crit = positive + zero
    sets = {}
    for c in crit:
        sets[c] = [p for p in sigma.ordered if p.length >= c.length and p.target == c.target]
    N = [Coordinate(c, m) for c in positive for m in sets[c]]
    n1 = len(N)
    N += [Coordinate(c, m) for c in zero for m in sets[c]]
    return CriticalData(sigma, crit, sets, N, n1)


def nonzero_critical_paths(crit: CriticalData, algebra=None) -> List[ModPath]:
    """Critical paths whose residue in Λ is nonzero (drops those lying in I)."""
    ctx = crit.skeleton.ctx
    algebra = algebra or ctx.algebra
    return [c for c in crit.critical_paths if algebra.vertex_basis(ctx.e(c.slot)).coords(c.path)]


def n_invariance_check(ctx: ProjectiveContext, s: SemisimpleSequence) -> bool:
    """|N| is the same for every skeleton compatible with ``s``."""
    sizes = {len(critical_data(sk).N) for sk in enumerate_skeleta(ctx, s)}
    return len(sizes) <= 1


def parse_skeleton(text: str, ctx: ProjectiveContext) -> Skeleton:
    """Inverse of ``Skeleton.text``: lines ``r: a.b.c``; blank and ``#`` lines ignored."""
    paths = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, tail = line.partition(":")
        if not sep:
            raise ValidationError(f"line {lineno}: expected 'slot: arrows'")
        try:
            slot = int(head)
        except ValueError:
            raise ValidationError(f"line {lineno}: bad slot {head!r}") from None
        arrows = [a for a in tail.strip().split(".") if a] if tail.strip() else []
        try:
            paths.append(ctx.modpath(slot, arrows))
        except ValidationError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
    if not is_skeleton(paths, ctx):
        raise InvalidSkeleton("path set is not a skeleton in this context")
    return Skeleton(paths, ctx)
