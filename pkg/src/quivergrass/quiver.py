"""Quivers, paths and module-paths.

A path is stored in traversal order: ``arrows[0]`` is applied first. The
product notation ``pq`` (first q, then p) reads right to left, so
``Path.word()`` reverses the tuple when a human-readable product is needed.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import EndpointMismatch, ValidationError


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Path:
    """Traversal-order path; ``stops`` lists the visited vertices (length + 1 of them)."""

    stops: Tuple[str, ...]
    arrows: Tuple[str, ...]

    @property
    def source(self) -> str:
        return self.stops[0]

    @property
    def target(self) -> str:
        return self.stops[-1]

    @property
    def length(self) -> int:
        return len(self.arrows)

    def word(self, sep: str = "") -> str:
        """Product notation, last-applied arrow first; ``e_<v>`` for trivial paths."""
        if not self.arrows:
            return f"e_{self.source}"
        return sep.join(reversed(self.arrows))

    def prefix(self, k: int) -> "Path":
        return Path(self.stops[: k + 1], self.arrows[:k])

    def suffix(self, k: int) -> "Path":
        """The terminal subpath left after the first k arrows."""
        return Path(self.stops[k:], self.arrows[k:])

    def __str__(self):
        return self.word()


class Quiver:
    """Finite quiver; vertex and arrow order is the declaration order."""

    def __init__(self, vertices: Sequence[str], arrows: Iterable):
        self.vertices: Tuple[str, ...] = tuple(vertices)
        arrs = []
        for a in arrows:
            if not isinstance(a, Arrow):
                a = Arrow(*a)
            arrs.append(a)
        self.arrows: Tuple[Arrow, ...] = tuple(arrs)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationError("duplicate vertex identifiers")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate arrow identifiers")
        vset = set(self.vertices)
        for a in self.arrows:
            if a.source not in vset or a.target not in vset:
                raise ValidationError(f"arrow {a.name} uses an undeclared vertex")
        self.vertex_index: Dict[str, int] = {v: i for i, v in enumerate(self.vertices)}
        self.arrow_index: Dict[str, int] = {a.name: i for i, a in enumerate(self.arrows)}
        self._by_name = {a.name: a for a in self.arrows}
        self._out: Dict[str, Tuple[Arrow, ...]] = {
            v: tuple(a for a in self.arrows if a.source == v) for v in self.vertices
        }

    def __eq__(self, other):
        return isinstance(other, Quiver) and (self.vertices, self.arrows) == (other.vertices, other.arrows)

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return f"Quiver({list(self.vertices)}, {[(a.name, a.source, a.target) for a in self.arrows]})"

    @property
    def n(self) -> int:
        return len(self.vertices)

    def arrow(self, name: str) -> Arrow:
        try:
            return self._by_name[name]
        except KeyError:
            raise ValidationError(f"unknown arrow {name!r}") from None

    def out_arrows(self, v: str) -> Tuple[Arrow, ...]:
        return self._out[v]

    def trivial(self, v: str) -> Path:
        if v not in self.vertex_index:
            raise ValidationError(f"unknown vertex {v!r}")
        return Path((v,), ())

    def path(self, source: str, arrows: Sequence[str]) -> Path:
        """Build a path from traversal-order arrow names, checking endpoints."""
        if source not in self.vertex_index:
            raise ValidationError(f"unknown vertex {source!r}")
        stops = [source]
        for name in arrows:
            a = self.arrow(name)
            if a.source != stops[-1]:
                raise EndpointMismatch(f"arrow {name} does not start at {stops[-1]}")
            stops.append(a.target)
        return Path(tuple(stops), tuple(arrows))

    def path_from_arrows(self, arrows: Sequence[str]) -> Path:
        """Path of positive length; the source is read off the first arrow."""
        if not arrows:
            raise ValidationError("empty arrow list needs an explicit source")
        return self.path(self.arrow(arrows[0]).source, arrows)

    def word(self, w: str) -> Path:
        """Parse product notation with single-letter arrows, e.g. ``"ba"`` = first a, then b."""
        return self.path_from_arrows(list(reversed(w)))

    def path_key(self, p: Path):
        """Canonical order: length, then arrow indices lexicographically."""
        return (len(p.arrows), self.vertex_index[p.source], tuple(self.arrow_index[a] for a in p.arrows))

    def extend(self, p: Path, a: Arrow) -> Path:
        if a.source != p.target:
            raise EndpointMismatch(f"arrow {a.name} does not start at {p.target}")
        return Path(p.stops + (a.target,), p.arrows + (a.name,))


def compose(p: Path, q: Path) -> Path:
    """The product pq: traverse q, then p."""
    if p.source != q.target:
        raise EndpointMismatch(f"cannot compose: {p} starts at {p.source}, {q} ends at {q.target}")
    return Path(q.stops + p.stops[1:], q.arrows + p.arrows)


def initial_subpaths(p: Path) -> List[Path]:
    """All p1 with p = p2 p1, shortest first, from the trivial path up to p."""
    return [p.prefix(k) for k in range(p.length + 1)]


def paths_up_to_length(quiver: Quiver, source: str, L: int) -> List[Path]:
    """All paths from ``source`` of length at most L, in canonical order."""
    if L < 0:
        raise ValidationError("L must be nonnegative")
    layer = [quiver.trivial(source)]
    out = list(layer)
    for _ in range(L):
        nxt = [quiver.extend(p, a) for p in layer for a in quiver.out_arrows(p.target)]
        out.extend(nxt)
        layer = nxt
    return out


def paths_of_length_ending(quiver: Quiver, target: str, length: int) -> List[Path]:
    """Paths of exactly the given length ending at ``target``, canonical order."""
    out = []
    for v in quiver.vertices:
        out.extend(p for p in paths_up_to_length(quiver, v, length) if p.length == length and p.target == target)
    return sorted(out, key=quiver.path_key)


@dataclass(frozen=True)
class ModPath:
    """A path ``p ẑ_r`` in a projective with numbered top elements; slots are 1-based."""

    slot: int
    path: Path

    @property
    def length(self) -> int:
        return self.path.length

    @property
    def target(self) -> str:
        return self.path.target

    def text(self) -> str:
        """Serialized form ``r: a.b.c`` (traversal order), ``r:`` for a top element."""
        if not self.path.arrows:
            return f"{self.slot}:"
        return f"{self.slot}: {'.'.join(self.path.arrows)}"

    def __str__(self):
        w = "" if not self.path.arrows else self.path.word()
        return f"{w}z{self.slot}"
