"""Dimension vectors, semisimple sequences and the dominance order."""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .errors import DimensionMismatch, InvalidModule
from .linalg import RowSpace


class SemisimpleSequence:
    """Layers S_0, ..., S_L, each a dimension vector indexed by vertex order."""

    def __init__(self, layers: Sequence[Sequence[int]]):
        self.layers: Tuple[Tuple[int, ...], ...] = tuple(tuple(int(x) for x in s) for s in layers)
        if not self.layers:
            raise ValueError("a semisimple sequence needs at least the top layer")
        n = len(self.layers[0])
        if any(len(s) != n for s in self.layers):
            raise ValueError("layers have different lengths")
        if any(x < 0 for s in self.layers for x in s):
            raise ValueError("negative multiplicity")

    @property
    def n(self) -> int:
        return len(self.layers[0])

    @property
    def top(self) -> Tuple[int, ...]:
        return self.layers[0]

    @property
    def total(self) -> Tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.layers))

    @property
    def dim(self) -> int:
        return sum(self.total)

    def padded(self, length: int) -> "SemisimpleSequence":
        """Extend with zero layers (or drop trailing zero layers) to ``length`` entries."""
        layers = list(self.layers)
        while len(layers) > length and not any(layers[-1]):
            layers.pop()
        while len(layers) < length:
            layers.append((0,) * self.n)
        return SemisimpleSequence(layers)

    def prefix_sums(self) -> List[Tuple[int, ...]]:
        out, acc = [], [0] * self.n
        for s in self.layers:
            acc = [x + y for x, y in zip(acc, s)]
            out.append(tuple(acc))
        return out

    def __eq__(self, other):
        if not isinstance(other, SemisimpleSequence):
            return NotImplemented
        m = max(len(self.layers), len(other.layers))
        return self.padded(m).layers == other.padded(m).layers

    def __hash__(self):
        layers = list(self.layers)
        while len(layers) > 1 and not any(layers[-1]):
            layers.pop()
        return hash(tuple(layers))

    def __repr__(self):
        return f"SemisimpleSequence({[list(s) for s in self.layers]})"

    def to_list(self) -> List[List[int]]:
        return [list(s) for s in self.layers]


def dominates(s_prime: SemisimpleSequence, s: SemisimpleSequence) -> bool:
    """True iff every prefix sum of ``s`` is componentwise ≤ that of ``s_prime``."""
    if s_prime.total != s.total:
        raise DimensionMismatch(f"total dimension vectors differ: {s_prime.total} vs {s.total}")
    m = max(len(s.layers), len(s_prime.layers))
    a = s_prime.padded(m).prefix_sums()
    b = s.padded(m).prefix_sums()
    return all(x >= y for pa, pb in zip(a, b) for x, y in zip(pa, pb))


@dataclass
class SequenceCheck:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def cover_slots(algebra, top: Sequence[int]) -> List[str]:
    """Norming vertices of the distinguished projective cover of a top: t_i copies of e_i, grouped."""
    out = []
    for v, t in zip(algebra.quiver.vertices, top):
        out.extend([v] * t)
    return out


def validate_sequence(s: SemisimpleSequence, algebra) -> SequenceCheck:
    """Each layer is bounded by the matching radical layer of the projective cover of S_0."""
    from .algebra import projective_radical_layers

    L = algebra.L
    if s.n != algebra.quiver.n:
        return SequenceCheck(False, f"expected {algebra.quiver.n} entries per layer, got {s.n}")
    if len(s.layers) != L + 1:
        return SequenceCheck(False, f"expected {L + 1} layers, got {len(s.layers)}")
    cover = projective_radical_layers(algebra, cover_slots(algebra, s.top))
    for l, (layer, bound) in enumerate(zip(s.layers, cover.layers)):
        for v, x, y in zip(algebra.quiver.vertices, layer, bound):
            if x > y:
                return SequenceCheck(False, f"layer {l} at vertex {v}: {x} exceeds {y}")
    return SequenceCheck(True)


def radical_series(m) -> List[Dict[str, List[List[Fraction]]]]:
    """Bases of J^l M per vertex for l = 0..L+1 (the last one must be zero)."""
    q = m.algebra.quiver
    cur: Dict[str, List[List[Fraction]]] = {}
    for v in q.vertices:
        n = m.dim_at(v)
        cur[v] = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    out = [cur]
    for _ in range(m.algebra.L + 1):
        spaces = {v: RowSpace(m.dim_at(v)) for v in q.vertices}
        for a in q.arrows:
            for vec in cur[a.source]:
                img = m.act(a.name, vec)
                if any(img):
                    spaces[a.target].add(img)
        cur = {v: spaces[v].basis() for v in q.vertices}
        out.append(cur)
    return out


def layering_of(m) -> SemisimpleSequence:
    """Radical layering (J^l M / J^{l+1} M) as dimension vectors, L+1 layers."""
    from .algebra import relations_check

    verdict = relations_check(m)
    if not verdict:
        raise InvalidModule(f"relation {verdict.relation} fails at vertex {verdict.vertex}")
    q = m.algebra.quiver
    series = radical_series(m)
    layers = []
    for l in range(m.algebra.L + 1):
        layers.append([len(series[l][v]) - len(series[l + 1][v]) for v in q.vertices])
    return SemisimpleSequence(layers)
