import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from quivergrass.algebra import projective_realization, simple_module
from quivergrass.errors import DimensionMismatch, InvalidModule
from quivergrass.layering import SemisimpleSequence, dominates, layering_of, validate_sequence
from quivergrass.algebra import ModuleRealization

from support import kronecker, random_algebra, two_loops, two_cycle

S = SemisimpleSequence


def test_dominates_examples():
    assert dominates(S([[2], [2], [1]]), S([[1], [2], [2]]))
    s = S([[1, 1], [1, 0]])
    assert dominates(s, s)
    t = S([[2, 0], [0, 1]])
    assert not dominates(s, t) and not dominates(t, s)


def test_dominates_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        dominates(S([[1]]), S([[2]]))


def test_validate_sequence_examples():
    alg = kronecker()
    assert validate_sequence(S([[2, 0], [0, 3]]), alg)
    bad = validate_sequence(S([[2, 0], [0, 7]]), alg)
    assert not bad and "7" in bad.reason
    assert not validate_sequence(S([[0, 0], [0, 1]]), alg)
    assert not validate_sequence(S([[2, 0]]), alg)


def test_layering_examples():
    alg = two_loops()
    assert layering_of(projective_realization(alg, ["1"])).layers == ((1,), (2,), (2,))
    alg2 = two_cycle()
    m = simple_module(alg2, "1").direct_sum(simple_module(alg2, "2"))
    assert layering_of(m).layers == ((1, 1), (0, 0))


def test_layering_rejects_invalid_module():
    alg = two_loops()
    m = ModuleRealization(alg, [2], {"a": [[0, 0], [1, 0]], "b": [[0, 0], [0, 0]]})
    assert layering_of(m).layers == ((1,), (1,), (0,))
    bad = ModuleRealization(alg, [3], {"a": [[0, 0, 0], [1, 0, 0], [0, 1, 0]]})
    with pytest.raises(InvalidModule):
        layering_of(bad)


seqs = st.lists(st.lists(st.integers(0, 2), min_size=2, max_size=2), min_size=3, max_size=3)


def _same_total(a, b, c):
    tot = [sum(col) for col in zip(*a)]
    return all([sum(col) for col in zip(*x)] == tot for x in (b, c))


@settings(max_examples=200, deadline=None)
@given(seqs, seqs, seqs)
def test_dominance_partial_order(a, b, c):
    if not _same_total(a, b, c):
        return
    A, B, C = S(a), S(b), S(c)
    assert dominates(A, A)
    if dominates(A, B) and dominates(B, A):
        assert A == B
    if dominates(A, B) and dominates(B, C):
        assert dominates(A, C)


def test_layering_properties_on_random_projectives():
    rng = random.Random(5)
    for _ in range(25):
        alg = random_algebra(rng)
        v = rng.choice(alg.quiver.vertices)
        m = projective_realization(alg, [v, v])
        s = layering_of(m)
        assert s.total == m.dims
        assert validate_sequence(s, alg)
