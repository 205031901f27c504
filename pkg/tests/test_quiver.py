import random

import pytest
from hypothesis import given, settings, strategies as st

from quivergrass.errors import EndpointMismatch, ValidationError
from quivergrass.quiver import Quiver, compose, initial_subpaths, paths_up_to_length

from support import brute_paths


@pytest.fixture
def loops3():
    return Quiver(["1"], [("a", "1", "1"), ("b", "1", "1"), ("c", "1", "1")])


@pytest.fixture
def line3():
    return Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")])


def test_compose_first_right_then_left(loops3):
    a, b = loops3.path("1", ["a"]), loops3.path("1", ["b"])
    ab = compose(a, b)
    assert ab.arrows == ("b", "a")
    assert ab.length == 2
    assert ab.word() == "ab"


def test_compose_with_trivial_path(line3):
    p = line3.path("1", ["a", "b"])
    assert compose(line3.trivial("3"), p) == p
    assert compose(p, line3.trivial("1")) == p


def test_compose_endpoints(line3):
    a, b = line3.path("1", ["a"]), line3.path("2", ["b"])
    ba = compose(b, a)
    assert (ba.source, ba.target, ba.length) == ("1", "3", 2)
    with pytest.raises(EndpointMismatch):
        compose(a, b)


def test_initial_subpaths(loops3, line3):
    p = loops3.word("cba")
    assert [s.word() for s in initial_subpaths(p)] == ["e_1", "a", "ba", "cba"]
    e = loops3.trivial("1")
    assert initial_subpaths(e) == [e]
    q = line3.path("1", ["a", "b"])
    assert [s.arrows for s in initial_subpaths(q)] == [(), ("a",), ("a", "b")]
    assert [s.target for s in initial_subpaths(q)] == ["1", "2", "3"]


def test_paths_up_to_length_counts(loops3):
    assert len(paths_up_to_length(loops3, "1", 1)) == 4
    assert len(paths_up_to_length(loops3, "1", 2)) == 13
    q = Quiver(["1", "2"], [("a", "1", "2")])
    assert paths_up_to_length(q, "2", 5) == [q.trivial("2")]


def test_paths_match_bruteforce(loops3, line3):
    for q, v in ((loops3, "1"), (line3, "1"), (line3, "2")):
        got = sorted(p.arrows for p in paths_up_to_length(q, v, 3))
        assert got == sorted(brute_paths(q, v, 3))


def test_quiver_validation():
    with pytest.raises(ValidationError):
        Quiver(["1", "1"], [])
    with pytest.raises(ValidationError):
        Quiver(["1"], [("a", "1", "2")])
    with pytest.raises(ValidationError):
        Quiver(["1"], [("a", "1", "1"), ("a", "1", "1")])


def test_declaration_order_not_alphabetical():
    q = Quiver(["v", "u"], [("z", "v", "u"), ("y", "v", "u")])
    names = [p.arrows for p in paths_up_to_length(q, "v", 1)]
    assert names == [(), ("z",), ("y",)]


@st.composite
def quiver_and_path(draw):
    n = draw(st.integers(1, 3))
    vs = [str(i) for i in range(n)]
    k = draw(st.integers(1, 4))
    arrows = [(f"x{i}", draw(st.sampled_from(vs)), draw(st.sampled_from(vs))) for i in range(k)]
    q = Quiver(vs, arrows)
    seed = draw(st.integers(0, 10**6))
    return q, seed


def _random_walk(q, rng, start, n):
    p = q.trivial(start)
    for _ in range(n):
        outs = q.out_arrows(p.target)
        if not outs:
            break
        p = q.extend(p, rng.choice(outs))
    return p


@settings(max_examples=60, deadline=None)
@given(quiver_and_path())
def test_compose_associative(data):
    q, seed = data
    rng = random.Random(seed)
    r = _random_walk(q, rng, rng.choice(q.vertices), 3)
    s = _random_walk(q, rng, r.target, 3)
    t = _random_walk(q, rng, s.target, 3)
    assert compose(t, compose(s, r)) == compose(compose(t, s), r)


@settings(max_examples=60, deadline=None)
@given(quiver_and_path())
def test_initial_subpaths_chain(data):
    q, seed = data
    rng = random.Random(seed)
    p = _random_walk(q, rng, rng.choice(q.vertices), 5)
    subs = initial_subpaths(p)
    assert len(subs) == p.length + 1
    for x, y in zip(subs, subs[1:]):
        assert y.arrows[:-1] == x.arrows and y.source == x.source


@settings(max_examples=40, deadline=None)
@given(quiver_and_path(), st.integers(0, 3))
def test_paths_closed_and_stable(data, L):
    q, seed = data
    v = random.Random(seed).choice(q.vertices)
    ps = paths_up_to_length(q, v, L)
    assert len(set(ps)) == len(ps)
    pset = set(ps)
    for p in ps:
        assert all(s in pset for s in initial_subpaths(p))
    assert paths_up_to_length(q, v, L) == ps
    assert ps == sorted(ps, key=q.path_key)
