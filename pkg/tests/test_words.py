import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import BUILTINS, cases, load, method
from polylink.polymethod import trace_loops
from polylink.tcell import builtin_tcell
from polylink.words import (EdgeWord, WordError, WordVerdict, classify_word, divided_curves,
                            free_reduce, self_intersection_vertices, word_of)


def verdict(cell, text):
    return classify_word(cell, EdgeWord.parse(text)).verdict


def test_word_round_trip():
    w = EdgeWord.parse("e1+.e3-.e2-")
    assert str(w) == "e1+.e3-.e2-"
    assert str(w.inverse()) == "e2+.e3+.e1-"
    assert len(w) == 3
    with pytest.raises(WordError):
        EdgeWord.parse("e1+.e3")


def test_word_of_traced_loop():
    cell = builtin_tcell("hexagonal")
    loop = trace_loops(cell, method("cr:2"))[0]
    assert str(word_of(cell, loop)) == "e1+.e3-.e2-.e1-.e3+.e2+"


def test_examples():
    hexa, sq = builtin_tcell("hexagonal"), builtin_tcell("square")
    assert verdict(hexa, "e1+.e3-.e2-.e1-.e3+.e2+") is WordVerdict.TRIVIAL
    assert verdict(hexa, "e1+.e2+") is WordVerdict.SIMPLE
    assert verdict(sq, "e1+") is WordVerdict.SIMPLE
    assert verdict(sq, "e1+.e2+") is WordVerdict.PRODUCT_OF_SIMPLE
    assert verdict(sq, "e1+.e1-.e2+") is WordVerdict.KNOTTED


def test_trivial_words():
    hexa, sq = builtin_tcell("hexagonal"), builtin_tcell("square")
    # free-group inverse pairs reduce to the empty word
    assert verdict(hexa, "e1+.e3-.e2-.e2+.e3+.e1-") is WordVerdict.TRIVIAL
    assert verdict(hexa, "e1+.e1-") is WordVerdict.TRIVIAL
    assert free_reduce(EdgeWord.parse("e1+.e2+.e2-.e1-").darts(sq), sq) == ()
    # at a degree-4 vertex the null halves make the same shape knotted
    assert verdict(sq, "e1+.e2+.e1-.e2-.e2+.e1+.e2-.e1-") is WordVerdict.KNOTTED


def test_knotted_witness():
    sq = builtin_tcell("square")
    wc = classify_word(sq, EdgeWord.parse("e1+.e1-.e2+"))
    assert wc.witnesses["vertex"] == "v"
    assert "e1+.e1-" in wc.witnesses["factorization"]


def test_non_adjacent_word():
    hexa = builtin_tcell("hexagonal")
    with pytest.raises(WordError):
        classify_word(hexa, EdgeWord.parse("e1+.e3+"))
    with pytest.raises(WordError):
        classify_word(hexa, EdgeWord.parse("e9+"))


def test_figure_eight_divided_curves():
    sq = builtin_tcell("square")
    pairs = divided_curves(sq, EdgeWord.parse("e1+.e2+"), "v")
    assert len(pairs) == 1
    assert {pairs[0].left_homology, pairs[0].right_homology} == {(1, 0), (0, 1)}


def test_null_figure_eight():
    sq = builtin_tcell("square")
    pairs = divided_curves(sq, EdgeWord.parse("e1+.e1-.e2+"), "v")
    assert any((0, 0) in (p.left_homology, p.right_homology) for p in pairs)


def test_inverse_halves_are_null():
    sq = builtin_tcell("square")
    word = EdgeWord.parse("e1+.e2+.e1-.e2-.e2+.e1+.e2-.e1-")
    pair = next(p for p in divided_curves(sq, word, "v") if p.visits == (0, 4))
    assert pair.left_homology == pair.right_homology == (0, 0)


def test_divided_curves_need_a_repeat():
    hexa = builtin_tcell("hexagonal")
    loop = trace_loops(hexa, method("br:3"))[0]
    with pytest.raises(WordError):
        divided_curves(hexa, loop, "A")


@pytest.mark.parametrize("name, m", cases())
def test_divided_curves_sum_to_loop(name, m):
    cell = builtin_tcell(name)
    for loop in trace_loops(cell, method(m)):
        for v in set(cell.tail[d] for d in loop.edges):
            try:
                pairs = divided_curves(cell, loop, v)
            except WordError:
                continue
            for p in pairs:
                total = (p.left_homology[0] + p.right_homology[0],
                         p.left_homology[1] + p.right_homology[1])
                assert total == loop.homology
                assert len(p.left) + len(p.right) == len(loop)


@pytest.mark.parametrize("name, m", cases())
def test_trivial_loops_are_null_and_simple_loops_do_not_repeat(name, m):
    cell = builtin_tcell(name)
    for loop in trace_loops(cell, method(m)):
        wc = classify_word(cell, loop)
        if wc.verdict is WordVerdict.TRIVIAL:
            assert loop.homology == (0, 0)
        if wc.verdict is WordVerdict.SIMPLE:
            assert len({cell.tail[d] for d in loop.edges}) == len(loop)


def _rotations_and_reversal(cell, darts):
    n = len(darts)
    for r in range(n):
        yield darts[r:] + darts[:r]
    yield tuple(cell.rev[d] for d in reversed(darts))


@pytest.mark.parametrize("name, m", cases())
def test_verdict_ignores_start_and_direction(name, m):
    cell = builtin_tcell(name)
    for loop in trace_loops(cell, method(m)):
        expected = classify_word(cell, loop).verdict
        for darts in _rotations_and_reversal(cell, loop.edges):
            assert classify_word(cell, darts).verdict is expected


@settings(max_examples=100, deadline=None)
@given(name=st.sampled_from(BUILTINS), seed=st.integers(0, 10**6), length=st.integers(2, 6))
def test_free_reduction_keeps_homology(name, seed, length):
    cell = builtin_tcell(name)
    rng = random.Random(seed)
    darts = [rng.randrange(cell.n_darts)]
    for _ in range(length):
        darts.append(rng.choice(cell.rotation[cell.head(darts[-1])]))
    walk = darts + [cell.rev[d] for d in reversed(darts)]
    reduced = free_reduce(walk, cell, cyclic=False)
    assert reduced == ()
    total = [0, 0]
    for d in walk:
        total[0] += cell.vector(d)[0]
        total[1] += cell.vector(d)[1]
    assert total == [0, 0]


def test_self_intersection_vertices():
    sq = builtin_tcell("square")
    assert self_intersection_vertices(sq, EdgeWord.parse("e1+")) == []
    (hit,) = self_intersection_vertices(sq, EdgeWord.parse("e1+.e2+"))
    assert hit.vertex == "v" and not hit.lifts
    hits = self_intersection_vertices(sq, EdgeWord.parse("e1+.e1-.e2+"))
    assert any(h.lifts for h in hits)


def test_knotted_fixture_loop():
    cell = load("knotted")
    loops = trace_loops(cell, method("cr:0"))
    verdicts = {str(word_of(cell, l)): classify_word(cell, l).verdict for l in loops}
    assert verdicts["e1+.e3+.e4+.e5-.e3-.e2-"] is WordVerdict.KNOTTED
    hits = self_intersection_vertices(cell, next(l for l in loops if len(l) == 6))
    assert any(h.vertex == "v2" and h.lifts for h in hits)
