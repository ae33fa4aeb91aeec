import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import BUILTINS
from polylink.tcell import (TCellError, builtin_tcell, change_basis, edge_offset, emit_tcell,
                            face_cycles, make_tcell, mirror, parse_tcell, relabel,
                            rotate_rotations, summary_row, supercell, validate)

EXPECTED = {
    "square": (1, 2, 1, {4}),
    "triangular": (1, 3, 2, {6}),
    "hexagonal": (2, 3, 1, {3}),
    "kagome": (3, 6, 3, {4}),
}

SQUARE = """tcell v1
vertex v
edge e1 v v 1 0
edge e2 v v 0 1
rotation v e1+ e2+ e1- e2-
"""


@pytest.mark.parametrize("name", BUILTINS)
def test_builtin_counts(name):
    cell = builtin_tcell(name)
    v, e, f, degs = EXPECTED[name]
    assert (cell.n_vertices, cell.n_edges, len(face_cycles(cell))) == (v, e, f)
    assert set(cell.degrees()) == degs
    assert cell.euler_characteristic() == 0
    assert validate(cell) == []


def test_kagome_faces_are_two_triangles_and_a_hexagon():
    lengths = sorted(len(f) for f in face_cycles(builtin_tcell("kagome")))
    assert lengths == [3, 3, 6]


def test_summary_rows():
    assert summary_row(builtin_tcell("hexagonal")) == "hexagonal V=2 E=3 F=1 degrees=3"
    assert summary_row(builtin_tcell("square")) == "square V=1 E=2 F=1 degrees=4"


def test_unknown_builtin():
    with pytest.raises(TCellError):
        builtin_tcell("penrose")


@pytest.mark.parametrize("name", BUILTINS)
def test_emit_parse_round_trip(name):
    cell = builtin_tcell(name)
    text = emit_tcell(cell)
    again = parse_tcell(text, name=name)
    assert again == cell
    assert emit_tcell(again) == text


def test_square_text():
    assert emit_tcell(builtin_tcell("square")) == SQUARE
    assert parse_tcell(SQUARE, name="square") == builtin_tcell("square")


def test_comments_and_blank_lines_are_ignored():
    text = "# a square\n\n" + SQUARE.replace("vertex v\n", "vertex v   # the only one\n")
    assert parse_tcell(text, name="square") == builtin_tcell("square")


def _error(text):
    with pytest.raises(TCellError) as info:
        parse_tcell(text)
    return info.value


def test_degree_two_vertex_rejected():
    err = _error("tcell v1\nvertex v\nedge e1 v v 1 0\nrotation v e1+ e1-\n")
    assert err.kind == "degree"
    assert "degree < 3" in str(err)


def test_swapped_darts_are_not_a_torus_embedding():
    err = _error(SQUARE.replace("e1+ e2+ e1- e2-", "e1+ e1- e2+ e2-"))
    assert err.kind == "euler"
    assert "not a torus embedding" in str(err)


def test_disconnected_rejected():
    text = ("tcell v1\nvertex a\nvertex b\n"
            "edge e1 a a 1 0\nedge e2 a a 0 1\nedge e3 b b 1 0\nedge e4 b b 0 1\n"
            "rotation a e1+ e2+ e1- e2-\nrotation b e3+ e4+ e3- e4-\n")
    err = _error(text)
    assert err.kind == "disconnected"


def test_unknown_dart_has_position():
    err = _error(SQUARE.replace("e2-\n", "e9-\n"))
    assert err.kind == "unknown-dart"
    assert (err.line, err.column) == (5, 24)


def test_bad_translation_has_position():
    err = _error(SQUARE.replace("v v 0 1", "v v 0 x"))
    assert err.kind == "syntax"
    assert (err.line, err.column) == (4, 15)


@pytest.mark.parametrize("text, line", [
    ("", 1),
    ("tcell v2\n", 1),
    ("tcell v1\nvertex\n", 2),
    ("tcell v1\nvertex v\nvertex v\n", 3),
    ("tcell v1\nvertex v\nface f\n", 3),
    ("tcell v1\nvertex v\nedge e1 v w 1 0\n", 3),
])
def test_syntax_errors(text, line):
    err = _error(text)
    assert err.line == line
    assert err.column is not None


def test_missing_rotation_membership():
    err = _error(SQUARE.replace(" e2-\n", "\n"))
    assert err.kind == "rotation"


def test_validate_reports_broken_involution():
    cell = builtin_tcell("square")
    broken = type(cell)(cell.vertices, cell.tail, (1, 0, 3, 3), cell.rotation,
                        cell.translation, cell.labels, cell.name)
    assert validate(broken) == ["dart involution broken"]


def test_validate_reports_sphere():
    # tetrahedron: V - E + F = 4 - 6 + 4
    cell = make_tcell(
        ["a", "b", "c", "d"],
        [("ab", "a", "b", (0, 0)), ("ac", "a", "c", (0, 0)), ("ad", "a", "d", (0, 0)),
         ("bc", "b", "c", (0, 0)), ("bd", "b", "d", (0, 0)), ("cd", "c", "d", (0, 0))],
        {"a": ["ab+", "ac+", "ad+"], "b": ["ab-", "bd+", "bc+"],
         "c": ["ac-", "bc-", "cd+"], "d": ["ad-", "cd-", "bd-"]},
        check=False)
    assert "Euler characteristic ≠ 0" in validate(cell)


def test_validate_requires_full_lattice():
    cell = change_basis(builtin_tcell("square"), ((1, 0), (0, 1)))
    doubled = type(cell)(cell.vertices, cell.tail, cell.rev, cell.rotation,
                         ((2, 0), (0, 1)), cell.labels, cell.name)
    assert validate(doubled) == ["translation vectors do not generate Z^2"]


def test_edge_offset_examples():
    hexa = builtin_tcell("hexagonal")
    e1p = hexa.dart_by_name("e1+")
    assert hexa.dart_name(edge_offset(hexa, e1p, 2)) == "e3-"
    assert edge_offset(hexa, e1p, 0) == hexa.rev[e1p]
    sq = builtin_tcell("square")
    e1 = sq.dart_by_name("e1+")
    # two steps round a degree-4 vertex: straight on
    assert edge_offset(sq, e1, 2) == e1


@pytest.mark.parametrize("name", BUILTINS)
def test_edge_offset_is_bijective(name):
    cell = builtin_tcell(name)
    for k in range(-3, 4):
        image = [edge_offset(cell, d, k) for d in range(cell.n_darts)]
        assert sorted(image) == list(range(cell.n_darts))
        for d, out in enumerate(image):
            assert cell.tail[out] == cell.head(d)
            assert edge_offset(cell, cell.rev[out], -k) == cell.rev[d]


UNIMODULAR = st.sampled_from([((1, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 1), (0, 1)),
                              ((1, 0), (-1, 1)), ((2, 1), (1, 1)), ((0, -1), (1, 0))])


@settings(max_examples=60, deadline=None)
@given(name=st.sampled_from(BUILTINS), matrix=UNIMODULAR, seed=st.integers(0, 10**6))
def test_transformations_keep_cells_valid(name, matrix, seed):
    rng = random.Random(seed)
    cell = builtin_tcell(name)
    perm = list(range(cell.n_edges))
    rng.shuffle(perm)
    flips = [rng.random() < 0.5 for _ in perm]
    cell = relabel(cell, perm, flips)
    cell = rotate_rotations(cell, [rng.randrange(8) for _ in cell.vertices])
    cell = change_basis(cell, matrix)
    if rng.random() < 0.5:
        cell = mirror(cell)
    assert validate(cell) == []
    assert validate(parse_tcell(emit_tcell(cell))) == []


def test_change_basis_rejects_non_unimodular():
    with pytest.raises(ValueError):
        change_basis(builtin_tcell("square"), ((2, 0), (0, 1)))


@pytest.mark.parametrize("name", BUILTINS)
@pytest.mark.parametrize("dims", [(2, 1), (1, 3), (2, 2)])
def test_supercell(name, dims):
    cell = builtin_tcell(name)
    big = supercell(cell, *dims)
    k = dims[0] * dims[1]
    assert validate(big) == []
    assert (big.n_vertices, big.n_edges) == (k * cell.n_vertices, k * cell.n_edges)
    assert len(face_cycles(big)) == k * len(face_cycles(cell))
    assert supercell(cell, 1, 1) is cell
