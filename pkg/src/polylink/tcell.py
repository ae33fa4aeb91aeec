"""Generating cells of doubly periodic tilings as graphs on the flat torus.

A :class:`TCell` is a combinatorial map: vertices, darts (directed
half-edges) and a counterclockwise rotation of the darts leaving each
vertex.  Every undirected edge ``k`` owns the darts ``2k`` (its canonical
direction, written ``label+``) and ``2k + 1`` (``label-``), and carries an
integer translation vector recording how its canonical direction crosses
the sides of the fundamental domain.  Summing signed translation vectors
along a closed walk gives the walk's class in ``H_1(T^2) = Z^2``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

Vec = tuple[int, int]

SUPPORTED_TILINGS = ("hexagonal", "kagome", "square", "triangular")


class TCellError(ValueError):
    """Raised when a cell cannot be built or parsed.

    ``kind`` is one of ``syntax``, ``unknown-dart``, ``degree``,
    ``disconnected``, ``rotation``, ``euler``.
    """

    def __init__(self, kind: str, message: str, line: int | None = None,
                 column: int | None = None):
        self.kind = kind
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


# dart helpers -------------------------------------------------------------

def edge_of(dart: int) -> int:
    return dart >> 1


def sign_of(dart: int) -> int:
    """+1 for the canonical dart of its edge, -1 otherwise."""
    return -1 if dart & 1 else 1


def dart_of(edge: int, sign: int) -> int:
    return 2 * edge + (0 if sign > 0 else 1)


def add(u: Vec, v: Vec) -> Vec:
    return (u[0] + v[0], u[1] + v[1])


def scale(k: int, v: Vec) -> Vec:
    return (k * v[0], k * v[1])


@dataclass(frozen=True)
class TCell:
    """Quotient graph of a periodic tiling embedded on the torus.

    The constructor does not validate; use :func:`validate` or the
    builders (:func:`make_tcell`, :func:`builtin_tcell`, :func:`parse_tcell`).
    """

    vertices: tuple[str, ...]
    tail: tuple[int, ...]                     # dart -> vertex index it leaves
    rev: tuple[int, ...]                      # dart -> opposite dart
    rotation: tuple[tuple[int, ...], ...]     # vertex -> ccw darts
    translation: tuple[Vec, ...]              # edge -> vector of canonical dart
    labels: tuple[str, ...]                   # edge -> label
    name: str = ""

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.labels)

    @property
    def n_darts(self) -> int:
        return len(self.tail)

    def head(self, dart: int) -> int:
        return self.tail[self.rev[dart]]

    def degree(self, vertex: int) -> int:
        return len(self.rotation[vertex])

    def degrees(self) -> list[int]:
        return [len(r) for r in self.rotation]

    def vector(self, dart: int) -> Vec:
        """Translation vector of ``dart`` (negated for non-canonical darts)."""
        return scale(sign_of(dart), self.translation[edge_of(dart)])

    def dart_name(self, dart: int) -> str:
        return self.labels[edge_of(dart)] + ("+" if sign_of(dart) > 0 else "-")

    def dart_by_name(self, name: str) -> int:
        label, sign = name[:-1], name[-1]
        if sign not in "+-" or label not in self.labels:
            raise KeyError(name)
        return dart_of(self.labels.index(label), 1 if sign == "+" else -1)

    def position(self, dart: int) -> tuple[int, int]:
        """(vertex, index) of ``dart`` in the rotation system."""
        return self._positions()[dart]

    def _positions(self) -> dict[int, tuple[int, int]]:
        cache = self.__dict__.get("_pos_cache")
        if cache is None:
            cache = {}
            for v, rot in enumerate(self.rotation):
                for i, d in enumerate(rot):
                    cache.setdefault(d, (v, i))
            object.__setattr__(self, "_pos_cache", cache)
        return cache

    def face_cycles(self) -> list[list[int]]:
        return face_cycles(self)

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + len(face_cycles(self))

    # equality ignores the position cache
    def __eq__(self, other):
        if not isinstance(other, TCell):
            return NotImplemented
        return (self.vertices, self.tail, self.rev, self.rotation,
                self.translation, self.labels) == (
            other.vertices, other.tail, other.rev, other.rotation,
            other.translation, other.labels)

    def __hash__(self):
        return hash((self.vertices, self.rotation, self.translation, self.labels))


# construction -------------------------------------------------------------

def make_tcell(vertices: Sequence[str],
               edges: Sequence[tuple[str, str, str, Vec]],
               rotation: dict[str, Sequence[str]],
               name: str = "",
               check: bool = True) -> TCell:
    """Build a cell from names.

    ``edges`` holds ``(label, tail, head, (a, b))`` and ``rotation`` maps a
    vertex name to its counterclockwise list of dart names (``"e1+"``).
    """
    vertices = tuple(vertices)
    vindex = {v: i for i, v in enumerate(vertices)}
    labels = tuple(e[0] for e in edges)
    lindex = {lab: i for i, lab in enumerate(labels)}
    tail: list[int] = []
    for label, u, w, _ in edges:
        for end in (u, w):
            if end not in vindex:
                raise TCellError("unknown-dart", f"edge {label} uses unknown vertex {end!r}")
        tail.extend((vindex[u], vindex[w]))
    rev = tuple(d ^ 1 for d in range(len(tail)))
    rot: list[tuple[int, ...]] = []
    for v in vertices:
        darts = []
        for token in rotation.get(v, ()):
            label, sign = token[:-1], token[-1]
            if sign not in "+-" or label not in lindex:
                raise TCellError("unknown-dart", f"unknown dart {token!r} at vertex {v}")
            darts.append(dart_of(lindex[label], 1 if sign == "+" else -1))
        rot.append(tuple(darts))
    cell = TCell(vertices, tuple(tail), rev, tuple(rot),
                 tuple((int(e[3][0]), int(e[3][1])) for e in edges), labels, name)
    if check:
        ensure_valid(cell)
    return cell


def _from_geometry(name: str, basis: tuple[tuple[float, float], tuple[float, float]],
                   points: dict[str, tuple[float, float]],
                   edges: Sequence[tuple[str, str, str, Vec]]) -> TCell:
    """Derive the counterclockwise rotation from Cartesian positions."""
    (ax, ay), (bx, by) = basis
    out: dict[str, list[tuple[float, str]]] = {v: [] for v in points}
    for label, u, w, (a, b) in edges:
        dx = points[w][0] + a * ax + b * bx - points[u][0]
        dy = points[w][1] + a * ay + b * by - points[u][1]
        out[u].append((math.atan2(dy, dx) % (2 * math.pi), label + "+"))
        out[w].append((math.atan2(-dy, -dx) % (2 * math.pi), label + "-"))
    rotation = {}
    for v, lst in out.items():
        lst.sort()
        tokens = [t for _, t in lst]
        # start each rotation at its first canonical-looking token for stable output
        k = tokens.index(min(tokens, key=_token_key))
        rotation[v] = tokens[k:] + tokens[:k]
    return make_tcell(list(points), edges, rotation, name=name)


def _token_key(token: str):
    return (_natural_key(token[:-1]), token[-1] != "+")


def _natural_key(s: str):
    return [int(p) if p.isdigit() else p for p in re.split(r"(\d+)", s)]


_S3 = math.sqrt(3.0)


def builtin_tcell(name: str) -> TCell:
    """Standard quotient graphs of the four classical tilings."""
    if name == "square":
        return _from_geometry(
            "square", ((1.0, 0.0), (0.0, 1.0)), {"v": (0.0, 0.0)},
            [("e1", "v", "v", (1, 0)), ("e2", "v", "v", (0, 1))])
    if name == "triangular":
        return _from_geometry(
            "triangular", ((1.0, 0.0), (0.5, _S3 / 2)), {"v": (0.0, 0.0)},
            [("e1", "v", "v", (1, 0)), ("e2", "v", "v", (0, 1)),
             ("e3", "v", "v", (-1, 1))])
    if name == "hexagonal":
        # e1 and e3 run A -> B, e2 runs B -> A; the loop e1+.e3- realizes the
        # second generator and e1+.e2+ the first.
        return _from_geometry(
            "hexagonal", ((_S3 / 2, 1.5), (-_S3 / 2, 1.5)),
            {"A": (0.0, 0.0), "B": (0.0, 1.0)},
            [("e1", "A", "B", (0, 0)), ("e2", "B", "A", (1, 0)),
             ("e3", "A", "B", (0, -1))])
    if name == "kagome":
        return _from_geometry(
            "kagome", ((1.0, 0.0), (0.5, _S3 / 2)),
            {"A": (0.0, 0.0), "B": (0.5, 0.0), "C": (0.25, _S3 / 4)},
            [("e1", "A", "B", (0, 0)), ("e2", "B", "C", (0, 0)),
             ("e3", "C", "A", (0, 0)), ("e4", "B", "A", (1, 0)),
             ("e5", "A", "C", (0, -1)), ("e6", "B", "C", (1, -1))])
    raise TCellError("syntax", f"unknown tiling {name!r}; choose from {', '.join(SUPPORTED_TILINGS)}")


# topology -----------------------------------------------------------------

def face_permutation(cell: TCell) -> list[int]:
    """phi(d) = next dart counterclockwise after rev(d) at the head of d."""
    pos = cell._positions()
    phi = []
    for d in range(cell.n_darts):
        v, i = pos[cell.rev[d]]
        rot = cell.rotation[v]
        phi.append(rot[(i + 1) % len(rot)])
    return phi


def face_cycles(cell: TCell) -> list[list[int]]:
    phi = face_permutation(cell)
    seen = [False] * cell.n_darts
    cycles = []
    for d in range(cell.n_darts):
        if seen[d]:
            continue
        cyc = []
        while not seen[d]:
            seen[d] = True
            cyc.append(d)
            d = phi[d]
        cycles.append(cyc)
    return cycles


def cycle_basis_vectors(cell: TCell) -> list[Vec]:
    """Homology vectors of a fundamental cycle basis (spanning-tree method)."""
    offset: dict[int, Vec] = {0: (0, 0)} if cell.n_vertices else {}
    stack = [0] if cell.n_vertices else []
    tree: set[int] = set()
    while stack:
        v = stack.pop()
        for d in cell.rotation[v]:
            w = cell.head(d)
            if w not in offset:
                offset[w] = add(offset[v], cell.vector(d))
                tree.add(edge_of(d))
                stack.append(w)
    vecs = []
    for e in range(cell.n_edges):
        if e in tree:
            continue
        d = dart_of(e, 1)
        u, w = cell.tail[d], cell.head(d)
        if u in offset and w in offset:
            h = add(add(offset[u], cell.vector(d)), scale(-1, offset[w]))
            vecs.append(h)
    return vecs


def lattice_index(vectors: Iterable[Vec]) -> int:
    """Index of the sublattice of Z^2 spanned by ``vectors`` (0 if rank < 2)."""
    g = 0
    vecs = list(vectors)
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            (p, q), (r, s) = vecs[i], vecs[j]
            g = math.gcd(g, p * s - q * r)
    return g


def validate(cell: TCell) -> list[str]:
    """All violated cell invariants, as human-readable strings."""
    problems: list[str] = []
    n = cell.n_darts
    if len(cell.rev) != n or any(not 0 <= cell.rev[d] < n or cell.rev[cell.rev[d]] != d
                                 or cell.rev[d] == d for d in range(n)):
        problems.append("dart involution broken")
        return problems
    if any(edge_of(cell.rev[d]) != edge_of(d) for d in range(n)):
        problems.append("dart involution broken")
        return problems
    counts = [0] * n
    for v, rot in enumerate(cell.rotation):
        for d in rot:
            if not 0 <= d < n:
                problems.append(f"unknown dart {d} in rotation of {cell.vertices[v]}")
                return problems
            counts[d] += 1
            if cell.tail[d] != v:
                problems.append(f"dart {cell.dart_name(d)} listed at a vertex it does not leave")
    if any(c != 1 for c in counts):
        problems.append("rotation membership broken: each dart must appear exactly once")
    if problems:
        return problems
    low = [cell.vertices[v] for v in range(cell.n_vertices) if cell.degree(v) < 3]
    if low:
        problems.append("degree < 3 at " + ", ".join(low))
    if not _connected(cell):
        problems.append("graph is disconnected")
    if cell.euler_characteristic() != 0:
        problems.append("Euler characteristic ≠ 0")
        return problems
    if any(_sum_vectors(cell, f) != (0, 0) for f in face_cycles(cell)):
        problems.append("face boundary with nonzero translation sum")
    elif not problems and lattice_index(cycle_basis_vectors(cell)) != 1:
        problems.append("translation vectors do not generate Z^2")
    return problems


def ensure_valid(cell: TCell) -> TCell:
    problems = validate(cell)
    if problems:
        first = problems[0]
        if first.startswith("degree"):
            kind = "degree"
        elif first.startswith("graph is disconnected"):
            kind = "disconnected"
        elif first.startswith(("Euler", "face", "translation")):
            kind = "euler"
            first = "not a torus embedding (" + first + ")"
        else:
            kind = "rotation"
        raise TCellError(kind, first)
    return cell


def _connected(cell: TCell) -> bool:
    if cell.n_vertices == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for d in cell.rotation[v]:
            w = cell.head(d)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == cell.n_vertices


def _sum_vectors(cell: TCell, darts: Iterable[int]) -> Vec:
    h = (0, 0)
    for d in darts:
        h = add(h, cell.vector(d))
    return h


def edge_offset(cell: TCell, incoming: int, k: int) -> int:
    """Dart leaving the head of ``incoming`` at ccw position ``k`` from its reversal."""
    v, i = cell.position(cell.rev[incoming])
    rot = cell.rotation[v]
    return rot[(i + k) % len(rot)]


# transformations used by the invariance tests ------------------------------

def relabel(cell: TCell, perm: Sequence[int], flips: Sequence[bool] = (),
            new_labels: Sequence[str] | None = None) -> TCell:
    """Reorder edges by ``perm`` (new edge i is old edge perm[i]) and optionally
    flip canonical directions."""
    flips = list(flips) or [False] * cell.n_edges
    old_to_new: dict[int, int] = {}
    for new, old in enumerate(perm):
        for s in (1, -1):
            nd = dart_of(new, -s if flips[new] else s)
            old_to_new[dart_of(old, s)] = nd
    tail = [0] * cell.n_darts
    for od, nd in old_to_new.items():
        tail[nd] = cell.tail[od]
    rotation = tuple(tuple(old_to_new[d] for d in rot) for rot in cell.rotation)
    translation = tuple(scale(-1 if flips[i] else 1, cell.translation[old])
                        for i, old in enumerate(perm))
    labels = tuple(new_labels) if new_labels else tuple(cell.labels[o] for o in perm)
    return TCell(cell.vertices, tuple(tail), tuple(d ^ 1 for d in range(cell.n_darts)),
                 rotation, translation, labels, cell.name)


def rotate_rotations(cell: TCell, shifts: Sequence[int]) -> TCell:
    """Change the starting dart of each vertex rotation."""
    rotation = tuple(rot[s % len(rot):] + rot[:s % len(rot)]
                     for rot, s in zip(cell.rotation, shifts))
    return TCell(cell.vertices, cell.tail, cell.rev, rotation, cell.translation,
                 cell.labels, cell.name)


def change_basis(cell: TCell, matrix: tuple[tuple[int, int], tuple[int, int]]) -> TCell:
    (a, b), (c, d) = matrix
    if abs(a * d - b * c) != 1:
        raise ValueError("basis change must be unimodular")
    translation = tuple((a * x + b * y, c * x + d * y) for x, y in cell.translation)
    return TCell(cell.vertices, cell.tail, cell.rev, cell.rotation, translation,
                 cell.labels, cell.name)


def mirror(cell: TCell) -> TCell:
    """Reverse every rotation (reflect the embedding)."""
    rotation = tuple(tuple(reversed(rot)) for rot in cell.rotation)
    return TCell(cell.vertices, cell.tail, cell.rev, rotation, cell.translation,
                 cell.labels, cell.name)


def supercell(cell: TCell, nx: int, ny: int) -> TCell:
    """The ``nx x ny`` block of translated cells as a cell of its own.

    Copy ``(i, j)`` of vertex ``v`` is named ``v_i_j`` and of edge ``e`` is
    ``e_i_j``; translation vectors are expressed in the enlarged lattice.
    """
    if nx < 1 or ny < 1:
        raise ValueError("supercell dimensions must be positive")
    if (nx, ny) == (1, 1):
        return cell
    copies = [(i, j) for j in range(ny) for i in range(nx)]
    vindex = {c: k for k, c in enumerate(copies)}
    nv = cell.n_vertices
    vertices = tuple(f"{v}_{i}_{j}" for i, j in copies for v in cell.vertices)
    labels = tuple(f"{lab}_{i}_{j}" for i, j in copies for lab in cell.labels)
    ne = cell.n_edges
    tail, translation = [], []
    for i, j in copies:
        for e in range(ne):
            a, b = cell.translation[e]
            u, w = cell.tail[2 * e], cell.tail[2 * e + 1]
            qi, ri = divmod(i + a, nx)
            qj, rj = divmod(j + b, ny)
            tail += [vindex[(i, j)] * nv + u, vindex[(ri, rj)] * nv + w]
            translation.append((qi, qj))
    rotation = []
    for i, j in copies:
        for v in range(nv):
            darts = []
            for d in cell.rotation[v]:
                e = edge_of(d)
                if sign_of(d) > 0:
                    darts.append(2 * (vindex[(i, j)] * ne + e))
                else:
                    # the copy whose edge e arrives here
                    a, b = cell.translation[e]
                    src = vindex[((i - a) % nx, (j - b) % ny)]
                    darts.append(2 * (src * ne + e) + 1)
            rotation.append(tuple(darts))
    name = f"{cell.name}[{nx}x{ny}]" if cell.name else f"[{nx}x{ny}]"
    return TCell(vertices, tuple(tail), tuple(d ^ 1 for d in range(len(tail))),
                 tuple(rotation), tuple(translation), labels, name)


# text format ---------------------------------------------------------------

_ID = re.compile(r"^[A-Za-z0-9_.]+$")


def parse_tcell(text: str, name: str = "") -> TCell:
    """Parse the line-oriented ``tcell v1`` format."""
    vertices: list[str] = []
    edges: list[tuple[str, str, str, Vec]] = []
    rotation: dict[str, list[str]] = {}
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        words = line.split()
        col = line.index(words[0]) + 1
        if not header_seen:
            if words != ["tcell", "v1"]:
                raise TCellError("syntax", "expected header 'tcell v1'", lineno, col)
            header_seen = True
            continue
        key, args = words[0], words[1:]
        if key == "vertex":
            if len(args) != 1 or not _ID.match(args[0]):
                raise TCellError("syntax", "expected 'vertex <id>'", lineno, col)
            if args[0] in vertices:
                raise TCellError("syntax", f"duplicate vertex {args[0]}", lineno, col)
            vertices.append(args[0])
        elif key == "edge":
            if len(args) != 5 or not _ID.match(args[0]):
                raise TCellError("syntax", "expected 'edge <label> <vid> <vid> <a> <b>'", lineno, col)
            try:
                vec = (int(args[3]), int(args[4]))
            except ValueError:
                bad = args[3] if not re.fullmatch(r"[+-]?\d+", args[3]) else args[4]
                raise TCellError("syntax", f"translation component {bad!r} is not an integer",
                                 lineno, line.index(bad, col) + 1) from None
            if any(e[0] == args[0] for e in edges):
                raise TCellError("syntax", f"duplicate edge {args[0]}", lineno, col)
            for v in args[1:3]:
                if v not in vertices:
                    raise TCellError("unknown-dart", f"edge {args[0]} uses undeclared vertex {v}",
                                     lineno, line.index(v, col) + 1)
            edges.append((args[0], args[1], args[2], vec))
        elif key == "rotation":
            if not args:
                raise TCellError("syntax", "expected 'rotation <vid> <darts...>'", lineno, col)
            if args[0] not in vertices:
                raise TCellError("unknown-dart", f"rotation for undeclared vertex {args[0]}",
                                 lineno, line.index(args[0], col) + 1)
            if args[0] in rotation:
                raise TCellError("syntax", f"second rotation for {args[0]}", lineno, col)
            labels = {e[0] for e in edges}
            for tok in args[1:]:
                if len(tok) < 2 or tok[-1] not in "+-":
                    raise TCellError("syntax", f"bad dart token {tok!r}", lineno,
                                     line.index(tok, col) + 1)
                if tok[:-1] not in labels:
                    raise TCellError("unknown-dart", f"unknown dart {tok!r}", lineno,
                                     line.index(tok, col) + 1)
            rotation[args[0]] = args[1:]
        else:
            raise TCellError("syntax", f"unknown directive {key!r}", lineno, col)
    if not header_seen:
        raise TCellError("syntax", "empty input, expected header 'tcell v1'", 1, 1)
    return make_tcell(vertices, edges, rotation, name=name)


def emit_tcell(cell: TCell) -> str:
    """Serialize; vertices, edges and rotations are sorted by label."""
    lines = ["tcell v1"]
    vorder = sorted(range(cell.n_vertices), key=lambda v: _natural_key(cell.vertices[v]))
    eorder = sorted(range(cell.n_edges), key=lambda e: _natural_key(cell.labels[e]))
    for v in vorder:
        lines.append(f"vertex {cell.vertices[v]}")
    for e in eorder:
        d = dart_of(e, 1)
        a, b = cell.translation[e]
        lines.append(f"edge {cell.labels[e]} {cell.vertices[cell.tail[d]]} "
                     f"{cell.vertices[cell.head(d)]} {a} {b}")
    for v in vorder:
        lines.append("rotation " + " ".join([cell.vertices[v]] +
                                            [cell.dart_name(d) for d in cell.rotation[v]]))
    return "\n".join(lines) + "\n"


def summary_row(cell: TCell) -> str:
    degs = sorted(set(cell.degrees()))
    return (f"{cell.name} V={cell.n_vertices} E={cell.n_edges} "
            f"F={len(face_cycles(cell))} degrees={','.join(map(str, degs))}")
