"""Edge words of characteristic loops and their classification.

A loop's word lists its directed edges as letters of the free group on the
cell's edges (``e1+.e3-.e2-``).  The classification decides whether the
strand covering the loop can be part of a weave or polycatenane motif:

* ``Simple``: no edge repeats and no vertex is passed twice;
* ``Trivial``: the cyclic word is ``g`` followed by ``g`` with every
  orientation reversed (or it freely reduces to nothing);
* ``Knotted``: the loop passes a degree-four vertex twice and one of the
  two closed curves it splits into there is null-homologous, so the
  crossing survives in the plane;
* ``ProductOfSimple``: every split at a repeated vertex leaves two
  essential pieces, and repeated splitting ends in simple factors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

from .polymethod import CharacteristicLoop, PolygonalMethod
from .tcell import TCell, Vec, add, edge_of


class WordError(ValueError):
    """The word is not a closed walk on the cell."""


class WordVerdict(str, Enum):
    SIMPLE = "Simple"
    TRIVIAL = "Trivial"
    PRODUCT_OF_SIMPLE = "ProductOfSimple"
    KNOTTED = "Knotted"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class EdgeWord:
    letters: tuple[tuple[str, int], ...]
    cyclic: bool = True

    def __str__(self) -> str:
        return ".".join(f"{lab}{'+' if s > 0 else '-'}" for lab, s in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    @classmethod
    def parse(cls, text: str, cyclic: bool = True) -> "EdgeWord":
        letters = []
        for tok in text.strip().split("."):
            m = re.fullmatch(r"([A-Za-z0-9_]+)([+-])", tok.strip())
            if not m:
                raise WordError(f"bad letter {tok!r}")
            letters.append((m.group(1), 1 if m.group(2) == "+" else -1))
        return cls(tuple(letters), cyclic)

    def darts(self, cell: TCell) -> tuple[int, ...]:
        try:
            return tuple(cell.dart_by_name(f"{lab}{'+' if s > 0 else '-'}")
                         for lab, s in self.letters)
        except KeyError as exc:
            raise WordError(f"unknown edge {exc.args[0]!r}") from None

    def inverse(self) -> "EdgeWord":
        return EdgeWord(tuple((lab, -s) for lab, s in reversed(self.letters)), self.cyclic)


def word_of(cell: TCell, loop) -> EdgeWord:
    darts = loop.edges if isinstance(loop, CharacteristicLoop) else tuple(loop)
    return EdgeWord(tuple((cell.labels[edge_of(d)], 1 if d % 2 == 0 else -1) for d in darts))


@dataclass
class WordClass:
    verdict: WordVerdict
    witnesses: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DividedCurvePair:
    point: str
    visits: tuple[int, int]
    left: tuple[int, ...]
    right: tuple[int, ...]
    left_homology: Vec
    right_homology: Vec


@dataclass(frozen=True)
class SelfIntersection:
    vertex: str
    visits: tuple[int, int]
    lifts: bool
    odd_twist_caveat: bool = False


# helpers --------------------------------------------------------------------

def _as_darts(cell: TCell, obj) -> tuple[int, ...]:
    if isinstance(obj, EdgeWord):
        darts = obj.darts(cell)
    elif isinstance(obj, CharacteristicLoop):
        darts = obj.edges
    else:
        darts = tuple(obj)
    if not darts:
        raise WordError("empty word")
    for i, d in enumerate(darts):
        nxt = darts[(i + 1) % len(darts)]
        if cell.head(d) != cell.tail[nxt]:
            raise WordError(f"{cell.dart_name(d)} is not followed by an adjacent edge "
                            f"({cell.dart_name(nxt)})")
    return darts


def _homology(cell: TCell, darts) -> Vec:
    h = (0, 0)
    for d in darts:
        h = add(h, cell.vector(d))
    return h


def _visits(cell: TCell, darts) -> dict[int, list[int]]:
    """vertex -> indices i where the walk is at the vertex before letter i."""
    out: dict[int, list[int]] = {}
    for i, d in enumerate(darts):
        out.setdefault(cell.tail[d], []).append(i)
    return out


def _split(darts, i: int, j: int):
    return darts[i:j], darts[j:] + darts[:i]


def free_reduce(darts, cell: TCell, cyclic: bool = True) -> tuple[int, ...]:
    out: list[int] = []
    for d in darts:
        if out and out[-1] == cell.rev[d]:
            out.pop()
        else:
            out.append(d)
    if cyclic:
        while len(out) >= 2 and out[0] == cell.rev[out[-1]]:
            out = out[1:-1]
    return tuple(out)


def _is_simple(cell: TCell, darts) -> bool:
    if len({edge_of(d) for d in darts}) != len(darts):
        return False
    return all(len(v) == 1 for v in _visits(cell, darts).values())


def _is_trivial(cell: TCell, darts) -> bool:
    if not free_reduce(darts, cell):
        return True
    n = len(darts)
    if n % 2:
        return False
    half = n // 2
    for r in range(n):
        w = darts[r:] + darts[:r]
        if all(w[half + i] == cell.rev[w[i]] for i in range(half)):
            return True
    return False


# operations -----------------------------------------------------------------

def divided_curves(cell: TCell, loop, point) -> list[DividedCurvePair]:
    """Split ``loop`` at every pair of its visits to ``point``."""
    darts = _as_darts(cell, loop)
    v = point if isinstance(point, int) else cell.vertices.index(point)
    visits = _visits(cell, darts).get(v, [])
    if len(visits) < 2:
        raise WordError(f"loop does not pass {cell.vertices[v]} twice")
    out = []
    for i, j in combinations(visits, 2):
        a, b = _split(darts, i, j)
        if _returns_left(cell, darts, i, j):
            left, right = a, b
        else:
            left, right = b, a
        out.append(DividedCurvePair(cell.vertices[v], (i, j), left, right,
                                    _homology(cell, left), _homology(cell, right)))
    return out


def _returns_left(cell: TCell, darts, i: int, j: int) -> bool:
    """Whether the piece walked from visit i comes back to the left of its start."""
    v, start = cell.position(darts[i])
    _, back = cell.position(cell.rev[darts[j - 1]])
    n = cell.degree(v)
    rel = (back - start) % n
    return 0 < rel < n / 2 or (rel == n / 2 and i < j)


def self_intersection_vertices(cell: TCell, loop,
                               method: PolygonalMethod | None = None) -> list[SelfIntersection]:
    """Every repeated vertex visit pair, and whether it survives in the plane.

    The pair survives when one of its divided curves is null-homologous.
    ``odd_twist_caveat`` marks pairs where an odd twist count and a loop
    that crosses the domain boundary may make a surviving-looking point
    vanish; the lift oracle settles those.
    """
    darts = _as_darts(cell, loop)
    method = method or getattr(loop, "method", None)
    crosses = any(cell.vector(d) != (0, 0) for d in darts)
    repeats = len(set(darts)) < len(darts)
    out = []
    for v, visits in sorted(_visits(cell, darts).items()):
        for i, j in combinations(visits, 2):
            a, b = _split(darts, i, j)
            lifts = _homology(cell, a) == (0, 0) or _homology(cell, b) == (0, 0)
            caveat = bool(method is not None and method.odd and crosses and repeats)
            out.append(SelfIntersection(cell.vertices[v], (i, j), lifts, caveat))
    return out


def _decompose(cell: TCell, darts) -> list[tuple[int, ...]]:
    """Cut out innermost sub-loops at repeated vertices until all are simple."""
    factors = []
    stack = [tuple(darts)]
    while stack:
        w = stack.pop()
        if _is_simple(cell, w) or len(w) == 1:
            factors.append(w)
            continue
        # first closing of a vertex revisit walking forward
        seen: dict[int, int] = {}
        cut = None
        for k, d in enumerate(w):
            v = cell.tail[d]
            if v in seen:
                cut = (seen[v], k)
                break
            seen[v] = k
        if cut is None:
            # repeated edge without a repeated vertex: only possible for length 2
            factors.append(w)
            continue
        a, b = _split(w, *cut)
        stack.extend((b, a))
    return factors


def classify_word(cell: TCell, word) -> WordClass:
    darts = _as_darts(cell, word)
    visits = _visits(cell, darts)
    zero_splits = []
    for v, vs in sorted(visits.items()):
        for i, j in combinations(vs, 2):
            a, b = _split(darts, i, j)
            if _homology(cell, a) == (0, 0) or _homology(cell, b) == (0, 0):
                zero_splits.append((v, i, j, a, b))
    for v, i, j, a, b in zero_splits:
        if cell.degree(v) == 4:
            return WordClass(WordVerdict.KNOTTED, _knot_witness(cell, v, i, j, a, b))
    if _is_simple(cell, darts):
        return WordClass(WordVerdict.SIMPLE)
    if _is_trivial(cell, darts):
        return WordClass(WordVerdict.TRIVIAL)
    if zero_splits:
        v, i, j, a, b = zero_splits[0]
        return WordClass(WordVerdict.KNOTTED, _knot_witness(cell, v, i, j, a, b))
    factors = _decompose(cell, darts)
    return WordClass(WordVerdict.PRODUCT_OF_SIMPLE, {
        "points": [cell.vertices[v] for v, vs in sorted(visits.items()) if len(vs) > 1],
        "factors": [".".join(cell.dart_name(d) for d in f) for f in factors],
    })


def _knot_witness(cell: TCell, v, i, j, a, b) -> dict:
    return {"vertex": cell.vertices[v], "visits": [i, j],
            "factorization": [".".join(cell.dart_name(d) for d in a),
                              ".".join(cell.dart_name(d) for d in b)]}
