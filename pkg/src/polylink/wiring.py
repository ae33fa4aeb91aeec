"""How a polygonal link method joins strand ends at edges and vertices.

Every dart owns strand ends near its tail vertex: one (``S``) for single
lines, a left and a right one for double lines.  Left and right are taken
looking along the edge towards the vertex, so going counterclockwise
around a vertex the ends read ``L0, R0, L1, R1, ...`` in rotation order.
"""

from __future__ import annotations

from .polymethod import PolygonalMethod, VertexRule, check_applicable
from .tcell import TCell

L, R, S = "L", "R", "S"

End = tuple[int, str]


class Wiring:
    """Strand ends, their partners along edges (``along``) and through
    vertices (``at``), and the vertex chords in rotation order."""

    def __init__(self, cell: TCell, method: PolygonalMethod):
        check_applicable(cell, method)
        self.cell = cell
        self.method = method
        sides = (S,) if method.single_line else (L, R)
        self.ends: list[End] = [(d, s) for d in range(cell.n_darts) for s in sides]
        self.along: dict[End, End] = {}
        self.at: dict[End, End] = {}
        for d in range(0, cell.n_darts, 2):
            e = cell.rev[d]
            if method.single_line:
                pairs = [((d, S), (e, S))]
            elif method.twists % 2 == 0:
                pairs = [((d, R), (e, L)), ((d, L), (e, R))]
            else:
                pairs = [((d, R), (e, R)), ((d, L), (e, L))]
            for a, b in pairs:
                self.along[a], self.along[b] = b, a
        self.chords: dict[int, list[tuple[End, End]]] = {}
        for v, rot in enumerate(cell.rotation):
            n = len(rot)
            if method.single_line:
                chords = [((rot[i], S), (rot[i + 2], S)) for i in range(2)]
            elif method.vertex_rule is VertexRule.CROSSED:
                chords = [((rot[i], R), (rot[(i + 2) % n], L)) for i in range(n)]
            else:
                chords = [((rot[i], R), (rot[(i + 1) % n], L)) for i in range(n)]
            for a, b in chords:
                self.at[a], self.at[b] = b, a
            self.chords[v] = chords

    def circle(self, v: int) -> dict[End, int]:
        """Counterclockwise position of each strand end around vertex ``v``."""
        order = {}
        for i, d in enumerate(self.cell.rotation[v]):
            order[(d, L)] = order[(d, S)] = 2 * i
            order[(d, R)] = 2 * i + 1
        return order

    def torus_components(self) -> list[list[End]]:
        """Each strand on the torus as its cyclic list of ends, entering edges."""
        seen: set[End] = set()
        comps = []
        for start in self.ends:
            if start in seen:
                continue
            comp = []
            x = start
            while x not in seen:
                y = self.along[x]
                seen.update((x, y))
                comp.append(x)
                x = self.at[y]
            comps.append(comp)
        return comps


def interleave(c1, c2, circle) -> bool:
    """Whether two chords with ends on one circle cross."""
    a, b = sorted((circle[c1[0]], circle[c1[1]]))
    inside = [a < circle[p] < b for p in c2]
    return inside[0] != inside[1]
