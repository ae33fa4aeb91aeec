"""Motif diagrams: the strands of a polygonal link method drawn on the torus.

The cell is laid out in the unit square by a harmonic (Tutte) embedding in
lattice coordinates.  Each dart gets strand ends on a small circle around
its tail vertex; edges carry one strand or two strands twisted ``m`` times,
and vertices join ends by straight chords.  Crossings are found from the
geometry, seeded with the usual over/under conventions, and then repaired
so that every component alternates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import combinations

import numpy as np

from .polymethod import PolygonalMethod, VertexRule, chain_key, trace_loops
from .tcell import TCell, Vec, edge_of, sign_of, supercell
from .wiring import L, R, S, Wiring

Point = tuple[float, float]

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
           "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f")


class LayoutError(RuntimeError):
    """The harmonic layout does not realize the cell's rotation system."""


class AlternationError(RuntimeError):
    def __init__(self, strand: int, message: str):
        super().__init__(f"component {strand}: {message}")
        self.strand = strand


# layout ---------------------------------------------------------------------

@dataclass(frozen=True)
class Layout:
    """Vertex positions in ``[0, 1)^2`` and the drawn offset of every edge.

    ``offsets[e]`` is the vector from the tail of edge ``e`` to its head as
    drawn; ``shifts[e]`` is the lattice copy the head lands in.  With
    ``mirrored`` the drawing is reflected in ``x`` so that it turns the
    same way as the rotation system.
    """

    positions: tuple[Point, ...]
    offsets: tuple[Point, ...]
    shifts: tuple[Vec, ...]
    mirrored: bool = False

    def direction(self, dart: int) -> Point:
        x, y = self.offsets[edge_of(dart)]
        s = sign_of(dart)
        return (s * x, s * y)

    def shift(self, dart: int) -> Vec:
        a, b = self.shifts[edge_of(dart)]
        s = sign_of(dart)
        return (s * a, s * b)


def layout(cell: TCell) -> Layout:
    nv = cell.n_vertices
    lap = np.zeros((nv, nv))
    rhs = np.zeros((nv, 2))
    for e in range(cell.n_edges):
        u, w = cell.tail[2 * e], cell.tail[2 * e + 1]
        if u == w:
            continue
        t = np.array(cell.translation[e], dtype=float)
        lap[u, u] += 1
        lap[w, w] += 1
        lap[u, w] -= 1
        lap[w, u] -= 1
        rhs[u] += t
        rhs[w] -= t
    q = np.linalg.lstsq(lap, rhs, rcond=None)[0] if nv > 1 else np.zeros((1, 2))
    raw = [(q[e_w] + np.array(cell.translation[e]) - q[e_u])
           for e, (e_u, e_w) in enumerate((cell.tail[2 * e], cell.tail[2 * e + 1])
                                          for e in range(cell.n_edges))]
    mirrored = _orientation(cell, [tuple(map(float, r)) for r in raw])
    if mirrored:
        q = q * np.array([-1.0, 1.0])
    q = q - q.mean(axis=0) + 0.5
    # pull positions off the domain boundary where rounding would flip them
    q = np.round(q, 9)
    base = np.floor(q)
    pos = q - base
    offsets, shifts = [], []
    for e in range(cell.n_edges):
        u, w = cell.tail[2 * e], cell.tail[2 * e + 1]
        t = np.array(cell.translation[e], dtype=float)
        if mirrored:
            t = t * np.array([-1.0, 1.0])
        off = q[w] + t - q[u]
        offsets.append((float(off[0]), float(off[1])))
        sh = pos[u] + off - pos[w]
        shifts.append((int(round(sh[0])), int(round(sh[1]))))
    out = Layout(tuple((float(x), float(y)) for x, y in pos), tuple(offsets),
                 tuple(shifts), mirrored)
    _check_planar(cell, out)
    return out


def _angle(v: Point) -> float:
    return math.atan2(v[1], v[0]) % (2 * math.pi)


def _orientation(cell: TCell, raw: list[Point]) -> bool:
    """Whether the drawing must be mirrored to match the rotation system."""
    verdicts = set()
    for v, rot in enumerate(cell.rotation):
        vecs = []
        for d in rot:
            x, y = raw[edge_of(d)]
            vecs.append((sign_of(d) * x, sign_of(d) * y))
        if any(math.hypot(*p) < 1e-9 for p in vecs):
            raise LayoutError(f"edge of zero length at {cell.vertices[v]}")
        angles = [_angle(p) for p in vecs]
        if len(set(round(a, 9) for a in angles)) < len(angles):
            raise LayoutError(f"two edges leave {cell.vertices[v]} in the same direction")
        order = sorted(range(len(rot)), key=lambda i: angles[i])
        k = order.index(0)
        order = order[k:] + order[:k]
        n = len(rot)
        if order == list(range(n)):
            verdicts.add(False)
        elif order == [0] + list(range(n - 1, 0, -1)):
            verdicts.add(True)
        else:
            raise LayoutError(f"harmonic layout does not realize the rotation at {cell.vertices[v]}")
    if len(verdicts) > 1:
        raise LayoutError("rotation system mixes orientations")
    return verdicts.pop() if verdicts else False


def _segments_cross(p1, p2, p3, p4) -> Point | None:
    """Proper intersection point of two segments, if any."""
    d1 = (p2[0] - p1[0], p2[1] - p1[1])
    d2 = (p4[0] - p3[0], p4[1] - p3[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if abs(den) < 1e-12:
        return None
    s = ((p3[0] - p1[0]) * d2[1] - (p3[1] - p1[1]) * d2[0]) / den
    t = ((p3[0] - p1[0]) * d1[1] - (p3[1] - p1[1]) * d1[0]) / den
    eps = 1e-9
    if eps < s < 1 - eps and eps < t < 1 - eps:
        return (p1[0] + s * d1[0], p1[1] + s * d1[1])
    return None


def _check_planar(cell: TCell, lay: Layout) -> None:
    segs = []
    for e in range(cell.n_edges):
        p = lay.positions[cell.tail[2 * e]]
        o = lay.offsets[e]
        segs.append((p, (p[0] + o[0], p[1] + o[1])))
    for i, j in combinations(range(len(segs)), 2):
        for a in (-1, 0, 1):
            for b in (-1, 0, 1):
                q1 = (segs[j][0][0] + a, segs[j][0][1] + b)
                q2 = (segs[j][1][0] + a, segs[j][1][1] + b)
                if _segments_cross(segs[i][0], segs[i][1], q1, q2):
                    raise LayoutError(f"edges {cell.labels[i]} and {cell.labels[j]} cross in the layout")


# diagram data ---------------------------------------------------------------

@dataclass(frozen=True)
class Piece:
    """One drawn strand piece: along an edge or a chord through a vertex.

    ``points`` are absolute coordinates for the copy of ``anchor`` (a
    vertex) in the base domain; ``ends`` are the wiring ends at the first
    and last point.
    """

    id: int
    kind: str
    site: str
    anchor: int
    ends: tuple
    points: tuple[Point, ...]
    marks: tuple[int, ...] = ()     # indices of twist crossing points


@dataclass(frozen=True)
class Pass:
    piece: int
    index: int          # position of the crossing point in the piece's points
    strand: int = -1


@dataclass(frozen=True)
class Crossing:
    id: int
    kind: str           # "twist" or "vertex"
    site: str           # edge label or vertex name
    position: Point
    passes: tuple[Pass, Pass]
    over: int           # index into passes of the over pass

    @property
    def over_pass(self) -> Pass:
        return self.passes[self.over]

    @property
    def under_pass(self) -> Pass:
        return self.passes[1 - self.over]


@dataclass(frozen=True)
class Strand:
    """A component of the diagram: pieces walked in order.

    Each step is ``(piece id, forward, copy)``; ``displacement`` is how far
    one trip around the strand moves in the lattice (zero for rings).
    """

    id: int
    steps: tuple[tuple[int, bool, Vec], ...]
    displacement: Vec
    loop: int

    @property
    def closed(self) -> bool:
        return self.displacement == (0, 0)


@dataclass(frozen=True)
class TwistRegion:
    edge: str
    center: Point
    crossings: tuple[int, ...]


@dataclass(frozen=True)
class MotifDiagram:
    cell: TCell
    method: PolygonalMethod
    layout: Layout
    pieces: tuple[Piece, ...]
    crossings: tuple[Crossing, ...]
    strands: tuple[Strand, ...]
    twist_regions: tuple[TwistRegion, ...]
    component_map: dict = field(default_factory=dict, compare=False, hash=False)
    repaired: tuple[int, ...] = ()
    tiles: Vec = (1, 1)
    obstruction: str | None = None

    @property
    def twist_crossings(self) -> int:
        return sum(1 for c in self.crossings if c.kind == "twist") * self.tiles[0] * self.tiles[1]

    @property
    def vertex_crossings(self) -> int:
        return sum(1 for c in self.crossings if c.kind == "vertex") * self.tiles[0] * self.tiles[1]

    def pass_sequences(self) -> list[list[tuple[int, int]]]:
        """Per strand, the (crossing, pass index) pairs met in walking order."""
        return [_strand_passes(self, s) for s in self.strands]

    def is_alternating(self) -> bool:
        for seq in self.pass_sequences():
            roles = [self.crossings[c].over == k for c, k in seq]
            if any(roles[i] == roles[(i + 1) % len(roles)] for i in range(len(roles))):
                return False
        return True

    def as_dict(self) -> dict:
        nx, ny = self.tiles
        strand_of = _strand_of_instance(self)
        crossings = []
        for j in range(ny):
            for i in range(nx):
                for c in self.crossings:
                    o, u = c.over_pass, c.under_pass
                    crossings.append({
                        "id": len(crossings), "kind": c.kind, "site": c.site,
                        "copy": [i, j],
                        "position": [_r(c.position[0] + i), _r(c.position[1] + j)],
                        "over": {"strand": strand_of[(o.piece, (i, j))], "piece": o.piece},
                        "under": {"strand": strand_of[(u.piece, (i, j))], "piece": u.piece},
                    })
        return {
            "schema": 1,
            "cell": self.cell.name,
            "method": str(self.method),
            "tiles": [nx, ny],
            "pieces": [{"id": p.id, "kind": p.kind, "site": p.site,
                        "points": [[_r(x), _r(y)] for x, y in p.points]} for p in self.pieces],
            "strands": [{"id": s.id, "loop": s.loop, "closed": s.closed,
                         "displacement": list(s.displacement),
                         "steps": [[p, fw, list(c)] for p, fw, c in s.steps]}
                        for s in self.strands],
            "crossings": crossings,
            "component_map": {str(k): v for k, v in sorted(self.component_map.items())},
            "repaired": list(self.repaired),
        }


def _r(v: float) -> float:
    out = round(v, 3)
    return 0.0 if out == 0 else out


# construction ---------------------------------------------------------------

def required_crossings(cell: TCell, method: PolygonalMethod) -> tuple[int, int]:
    """(twist, vertex) crossing counts a correct diagram must have.

    Single-line crossed curves cross once per vertex; double-line crossed
    curves cross deg(v) times at each vertex; branched curves never cross
    at vertices.
    """
    if method.single_line:
        return 0, cell.n_vertices
    twist = method.twists * cell.n_edges
    if method.vertex_rule is VertexRule.BRANCHED:
        return twist, 0
    return twist, 2 * cell.n_edges


def build_diagram(cell: TCell, method: PolygonalMethod, period: Vec = (1, 1),
                  strict: bool = True) -> MotifDiagram:
    """Draw ``method`` on ``cell`` (or on its ``period`` supercell).

    Raises :class:`AlternationError` when some component cannot alternate;
    with ``strict=False`` the conventional crossing states are kept instead
    and the problem is recorded in ``obstruction``.
    """
    if tuple(period) != (1, 1):
        cell = supercell(cell, *period)
    wiring = Wiring(cell, method)
    lay = layout(cell)
    geo = _Geometry(cell, lay)
    pieces, ends_piece = _pieces(cell, method, wiring, geo)
    crossings, pieces, regions = _crossings(cell, method, wiring, geo, pieces)
    strands = _strands(cell, wiring, lay, pieces, ends_piece, (1, 1))
    loops = trace_loops(cell, method)
    keys = {}
    for i, loop in enumerate(loops):
        darts = list(loop.edges)
        keys[chain_key(cell, darts)] = i
        keys[chain_key(cell, [cell.rev[d] for d in reversed(darts)])] = i
    strands = tuple(replace(s, loop=keys.get(chain_key(cell, _strand_darts(pieces, s)), -1))
                    for s in strands)
    diagram = MotifDiagram(cell, method, lay, tuple(pieces), tuple(crossings), strands,
                           tuple(regions), {s.id: s.loop for s in strands})
    diagram = _with_strand_passes(diagram)
    return _alternate(diagram, strict)


class _Geometry:
    def __init__(self, cell: TCell, lay: Layout):
        self.cell = cell
        self.lay = lay
        lengths = [math.hypot(*o) for o in lay.offsets]
        self.radius = min(0.12, 0.3 * min(lengths))
        gaps = []
        for v, rot in enumerate(cell.rotation):
            angles = sorted(_angle(lay.direction(d)) for d in rot)
            gaps += [(angles[(i + 1) % len(angles)] - angles[i]) % (2 * math.pi)
                     for i in range(len(angles))]
        self.offset = min(0.35 * self.radius, 0.45 * self.radius * math.sin(min(gaps) / 2))

    def unit(self, dart: int) -> Point:
        x, y = self.lay.direction(dart)
        n = math.hypot(x, y)
        return (x / n, y / n)

    def end_point(self, end, base: Point | None = None) -> Point:
        """Position of a strand end next to its vertex (in the base copy)."""
        d, side = end
        v = self.cell.tail[d]
        px, py = base if base is not None else self.lay.positions[v]
        ux, uy = self.unit(d)
        sigma = {L: -1.0, R: 1.0, S: 0.0}[side]
        # the normal (-uy, ux) points to the counterclockwise side of the dart
        return (px + self.radius * ux - sigma * self.offset * uy,
                py + self.radius * uy + sigma * self.offset * ux)


def _pieces(cell: TCell, method: PolygonalMethod, wiring: Wiring, geo: _Geometry):
    pieces: list[Piece] = []
    ends_piece: dict = {}
    lay = geo.lay
    m = 0 if method.single_line else method.twists
    for d in range(0, cell.n_darts, 2):
        u = cell.tail[d]
        pu = lay.positions[u]
        off = lay.direction(d)
        head_base = (pu[0] + off[0], pu[1] + off[1])
        sides = (S,) if method.single_line else (L, R)
        for side in sides:
            a = (d, side)
            b = wiring.along[a]
            p0 = geo.end_point(a)
            p1 = geo.end_point(b, head_base)
            pts, marks = _twist_curve(p0, p1, geo.unit(d), geo.offset, side, m)
            pid = len(pieces)
            pieces.append(Piece(pid, "edge", cell.labels[d // 2], u, (a, b), pts, marks))
            ends_piece[a] = ends_piece[b] = pid
    for v, chords in wiring.chords.items():
        for a, b in chords:
            pid = len(pieces)
            pieces.append(Piece(pid, "chord", cell.vertices[v], v, (a, b),
                                (geo.end_point(a), geo.end_point(b))))
            ends_piece[("chord",) + a] = ends_piece[("chord",) + b] = pid
    return pieces, ends_piece


def _twist_curve(p0: Point, p1: Point, unit: Point, delta: float, side: str, m: int):
    """Strand from ``p0`` to ``p1`` crossing the edge centre line ``m`` times.

    The twists sit in a region around the middle of the edge; elsewhere the
    strand runs parallel to the edge.  Returns the points and the indices
    of the crossing points.
    """
    if m == 0 or side == S:
        return (p0, p1), ()
    sigma = -1.0 if side == L else 1.0
    nx, ny = -unit[1], unit[0]
    c0 = (p0[0] - sigma * delta * nx, p0[1] - sigma * delta * ny)
    c1 = (p1[0] - sigma * (-1) ** m * delta * nx, p1[1] - sigma * (-1) ** m * delta * ny)
    length = math.hypot(c1[0] - c0[0], c1[1] - c0[1])
    span = min(0.9, m * 5 * delta / length)
    t0, t1 = 0.5 - span / 2, 0.5 + span / 2
    samples = 8 * m
    pts, marks = [], []
    for i, t in enumerate([0.0] + [t0 + (t1 - t0) * k / samples for k in range(samples + 1)] + [1.0]):
        s = min(1.0, max(0.0, (t - t0) / (t1 - t0)))
        w = sigma * delta * math.cos(math.pi * m * s)
        k = i - 1
        if 0 <= k <= samples and k % 8 == 4:
            w = 0.0
            marks.append(i)
        pts.append((c0[0] + t * (c1[0] - c0[0]) + w * nx, c0[1] + t * (c1[1] - c0[1]) + w * ny))
    return tuple(pts), tuple(marks)


def _crossings(cell, method, wiring: Wiring, geo: _Geometry, pieces: list[Piece]):
    crossings: list[Crossing] = []
    regions: list[TwistRegion] = []
    m = 0 if method.single_line else method.twists
    by_end = {p.ends[0]: p for p in pieces if p.kind == "edge"}
    for d in range(0, cell.n_darts, 2):
        if not m:
            break
        left, right = by_end[(d, L)], by_end[(d, R)]
        ids = []
        for k, (il, ir) in enumerate(zip(left.marks, right.marks)):
            pos = left.points[il]
            over = 0 if k % 2 == 0 else 1
            ids.append(len(crossings))
            crossings.append(Crossing(len(crossings), "twist", cell.labels[d // 2], pos,
                                      (Pass(left.id, il), Pass(right.id, ir)), over))
        mid = ((left.points[0][0] + right.points[-1][0]) / 2,
               (left.points[0][1] + right.points[-1][1]) / 2)
        regions.append(TwistRegion(cell.labels[d // 2], mid, tuple(ids)))
    # vertex crossings: intersect chords pairwise
    new_points: dict[int, list[Point]] = {}
    found = []
    for v, chords in wiring.chords.items():
        chord_pieces = [p for p in pieces if p.kind == "chord" and p.anchor == v]
        n = len(chord_pieces)
        for i, j in combinations(range(n), 2):
            a, b = chord_pieces[i], chord_pieces[j]
            x = _segments_cross(a.points[0], a.points[-1], b.points[0], b.points[-1])
            if x is None:
                continue
            # the chord leaving the counterclockwise-earlier dart is over
            over = 0 if (j - i) % n == 1 or ((i - j) % n != 1 and i < j) else 1
            if method.single_line:
                over = 0
            found.append((v, a.id, b.id, x, over))
            new_points.setdefault(a.id, []).append(x)
            new_points.setdefault(b.id, []).append(x)
    for pid, pts in new_points.items():
        p = pieces[pid]
        a, b = p.points[0], p.points[-1]
        inner = sorted(pts, key=lambda q: math.hypot(q[0] - a[0], q[1] - a[1]))
        pieces[pid] = replace(p, points=(a, *inner, b))
    for v, pa, pb, x, over in found:
        ia, ib = pieces[pa].points.index(x), pieces[pb].points.index(x)
        crossings.append(Crossing(len(crossings), "vertex", cell.vertices[v], x,
                                  (Pass(pa, ia), Pass(pb, ib)), over))
    return crossings, pieces, regions


def _strands(cell, wiring: Wiring, lay: Layout, pieces, ends_piece, tiles: Vec):
    """Walk the pieces into components on the ``tiles`` torus."""
    nx, ny = tiles
    seen = set()
    strands = []
    for start in wiring.ends:
        for cx in range(nx):
            for cy in range(ny):
                if (start, (cx, cy)) in seen:
                    continue
                x, copy = start, (cx, cy)
                steps = []
                shift = (0, 0)
                state = (x, copy)
                while True:
                    d = x[0]
                    y = wiring.along[x]
                    seen.add((x, copy))
                    edge_piece = pieces[ends_piece[x]]
                    forward = edge_piece.ends[0] == x
                    hop = lay.shift(d)
                    after = (copy[0] + hop[0], copy[1] + hop[1])
                    anchor_copy = copy if sign_of(d) > 0 else after
                    steps.append((edge_piece.id, forward, (anchor_copy[0] % nx, anchor_copy[1] % ny)))
                    shift = (shift[0] + hop[0], shift[1] + hop[1])
                    seen.add((y, (after[0] % nx, after[1] % ny)))
                    z = wiring.at[y]
                    chord = pieces[ends_piece[("chord",) + y]]
                    here = (after[0] % nx, after[1] % ny)
                    steps.append((chord.id, chord.ends[0] == y, here))
                    x, copy = z, here
                    if (x, copy) == state:
                        break
                strands.append(Strand(len(strands), tuple(steps), shift, -1))
    return strands


def _strand_darts(pieces, strand: Strand) -> list[int]:
    out = []
    for pid, forward, _ in strand.steps:
        p = pieces[pid]
        if p.kind == "edge":
            out.append((p.ends[0] if forward else p.ends[1])[0])
    return out


def _strand_of_instance(diagram: MotifDiagram) -> dict:
    out = {}
    for s in diagram.strands:
        for pid, _, copy in s.steps:
            out[(pid, copy)] = s.id
    return out


def _passes_by_piece(diagram: MotifDiagram) -> dict[int, list[tuple[int, int]]]:
    out: dict[int, list[tuple[int, int]]] = {}
    for c in diagram.crossings:
        for k, p in enumerate(c.passes):
            out.setdefault(p.piece, []).append((c.id, k))
    return out


def _strand_passes(diagram: MotifDiagram, strand: Strand) -> list[tuple[int, int]]:
    by_piece = _passes_by_piece(diagram)
    seq = []
    for pid, forward, _ in strand.steps:
        here = sorted(by_piece.get(pid, []),
                      key=lambda ck: diagram.crossings[ck[0]].passes[ck[1]].index,
                      reverse=not forward)
        seq.extend(here)
    return seq


def _with_strand_passes(diagram: MotifDiagram) -> MotifDiagram:
    strand_of = _strand_of_instance(diagram)
    crossings = tuple(replace(c, passes=tuple(replace(p, strand=strand_of[(p.piece, (0, 0))])
                                              for p in c.passes))
                      for c in diagram.crossings)
    return replace(diagram, crossings=crossings)


def _alternate(diagram: MotifDiagram, strict: bool) -> MotifDiagram:
    """Choose over/under states so every component alternates.

    Consecutive passes along a strand must have opposite roles; with
    x_c = index of the over pass this is x_a ^ x_b = 1 ^ k_a ^ k_b, a
    parity system solved by union-find.  Each connected group keeps the
    solution closest to the conventional states.
    """
    n = len(diagram.crossings)
    parent = list(range(n))
    parity = [0] * n          # parity relative to parent

    def find(x):
        if parent[x] == x:
            return x, 0
        root, p = find(parent[x])
        parent[x] = root
        parity[x] ^= p
        return root, parity[x]

    obstruction = None
    for sid, seq in enumerate(diagram.pass_sequences()):
        for i in range(len(seq)):
            (ca, ka), (cb, kb) = seq[i], seq[(i + 1) % len(seq)]
            want = 1 ^ ka ^ kb
            ra, pa = find(ca)
            rb, pb = find(cb)
            if ra == rb:
                if pa ^ pb != want:
                    obstruction = obstruction or (sid, f"over/under cannot alternate "
                                                       f"({len(seq)} crossing passes per period)")
                continue
            parent[ra] = rb
            parity[ra] = pa ^ pb ^ want
    if obstruction is not None:
        if strict:
            raise AlternationError(*obstruction)
        return replace(diagram, obstruction=f"component {obstruction[0]}: {obstruction[1]}")
    groups: dict[int, list[tuple[int, int]]] = {}
    for c in range(n):
        root, p = find(c)
        groups.setdefault(root, []).append((c, p))
    states = [c.over for c in diagram.crossings]
    for root, members in groups.items():
        # x_c = p_c ^ x_root; pick x_root agreeing with most conventions
        agree0 = sum(1 for c, p in members if p == states[c])
        x_root = 0 if agree0 * 2 >= len(members) else 1
        if agree0 * 2 == len(members):
            first = min(c for c, _ in members)
            x_root = dict(members)[first] ^ states[first]
        for c, p in members:
            states[c] = p ^ x_root
    repaired = tuple(c.id for c in diagram.crossings if c.over != states[c.id])
    crossings = tuple(replace(c, over=states[c.id]) for c in diagram.crossings)
    return replace(diagram, crossings=crossings, repaired=repaired)


def unfold(diagram: MotifDiagram, nx: int, ny: int) -> MotifDiagram:
    """Stitch ``nx x ny`` translated copies into one diagram.

    Strands are re-traced on the larger torus, so rings appear once per
    copy and threads run across the whole patch.  ``unfold(d, 1, 1)`` is
    ``d`` itself.
    """
    if nx < 1 or ny < 1:
        raise ValueError("unfold needs positive dimensions")
    if (nx, ny) == (1, 1):
        return diagram
    tiles = (diagram.tiles[0] * nx, diagram.tiles[1] * ny)
    wiring = Wiring(diagram.cell, diagram.method)
    ends_piece = {}
    for p in diagram.pieces:
        if p.kind == "edge":
            ends_piece[p.ends[0]] = ends_piece[p.ends[1]] = p.id
        else:
            ends_piece[("chord",) + p.ends[0]] = ends_piece[("chord",) + p.ends[1]] = p.id
    strands = _strands(diagram.cell, wiring, diagram.layout, list(diagram.pieces),
                       ends_piece, tiles)
    base = _strand_of_instance(diagram)
    strands = tuple(replace(s, loop=diagram.component_map.get(base[(s.steps[0][0], (0, 0))], -1))
                    for s in strands)
    return replace(diagram, strands=strands, tiles=tiles,
                   component_map={s.id: s.loop for s in strands})


# SVG ------------------------------------------------------------------------

def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def _window(points, idx: int, eps: float) -> list[Point]:
    """The part of a polyline within arc length ``eps`` of ``points[idx]``."""
    def walk(step):
        out, left, i = [], eps, idx
        while 0 <= i + step < len(points) and left > 0:
            a, b = points[i], points[i + step]
            seg = math.hypot(b[0] - a[0], b[1] - a[1])
            if seg >= left:
                f = left / seg
                out.append((a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])))
                break
            out.append(b)
            left -= seg
            i += step
        return out
    return list(reversed(walk(-1))) + [points[idx]] + walk(1)


def emit_svg(diagram: MotifDiagram, scale: float = 200.0, margin: float = 10.0,
             show_cell: bool = True) -> str:
    """Deterministic SVG of the diagram over its whole patch."""
    nx, ny = diagram.tiles
    width = 2 * margin + scale * nx
    height = 2 * margin + scale * ny
    stroke = max(1.0, scale * diagram_stroke(diagram))

    def pt(x: float, y: float) -> str:
        return f"{_fmt(margin + scale * x)},{_fmt(margin + scale * (ny - y))}"

    def path(points, dx: float, dy: float) -> str:
        return "M" + " L".join(pt(x + dx, y + dy) for x, y in points)

    def visible(points, dx, dy) -> bool:
        xs = [x + dx for x, _ in points]
        ys = [y + dy for _, y in points]
        return max(xs) >= 0 and min(xs) <= nx and max(ys) >= 0 and min(ys) <= ny

    strand_of = _strand_of_instance(diagram)
    colour = {s.id: PALETTE[s.id % len(PALETTE)] for s in diagram.strands}
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<title>{diagram.cell.name} {diagram.method} ({nx}x{ny})</title>',
        '<defs><clipPath id="domain">'
        f'<rect x="{_fmt(margin)}" y="{_fmt(margin)}" width="{_fmt(scale * nx)}" '
        f'height="{_fmt(scale * ny)}"/></clipPath></defs>',
        f'<rect width="{_fmt(width)}" height="{_fmt(height)}" fill="#ffffff"/>',
        '<g clip-path="url(#domain)">',
    ]
    copies = [(i, j) for j in range(ny) for i in range(nx)]
    wraps = [(a, b) for b in (-ny, 0, ny) for a in (-nx, 0, nx)]
    if show_cell:
        out.append('<g class="cell" stroke="#d0d0d0" stroke-width="1" fill="none">')
        lay = diagram.layout
        for i, j in copies:
            for e in range(diagram.cell.n_edges):
                p = lay.positions[diagram.cell.tail[2 * e]]
                o = lay.offsets[e]
                seg = (p, (p[0] + o[0], p[1] + o[1]))
                for a, b in wraps:
                    if visible(seg, i + a, j + b):
                        out.append(f'<path d="{path(seg, i + a, j + b)}"/>')
        out.append('</g>')
    out.append(f'<g class="strands" fill="none" stroke-width="{_fmt(stroke)}" '
               'stroke-linecap="round" stroke-linejoin="round">')
    for i, j in copies:
        for p in diagram.pieces:
            sid = strand_of[(p.id, (i, j))]
            for a, b in wraps:
                if visible(p.points, i + a, j + b):
                    out.append(f'<path data-component="{sid}" stroke="{colour[sid]}" '
                               f'd="{path(p.points, i + a, j + b)}"/>')
    out.append('</g>')
    out.append(f'<g class="crossings" fill="none" stroke-linecap="butt">')
    eps = 2.5 * diagram_stroke(diagram)
    for i, j in copies:
        for c in diagram.crossings:
            over = c.over_pass
            pts = _window(diagram.pieces[over.piece].points, over.index, eps)
            # place the crossing inside the patch
            x, y = c.position[0] + i, c.position[1] + j
            dx, dy = i - nx * math.floor(x / nx), j - ny * math.floor(y / ny)
            sid = strand_of[(over.piece, (i, j))]
            out.append(f'<path class="halo" data-crossing="{c.id}" stroke="#ffffff" '
                       f'stroke-width="{_fmt(3 * stroke)}" d="{path(pts, dx, dy)}"/>')
            out.append(f'<path class="over" data-crossing="{c.id}" stroke="{colour[sid]}" '
                       f'stroke-width="{_fmt(stroke)}" d="{path(pts, dx, dy)}"/>')
    out.append('</g>')
    out.append('</g>')
    out.append(f'<rect x="{_fmt(margin)}" y="{_fmt(margin)}" width="{_fmt(scale * nx)}" '
               f'height="{_fmt(scale * ny)}" fill="none" stroke="#000000" stroke-width="1"/>')
    out.append('</svg>')
    return "\n".join(out) + "\n"


def diagram_stroke(diagram: MotifDiagram) -> float:
    """Strand width in cell units: a fraction of the double-line spacing."""
    edge = [p for p in diagram.pieces if p.kind == "edge"]
    spacing = min(math.hypot(p.points[-1][0] - p.points[0][0], p.points[-1][1] - p.points[0][1])
                  for p in edge)
    return min(0.012, 0.05 * spacing)
