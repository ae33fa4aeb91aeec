"""Polygonal link methods and their characteristic loops.

A method pairs a vertex rule (crossed or branched curves) with an edge
rule (single line, or a double line twisted ``m`` times).  A strand leaving
an edge at a vertex continues on the dart at a fixed rotation offset from
the edge it arrived on: two positions for crossed curves, one for branched
curves.  With an odd twist count the strand swaps sides on every edge, so
the offset alternates in sign; :class:`StrandState` carries that phase.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .tcell import TCell, Vec, add, edge_of, edge_offset, sign_of


class VertexRule(Enum):
    CROSSED = "cr"
    BRANCHED = "br"


class MethodError(ValueError):
    """Unparseable method string or a method that does not apply to a cell."""


@dataclass(frozen=True)
class PolygonalMethod:
    """``twists is None`` means single-line covering."""

    vertex_rule: VertexRule
    twists: int | None = None

    def __post_init__(self):
        if self.twists is None and self.vertex_rule is VertexRule.BRANCHED:
            raise MethodError("branched curves require a double line (br:<m>)")
        if self.twists is not None and self.twists < 0:
            raise MethodError("twist count must be non-negative")

    @property
    def single_line(self) -> bool:
        return self.twists is None

    @property
    def odd(self) -> bool:
        return self.twists is not None and self.twists % 2 == 1

    @property
    def step(self) -> int:
        return 2 if self.vertex_rule is VertexRule.CROSSED else 1

    def __str__(self) -> str:
        return f"{self.vertex_rule.value}:{'s' if self.single_line else self.twists}"

    @classmethod
    def parse(cls, text: str) -> "PolygonalMethod":
        m = re.fullmatch(r"\s*(cr|br):(s|\d+)\s*", text.lower())
        if not m:
            raise MethodError(f"bad method {text!r}; expected cr:s, cr:<m> or br:<m>")
        rule = VertexRule(m.group(1))
        twists = None if m.group(2) == "s" else int(m.group(2))
        return cls(rule, twists)


def check_applicable(cell: TCell, method: PolygonalMethod) -> None:
    if method.single_line:
        bad = [cell.vertices[v] for v in range(cell.n_vertices) if cell.degree(v) != 4]
        if bad:
            raise MethodError(
                f"{method} needs every vertex of degree 4; "
                f"degree {cell.degree(cell.vertices.index(bad[0]))} at {bad[0]}")


@dataclass(frozen=True, order=True)
class StrandState:
    """Current directed edge plus recurrence phase.

    ``parity`` is the parity of the edge's index in the recurrence: from an
    even-indexed edge the odd-twist step turns clockwise, from an odd one
    counterclockwise.  It is always 0 unless the twist count is odd.
    """

    dart: int
    parity: int = 0


def successor(cell: TCell, method: PolygonalMethod, state: StrandState) -> StrandState:
    v = cell.head(state.dart)
    if method.single_line and cell.degree(v) != 4:
        raise MethodError(f"{method} needs degree 4 at {cell.vertices[v]}")
    k = method.step
    if method.odd:
        k = k if state.parity else -k
        return StrandState(edge_offset(cell, state.dart, k), state.parity ^ 1)
    return StrandState(edge_offset(cell, state.dart, k), 0)


def predecessor(cell: TCell, method: PolygonalMethod, state: StrandState) -> StrandState:
    """Inverse of :func:`successor`."""
    k = method.step
    parity = state.parity ^ 1 if method.odd else 0
    if method.odd:
        k = k if parity else -k
    # successor(d) = rot[pos(rev d) + k]  =>  rev d = rot[pos(next) - k]
    v, i = cell.position(state.dart)
    rot = cell.rotation[v]
    return StrandState(cell.rev[rot[(i - k) % len(rot)]], parity)


def state_space(cell: TCell, method: PolygonalMethod) -> list[StrandState]:
    parities = (0, 1) if method.odd else (0,)
    return [StrandState(d, p) for d in range(cell.n_darts) for p in parities]


@dataclass(frozen=True)
class CharacteristicLoop:
    """Closed chain of directed edges traced by one strand.

    ``states`` is the canonical rotation of a representative state cycle;
    ``multiplicity`` counts the traced state cycles (reversals included)
    that cover the same chain.
    """

    states: tuple[StrandState, ...]
    homology: Vec
    method: PolygonalMethod
    multiplicity: int = 1

    @property
    def edges(self) -> tuple[int, ...]:
        return tuple(s.dart for s in self.states)

    def __len__(self) -> int:
        return len(self.states)


def _sum(cell: TCell, darts) -> Vec:
    h = (0, 0)
    for d in darts:
        h = add(h, cell.vector(d))
    return h


def loop_homology(cell: TCell, loop) -> Vec:
    """Signed sum of translation vectors along a closed chain of darts.

    Accepts a :class:`CharacteristicLoop` or any sequence of darts.
    """
    darts = loop.edges if isinstance(loop, CharacteristicLoop) else tuple(loop)
    if not darts:
        raise ValueError("empty loop")
    for a, b in zip(darts, darts[1:] + darts[:1]):
        if cell.head(a) != cell.tail[b]:
            raise ValueError(f"{cell.dart_name(a)} and {cell.dart_name(b)} are not consecutive")
    return _sum(cell, darts)


def _state_key(cell: TCell, s: StrandState):
    return (_label_key(cell.labels[edge_of(s.dart)]), -sign_of(s.dart), s.parity)


def _label_key(label: str):
    return tuple(int(p) if p.isdigit() else p for p in re.split(r"(\d+)", label))


def canonical_rotation(cell: TCell, states) -> tuple[StrandState, ...]:
    """Lexicographically least cyclic rotation over (label, sign, parity)."""
    states = tuple(states)
    n = len(states)
    keys = [_state_key(cell, s) for s in states]
    best = min(range(n), key=lambda i: keys[i:] + keys[:i])
    return states[best:] + states[:best]


def reverse_states(cell: TCell, method: PolygonalMethod, states) -> tuple[StrandState, ...]:
    """The state cycle of the same strand walked backwards."""
    # the backward step out of rev(d_i+1) must undo the forward offset taken
    # from d_i, which is the offset belonging to d_i+1's own phase
    return tuple(StrandState(cell.rev[s.dart], s.parity) for s in reversed(states))


def state_cycles(cell: TCell, method: PolygonalMethod) -> list[tuple[StrandState, ...]]:
    """Cycle decomposition of the successor permutation, in discovery order."""
    check_applicable(cell, method)
    seen: set[StrandState] = set()
    cycles = []
    for start in state_space(cell, method):
        if start in seen:
            continue
        cyc = []
        s = start
        while s not in seen:
            seen.add(s)
            cyc.append(s)
            s = successor(cell, method, s)
        if s != start:
            raise AssertionError("successor is not a permutation")
        cycles.append(tuple(cyc))
    return cycles


def trace_loops(cell: TCell, method: PolygonalMethod, dedupe: bool = True) -> list[CharacteristicLoop]:
    """Characteristic loops of ``method`` on ``cell``, in canonical order.

    With ``dedupe`` state cycles covering the same chain of edges, up to
    cyclic rotation and reversal, collapse into one loop class.  Without
    it every state cycle is returned (they partition the state space).
    """
    cycles = state_cycles(cell, method)
    if not dedupe:
        loops = [CharacteristicLoop(c, _sum(cell, (s.dart for s in c)), method)
                 for c in (canonical_rotation(cell, c) for c in cycles)]
        return sorted(loops, key=lambda l: [_state_key(cell, s) for s in l.states])
    groups: dict[tuple, list[tuple[StrandState, ...]]] = {}
    for cyc in cycles:
        darts = [s.dart for s in cyc]
        back = [cell.rev[d] for d in reversed(darts)]
        key = min(chain_key(cell, darts), chain_key(cell, back))
        groups.setdefault(key, []).append(canonical_rotation(cell, cyc))
    loops = []
    for members in groups.values():
        rep = min(members, key=lambda c: [_state_key(cell, s) for s in c])
        loops.append(CharacteristicLoop(rep, _sum(cell, (s.dart for s in rep)), method,
                                        multiplicity=len(members)))
    return sorted(loops, key=lambda l: [_state_key(cell, s) for s in l.states])


def chain_key(cell: TCell, darts) -> tuple:
    """Key of a closed dart chain up to cyclic rotation (not reversal)."""
    keys = [(_label_key(cell.labels[edge_of(d)]), -sign_of(d)) for d in darts]
    return min(tuple(keys[i:] + keys[:i]) for i in range(len(keys)))


def physical_components(cell: TCell, method: PolygonalMethod) -> int:
    """Number of strand components the method draws on the torus.

    For odd twists and single lines each strand is traced once per
    direction; for even twists the side of the strand fixes its direction.
    """
    n = len(state_cycles(cell, method))
    return n // 2 if (method.odd or method.single_line) else n


def loop_word(cell: TCell, loop) -> str:
    darts = loop.edges if isinstance(loop, CharacteristicLoop) else loop
    return ".".join(cell.dart_name(d) for d in darts)
