"""Brute-force motif verifier on a patch of the universal cover.

The oracle rebuilds the strands from the local wiring of each vertex and
edge (which strand end meets which), walks every strand through an
``n x n`` patch of translated cells, and reads off the motif type from what
it sees: rings that close up, threads that run off the patch, and any
crossing site that one lifted strand passes twice.  It deliberately does
not use loop tracing, edge words or homology sums from the classifier.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .polymethod import PolygonalMethod
from .tcell import TCell, Vec, add, sign_of
from .verdict import Verdict
from .wiring import L, R, Wiring, interleave

DEFAULT_PATCH = 6
MAX_PATCH = 24

class PatchTooSmall(RuntimeError):
    def __init__(self, n: int):
        super().__init__(f"patch of {n}x{n} cells too small to resolve every component")
        self.n = n


@dataclass
class Component:
    closed_within_patch: bool
    displacement: Vec            # per period; (0, 0) for closed rings
    self_intersects: bool
    length: int                  # strand segments per period
    sites: list = field(default_factory=list, repr=False)

    def as_dict(self) -> dict:
        return {"closed_within_patch": self.closed_within_patch,
                "displacement": list(self.displacement),
                "self_intersects": self.self_intersects,
                "length": self.length}


@dataclass
class LiftReport:
    components: list[Component]
    patch: int
    verdict: Verdict

    def as_dict(self) -> dict:
        return {"patch": self.patch, "verdict": str(self.verdict),
                "components": [c.as_dict() for c in self.components]}


class _Sites:
    """Crossing sites of a wiring: twist crossings and crossing vertex chords."""

    def __init__(self, w: Wiring):
        cell, method = w.cell, w.method
        self.of_segment: dict = {}
        self.of_chord: dict = {}
        self.sites = []
        if not method.single_line and method.twists:
            for d in range(0, cell.n_darts, 2):
                for j in range(method.twists):
                    sid = len(self.sites)
                    self.sites.append(("twist", d // 2, j))
                    for side in (L, R):
                        key = frozenset(((d, side), w.along[(d, side)]))
                        self.of_segment.setdefault(key, []).append(sid)
        for v, chords in w.chords.items():
            circle = w.circle(v)
            for i in range(len(chords)):
                for j in range(i + 1, len(chords)):
                    if interleave(chords[i], chords[j], circle):
                        sid = len(self.sites)
                        self.sites.append(("vertex", v, i, j))
                        for c in (chords[i], chords[j]):
                            self.of_chord.setdefault(frozenset(c), []).append(sid)


def _walk(w: Wiring, sites: _Sites, start, offset: Vec, steps: int):
    """Follow a strand from ``start`` for ``steps`` edge segments.

    Yields (end, offset at the strand end, visited crossing sites) per segment;
    a site is identified by its id and the lattice copy it sits in.
    """
    cell = w.cell
    x = start
    for _ in range(steps):
        d = x[0]
        y = w.along[x]
        after = add(offset, cell.vector(d))
        copy = offset if sign_of(d) > 0 else after
        visits = [(sid, copy) for sid in sites.of_segment.get(frozenset((x, y)), ())]
        z = w.at[y]
        visits += [(sid, after) for sid in sites.of_chord.get(frozenset((y, z)), ())]
        yield x, offset, visits
        x, offset = z, after


def lift_trace(cell: TCell, method: PolygonalMethod, n: int = DEFAULT_PATCH,
               grow: bool = True) -> LiftReport:
    """Walk every strand through an ``n x n`` patch and report what it does.

    With ``grow`` the patch is doubled (up to 24) whenever it is too small.
    """
    while True:
        try:
            return _trace(cell, method, n)
        except PatchTooSmall:
            if not grow or n >= MAX_PATCH:
                raise
            n = min(2 * n, MAX_PATCH)


def _inside(o: Vec, n: int) -> bool:
    lo, hi = -(n // 2), n - 1 - n // 2
    return lo <= o[0] <= hi and lo <= o[1] <= hi


def _trace(cell: TCell, method: PolygonalMethod, n: int) -> LiftReport:
    w = Wiring(cell, method)
    sites = _Sites(w)
    components = []
    for comp in w.torus_components():
        period = len(comp)
        start = comp[0]
        # one full turn around the torus strand
        trail = list(_walk(w, sites, start, (0, 0), period))
        last_end, last_off, _ = trail[-1]
        shift = add(last_off, cell.vector(last_end[0]))
        if not all(_inside(o, n) for _, o, _ in trail):
            raise PatchTooSmall(n)
        if shift == (0, 0):
            visits = [v for *_, vs in trail for v in vs]
            components.append(Component(True, (0, 0), len(visits) != len(set(visits)),
                                        period, visits))
            continue
        # open thread: walk it both ways from the start until it leaves the patch
        forward = _visits_inside(w, sites, start, n, period)
        if forward is None:
            raise PatchTooSmall(n)
        # the strand before ``start`` is walked from the end joined to it
        backward = _visits_inside(w, sites, w.at[start], n, period) or []
        joint = [(sid, (0, 0)) for sid in sites.of_chord.get(frozenset((w.at[start], start)), ())]
        visits = forward + backward + joint
        components.append(Component(False, shift, len(visits) != len(set(visits)),
                                    period, visits))
    return LiftReport(components, n, _verdict(components))


def _visits_inside(w: Wiring, sites: _Sites, start, n: int, period: int):
    """Crossing visits along the strand from ``start`` while it stays in the patch.

    ``None`` when the strand leaves before completing one period.
    """
    out = []
    steps = 0
    for _, o, vs in _walk(w, sites, start, (0, 0), period * (n * n + 2)):
        if not _inside(o, n):
            break
        out.extend(vs)
        steps += 1
    if steps < period:
        return None
    return out


def _verdict(components: list[Component]) -> Verdict:
    if any(c.self_intersects for c in components):
        return Verdict.INVALID
    opened = [c.displacement for c in components if not c.closed_within_patch]
    closed = [c for c in components if c.closed_within_patch]
    if not opened:
        return Verdict.POLYCATENANE
    if closed:
        return Verdict.MIXED
    p, q = opened[0]
    if any(p * s - q * r != 0 for r, s in opened[1:]):
        return Verdict.WEAVE
    return Verdict.PARALLEL_ESSENTIAL
