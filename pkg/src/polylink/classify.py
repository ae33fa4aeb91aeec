"""Motif prediction from characteristic loops.

The verdict only needs, per loop, whether it is essential (nonzero
homology) and whether its word is admissible (anything but knotted):

======================  ============================================
all loops null          Polycatenane
essential and null      Mixed
all essential           Weave if two of them are non-parallel,
                        otherwise ParallelEssential
any knotted word        Invalid
======================  ============================================
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .polymethod import (CharacteristicLoop, PolygonalMethod, VertexRule,
                         loop_word, state_cycles, trace_loops)
from .tcell import TCell, Vec
from .verdict import Verdict
from .words import WordClass, WordVerdict, classify_word

SCHEMA_VERSION = 1


@dataclass
class LoopEvidence:
    word: str
    homology: Vec
    word_class: WordClass
    essential: bool
    multiplicity: int = 1

    def as_dict(self) -> dict:
        return {"word": self.word, "homology": list(self.homology),
                "word_class": str(self.word_class.verdict), "essential": self.essential}


@dataclass
class MotifClassification:
    verdict: Verdict
    loops: list[LoopEvidence]
    parallel_classes: list[list[int]]
    invalid_reason: str | None = None
    shortcut_used: bool = False
    raw_cycles: int = 0
    cell_name: str = ""
    method: str = ""
    extra: dict = field(default_factory=dict)

    def report(self) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "cell": self.cell_name,
            "method": self.method,
            "verdict": str(self.verdict),
            "loops": [ev.as_dict() for ev in self.loops],
            "parallel_classes": [[self.loops[i].word for i in cls]
                                 for cls in self.parallel_classes],
            "shortcut_used": self.shortcut_used,
        }
        if self.invalid_reason:
            out["invalid_reason"] = self.invalid_reason
        out.update(self.extra)
        return out

    def to_json(self) -> str:
        return json.dumps(self.report(), indent=2, sort_keys=False) + "\n"


def parallel(u: Vec, v: Vec) -> bool:
    return u[0] * v[1] - u[1] * v[0] == 0


def parallel_classes(homologies) -> list[list[int]]:
    """Group indices of essential vectors by direction (up to sign).

    Accepts homology vectors or :class:`CharacteristicLoop` objects;
    null vectors are skipped.
    """
    vecs = [h.homology if isinstance(h, CharacteristicLoop) else tuple(h) for h in homologies]
    classes: list[list[int]] = []
    for i, h in enumerate(vecs):
        if h == (0, 0):
            continue
        for cls in classes:
            if parallel(vecs[cls[0]], h):
                cls.append(i)
                break
        else:
            classes.append([i])
    return classes


def structural_shortcuts(cell: TCell, method: PolygonalMethod) -> Verdict | None:
    """Verdicts that follow from the method alone.

    Branched curves with an even twist count turn every strand around a
    single tile; crossed curves do the same when every vertex has degree 3.
    """
    if method.single_line or method.twists % 2:
        return None
    if method.vertex_rule is VertexRule.BRANCHED:
        return Verdict.POLYCATENANE
    if all(d == 3 for d in cell.degrees()):
        return Verdict.POLYCATENANE
    return None


def classify_motif(cell: TCell, method: PolygonalMethod) -> MotifClassification:
    loops = trace_loops(cell, method)
    evidence = []
    for loop in loops:
        wc = classify_word(cell, loop)
        evidence.append(LoopEvidence(loop_word(cell, loop), loop.homology, wc,
                                     loop.homology != (0, 0), loop.multiplicity))
    classes = parallel_classes([ev.homology for ev in evidence])
    verdict, reason = _fold(evidence, classes)
    shortcut = structural_shortcuts(cell, method)
    return MotifClassification(
        verdict=verdict, loops=evidence, parallel_classes=classes,
        invalid_reason=reason, shortcut_used=shortcut is not None,
        raw_cycles=len(state_cycles(cell, method)),
        cell_name=cell.name, method=str(method))


def _fold(evidence: list[LoopEvidence], classes) -> tuple[Verdict, str | None]:
    for ev in evidence:
        if ev.word_class.verdict is WordVerdict.KNOTTED:
            w = ev.word_class.witnesses
            return Verdict.INVALID, (f"loop {ev.word} is knotted at {w.get('vertex')}: "
                                     f"divided curve {' | '.join(w.get('factorization', []))} "
                                     f"is null-homologous")
    essential = [ev for ev in evidence if ev.essential]
    if not essential:
        return Verdict.POLYCATENANE, None
    if len(essential) < len(evidence):
        return Verdict.MIXED, None
    if len(classes) >= 2:
        return Verdict.WEAVE, None
    return Verdict.PARALLEL_ESSENTIAL, None
