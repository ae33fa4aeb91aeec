"""Motif prediction for polygonal link methods on doubly periodic tilings."""

from .classify import MotifClassification, classify_motif, parallel_classes, structural_shortcuts
from .diagram import MotifDiagram, build_diagram, emit_svg, layout, unfold
from .lift_oracle import LiftReport, PatchTooSmall, lift_trace
from .polymethod import (CharacteristicLoop, MethodError, PolygonalMethod, StrandState,
                         VertexRule, successor, trace_loops)
from .tcell import SUPPORTED_TILINGS, TCell, TCellError, builtin_tcell, emit_tcell, parse_tcell
from .verdict import Verdict
from .words import EdgeWord, WordClass, WordVerdict, classify_word, divided_curves, word_of

__all__ = [
    "CharacteristicLoop", "EdgeWord", "LiftReport", "MethodError", "MotifClassification",
    "MotifDiagram", "PatchTooSmall", "PolygonalMethod", "SUPPORTED_TILINGS", "StrandState",
    "TCell", "TCellError", "Verdict", "VertexRule", "WordClass", "WordVerdict",
    "build_diagram", "builtin_tcell", "classify_motif", "classify_word", "divided_curves",
    "emit_svg", "emit_tcell", "layout", "lift_trace", "parallel_classes", "parse_tcell",
    "structural_shortcuts", "successor", "trace_loops", "unfold", "word_of",
]
