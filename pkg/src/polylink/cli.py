"""Command-line front end: ``polylink list|classify|render|oracle|validate``.

Exit codes: 0 for a definite verdict (or a valid cell), 1 for usage and
input errors, 2 when the structure is Invalid.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from .classify import classify_motif
from .diagram import AlternationError, LayoutError, build_diagram, emit_svg, unfold
from .lift_oracle import DEFAULT_PATCH, PatchTooSmall, lift_trace
from .polymethod import MethodError, PolygonalMethod
from .tcell import (SUPPORTED_TILINGS, TCell, TCellError, builtin_tcell, parse_tcell,
                    summary_row, validate)
from .verdict import Verdict

log = logging.getLogger("polylink")

EXIT_OK, EXIT_ERROR, EXIT_INVALID = 0, 1, 2


@dataclass
class RunConfig:
    tiling: str | None = None
    cell_path: str | None = None
    method: str | None = None
    report: str | None = None
    svg: str | None = None
    json_dump: str | None = None
    supercell: tuple[int, int] = (1, 1)
    period: tuple[int, int] | None = (1, 1)     # None: search small periods
    scale: float = 200.0
    oracle: bool = False
    patch: int = DEFAULT_PATCH
    verbose: int = 0

    def load_cell(self) -> TCell:
        if (self.tiling is None) == (self.cell_path is None):
            raise UsageError("give exactly one of --tiling and --cell")
        if self.tiling is not None:
            return builtin_tcell(self.tiling)
        path = Path(self.cell_path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        return parse_tcell(text, name=path.stem)

    def load_method(self) -> PolygonalMethod:
        if not self.method:
            raise UsageError("--method is required")
        return PolygonalMethod.parse(self.method)


class UsageError(ValueError):
    pass


def _dims(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        out = (int(a), int(b))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected <nx>x<ny>, got {text!r}") from None
    if min(out) < 1:
        raise argparse.ArgumentTypeError("dimensions must be positive")
    return out


def _period(text: str):
    return None if text == "auto" else _dims(text)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


# commands -------------------------------------------------------------------

def cmd_list(config: RunConfig) -> int:
    rows = sorted(summary_row(builtin_tcell(name)) for name in SUPPORTED_TILINGS)
    sys.stdout.write("\n".join(rows) + "\n")
    return EXIT_OK


def cmd_classify(config: RunConfig) -> int:
    cell, method = config.load_cell(), config.load_method()
    result = classify_motif(cell, method)
    report = result.report()
    if config.oracle:
        lift = lift_trace(cell, method, config.patch)
        report["oracle"] = {"verdict": str(lift.verdict), "patch": lift.patch,
                            "agrees": lift.verdict == result.verdict}
        if lift.verdict != result.verdict:
            log.warning("oracle verdict %s differs from %s", lift.verdict, result.verdict)
    _write(config.report, json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    return EXIT_INVALID if result.verdict is Verdict.INVALID else EXIT_OK


def cmd_oracle(config: RunConfig) -> int:
    cell, method = config.load_cell(), config.load_method()
    lift = lift_trace(cell, method, config.patch)
    out = {"schema": 1, "cell": cell.name, "method": str(method), **lift.as_dict()}
    _write(config.report, json.dumps(out, indent=2) + "\n")
    return EXIT_INVALID if lift.verdict is Verdict.INVALID else EXIT_OK


def _build(cell, method, period):
    if period is not None:
        return build_diagram(cell, method, period)
    last = None
    for p in ((1, 1), (2, 1), (1, 2), (2, 2)):
        try:
            diagram = build_diagram(cell, method, p)
        except AlternationError as exc:
            last = exc
            continue
        log.info("alternating diagram found with period %dx%d", *p)
        return diagram
    raise last


def cmd_render(config: RunConfig) -> int:
    if not config.svg and not config.json_dump:
        raise UsageError("render needs --svg and/or --json")
    cell, method = config.load_cell(), config.load_method()
    try:
        diagram = _build(cell, method, config.period)
    except AlternationError as exc:
        hint = "" if config.period is None else " (try --period 2x2 or --period auto)"
        raise UsageError(f"no alternating diagram: {exc}{hint}") from None
    if diagram.repaired:
        log.info("flipped %d crossing(s) to make the diagram alternate", len(diagram.repaired))
    patch = unfold(diagram, *config.supercell)
    if config.svg:
        _write(config.svg, emit_svg(patch, scale=config.scale))
    if config.json_dump:
        _write(config.json_dump, json.dumps(patch.as_dict(), indent=2) + "\n")
    return EXIT_OK


def cmd_validate(config: RunConfig) -> int:
    cell = config.load_cell()
    problems = validate(cell)
    if problems:
        for p in problems:
            print(f"invalid: {p}", file=sys.stderr)
        return EXIT_ERROR
    print(f"valid: {summary_row(cell)}")
    return EXIT_OK


COMMANDS = {"list": cmd_list, "classify": cmd_classify, "render": cmd_render,
            "oracle": cmd_oracle, "validate": cmd_validate}


# argument parsing -----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # exit code 2 is reserved for Invalid structures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS,
                        help="log progress (repeat for debug output)")
    parser = _Parser(
        prog="polylink", parents=[common],
        description="Predict and draw the motifs that polygonal link methods "
                    "produce on periodic tilings.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help):
        return sub.add_parser(name, help=help, parents=[common])

    add("list", "list builtin tilings")

    def source(p, method=True):
        grp = p.add_mutually_exclusive_group(required=True)
        grp.add_argument("--tiling", choices=SUPPORTED_TILINGS, help="builtin cell")
        grp.add_argument("--cell", dest="cell_path", metavar="PATH", help="tcell v1 file")
        if method:
            p.add_argument("--method", required=True,
                           help="cr:s, cr:<m> or br:<m> (m = number of twists)")

    p = add("classify", "predict the motif type")
    source(p)
    p.add_argument("--report", metavar="PATH", help="write the JSON report here (default stdout)")
    p.add_argument("--oracle", action="store_true", help="also run the lift oracle")
    p.add_argument("--patch", type=int, default=DEFAULT_PATCH, help="oracle patch size")

    p = add("render", "draw the motif as SVG")
    source(p)
    p.add_argument("--svg", metavar="PATH")
    p.add_argument("--json", dest="json_dump", metavar="PATH", help="diagram JSON dump")
    p.add_argument("--supercell", type=_dims, default=(1, 1), metavar="NxM",
                   help="draw NxM copies of the motif")
    p.add_argument("--period", type=_period, default=(1, 1), metavar="NxM|auto",
                   help="build the motif on an NxM block of cells (needed when "
                        "alternation requires a larger period)")
    p.add_argument("--scale", type=float, default=200.0, help="pixels per cell")

    p = add("oracle", "walk the strands in a patch of the plane")
    source(p)
    p.add_argument("--patch", type=int, default=DEFAULT_PATCH)
    p.add_argument("--report", metavar="PATH")

    p = add("validate", "check a cell")
    source(p, method=False)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    verbose = getattr(args, "verbose", 0)
    logging.basicConfig(level=logging.WARNING - 10 * min(verbose, 2),
                        format="%(levelname)s: %(message)s")
    fields = RunConfig.__dataclass_fields__
    config = RunConfig(**{k: v for k, v in vars(args).items() if k in fields})
    try:
        return COMMANDS[args.command](config)
    except TCellError as exc:
        print(f"error ({exc.kind}): {exc}", file=sys.stderr)
    except MethodError as exc:
        print(f"error (method): {exc}", file=sys.stderr)
    except PatchTooSmall as exc:
        print(f"error (patch): {exc}", file=sys.stderr)
    except LayoutError as exc:
        print(f"error (layout): {exc}", file=sys.stderr)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
