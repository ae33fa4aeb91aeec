import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

from polylink import PolygonalMethod, builtin_tcell, parse_tcell  # noqa: E402
from polylink.tcell import SUPPORTED_TILINGS  # noqa: E402

BUILTINS = tuple(SUPPORTED_TILINGS)
METHODS = ("cr:s",) + tuple(f"cr:{m}" for m in range(5)) + tuple(f"br:{m}" for m in range(5))


def applicable(name: str) -> list[str]:
    """Methods that make sense on a builtin cell (single line needs degree 4)."""
    return [m for m in METHODS if m != "cr:s" or name == "square"]


def cases() -> list[tuple[str, str]]:
    return [(name, m) for name in BUILTINS for m in applicable(name)]


def load(name: str):
    return parse_tcell((HERE / "data" / f"{name}.tcell").read_text(), name=name)


def method(text: str) -> PolygonalMethod:
    return PolygonalMethod.parse(text)


@pytest.fixture(params=BUILTINS)
def builtin(request):
    return builtin_tcell(request.param)
