"""Small labelled graphs used throughout the tests and demos.

FIX1  7-cycle labelled a^7
FIX2  8-cycle reading the genus-2 surface relator a b -a -b c d -c -d
FIX3  two disjoint copies of FIX1
FIX4  7-cycle reading a b a b a b c (fails Gr'(1/6))
FIX5  two rigid 13-cycles over {a, b, c} sharing the prefix a b
FIX6  6-cycle reading (a b)^3 with a pendant c-edge (unbounded pieces)
"""

from importlib import resources

from ..graph import LabelledGraph, parse_graph

NAMES = ("FIX1", "FIX2", "FIX3", "FIX4", "FIX5", "FIX6")


def path(name: str):
    return resources.files(__name__) / f"{name}.lgf"


def text(name: str) -> str:
    return path(name).read_text(encoding="utf-8")


def load(name: str) -> LabelledGraph:
    return parse_graph(text(name))
