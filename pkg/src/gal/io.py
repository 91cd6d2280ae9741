"""Reader and writer for the line-oriented ``p gal`` graph format.

::

    # comment
    p gal 5
    e 0 1
    w 3 3/2

Vertices are 0-indexed.  ``w`` lines give exact rational weights; vertices
without one get weight 1.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .graphs import Graph, Weights


class GraphFormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(lineno, f"expected an integer, got {tok!r}") from None


def _weight(tok: str, lineno: int) -> Fraction:
    num, sep, den = tok.partition("/")
    try:
        value = Fraction(int(num), int(den)) if sep else Fraction(int(num))
    except (ValueError, ZeroDivisionError):
        raise GraphFormatError(lineno, f"malformed weight {tok!r}") from None
    if value < 0:
        raise GraphFormatError(lineno, f"negative weight {tok!r}")
    return value


def parse_graph(text: str) -> tuple[Graph, Weights]:
    n = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    weights: dict[int, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise GraphFormatError(lineno, "duplicate header")
            if len(parts) != 3 or parts[1] != "gal":
                raise GraphFormatError(lineno, "header must be 'p gal <n>'")
            n = _int(parts[2], lineno)
            if n < 0:
                raise GraphFormatError(lineno, "vertex count must be nonnegative")
            continue
        if n is None:
            raise GraphFormatError(lineno, "missing 'p gal <n>' header before data")
        if tag == "e":
            if len(parts) != 3:
                raise GraphFormatError(lineno, "edge line must be 'e <u> <v>'")
            u, v = _int(parts[1], lineno), _int(parts[2], lineno)
            for x in (u, v):
                if not 0 <= x < n:
                    raise GraphFormatError(lineno, f"vertex {x} out of range 0..{n - 1}")
            if u == v:
                raise GraphFormatError(lineno, f"loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(lineno, f"duplicate edge {key}")
            seen.add(key)
            edges.append(key)
        elif tag == "w":
            if len(parts) != 3:
                raise GraphFormatError(lineno, "weight line must be 'w <v> <num>/<den>'")
            v = _int(parts[1], lineno)
            if not 0 <= v < n:
                raise GraphFormatError(lineno, f"vertex {v} out of range 0..{n - 1}")
            if v in weights:
                raise GraphFormatError(lineno, f"duplicate weight for vertex {v}")
            weights[v] = _weight(parts[2], lineno)
        else:
            raise GraphFormatError(lineno, f"unknown line type {tag!r}")
    if n is None:
        raise GraphFormatError(0, "missing 'p gal <n>' header")
    g = Graph.from_edges(n, edges)
    w = Weights([weights.get(v, Fraction(1)) for v in range(n)], exact=True)
    return g, w


def write_graph(g: Graph, weights: Weights | None = None) -> str:
    """Canonical text: header, sorted edges, then ``w`` lines for weights != 1."""
    lines = [f"p gal {g.n}"]
    lines.extend(f"e {u} {v}" for u, v in g.edges())
    if weights is not None:
        if len(weights) != g.n:
            raise ValueError("one weight per vertex required")
        if not weights.exact:
            raise ValueError("only exact weights can be written losslessly")
        for v, x in enumerate(weights.values):
            if x != 1:
                lines.append(f"w {v} {x.numerator}/{x.denominator}")
    return "\n".join(lines) + "\n"


def read_graph(path) -> tuple[Graph, Weights]:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def save_graph(path, g: Graph, weights: Weights | None = None) -> None:
    Path(path).write_text(write_graph(g, weights), encoding="utf-8")
