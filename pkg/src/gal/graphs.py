"""Graphs, vertex weights, products, complements and blow-ups.

Adjacency is stored as one Python int per vertex, used as a bitset over the
vertex indices.  Graphs are immutable; every operation returns a new graph.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Sequence


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


@dataclass(frozen=True)
class Graph:
    """Loopless undirected graph on the vertices ``0..n-1``.

    ``labels`` is optional metadata (product vertices carry the pair of factor
    labels) and does not take part in equality.
    """

    n: int
    adj: tuple[int, ...]
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 0 or len(self.adj) != self.n:
            raise ValueError("adjacency length must equal the vertex count")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"vertex {v} has a neighbour out of range")
            if row >> v & 1:
                raise ValueError(f"self-loop at vertex {v}")
            for w in iter_bits(row):
                if not self.adj[w] >> v & 1:
                    raise ValueError(f"adjacency not symmetric at ({v}, {w})")
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("labels length must equal the vertex count")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj), None if labels is None else tuple(labels))

    @classmethod
    def from_matrix(cls, matrix) -> "Graph":
        n = len(matrix)
        return cls.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n) if matrix[i][j]))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def closed(self, v: int) -> int:
        """Bitset of ``v`` together with its neighbours."""
        return self.adj[v] | (1 << v)

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v``, sorted lexicographically."""
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    def non_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n) if not self.adj[u] >> v & 1]

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def adjacency_matrix(self):
        import numpy as np

        a = np.zeros((self.n, self.n), dtype=np.int8)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1
        return a

    def is_independent(self, vertices: Iterable[int]) -> bool:
        mask = bits_of(vertices)
        return all(not (self.adj[v] & mask) for v in iter_bits(mask))

    def is_clique(self, vertices: Iterable[int]) -> bool:
        mask = bits_of(vertices)
        return all((self.closed(v) & mask) == mask for v in iter_bits(mask))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        edges = [(index[u], index[v]) for u in vertices for v in iter_bits(self.adj[u]) if v in index and index[u] < index[v]]
        labels = None if self.labels is None else [self.labels[v] for v in vertices]
        return Graph.from_edges(len(vertices), edges, labels)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.edge_count})"


class Weights:
    """Nonnegative per-vertex weights, either exact (``Fraction``) or real (``float``)."""

    __slots__ = ("values", "exact")

    def __init__(self, values: Iterable, exact: bool | None = None):
        vals = list(values)
        if exact is None:
            exact = all(isinstance(x, Rational) for x in vals)
        if exact:
            conv = []
            for x in vals:
                if not isinstance(x, (Rational, str)):
                    raise TypeError(f"exact weights need rational values, got {x!r}")
                conv.append(Fraction(x))
            vals = conv
        else:
            vals = [float(x) for x in vals]
            if any(math.isnan(x) or math.isinf(x) for x in vals):
                raise ValueError("weights must be finite")
        if any(x < 0 for x in vals):
            raise ValueError("weights must be nonnegative")
        object.__setattr__(self, "values", tuple(vals))
        object.__setattr__(self, "exact", bool(exact))

    def __setattr__(self, name, value):
        raise AttributeError("Weights is immutable")

    @classmethod
    def ones(cls, n: int) -> "Weights":
        return cls([Fraction(1)] * n, exact=True)

    @classmethod
    def real(cls, values: Iterable[float]) -> "Weights":
        return cls(values, exact=False)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __eq__(self, other):
        return isinstance(other, Weights) and self.exact == other.exact and self.values == other.values

    def __hash__(self):
        return hash((self.exact, self.values))

    def __repr__(self):
        kind = "exact" if self.exact else "real"
        return f"Weights({[str(x) if self.exact else x for x in self.values]}, {kind})"

    def is_ones(self) -> bool:
        return all(x == 1 for x in self.values)

    def is_integral(self) -> bool:
        return self.exact and all(x.denominator == 1 for x in self.values)

    def as_floats(self) -> list[float]:
        return [float(x) for x in self.values]

    def total(self):
        if self.exact:
            return sum(self.values, Fraction(0))
        return math.fsum(self.values)

    def scaled(self, factor) -> "Weights":
        if self.exact and isinstance(factor, Rational):
            return Weights([x * factor for x in self.values], exact=True)
        return Weights.real([float(x) * float(factor) for x in self.values])

    def shifted(self, amount) -> "Weights":
        if self.exact and isinstance(amount, Rational):
            return Weights([x + amount for x in self.values], exact=True)
        return Weights.real([float(x) + float(amount) for x in self.values])


def product_weights(p: Weights, q: Weights) -> Weights:
    """Pointwise product weights on a product vertex set, row-major in ``p``."""
    if p.exact and q.exact:
        return Weights([a * b for a in p.values for b in q.values], exact=True)
    return Weights.real([float(a) * float(b) for a in p.values for b in q.values])


def ceil_weights(p: Weights, level, snap: float = 1e-9) -> Weights:
    """Integer weights ``ceil(level * p(v))``.

    Real products within ``snap`` of an integer are snapped to it first, so
    numerically-integral values do not round up by one.
    """
    out = []
    for x in p.values:
        if p.exact and isinstance(level, Rational):
            out.append(math.ceil(x * level))
            continue
        y = float(x) * float(level)
        r = round(y)
        out.append(int(r) if abs(y - r) <= snap else math.ceil(y))
    return Weights([Fraction(k) for k in out], exact=True)


def _pair_labels(g: Graph, h: Graph):
    gl = g.labels if g.labels is not None else tuple(range(g.n))
    hl = h.labels if h.labels is not None else tuple(range(h.n))
    return tuple((a, b) for a in gl for b in hl)


def strong_product(g: Graph, h: Graph) -> Graph:
    """Strong product: ``(v,v')`` and ``(w,w')`` adjacent iff both coordinates
    are equal-or-adjacent and the pairs differ.  Vertex ``(v,v')`` has index
    ``v * h.n + v'``."""
    nh = h.n
    adj = []
    for v in range(g.n):
        gv = g.closed(v)
        for vp in range(nh):
            hv = h.closed(vp)
            row = 0
            for w in iter_bits(gv):
                row |= hv << (w * nh)
            adj.append(row & ~(1 << (v * nh + vp)))
    return Graph(g.n * nh, tuple(adj), _pair_labels(g, h))


def disjunctive_product(g: Graph, h: Graph) -> Graph:
    """Disjunctive product: adjacent iff some coordinate pair is an edge."""
    nh = h.n
    block = (1 << nh) - 1
    adj = []
    for v in range(g.n):
        full = 0
        for w in iter_bits(g.adj[v]):
            full |= block << (w * nh)
        for vp in range(nh):
            row = full
            hv = h.adj[vp]
            for w in range(g.n):
                row |= hv << (w * nh)
            adj.append(row)
    return Graph(g.n * nh, tuple(adj), _pair_labels(g, h))


def power(g: Graph, k: int, product=strong_product) -> Graph:
    if k < 1:
        raise ValueError("power needs k >= 1")
    out = g
    for _ in range(k - 1):
        out = product(out, g)
    return out


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    adj = tuple(full & ~row & ~(1 << v) for v, row in enumerate(g.adj))
    return Graph(g.n, adj, g.labels)


def blowup(g: Graph, m: Weights | Sequence[int]) -> Graph:
    """Replace vertex ``v`` by an independent set of ``m[v]`` copies.

    Copies ``(v, i)`` for ``i = 0..m[v]-1`` are numbered consecutively in
    vertex order.  Zero multiplicities delete the vertex.
    """
    mult = []
    for x in (m.values if isinstance(m, Weights) else m):
        if isinstance(x, float) or Fraction(x).denominator != 1:
            raise ValueError(f"blow-up needs integer multiplicities, got {x!r}")
        k = int(x)
        if k < 0:
            raise ValueError("blow-up multiplicities must be nonnegative")
        mult.append(k)
    if len(mult) != g.n:
        raise ValueError("one multiplicity per vertex required")
    start = []
    total = 0
    for k in mult:
        start.append(total)
        total += k
    group = [((1 << k) - 1) << s for k, s in zip(mult, start)]
    adj = []
    labels = []
    for v in range(g.n):
        row = 0
        for w in iter_bits(g.adj[v]):
            row |= group[w]
        for i in range(mult[v]):
            adj.append(row)
            labels.append((v, i))
    return Graph(total, tuple(adj), tuple(labels))


def is_isomorphic(g: Graph, h: Graph) -> bool:
    import networkx as nx

    return nx.is_isomorphic(to_networkx(g), to_networkx(h))


def to_networkx(g: Graph):
    import networkx as nx

    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edges())
    return nxg


def is_vertex_transitive(g: Graph) -> bool:
    """True iff some automorphism maps vertex 0 to every other vertex."""
    if g.n <= 1:
        return True
    import networkx as nx
    from networkx.algorithms.isomorphism import GraphMatcher

    degrees = {g.degree(v) for v in range(g.n)}
    if len(degrees) > 1:
        return False
    base = to_networkx(g)
    for target in range(1, g.n):
        a = base.copy()
        b = base.copy()
        nx.set_node_attributes(a, {v: v == 0 for v in a}, "root")
        nx.set_node_attributes(b, {v: v == target for v in b}, "root")
        gm = GraphMatcher(a, b, node_match=lambda x, y: x["root"] == y["root"])
        if not gm.is_isomorphic():
            return False
    return True


# named families

def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return Graph.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def empty(n: int) -> Graph:
    if n < 1:
        raise ValueError("empty graph needs n >= 1")
    return Graph(n, (0,) * n)


def path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p); the same seed always gives the same graph."""
    if n < 1:
        raise ValueError("random graph needs n >= 1")
    if not 0 <= p <= 1:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    return Graph.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p))


def random_bipartite(n1: int, n2: int, p: float, seed: int) -> Graph:
    rng = random.Random(seed)
    return Graph.from_edges(n1 + n2, ((i, n1 + j) for i in range(n1) for j in range(n2) if rng.random() < p))


FAMILIES = {
    "cycle": cycle,
    "complete": complete,
    "empty": empty,
    "path": path,
    "petersen": petersen,
    "random": random_graph,
}


def generate(family: str, *params, seed: int | None = None) -> Graph:
    """Build a named graph, e.g. ``generate("cycle", 5)`` or
    ``generate("random", 8, 0.5, seed=1)``."""
    try:
        builder = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown graph family {family!r}; choose from {sorted(FAMILIES)}") from None
    if family == "random":
        if len(params) != 2:
            raise ValueError("random needs n and p")
        return random_graph(int(params[0]), float(params[1]), 0 if seed is None else seed)
    if family == "petersen":
        if params:
            raise ValueError("petersen takes no parameters")
        return petersen()
    if len(params) != 1:
        raise ValueError(f"{family} needs exactly one parameter n")
    return builder(int(params[0]))
