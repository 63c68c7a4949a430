"""Simple undirected graphs: construction, text formats and basic queries.

Vertices are numbered ``1..n`` in every external representation and
``0..n-1`` internally.  A :class:`Graph` is immutable, so instances can be
shared freely between worker processes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Base class for invalid graph input."""


class OutOfRange(GraphError):
    pass


class LoopEdge(GraphError):
    pass


class MalformedGraph6(GraphError):
    pass


class IsolatedVertex(GraphError):
    pass


class EmptyGraph(GraphError):
    pass


@dataclass(frozen=True, order=True)
class Graph:
    """A simple graph on vertices ``1..n`` with a canonical sorted edge list.

    ``edges`` holds 0-based pairs ``(u, v)`` with ``u < v`` in strictly
    increasing lexicographic order.  Use :func:`from_edge_list` to build one
    from arbitrary 1-based input.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.n < 1:
            raise OutOfRange(f"vertex count must be positive, got {self.n}")
        prev = (-1, -1)
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise OutOfRange(f"bad internal edge {(u, v)} for n={self.n}")
            if (u, v) <= prev:
                raise GraphError("edge list must be strictly increasing")
            prev = (u, v)

    @property
    def m(self) -> int:
        return len(self.edges)

    def edges_1based(self) -> list[tuple[int, int]]:
        return [(u + 1, v + 1) for u, v in self.edges]

    def adjacency_masks(self) -> list[int]:
        """Row ``v`` as a bitmask with bit ``u`` set when ``u ~ v``."""
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return masks

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]`` (0-based)."""
        pairs = []
        for u, v in self.edges:
            a, b = perm[u], perm[v]
            pairs.append((a, b) if a < b else (b, a))
        return Graph(self.n, tuple(sorted(pairs)))

    def __str__(self) -> str:
        body = ", ".join(f"{{{u}, {v}}}" for u, v in self.edges_1based())
        return f"{self.n}; {{{body}}}"


@dataclass(frozen=True)
class ComponentStructure:
    w: int
    component_of: tuple[int, ...]
    isolated_count: int
    sizes: tuple[int, ...] = field(default=())


def from_edge_list(n: int, pairs: Iterable[Sequence[int]]) -> Graph:
    """Build a graph from 1-based vertex pairs, dropping duplicates."""
    seen = set()
    for pair in pairs:
        u, v = (int(x) for x in pair)
        if not (1 <= u <= n and 1 <= v <= n):
            raise OutOfRange(f"edge {{{u},{v}}} has an endpoint outside 1..{n}")
        if u == v:
            raise LoopEdge(f"loop at vertex {u}")
        seen.add((min(u, v) - 1, max(u, v) - 1))
    return Graph(n, tuple(sorted(seen)))


_PAIR_RE = re.compile(r"\{\s*(-?\d+)\s*,\s*(-?\d+)\s*\}")


def parse_edge_text(text: str, n: int | None = None) -> Graph:
    """Parse ``"n; {u,v} {u,v} ..."`` or ``"{{u, v}, {u, v}, ...}"``.

    Without an explicit ``n`` prefix (or argument) the vertex count is the
    largest endpoint mentioned.
    """
    text = text.strip()
    head, sep, rest = text.partition(";")
    if sep and head.strip().isdigit():
        n = int(head) if n is None else n
        text = rest
    pairs = [(int(a), int(b)) for a, b in _PAIR_RE.findall(text)]
    leftover = _PAIR_RE.sub("", text)
    if re.search(r"\d", leftover):
        raise GraphError(f"could not parse edge list: {text!r}")
    if n is None:
        if not pairs:
            raise GraphError("vertex count missing for empty edge list")
        n = max(max(p) for p in pairs)
    return from_edge_list(n, pairs)


def degrees(g: Graph) -> list[int]:
    deg = [0] * g.n
    for u, v in g.edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def components(g: Graph) -> ComponentStructure:
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)

    index: dict[int, int] = {}
    comp = []
    for v in range(g.n):
        comp.append(index.setdefault(find(v), len(index)))
    sizes = [0] * len(index)
    for c in comp:
        sizes[c] += 1
    isolated = sum(1 for d in degrees(g) if d == 0)
    return ComponentStructure(len(index), tuple(comp), isolated, tuple(sizes))


def is_connected(g: Graph) -> bool:
    return components(g).w == 1


# graph6 (short form only: n <= 62)

def _triangle_bits(g: Graph) -> list[int]:
    masks = g.adjacency_masks()
    return [(masks[j] >> i) & 1 for j in range(1, g.n) for i in range(j)]


def graph6_encode(g: Graph) -> str:
    if g.n > 62:
        raise GraphError("only the short graph6 form (n <= 62) is supported")
    bits = _triangle_bits(g)
    bits += [0] * (-len(bits) % 6)
    out = [chr(g.n + 63)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


def graph6_decode(text: str) -> Graph:
    line = text.strip()
    if line.startswith(">>graph6<<"):
        line = line[len(">>graph6<<"):]
    if not line:
        raise MalformedGraph6("empty graph6 line")
    codes = [ord(c) for c in line]
    if any(c < 63 or c > 126 for c in codes):
        raise MalformedGraph6(f"byte outside 63..126 in {line!r}")
    n = codes[0] - 63
    if n > 62:
        raise MalformedGraph6("long-form graph6 (n > 62) is not supported")
    if n < 1:
        raise MalformedGraph6("graph6 line encodes no vertices")
    nbits = n * (n - 1) // 2
    if len(codes) - 1 != (nbits + 5) // 6:
        raise MalformedGraph6(
            f"expected {(nbits + 5) // 6} data bytes for n={n}, got {len(codes) - 1}")
    bits = []
    for c in codes[1:]:
        val = c - 63
        bits.extend((val >> s) & 1 for s in range(5, -1, -1))
    if any(bits[nbits:]):
        raise MalformedGraph6("nonzero padding bits")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph(n, tuple(sorted(edges)))


def graph_to_code(g: Graph) -> int:
    """Upper-triangle bits in graph6 order, first bit most significant."""
    code = 0
    for b in _triangle_bits(g):
        code = (code << 1) | b
    return code


def graph_from_code(n: int, code: int) -> Graph:
    nbits = n * (n - 1) // 2
    edges = []
    k = nbits - 1
    for j in range(1, n):
        for i in range(j):
            if (code >> k) & 1:
                edges.append((i, j))
            k -= 1
    return Graph(n, tuple(sorted(edges)))


def read_graph6_file(path: str) -> Iterable[Graph]:
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                yield graph6_decode(line)
            except MalformedGraph6 as exc:
                raise MalformedGraph6(f"{path}:{lineno}: {exc}") from None
