"""Ring, chain and general network topologies.

Nodes are the integers ``0..n-1``. Every undirected edge is stored as a
sorted pair, so ``{n-1, 0}`` on a cycle is ``(0, n-1)``. Cycle edges are
indexed clockwise: edge ``j`` joins ``j`` and ``j+1 (mod n)``; chain edge
``j`` joins ``j`` and ``j+1``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import EmptyArcError, FormatError, InvalidSizeError

Edge = tuple[int, int]

KINDS = ("cycle", "chain", "general")


def canon(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Topology:
    kind: str
    node_count: int
    edges: tuple[Edge, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)
    _adj: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FormatError(f"unknown topology kind {self.kind!r}")
        n = self.node_count
        if n < 1:
            raise InvalidSizeError("a topology needs at least one node")
        index = {}
        adj: list[list[int]] = [[] for _ in range(n)]
        for i, (u, v) in enumerate(self.edges):
            if not (0 <= u < n and 0 <= v < n):
                raise FormatError(f"edge {u}-{v} has a node outside 0..{n - 1}")
            if u == v:
                raise FormatError(f"loop at node {u}")
            e = canon(u, v)
            if e != (u, v):
                raise FormatError(f"edge {u}-{v} is not in canonical (min, max) order")
            if e in index:
                raise FormatError(f"duplicate edge {u}-{v}")
            index[e] = i
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        if not _connected(self._adj):
            raise FormatError("topology is not connected")

    @property
    def edge_count(self) -> int:
        """||G||, the number of links."""
        return len(self.edges)

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self._index[canon(u, v)]
        except KeyError:
            raise KeyError(f"{u}-{v} is not an edge of this {self.kind}") from None

    def has_edge(self, u: int, v: int) -> bool:
        return canon(u, v) in self._index

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]


def _connected(adj) -> bool:
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(adj)


def cycle(n: int) -> Topology:
    if n < 3:
        raise InvalidSizeError(f"a simple cycle needs n >= 3, got {n}")
    return Topology("cycle", n, tuple(canon(j, (j + 1) % n) for j in range(n)))


def chain(n: int) -> Topology:
    if n < 2:
        raise InvalidSizeError(f"a chain needs n >= 2, got {n}")
    return Topology("chain", n, tuple((j, j + 1) for j in range(n - 1)))


def general(n: int, edges: Iterable[tuple[int, int]]) -> Topology:
    return Topology("general", n, tuple(canon(u, v) for u, v in edges))


def arc_edges(n: int, a: int, b: int) -> list[Edge]:
    """Edges of the clockwise arc <a, b> on C_n, in traversal order."""
    if not (0 <= a < n and 0 <= b < n):
        raise InvalidSizeError(f"arc endpoints must lie in 0..{n - 1}")
    if a == b:
        raise EmptyArcError(f"<{a},{a}> has no edges")
    k = (b - a) % n
    return [canon((a + j) % n, (a + j + 1) % n) for j in range(k)]


def arc_length(n: int, a: int, b: int) -> int:
    return (b - a) % n


# -- text format -------------------------------------------------------------

def format_topology(topo: Topology) -> str:
    lines = [f"{topo.kind} {topo.node_count}"]
    if topo.kind == "general":
        lines += [f"{u} {v}" for u, v in topo.edges]
    return "\n".join(lines) + "\n"


def parse_topology(text: str) -> Topology:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise FormatError("first line must be `kind n`")
    kind, n_tok = rows[0]
    try:
        n = int(n_tok)
    except ValueError:
        raise FormatError(f"bad node count {n_tok!r}") from None
    if kind == "cycle":
        return cycle(n)
    if kind == "chain":
        return chain(n)
    if kind != "general":
        raise FormatError(f"unknown topology kind {kind!r}")
    edges = []
    for row in rows[1:]:
        if len(row) != 2:
            raise FormatError(f"expected `u v`, got {' '.join(row)!r}")
        try:
            edges.append((int(row[0]), int(row[1])))
        except ValueError:
            raise FormatError(f"non-integer node in {' '.join(row)!r}") from None
    return general(n, edges)


def load_topology(path: str | Path) -> Topology:
    return parse_topology(Path(path).read_text())
