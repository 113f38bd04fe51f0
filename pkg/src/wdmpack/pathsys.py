"""Path systems: one routed path per demand.

A cycle route is written ``<s, t>``: the clockwise arc from ``s`` to ``t``.
``PathRoute.nodes`` keeps the traversal order, so ``nodes[0]`` is ``s``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import FormatError, ParityError, PolicyError, RoutingError
from .topology import Edge, Topology, canon, chain, cycle, parse_topology

TiePolicy = str | Sequence[int]


@dataclass(frozen=True)
class PathRoute:
    route_id: int
    nodes: tuple[int, ...]
    edges: tuple[Edge, ...]

    @property
    def pair(self) -> tuple[int, int]:
        return canon(self.nodes[0], self.nodes[-1])

    @property
    def start(self) -> int:
        return self.nodes[0]

    @property
    def end(self) -> int:
        return self.nodes[-1]

    @property
    def length(self) -> int:
        return len(self.edges)

    def __str__(self):
        return f"<{self.start},{self.end}>"


class PathSystem:
    """A topology plus one route per demand, indexed by ``route_id``.

    Cycle and chain systems built by this module are stored as interval
    arrays (first edge id, length) and materialize ``PathRoute`` objects only
    when asked for; other systems carry explicit routes.
    """

    def __init__(self, topology: Topology, routes: Sequence[PathRoute] | None = None, *,
                 starts=None, lengths=None):
        self.topology = topology
        if routes is not None:
            self._routes = tuple(routes)
            self._starts = None
            self.lengths = np.array([r.length for r in self._routes], dtype=np.int64)
        else:
            self._routes = None
            self._starts = np.asarray(starts, dtype=np.int64)
            self.lengths = np.asarray(lengths, dtype=np.int64)

    @classmethod
    def from_intervals(cls, topology: Topology, starts, lengths) -> PathSystem:
        """Routes covering edge ids ``start .. start+length-1`` (mod n on a cycle)."""
        if topology.kind not in ("cycle", "chain"):
            raise PolicyError("interval systems live on cycles and chains")
        return cls(topology, starts=starts, lengths=lengths)

    def __len__(self):
        return len(self.lengths)

    def __iter__(self):
        return iter(self.routes)

    def __getitem__(self, route_id: int) -> PathRoute:
        return self.routes[route_id]

    def __eq__(self, other):
        return (isinstance(other, PathSystem) and self.topology == other.topology
                and self.routes == other.routes)

    __hash__ = None

    @cached_property
    def routes(self) -> tuple[PathRoute, ...]:
        if self._routes is not None:
            return self._routes
        n = self.topology.node_count
        if self.topology.kind == "cycle":
            return tuple(_arc_route(n, i, int(s), (int(s) + int(k)) % n)
                         for i, (s, k) in enumerate(zip(self._starts, self.lengths)))
        return tuple(_chain_route(i, int(s), int(s) + int(k))
                     for i, (s, k) in enumerate(zip(self._starts, self.lengths)))

    @cached_property
    def pairs(self) -> np.ndarray:
        """(R, 2) array of sorted endpoint pairs."""
        if self._starts is None:
            return np.array([r.pair for r in self.routes], dtype=np.int64).reshape(-1, 2)
        n = self.topology.node_count
        a = self._starts
        b = (a + self.lengths) % n if self.topology.kind == "cycle" else a + self.lengths
        return np.stack([np.minimum(a, b), np.maximum(a, b)], axis=1)

    @cached_property
    def edge_sets(self) -> tuple[frozenset[int], ...]:
        """Edge ids used by each route."""
        if self._starts is not None:
            n = self.topology.edge_count
            return tuple(frozenset((int(s) + j) % n for j in range(int(k)))
                         for s, k in zip(self._starts, self.lengths))
        idx = self.topology._index
        return tuple(frozenset(map(idx.__getitem__, r.edges)) for r in self.routes)

    @cached_property
    def incidence(self) -> np.ndarray:
        """(R, ||G||) boolean route-edge incidence matrix."""
        n_edges = self.topology.edge_count
        if self._starts is not None:
            offset = (np.arange(n_edges)[None, :] - self._starts[:, None]) % n_edges
            return offset < self.lengths[:, None]
        inc = np.zeros((len(self), n_edges), dtype=bool)
        for r, es in enumerate(self.edge_sets):
            inc[r, list(es)] = True
        return inc

    @cached_property
    def word_masks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Routes as uint64 edge bitmaps plus the [lo, hi) span of nonzero words."""
        words = max(1, -(-self.topology.edge_count // 64))
        inc = self.incidence
        padded = np.zeros((len(self), words * 64), dtype=bool)
        padded[:, :inc.shape[1]] = inc
        packed = np.packbits(padded, axis=1, bitorder="little")
        masks = np.ascontiguousarray(packed).view("<u8").astype(np.uint64).reshape(len(self), words)
        nz = masks != 0
        lo = np.where(nz.any(axis=1), nz.argmax(axis=1), 0).astype(np.int64)
        hi = np.where(nz.any(axis=1), words - nz[:, ::-1].argmax(axis=1), 0).astype(np.int64)
        return masks, lo, hi

    @cached_property
    def bitmasks(self) -> tuple[int, ...]:
        masks = self.word_masks[0]
        return tuple(int.from_bytes(row.tobytes(), "little") for row in masks)

    def is_all_pairs(self) -> bool:
        n = self.topology.node_count
        return len(self) == n * (n - 1) // 2 and len(self._pair_index) == len(self)

    @cached_property
    def _pair_index(self) -> dict[tuple[int, int], int]:
        index: dict[tuple[int, int], int] = {}
        for rid, (a, b) in enumerate(self.pairs.tolist()):
            index.setdefault((a, b), rid)
        return index

    def route_id_for_pair(self, a: int, b: int) -> int:
        return self._pair_index[canon(a, b)]

    def route_for_pair(self, a: int, b: int) -> PathRoute:
        return self.routes[self.route_id_for_pair(a, b)]


def total_length(system: PathSystem) -> int:
    """Sum of ||P|| over all routes."""
    return int(system.lengths.sum())


# -- construction helpers -----------------------------------------------------

def _arc_route(n: int, route_id: int, s: int, t: int) -> PathRoute:
    k = (t - s) % n
    nodes = tuple((s + j) % n for j in range(k + 1))
    return PathRoute(route_id, nodes, tuple(canon(nodes[j], nodes[j + 1]) for j in range(k)))


def _chain_route(route_id: int, a: int, b: int) -> PathRoute:
    nodes = tuple(range(a, b + 1))
    return PathRoute(route_id, nodes, tuple(zip(nodes, nodes[1:])))


def alternating_start(m: int, j: int) -> int:
    """Start of the diametral arc chosen for antipodal pair {j, j+m} on C_2m.

    Even ``j`` runs clockwise from ``j``, odd ``j`` from ``j+m``. For odd ``m``
    this is <0,m>, <2,m+2>, ..., <2m-2,m-2>; for even ``m`` it is <0,m>, ...,
    <m-2,2m-2>, <m+1,1>, ..., <2m-1,m-1>.
    """
    j %= 2 * m
    j = min(j, (j + m) % (2 * m))
    return j if j % 2 == 0 else j + m


class _TieBreaker:
    def __init__(self, topology: Topology, policy: TiePolicy, rng):
        self.n = topology.node_count
        self.m = self.n // 2
        self.rng = None
        if isinstance(policy, str):
            if policy not in ("alternating", "random"):
                raise PolicyError(f"unknown tie policy {policy!r}")
            self.kind = policy
            if policy == "random":
                self.rng = np.random.default_rng(rng)
        else:
            starts = [int(s) for s in policy]
            if topology.kind == "cycle" and self.n % 2 == 0:
                if len(starts) != self.m:
                    raise PolicyError(f"explicit tie list needs {self.m} entries, got {len(starts)}")
                for j, st in enumerate(starts):
                    if st not in (j, j + self.m):
                        raise PolicyError(f"tie choice for pair {{{j},{j + self.m}}} must start at {j} or {j + self.m}")
            self.kind = "explicit"
            self.starts = np.array(starts, dtype=np.int64)

    def starts_for(self, low: np.ndarray) -> np.ndarray:
        """Diametral arc starts for antipodal pairs {low, low+m}, drawn in demand order."""
        if self.kind == "alternating":
            return np.where(low % 2 == 0, low, low + self.m)
        if self.kind == "explicit":
            return self.starts[low]
        flip = self.rng.random(len(low)) < 0.5
        return np.where(flip, low + self.m, low)


def _cycle_intervals(n: int, a: np.ndarray, b: np.ndarray, ties: _TieBreaker):
    d = (b - a) % n
    starts = np.where(2 * d < n, a, b)
    lengths = np.minimum(d, n - d)
    tie = 2 * d == n
    if tie.any():
        starts = starts.copy()
        starts[tie] = ties.starts_for(np.minimum(a[tie], b[tie]))
    return starts, lengths


def _all_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    a, b = np.triu_indices(n, k=1)
    return a.astype(np.int64), b.astype(np.int64)


def shortest_system_odd_cycle(n: int) -> PathSystem:
    """The unique shortest path system of an odd cycle, pairs in lexicographic order."""
    if n % 2 == 0:
        raise ParityError(f"C_{n} is even; use shortest_system_even_cycle")
    topo = cycle(n)
    a, b = _all_pairs(n)
    return PathSystem.from_intervals(topo, *_cycle_intervals(n, a, b, None))


def shortest_system_even_cycle(n: int, tie_policy: TiePolicy = "alternating", seed=None) -> PathSystem:
    """Shortest path system of C_n, n even, antipodal ties resolved by ``tie_policy``.

    ``tie_policy`` is ``"alternating"``, ``"random"`` (drawn from ``seed``) or
    an explicit list whose entry ``j`` is the clockwise start (``j`` or
    ``j + n/2``) of the arc for pair ``{j, j + n/2}``.
    """
    if n % 2:
        raise ParityError(f"C_{n} is odd; use shortest_system_odd_cycle")
    topo = cycle(n)
    a, b = _all_pairs(n)
    return PathSystem.from_intervals(topo, *_cycle_intervals(n, a, b, _TieBreaker(topo, tie_policy, seed)))


def shortest_system_cycle(n: int, tie_policy: TiePolicy = "alternating", seed=None) -> PathSystem:
    if n % 2:
        return shortest_system_odd_cycle(n)
    return shortest_system_even_cycle(n, tie_policy, seed)


def chain_system(n: int) -> PathSystem:
    """The unique path system of the chain D_n."""
    topo = chain(n)
    a, b = _all_pairs(n)
    return PathSystem.from_intervals(topo, a, b - a)


def route_demands(topology: Topology, demands: Iterable[tuple[int, int]],
                  tie_policy: TiePolicy = "alternating", seed=None) -> PathSystem:
    """Route every demand on a shortest path; duplicates become distinct routes.

    On even cycles each antipodal demand is resolved independently. On
    general graphs ``"alternating"`` takes the lexicographically smallest
    shortest path and ``"random"`` a uniformly random one.
    """
    n = topology.node_count
    pairs = np.asarray(list(demands), dtype=np.int64).reshape(-1, 2)
    a, b = pairs[:, 0], pairs[:, 1]
    bad = (a == b) | (a < 0) | (b < 0) | (a >= n) | (b >= n)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise RoutingError(f"bad demand {{{a[i]},{b[i]}}} on {n} nodes")
    ties = _TieBreaker(topology, tie_policy, seed)
    if topology.kind == "cycle":
        return PathSystem.from_intervals(topology, *_cycle_intervals(n, a, b, ties))
    if topology.kind == "chain":
        lo = np.minimum(a, b)
        return PathSystem.from_intervals(topology, lo, np.maximum(a, b) - lo)
    routes = [route_from_nodes(topology, _bfs_path(topology, int(x), int(y), ties.rng), rid)
              for rid, (x, y) in enumerate(zip(a, b))]
    return PathSystem(topology, routes)


def _bfs_path(topology: Topology, a: int, b: int, rng) -> tuple[int, ...]:
    dist = {a: 0}
    count = {a: 1}
    queue = deque([a])
    while queue:
        u = queue.popleft()
        for w in topology.neighbors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                count[w] = count[u]
                queue.append(w)
            elif dist[w] == dist[u] + 1:
                count[w] += count[u]
    if b not in dist:
        raise RoutingError(f"no path between {a} and {b}")
    # walk back from b; weighting predecessors by path counts makes the draw uniform
    path = [b]
    v = b
    while v != a:
        preds = [u for u in topology.neighbors(v) if dist.get(u) == dist[v] - 1]
        if rng is None:
            v = min(preds)
        else:
            w = np.array([count[u] for u in preds], dtype=float)
            v = preds[rng.choice(len(preds), p=w / w.sum())]
        path.append(v)
    return tuple(reversed(path))


def route_from_nodes(topology: Topology, nodes: Sequence[int], route_id: int) -> PathRoute:
    nodes = tuple(int(v) for v in nodes)
    if len(nodes) < 2:
        raise RoutingError("a route needs two distinct endpoints")
    if len(set(nodes)) != len(nodes):
        raise RoutingError(f"route {nodes} revisits a node")
    for u, v in zip(nodes, nodes[1:]):
        if not topology.has_edge(u, v):
            raise RoutingError(f"{u}-{v} is not an edge")
    return PathRoute(route_id, nodes, tuple(canon(u, v) for u, v in zip(nodes, nodes[1:])))


def system_from_routes(topology: Topology, node_paths: Iterable[Sequence[int]]) -> PathSystem:
    routes = tuple(route_from_nodes(topology, p, i) for i, p in enumerate(node_paths))
    return PathSystem(topology, routes)


# -- file format ------------------------------------------------------------
#
#   topology cycle 4
#   1 0 : 1-2 2-3 3-0
#   0 2 : 0-1 1-2

def format_system(system: PathSystem) -> str:
    topo = system.topology
    lines = [f"topology {topo.kind} {topo.node_count}"]
    for r in system.routes:
        hops = " ".join(f"{u}-{v}" for u, v in zip(r.nodes, r.nodes[1:]))
        lines.append(f"{r.start} {r.end} : {hops}")
    return "\n".join(lines) + "\n"


def parse_system(text: str) -> PathSystem:
    rows = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise FormatError("empty path-system file")
    head = rows[0].split()
    if len(head) != 3 or head[0] != "topology":
        raise FormatError("first line must be `topology kind n`")
    parsed = []
    for row in rows[1:]:
        left, sep, right = row.partition(":")
        if not sep:
            raise FormatError(f"route line needs `a b : edges`, got {row!r}")
        try:
            a, b = (int(x) for x in left.split())
            hops = [tuple(int(x) for x in tok.split("-")) for tok in right.split()]
        except ValueError:
            raise FormatError(f"cannot parse route line {row!r}") from None
        if any(len(h) != 2 for h in hops):
            raise FormatError(f"edge tokens must be `u-v` in {row!r}")
        parsed.append((a, b, hops))

    if head[1] == "general":
        edges = {canon(u, v) for _, _, hops in parsed for u, v in hops}
        topo = parse_topology(f"general {head[2]}\n" + "".join(f"{u} {v}\n" for u, v in sorted(edges)))
    else:
        topo = parse_topology(f"{head[1]} {head[2]}\n")

    routes = []
    for a, b, hops in parsed:
        nodes = _walk(a, b, hops)
        routes.append(route_from_nodes(topo, nodes, len(routes)))
    return PathSystem(topo, routes)


def _walk(a: int, b: int, hops) -> list[int]:
    nodes = [a]
    pending = [canon(u, v) for u, v in hops]
    for e in pending:
        u = nodes[-1]
        if u not in e:
            raise FormatError(f"edges of route {a}-{b} do not form a path from {a}")
        nodes.append(e[1] if e[0] == u else e[0])
    if nodes[-1] != b or len(nodes) < 2:
        raise FormatError(f"edges of route {a}-{b} do not end at {b}")
    return nodes


def load_system(path: str | Path) -> PathSystem:
    return parse_system(Path(path).read_text())
