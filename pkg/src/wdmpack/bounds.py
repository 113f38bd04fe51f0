"""Closed-form global packing numbers, load bounds and an exact coloring oracle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import BudgetError, InvalidSizeError
from .pathsys import PathSystem, shortest_system_even_cycle, total_length


# -- formulas -----------------------------------------------------------------

def phi_even_cycle(m: int) -> int:
    """Global packing number of C_2m."""
    if m < 2:
        raise InvalidSizeError(f"C_{2 * m} is not a simple cycle")
    return comb(m, 2) + m // 2 + 1


def phi_odd_cycle(m: int) -> int:
    """Global packing number of C_(2m+1)."""
    if m < 1:
        raise InvalidSizeError(f"C_{2 * m + 1} is not a simple cycle")
    return comb(m + 1, 2)


def phi_chain(n: int) -> int:
    if n < 2:
        raise InvalidSizeError(f"a chain needs n >= 2, got {n}")
    return (n // 2) * ((n + 1) // 2)


def phi_cycle(n: int) -> int:
    if n < 3:
        raise InvalidSizeError(f"a simple cycle needs n >= 3, got {n}")
    return phi_odd_cycle(n // 2) if n % 2 else phi_even_cycle(n // 2)


def lower_bound_load(system: PathSystem) -> int:
    """ceil(total route length / ||G||): each wavelength carries at most ||G|| edges."""
    return -(-total_length(system) // system.topology.edge_count)


def edge_loads(system: PathSystem) -> np.ndarray:
    return system.incidence.sum(axis=0)


def max_edge_load(system: PathSystem) -> int:
    """Routes through the busiest link; they pairwise conflict."""
    return int(edge_loads(system).max()) if len(system) else 0


# -- conflict graph ------------------------------------------------------------

@dataclass(frozen=True)
class ConflictGraph:
    """Routes as vertices, an edge between every two routes sharing a link.

    ``adj[v]`` is the neighbourhood of ``v`` as an int bitmask. ``seed_clique``
    optionally carries a known clique (the routes on the busiest link).
    """
    adj: tuple[int, ...]
    seed_clique: tuple[int, ...] = field(default=())

    @property
    def order(self) -> int:
        return len(self.adj)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.order) for v in range(u + 1, self.order) if self.adj[u] >> v & 1]

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    @classmethod
    def from_edges(cls, n: int, edges) -> ConflictGraph:
        adj = [0] * n
        for u, v in edges:
            if u != v:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        return cls(tuple(adj))


def conflict_graph(system: PathSystem) -> ConflictGraph:
    inc = system.incidence.astype(np.int32)
    share = (inc @ inc.T) > 0
    np.fill_diagonal(share, False)
    adj = tuple(int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little") for row in share)
    seed: tuple[int, ...] = ()
    if len(system):
        busiest = int(inc.sum(axis=0).argmax())
        seed = tuple(np.flatnonzero(inc[:, busiest]).tolist())
    return ConflictGraph(adj, seed)


# -- exact chromatic number ------------------------------------------------------

@dataclass
class ChromaticResult:
    value: int
    lower_bound: int
    lower_bound_source: str
    initial_upper_bound: int
    nodes: int
    coloring: list[int]

    def certificate(self) -> dict:
        return {
            "chromatic_number": self.value,
            "lower_bound": self.lower_bound,
            "lower_bound_source": self.lower_bound_source,
            "initial_upper_bound": self.initial_upper_bound,
            "search_nodes": self.nodes,
        }


def greedy_clique(graph: ConflictGraph) -> list[int]:
    best: list[int] = list(graph.seed_clique)
    by_degree = sorted(range(graph.order), key=graph.degree, reverse=True)
    for v in by_degree:
        clique = [v]
        cand = graph.adj[v]
        for u in by_degree:
            if cand >> u & 1:
                clique.append(u)
                cand &= graph.adj[u]
        if len(clique) > len(best):
            best = clique
    return best


def dsatur_coloring(graph: ConflictGraph) -> list[int]:
    """Brelaz's DSATUR heuristic; colors are 0-based."""
    n = graph.order
    color = [-1] * n
    seen = [0] * n
    for _ in range(n):
        v = max((u for u in range(n) if color[u] < 0),
                key=lambda u: (seen[u].bit_count(), graph.degree(u), -u))
        c = 0
        while seen[v] >> c & 1:
            c += 1
        color[v] = c
        rest = graph.adj[v]
        while rest:
            low = rest & -rest
            seen[low.bit_length() - 1] |= 1 << c
            rest ^= low
    return color


def solve_chromatic(graph: ConflictGraph, budget: int = 60, node_limit: int | None = None) -> ChromaticResult:
    """Exact chromatic number by DSATUR branch and bound.

    Starts from a greedy clique (lower) and a DSATUR coloring (upper) and
    stops as soon as they meet. Refuses graphs above ``budget`` vertices and
    searches beyond ``node_limit`` nodes rather than return an approximation.
    """
    n = graph.order
    if n > budget:
        raise BudgetError(f"{n} vertices exceed the oracle budget of {budget}")
    if n == 0:
        return ChromaticResult(0, 0, "empty", 0, 0, [])
    clique = greedy_clique(graph)
    lb = max(len(clique), 1)
    source = "edge-load clique" if graph.seed_clique and len(graph.seed_clique) >= lb else "greedy clique"
    best_col = dsatur_coloring(graph)
    best = max(best_col) + 1
    result = ChromaticResult(best, lb, source, best, 0, best_col)
    if best == lb:
        return result

    adj = graph.adj
    nbrs = [[u for u in range(n) if adj[v] >> u & 1] for v in range(n)]
    degree = [len(x) for x in nbrs]
    color = [-1] * n
    count = [[0] * n for _ in range(n)]
    sat = [0] * n
    nodes = 0

    # colour the seed clique first: fixes a symmetry and costs nothing
    forced = clique if len(clique) == lb else []

    def paint(v, c, sign):
        for u in nbrs[v]:
            cnt = count[u]
            cnt[c] += sign
            if sign > 0 and cnt[c] == 1:
                sat[u] |= 1 << c
            elif sign < 0 and cnt[c] == 0:
                sat[u] &= ~(1 << c)
        color[v] = c if sign > 0 else -1

    for c, v in enumerate(forced):
        paint(v, c, 1)

    def search(done: int, k: int) -> bool:
        nonlocal best, nodes
        nodes += 1
        if node_limit is not None and nodes > node_limit:
            raise BudgetError(f"search exceeded {node_limit} nodes")
        if done == n:
            best = k
            result.coloring = color[:]
            return best <= lb
        v = -1
        key = (-1, -1)
        for u in range(n):
            if color[u] < 0:
                ku = (sat[u].bit_count(), degree[u])
                if ku > key:
                    key, v = ku, u
        for c in range(k):
            if not sat[v] >> c & 1:
                paint(v, c, 1)
                stop = search(done + 1, k)
                paint(v, c, -1)
                if stop:
                    return True
                if k >= best:
                    return False
        if k + 1 < best:
            paint(v, k, 1)
            stop = search(done + 1, k + 1)
            paint(v, k, -1)
            return stop
        return False

    search(len(forced), len(forced))
    result.value = best
    result.nodes = nodes
    return result


def exact_chromatic(graph: ConflictGraph, budget: int = 60, node_limit: int | None = None) -> int:
    return solve_chromatic(graph, budget, node_limit).value


def phi_small_even_cycle_by_search(m: int) -> int:
    """Minimum chromatic number over all 2^m antipodal routings of C_2m, m in 2..4."""
    if not 2 <= m <= 4:
        raise BudgetError("exhaustive tie search is limited to C_4, C_6 and C_8")
    best = None
    for flips in itertools.product((0, 1), repeat=m):
        starts = [j + m * f for j, f in enumerate(flips)]
        chi = exact_chromatic(conflict_graph(shortest_system_even_cycle(2 * m, starts)))
        best = chi if best is None else min(best, chi)
    return best
