"""Wavelength assignment: first-fit greedy and the IP, LFP and RP schemes.

Wavelengths are 1-based; 0 marks a route that has not been assigned yet.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import FormatError, OrderError, PackingError, ParityError
from .pathsys import PathRoute, PathSystem, shortest_system_odd_cycle


@dataclass(frozen=True)
class Assignment:
    system: PathSystem
    wavelength_of: tuple[int, ...]

    def __post_init__(self):
        if len(self.wavelength_of) != len(self.system):
            raise PackingError("one wavelength entry per route is required")

    @cached_property
    def total(self) -> int:
        return max(self.wavelength_of, default=0)

    @property
    def complete(self) -> bool:
        return all(self.wavelength_of)

    def __getitem__(self, route_id: int) -> int:
        return self.wavelength_of[route_id]

    def assign(self, route_id: int, wavelength: int) -> Assignment:
        w = list(self.wavelength_of)
        w[route_id] = wavelength
        return Assignment(self.system, tuple(w))

    def classes(self) -> dict[int, list[int]]:
        """Route ids grouped by wavelength."""
        out: dict[int, list[int]] = {}
        for rid, k in enumerate(self.wavelength_of):
            if k:
                out.setdefault(k, []).append(rid)
        return dict(sorted(out.items()))

    def gp_array(self) -> list[list[int | None]]:
        """Symmetric node-by-node table of wavelengths; None on the diagonal."""
        if not self.system.is_all_pairs():
            raise PackingError("the GP array needs exactly one route per node pair")
        n = self.system.topology.node_count
        gp: list[list[int | None]] = [[None] * n for _ in range(n)]
        for r in self.system.routes:
            a, b = r.pair
            gp[a][b] = gp[b][a] = self.wavelength_of[r.route_id]
        return gp


def empty_assignment(system: PathSystem) -> Assignment:
    return Assignment(system, (0,) * len(system))


def conflicts(r1: PathRoute, r2: PathRoute) -> bool:
    """True iff the two routes share at least one link."""
    return not set(r1.edges).isdisjoint(r2.edges)


def first_fit(route: PathRoute, partial: Assignment) -> int:
    """Least wavelength not used by any assigned route that shares a link with ``route``."""
    if partial.wavelength_of[route.route_id]:
        raise PackingError(f"route {route} is already assigned")
    mine = set(route.edges)
    taken = {
        k for other, k in zip(partial.system.routes, partial.wavelength_of)
        if k and not mine.isdisjoint(other.edges)
    }
    k = 1
    while k in taken:
        k += 1
    return k


def _check_order(system: PathSystem, order) -> np.ndarray:
    arr = np.asarray(order, dtype=np.int64)
    n = len(system)
    if arr.shape != (n,) or (n and (arr.min() < 0 or arr.max() >= n)) \
            or len(np.unique(arr)) != n:
        raise OrderError(f"order must be a permutation of the {n} route ids")
    return arr


def _first_fit_colors(system: PathSystem, order: np.ndarray) -> np.ndarray:
    masks, lo, hi = system.word_masks
    return _kernels.first_fit_in_order(masks, lo, hi, system.lengths, system.topology.edge_count, order)


def greedy_assign(system: PathSystem, order: Sequence[int]) -> Assignment:
    """First-fit every route, visiting route ids in ``order``."""
    arr = _check_order(system, order)
    return Assignment(system, tuple(_first_fit_colors(system, arr).tolist()))


# -- Intelligent Packing --------------------------------------------------------

def ip_order(system: PathSystem) -> list[int]:
    """Visiting order of IP on the shortest system of an odd cycle.

    Lengths run from m down to 1; within a round, node i contributes
    <i, i+l> and then <i-l, i>, each unless already visited.
    """
    n = system.topology.node_count
    m = n // 2
    seen: set[int] = set()
    order = []
    for length in range(m, 0, -1):
        for i in range(n):
            for a, b in ((i, (i + length) % n), ((i - length) % n, i)):
                rid = system.route_id_for_pair(a, b)
                if rid not in seen:
                    seen.add(rid)
                    order.append(rid)
    return order


def intelligent_packing(n: int) -> tuple[Assignment, RoundTrace]:
    if n % 2 == 0 or n < 3:
        raise ParityError(f"IP runs on odd cycles C_(2m+1), m >= 1; got n={n}")
    system = shortest_system_odd_cycle(n)
    assignment = greedy_assign(system, ip_order(system))
    return assignment, round_trace(assignment)


# -- round trace ---------------------------------------------------------------

@dataclass(frozen=True)
class Round:
    length: int
    top: int
    idle: dict[int, frozenset[tuple[int, int]]]


class RoundTrace:
    """State after each length round of a length-descending run on a cycle.

    ``T(l)`` is the maximal wavelength index used by routes of length >= l;
    ``idle(l, k)`` lists the maximal free arcs ``(s, t)`` on wavelength k,
    meaning edges {s,s+1}, ..., {t-1,t}. A wavelength idle on the whole ring
    reports the single band ``(0, 0)``. Rounds are computed on first access.
    """

    def __init__(self, assignment: Assignment):
        if assignment.system.topology.kind != "cycle":
            raise PackingError("round traces are defined on cycles")
        self.assignment = assignment
        self.node_count = assignment.system.topology.node_count

    @cached_property
    def rounds(self) -> dict[int, Round]:
        return _replay_rounds(self.assignment)

    def T(self, length: int) -> int:
        return self.rounds[length].top

    def idle(self, length: int, k: int) -> frozenset[tuple[int, int]]:
        return self.rounds[length].idle[k]


def idle_bands(n: int, occupied: int) -> frozenset[tuple[int, int]]:
    """Maximal free arcs of a cycle given the bitmask of occupied edges."""
    full = (1 << n) - 1
    free = ~occupied & full
    if free == full:
        return frozenset({(0, 0)})
    bands = []
    for e in range(n):
        if free >> e & 1 and not free >> ((e - 1) % n) & 1:
            t = e
            while free >> (t % n) & 1:
                t += 1
            bands.append((e, t % n))
    return frozenset(bands)


def round_trace(assignment: Assignment) -> RoundTrace:
    return RoundTrace(assignment)


def _replay_rounds(assignment: Assignment) -> dict[int, Round]:
    system = assignment.system
    n = system.topology.node_count
    by_length: dict[int, list[int]] = {}
    for r in system.routes:
        by_length.setdefault(r.length, []).append(r.route_id)
    occ: dict[int, int] = {}
    bands: dict[int, frozenset] = {}
    rounds = {}
    top = 0
    for length in range(max(by_length, default=0), 0, -1):
        touched = set()
        for rid in by_length.get(length, ()):
            k = assignment.wavelength_of[rid]
            if not k:
                continue
            occ[k] = occ.get(k, 0) | system.bitmasks[rid]
            touched.add(k)
            top = max(top, k)
        for k in touched:
            bands[k] = idle_bands(n, occ[k])
        idle = {k: bands[k] if k in bands else idle_bands(n, 0) for k in range(1, top + 1)}
        rounds[length] = Round(length, top, idle)
    return rounds


# -- LFP and RP ---------------------------------------------------------------

def lfp_order(system: PathSystem, rng, within_class_order: Sequence[int] | None = None) -> np.ndarray:
    """Route ids by strictly descending length; ties by ``within_class_order`` or at random."""
    n = len(system)
    if within_class_order is None:
        keys = np.random.default_rng(rng).random(n)
    else:
        keys = np.empty(n, dtype=np.int64)
        keys[_check_order(system, within_class_order)] = np.arange(n)
    return np.lexsort((keys, -system.lengths)) if n else np.zeros(0, dtype=np.int64)


def length_first_packing(system: PathSystem, seed=None,
                         within_class_order: Sequence[int] | None = None) -> Assignment:
    """Length First Packing: longest routes first, random order inside a length class."""
    order = lfp_order(system, seed, within_class_order)
    return Assignment(system, tuple(_first_fit_colors(system, order).tolist()))


def rp_colors(system: PathSystem, rng, redraw_per_color: bool = False) -> np.ndarray:
    rng = np.random.default_rng(rng)
    masks, lo, hi = system.word_masks
    if not redraw_per_color:
        return _kernels.color_by_color(masks, lo, hi, rng.permutation(len(system)))
    colors = np.zeros(len(system), dtype=np.int64)
    pool = np.arange(len(system), dtype=np.int64)
    k = 0
    while pool.size:
        k += 1
        pool = rng.permutation(pool)
        pool = pool[:_kernels.saturate(masks, lo, hi, pool, colors, k)]
    return colors


def random_packing(system: PathSystem, seed=None, redraw_per_color: bool = False) -> Assignment:
    """Random Packing: saturate wavelength 1, then 2, ... with randomly drawn routes.

    Draws come from one random ranking of the routes, so the outcome equals
    first-fit in that ranking. With ``redraw_per_color`` every wavelength
    draws a fresh random order over the routes still unassigned.
    """
    return Assignment(system, tuple(rp_colors(system, seed, redraw_per_color).tolist()))


# -- verification ---------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    violations: tuple[tuple[int, int], ...]
    unassigned: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.violations and not self.unassigned

    def __bool__(self):
        return self.ok


def verify(assignment: Assignment) -> Verdict:
    """Report every pair of routes that share a link and a wavelength.

    A wavelength class is clean iff the popcount of the OR of its edge
    bitmaps equals the sum of their popcounts; only dirty classes are
    searched pairwise.
    """
    system = assignment.system
    colors = np.asarray(assignment.wavelength_of, dtype=np.int64)
    unassigned = tuple(np.flatnonzero(colors == 0).tolist())
    idx = np.flatnonzero(colors)
    violations: list[tuple[int, int]] = []
    if idx.size:
        masks = system.word_masks[0]
        idx = idx[np.argsort(colors[idx], kind="stable")]
        cls = colors[idx]
        heads = np.flatnonzero(np.r_[True, cls[1:] != cls[:-1]])
        sorted_masks = masks[idx]
        union = np.bitwise_or.reduceat(sorted_masks, heads, axis=0)
        used = np.add.reduceat(np.bitwise_count(sorted_masks).sum(axis=1, dtype=np.int64), heads)
        dirty = np.flatnonzero(np.bitwise_count(union).sum(axis=1, dtype=np.int64) != used)
        bounds = np.r_[heads, idx.size]
        for c in dirty:
            members = idx[bounds[c]:bounds[c + 1]].tolist()
            for i, x in enumerate(members):
                for y in members[i + 1:]:
                    if np.any(masks[x] & masks[y]):
                        violations.append((min(x, y), max(x, y)))
    return Verdict(tuple(sorted(violations)), unassigned)


# -- dumps ------------------------------------------------------------------------

CSV_HEADER = ("route_id", "a", "b", "length", "wavelength")


def format_assignment_csv(assignment: Assignment) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in assignment.system.routes:
        w.writerow((r.route_id, r.start, r.end, r.length, assignment.wavelength_of[r.route_id]))
    return buf.getvalue()


def parse_assignment_csv(text: str, system: PathSystem) -> Assignment:
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows and not text.strip():
        raise FormatError("empty assignment file")
    wl = [0] * len(system)
    for row in rows:
        try:
            rid = int(row["route_id"])
            k = int(row["wavelength"])
            a, b = int(row["a"]), int(row["b"])
        except (KeyError, TypeError, ValueError):
            raise FormatError(f"bad assignment row {row}") from None
        if not 0 <= rid < len(system):
            raise FormatError(f"route_id {rid} out of range")
        if system[rid].pair != (min(a, b), max(a, b)):
            raise FormatError(f"route {rid} joins {system[rid].pair}, file says {a}-{b}")
        wl[rid] = k
    return Assignment(system, tuple(wl))


def format_gp_array(assignment: Assignment) -> str:
    """One line per node, entries separated by single spaces, ``-`` on the diagonal."""
    rows = assignment.gp_array()
    return "".join(" ".join("-" if v is None else str(v) for v in row) + "\n" for row in rows)


def parse_gp_array(text: str) -> list[list[int | None]]:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    try:
        return [[None if tok == "-" else int(tok) for tok in row] for row in rows]
    except ValueError:
        raise FormatError("GP array entries must be integers or '-'") from None
