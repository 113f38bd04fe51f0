"""Explicit optimal wavelength assignments built from rotated full packings.

Arcs are ``(a, b)`` tuples meaning the clockwise route from ``a`` to ``b``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DivisibilityError, InvalidSizeError, LengthError
from .packing import Assignment
from .pathsys import PathSystem, shortest_system_even_cycle
from .topology import Topology, cycle

Arc = tuple[int, int]


@dataclass(frozen=True)
class PackingPartition:
    """Route sets on a cycle, one per wavelength, each meant to be edge-disjoint."""
    host: Topology
    packings: tuple[tuple[Arc, ...], ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.labels and len(self.labels) != len(self.packings):
            raise ValueError("one label per packing")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"W_{k + 1}" for k in range(len(self.packings))))

    def __len__(self):
        return len(self.packings)

    def arcs(self) -> list[Arc]:
        return [arc for p in self.packings for arc in p]

    def listing(self) -> str:
        """One line per packing: ``label: <a,b> <c,d> ...``."""
        width = max((len(s) for s in self.labels), default=0)
        return "".join(f"{lab + ':':<{width + 1}} " + " ".join(f"<{a},{b}>" for a, b in p) + "\n"
                       for lab, p in zip(self.labels, self.packings))


def _edges(n: int, arc: Arc) -> list[int]:
    a, b = arc
    return [(a + j) % n for j in range((b - a) % n)]


def rotation_packings(n: int, lengths: Sequence[int]) -> PackingPartition:
    """All arcs with length in ``lengths`` on C_n, as sum(lengths) full packings.

    The base packing lays the lengths clockwise from node 0 in the given
    order, repeated until the ring is covered; packing ``r`` is the base
    rotated ``r`` steps clockwise.
    """
    xs = [int(x) for x in lengths]
    if not xs or min(xs) < 1:
        raise LengthError("lengths must be positive")
    if len(set(xs)) != len(xs):
        raise LengthError(f"repeated length in {xs} would produce repeated routes")
    if 2 * max(xs) >= n:
        raise LengthError(f"every length must be below n/2 = {n / 2}")
    m = sum(xs)
    if n % m:
        raise DivisibilityError(f"sum of lengths {m} does not divide {n}")
    base: list[Arc] = []
    p = 0
    for _ in range(n // m):
        for x in xs:
            base.append((p, (p + x) % n))
            p += x
    packings = tuple(tuple(((a + r) % n, (b + r) % n) for a, b in base) for r in range(m))
    return PackingPartition(cycle(n), packings, tuple(f"L{'-'.join(map(str, xs))}_{r}" for r in range(m)))


def ideal_even_partition(m: int) -> PackingPartition:
    """phi_even_cycle(m) packings covering the alternating shortest system of C_2m.

    Lengths ``{i, m-i}`` give rotation classes; on the ``{1, m-1}`` classes
    ``B_i`` the diametral arc of pair ``{i, i+m}`` replaces the two arcs it
    spans, and the displaced arcs regroup into the ``D`` packings. For even
    ``m`` length ``m/2`` forms its own rotation block.
    """
    if m < 2:
        raise InvalidSizeError(f"C_{2 * m} is not a simple cycle")
    n = 2 * m
    if m == 2:
        packings = [((0, 1), (1, 2), (2, 3), (3, 0)), ((0, 2),), ((3, 1),)]
        return PackingPartition(cycle(4), tuple(packings), ("L1_0", "D_0", "D_1"))

    packings: list[tuple[Arc, ...]] = []
    labels: list[str] = []
    removed: list[tuple[Arc, Arc]] = []
    b_block = rotation_packings(n, [1, m - 1])
    for i, b in enumerate(b_block.packings):
        if i % 2 == 0:
            out, keep, diam = b[:2], b[2:], (i, i + m)
        else:
            out, keep, diam = b[2:], b[:2], (i + m, i)
        removed.append(out)
        packings.append((diam, *keep) if i % 2 == 0 else (*keep, diam))
        labels.append(f"B_{i}")
    for i in range(2, (m + 1) // 2):
        block = rotation_packings(n, [i, m - i])
        packings += block.packings
        labels += block.labels
    if m % 2 == 0:
        block = rotation_packings(n, [m // 2])
        packings += block.packings
        labels += block.labels

    units = [(2 * i, 2 * i + 1) for i in range(m // 2)]
    for i in range(m // 2):
        d = [arc for arc in (*removed[2 * i], *removed[2 * i + 1]) if arc != units[i]]
        packings.append(tuple(d))
        labels.append(f"D_{i}")
    last = tuple(units) + (removed[m - 1] if m % 2 else ())
    packings.append(last)
    labels.append(f"D_{m // 2}")
    return PackingPartition(cycle(n), tuple(packings), tuple(labels))


def partition_assignment(partition: PackingPartition, system: PathSystem) -> Assignment:
    """Give every arc of packing ``k`` wavelength ``k + 1`` in ``system``."""
    n = system.topology.node_count
    wl = [0] * len(system)
    for k, packing in enumerate(partition.packings, start=1):
        for a, b in packing:
            route = system.route_for_pair(a, b)
            if route.start != a:
                raise LengthError(f"<{a},{b}> is not the system's route for {{{a},{b}}}")
            wl[route.route_id] = k
    if not all(wl) or n != partition.host.node_count:
        raise LengthError("partition does not cover the system")
    return Assignment(system, tuple(wl))


def ideal_even_assignment(m: int) -> Assignment:
    """A complete optimal assignment of the alternating shortest system of C_2m."""
    return partition_assignment(ideal_even_partition(m), shortest_system_even_cycle(2 * m))


# -- verification ---------------------------------------------------------------

@dataclass(frozen=True)
class PartitionReport:
    ok: bool
    diagnostics: tuple[str, ...]

    def __bool__(self):
        return self.ok


def _expected_arcs(expected) -> list[Arc]:
    if isinstance(expected, PathSystem):
        return [(r.start, r.end) for r in expected.routes]
    return [(int(a), int(b)) for a, b in expected]


def verify_partition(partition: PackingPartition, expected: PathSystem | Iterable[Arc],
                     require_full: bool = False) -> PartitionReport:
    """Check disjointness inside packings and exact cover of ``expected``."""
    n = partition.host.node_count
    notes: list[str] = []
    for lab, packing in zip(partition.labels, partition.packings):
        used: Counter = Counter()
        for arc in packing:
            a, b = arc
            if not (0 <= a < n and 0 <= b < n) or a == b:
                notes.append(f"{lab}: <{a},{b}> is not an arc of C_{n}")
                continue
            used.update(_edges(n, arc))
        clash = sorted(e for e, c in used.items() if c > 1)
        if clash:
            notes.append(f"{lab}: edges {clash} used more than once")
        if require_full and len(used) != n:
            notes.append(f"{lab}: covers {len(used)} of {n} edges")
    have = Counter(partition.arcs())
    want = Counter(_expected_arcs(expected))
    for arc, c in sorted(have.items()):
        if c > 1:
            where = [lab for lab, p in zip(partition.labels, partition.packings) if arc in p]
            notes.append(f"duplicate <{arc[0]},{arc[1]}> x{c} in {', '.join(where)}")
    for arc in sorted(want - have):
        notes.append(f"missing <{arc[0]},{arc[1]}>")
    for arc in sorted(set(have) - set(want)):
        notes.append(f"unexpected <{arc[0]},{arc[1]}>")
    return PartitionReport(not notes, tuple(notes))
