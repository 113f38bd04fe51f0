"""Hand-worked instances used by ``wdmpack demo`` and as golden test data."""

from __future__ import annotations

from .packing import Assignment
from .pathsys import PathSystem, chain_system, system_from_routes
from .topology import cycle

# C_4 with one non-shortest route, <1,0>, and an optimal 3-wavelength assignment
C4_NONSHORTEST_PATHS = ((1, 2, 3, 0), (0, 1, 2), (3, 0), (1, 2), (3, 0, 1), (2, 3))
C4_NONSHORTEST_WAVELENGTHS = (1, 2, 2, 3, 3, 2)

# a first-fit visiting order on the chain D_6 that needs 10 wavelengths (optimum 9)
D6_BAD_ORDER = ((1, 2), (2, 3), (4, 5), (0, 4), (0, 5), (0, 2), (3, 4), (1, 5),
                (0, 1), (3, 5), (1, 4), (0, 3), (1, 3), (2, 4), (2, 5))
D6_BAD_WAVELENGTHS = (1, 1, 1, 2, 3, 4, 1, 5, 1, 4, 6, 7, 8, 9, 10)

# IP's global packing array on C_11; None on the diagonal
C11_GP_ARRAY = tuple(tuple(None if tok == "-" else int(tok) for tok in row.split()) for row in """\
- 7 13 11 6 1 1 7 13 11 6
7 - 8 14 12 7 2 2 8 14 12
13 8 - 9 15 13 8 3 3 9 15
11 14 9 - 10 11 14 9 4 4 10
6 12 15 10 - 6 12 15 10 5 5
1 7 13 11 6 - 1 7 13 11 6
1 2 8 14 12 1 - 2 8 14 12
7 2 3 9 15 7 2 - 3 9 15
13 8 3 4 10 13 8 3 - 4 10
11 14 9 4 5 11 14 9 4 - 5
6 12 15 10 5 6 12 15 10 5 -""".splitlines())

# C_18: the {1, 8} rotation classes and the regrouped packings of displaced arcs
C18_ROTATION_1_8 = (
    ((0, 1), (1, 9), (9, 10), (10, 0)),
    ((1, 2), (2, 10), (10, 11), (11, 1)),
    ((2, 3), (3, 11), (11, 12), (12, 2)),
    ((3, 4), (4, 12), (12, 13), (13, 3)),
    ((4, 5), (5, 13), (13, 14), (14, 4)),
    ((5, 6), (6, 14), (14, 15), (15, 5)),
    ((6, 7), (7, 15), (15, 16), (16, 6)),
    ((7, 8), (8, 16), (16, 17), (17, 7)),
    ((8, 9), (9, 17), (17, 0), (0, 8)),
)
C18_D = (
    ((1, 9), (10, 11), (11, 1)),
    ((3, 11), (12, 13), (13, 3)),
    ((5, 13), (14, 15), (15, 5)),
    ((7, 15), (16, 17), (17, 7)),
    ((0, 1), (2, 3), (4, 5), (6, 7), (8, 9), (9, 17)),
)
C18_DIAMETRAL = ((0, 9), (2, 11), (4, 13), (6, 15), (8, 17), (10, 1), (12, 3), (14, 5), (16, 7))


def c4_nonshortest() -> Assignment:
    system = system_from_routes(cycle(4), C4_NONSHORTEST_PATHS)
    return Assignment(system, C4_NONSHORTEST_WAVELENGTHS)


def d6_bad_order() -> tuple[PathSystem, list[int]]:
    system = chain_system(6)
    return system, [system.route_id_for_pair(a, b) for a, b in D6_BAD_ORDER]
