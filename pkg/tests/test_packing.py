import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wdmpack import worked
from wdmpack.errors import FormatError, OrderError, PackingError, ParityError
from wdmpack.packing import (Assignment, conflicts, empty_assignment, first_fit, format_assignment_csv,
                             format_gp_array, greedy_assign, idle_bands, intelligent_packing, ip_order,
                             length_first_packing, lfp_order, parse_assignment_csv, parse_gp_array,
                             random_packing, rp_colors, verify)
from wdmpack.pathsys import (chain_system, route_demands, shortest_system_even_cycle,
                             shortest_system_odd_cycle)
from wdmpack.topology import cycle


def reference_first_fit(system, order):
    """Plain-set first-fit used as an oracle for the compiled kernel."""
    used: list[set] = []
    colors = [0] * len(system)
    for r in order:
        es = system.edge_sets[r]
        k = next((k for k, u in enumerate(used) if not (u & es)), len(used))
        if k == len(used):
            used.append(set())
        used[k] |= es
        colors[r] = k + 1
    return colors


def reference_rp(system, ranking):
    """Literal RP: fill wavelength 1 scanning the ranking, then 2 over the rest, ..."""
    left = list(ranking)
    colors = [0] * len(system)
    k = 0
    while left:
        k += 1
        used, rest = set(), []
        for r in left:
            es = system.edge_sets[r]
            if used & es:
                rest.append(r)
            else:
                used |= es
                colors[r] = k
        left = rest
    return colors


def brute_violations(a):
    sys = a.system
    return sorted((x, y) for x, y in itertools.combinations(range(len(sys)), 2)
                  if a[x] and a[x] == a[y] and sys.edge_sets[x] & sys.edge_sets[y])


# -- first-fit ---------------------------------------------------------------

def test_first_fit_single_route():
    sys = shortest_system_odd_cycle(5)
    part = empty_assignment(sys)
    r0 = sys.route_for_pair(0, 2)
    part = part.assign(r0.route_id, first_fit(r0, part))
    assert part[r0.route_id] == 1
    r1 = sys.route_for_pair(1, 3)
    assert conflicts(r0, r1)
    assert first_fit(r1, part) == 2
    r2 = sys.route_for_pair(3, 4)
    assert first_fit(r2, part) == 1
    with pytest.raises(PackingError):
        first_fit(r0, part)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 14), st.randoms(use_true_random=False))
def test_kernel_matches_reference(n, rnd):
    sys = shortest_system_even_cycle(n, "random", seed=rnd.randrange(2**32)) if n % 2 == 0 \
        else shortest_system_odd_cycle(n)
    order = list(range(len(sys)))
    rnd.shuffle(order)
    assert list(greedy_assign(sys, order).wavelength_of) == reference_first_fit(sys, order)


def test_kernel_matches_reference_multiword():
    # more than 64 edges exercises the multi-word masks
    sys = shortest_system_odd_cycle(131)
    order = np.random.default_rng(0).permutation(len(sys))
    assert list(greedy_assign(sys, order).wavelength_of) == reference_first_fit(sys, order)


def test_greedy_order_validation():
    sys = shortest_system_odd_cycle(5)
    for bad in ([0, 1], [0] * 10, list(range(1, 11))):
        with pytest.raises(OrderError):
            greedy_assign(sys, bad)


# -- IP -------------------------------------------------------------------------

def test_ip_first_round_order():
    sys = shortest_system_odd_cycle(11)
    first = [str(sys[r]) for r in ip_order(sys)[:11]]
    assert first == ["<0,5>", "<6,0>", "<1,6>", "<7,1>", "<2,7>", "<8,2>", "<3,8>", "<9,3>",
                     "<4,9>", "<10,4>", "<5,10>"]
    second = [str(sys[r]) for r in ip_order(sys)[11:22]]
    assert second == ["<0,4>", "<7,0>", "<1,5>", "<8,1>", "<2,6>", "<9,2>", "<3,7>", "<10,3>",
                      "<4,8>", "<5,9>", "<6,10>"]


def test_ip_c11_gp_array_golden():
    a, _ = intelligent_packing(11)
    got = a.gp_array()
    assert [tuple(row) for row in got] == list(worked.C11_GP_ARRAY)
    assert format_gp_array(a).splitlines()[0] == "- 7 13 11 6 1 1 7 13 11 6"
    assert parse_gp_array(format_gp_array(a)) == got


def test_ip_c11_round_states():
    _, tr = intelligent_packing(11)
    n = 11
    assert tr.T(5) == 6
    for k in range(1, 6):
        assert tr.idle(5, k) == {((k + 4) % n, (k + 5) % n)}
    assert tr.idle(5, 6) == {(10, 5)}
    assert tr.T(4) == 12
    for k in range(1, 6):
        assert tr.idle(4, k) == tr.idle(5, k)
    assert tr.idle(4, 6) == {(4, 5), (10, 0)}
    for k in range(7, 11):
        assert tr.idle(4, k) == {((k + 4) % n, (k + 5) % n), ((k - 2) % n, k % n)}
    for k in (11, 12):
        assert tr.idle(4, k) == {((k - 2) % n, (k + 5) % n)}
    assert tr.T(1) == 15


@pytest.mark.parametrize("n", [3, 5, 7, 9, 13, 25, 51])
def test_ip_total_and_valid(n):
    a, _ = intelligent_packing(n)
    m = n // 2
    assert a.total == comb(m + 1, 2)
    assert verify(a).ok


def test_ip_rejects_even():
    with pytest.raises(ParityError):
        intelligent_packing(10)
    with pytest.raises(ParityError):
        intelligent_packing(1)


def test_idle_bands_edge_cases():
    assert idle_bands(5, 0) == {(0, 0)}
    assert idle_bands(5, 0b11111) == frozenset()
    assert idle_bands(5, 0b00110) == {(3, 1)}
    assert idle_bands(6, 0b010010) == {(2, 4), (5, 1)}


# -- LFP / RP -------------------------------------------------------------------

def test_lfp_order_is_length_descending():
    sys = shortest_system_even_cycle(12, "random", seed=2)
    order = lfp_order(sys, 5)
    lengths = sys.lengths[order]
    assert np.all(np.diff(lengths) <= 0)
    assert sorted(order.tolist()) == list(range(len(sys)))


def test_lfp_within_class_order():
    sys = chain_system(4)
    fixed = list(range(len(sys)))[::-1]
    order = lfp_order(sys, None, fixed)
    for L in (3, 2, 1):
        ids = [r for r in order if sys.lengths[r] == L]
        assert ids == sorted(ids, reverse=True)


def test_lfp_deterministic_under_seed():
    sys = shortest_system_even_cycle(20, "random", seed=1)
    assert length_first_packing(sys, 9) == length_first_packing(sys, 9)


def test_lfp_odd_c5_is_optimal():
    sys = shortest_system_odd_cycle(5)
    assert {length_first_packing(sys, s).total for s in range(30)} == {3}


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 12), st.integers(0, 2**32 - 1))
def test_rp_matches_literal_loop(n, seed):
    sys = shortest_system_even_cycle(n, "random", seed=seed) if n % 2 == 0 else shortest_system_odd_cycle(n)
    ranking = np.random.default_rng(seed).permutation(len(sys))
    literal = reference_rp(sys, ranking)
    assert literal == reference_first_fit(sys, ranking)
    assert rp_colors(sys, seed).tolist() == literal


def test_rp_redraw_valid():
    sys = shortest_system_even_cycle(16, "random", seed=0)
    for s in range(10):
        a = random_packing(sys, s, redraw_per_color=True)
        assert verify(a).ok and a.complete


# -- verify -----------------------------------------------------------------------

def test_verify_finds_planted_conflicts():
    a, _ = intelligent_packing(11)
    sys = a.system
    x, y = sys.route_id_for_pair(0, 1), sys.route_id_for_pair(0, 2)
    bad = a.assign(x, a[y])
    v = verify(bad)
    assert not v.ok
    assert list(v.violations) == brute_violations(bad)


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 10), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_verify_agrees_with_brute_force(n, k, seed):
    sys = shortest_system_even_cycle(n, "random", seed=seed) if n % 2 == 0 else shortest_system_odd_cycle(n)
    rng = np.random.default_rng(seed)
    a = Assignment(sys, tuple(rng.integers(0, k + 1, len(sys)).tolist()))
    v = verify(a)
    assert list(v.violations) == brute_violations(a)
    assert list(v.unassigned) == [r for r in range(len(sys)) if a[r] == 0]


def test_worked_examples():
    c4 = worked.c4_nonshortest()
    assert verify(c4).ok and c4.total == 3
    assert c4.system[0].length == 3

    sys, order = worked.d6_bad_order()
    a = greedy_assign(sys, order)
    assert [a[r] for r in order] == list(worked.D6_BAD_WAVELENGTHS)
    assert a.total == 10


# -- formats ---------------------------------------------------------------------

def test_csv_round_trip():
    sys = route_demands(cycle(8), [(0, 4), (0, 4), (1, 2)], "random", seed=3)
    a = length_first_packing(sys, 1)
    assert parse_assignment_csv(format_assignment_csv(a), sys) == a


def test_csv_errors():
    sys = shortest_system_odd_cycle(5)
    with pytest.raises(FormatError):
        parse_assignment_csv("", sys)
    with pytest.raises(FormatError):
        parse_assignment_csv("route_id,a,b,length,wavelength\n0,3,4,1,1\n", sys)
    with pytest.raises(FormatError):
        parse_assignment_csv("route_id,a,b,length,wavelength\n99,0,1,1,1\n", sys)


def test_gp_array_needs_all_pairs():
    sys = route_demands(cycle(5), [(0, 1)])
    with pytest.raises(PackingError):
        greedy_assign(sys, [0]).gp_array()
