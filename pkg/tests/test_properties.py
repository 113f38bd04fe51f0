from hypothesis import given, settings, strategies as st

from wdmpack.bounds import lower_bound_load, max_edge_load, phi_cycle
from wdmpack.packing import greedy_assign, length_first_packing, random_packing, verify
from wdmpack.pathsys import route_demands, shortest_system_cycle
from wdmpack.topology import chain, cycle, general
from wdmpack.traffic import generate


@st.composite
def topologies(draw):
    kind = draw(st.sampled_from(["cycle", "chain", "general"]))
    n = draw(st.integers(3, 18))
    if kind == "cycle":
        return cycle(n)
    if kind == "chain":
        return chain(n)
    tree = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n))
    edges = {tuple(sorted(e)) for e in tree + extra if e[0] != e[1]}
    return general(n, sorted(edges))


@settings(max_examples=200, deadline=None)
@given(topologies(), st.sampled_from(["uniform", "full_random", "quasi_random"]),
       st.sampled_from(["lfp", "rp", "rp_redraw", "greedy"]), st.integers(0, 2**32 - 1))
def test_every_scheme_valid_and_above_load(topo, model, scheme, seed):
    system = route_demands(topo, generate(model, topo.node_count, seed).demands, "random", seed)
    if scheme == "lfp":
        a = length_first_packing(system, seed)
    elif scheme == "greedy":
        a = greedy_assign(system, list(range(len(system)))[::-1])
    else:
        a = random_packing(system, seed, redraw_per_color=scheme == "rp_redraw")
    assert verify(a).ok and a.complete
    assert a.total >= max_edge_load(system)
    assert a.total >= lower_bound_load(system)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 30), st.integers(0, 2**32 - 1))
def test_uniform_ring_schemes_never_beat_phi(n, seed):
    system = shortest_system_cycle(n, "random", seed)
    assert length_first_packing(system, seed).total >= phi_cycle(n)
    assert random_packing(system, seed).total >= phi_cycle(n)
