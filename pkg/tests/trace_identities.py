"""Closed-form predictions for IP's round-by-round state on C_(2m+1).

Each check returns a list of mismatches; empty means the identity holds.
Bands are compared mod 2m+1 with zero-width bands dropped.
"""

from math import comb

from wdmpack.packing import intelligent_packing


def _norm(n, bands):
    return {(s % n, t % n) for s, t in bands if (t - s) % n}


class Trace:
    def __init__(self, m):
        self.m = m
        self.n = 2 * m + 1
        self.assignment, self.rt = intelligent_packing(self.n)
        self.sys = self.assignment.system

    def wl(self, a, b):
        n = self.n
        return self.assignment[self.sys.route_id_for_pair(a % n, b % n)]

    def idle(self, length, k):
        return {(s, t) for s, t in self.rt.idle(length, k) if s != t}


def long_round_wavelengths(tr):
    m, out = tr.m, []
    for l in range(-(-m // 2) + 1, m + 1):
        for i in range(2 * m + 1):
            want = m * (m - l) + i + 1 if i <= 2 * m - l else m * (m - l) + i - m
            if tr.wl(i, i + l) != want:
                out.append((l, i, tr.wl(i, i + l), want))
    return out


def long_round_top(tr):
    m = tr.m
    return [(l, tr.rt.T(l)) for l in range(-(-m // 2) + 1, m + 1) if tr.rt.T(l) != (m + 1) * (m - l + 1)]


def long_round_idle(tr):
    m, n, out = tr.m, tr.n, []
    for l in range(-(-m // 2) + 1, m + 1):
        for i in range(m):
            tail = m + i if i <= m - l - 1 else m + i + 1
            want = _norm(n, {(i - m + l, i), (l + i, tail)})
            got = tr.idle(l, m * (m - l) + i + 1)
            if got != want:
                out.append((l, i, got, want))
    return out


def long_round_frozen(tr):
    m, out = tr.m, []
    for l in range(-(-m // 2) + 1, m):
        for k in range(1, m * (m - l) + 1):
            if tr.idle(l, k) != tr.idle(l + 1, k):
                out.append((l, k))
    return out


def middle_round_even(tr):
    """Returns mismatches per sub-identity for even m, round l = m/2."""
    m, n = tr.m, tr.n
    h, s = m // 2, m * m // 2
    out = {"new": [], "reused": [], "idle_none": [], "idle_one": [], "top": []}
    for i in range(h):
        for a, b in ((i, h + i), (h + i, m + i), (3 * h + 1 + i, i)):
            if tr.wl(a, b) != s + 1 + i:
                out["new"].append((i, a, b, tr.wl(a, b)))
        if tr.idle(h, s + 1 + i):
            out["idle_none"].append(i)
    for i in range(h + 1):
        if tr.wl(m + i, 3 * h + i) != s - h + i:
            out["reused"].append((i, tr.wl(m + i, 3 * h + i)))
        want = _norm(n, {(i, h - 1 + i)})
        if tr.idle(h, s - h + i) != want:
            out["idle_one"].append((i, tr.idle(h, s - h + i), want))
    if tr.rt.T(h) != comb(m + 1, 2):
        out["top"].append(tr.rt.T(h))
    return out


def middle_round_odd(tr, second_band_offset=3):
    """Mismatches for odd m, round l = (m+1)/2.

    The second idle band on the newly opened wavelengths starts at
    ``i + (3m + second_band_offset)/2``.
    """
    m, n = tr.m, tr.n
    l = (m + 1) // 2
    out = {"new": [], "reused": [], "idle_two": [], "idle_one": [], "top": []}
    for i in range((m - 3) // 2 + 1):
        if tr.wl(i, i + l) != (m * m - m) // 2 + i + 1:
            out["new"].append((i, tr.wl(i, i + l)))
        want = _norm(n, {(i + l, i + m), (i + (3 * m + second_band_offset) // 2, i)})
        got = tr.idle(l, (m * m - m) // 2 + i + 1)
        if got != want:
            out["idle_two"].append((i, got, want))
    for i in range((m - 1) // 2 + 1):
        for a, b in ((i + (m - 1) // 2, i + m), (i + m, i + (3 * m + 1) // 2), (i + (3 * m + 1) // 2, i)):
            if tr.wl(a, b) != (m * m + 1) // 2 + i:
                out["reused"].append((i, a, b, tr.wl(a, b)))
        want = _norm(n, {(i, i + (m - 1) // 2)})
        if tr.idle(l, (m * m + 1) // 2 + i) != want:
            out["idle_one"].append((i, tr.idle(l, (m * m + 1) // 2 + i), want))
    if tr.rt.T(l) != comb(m + 1, 2):
        out["top"].append(tr.rt.T(l))
    return out


def all_failures(m, second_band_offset=3):
    tr = Trace(m)
    fails = {
        "long_wavelengths": long_round_wavelengths(tr),
        "long_top": long_round_top(tr),
        "long_idle": long_round_idle(tr),
        "long_frozen": long_round_frozen(tr),
    }
    mid = middle_round_even(tr) if m % 2 == 0 else middle_round_odd(tr, second_band_offset)
    fails.update({f"middle_{k}": v for k, v in mid.items()})
    return {k: v for k, v in fails.items() if v}
