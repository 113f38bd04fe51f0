"""Compiled inner loops over uint64 edge bitmaps.

``masks[r]`` is route ``r``'s edge set split into 64-bit words and
``[lo[r], hi[r])`` the span of its nonzero words. Wavelengths are 1-based
in every returned array.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _fits(occ, masks, lo, hi, r):
    for w in range(lo[r], hi[r]):
        if occ[w] & masks[r, w]:
            return False
    return True


@njit(cache=True)
def _take(occ, masks, lo, hi, r):
    for w in range(lo[r], hi[r]):
        occ[w] |= masks[r, w]


@njit(cache=True)
def first_fit_in_order(masks, lo, hi, sizes, n_edges, order):
    """Give each route in ``order`` the least wavelength free on all its edges.

    ``sizes[r]`` is the edge count of route ``r``; a wavelength with fewer
    free edges is skipped without touching its bitmap. Free counts only
    shrink, so ``lowest[s]`` (first wavelength with >= s free edges) only
    moves forward.
    """
    n_routes, words = masks.shape
    occ = np.zeros((max(n_routes, 1), words), dtype=np.uint64)
    free = np.full(max(n_routes, 1), n_edges, dtype=np.int64)
    lowest = np.zeros(n_edges + 1, dtype=np.int64)
    colors = np.zeros(n_routes, dtype=np.int64)
    top = 0
    for r in order:
        need = sizes[r]
        k = lowest[need]
        while k < top and free[k] < need:
            k += 1
        lowest[need] = k
        while k < top and (free[k] < need or not _fits(occ[k], masks, lo, hi, r)):
            k += 1
        _take(occ[k], masks, lo, hi, r)
        free[k] -= need
        colors[r] = k + 1
        if k + 1 > top:
            top = k + 1
    return colors


@njit(cache=True)
def saturate(masks, lo, hi, pool, colors, k):
    """Scan ``pool`` once, putting every compatible route on wavelength ``k``.

    Rejected routes are compacted to the front of ``pool``; returns how many
    remain. Occupancy only grows, so a route rejected once stays rejected.
    """
    occ = np.zeros(masks.shape[1], dtype=np.uint64)
    keep = 0
    for p in range(pool.shape[0]):
        r = pool[p]
        if _fits(occ, masks, lo, hi, r):
            _take(occ, masks, lo, hi, r)
            colors[r] = k
        else:
            pool[keep] = r
            keep += 1
    return keep


@njit(cache=True)
def color_by_color(masks, lo, hi, ranking):
    """Saturate wavelengths 1, 2, ... drawing routes in one fixed random ranking."""
    pool = ranking.copy()
    colors = np.zeros(masks.shape[0], dtype=np.int64)
    size = pool.shape[0]
    k = 0
    while size > 0:
        k += 1
        size = saturate(masks, lo, hi, pool[:size], colors, k)
    return colors
