"""Literal nested-loop twins for the vectorized implementations.

Each optimized path (chunked double sums, prefix-sum oscillation, cumsum
window averages, block-table paraproducts) is checked against a direct
transcription of its definition on a small grid.
"""

import numpy as np

from halfharmonic.dyadic import _SEPARATION, block, build_partition, maximal, pi1, pi3
from halfharmonic.norms import Region, bmo, gagliardo
from halfharmonic.spectral import make_grid, random_field

N = 64


def periodic_distance(a, b, L):
    d = abs(a - b) % L
    return min(d, L - d)


def test_gagliardo_matches_nested_loops():
    g = make_grid(N)
    f = random_field(g, 12, seed=3, mean_value=0.4)
    r1 = Region.interval(g, 1.0, 3.0)
    r2 = Region.ball(g, 0.5, 1.2)
    total = 0.0
    for i in np.nonzero(r1.mask)[0]:
        for j in np.nonzero(r2.mask)[0]:
            d = periodic_distance(g.x[i], g.x[j], g.L)
            if d < 0.5 * g.h:
                continue
            total += (f.values[i] - f.values[j]) ** 2 / d**2
    expected = g.h * np.sqrt(total)
    assert abs(gagliardo(f, r1, r2) - expected) <= 1e-12 * max(expected, 1.0)


def test_bmo_l2_matches_nested_loops():
    g = make_grid(N)
    f = random_field(g, 12, seed=4, mean_value=-0.2)
    best = 0.0
    w = 2
    while w <= N // 2:
        for start in range(N):
            arc = np.take(f.values, range(start, start + w), mode="wrap")
            best = max(best, float(np.mean((arc - arc.mean()) ** 2)))
        w *= 2
    assert abs(bmo(f, "L2") - np.sqrt(best)) <= 1e-12


def test_maximal_matches_nested_loops():
    g = make_grid(N)
    f = random_field(g, 12, seed=5, mean_value=0.1)
    a = np.abs(f.values)
    expected = np.zeros(N)
    for i in range(N):
        best = 0.0
        m = 1
        while m <= N // 2:
            window = np.take(a, range(i - m, i + m + 1), mode="wrap")
            avg = (window.sum() - 0.5 * (window[0] + window[-1])) / (2 * m)
            best = max(best, avg)
            m *= 2
        expected[i] = best
    np.testing.assert_allclose(maximal(f).values, expected, atol=1e-13)


def test_paraproduct_pieces_match_block_sums():
    g = make_grid(256)
    f = random_field(g, 90, seed=6)
    h = random_field(g, 90, seed=7)
    part = build_partition(g)
    bf = [block(f, j).values for j in range(part.j_max + 1)]
    bh = [block(h, j).values for j in range(part.j_max + 1)]
    lo = np.zeros(g.N)
    hi = np.zeros(g.N)
    for j in range(part.j_max + 1):
        for k in range(part.j_max + 1):
            if k <= j - _SEPARATION:
                lo += bf[j] * bh[k]
            elif abs(k - j) < _SEPARATION:
                hi += bf[j] * bh[k]
    np.testing.assert_allclose(pi1(f, h).values, lo, atol=1e-12)
    np.testing.assert_allclose(pi3(f, h).values, hi, atol=1e-12)
