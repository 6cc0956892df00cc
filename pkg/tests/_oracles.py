"""Naive reference implementations used as test oracles.

Written with explicit loops and no shared helpers from the package beyond
plain data containers, so a bug in the vectorised code cannot hide here.
"""

import itertools
import math


def overlap(a0, a1, b0, b1):
    return max(0.0, min(a1, b1) - max(a0, b0))


def morrey(values, lower, upper, p, u, levels):
    """sup over doubled dyadic cubes meeting the box, cell by cell."""
    d = len(lower)
    shape = values.shape
    spacing = [(upper[a] - lower[a]) / shape[a] for a in range(d)]
    best = -1.0
    for j in levels:
        side = 2.0 ** -j
        ranges = []
        for a in range(d):
            # brute range, then keep cubes whose doubling meets the box
            m0 = math.floor(lower[a] / side) - 3
            m1 = math.ceil(upper[a] / side) + 3
            ranges.append([m for m in range(m0, m1 + 1)
                           if (m - 0.5) * side < upper[a] and (m + 1.5) * side > lower[a]])
        for m in itertools.product(*ranges):
            total = 0.0
            for idx in itertools.product(*[range(k) for k in shape]):
                w = 1.0
                for a in range(d):
                    c0 = lower[a] + idx[a] * spacing[a]
                    w *= overlap(c0, c0 + spacing[a], (m[a] - 0.5) * side, (m[a] + 1.5) * side)
                    if w == 0.0:
                        break
                if w:
                    total += w * abs(values[idx]) ** p
            val = (2 * side) ** (d * (1 / u - 1 / p)) * total ** (1 / p)
            best = max(best, val)
    return best


def shifts(t, spacing, h_per_axis):
    d = len(spacing)
    mult = [max(1, round(2 * t / (h_per_axis * h))) for h in spacing]
    reach = [int(t / (mult[a] * spacing[a]) * (1 + 1e-12)) for a in range(d)]
    out = []
    for k in itertools.product(*[range(-r, r + 1) for r in reach]):
        if sum((k[a] * mult[a] * spacing[a]) ** 2 for a in range(d)) <= t * t * (1 + 1e-12):
            out.append(tuple(k[a] * mult[a] for a in range(d)))
    return out


def nth_difference(values, idx, k, N):
    shape = values.shape
    total = 0.0
    for l in range(N + 1):
        c = (-1) ** (N - l) * math.comb(N, l)
        pos = tuple(i + l * s for i, s in zip(idx, k))
        if all(0 <= pp < n for pp, n in zip(pos, shape)):
            total += c * values[pos]
    return total


def unit_ball(d):
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def local_average(values, spacing, t, N, v, h_per_axis):
    """(t^-d int_{|h|<t} |Delta_h^N f|^v dh)^(1/v) at every sample, loop by loop."""
    import numpy as np
    d = values.ndim
    ks = shifts(t, spacing, h_per_axis)
    out = np.zeros(values.shape)
    for idx in itertools.product(*[range(n) for n in values.shape]):
        if v == math.inf:
            out[idx] = max(abs(nth_difference(values, idx, k, N)) for k in ks)
        else:
            acc = sum(abs(nth_difference(values, idx, k, N)) ** v for k in ks)
            out[idx] = (unit_ball(d) * acc / len(ks)) ** (1 / v)
    return out


def t_nodes(t_min, t_max, count):
    r = (t_max / t_min) ** (1 / count)
    edges = [t_min * r ** i for i in range(count + 1)]
    edges[-1] = t_max
    return ([math.sqrt(a * b) for a, b in zip(edges, edges[1:])],
            [math.log(b / a) for a, b in zip(edges, edges[1:])])


def difference_norm(space, values, lower, upper, s, p, u, q, v, N, t_min, t_max, t_count,
                    h_per_axis, levels):
    import numpy as np
    spacing = [(upper[a] - lower[a]) / values.shape[a] for a in range(values.ndim)]
    base = morrey(values, lower, upper, p, u, levels)
    nodes, weights = t_nodes(t_min, t_max, t_count)
    fields = [local_average(values, spacing, t, N, v, h_per_axis) for t in nodes]
    if space == "besov":
        terms = [t ** -s * morrey(f, lower, upper, p, u, levels) for t, f in zip(nodes, fields)]
        if q == math.inf:
            diff = max(terms)
        else:
            diff = sum(w * a ** q for w, a in zip(weights, terms)) ** (1 / q)
    else:
        if q == math.inf:
            inner = np.max([t ** -s * f for t, f in zip(nodes, fields)], axis=0)
        else:
            inner = sum(w * (t ** -s * f) ** q for t, w, f in zip(nodes, weights, fields)) ** (1 / q)
        diff = morrey(inner, lower, upper, p, u, levels)
    return base + diff
