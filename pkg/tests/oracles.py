"""Independent reference implementations used as test oracles.

Each one is written for clarity over speed and shares no code with the
package beyond the carrier data structure.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from conic_carrier.carrier import WeightedCarrier
from conic_carrier.cones import ConeSpec

# -- bounded quotient by direct re-walking ------------------------------------


def _walk(carrier, p, word):
    acc = [Fraction(0)] * carrier.dim
    for a in word:
        acc = [u + v for u, v in zip(acc, carrier.g[p, a])]
        p = carrier.delta[p, a]
    return acc, p


def naive_residual(carrier, p, x, z):
    _, px = _walk(carrier, p, x)
    acc, end = _walk(carrier, px, z)
    return [u + t - s for u, t, s in zip(acc, carrier.tau[end], carrier.tau[px])]


def naive_words(alphabet, n):
    out = [()]
    layer = [()]
    for _ in range(n):
        layer = [w + (a,) for w in layer for a in alphabet]
        out.extend(layer)
    return out


def _sgn(v):
    return (v > 0) - (v < 0)


def naive_quotient(carrier, rays, horizon):
    """(raw blocks, stable blocks, negative count, evaluation count) as frozensets."""
    rays = [[Fraction(e) for e in r] for r in rays]
    pairs = [(x, z) for x in naive_words(carrier.alphabet, horizon) for z in naive_words(carrier.alphabet, horizon - len(x))]
    rows = {}
    negatives = evals = 0
    for p in carrier.states:
        row = []
        for x, z in pairs:
            res = naive_residual(carrier, p, x, z)
            for r in rays:
                v = sum(a * b for a, b in zip(r, res))
                evals += 1
                negatives += v < 0
                row.append(_sgn(v))
        rows[p] = tuple(row)
    raw = _group(carrier.states, lambda p: rows[p])
    stable = raw
    while True:
        label = {p: i for i, b in enumerate(stable) for p in b}
        nxt = _group(carrier.states, lambda p: (label[p],) + tuple(label[carrier.delta[p, a]] for a in carrier.alphabet))
        if len(nxt) == len(stable):
            break
        stable = nxt
    as_sets = lambda blocks: frozenset(frozenset(b) for b in blocks)
    return as_sets(raw), as_sets(stable), negatives, evals


def _group(states, key):
    groups = {}
    for s in states:
        groups.setdefault(key(s), []).append(s)
    return list(groups.values())


# -- Fourier-Motzkin without pruning or substitution ---------------------------


def naive_feasible(rows, n):
    """rows: (coeffs, kind, rhs) with kind in {'>=', '>', '='}. Plain elimination."""
    work = []
    for c, kind, b in rows:
        c = [Fraction(e) for e in c]
        b = Fraction(b)
        if kind == "=":
            work.append((c, False, b))
            work.append(([-e for e in c], False, -b))
        else:
            work.append((c, kind == ">", b))
    for j in range(n):
        pos = [r for r in work if r[0][j] > 0]
        neg = [r for r in work if r[0][j] < 0]
        rest = [r for r in work if r[0][j] == 0]
        for (cp, sp, bp), (cn, sn, bn) in itertools.product(pos, neg):
            lp, ln = -cn[j], cp[j]
            c = [lp * u + ln * v for u, v in zip(cp, cn)]
            rest.append((c, sp or sn, lp * bp + ln * bn))
        work = rest
    for _, strict, b in work:
        if (strict and not 0 > b) or (not strict and not 0 >= b):
            return False
    return True


# -- negative cycles by enumerating simple cycles ------------------------------


def has_negative_simple_cycle(graph):
    out = {}
    for p, a, q, c in graph.edges():
        out.setdefault(p, []).append((q, c))
    order = {s: i for i, s in enumerate(graph.states)}

    def dfs(start, node, cost, seen):
        for q, c in out.get(node, []):
            if q == start and cost + c < 0:
                return True
            if q not in seen and order[q] > order[start]:
                if dfs(start, q, cost + c, seen | {q}):
                    return True
        return False

    return any(dfs(s, s, Fraction(0), {s}) for s in graph.states)


# -- random instances ----------------------------------------------------------

WEDGE = ConeSpec.from_hrep([[-1, 1], [1, 1]])


def random_carrier(rng: random.Random, n=None, k=None, d=2, lo=-3, hi=3, with_tau=False, cone=WEDGE):
    n = n if n is not None else rng.randint(4, 8)
    k = k if k is not None else rng.randint(1, 3)
    states = [f"q{i}" for i in range(n)]
    letters = "abc"[:k]
    delta, g = {}, {}
    for i, p in enumerate(states):
        for j, a in enumerate(letters):
            delta[p, a] = states[(i + 1) % n] if j == 0 else rng.choice(states)
            g[p, a] = tuple(rng.randint(lo, hi) for _ in range(d))
    tau = {p: tuple(rng.randint(lo, hi) for _ in range(d)) for p in states} if with_tau else {}
    if cone is not None and cone.dim != d:
        cone = None
    return WeightedCarrier(d, tuple(letters), tuple(states), states[0], delta, g, tau, cone)


def random_family(rng: random.Random, size, d=2, lo=-2, hi=2):
    out = []
    while len(out) < size:
        r = tuple(rng.randint(lo, hi) for _ in range(d))
        if any(r):
            out.append(r)
    return out
