"""Shared helpers for the test suite."""

from fractions import Fraction

from fvx import BinaryPoint, Objective


def all_binary(n):
    return [BinaryPoint(n, b) for b in range(1 << n)]


def random_forbidden(rng, n, size):
    """A random set of `size` distinct binary points in dimension n."""
    codes = rng.sample(range(1 << n), size)
    return [BinaryPoint(n, b) for b in sorted(codes)]


def brute_min(c, points):
    """Exact minimum of c over explicit points; None when there are none."""
    best = None
    for p in points:
        coords = p.coords() if isinstance(p, BinaryPoint) else p.coords
        val = sum((Fraction(ci) * vi for ci, vi in zip(c, coords)), start=Fraction(0))
        if best is None or val < best:
            best = val
    return best


def random_objective(rng, n, lo=-20, hi=20):
    return Objective.of([rng.randint(lo, hi) for _ in range(n)])


def random_rational_objective(rng, n):
    return Objective.of([Fraction(rng.randint(-30, 30), rng.randint(1, 7))
                         for _ in range(n)])


def spanning_trees(num_nodes, edges):
    """All spanning trees of (num_nodes, edges) as BinaryPoints over edges."""
    m = len(edges)
    out = []
    for mask in range(1 << m):
        if bin(mask).count("1") != num_nodes - 1:
            continue
        parent = list(range(num_nodes))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        ok = True
        for e in range(m):
            if (mask >> e) & 1:
                ru, rv = find(edges[e][0]), find(edges[e][1])
                if ru == rv:
                    ok = False
                    break
                parent[ru] = rv
        if ok:
            out.append(BinaryPoint(m, mask))
    return out
