"""Independent reference implementations used only by the tests.

Nothing here imports the algorithms under test; the oracles work from raw
tables with plain Python loops (and sympy for Smith forms).
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


# -- fusion data -------------------------------------------------------------------


def dense(data):
    n = len(data.simples)
    t = [[[0] * n for _ in range(n)] for _ in range(n)]
    for x, y, z, m in data.fusion:
        t[x][y][z] += m
    return t


def axiom_failures(data):
    """Set of broken axioms among unit, duality-symmetry, associativity."""
    t = dense(data)
    n, u, d = len(data.simples), data.unit, list(data.dual)
    out = set()
    for x in range(n):
        for y in range(n):
            want = int(x == y)
            if t[x][u][y] != want or t[x][y][u] != want:
                out.add("unit")
            if t[u][x][y] != int(y == d[x]):
                out.add("duality-symmetry")
            for z in range(n):
                if t[z][x][y] != t[d[z]][d[y]][d[x]]:
                    out.add("duality-symmetry")
    for x, y, v, z in itertools.product(range(n), repeat=4):
        lhs = sum(t[w][x][y] * t[z][w][v] for w in range(n))
        rhs = sum(t[w][y][v] * t[z][x][w] for w in range(n))
        if lhs != rhs:
            out.add("associativity")
            break
    return out


def product(t, v, w):
    n = len(v)
    return [sum(v[x] * w[y] * t[z][x][y] for x in range(n) for y in range(n)) for z in range(n)]


def closed_subsets(data):
    """All unit-containing subsets closed under products and duals (powerset scan)."""
    t = dense(data)
    n, u, d = len(data.simples), data.unit, data.dual
    others = [i for i in range(n) if i != u]
    out = []
    for k in range(len(others) + 1):
        for extra in itertools.combinations(others, k):
            s = {u, *extra}
            if any(d[x] not in s for x in s):
                continue
            if all(t[z][x][y] == 0 or z in s for x in s for y in s for z in range(n)):
                out.append(tuple(sorted(s)))
    return out


def brute_exact_pairs(data):
    """Ordered pairs of closed supports (A, C) of fusion data factoring every simple.

    Every simple of B must be hit by exactly one X (x) Y, each such product
    must be simple, A and C must meet only in the unit, and (Cartan being the
    identity throughout) P_B(X (x) Y) = P_A(X) P_C(Y) is checked on classes.
    """
    t = dense(data)
    n = len(data.simples)
    cart = np.asarray(data.cartan, dtype=int)
    subsets = closed_subsets(data)
    found = []
    for a in subsets:
        for c in subsets:
            if set(a) & set(c) != {data.unit}:
                continue
            hits = [0] * n
            ok = True
            for x in a:
                for y in c:
                    cls = [t[z][x][y] for z in range(n)]
                    if sum(cls) != 1:
                        ok = False
                        break
                    z = cls.index(1)
                    hits[z] += 1
                    px = [int(i == x) for i in range(n)]
                    py = [int(i == y) for i in range(n)]
                    if product(t, px, py) != list(cart[z]):
                        ok = False
                if not ok:
                    break
            if ok and all(h == 1 for h in hits):
                found.append((a, c))
    return found


# -- groups ------------------------------------------------------------------------


def brute_subgroups(table):
    """All subgroups of a small group by scanning subsets containing 0's identity."""
    n = len(table)
    e = next(i for i in range(n) if all(table[i][j] == j for j in range(n)))
    others = [i for i in range(n) if i != e]
    out = []
    for mask in range(1 << len(others)):
        s = {e} | {others[i] for i in range(len(others)) if mask >> i & 1}
        if all(table[a][b] in s for a in s for b in s):
            out.append(tuple(sorted(s)))
    return out


# -- cohomology ----------------------------------------------------------------------


def full_coboundary(table, n):
    """Integer matrix of d: C^n -> C^{n+1} on the full (non-normalized) bar complex."""
    order = len(table)
    cells_n = list(itertools.product(range(order), repeat=n))
    index = {c: i for i, c in enumerate(cells_n)}
    rows = []
    for cell in itertools.product(range(order), repeat=n + 1):
        row = [0] * len(cells_n)
        row[index[cell[1:]]] += 1
        for i in range(n):
            merged = cell[:i] + (table[cell[i]][cell[i + 1]],) + cell[i + 2 :]
            row[index[merged]] += (-1) ** (i + 1)
        row[index[cell[:n]]] += (-1) ** (n + 1)
        rows.append(row)
    return rows


def sympy_torsion(rows):
    """Invariant factors > 1 of an integer matrix, via sympy's Smith normal form."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    s = smith_normal_form(Matrix(rows), domain=ZZ)
    diag = [abs(int(s[i, i])) for i in range(min(s.shape))]
    return sorted(d for d in diag if d > 1)


def cyclic_omega_value(a, b, c, n):
    return Fraction(a * ((b + c) // n), n) % 1


def qz_cocycle_defect(table, omega):
    """Max over 4-tuples of the Q/Z 3-cocycle identity defect (0 means cocycle)."""
    order = len(table)
    bad = 0
    for a, b, c, d in itertools.product(range(order), repeat=4):
        v = (
            omega(b, c, d)
            - omega(table[a][b], c, d)
            + omega(a, table[b][c], d)
            - omega(a, b, table[c][d])
            + omega(a, b, c)
        ) % 1
        bad = max(bad, int(v != 0))
    return bad
