"""numba kernels.  Each function returns exactly what its ``_numpy`` twin returns."""
import numpy as np
from numba import njit


@njit(cache=True)
def _coboundary(table, identity, degree, normalized):
    g = table.shape[0]
    pos = np.full(g, -1, dtype=np.int64)
    elems = np.empty(g, dtype=np.int64)
    base = 0
    for x in range(g):
        if normalized and x == identity:
            continue
        pos[x] = base
        elems[base] = x
        base += 1
    n = degree
    nrows = base ** (n + 1)
    cap = nrows * (n + 2)
    rows = np.empty(cap, dtype=np.int64)
    cols = np.empty(cap, dtype=np.int64)
    vals = np.empty(cap, dtype=np.int64)
    tup = np.empty(n + 1, dtype=np.int64)
    k = 0
    for row in range(nrows):
        code = row
        for i in range(n, -1, -1):
            tup[i] = elems[code % base]
            code //= base
        # face 0: drop the first entry
        c = 0
        for i in range(1, n + 1):
            c = c * base + pos[tup[i]]
        rows[k] = row
        cols[k] = c
        vals[k] = 1
        k += 1
        # inner faces: merge neighbours i-1, i
        for f in range(1, n + 1):
            prod = table[tup[f - 1], tup[f]]
            if normalized and prod == identity:
                continue
            c = 0
            for i in range(n + 1):
                if i == f - 1:
                    c = c * base + pos[prod]
                elif i != f:
                    c = c * base + pos[tup[i]]
            rows[k] = row
            cols[k] = c
            vals[k] = -1 if f % 2 else 1
            k += 1
        # last face: drop the final entry
        c = 0
        for i in range(n):
            c = c * base + pos[tup[i]]
        rows[k] = row
        cols[k] = c
        vals[k] = -1 if (n + 1) % 2 else 1
        k += 1
    return rows[:k], cols[:k], vals[:k]


def coboundary_coo(table, identity, degree, normalized):
    """COO triplets of the bar coboundary from degree ``degree`` cochains.

    Cells are tuples of group elements (non-identity ones when ``normalized``)
    coded in mixed radix, most significant entry first.  Duplicates are not
    merged.
    """
    return _coboundary(np.ascontiguousarray(table, dtype=np.int64), int(identity), int(degree), bool(normalized))


@njit(cache=True)
def _powmod(b, e, m):
    r = 1
    b %= m
    while e > 0:
        if e & 1:
            r = r * b % m
        b = b * b % m
        e >>= 1
    return r


@njit(cache=True)
def _invmod(a, m):
    r0, r1, s0, s1 = m, a % m, 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    return s0 % m


@njit(cache=True)
def _rank_mod_p(a, p):
    m, n = a.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, n):
                a[r, j], a[piv, j] = a[piv, j], a[r, j]
        inv = _powmod(a[r, c], p - 2, p)
        for j in range(c, n):
            a[r, j] = a[r, j] * inv % p
        for i in range(r + 1, m):
            f = a[i, c]
            if f:
                for j in range(c, n):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        r += 1
    return r


@njit(cache=True)
def _reduce(x, p, inv_p):
    y = x - np.floor(x * inv_p) * p
    if y >= p:
        y -= p
    elif y < 0:
        y += p
    return y


@njit(cache=True)
def _rank_mod_p_float(a, p):
    # Elimination in float64 with delayed reduction: row updates add at most
    # (p-1)**2 per step, so entries stay exact integers below 2**53 for
    # `budget` steps between full reductions of the trailing block.
    m, n = a.shape
    inv_p = 1.0 / p
    budget = int((2.0**53 - p) // ((p - 1.0) * (p - 1.0)))
    since = 0
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            x = _reduce(a[i, c], p, inv_p)
            a[i, c] = x
            if piv < 0 and x != 0.0:
                piv = i
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, n):
                a[r, j], a[piv, j] = a[piv, j], a[r, j]
        inv = float(_powmod(np.int64(a[r, c]), p - 2, p))
        for j in range(c, n):
            a[r, j] = _reduce(_reduce(a[r, j], p, inv_p) * inv, p, inv_p)
        if since >= budget:
            for i in range(r + 1, m):
                for j in range(c, n):
                    a[i, j] = _reduce(a[i, j], p, inv_p)
            since = 0
        for i in range(r + 1, m):
            f = a[i, c]
            if f != 0.0:
                g = p - f
                for j in range(c, n):
                    a[i, j] += g * a[r, j]
        since += 1
        r += 1
    return r


FLOAT_PRIME_LIMIT = 1 << 21


def rank_mod_p(a, p):
    """Rank of an integer matrix over GF(p), p < 2**31 prime."""
    a = np.array(a, dtype=np.int64) % p
    if p < FLOAT_PRIME_LIMIT:
        return int(_rank_mod_p_float(a.astype(np.float64), int(p)))
    return int(_rank_mod_p(a, int(p)))


@njit(cache=True)
def _local_valuations(a, p, k):
    q = 1
    for _ in range(k):
        q *= p
    m, n = a.shape
    out = np.empty(min(m, n), dtype=np.int64)
    r = 0
    while r < min(m, n):
        best = k
        bi = -1
        bj = -1
        for i in range(r, m):
            for j in range(r, n):
                x = a[i, j]
                if x == 0:
                    continue
                v = 0
                while x % p == 0:
                    x //= p
                    v += 1
                if v < best:
                    best, bi, bj = v, i, j
                    if v == 0:
                        break
            if best == 0:
                break
        if bi < 0:
            break
        if bi != r:
            for j in range(n):
                a[r, j], a[bi, j] = a[bi, j], a[r, j]
        if bj != r:
            for i in range(m):
                a[i, r], a[i, bj] = a[i, bj], a[i, r]
        pv = 1
        for _ in range(best):
            pv *= p
        uinv = _invmod(a[r, r] // pv, q)
        for i in range(r + 1, m):
            if a[i, r]:
                f = (a[i, r] // pv) * uinv % q
                for j in range(r, n):
                    a[i, j] = (a[i, j] - f * a[r, j] % q) % q
        for j in range(r + 1, n):
            a[r, j] = 0
        out[r] = best
        r += 1
    return out[:r]


def local_valuations(a, p, k):
    """p-adic valuations (< k) of the Smith diagonal of ``a`` over Z/p^k."""
    q = int(p) ** int(k)
    a = np.array(a, dtype=np.int64) % q
    return _local_valuations(a, int(p), int(k))
