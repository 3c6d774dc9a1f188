"""Pure-numpy kernels.  Semantics are documented on the numba twins in ``_jit``."""
import numpy as np


def _cells(table, identity, normalized):
    g = table.shape[0]
    elems = np.array([x for x in range(g) if not (normalized and x == identity)], dtype=np.int64)
    pos = np.full(g, -1, dtype=np.int64)
    pos[elems] = np.arange(len(elems))
    return elems, pos


def coboundary_coo(table, identity, degree, normalized):
    table = np.asarray(table, dtype=np.int64)
    elems, pos = _cells(table, identity, normalized)
    base = len(elems)
    n = degree
    nrows = base ** (n + 1)
    if nrows == 0:
        e = np.zeros(0, dtype=np.int64)
        return e, e.copy(), e.copy()
    codes = np.arange(nrows, dtype=np.int64)
    powers = base ** np.arange(n, -1, -1, dtype=np.int64)
    digits = (codes[:, None] // powers[None, :]) % base  # [row, position]
    tup = elems[digits]
    weights = base ** np.arange(n - 1, -1, -1, dtype=np.int64)  # for n-tuples

    rows, cols, vals = [], [], []

    def encode(t):
        if n == 0:
            return np.zeros(t.shape[0], dtype=np.int64)
        return pos[t] @ weights

    rows.append(codes)
    cols.append(encode(tup[:, 1:]))
    vals.append(np.ones(nrows, dtype=np.int64))
    for i in range(1, n + 1):
        prod = table[tup[:, i - 1], tup[:, i]]
        merged = np.concatenate([tup[:, : i - 1], prod[:, None], tup[:, i + 1 :]], axis=1)
        keep = prod != identity if normalized else np.ones(nrows, dtype=bool)
        rows.append(codes[keep])
        cols.append(encode(merged[keep]))
        vals.append(np.full(int(keep.sum()), -1 if i % 2 else 1, dtype=np.int64))
    rows.append(codes)
    cols.append(encode(tup[:, :n]))
    vals.append(np.full(nrows, -1 if (n + 1) % 2 else 1, dtype=np.int64))
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)


def rank_mod_p(a, p):
    a = np.array(a, dtype=np.int64) % p
    # float64 is exact while p**2 * 2 < 2**53, and BLAS-free row updates are faster in it
    dtype = np.float64 if p < (1 << 24) else np.int64
    a = a.astype(dtype)
    m, n = a.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = (a[r, c:] * inv) % p
        rows = np.nonzero(a[r + 1 :, c])[0] + r + 1
        if len(rows):
            a[rows, c:] = (a[rows, c:] - np.outer(a[rows, c], a[r, c:]) % p) % p
        r += 1
    return r


def _valuation(x, p, k):
    v = np.zeros(x.shape, dtype=np.int64)
    v[x == 0] = k
    y = x.copy()
    live = x != 0
    while live.any():
        div = live & (y % p == 0)
        v[div] += 1
        y[div] //= p
        live = div
    return v


def local_valuations(a, p, k):
    q = p**k
    a = np.array(a, dtype=np.int64) % q
    m, n = a.shape
    out = []
    r = 0
    while r < min(m, n):
        sub = a[r:, r:]
        val = _valuation(sub, p, k)
        flat = int(np.argmin(val))
        v = int(val.flat[flat])
        if v >= k:
            break
        bi, bj = divmod(flat, n - r)
        bi += r
        bj += r
        if bi != r:
            a[[r, bi]] = a[[bi, r]]
        if bj != r:
            a[:, [r, bj]] = a[:, [bj, r]]
        pv = p**v
        unit = int(a[r, r]) // pv
        uinv = pow(unit, -1, q)
        f = ((a[r + 1 :, r] // pv) * uinv) % q
        a[r + 1 :, r:] = (a[r + 1 :, r:] - (f[:, None] * a[r, r:][None, :]) % q) % q
        a[r, r + 1 :] = 0
        out.append(v)
        r += 1
    return np.array(out, dtype=np.int64)
