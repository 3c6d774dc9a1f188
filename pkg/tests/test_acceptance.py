"""One check per acceptance criterion; the terminal summary prints PASS/FAIL lines."""
import itertools
import math
import time
from functools import lru_cache

import numpy as np
import pytest

from conftest import DATA
from oracles import brute_exact_pairs
from tenfact.builders import deligne_product, fibonacci, rep_zp_char_p, taft_like, vec_of_group
from tenfact.cohomology import (
    bar_differential,
    bockstein,
    classify_pointed,
    cyclic_omega,
    h4_integral,
    is_trivial_class,
    restrict,
)
from tenfact.core import CategoryData, basis_vector, decompose_projective, gr_product, hom_from_projective, projective_class, restrict_category, validate
from tenfact.errors import NotProjectiveClass, SingularCartan, Unsupported
from tenfact.factor import (
    Embedding,
    check_exact_factorization,
    closed_supports,
    fpdim_ratio_check,
    load_embedding,
    search_exact_factorizations,
)
from tenfact.fpdim import fp_character, predicates, regular_class
from tenfact.groups import catalog, cyclic, subgroup_of, symmetric

CATALOG = catalog(24)
PHI = (1 + math.sqrt(5)) / 2


def criterion(number, title):
    return pytest.mark.criterion(number, title)


@lru_cache(maxsize=None)
def base_list():
    return tuple(
        [vec_of_group(g) for g in CATALOG.values()]
        + [rep_zp_char_p(p) for p in (2, 3, 5)]
        + [taft_like(n) for n in range(2, 7)]
    )


@lru_cache(maxsize=None)
def deligne_pairs(max_simples=60):
    base = base_list()
    return tuple(deligne_product(a, c) for a, c in itertools.product(base, base) if a.n * c.n <= max_simples)


def sub(b, support):
    s, incl = restrict_category(b, support)
    return Embedding(s, b, incl)


@lru_cache(maxsize=None)
def accepted_corpus():
    """Every accepted factorization: Deligne pairs, AUTO searches and shipped embeddings."""
    out = [check_exact_factorization(ea, ec) for _, ea, ec in deligne_pairs()]
    extra = [fibonacci(), vec_of_group(cyclic(2)), taft_like(2), rep_zp_char_p(3)]
    out += [check_exact_factorization(ea, ec) for a in extra for c in extra for _, ea, ec in [deligne_product(a, c)]]
    for g in CATALOG.values():
        out += list(search_exact_factorizations(vec_of_group(g)).verdicts)
    out += list(search_exact_factorizations(fibonacci()).verdicts)
    for a, c in [("s3_a3", "s3_t12"), ("rep2_vec3.a", "rep2_vec3.c")]:
        out.append(check_exact_factorization(load_embedding(DATA / f"{a}.emb.json"), load_embedding(DATA / f"{c}.emb.json")))
    return tuple(v for v in out if v.ok)


def _mutant(data, cell, value):
    t = data.tensor.copy()
    t[cell] = value
    return CategoryData.from_tensor(data.simples, data.unit, data.dual, t, cartan=data.cartan_matrix, dualD=data.dualD)


@criterion(1, "axiom suite: builders validate, mutations flagged >= 99%, < 60 s")
def test_criterion_1_axioms():
    t0 = time.perf_counter()
    base = base_list()
    assert all(validate(d).ok for d in base)
    products = deligne_pairs()
    assert len(products) > 500
    assert all(validate(b).ok for b, _, _ in products)

    rng = np.random.default_rng(20240601)
    flagged = total = 0
    corpus = list(base) + [products[i][0] for i in rng.choice(len(products), 8, replace=False)]
    for d in corpus:
        cells = list(itertools.product(range(d.n), repeat=3))
        if len(cells) > 300:
            cells = [cells[i] for i in rng.choice(len(cells), 300, replace=False)]
        for cell in cells:
            old = int(d.tensor[cell])
            for new in {old + 1, 0} - {old}:
                total += 1
                flagged += not validate(_mutant(d, cell, new)).ok
    rate = flagged / total
    elapsed = time.perf_counter() - t0
    print(f"mutations flagged {flagged}/{total} = {rate:.4%}; {elapsed:.1f} s")
    assert rate >= 0.99
    assert elapsed < 60


@criterion(2, "FPdim: Fibonacci, Vec(G), Rep(Z/p), Deligne multiplicativity, < 10 s")
def test_criterion_2_fpdim():
    t0 = time.perf_counter()
    assert abs(fp_character(fibonacci()).dims[1] - PHI) <= 1e-9
    for g in CATALOG.values():
        prof = fp_character(vec_of_group(g))
        assert prof.exact and prof.cat_dim == g.order
    for p in (2, 3, 5):
        prof = fp_character(rep_zp_char_p(p))
        assert prof.exact and prof.cat_dim == p
    profiles = {id(d): fp_character(d) for d in base_list()}
    base = base_list()
    for a, c in itertools.product(base, base):
        if a.n * c.n > 60:
            continue
        b, _, _ = deligne_product(a, c)
        pa, pc, pb = profiles[id(a)], profiles[id(c)], fp_character(b)
        assert np.abs(pb.dims - np.outer(pa.dims, pc.dims).ravel()).max() <= 1e-9
        assert abs(pb.cat_dim - pa.cat_dim * pc.cat_dim) <= 1e-9 * pb.cat_dim
    elapsed = time.perf_counter() - t0
    print(f"{elapsed:.1f} s")
    assert elapsed < 10


def _regular_identity(v):
    a, c, b = v.a.source, v.c.source, v.a.target
    ra = v.a.push(regular_class(a, fp_character(a)))
    rc = v.c.push(regular_class(c, fp_character(c)))
    rb = regular_class(b, fp_character(b))
    lhs = gr_product(b, ra, rc)
    return np.abs(lhs - rb).max() <= 1e-6 * max(1.0, np.abs(rb).max())


def _delta_identity(v):
    """hom(P_A(X) P_C(Y), X' Y') = delta, wherever the K_0 class is recovered."""
    a, c, b = v.a.source, v.c.source, v.a.target
    pairs = list(itertools.product(range(a.n), range(c.n)))
    mults, classes = [], []
    for x, y in pairs:
        p = gr_product(b, v.a.push(projective_class(a, x)), v.c.push(projective_class(c, y)))
        try:
            mults.append(decompose_projective(b, p))
        except (SingularCartan, NotProjectiveClass):
            return None
        classes.append(gr_product(b, basis_vector(b, v.a.map[x]), basis_vector(b, v.c.map[y])))
    m, g = np.array(mults), np.array(classes)
    hom = m @ g.T
    spot = [hom_from_projective(b, mults[i], classes[j]) for i, j in [(0, 0), (0, len(pairs) - 1)]]
    assert spot == [hom[0, 0], hom[0, -1]]
    return np.array_equal(hom, np.eye(len(pairs), dtype=hom.dtype))


@criterion(3, "exact factorization suite: Deligne pairs, AUTO vs brute force, R_A R_C = R_B, delta identity, < 60 s")
def test_criterion_3_exfac():
    t0 = time.perf_counter()
    for b, ea, ec in deligne_pairs():
        v = check_exact_factorization(ea, ec)
        assert v.ok and v.fpdim_equal, (b, v.failed_criteria)
    s3 = vec_of_group(symmetric(3))
    res = search_exact_factorizations(s3)
    assert len(res.nontrivial_up_to_conjugacy_and_swap()) == 1
    for d, expect in [(s3, None), (vec_of_group(cyclic(4)), 0), (fibonacci(), 0)]:
        r = search_exact_factorizations(d)
        if expect is not None:
            assert len(r.nontrivial_up_to_conjugacy_and_swap()) == expect
            assert all(v.trivial for v in r.verdicts)
        got = {(tuple(sorted(v.a.map)), tuple(sorted(v.c.map))) for v in r.verdicts}
        assert got == set(brute_exact_pairs(d))
    checked = skipped = 0
    for v in accepted_corpus():
        assert _regular_identity(v)
        delta = _delta_identity(v)
        if delta is None:
            skipped += 1
        else:
            assert delta
            checked += 1
    elapsed = time.perf_counter() - t0
    print(f"delta identity on {checked} factorizations, {skipped} with singular Cartan; {elapsed:.1f} s")
    assert checked > 0
    assert elapsed < 60


@criterion(4, "FPdim ratio: S3 configurations exact, inequality on every supported input, < 5 s")
def test_criterion_4_ratio():
    t0 = time.perf_counter()
    s3 = vec_of_group(symmetric(3))
    r = fpdim_ratio_check(sub(s3, range(6)), sub(s3, (0, 2)))
    assert (r.lhs, r.rhs) == (12, 12) and r.equal and r.inequality
    r = fpdim_ratio_check(sub(s3, (0, 3, 4)), sub(s3, (0, 3, 4)))
    assert (r.lhs, r.rhs) == (9, 9) and r.equal and r.inequality and r.fpdim_b >= r.lhs / r.fpdim_d
    r = fpdim_ratio_check(sub(s3, (0,)), sub(s3, (0,)))
    assert r.lhs == r.rhs == 1
    supported = unsupported = 0
    for name in ["S3", "Z4", "Z2xZ2", "Z6", "D4", "Q8", "A4", "D6"]:
        b = vec_of_group(CATALOG[name])
        supports = closed_supports(b)
        for s1, s2 in itertools.product(supports, repeat=2):
            r = fpdim_ratio_check(sub(b, s1), sub(b, s2))
            assert r.inequality
            supported += 1
    for _, ea, ec in deligne_pairs()[:200]:
        for x, y in [(ea, ec), (ea, ea), (ec, ec)]:
            try:
                r = fpdim_ratio_check(x, y)
            except Unsupported:
                unsupported += 1
                continue
            assert r.inequality
            supported += 1
    elapsed = time.perf_counter() - t0
    print(f"{supported} supported inputs, {unsupported} unsupported; {elapsed:.1f} s")
    assert elapsed < 5


@criterion(5, "cohomology: H^4(Z/n) = Z/n with closed-form oracle, pipelines agree for |G| <= 6")
def test_criterion_5_cohomology():
    for n in range(2, 7):
        g = cyclic(n)
        h = h4_integral(g)
        assert h.invariant_factors == (n,)
        om = cyclic_omega(g)
        assert om.is_cocycle()
        z = bockstein(om)
        assert not is_trivial_class(z)[0]
        ok, w = is_trivial_class(n * z)
        assert ok and bar_differential(w) == n * z
    for name, g in catalog(6).items():
        assert h4_integral(g).invariant_factors == h4_integral(g, normalized=False).invariant_factors, name
    k = CATALOG["Z2xZ2"]
    assert h4_integral(k).invariant_factors == h4_integral(k, normalized=False).invariant_factors == (2, 2, 2)


def _exhaustive_kernel(g, g1, g2):
    h = h4_integral(g)
    count = 0
    for coeffs in itertools.product(*[range(d) for d in h.invariant_factors]):
        z = h.cocycle(coeffs)
        count += all(is_trivial_class(restrict(z, s))[0] for s in (g1, g2))
    return count


@criterion(6, "classification: S3 and Z/6 kernels trivial, (G, G, 1) trivial on the catalog, < 10 min")
def test_criterion_6_classification():
    t0 = time.perf_counter()
    s3 = symmetric(3)
    a3, t = subgroup_of(s3, [0, 3, 4]), subgroup_of(s3, [0, 2])
    res = classify_pointed(s3, a3, t)
    assert res.order == 1 and _exhaustive_kernel(s3, a3, t) == 1
    z6 = cyclic(6)
    g1, g2 = subgroup_of(z6, [0, 3]), subgroup_of(z6, [0, 2, 4])
    assert classify_pointed(z6, g1, g2).order == 1 == _exhaustive_kernel(z6, g1, g2)
    for name, g in CATALOG.items():
        full, triv = subgroup_of(g, range(g.order)), subgroup_of(g, [g.identity])
        assert classify_pointed(g, full, triv).order == 1, name
        if g.order <= 8:
            assert classify_pointed(g, full, triv, shortcut=False).order == 1, name
    elapsed = time.perf_counter() - t0
    print(f"{elapsed:.1f} s")
    assert elapsed < 600


@criterion(7, "pointed/integral/weakly-integral/fusion closure over accepted factorizations")
def test_criterion_7_closure():
    corpus = accepted_corpus()
    assert len(corpus) > 700
    seen = {k: set() for k in ("pointed", "integral", "weakly_integral", "fusion")}
    for v in corpus:
        pa = predicates(v.a.source, fp_character(v.a.source))
        pc = predicates(v.c.source, fp_character(v.c.source))
        pb = predicates(v.a.target, fp_character(v.a.target))
        for k in seen:
            assert pb[k] == (pa[k] and pc[k]), (k, v.a.target)
            seen[k].add(pb[k])
    # the corpus exercises both outcomes of every predicate
    assert all(s == {True, False} for s in seen.values())
