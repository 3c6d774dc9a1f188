import itertools

import numpy as np
import pytest

from tenfact.builders import deligne_product, fibonacci, opposite, rep_zp_char_p, taft_like, vec_of_group
from tenfact.core import gr_product, hom_from_projective, projective_class, validate, basis_vector
from tenfact.errors import InputError
from tenfact.factor import check_exact_factorization
from tenfact.fpdim import fp_character, predicates
from tenfact.groups import catalog, cyclic, symmetric

BASE = [vec_of_group(g) for g in catalog(8).values()] + [rep_zp_char_p(p) for p in (2, 3, 5)] + [taft_like(n) for n in (2, 3, 4)] + [fibonacci()]


def _name(d):
    return d.metadata.get("group", d.metadata.get("builder"))


def test_vec_examples():
    triv = vec_of_group(cyclic(1))
    assert triv.n == 1 and validate(triv).ok
    z2 = vec_of_group(cyclic(2))
    assert z2.n == 2 and fp_character(z2).cat_dim == 2
    s3 = vec_of_group(symmetric(3))
    assert s3.n == 6 and validate(s3).ok and s3.is_fusion
    assert predicates(s3, fp_character(s3))["pointed"]


def test_vec_omega_metadata_is_opaque():
    d = vec_of_group(cyclic(3), omega="h3:Z3:1")
    assert d.metadata["omega"] == "h3:Z3:1"
    assert d == vec_of_group(cyclic(3))


def test_rep_zp():
    assert fp_character(rep_zp_char_p(2)).cat_dim == 2
    r3 = rep_zp_char_p(3)
    assert hom_from_projective(r3, [1], projective_class(r3, 0)) == 3
    assert validate(rep_zp_char_p(5)).ok
    with pytest.raises(InputError):
        rep_zp_char_p(4)


@pytest.mark.parametrize("n", range(2, 7))
def test_taft(n):
    t = taft_like(n)
    assert validate(t).ok
    prof = fp_character(t)
    assert prof.cat_dim == n * n
    assert predicates(t, prof)["pointed"] and not t.is_fusion
    for x in range(n):
        for y in range(n):
            # Y (x) P(X) = P(YX): every projective class is the sum of all simples
            assert np.array_equal(gr_product(t, basis_vector(t, y), projective_class(t, x)), np.ones(n, int))
    assert "dualD" in t.metadata
    with pytest.raises(InputError):
        taft_like(1)


def test_deligne_examples():
    a = vec_of_group(symmetric(3))
    b, ea, ec = deligne_product(a, vec_of_group(cyclic(1)))
    assert b.n == a.n and np.array_equal(b.tensor, a.tensor)
    b, _, _ = deligne_product(vec_of_group(cyclic(2)), vec_of_group(cyclic(3)))
    assert b.n == 6 and predicates(b, fp_character(b))["pointed"]
    b, _, _ = deligne_product(rep_zp_char_p(2), vec_of_group(cyclic(3)))
    assert b.cartan_matrix.tolist() == (2 * np.eye(3, dtype=int)).tolist()
    assert fp_character(b).cat_dim == 6


@pytest.mark.parametrize("a,c", list(itertools.product(BASE[:6] + BASE[-6:], repeat=2)), ids=lambda d: _name(d))
def test_deligne_valid_and_exact(a, c):
    b, ea, ec = deligne_product(a, c)
    assert validate(b).ok
    assert check_exact_factorization(ea, ec).ok
    pa, pc, pb = fp_character(a), fp_character(c), fp_character(b)
    assert abs(pb.cat_dim - pa.cat_dim * pc.cat_dim) <= 1e-9 * pb.cat_dim


def test_opposite_examples():
    for g in (cyclic(4), cyclic(6)):
        d = vec_of_group(g)
        assert opposite(d) == d.replace(metadata=opposite(d).metadata)
    s3 = vec_of_group(symmetric(3))
    op = opposite(s3)
    assert validate(op).ok
    assert op.fusion != s3.fusion
    g = symmetric(3)
    for x in range(6):
        for y in range(6):
            assert gr_product(op, basis_vector(op, x), basis_vector(op, y)).tolist() == basis_vector(op, g.table[y, x]).tolist()


@pytest.mark.parametrize("data", BASE, ids=_name)
def test_opposite_involution(data):
    op = opposite(data)
    assert validate(op).ok
    back = opposite(op)
    assert back == data and back.dualD == data.dualD and back.metadata == data.metadata
