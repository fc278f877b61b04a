import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qpack.counters import CostReport
from qpack.gfq import (
    FieldTooLarge,
    build_field,
    fgdp_dot,
    gfq_add,
    gfq_inv,
    gfq_matmul,
    gfq_mul,
    gfq_neg,
    parse_description,
)
from qpack.oracle import naive_gfq_dot, naive_gfq_matmul, naive_gfq_mul
from qpack.params import NotPrimeError, ParameterError

FIELDS = [(2, 1), (3, 1), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (7, 2)]


@pytest.fixture(scope="module", params=FIELDS, ids=lambda f: f"GF({f[0]}^{f[1]})")
def field(request):
    return build_field(*request.param)


def test_representation(field):
    assert field.zero == field.order - 1
    assert field.one == 0
    assert field.to_poly(field.one) == [1] + [0] * (field.k - 1)
    assert field.to_poly(field.zero) == [0] * field.k
    polys = {tuple(field.to_poly(e)) for e in field.elements()}
    assert len(polys) == field.order
    for e in field.elements():
        assert field.from_poly(field.to_poly(e)) == e


def test_modulus_is_smallest_irreducible():
    assert build_field(3, 2).modulus == [1, 0, 1]
    assert build_field(2, 3).modulus == [1, 1, 0, 1]
    assert build_field(2, 4).modulus == [1, 1, 0, 0, 1]


def test_mul_add_against_oracle(field):
    for a, b in itertools.product(field.elements(), repeat=2):
        pa, pb = field.to_poly(a), field.to_poly(b)
        assert field.to_poly(gfq_mul(a, b, field)) == naive_gfq_mul(pa, pb, field.modulus, field.p)
        assert field.to_poly(gfq_add(a, b, field)) == [(x + y) % field.p for x, y in zip(pa, pb)]


def test_neg_inv(field):
    for a in field.elements():
        assert gfq_add(a, gfq_neg(a, field), field) == field.zero
        if a != field.zero:
            assert gfq_mul(a, gfq_inv(a, field), field) == field.one
    with pytest.raises(ZeroDivisionError):
        gfq_inv(field.zero, field)


_fields = {}


def _small_q_field(p, k, indexing):
    # a q with room for only a handful of products, so short vectors span several groups
    key = (p, k, indexing)
    if key not in _fields:
        q = 1 << (8 * k * (p - 1) ** 2).bit_length()
        _fields[key] = build_field(p, k, q if q ** (2 * k - 1) < 2 ** 53 else None, indexing=indexing)
    return _fields[key]


@pytest.mark.parametrize("indexing", ["base_p", "binary_shift"])
@pytest.mark.parametrize("pk", [(3, 2), (2, 3), (5, 2), (7, 2), (3, 3), (3, 4)])
@given(data=st.data())
@settings(max_examples=30, deadline=None)
def test_fgdp_dot_random(pk, indexing, data):
    F = _small_q_field(*pk, indexing=indexing)
    n = data.draw(st.integers(0, 3 * F.n_q + 5))
    elems = st.integers(0, F.order - 1)
    v1 = data.draw(st.lists(elems, min_size=n, max_size=n))
    v2 = data.draw(st.lists(elems, min_size=n, max_size=n))
    got = F.to_poly(fgdp_dot(v1, v2, F))
    want = naive_gfq_dot([F.to_poly(e) for e in v1], [F.to_poly(e) for e in v2], F.modulus, F.p)
    assert got == want


def test_fgdp_small_q_many_groups():
    F = build_field(5, 2, q=2 ** 8)
    assert F.n_q == 7
    rng = np.random.default_rng(2)
    v1 = rng.integers(0, F.order, 100).tolist()
    v2 = rng.integers(0, F.order, 100).tolist()
    c = CostReport()
    got = F.to_poly(fgdp_dot(v1, v2, F, c))
    assert got == naive_gfq_dot([F.to_poly(e) for e in v1], [F.to_poly(e) for e in v2], F.modulus, 5)
    assert c.divisions == -(-100 // 7)
    assert c.max_accumulation <= F.n_q


@pytest.mark.parametrize("pk", [(3, 2), (2, 3), (5, 2)])
def test_matmul(pk):
    F = build_field(*pk, q=2 ** 9 if pk == (3, 2) else None)
    rng = np.random.default_rng(0)
    A = rng.integers(0, F.order, (5, 7))
    B = rng.integers(0, F.order, (7, 4))
    C = gfq_matmul(A, B, F)
    poly = lambda M: [[F.to_poly(int(e)) for e in row] for row in M]
    assert poly(C) == naive_gfq_matmul(poly(A), poly(B), F.modulus, F.p)
    with pytest.raises(ValueError):
        gfq_matmul(A, A, F)


def test_cap_and_errors():
    with pytest.raises(FieldTooLarge, match="entries"):
        build_field(7, 8, max_entries=1 << 20)
    with pytest.raises(NotPrimeError):
        build_field(4, 2)
    with pytest.raises(ParameterError):
        build_field(3, 2, modulus=[2, 0, 1])  # x^2 + 2 = (x-1)(x+1)


def test_describe_round_trip():
    F = build_field(3, 3)
    desc = parse_description(F.describe())
    assert desc["p"] == 3 and desc["k"] == 3 and desc["q"] == F.q and desc["n_q"] == F.n_q
    G = build_field(3, 3, modulus=desc["modulus"], generator=desc["generator"])
    assert np.array_equal(F.log_table, G.log_table)


def test_table_sizes():
    F = build_field(3, 2, indexing="binary_shift")
    assert F.radix == 4
    entries = F.table_entries()
    assert entries["L"] == entries["H"] == 16
    assert entries["zech"] == 9


def test_reference_field_facts():
    F = build_field(3, 2)
    x = F.from_poly([0, 1])
    assert F.to_poly(gfq_mul(x, x, F)) == [2, 0]
    assert len(F.L_table) == 9
    c = CostReport()
    assert fgdp_dot([x], [F.one], F, c) == x
    assert c.table_accesses <= 4
    v1 = [F.from_poly([1, 1]), F.from_poly([0, 2])]
    v2 = [F.from_poly([2, 1]), F.from_poly([0, 1])]
    want = naive_gfq_dot([[1, 1], [0, 2]], [[2, 1], [0, 1]], [1, 0, 1], 3)
    assert F.to_poly(fgdp_dot(v1, v2, F)) == want
    G = build_field(2, 1)
    assert G.order == 2 and len(G.L_table) == 2


def test_conversion_epilogue_budget():
    F = build_field(5, 2)
    rng = np.random.default_rng(3)
    for n in [1, 5, F.n_q]:
        c = CostReport()
        fgdp_dot(rng.integers(0, 25, n).tolist(), rng.integers(0, 25, n).tolist(), F, c)
        assert c.divisions == 1
        assert c.table_accesses <= 4


@given(st.sampled_from([(3, 2), (2, 3), (5, 2), (3, 3)]), st.data())
@settings(max_examples=60, deadline=None)
def test_field_axioms(pk, data):
    F = build_field(*pk)
    a, b, c = (data.draw(st.integers(0, F.order - 1)) for _ in range(3))
    mul = lambda x, y: gfq_mul(x, y, F)
    add = lambda x, y: gfq_add(x, y, F)
    assert mul(a, b) == mul(b, a) and add(a, b) == add(b, a)
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert add(add(a, b), c) == add(a, add(b, c))
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    assert add(a, F.zero) == a and mul(a, F.one) == a


def test_generator_order():
    for pk in FIELDS:
        F = build_field(*pk)
        seen = {int(e) for e in F.antilog_table[: F.order - 1]}
        assert len(seen) == F.order - 1


def test_matmul_degenerate_shapes():
    F = build_field(3, 2)
    rng = np.random.default_rng(1)
    A = rng.integers(0, 9, (4, 4))
    eye = np.full((4, 4), F.zero)
    np.fill_diagonal(eye, F.one)
    assert (gfq_matmul(eye, A, F) == A).all()
    assert gfq_matmul([[5]], [[7]], F)[0, 0] == gfq_mul(5, 7, F)
