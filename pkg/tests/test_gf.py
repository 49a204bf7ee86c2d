import pytest
from hypothesis import given, settings, strategies as st

from hermitia import gf
from hermitia.gf import FieldError, make_field, make_embedding, solve_norm


FIELDS = [(2, 1), (2, 2), (2, 4), (3, 1), (3, 2), (5, 2), (7, 2)]


def field_and_elems(draw, n):
    p, m = draw(st.sampled_from(FIELDS))
    f = make_field(p, m)
    xs = [draw(st.integers(min_value=0, max_value=f.order - 1)) for _ in range(n)]
    return f, xs


def test_default_moduli_are_the_documented_ones():
    assert make_field(2, 2).modulus == (1, 1, 1)
    assert make_field(3, 2).modulus == (1, 0, 1)
    assert make_field(3, 1).modulus == (0, 1)
    # first monic degree-4 irreducible in lex coefficient order is x^4+x^3+1
    assert make_field(2, 4).modulus == (1, 0, 0, 1, 1)


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        make_field(2, 2, (1, 0, 1))   # x^2 + 1 = (x+1)^2 over GF(2)
    with pytest.raises(FieldError):
        make_field(4, 1)              # composite characteristic
    with pytest.raises(FieldError):
        make_field(2, 2, (1, 1))      # wrong degree


def test_gf4_arithmetic():
    f = make_field(2, 2)
    w = f.element([0, 1])
    assert f.mul(w, w) == f.element([1, 1])
    assert f.inv(w) == f.element([1, 1])
    assert f.mul(w, f.inv(w)) == 1


def test_gf9_arithmetic():
    f = make_field(3, 2)
    u = f.element([0, 1])
    assert f.mul(u, u) == 2                      # u^2 = -1
    assert f.frobenius(u, 1) == f.neg(u)         # u^3 = -u
    assert f.frobenius(f.frobenius(u, 1), 1) == u


def test_division_by_zero():
    f = make_field(3, 2)
    with pytest.raises(ZeroDivisionError):
        f.inv(0)


@settings(max_examples=120, deadline=None)
@given(st.data())
def test_field_axioms(data):
    f, (x, y, z) = field_and_elems(data.draw, 3)
    assert f.add(x, f.add(y, z)) == f.add(f.add(x, y), z)
    assert f.mul(x, f.mul(y, z)) == f.mul(f.mul(x, y), z)
    assert f.mul(x, f.add(y, z)) == f.add(f.mul(x, y), f.mul(x, z))
    assert f.add(x, f.neg(x)) == 0
    assert f.sub(x, y) == f.add(x, f.neg(y))
    if x:
        assert f.mul(x, f.inv(x)) == 1
        assert f.pow(x, -1) == f.inv(x)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_frobenius_is_an_automorphism(data):
    f, (x, y) = field_and_elems(data.draw, 2)
    fx, fy = f.frobenius(x, 1), f.frobenius(y, 1)
    assert f.frobenius(f.add(x, y), 1) == f.add(fx, fy)
    assert f.frobenius(f.mul(x, y), 1) == f.mul(fx, fy)
    # p^m-th power is the identity
    assert f.pow(x, f.order) == x


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_norm_lands_in_subfield_and_solves(q):
    f2 = gf.gfq2(q)
    for x in f2.elements():
        assert f2.in_subfield(f2.pow(x, q + 1), q)
    # exhaustive: every nonzero subfield element is a norm value
    for a in f2.elements():
        if a and f2.in_subfield(a, q):
            x = solve_norm(f2, a, q)
            assert f2.pow(x, q + 1) == a


def test_solve_norm_examples():
    f4 = gf.gfq2(2)
    assert solve_norm(f4, 1, 2) == 1          # first nonzero element works
    f9 = gf.gfq2(3)
    sols = [x for x in f9.elements() if f9.pow(x, 4) == 2]
    assert len(sols) == 4
    assert solve_norm(f9, 2, 3) == min(sols)
    u = f9.element([0, 1])
    with pytest.raises(FieldError):
        solve_norm(f9, u, 3)                  # not in GF(3)
    with pytest.raises(FieldError):
        solve_norm(f9, 0, 3)


def test_enumeration_is_complete_and_deterministic():
    f = make_field(3, 2)
    elems = list(f.elements())
    assert elems == list(range(9))
    assert sum(1 for x in elems if x and f.mul(x, f.inv(x)) == 1) == 8


def test_embedding_gf4_in_gf16():
    f4 = make_field(2, 2)
    f16 = make_field(2, 4)
    emb = make_embedding(f4, f16)
    w = f4.element([0, 1])
    img = emb(w)
    assert f16.pow(img, 3) == 1 and img != 1  # multiplicative order 3
    assert emb(1) == 1
    assert emb(f4.mul(w, w)) == f16.mul(img, img)


@settings(max_examples=40, deadline=None)
@given(x=st.integers(0, 8), y=st.integers(0, 8))
def test_embedding_is_ring_hom(x, y):
    f9 = make_field(3, 2)
    f81 = make_field(3, 4)
    emb = make_embedding(f9, f81)
    assert emb(f9.add(x, y)) == f81.add(emb(x), emb(y))
    assert emb(f9.mul(x, y)) == f81.mul(emb(x), emb(y))


def test_embedding_requires_compatible_degrees():
    with pytest.raises(FieldError):
        make_embedding(make_field(2, 2), make_field(2, 3))
    with pytest.raises(FieldError):
        make_embedding(make_field(2, 2), make_field(3, 2))


def test_embedding_injective_on_small_field():
    f4 = make_field(2, 2)
    f16 = make_field(2, 4)
    emb = make_embedding(f4, f16)
    images = {emb(x) for x in f4.elements()}
    assert len(images) == 4


def test_power_roots():
    f9 = make_field(3, 2)
    assert f9.power_roots(2, 4) == sorted(x for x in f9.elements()
                                          if f9.pow(x, 4) == 2)
    assert f9.power_roots(0, 4) == [0]


def test_dlog_roundtrip():
    f = make_field(5, 2)
    g = f.generator()
    for e in (0, 1, 7, 23):
        assert f.dlog(f.pow(g, e)) == e % (f.order - 1)


def test_element_json_roundtrip():
    f = make_field(3, 2)
    x = f.element([2, 1])
    doc = gf.element_to_json(f, x)
    assert doc == {"p": 3, "m": 2, "modulus": [1, 0, 1], "coeffs": [2, 1]}
    f2, x2 = gf.element_from_json(doc)
    assert f2 is f and x2 == x


def test_prime_power_split():
    assert gf.prime_power_split(8) == (2, 3)
    assert gf.prime_power_split(9) == (3, 2)
    assert gf.prime_power_split(13) == (13, 1)
    assert not gf.is_prime_power(6)
    assert not gf.is_prime_power(1)
