"""Field tower arithmetic: construction, axioms, embeddings, subfields,
enumeration order and text round trips."""

import pytest

from mtgoppa.errors import (
    DegreeMismatch,
    DivisionByZero,
    LevelMismatch,
    NotPrime,
    ReducibleModulus,
    TooLarge,
)
from mtgoppa.gf import Felt, FieldSpec, field_build
from mtgoppa.rng import SplitRng


def test_build_f4_and_f16(f16):
    assert f16.orders == [2, 4, 16]
    a = f16.embed(f16.gen(1), 2)
    b = f16.gen(2)
    one = f16.one(2)
    # forced by the moduli: a^2 = a+1 and b^2 = b+a
    assert a * a == a + one
    assert b * b == b + a


def test_reducible_modulus_rejected():
    with pytest.raises(ReducibleModulus):
        field_build(2, [[0, 1, 1]])  # x^2 + x = x(x+1)


def test_not_prime_rejected():
    with pytest.raises(NotPrime):
        field_build(4, [[1, 1, 1]])


def test_degree_and_monic_rules():
    with pytest.raises(DegreeMismatch):
        field_build(2, [[1, 1]])  # degree-1 stage cannot grow the order
    with pytest.raises(DegreeMismatch):
        field_build(3, [[1, 1, 2]])  # not monic


def test_f32_modulus_relation(f32):
    a = f32.gen(1)
    # a^5 = a^2 + 1 under x^5 + x^2 + 1
    assert a**5 == a * a + f32.one(1)
    assert a**31 == f32.one(1)


def test_mul_inverse_table_f4(f16):
    # exhaustive multiplication-table check of inv(a) = a+1 in F4
    a = f16.gen(1)
    one = f16.one(1)
    inverses = [y for y in f16.enumerate_level(1) if (a * y) == one]
    assert inverses == [a + one]


def test_field_axioms_random(f1024, f9):
    rng = SplitRng("axioms")
    for spec, lvl in ((f1024, 2), (f1024, 1), (f9, 1)):
        order = spec.orders[lvl]
        for _ in range(300):
            x = spec.elt(lvl, rng.randrange(order))
            y = spec.elt(lvl, rng.randrange(order))
            z = spec.elt(lvl, rng.randrange(order))
            assert x + y == y + x
            assert x * y == y * x
            assert (x + y) + z == x + (y + z)
            assert (x * y) * z == x * (y * z)
            assert x * (y + z) == x * y + x * z
            if x.idx:
                assert x * x.inverse() == spec.one(lvl)
            assert x ** order == x  # Fermat in the ambient field
            assert x - x == spec.zero(lvl)


def test_division_by_zero(f16):
    with pytest.raises(DivisionByZero):
        f16.zero(2).inverse()


def test_level_mismatch(f16):
    with pytest.raises(LevelMismatch):
        f16.gen(1) + f16.gen(2)


def test_embed_identity_and_homomorphism(f16):
    one = f16.one(1)
    assert f16.embed(one, 2) == f16.one(2)
    rng = SplitRng("embed")
    for _ in range(100):
        x = f16.elt(1, rng.randrange(4))
        y = f16.elt(1, rng.randrange(4))
        assert f16.embed(x * y, 2) == f16.embed(x, 2) * f16.embed(y, 2)
        assert f16.embed(x + y, 2) == f16.embed(x, 2) + f16.embed(y, 2)


def test_embed_composition_two_stages(f256_tower):
    spec = f256_tower
    rng = SplitRng("embed2")
    for _ in range(60):
        x = spec.elt(1, rng.randrange(4))
        assert spec.embed(spec.embed(x, 2), 3) == spec.embed(x, 3)


def test_embed_then_in_subfield(f16):
    for x in f16.enumerate_level(1):
        assert f16.in_subfield(f16.embed(x, 2), 1)


def test_in_subfield_matches_frobenius_and_enumeration(f1024):
    spec = f1024
    rng = SplitRng("subfield")
    embedded = {spec.embed(x, 2).idx for x in spec.enumerate_level(1)}
    for _ in range(300):
        x = spec.elt(2, rng.randrange(1024))
        by_range = spec.in_subfield(x, 1)
        by_frob = (x ** spec.orders[1]) == x
        assert by_range == by_frob == (x.idx in embedded)
    assert spec.in_subfield(spec.zero(2), 1)


def test_example2_eta_outside_f16(f256_tower):
    spec = f256_tower
    c = spec.gen(3)
    assert not spec.in_subfield(c, 2)
    assert spec.in_subfield(c ** spec.orders[3], 3)


def test_enumeration_canonical_order(f16, f9):
    a = f16.gen(1)
    one = f16.one(1)
    assert list(f16.enumerate_level(1)) == [f16.zero(1), one, a, a + one]
    elems = list(f16.enumerate_level(2))
    assert len(elems) == 16 and len(set(e.idx for e in elems)) == 16
    nine = list(f9.enumerate_level(1))
    assert len(nine) == 9 and len({e.idx for e in nine}) == 9


def test_enumeration_bound():
    spec = field_build(2, [[1, 1, 1], [2, 1, 1]], enumeration_bound=8)
    with pytest.raises(TooLarge):
        list(spec.enumerate_level(2))


def test_project_and_scalar(f16):
    a2 = f16.embed(f16.gen(1), 2)
    assert f16.project(a2, 1) == f16.gen(1)
    with pytest.raises(LevelMismatch):
        f16.project(f16.gen(2), 1)
    assert f16.scalar(1, 5) == f16.one(1)  # 5 mod 2


def test_felt_text_round_trip(f16, f9):
    for spec, lvl in ((f16, 2), (f9, 1)):
        for x in spec.enumerate_level(lvl):
            s = spec.felt_str(x)
            assert len(s) == spec.dims[lvl]
            assert spec.felt_from_str(lvl, s) == x


def test_spec_lines_round_trip(f256_tower):
    lines = f256_tower.spec_lines()
    back = FieldSpec.from_spec_lines(lines)
    assert back == f256_tower
    assert back.spec_lines() == lines


def test_log_table_agrees_with_raw(f1024):
    rng = SplitRng("tables")
    spec = f1024
    spec.mul(2, 3, 5)  # force table build
    assert spec._exp[2] is not None
    for _ in range(400):
        x = rng.randrange(1024)
        y = rng.randrange(1024)
        assert spec.mul(2, x, y) == spec._raw_mul(2, x, y)


def test_pow_negative_exponent(f16):
    a = f16.embed(f16.gen(1), 2)
    assert a ** (-1) == a.inverse()
    assert (a ** (-3)) * (a ** 3) == f16.one(2)
