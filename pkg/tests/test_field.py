import pytest
from hypothesis import given, strategies as st

from oracles import BruteField, brute_irreducible, smallest_primitive_int
from sparse4cs.errors import BadOrder, LimitExceeded, NotPrime, ZeroArgument
from sparse4cs.field import (CharValue, is_prime, make_field, make_field_of_order, prime_factors,
                             prime_power, quartic_character)

ORDERS = [2, 3, 4, 5, 7, 8, 9, 13, 16, 17, 25, 27, 41, 49, 81, 89, 121, 125]


def test_prime_helpers():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert prime_factors(360) == [2, 3, 5]
    assert prime_power(49) == (7, 2)
    assert prime_power(12) is None
    assert prime_power(1) is None


@pytest.mark.parametrize("q", ORDERS)
def test_modulus_and_generator_match_brute_force(q):
    f = make_field_of_order(q)
    if 1 < f.k <= 3:
        assert brute_irreducible(f.modulus, f.p)
        # no lexicographically smaller monic irreducible with nonzero constant
        import itertools
        for cs in itertools.product(range(f.p), repeat=f.k):
            cand = tuple(cs) + (1,)
            if cand == f.modulus:
                break
            if cs[0] and f.k <= 3:
                assert not brute_irreducible(cand, f.p)
    # an element of order q-1 also proves the modulus irreducible when k = 4
    assert BruteField(f.p, f.k, f.modulus).is_primitive(BruteField(f.p, f.k, f.modulus).from_int(f.alpha)) \
        if f.k > 1 else True
    assert f.alpha == smallest_primitive_int(f.p, f.k, f.modulus if f.k > 1 else (0, 1))


@pytest.mark.parametrize("q", [4, 8, 9, 25, 27, 49])
def test_multiplication_matches_tuple_arithmetic(q):
    f = make_field_of_order(q)
    bf = BruteField(f.p, f.k, f.modulus)
    for a in f.elements():
        for b in f.elements():
            assert f.mul(a, b) == bf.to_int(bf.mul(bf.from_int(a), bf.from_int(b)))
            assert f.add(a, b) == bf.to_int(bf.add(bf.from_int(a), bf.from_int(b)))


def test_frozen_small_fields():
    assert make_field(17).alpha == 3
    f25 = make_field(5, 2)
    assert f25.modulus == (1, 1, 1)
    assert f25.alpha == 7
    assert len(f25.log_table) == 24
    assert make_field(2).alpha == 1


def test_field_errors():
    with pytest.raises(NotPrime):
        make_field(15)
    with pytest.raises(NotPrime):
        make_field_of_order(12)
    with pytest.raises(LimitExceeded):
        make_field(2, 21)
    f = make_field(17)
    with pytest.raises(ZeroArgument):
        quartic_character(f, 0)
    with pytest.raises(BadOrder):
        quartic_character(make_field(7), 3)
    with pytest.raises(ZeroArgument):
        f.inv(0)


def test_character_values():
    f = make_field(17)
    assert quartic_character(f, 1) == CharValue(0)
    assert quartic_character(f, 3) == CharValue(1)
    assert str(CharValue(1)) == "i"
    assert CharValue(2).value == -1
    assert -CharValue(1) == CharValue(3)
    # -1 = 3^8, so chi(-1) = 1 whenever q = 1 mod 8
    assert quartic_character(f, 16) == CharValue(0)
    assert quartic_character(f, 9) == CharValue(2)
    # the quartic character is determined by x^((q-1)/4)
    for x in range(1, 17):
        e = quartic_character(f, x).exponent
        assert pow(x, 4, 17) == f.power(x, 4)
        assert pow(x, (17 - 1) // 4, 17) == pow(3, 4 * e, 17)


char_fields = st.sampled_from([5, 9, 13, 17, 25, 29, 37, 41, 49, 81])


@given(char_fields, st.data())
def test_character_is_multiplicative(q, data):
    f = make_field_of_order(q)
    a = data.draw(st.integers(1, q - 1))
    b = data.draw(st.integers(1, q - 1))
    assert quartic_character(f, f.mul(a, b)) == quartic_character(f, a) * quartic_character(f, b)


@given(st.sampled_from(ORDERS), st.data())
def test_log_round_trip(q, data):
    f = make_field_of_order(q)
    a = data.draw(st.integers(1, q - 1))
    assert f.alpha_power(f.log(a)) == a
    assert f.mul(a, f.inv(a)) == 1
    n = data.draw(st.integers(0, 3 * q))
    assert f.power(a, n) == f.alpha_power(f.log(a) * n)


@given(st.sampled_from([4, 9, 25, 27]), st.data())
def test_field_axioms(q, data):
    f = make_field_of_order(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.add(a, f.neg(a)) == 0
    assert f.sub(f.add(a, b), b) == a
    assert f.from_coeffs(f.coeffs(a)) == a
