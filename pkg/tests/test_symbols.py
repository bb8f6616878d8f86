from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from paritylab.arith import prime_divisors
from paritylab.symbols import (
    REAL,
    InconsistentDatum,
    LocalFieldDatum,
    Place,
    ZeroArgument,
    artin_quadratic,
    as_place,
    hilbert,
    hilbert_by_norm_search,
    minus_one_norm_symbol,
    mu3_in,
)

nonzero = st.integers(-500, 500).filter(bool)
rationals = st.builds(Fraction, nonzero, st.integers(1, 60))
small_primes = st.sampled_from([2, 3, 5, 7, 11, 13])


@pytest.mark.parametrize(
    "x,y,place,expected",
    [
        (-1, -1, "inf", -1),
        (-1, -1, 2, -1),
        (-1, -2, 2, -1),
        (2, 7, 7, 1),
        (3, -1, 3, -1),
        (5, 5, 5, 1),  # (5,5)_5 = (5,-1)_5 = (-1|5)
        (2, 3, 3, -1),
        (2, 5, 2, -1),
        (Fraction(1, 2), 3, 3, -1),
    ],
)
def test_known_values(x, y, place, expected):
    assert hilbert(x, y, place) == expected


def test_artin_quadratic_values():
    assert artin_quadratic(3, 3) == -1
    assert artin_quadratic(-1, "inf") == -1
    assert artin_quadratic(-3, "inf") == -1
    assert artin_quadratic(5, "inf") == 1


def test_zero_argument():
    with pytest.raises(ZeroArgument):
        hilbert(0, 3, 3)


def test_places():
    assert as_place("inf") is REAL and as_place(None) is REAL
    assert Place(7).l == 7 and str(REAL) == "inf"
    with pytest.raises(ValueError):
        Place(9)
    assert mu3_in(7) and not mu3_in(5) and not mu3_in(3) and not mu3_in(2) and not mu3_in("inf")


@given(rationals, rationals, small_primes)
def test_closed_form_matches_norm_search(x, y, p):
    assert hilbert(x, y, p) == hilbert_by_norm_search(x, y, p)


@given(rationals, rationals, rationals, st.sampled_from([0, 2, 3, 5, 7]))
def test_bimultiplicative_and_symmetric(x, y, z, l):
    assert hilbert(x, y * z, l) == hilbert(x, y, l) * hilbert(x, z, l)
    assert hilbert(x, y, l) == hilbert(y, x, l)
    assert hilbert(x, -x, l) == 1
    assert hilbert(x, y * y, l) == 1


@given(rationals, rationals)
def test_product_formula(x, y):
    places = [REAL] + [Place(p) for p in prime_divisors(2, x, y)]
    prod = 1
    for v in places:
        prod *= hilbert(x, y, v)
    assert prod == 1


def test_one_plus_four_x_symbols_mod_256():
    """(1+4x, y)_2 = 1 for v(x) > 0 and any y; and for v(x) = 0 when y is a unit."""
    for x in range(256):
        for y in range(1, 256):
            if x % 2 == 0:
                assert hilbert(1 + 4 * x, y, 2) == 1
                assert hilbert(1 + 4 * x, 2 * y, 2) == 1
            elif y % 2:
                assert hilbert(1 + 4 * x, y, 2) == 1
    assert hilbert(-1, -2, 2) == -1
    assert all(hilbert(-1, -2, l) == 1 for l in (3, 5, 7, 11))


def test_minus_one_norm_criterion_on_quadratic_fields_of_q3():
    # the three quadratic extensions of Q_3: Q_3(sqrt d), d = -1 (unramified), 3, -3
    for d, e in ((-1, 1), (3, 2), (-3, 2)):
        datum = LocalFieldDatum(p=3, f_residue=1, e_ram=e, degree=2)
        assert minus_one_norm_symbol(datum) == artin_quadratic(d, 3)


def test_minus_one_norm_criterion_cases():
    assert minus_one_norm_symbol(LocalFieldDatum(7, 2, 2, 2)) == 1  # even residue degree
    assert minus_one_norm_symbol(LocalFieldDatum(7, 1, 3, 3)) == 1  # (7-1)/3 even
    assert minus_one_norm_symbol(LocalFieldDatum(7, 1, 6, 6)) == -1
    with pytest.raises(InconsistentDatum):
        minus_one_norm_symbol(LocalFieldDatum(7, 1, 4, 4))
    with pytest.raises(InconsistentDatum):
        minus_one_norm_symbol(LocalFieldDatum(2, 1, 1, 1))


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_minus_one_norm_criterion_on_quadratic_fields(p):
    nonres = next(u for u in range(2, p) if pow(u, (p - 1) // 2, p) == p - 1)
    for d, e in ((nonres, 1), (p, 2), (p * nonres, 2)):
        assert minus_one_norm_symbol(LocalFieldDatum(p, 1, e, 2)) == artin_quadratic(d, p)
