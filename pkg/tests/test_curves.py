from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from paritylab.arith import is_rational_square, squarefree_part
from paritylab.curves import (
    DegenerateFamily,
    NotAKernel,
    SingularModel,
    WeierstrassModel,
    ZeroTwist,
    division_poly_3,
    inverse_transform,
    is_isomorphic,
    quadratic_twist,
    tate_normal_form,
    three_isogenies,
    three_isogeny,
    transform,
    two_isogeny_pair,
)

small = st.integers(-12, 12)
small_nz = small.filter(bool)
models = st.builds(WeierstrassModel, small, small, small, small, small)
changes = st.tuples(
    st.builds(Fraction, small_nz, st.integers(1, 4)),
    st.builds(Fraction, small, st.integers(1, 4)),
    st.builds(Fraction, small, st.integers(1, 4)),
    st.builds(Fraction, small, st.integers(1, 4)),
)


def test_invariants_of_y2_x3_plus_x():
    inv = WeierstrassModel(0, 0, 0, 1, 0).invariants()
    assert (inv.disc, inv.c4, inv.j) == (-64, -48, 1728)


def test_pair_one_one():
    pair = two_isogeny_pair(1, 1)
    assert pair.curve.disc == -48
    assert pair.isogenous.ainvs == (0, -2, 0, -3, 0)


def test_singular_and_degenerate_inputs():
    with pytest.raises(SingularModel):
        WeierstrassModel(0, 0, 0, 0, 0).invariants()
    with pytest.raises(DegenerateFamily):
        two_isogeny_pair(2, 1)  # a^2 = 4b
    with pytest.raises(DegenerateFamily):
        two_isogeny_pair(3, 0)
    with pytest.raises(ZeroTwist):
        two_isogeny_pair(1, 3).twist(0)


@given(models, changes)
def test_transform_scales_invariants(m, ch):
    assume(m.disc != 0)
    u, r, s, t = ch
    m2 = transform(m, u, r, s, t)
    assert m2.c4 == m.c4 / u**4
    assert m2.c6 == m.c6 / u**6
    assert m2.disc == m.disc / u**12
    assert transform(m2, *inverse_transform(u, r, s, t)) == m
    assert is_isomorphic(m, m2)


@given(models, changes)
def test_transform_of_points(m, ch):
    """Points map along x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""
    assume(m.disc != 0)
    u, r, s, t = ch
    m2 = transform(m, u, r, s, t)
    # find a point on m2 by picking x' and solving would need a square; use 2-torsion-free check instead
    P = (Fraction(0), Fraction(0))
    if not m.contains(P):
        return
    x2 = (P[0] - r) / u**2
    y2 = (P[1] - s * u * u * x2 - t) / u**3
    assert m2.contains((x2, y2))


def test_group_law_on_rank_one_curve():
    # y^2 + y = x^3 - x has P = (0, 0) of infinite order
    E = WeierstrassModel(0, 0, 1, -1, 0)
    P = (Fraction(0), Fraction(0))
    assert E.mul(2, P) == (1, 0)
    assert E.add(E.mul(3, P), E.mul(-3, P)) is None
    for n in range(1, 8):
        assert E.contains(E.mul(n, P))
    assert E.add(E.mul(2, P), E.mul(5, P)) == E.mul(7, P)


def test_phi_is_a_rational_map_of_degree_two():
    """phi(x, y) agrees with the defining formula and lands on E' at more
    points than the degree of the rational identity involved."""
    pair = two_isogeny_pair(-7, 160)  # y^2 = x^3 - 7x^2 + 160x
    E, Ep = pair.curve, pair.isogenous
    a, b, d = pair.a, pair.b, pair.delta
    for x in [Fraction(n, 3) for n in range(1, 40)]:
        X, _ = pair.phi((x, 1))
        # Y^2 = X^3 - 2a X^2 + d X equals (y (x^2 - b)/x^2)^2 with y^2 = x^3 + a x^2 + b x
        y2 = x**3 + a * x * x + b * x
        assert X**3 - 2 * a * X * X + d * X == y2 * ((x * x - b) / (x * x)) ** 2


def test_dual_composition_is_doubling():
    from paritylab.descent import search_points

    pair = two_isogeny_pair(2, -3)  # y^2 = x^3 + 2x^2 - 3x
    E = pair.curve
    pts = [P for P in search_points(2, -3, height=400) if P[1] != 0]
    assert pts, "expected a point of infinite order"
    for P in pts:
        Q = pair.phi(P)
        assert pair.isogenous.contains(Q)
        assert pair.phihat(Q) == E.mul(2, P)


@given(small_nz, small_nz)
def test_pair_invariants(a, b):
    assume(a * a != 4 * b)
    pair = two_isogeny_pair(a, b)
    assert pair.curve.disc == 16 * pair.delta * b * b
    # the dual of the dual is the pair scaled by u = 2
    assert pair.dual().dual() == pair.scaled(2)
    assert pair.twist(3).curve.j == pair.curve.j


def test_three_division_polynomial():
    assert division_poly_3(WeierstrassModel(0, 0, 0, 0, 1)) == [0, 12, 0, 0, 3]


def test_tate_normal_three_isogeny():
    iso = three_isogeny(tate_normal_form(1, 1), 0)
    assert iso.base.ainvs == (0, Fraction(1, 4), 0, Fraction(1, 2), Fraction(1, 4))
    assert iso.d == Fraction(1, 4)
    assert iso.image.ainvs == (0, Fraction(1, 4), 0, Fraction(-9, 2), Fraction(-31, 4))
    assert iso.image.disc == -17576
    assert iso.dual().x0 == Fraction(-1, 3)
    assert iso.twist(5).kernel_field == 5


def test_not_a_kernel():
    with pytest.raises(NotAKernel):
        three_isogeny(tate_normal_form(1, 1), 1)


@given(st.integers(-5, 5), st.integers(-5, 5).filter(bool), st.sampled_from([1, -1, 2, -3, 5]))
def test_velu_maps_points_and_kernel(a1, a3, d0):
    assume(a1**3 != 27 * a3)  # disc = a3^3 (a1^3 - 27 a3)
    base = tate_normal_form(a1, a3)
    iso = three_isogeny(base, 0)
    if d0 != 1:
        iso = iso.twist(d0)
    assert squarefree_part(iso.d) == iso.kernel_field
    E, Ep = iso.base, iso.image
    # the dual returns to the base up to the factor 3 in the invariants
    dual = iso.dual()
    assert dual.image.c4 == 81 * E.c4 and dual.image.c6 == 729 * E.c6
    # points over Q with x in a small box map onto the image
    for x in range(-6, 7):
        x = Fraction(x)
        if x == iso.x0:
            continue
        y2 = x**3 + E.a2 * x * x + E.a4 * x + E.a6
        if is_rational_square(y2):
            y = Fraction(isqrt(y2.numerator), isqrt(y2.denominator))
            assert Ep.contains(iso.map_point((x, y)))


def test_three_isogenies_enumerates_kernels():
    # y^2 = x^3 + 1 has 3-torsion (0, +-1) and x = -4^(1/3) is irrational
    isos = three_isogenies(WeierstrassModel(0, 0, 0, 0, 1))
    assert [i.x0 for i in isos] == [0]


def test_quadratic_twist_changes_j_not_and_c6_sign():
    m = WeierstrassModel(0, 1, 0, 2, 3)
    t = quadratic_twist(m, -1)
    assert t.j == m.j
    assert t.c6 == -m.c6
    assert not is_isomorphic(m, t)
    assert is_isomorphic(m, quadratic_twist(m, 4))


def test_json_roundtrip():
    m = WeierstrassModel(Fraction(1, 2), 0, -3, Fraction(7, 9), 1)
    assert WeierstrassModel.from_json(m.to_json()) == m
