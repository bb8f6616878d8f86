"""Weierstrass models over Q, the (a, b) family with its 2-isogeny, and
3-isogenies via Velu's formulas.

All coefficients are :class:`fractions.Fraction`. Points are ``(x, y)`` tuples
and the point at infinity is ``None``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Optional

from .arith import factor, frac, is_rational_square, rational_roots, squarefree_part

Point = Optional[tuple]


class SingularModel(ValueError):
    pass


class ZeroScaling(ValueError):
    pass


class DegenerateFamily(ValueError):
    pass


class NotAKernel(ValueError):
    pass


class ZeroTwist(ValueError):
    pass


class Invariants(NamedTuple):
    b2: Fraction
    b4: Fraction
    b6: Fraction
    b8: Fraction
    c4: Fraction
    c6: Fraction
    disc: Fraction
    j: Fraction


def _fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with rational a_i."""

    a1: Fraction = Fraction(0)
    a2: Fraction = Fraction(0)
    a3: Fraction = Fraction(0)
    a4: Fraction = Fraction(0)
    a6: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, frac(getattr(self, name)))

    @classmethod
    def from_list(cls, coeffs) -> "WeierstrassModel":
        if len(coeffs) == 2:
            return cls(a4=coeffs[0], a6=coeffs[1])
        return cls(*coeffs)

    @property
    def ainvs(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @cached_property
    def _inv(self) -> Invariants:
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        c4 = b2 * b2 - 24 * b4
        c6 = -b2**3 + 36 * b2 * b4 - 216 * b6
        disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        j = c4**3 / disc if disc else None
        return Invariants(b2, b4, b6, b8, c4, c6, disc, j)

    def invariants(self) -> Invariants:
        """b2, b4, b6, b8, c4, c6, discriminant and j; raises on a singular model."""
        if self._inv.disc == 0:
            raise SingularModel(f"discriminant vanishes for {self}")
        return self._inv

    b2 = property(lambda self: self._inv.b2)
    b4 = property(lambda self: self._inv.b4)
    b6 = property(lambda self: self._inv.b6)
    b8 = property(lambda self: self._inv.b8)
    c4 = property(lambda self: self._inv.c4)
    c6 = property(lambda self: self._inv.c6)

    @property
    def disc(self) -> Fraction:
        return self._inv.disc

    @property
    def j(self) -> Fraction:
        return self.invariants().j

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.ainvs)

    def transform(self, u, r=0, s=0, t=0) -> "WeierstrassModel":
        return transform(self, u, r, s, t)

    def completed_square(self) -> "WeierstrassModel":
        """Isomorphic model y^2 = x^3 + a2 x^2 + a4 x + a6 (u = 1)."""
        return transform(self, 1, 0, -self.a1 / 2, -self.a3 / 2)

    def integral_model(self) -> tuple["WeierstrassModel", Fraction]:
        """Globally integral model obtained by a pure scaling, with its u."""
        d = 1
        for i, a in zip((1, 2, 3, 4, 6), self.ainvs):
            while (a * d**i).denominator != 1:
                d *= (a * d**i).denominator
        if d == 1:
            return self, Fraction(1)
        # shrink d while it still clears all denominators
        for p in factor(d):
            while d % p == 0 and all((a * (d // p) ** i).denominator == 1 for i, a in zip((1, 2, 3, 4, 6), self.ainvs)):
                d //= p
        u = Fraction(1, d)
        return transform(self, u), u

    def lhs_rhs(self, x, y) -> tuple:
        a1, a2, a3, a4, a6 = self.ainvs
        return y * y + a1 * x * y + a3 * y, x**3 + a2 * x * x + a4 * x + a6

    def contains(self, P: Point) -> bool:
        if P is None:
            return True
        lhs, rhs = self.lhs_rhs(frac(P[0]), frac(P[1]))
        return lhs == rhs

    def neg(self, P: Point) -> Point:
        if P is None:
            return None
        x, y = P
        return (x, -y - self.a1 * x - self.a3)

    def add(self, P: Point, Q: Point) -> Point:
        if P is None:
            return Q
        if Q is None:
            return P
        a1, a2, a3, a4, a6 = self.ainvs
        x1, y1 = map(frac, P)
        x2, y2 = map(frac, Q)
        if x1 == x2:
            if y1 + y2 + a1 * x2 + a3 == 0:
                return None
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
        else:
            lam = (y2 - y1) / (x2 - x1)
        nu = y1 - lam * x1
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return (x3, y3)

    def mul(self, n: int, P: Point) -> Point:
        if n < 0:
            return self.mul(-n, self.neg(P))
        R: Point = None
        while n:
            if n & 1:
                R = self.add(R, P)
            P = self.add(P, P)
            n >>= 1
        return R

    def to_json(self) -> dict:
        return {name: _fmt(a) for name, a in zip(("a1", "a2", "a3", "a4", "a6"), self.ainvs)}

    @classmethod
    def from_json(cls, obj) -> "WeierstrassModel":
        if isinstance(obj, (list, tuple)):
            return cls.from_list([frac(c) if isinstance(c, str) else Fraction(c) for c in obj])
        return cls(**{k: frac(v) if isinstance(v, str) else Fraction(v) for k, v in obj.items()})

    def __str__(self) -> str:
        return "[" + ",".join(str(a) for a in self.ainvs) + "]"


def invariants(model: WeierstrassModel) -> Invariants:
    return model.invariants()


def transform(model: WeierstrassModel, u, r=0, s=0, t=0) -> WeierstrassModel:
    """Model in the coordinates x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""
    u, r, s, t = map(frac, (u, r, s, t))
    if u == 0:
        raise ZeroScaling("u must be nonzero")
    a1, a2, a3, a4, a6 = model.ainvs
    return WeierstrassModel(
        (a1 + 2 * s) / u,
        (a2 - s * a1 + 3 * r - s * s) / u**2,
        (a3 + r * a1 + 2 * t) / u**3,
        (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u**4,
        (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) / u**6,
    )


def inverse_transform(u, r=0, s=0, t=0) -> tuple:
    """Parameters undoing :func:`transform` with (u, r, s, t)."""
    u, r, s, t = map(frac, (u, r, s, t))
    return (1 / u, -r / u**2, -s / u, (r * s - t) / u**3)


# --- the (a, b) family ------------------------------------------------------


@dataclass(frozen=True)
class TwoIsogenyPair:
    """E: y^2 = x^3 + a x^2 + b x and E': y^2 = x^3 - 2a x^2 + (a^2 - 4b) x,
    linked by phi(x, y) = (x + a + b/x, y - b y / x^2) with kernel {O, (0,0)}."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", frac(self.a))
        object.__setattr__(self, "b", frac(self.b))

    degree = 2

    @property
    def delta(self) -> Fraction:
        return self.a * self.a - 4 * self.b

    @cached_property
    def curve(self) -> WeierstrassModel:
        return WeierstrassModel(0, self.a, 0, self.b, 0)

    @cached_property
    def isogenous(self) -> WeierstrassModel:
        return WeierstrassModel(0, -2 * self.a, 0, self.delta, 0)

    @property
    def kernel_field(self) -> int:
        return 1

    def dual(self) -> "TwoIsogenyPair":
        return TwoIsogenyPair(-2 * self.a, self.delta)

    def scaled(self, u) -> "TwoIsogenyPair":
        """The pair for E scaled by x -> u^2 x: (a, b) -> (u^2 a, u^4 b)."""
        u = frac(u)
        return TwoIsogenyPair(u * u * self.a, u**4 * self.b)

    def twist(self, eta) -> "TwoIsogenyPair":
        eta = frac(eta)
        if eta == 0:
            raise ZeroTwist("twist by zero")
        return TwoIsogenyPair(eta * self.a, eta * eta * self.b)

    def phi(self, P: Point) -> Point:
        if P is None:
            return None
        x, y = map(frac, P)
        if x == 0:
            return None
        return (x + self.a + self.b / x, y - self.b * y / (x * x))

    def phihat(self, Q: Point) -> Point:
        """Dual isogeny E' -> E, normalised so that phihat(phi(P)) = 2P."""
        if Q is None:
            return None
        X, Y = map(frac, Q)
        if X == 0:
            return None
        return ((X * X - 2 * self.a * X + self.delta) / (4 * X), Y * (X * X - self.delta) / (8 * X * X))

    def to_json(self) -> dict:
        return {"a": _fmt(self.a), "b": _fmt(self.b)}

    def __str__(self) -> str:
        return f"(a,b)=({self.a},{self.b})"


def two_isogeny_pair(a, b) -> TwoIsogenyPair:
    a, b = frac(a), frac(b)
    if a == 0:
        raise DegenerateFamily("a = 0 gives j = 1728")
    if b == 0 or a * a == 4 * b:
        raise DegenerateFamily(f"singular member a={a}, b={b}")
    return TwoIsogenyPair(a, b)


# --- 3-isogenies --------------------------------------------------------------


def division_poly_3(model: WeierstrassModel) -> list[Fraction]:
    """Coefficients (lowest degree first) of 3x^4 + b2 x^3 + 3b4 x^2 + 3b6 x + b8."""
    inv = model.invariants()
    return [inv.b8, 3 * inv.b6, 3 * inv.b4, inv.b2, Fraction(3)]


def _peval(coeffs, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class ThreeIsogenyData:
    """A rational 3-isogeny base -> image with kernel {O, (x0, +-sqrt(d))}.

    ``base`` is in the form y^2 = f(x) and the image is Velu's normalised
    codomain, so the isogeny pulls dx/2y back to dx/2y."""

    base: WeierstrassModel
    x0: Fraction
    d: Fraction
    image: WeierstrassModel

    degree = 3

    @property
    def curve(self) -> WeierstrassModel:
        return self.base

    @property
    def isogenous(self) -> WeierstrassModel:
        return self.image

    @property
    def kernel_field(self) -> int:
        """Squarefree d0 with the kernel field equal to Q(sqrt(d0))."""
        return squarefree_part(self.d)

    @property
    def _velu(self) -> tuple:
        f1 = 3 * self.x0**2 + 2 * self.base.a2 * self.x0 + self.base.a4
        return 2 * f1, 4 * self.d

    def map_x(self, x) -> Fraction:
        v, u = self._velu
        t = frac(x) - self.x0
        return frac(x) + v / t + u / (t * t)

    def map_x_derivative(self, x) -> Fraction:
        v, u = self._velu
        t = frac(x) - self.x0
        return 1 - v / (t * t) - 2 * u / t**3

    def map_point(self, P: Point) -> Point:
        if P is None or frac(P[0]) == self.x0:
            return None
        x, y = map(frac, P)
        return (self.map_x(x), y * self.map_x_derivative(x))

    def twist(self, d0) -> "ThreeIsogenyData":
        d0 = frac(d0)
        return three_isogeny(quadratic_twist(self.base, d0), d0 * self.x0)

    def dual(self) -> "ThreeIsogenyData":
        """The Velu isogeny out of ``image`` whose codomain is base scaled by u = 1/3."""
        target = self.base.invariants()
        for root in rational_roots(division_poly_3(self.image)):
            cand = three_isogeny(self.image, root)
            inv = cand.image.invariants()
            if inv.c4 == 81 * target.c4 and inv.c6 == 729 * target.c6:
                return cand
        raise NotAKernel("no rational kernel on the image maps back to the base")

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "x0": _fmt(self.x0), "d": _fmt(self.d)}

    def __str__(self) -> str:
        return f"{self.base} x0={self.x0}"


def three_isogeny(model: WeierstrassModel, x0) -> ThreeIsogenyData:
    base = model if (model.a1 == 0 and model.a3 == 0) else model.completed_square()
    x0 = frac(x0)
    if _peval(division_poly_3(base), x0) != 0:
        raise NotAKernel(f"x0={x0} is not a root of the 3-division polynomial")
    a2, a4, a6 = base.a2, base.a4, base.a6
    d = x0**3 + a2 * x0**2 + a4 * x0 + a6
    v = 2 * (3 * x0**2 + 2 * a2 * x0 + a4)
    w = 4 * d + x0 * v
    image = WeierstrassModel(0, a2, 0, a4 - 5 * v, a6 - 4 * a2 * v - 7 * w)
    image.invariants()
    return ThreeIsogenyData(base, x0, d, image)


def three_isogenies(model: WeierstrassModel) -> list[ThreeIsogenyData]:
    """All rational 3-isogenies out of the model (one per rational root of psi_3)."""
    return [three_isogeny(model, r) for r in rational_roots(division_poly_3(model))]


def tate_normal_form(a1, a3) -> WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3, on which (0, 0) has order 3."""
    m = WeierstrassModel(a1, 0, a3, 0, 0)
    m.invariants()
    return m


def quadratic_twist(model: WeierstrassModel, d0) -> WeierstrassModel:
    d0 = frac(d0)
    if d0 == 0:
        raise ZeroTwist("twist by zero")
    m = model.completed_square()
    return WeierstrassModel(0, d0 * m.a2, 0, d0 * d0 * m.a4, d0**3 * m.a6)


def is_isomorphic(m1: WeierstrassModel, m2: WeierstrassModel) -> bool:
    """Isomorphism over Q: equal j and c4, c6 related by a rational u."""
    i1, i2 = m1.invariants(), m2.invariants()
    if i1.j != i2.j:
        return False
    if i1.c6 != 0 and i1.c4 != 0:
        # u^2 = (c6/c6') / (c4/c4')
        u2 = (i1.c6 / i2.c6) / (i1.c4 / i2.c4)
        return is_rational_square(u2)
    if i1.c4 == 0:  # j = 0: u^6 = c6/c6'
        return _is_power(i1.c6 / i2.c6, 6)
    q = i1.c4 / i2.c4  # j = 1728: u^4 = c4/c4'
    return _is_power(q, 4)


def _is_power(q: Fraction, k: int) -> bool:
    if q <= 0:
        return False

    def root(n: int):
        r = round(abs(n) ** (1.0 / k))
        for c in (r - 1, r, r + 1):
            if c >= 0 and c**k == n:
                return True
        return False

    return root(q.numerator) and root(q.denominator)
