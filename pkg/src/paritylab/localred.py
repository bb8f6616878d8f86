"""Tate's algorithm at a single prime: minimal model, Kodaira symbol,
Tamagawa number and reduction class.

The working model is kept globally integral (plain ints); each step is a
change of coordinates with integral r, s, t or a division by u = l.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import _polygcd, count_roots_mod_p, is_prime, legendre, val, val0
from .curves import WeierstrassModel, transform

GOOD_ORDINARY = "good-ordinary"
GOOD_SUPERSINGULAR = "good-supersingular"
SPLIT = "multiplicative-split"
NONSPLIT = "multiplicative-nonsplit"
ADDITIVE = "additive"


class NotMultiplicative(ValueError):
    pass


@dataclass(frozen=True)
class LocalReduction:
    l: int
    minimal_model: WeierstrassModel
    scaling: Fraction
    kodaira: str
    tamagawa: int
    v_disc: int
    reduction_class: str
    # full change of coordinates (u, r, s, t) from the input model to minimal_model
    change: tuple = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))

    @property
    def is_good(self) -> bool:
        return self.kodaira == "I0"

    @property
    def is_multiplicative(self) -> bool:
        return self.reduction_class in (SPLIT, NONSPLIT)

    @property
    def is_additive(self) -> bool:
        return self.reduction_class == ADDITIVE

    @property
    def n(self) -> int:
        """Index n of I_n or I_n* (0 for other symbols)."""
        k = self.kodaira
        if k.startswith("I") and k[1:2].isdigit():
            return int(k[1:].rstrip("*"))
        return 0

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "kodaira": self.kodaira,
            "c": self.tamagawa,
            "vDelta": self.v_disc,
            "class": self.reduction_class,
        }


def _compose(c1: tuple, c2: tuple) -> tuple:
    u1, r1, s1, t1 = c1
    u2, r2, s2, t2 = c2
    return (u1 * u2, r1 + u1 * u1 * r2, s1 + u1 * s2, t1 + u1 * u1 * s1 * r2 + u1**3 * t2)


class _Work:
    """Mutable integral model plus the accumulated change of coordinates."""

    def __init__(self, model: WeierstrassModel, change: tuple):
        self.model = model
        self.change = change

    def rst(self, r=0, s=0, t=0):
        self.model = transform(self.model, 1, r, s, t)
        self.change = _compose(self.change, (Fraction(1), Fraction(r), Fraction(s), Fraction(t)))

    def scale(self, u):
        self.model = transform(self.model, u)
        self.change = _compose(self.change, (Fraction(u), Fraction(0), Fraction(0), Fraction(0)))

    @property
    def a(self) -> tuple:
        return tuple(int(x) for x in self.model.ainvs)


def _quadroots(a: int, b: int, c: int, p: int) -> bool:
    """Does a x^2 + b x + c have a root in F_p?"""
    return count_roots_mod_p([c, b, a], p) > 0


def _inv(x: int, p: int) -> int:
    return pow(x % p, -1, p)


def _is_ordinary(model: WeierstrassModel, l: int) -> bool:
    """Good reduction at l assumed; ordinary iff a_l is prime to l."""
    a1, a2, a3, a4, a6 = (int(x) for x in model.ainvs)
    if l == 2:
        return a1 % 2 == 1
    # y^2 = f(x) over F_l after completing the square
    i2 = _inv(2, l)
    A2 = (a2 + a1 * a1 * i2 * i2) % l
    A4 = (a4 + a1 * a3 * i2) % l
    A6 = (a6 + a3 * a3 * i2 * i2) % l
    ap = -sum(legendre((x * x * x + A2 * x * x + A4 * x + A6) % l, l) for x in range(l))
    return ap % l != 0


@lru_cache(maxsize=65536)
def tate_algorithm(model: WeierstrassModel, l: int) -> LocalReduction:
    if not is_prime(l):
        raise ValueError(f"{l} is not prime")
    model.invariants()
    p = l
    start, u0 = model.integral_model()
    w = _Work(start, (u0, Fraction(0), Fraction(0), Fraction(0)))

    def pdiv(x) -> bool:
        return x % p == 0

    def pval(x) -> int:
        return val0(x, p)

    while True:
        a1, a2, a3, a4, a6 = w.a
        m = w.model
        b2, b4, b6, b8 = (int(x) for x in (m.b2, m.b4, m.b6, m.b8))
        c4, c6 = int(m.c4), int(m.c6)
        vd = val(m.disc, p)

        if vd == 0:
            cls = GOOD_ORDINARY if _is_ordinary(m, p) else GOOD_SUPERSINGULAR
            return _result(model, w, p, "I0", 1, 0, cls)

        # move the singular point of the reduction to (0, 0)
        if p == 2:
            if pdiv(b2):
                r = a4 % 2
                t = (((r + a2) * r + a4) * r + a6) % 2
            else:
                r = a3 % 2  # a1 is odd, so a1^-1 = 1 mod 2
                t = (a4 + r * r) % 2
        elif p == 3:
            r = (-b6) % 3 if pdiv(b2) else (-_inv(b2, 3) * b4) % 3
            t = (a1 * r + a3) % 3
        else:
            if pdiv(c4):
                r = (-_inv(12, p) * b2) % p
            else:
                r = (-_inv(12 * c4, p) * (c6 + b2 * c4)) % p
            t = (-_inv(2, p) * (a1 * r + a3)) % p
        w.rst(r, 0, t)
        a1, a2, a3, a4, a6 = w.a
        m = w.model
        b6, b8 = int(m.b6), int(m.b8)

        if not pdiv(c4):
            if _quadroots(1, a1, -a2, p):
                return _result(model, w, p, f"I{vd}", vd, vd, SPLIT)
            return _result(model, w, p, f"I{vd}", 2 if vd % 2 == 0 else 1, vd, NONSPLIT)

        if pval(a6) < 2:
            return _result(model, w, p, "II", 1, vd, ADDITIVE)
        if pval(b8) < 3:
            return _result(model, w, p, "III", 2, vd, ADDITIVE)
        if pval(b6) < 3:
            c = 3 if _quadroots(1, a3 // p, -(a6 // p**2), p) else 1
            return _result(model, w, p, "IV", c, vd, ADDITIVE)

        # arrange p | a1, a2; p^2 | a3, a4; p^3 | a6
        if p == 2:
            s = a2 % 2
            t = 2 * ((a6 // 4) % 2)
        else:
            i2 = _inv(2, p * p)
            s = (-a1 * i2) % p
            t = (-a3 * i2) % (p * p)
        w.rst(0, s, t)
        a1, a2, a3, a4, a6 = w.a

        # the cubic T^3 + b T^2 + c T + d
        b, c, d = a2 // p, a4 // p**2, a6 // p**3
        disc = 27 * d * d - b * b * c * c + 4 * b**3 * d - 18 * b * c * d + 4 * c**3
        x = 3 * c - b * b
        if not pdiv(disc):
            cp = 1 + count_roots_mod_p([d, c, b, 1], p)
            return _result(model, w, p, "I0*", cp, vd, ADDITIVE)

        if not pdiv(x):
            # double root: move it to T = 0
            if p == 2:
                r = c % 2
            elif p == 3:
                r = c * _inv(b, 3) % 3
            else:
                r = (b * c - 9 * d) * _inv(2 * x, p) % p
            w.rst(p * r, 0, 0)
            ix = iy = 3
            mx = my = p * p
            while True:
                a1, a2, a3, a4, a6 = w.a
                a2t, a3t, a4t, a6t = a2 // p, a3 // my, a4 // (p * mx), a6 // (mx * my)
                if pdiv(a3t * a3t + 4 * a6t):
                    t = my * (a6t % 2) if p == 2 else my * ((-a3t * _inv(2, p)) % p)
                    w.rst(0, 0, t)
                    my *= p
                    iy += 1
                    a1, a2, a3, a4, a6 = w.a
                    a2t, a3t, a4t, a6t = a2 // p, a3 // my, a4 // (p * mx), a6 // (mx * my)
                    if pdiv(a4t * a4t - 4 * a6t * a2t):
                        if p == 2:
                            r = mx * ((a6t * _inv(a2t, 2)) % 2)
                        else:
                            r = mx * ((-a4t * _inv(2 * a2t, p)) % p)
                        w.rst(r, 0, 0)
                        mx *= p
                        ix += 1
                    else:
                        cp = 4 if _quadroots(a2t, a4t, a6t, p) else 2
                        break
                else:
                    cp = 4 if _quadroots(1, a3t, -a6t, p) else 2
                    break
            n = ix + iy - 5
            return _result(model, w, p, f"I{n}*", cp, vd, ADDITIVE)

        # triple root: move it to T = 0
        if p == 2:
            r = b % 2
        elif p == 3:
            r = (-d) % 3
        else:
            r = (-b * _inv(3, p)) % p
        w.rst(p * r, 0, 0)
        a1, a2, a3, a4, a6 = w.a
        x3t, x6t = a3 // p**2, a6 // p**4
        if not pdiv(x3t * x3t + 4 * x6t):
            cp = 3 if _quadroots(1, x3t, -x6t, p) else 1
            return _result(model, w, p, "IV*", cp, vd, ADDITIVE)
        if p == 2:
            t = -4 * (x6t % 2)
        else:
            t = p * p * ((-x3t * _inv(2, p)) % p)
        w.rst(0, 0, t)
        a1, a2, a3, a4, a6 = w.a
        if pval(a4) < 4:
            return _result(model, w, p, "III*", 2, vd, ADDITIVE)
        if pval(a6) < 6:
            return _result(model, w, p, "II*", 1, vd, ADDITIVE)
        # not minimal: divide through by p
        w.scale(p)


def _result(orig, w: _Work, l: int, kod: str, c: int, vd: int, cls: str) -> LocalReduction:
    return LocalReduction(
        l=l,
        minimal_model=w.model,
        scaling=w.change[0],
        kodaira=kod,
        tamagawa=c,
        v_disc=vd,
        reduction_class=cls,
        change=w.change,
    )


def classify_multiplicative(red: LocalReduction) -> str:
    """'split' or 'nonsplit', from the tangent cone at the node of the
    reduced minimal model (recomputed here independently of the algorithm)."""
    if not red.is_multiplicative:
        raise NotMultiplicative(f"{red.kodaira} at {red.l} is not multiplicative")
    l = red.l
    a1, a2, a3, a4, a6 = (int(x) % l for x in red.minimal_model.ainvs)
    if l == 2:
        for x in range(2):
            for y in range(2):
                F = (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % 2
                Fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4) % 2
                Fy = (2 * y + a1 * x + a3) % 2
                if F == Fx == Fy == 0:
                    m = transform(red.minimal_model, 1, x, 0, y)
                    b1, b2_ = int(m.a1) % 2, int(m.a2) % 2
                    # slopes m satisfy m^2 + a1 m - a2 = 0
                    return "split" if any((s * s + b1 * s - b2_) % 2 == 0 for s in range(2)) else "nonsplit"
        raise AssertionError("no singular point found")
    # odd l: y^2 = g(x); the node sits over the double root x0 of g and the
    # tangent slopes are the square roots of g''(x0)/2 = 3 x0 + A2
    i2 = _inv(2, l)
    A2 = (a2 + a1 * a1 * i2 * i2) % l
    A4 = (a4 + a1 * a3 * i2) % l
    # g' = 3x^2 + 2A2 x + A4 shares the root x0 with g; a double root of a
    # cubic over F_l with l odd is rational, find it directly
    x0 = _double_root(A2, A4, (a6 + a3 * a3 * i2 * i2) % l, l)
    return "split" if legendre(3 * x0 + A2, l) == 1 else "nonsplit"


def _double_root(A2: int, A4: int, A6: int, l: int) -> int:
    g = [A6, A4, A2, 1]
    dg = [A4, 2 * A2, 3]
    h = _polygcd(g, dg, l)
    if len(h) != 2:
        raise AssertionError("reduction is not nodal")
    return (-h[0] * _inv(h[1], l)) % l


def tamagawa_ratio(context, l: int) -> int:
    """ord_p of c(E')/c(E) at l, p the degree of the isogeny."""
    p = context.degree
    c1 = tate_algorithm(context.curve, l).tamagawa
    c2 = tate_algorithm(context.isogenous, l).tamagawa
    return val(Fraction(c2, c1), p)
