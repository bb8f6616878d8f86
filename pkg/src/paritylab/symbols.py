"""Hilbert symbols over Q_v, quadratic Artin symbols, and the criterion for
-1 being a norm in a tame cyclic extension of a p-adic field."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .arith import frac, is_local_square, is_prime, legendre, mod_p, unit_part, val


class ZeroArgument(ValueError):
    pass


class InconsistentDatum(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Place:
    """A place of Q: a prime l, or the real place (l = 0)."""

    l: int = 0

    def __post_init__(self):
        if self.l != 0 and not is_prime(self.l):
            raise ValueError(f"{self.l} is not prime")

    @property
    def is_real(self) -> bool:
        return self.l == 0

    def __str__(self) -> str:
        return "inf" if self.is_real else str(self.l)


REAL = Place(0)


def as_place(v) -> Place:
    if isinstance(v, Place):
        return v
    if v in ("inf", "real", "oo", None):
        return REAL
    return Place(int(v))


def hilbert(x, y, place) -> int:
    """(x, y)_v: 1 iff y is a norm from Q_v(sqrt(x))."""
    x, y = frac(x), frac(y)
    if x == 0 or y == 0:
        raise ZeroArgument("Hilbert symbol of zero")
    v = as_place(place)
    if v.is_real:
        return -1 if (x < 0 and y < 0) else 1
    p = v.l
    a, b = val(x, p), val(y, p)
    u, w = unit_part(x, p), unit_part(y, p)
    if p == 2:
        u8, w8 = mod_p(u, 2, 3), mod_p(w, 2, 3)
        eps_u, eps_w = (u8 - 1) // 2 % 2, (w8 - 1) // 2 % 2
        om_u, om_w = (u8 * u8 - 1) // 8 % 2, (w8 * w8 - 1) // 8 % 2
        e = eps_u * eps_w + a * om_w + b * om_u
        return -1 if e % 2 else 1
    s = -1 if (a * b * ((p - 1) // 2)) % 2 else 1
    if b % 2:
        s *= legendre(mod_p(u, p), p)
    if a % 2:
        s *= legendre(mod_p(w, p), p)
    return s


def square_class(x, p: int) -> tuple:
    """Key identifying the class of a nonzero rational in Q_p*/Q_p*^2."""
    x = frac(x)
    a = val(x, p)
    u = unit_part(x, p)
    if p == 2:
        return (a % 2, mod_p(u, 2, 3))
    return (a % 2, legendre(mod_p(u, p), p))


def hilbert_by_norm_search(x, y, p: int, bound: int | None = None) -> int:
    """(x, y)_p from its definition: enumerate norms s^2 - x t^2 of small
    integers s, t and record which square classes of Q_p they reach.

    Norms form a subgroup of index 2 in Q_p*/Q_p*^2 when x is not a square,
    so the search stops once half of the classes have been seen."""
    x, y = frac(x), frac(y)
    if x == 0 or y == 0:
        raise ZeroArgument("Hilbert symbol of zero")
    if is_local_square(x, p):
        return 1
    xi = x.numerator * x.denominator  # same square class, integral
    need = 4 if p == 2 else 2
    bound = bound or (2**10 if p == 2 else 4 * p * p)
    seen: set[tuple] = set()
    for s, t in product(range(bound + 1), range(1, bound + 1)):
        n = s * s - xi * t * t
        if n:
            seen.add(square_class(n, p))
            if len(seen) >= need:
                break
    else:
        raise RuntimeError(f"norm search did not close up at p={p}")
    return 1 if square_class(y, p) in seen else -1


def artin_quadratic(d, place) -> int:
    """(-1, Q_v(sqrt d)/Q_v): 1 iff -1 is a norm from Q_v(sqrt d)."""
    return hilbert(d, -1, place)


@dataclass(frozen=True)
class LocalFieldDatum:
    """Q_p <= F <= F' with F'/F cyclic: residue degree f of F over F_p,
    ramification index e and degree of F'/F."""

    p: int
    f_residue: int
    e_ram: int
    degree: int

    def validate(self):
        if self.p == 2 or not is_prime(self.p):
            raise InconsistentDatum("p must be an odd prime")
        if min(self.f_residue, self.e_ram, self.degree) < 1:
            raise InconsistentDatum("degrees must be positive")
        if self.degree % self.e_ram or (self.p - 1) % self.degree:
            raise InconsistentDatum("need e | [F':F] | p - 1")


def minus_one_norm_symbol(datum: LocalFieldDatum) -> int:
    """(-1, F'/F) for a cyclic extension of degree dividing p - 1: trivial
    exactly when the residue field of F has even degree over F_p or
    (p - 1)/e is even."""
    datum.validate()
    if datum.f_residue % 2 == 0 or ((datum.p - 1) // datum.e_ram) % 2 == 0:
        return 1
    return -1


def mu3_in(place) -> bool:
    """Does Q_v contain the cube roots of unity?"""
    v = as_place(place)
    return (not v.is_real) and v.l % 3 == 1
