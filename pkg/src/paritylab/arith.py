"""Small exact number-theory helpers shared by the other modules.

Everything works on Python ints and :class:`fractions.Fraction`; factoring and
primality are delegated to sympy.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterable, Union

from sympy import QQ, Poly, factorint, isprime, symbols
from sympy import Rational as SR

Rational = Union[int, Fraction]


def frac(x) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def val(x: Rational, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = frac(x)
    if x == 0:
        raise ValueError("valuation of zero")
    n, d = x.numerator, x.denominator
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def val0(x: Rational, p: int, cap: int = 10**6) -> int:
    """Like :func:`val` but returns ``cap`` for zero."""
    return cap if x == 0 else val(x, p)


def unit_part(x: Rational, p: int) -> Fraction:
    x = frac(x)
    return x / Fraction(p) ** val(x, p)


def mod_p(x: Rational, p: int, k: int = 1) -> int:
    """Reduce a p-integral rational modulo p**k."""
    x = frac(x)
    m = p**k
    if x.denominator % p == 0:
        raise ValueError(f"{x} is not {p}-integral")
    return x.numerator * pow(x.denominator, -1, m) % m


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p; 0 when p | a."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def is_prime(n: int) -> bool:
    return n > 1 and bool(isprime(n))


@lru_cache(maxsize=4096)
def _factor(n: int) -> tuple:
    return tuple(sorted(factorint(n).items()))


def factor(n: int) -> dict[int, int]:
    """Prime factorisation of |n| (n nonzero)."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("factor of zero")
    return dict(_factor(n))


def prime_divisors(*xs: Rational) -> list[int]:
    """Sorted primes dividing the numerator or denominator of any of xs."""
    ps: set[int] = set()
    for x in xs:
        x = frac(x)
        if x == 0:
            continue
        ps.update(factor(x.numerator))
        ps.update(factor(x.denominator))
    return sorted(ps)


def squarefree_part(x: Rational) -> int:
    """The squarefree integer in the square class of a nonzero rational."""
    x = frac(x)
    if x == 0:
        raise ValueError("squarefree part of zero")
    n = x.numerator * x.denominator  # same square class as x
    s = -1 if n < 0 else 1
    for p, e in factor(n).items():
        if e % 2:
            s *= p
    return s


def is_rational_square(x: Rational) -> bool:
    x = frac(x)
    if x < 0:
        return False
    n, d = x.numerator, x.denominator
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


def is_local_square(x: Rational, p: int) -> bool:
    """Is the nonzero rational x a square in Q_p?"""
    x = frac(x)
    if x == 0:
        raise ValueError("zero")
    v = val(x, p)
    if v % 2:
        return False
    u = unit_part(x, p)
    if p == 2:
        return mod_p(u, 2, 3) == 1
    return legendre(mod_p(u, p), p) == 1


def is_real_square(x: Rational) -> bool:
    return frac(x) > 0


# --- polynomials over F_p (coefficient lists, lowest degree first) ---------


def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _polymod(f: list[int], g: list[int], p: int) -> list[int]:
    f = _trim([c % p for c in f])
    g = _trim([c % p for c in g])
    inv = pow(g[-1], -1, p)
    while len(f) >= len(g):
        c = f[-1] * inv % p
        shift = len(f) - len(g)
        for i, gi in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gi) % p
        _trim(f)
    return f


def _polymulmod(f: list[int], g: list[int], m: list[int], p: int) -> list[int]:
    out = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _polymod(out, m, p)


def _polygcd(f: list[int], g: list[int], p: int) -> list[int]:
    f = _trim([c % p for c in f])
    g = _trim([c % p for c in g])
    while g:
        f, g = g, _polymod(f, g, p)
    return f


def count_roots_mod_p(coeffs: Iterable[int], p: int) -> int:
    """Number of distinct roots in F_p of the polynomial sum c_i x^i."""
    f = _trim([int(c) % p for c in coeffs])
    if not f:
        return p
    if len(f) == 1:
        return 0
    if p < 64:
        return sum(1 for x in range(p) if sum(c * pow(x, i, p) for i, c in enumerate(f)) % p == 0)
    # gcd(f, x^p - x) has one linear factor per distinct root
    result = [1]
    base = _polymod([0, 1], f, p)
    e = p
    while e:
        if e & 1:
            result = _polymulmod(result, base, f, p)
        base = _polymulmod(base, base, f, p)
        e >>= 1
    xp_minus_x = result + [0] * max(0, 2 - len(result))
    xp_minus_x[1] = (xp_minus_x[1] - 1) % p
    g = _polygcd(f, xp_minus_x, p)
    return len(g) - 1


def has_root_mod_p(coeffs: Iterable[int], p: int) -> bool:
    return count_roots_mod_p(coeffs, p) > 0


def rational_roots(coeffs: list[Rational]) -> list[Fraction]:
    """Distinct rational roots of sum c_i x^i (lowest degree first)."""
    x = symbols("x")
    expr = sum(SR(frac(c).numerator, frac(c).denominator) * x**i for i, c in enumerate(coeffs))
    roots = Poly(expr, x, domain=QQ).ground_roots()
    return sorted(Fraction(int(r.p), int(r.q)) for r in roots)
