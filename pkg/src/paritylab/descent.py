"""Descent via 2-isogeny: Selmer groups from everywhere-local solvability
of the quartics

    C_d : d w^2 = d^2 u^4 + a d u^2 v^2 + b v^4,

one for each squarefree d dividing b.  These give an independent route to
the parity of the 2-infinity Selmer rank.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, isqrt, lcm, prod

import numpy as np
from sympy import prime as nth_prime

from .arith import prime_divisors, squarefree_part
from .curves import TwoIsogenyPair
from .symbols import Place, as_place

PHI = "phi"
PHIHAT = "phihat"
MAX_DOUBLINGS = 3


class PrecisionExhausted(RuntimeError):
    pass


class SelmerInconsistency(AssertionError):
    pass


def _v(n: int, l: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    k = 0
    while n % l == 0:
        n //= l
        k += 1
    return k


def _is_square_int_local(n: int, l: int) -> bool:
    """Is the nonzero integer n a square in Q_l?"""
    k = _v(n, l)
    if k % 2:
        return False
    u = n // l**k
    if l == 2:
        return u % 8 == 1
    return pow(u % l, (l - 1) // 2, l) == 1


def _taylor(f: list[int], x0: int, h: int) -> list[int]:
    """Coefficients of f(x0 + h t) in t."""
    n = len(f)
    return [
        sum(f[j] * comb(j, i) * x0 ** (j - i) for j in range(i, n)) * h**i
        for i in range(n)
    ]


def _disc_has_square(f: list[int], l: int, x0: int, k: int, max_k: int) -> bool:
    """Does f take a square value (0 included) on x0 + l^k Z_l?"""
    need = 3 if l == 2 else 1  # 1 + l^need Z_l consists of squares
    stack = [(x0, k)]
    while stack:
        x, kk = stack.pop()
        c = _taylor(f, x, l**kk)
        if c[0] == 0:
            return True
        v0 = _v(c[0], l)
        rest = min((_v(ci, l) for ci in c[1:] if ci), default=None)
        if rest is None or rest - v0 >= need:
            # square class of f is constant on the disc
            if _is_square_int_local(c[0], l):
                return True
            continue
        if c[1]:
            # Hensel on f at x: a root within l^(v0 - mu) of x, inside the disc
            mu = _v(c[1], l) - kk
            if v0 > 2 * mu and v0 - mu >= kk:
                return True
        if kk >= max_k:
            raise PrecisionExhausted(f"l={l}, disc {x} + {l}^{kk}")
        step = l**kk
        stack.extend((x + t * step, kk + 1) for t in range(l))
    return False


@dataclass(frozen=True)
class Torsor:
    """C_d for the pair y^2 = x^3 + a x^2 + b x (integral a, b)."""

    d: int
    a: int
    b: int

    def __post_init__(self):
        if self.d == 0 or squarefree_part(self.d) != self.d:
            raise ValueError(f"d={self.d} is not squarefree")

    def quartic(self) -> list[int]:
        """d (d^2 x^4 + a d x^2 + b), low degree first; C_d has a point with
        v != 0 iff this takes a square value at x = u/v."""
        d, a, b = self.d, self.a, self.b
        return [d * b, 0, d * d * a, 0, d**3]

    def reversed_quartic(self) -> list[int]:
        """The same in the chart y = v/u."""
        d, a, b = self.d, self.a, self.b
        return [d**3, 0, d * d * a, 0, d * b]

    def contains(self, u: int, v: int, w: Fraction) -> bool:
        d, a, b = self.d, self.a, self.b
        return d * w * w == d * d * u**4 + a * d * u * u * v * v + b * v**4


def default_precision(torsor: Torsor, l: int) -> int:
    v = _v(16 * torsor.b * (torsor.a**2 - 4 * torsor.b), l)
    return max(2 * v + 3, v + 10)


def local_solvable(torsor: Torsor, place, precision: int | None = None) -> bool:
    v = as_place(place)
    d, a, b = torsor.d, torsor.a, torsor.b
    if v.is_real:
        if d > 0 or b < 0:
            return True
        # d < 0, b > 0: need d^2 X^2 + a d X + b <= 0 for some X >= 0
        return a * a - 4 * b >= 0 and a > 0
    l = v.l
    max_k = precision if precision is not None else default_precision(torsor, l)
    if _disc_has_square(torsor.reversed_quartic(), l, 0, 1, max_k):
        return True
    return _disc_has_square(torsor.quartic(), l, 0, 0, max_k)


def _solvable_with_retries(torsor: Torsor, place) -> bool:
    v = as_place(place)
    prec = None if v.is_real else default_precision(torsor, v.l)
    for _ in range(MAX_DOUBLINGS + 1):
        try:
            return local_solvable(torsor, v, prec)
        except PrecisionExhausted:
            prec *= 2
    raise PrecisionExhausted(f"{torsor} at {v} after {MAX_DOUBLINGS} doublings")


def _integral(pair: TwoIsogenyPair) -> tuple[int, int]:
    u = lcm(pair.a.denominator, pair.b.denominator)
    p = pair.scaled(u)
    return int(p.a), int(p.b)


def _squarefree_divisors(n: int) -> list[int]:
    ps = prime_divisors(n)
    out = []
    for r in range(len(ps) + 1):
        for sub in combinations(ps, r):
            m = prod(sub)
            out += [m, -m]
    return sorted(out, key=lambda x: (abs(x), x))


def _sqfree_mul(x: int, y: int) -> int:
    return squarefree_part(x * y)


@dataclass(frozen=True)
class SelmerGroup:
    direction: str
    classes: frozenset

    @property
    def dimension(self) -> int:
        return len(self.classes).bit_length() - 1

    def __contains__(self, d) -> bool:
        return squarefree_part(d) in self.classes

    def to_json(self) -> list[int]:
        return sorted(self.classes, key=lambda x: (abs(x), x))


def selmer_group(pair: TwoIsogenyPair, direction: str = PHI, rng: random.Random | None = None) -> SelmerGroup:
    """Classes d | b with C_d everywhere locally solvable.

    ``phi`` uses the torsors of (a, b), i.e. the image of E(Q) under
    (x, y) -> x; ``phihat`` uses those of the dual pair (-2a, delta)."""
    if direction == PHIHAT:
        pair = pair.dual()
    elif direction != PHI:
        raise ValueError(f"unknown direction {direction!r}")
    a, b = _integral(pair)
    delta = a * a - 4 * b
    places = [Place(0)] + [Place(l) for l in prime_divisors(2 * b * delta)]
    rng = rng or random.Random(0)
    classes = set()
    for d in _squarefree_divisors(b):
        T = Torsor(d, a, b)
        if all(_solvable_with_retries(T, v) for v in places):
            classes.add(d)
            # guard: good places of the torsor must be solvable
            q = _extra_prime(2 * b * delta * d, rng)
            if not _solvable_with_retries(T, q):
                raise SelmerInconsistency(f"{T} not solvable at good prime {q}")
    for x in classes:
        for y in classes:
            if _sqfree_mul(x, y) not in classes:
                raise SelmerInconsistency(f"Selmer set not closed: {x}*{y}")
    if 1 not in classes or squarefree_part(b) not in classes:
        raise SelmerInconsistency("Selmer set misses a forced class")
    return SelmerGroup(direction, frozenset(classes))


def _extra_prime(n: int, rng: random.Random) -> int:
    while True:
        q = int(nth_prime(rng.randint(3, 100)))
        if n % q:
            return q


def parity_oracle(pair: TwoIsogenyPair, rng: random.Random | None = None) -> int:
    """(-1)^(dim S^phi + dim S^phihat); both sides contain the forced
    2-torsion class, so no further correction term enters."""
    rng = rng or random.Random(0)
    s1 = selmer_group(pair, PHI, rng)
    s2 = selmer_group(pair, PHIHAT, rng)
    return -1 if (s1.dimension + s2.dimension) % 2 else 1


def search_points(a: int, b: int, height: int = 10**4) -> list[tuple[Fraction, Fraction]]:
    """Rational points (m/e^2, k/e^3) on y^2 = x^3 + a x^2 + b x with
    max(|m|, e^2) <= height and y >= 0."""
    ms = np.arange(-height, height + 1, dtype=np.int64)
    found = []
    for e in range(1, isqrt(height) + 1):
        e2 = e * e
        rhs = ms * (ms * ms + a * ms * e2 + b * e2 * e2)
        ok = rhs >= 0
        r = np.sqrt(rhs.clip(min=0).astype(np.float64)).round().astype(np.int64)
        hit = ok & (r * r == rhs)
        for m, k in zip(ms[hit].tolist(), r[hit].tolist()):
            if np.gcd(m, e) == 1:
                found.append((Fraction(m, e2), Fraction(k, e2 * e)))
    return found


def check_point_soundness(pair: TwoIsogenyPair, group: SelmerGroup, height: int = 10**4) -> list:
    """Points found on the torsors' base curve whose x-class escapes the group."""
    base = pair if group.direction == PHI else pair.dual()
    a, b = _integral(base)
    bad = []
    for x, y in search_points(a, b, height):
        if x != 0 and squarefree_part(x) not in group.classes:
            bad.append((x, y))
    return bad


@dataclass(frozen=True)
class DescentReport:
    selmer_phi: SelmerGroup
    selmer_phihat: SelmerGroup
    parity: int

    def to_json(self) -> dict:
        return {
            "selmer_phi": self.selmer_phi.to_json(),
            "selmer_phihat": self.selmer_phihat.to_json(),
            "oracle": self.parity,
        }


def descent(pair: TwoIsogenyPair, rng: random.Random | None = None) -> DescentReport:
    rng = rng or random.Random(0)
    s1 = selmer_group(pair, PHI, rng)
    s2 = selmer_group(pair, PHIHAT, rng)
    return DescentReport(s1, s2, -1 if (s1.dimension + s2.dimension) % 2 else 1)
