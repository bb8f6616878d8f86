"""Local root numbers, local Selmer-parity terms and the identities linking
them, for curves over Q with a rational 2- or 3-isogeny.

A *context* is a :class:`~paritylab.curves.TwoIsogenyPair` or a
:class:`~paritylab.curves.ThreeIsogenyData`; both expose ``curve``,
``isogenous``, ``degree`` and ``kernel_field``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod

from sympy import prime as nth_prime

from .arith import prime_divisors, val
from .localred import (
    ADDITIVE,
    GOOD_ORDINARY,
    GOOD_SUPERSINGULAR,
    NONSPLIT,
    SPLIT,
    LocalReduction,
    tamagawa_ratio,
    tate_algorithm,
)
from .symbols import REAL, Place, artin_quadratic, as_place, hilbert, mu3_in

FORMULA_W = "formula-defined-w"
SINGLE_PATH_SIGMA = "single-path-sigma"


class HypothesisViolated(ValueError):
    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason


class PathDisagreement(RuntimeError):
    pass


class OutOfCases(ValueError):
    pass


class MissingLocalData(ValueError):
    pass


class IdentityViolation(AssertionError):
    def __init__(self, places, message=""):
        super().__init__(message or f"identity fails at {', '.join(map(str, places))}")
        self.places = list(places)


@dataclass(frozen=True)
class LocalParityReport:
    place: Place
    p: int
    w: int
    w_path: str
    sigma: int
    c_ratio_ord: int
    alpha_val: int
    artin: int
    delta_factor: int
    hilbert_pair: int
    identity_holds: bool
    flags: frozenset = frozenset()
    kodaira: str | None = None
    reduction_class: str | None = None
    sigma_table: int | None = None

    def to_json(self) -> dict:
        return {
            "place": str(self.place),
            "p": self.p,
            "kodaira": self.kodaira,
            "class": self.reduction_class,
            "w": self.w,
            "wPath": self.w_path,
            "sigma": self.sigma,
            "sigmaTable": self.sigma_table,
            "cRatioOrd": self.c_ratio_ord,
            "alphaVal": self.alpha_val,
            "artin": self.artin,
            "deltaFactor": self.delta_factor,
            "hilbertPair": self.hilbert_pair,
            "identityHolds": self.identity_holds,
            "flags": sorted(self.flags),
        }


def reduction(ctx, l: int) -> LocalReduction:
    return tate_algorithm(ctx.curve, l)


def check_hypotheses(ctx) -> None:
    """Raise HypothesisViolated unless the relevant parity theorem applies."""
    p = ctx.degree
    red = reduction(ctx, p)
    if p == 2:
        if red.reduction_class == GOOD_SUPERSINGULAR:
            raise HypothesisViolated("supersingular-at-2", str(ctx))
        if red.reduction_class == ADDITIVE:
            raise HypothesisViolated("additive-at-2", str(ctx))
    elif red.reduction_class == ADDITIVE:
        raise HypothesisViolated(f"additive-at-{p}", str(ctx))


def delta_factor(ctx, place) -> int:
    """-1 exactly for p = 3, mu_3 not in Q_v and Kodaira type IV or IV*."""
    v = as_place(place)
    if v.is_real or ctx.degree != 3:
        return 1
    if mu3_in(v):
        return 1
    return -1 if reduction(ctx, v.l).kodaira in ("IV", "IV*") else 1


def _potentially_good_root_number(red: LocalReduction) -> int:
    """Root number at an additive place l >= 5 from the Kodaira data alone."""
    l = red.l
    if red.kodaira.endswith("*") and red.n >= 1:
        return hilbert(-1, l, l)
    e = 12 // gcd(12, red.v_disc)
    if e == 1:
        return 1
    if e in (2, 6):
        return hilbert(-1, l, l)
    if e == 3:
        return hilbert(-3, l, l)
    if e == 4:
        return hilbert(-2, l, l)
    raise OutOfCases(f"semistability defect e={e} at {l}")


def _two_isogeny_additive_w(red: LocalReduction) -> int:
    l = red.l
    if red.kodaira in ("III", "III*"):
        return hilbert(-2, l, l)
    if red.kodaira == "I0*" or (red.kodaira.endswith("*") and red.n >= 1):
        return hilbert(-1, l, l)
    raise OutOfCases(f"Kodaira type {red.kodaira} at {l} for a curve with a 2-torsion point")


def root_number(ctx, place) -> tuple[int, str, frozenset]:
    """(w(E/Q_v), path, flags)."""
    v = as_place(place)
    if v.is_real:
        return -1, "archimedean", frozenset()
    red = reduction(ctx, v.l)
    if red.reduction_class in (GOOD_ORDINARY, GOOD_SUPERSINGULAR, NONSPLIT):
        return 1, "theorem", frozenset()
    if red.reduction_class == SPLIT:
        return -1, "theorem", frozenset()
    l, p = v.l, ctx.degree
    if l == p:
        raise HypothesisViolated(f"additive-at-{p}", str(ctx))
    if p == 2:
        w = _two_isogeny_additive_w(red)
        if l >= 5 and _potentially_good_root_number(red) != w:
            raise PathDisagreement(f"root number table vs Kodaira formula at {l} for {ctx}")
        return w, "table", frozenset()
    w_thm = delta_factor(ctx, v) * artin_quadratic(ctx.kernel_field, v)
    if l >= 5:
        w_tab = _potentially_good_root_number(red)
        if w_tab != w_thm:
            raise PathDisagreement(f"root number {w_tab} (Kodaira) vs {w_thm} (isogeny) at {l} for {ctx}")
        return w_tab, "table", frozenset()
    return w_thm, "theorem", frozenset({FORMULA_W})


def alpha_valuation(ctx, l: int) -> int:
    """v_l of the leading coefficient of the isogeny on formal groups of
    minimal models: v_l(u'/u) with u, u' the scalings to minimal models."""
    if as_place(l).is_real:
        return 0
    u = reduction(ctx, l).scaling
    u_iso = tate_algorithm(ctx.isogenous, l).scaling
    return val(u_iso / u, l)


def _real_components(a2: Fraction, a4: Fraction) -> int:
    """Connected components of y^2 = x^3 + a2 x^2 + a4 x over R."""
    return 2 if a2 * a2 - 4 * a4 > 0 else 1


def _sigma_real(ctx) -> int:
    p = ctx.degree
    if p == 2:
        a, b = ctx.a, ctx.b
        comps_e = _real_components(a, b)
        comps_iso = _real_components(-2 * a, ctx.delta)
        # (0,0) lies on the identity component iff 0 is the largest root of x^3 + a x^2 + b x
        same = comps_e == 2 and a > 0 and b > 0
        image = min(comps_iso, 2 if same else 1)
        coker, ker = comps_iso // image, 2
    else:
        # odd degree: the map on component groups is a bijection
        coker = 1
        ker = p if ctx.d > 0 else 1
    e = val(Fraction(coker, ker), p)
    return -1 if e % 2 else 1


def sigma_local(ctx, place) -> int:
    """sigma_phi(E/Q_v) from the kernel/cokernel sizes: on finite places via
    Tamagawa numbers and the formal-group leading coefficient."""
    v = as_place(place)
    if v.is_real:
        return _sigma_real(ctx)
    try:
        c = tamagawa_ratio(ctx, v.l)
    except Exception as exc:  # pragma: no cover - defensive
        raise MissingLocalData(str(exc)) from exc
    e = c + (alpha_valuation(ctx, v.l) if v.l == ctx.degree else 0)
    return -1 if e % 2 else 1


def sigma_theorem(place, reduction_class: str | None, artin: int, delta: int, p: int) -> int:
    """sigma_phi(E/Q_v) for odd p from the reduction type and the Artin symbol."""
    if p % 2 == 0:
        raise OutOfCases("closed form only for odd p")
    v = as_place(place)
    if v.is_real:
        return -artin
    if reduction_class in (GOOD_ORDINARY, GOOD_SUPERSINGULAR, NONSPLIT):
        return artin
    if reduction_class == SPLIT:
        return -artin
    if reduction_class == ADDITIVE:
        if v.l == p:
            raise OutOfCases(f"additive reduction at {p}")
        return delta
    raise OutOfCases(f"unknown reduction class {reduction_class}")


def hilbert_pair(ctx, place) -> int:
    """(a, -b)_v (-2a, delta)_v for the (a, b) family; 1 for odd degree."""
    if ctx.degree != 2:
        return 1
    return hilbert(ctx.a, -ctx.b, place) * hilbert(-2 * ctx.a, ctx.delta, place)


def check_identity(ctx, place) -> LocalParityReport:
    check_hypotheses(ctx)
    v = as_place(place)
    p = ctx.degree
    w, path, flags = root_number(ctx, v)
    sigma = sigma_local(ctx, v)
    artin = artin_quadratic(ctx.kernel_field, v)
    delta = delta_factor(ctx, v)
    pair = hilbert_pair(ctx, v)
    red = None if v.is_real else reduction(ctx, v.l)
    sig_tab = None
    if p % 2:
        try:
            sig_tab = sigma_theorem(v, red.reduction_class if red else None, artin, delta, p)
        except OutOfCases:
            flags = flags | {SINGLE_PATH_SIGMA}
        if sig_tab is not None and sig_tab != sigma:
            raise PathDisagreement(f"sigma {sigma} (Tamagawa/alpha) vs {sig_tab} (table) at {v} for {ctx}")
        holds = w == artin * sigma
    else:
        holds = w == sigma * pair
    return LocalParityReport(
        place=v,
        p=p,
        w=w,
        w_path=path,
        sigma=sigma,
        c_ratio_ord=0 if v.is_real else tamagawa_ratio(ctx, v.l),
        alpha_val=alpha_valuation(ctx, v.l) if v.l == p else 0,
        artin=artin,
        delta_factor=delta,
        hilbert_pair=pair,
        identity_holds=holds,
        flags=frozenset(flags),
        kodaira=red.kodaira if red else None,
        reduction_class=red.reduction_class if red else None,
        sigma_table=sig_tab,
    )


def support(ctx) -> list[Place]:
    """The real place and every prime dividing 2 p disc(E) disc(E')."""
    primes = prime_divisors(2, ctx.degree, ctx.curve.disc, ctx.isogenous.disc)
    return [REAL] + [Place(l) for l in primes]


@dataclass
class GlobalReport:
    context: object
    reports: list
    W: int
    S: int
    artin_product: int
    pair_product: int
    corollary: int | None
    spot_primes: list
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def split_count(self) -> int:
        return sum(1 for r in self.reports if r.reduction_class == SPLIT)

    def to_json(self) -> dict:
        return {
            "W": self.W,
            "S": self.S,
            "artinProduct": self.artin_product,
            "pairProduct": self.pair_product,
            "corollary": self.corollary,
            "spotPrimes": self.spot_primes,
            "failures": self.failures,
        }


def _random_primes_outside(excluded: set, rng: random.Random, count: int) -> list[int]:
    out: list[int] = []
    while len(out) < count:
        q = int(nth_prime(rng.randint(1, 200)))
        if q not in excluded and q not in out:
            out.append(q)
    return out


def global_check(ctx, rng: random.Random | None = None, spot_checks: int = 5, strict: bool = True) -> GlobalReport:
    """Local reports over the support, their products, and the checks
    W = S, product of Artin symbols = 1, product of Hilbert pairs = 1 and,
    for p = 3, the closed formula for W."""
    rng = rng or random.Random(0)
    places = support(ctx)
    reports = [check_identity(ctx, v) for v in places]
    failures = [f"identity@{r.place}" for r in reports if not r.identity_holds]
    W = prod(r.w for r in reports)
    S = prod(r.sigma for r in reports)
    if W != S:
        failures.append("W!=S")

    # symbols can be nontrivial at primes of the kernel field / of a; include them
    extra = set(prime_divisors(Fraction(ctx.kernel_field))) - {v.l for v in places}
    if ctx.degree == 2:
        extra |= set(prime_divisors(ctx.a)) - {v.l for v in places}
    artin_product = prod(artin_quadratic(ctx.kernel_field, v) for v in places)
    artin_product *= prod(artin_quadratic(ctx.kernel_field, l) for l in extra)
    pair_product = prod(r.hilbert_pair for r in reports)
    for l in sorted(extra):
        pr = hilbert_pair(ctx, l)
        pair_product *= pr
        if pr != 1:
            failures.append(f"pair@{l}")
    if artin_product != 1:
        failures.append("artin-product")
    if pair_product != 1:
        failures.append("pair-product")

    corollary = None
    if ctx.degree % 2:
        s = sum(1 for r in reports if r.reduction_class == SPLIT)
        add = prod(r.delta_factor * r.artin for r in reports if r.reduction_class == ADDITIVE)
        corollary = -((-1) ** s) * add
        if corollary != W:
            failures.append("corollary")

    spot = _random_primes_outside({v.l for v in places} | extra, rng, spot_checks)
    for q in spot:
        r = check_identity(ctx, q)
        if (r.w, r.sigma, r.artin, r.hilbert_pair, r.delta_factor) != (1, 1, 1, 1, 1):
            failures.append(f"spot@{q}")

    rep = GlobalReport(ctx, reports, W, S, artin_product, pair_product, corollary, spot, failures)
    if strict and failures:
        raise IdentityViolation(failures, f"{ctx}: {', '.join(failures)}")
    return rep
