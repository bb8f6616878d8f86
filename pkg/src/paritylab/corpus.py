"""Corpus generation and end-to-end verification of the local and global
parity identities, with JSONL/CSV reporting."""

from __future__ import annotations

import csv
import json
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterator

from .curves import (
    DegenerateFamily,
    SingularModel,
    tate_normal_form,
    three_isogeny,
    two_isogeny_pair,
)
from .descent import descent
from .parity import (
    FORMULA_W,
    HypothesisViolated,
    PathDisagreement,
    check_hypotheses,
    global_check,
)

TWO = "two"
THREE = "three"


class EmptyCorpus(ValueError):
    pass


class InvalidSpec(ValueError):
    pass


@dataclass(frozen=True)
class CorpusSpec:
    """For the two-isogeny family the boxes are (a, b), with b multiplied
    by ``b_scale``; for the three-isogeny family they are Tate-normal
    (a1, a3).  ``twists`` are applied to every base curve."""

    family: str
    a_range: tuple[int, int]
    b_range: tuple[int, int]
    twists: tuple[int, ...] = (1,)
    b_scale: int = 1
    include_duals: bool = False
    max_curves: int | None = None
    max_disc: int | None = None

    def __post_init__(self):
        if self.family not in (TWO, THREE):
            raise InvalidSpec(f"family must be {TWO!r} or {THREE!r}")
        for name, (lo, hi) in (("a", self.a_range), ("b", self.b_range)):
            if lo > hi:
                raise InvalidSpec(f"empty {name}-range {lo}:{hi}")
        if not self.twists or 0 in self.twists:
            raise InvalidSpec("twists must be nonempty and nonzero")
        if self.b_scale == 0:
            raise InvalidSpec("b_scale must be nonzero")

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "aRange": list(self.a_range),
            "bRange": list(self.b_range),
            "twists": list(self.twists),
            "bScale": self.b_scale,
            "includeDuals": self.include_duals,
            "maxCurves": self.max_curves,
            "maxDisc": self.max_disc,
        }


def _candidates(spec: CorpusSpec) -> Iterator[tuple[str, object]]:
    """(id, context or skip reason) in a fixed order."""
    alo, ahi = spec.a_range
    blo, bhi = spec.b_range
    for x in range(alo, ahi + 1):
        for y in range(blo, bhi + 1):
            if spec.family == TWO:
                if x == 0 or y == 0:
                    continue
                for eta in spec.twists:
                    a, b = eta * x, eta * eta * spec.b_scale * y
                    cid = f"two:a={a},b={b}"
                    try:
                        pair = two_isogeny_pair(a, b)
                    except DegenerateFamily:
                        yield cid, "degenerate"
                        continue
                    yield cid, pair
                    if spec.include_duals:
                        yield f"two:dual(a={a},b={b})", pair.dual()
            else:
                if y == 0:
                    continue
                for d0 in spec.twists:
                    cid = f"three:a1={x},a3={y},d0={d0}"
                    try:
                        ctx = three_isogeny(tate_normal_form(x, y), 0)
                        if d0 != 1:
                            ctx = ctx.twist(d0)
                    except SingularModel:
                        yield cid, "degenerate"
                        continue
                    yield cid, ctx


@dataclass
class Corpus:
    spec: CorpusSpec
    curves: list = field(default_factory=list)
    skipped: Counter = field(default_factory=Counter)


def generate(spec: CorpusSpec) -> Corpus:
    """Enumerate the family, keeping the curves that satisfy the hypotheses
    of the parity theorem for its isogeny degree."""
    corpus = Corpus(spec)
    for cid, item in _candidates(spec):
        if spec.max_curves is not None and len(corpus.curves) >= spec.max_curves:
            break
        if isinstance(item, str):
            corpus.skipped[item] += 1
            continue
        if spec.max_disc is not None and abs(item.curve.disc) > spec.max_disc:
            corpus.skipped["max-disc"] += 1
            continue
        try:
            check_hypotheses(item)
        except HypothesisViolated as exc:
            corpus.skipped[exc.reason] += 1
            continue
        corpus.curves.append((cid, item))
    if not corpus.curves:
        raise EmptyCorpus(f"no curve survives the filters (skipped: {dict(corpus.skipped)})")
    return corpus


@dataclass
class CurveVerdict:
    curve_id: str
    coefficients: dict
    reports: list
    W: int | None
    S: int | None
    oracle: int | None
    passed: bool
    failures: list
    flags: Counter
    selmer: dict | None = None

    def to_json(self, place: str | None = None) -> dict:
        reps = [r for r in self.reports if place is None or str(r.place) == place]
        out = {
            "id": self.curve_id,
            "curve": self.coefficients,
            "pass": self.passed,
            "W": self.W,
            "S": self.S,
            "oracle": self.oracle,
            "failures": self.failures,
            "flags": dict(sorted(self.flags.items())),
            "places": [r.to_json() for r in reps],
        }
        if self.selmer is not None:
            out.update(self.selmer)
        return out


def verify(curve_id: str, ctx, seed: int = 0, with_oracle: bool = True) -> CurveVerdict:
    rng = random.Random(f"{seed}:{curve_id}")
    try:
        g = global_check(ctx, rng, strict=False)
    except PathDisagreement as exc:
        return CurveVerdict(curve_id, ctx.to_json(), [], None, None, None, False, [f"path-disagreement: {exc}"], Counter())
    flags = Counter(f for r in g.reports for f in r.flags)
    failures = [f for f in g.failures if not _flagged_identity(f, g.reports)]
    oracle = selmer = None
    if ctx.degree == 2 and with_oracle:
        d = descent(ctx, rng)
        oracle = d.parity
        selmer = {"selmer_phi": d.selmer_phi.to_json(), "selmer_phihat": d.selmer_phihat.to_json()}
        if oracle != g.S:
            failures.append("oracle!=S")
    return CurveVerdict(curve_id, ctx.to_json(), g.reports, g.W, g.S, oracle, not failures, failures, flags, selmer)


def _flagged_identity(failure: str, reports) -> bool:
    if not failure.startswith("identity@"):
        return False
    place = failure.split("@", 1)[1]
    return any(str(r.place) == place and FORMULA_W in r.flags for r in reports)


def _verify_star(args) -> CurveVerdict:
    return verify(*args)


@dataclass
class RunSummary:
    total: int
    passed: int
    failures: Counter
    flags: Counter
    skipped: Counter

    @property
    def exit_code(self) -> int:
        return 0 if self.passed == self.total else 1

    def to_json(self) -> dict:
        return {
            "type": "summary",
            "total": self.total,
            "passed": self.passed,
            "failed": self.total - self.passed,
            "failures": dict(sorted(self.failures.items())),
            "flags": dict(sorted(self.flags.items())),
            "skipped": dict(sorted(self.skipped.items())),
        }


def verdicts(corpus: Corpus, seed: int = 0, jobs: int = 1, with_oracle: bool = True) -> Iterator[CurveVerdict]:
    """Verdicts in enumeration order, computed serially or in a process pool."""
    work = [(cid, ctx, seed, with_oracle) for cid, ctx in corpus.curves]
    if jobs <= 1:
        yield from map(_verify_star, work)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(_verify_star, work, chunksize=4)


def run(
    spec: CorpusSpec,
    out,
    seed: int = 0,
    jobs: int = 1,
    fail_fast: bool = False,
    csv_out=None,
    place: str | None = None,
    with_oracle: bool = True,
) -> RunSummary:
    """Verify every corpus curve, writing one JSON line per curve to ``out``
    between a header line and a summary line."""
    corpus = generate(spec)
    header = {
        "type": "header",
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "seed": seed,
        "spec": spec.to_json(),
    }
    out.write(json.dumps(header) + "\n")
    writer = None
    if csv_out is not None:
        writer = csv.writer(csv_out)
        writer.writerow(["id", "pass", "W", "S", "oracle", "failures"])
    total = passed = 0
    failures: Counter = Counter()
    flags: Counter = Counter()
    for v in verdicts(corpus, seed, jobs, with_oracle):
        total += 1
        passed += v.passed
        failures.update(f.split("@")[0].split(":")[0] for f in v.failures)
        flags.update(v.flags)
        out.write(json.dumps(v.to_json(place), sort_keys=True) + "\n")
        if writer:
            writer.writerow([v.curve_id, int(v.passed), v.W, v.S, v.oracle, ";".join(v.failures)])
        if fail_fast and not v.passed:
            break
    summary = RunSummary(total, passed, failures, flags, corpus.skipped)
    out.write(json.dumps(summary.to_json()) + "\n")
    return summary
