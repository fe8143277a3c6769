"""Seeded property suite behind the ``suite`` command.

Each check draws models over two binary variables and formulas from
:class:`FormulaGenerator` and compares two ways of computing the same thing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .core import CausalMultiteam, Multiteam, Signature
from .enumeration import FormulaGenerator, function_components, models_up_to, random_model
from .formula.nodes import Cf, PrConst, Sup
from .formula.parser import parse
from .formula.printer import to_text
from .rescaling import canonical, is_rescaling, scale
from .sem_bridge import joint_prob, multiteam_to_sem, sem_to_multiteam
from .semantics import cond_prob, holds, intervene, restrict, sat
from .transforms import check_normal_form, compile_cneg, normal_form

BINARY = Signature(("X", "Y"), (("0", "1"), ("0", "1")))


@dataclass(frozen=True)
class CheckResult:
    name: str
    cases: int
    failure: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.failure is None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f" ({self.failure})" if self.failure else ""
        return f"{status} {self.name}: {self.cases} cases{tail}"


class _Ctx:
    def __init__(self, seed: int, scale_factor: int):
        self.rng = random.Random(seed)
        self.sig = BINARY
        self.components = function_components(BINARY)
        self.models = list(models_up_to(BINARY, 4, self.components))
        self.gen = FormulaGenerator(BINARY, self.rng)
        self.n = scale_factor

    def model(self, nonempty: bool = False) -> CausalMultiteam:
        return random_model(self.rng, self.sig, self.components, allow_empty=not nonempty)


def _flatness(ctx: _Ctx) -> CheckResult:
    cases = 0
    for _ in range(40 * ctx.n):
        alpha = ctx.gen.co(3)
        for m in ctx.models[:: max(1, len(ctx.models) // 40)]:
            cases += 1
            whole = sat(m, alpha)
            rows = all(holds(s, alpha, m.sig, m.laws) for s in m.team.counts)
            if whole != rows:
                return CheckResult("flatness", cases, f"{to_text(alpha)} on {m}")
    return CheckResult("flatness", cases)


def _empty_team(ctx: _Ctx) -> CheckResult:
    cases = 0
    for laws in ctx.components:
        empty = CausalMultiteam(ctx.sig, Multiteam(), laws, validate=False)
        for _ in range(20 * ctx.n):
            phi = ctx.gen.pco(4)
            cases += 1
            if not sat(empty, phi):
                return CheckResult("empty model satisfies everything", cases, to_text(phi))
    return CheckResult("empty model satisfies everything", cases)


def _round_trip(ctx: _Ctx) -> CheckResult:
    for i in range(100 * ctx.n):
        phi = ctx.gen.pco(4)
        if parse(to_text(phi)) != phi:
            return CheckResult("parse(print(f)) == f", i + 1, to_text(phi))
    return CheckResult("parse(print(f)) == f", 100 * ctx.n)


def _normal_form(ctx: _Ctx) -> CheckResult:
    cases = 0
    for _ in range(30 * ctx.n):
        phi = ctx.gen.pco(4)
        nf = normal_form(phi, ctx.sig)
        problems = check_normal_form(nf.formula)
        if problems:
            return CheckResult("normal form", cases, problems[0])
        for _ in range(10):
            m = ctx.model()
            cases += 1
            if sat(m, phi) != sat(m, nf.formula):
                return CheckResult("normal form", cases, f"{to_text(phi)} on {m}")
    return CheckResult("normal form", cases)


def _cneg(ctx: _Ctx) -> CheckResult:
    cases = 0
    for _ in range(30 * ctx.n):
        phi = ctx.gen.pco(4)
        neg = compile_cneg(phi, ctx.sig)
        for _ in range(10):
            m = ctx.model(nonempty=True)
            cases += 1
            if sat(m, phi) == sat(m, neg):
                return CheckResult("weak contradictory negation", cases, f"{to_text(phi)} on {m}")
    return CheckResult("weak contradictory negation", cases)


def _rescaling(ctx: _Ctx) -> CheckResult:
    cases = 0
    for _ in range(30 * ctx.n):
        phi = ctx.gen.pco(4)
        m = ctx.model()
        k = ctx.rng.choice((2, 3, 5))
        cases += 1
        if sat(m, phi) != sat(scale(m, k), phi):
            return CheckResult("rescaling invariance", cases, f"{to_text(phi)} on {m} x{k}")
        pairs = ctx.gen.pairs(allow_inconsistent=False)
        if canonical(intervene(m, pairs)) != canonical(intervene(scale(m, k), pairs)):
            return CheckResult("rescaling invariance", cases, f"intervention {pairs} on {m}")
        alpha = ctx.gen.co(2)
        if not is_rescaling(restrict(m, alpha), restrict(scale(m, k), alpha)):
            return CheckResult("rescaling invariance", cases, f"restriction {to_text(alpha)} on {m}")
    return CheckResult("rescaling invariance", cases)


def _sem(ctx: _Ctx) -> CheckResult:
    cases = 0
    for _ in range(20 * ctx.n):
        m = ctx.model(nonempty=True)
        sem = multiteam_to_sem(m)
        cases += 1
        if canonical(sem_to_multiteam(sem)) != canonical(m):
            return CheckResult("SEM round trip", cases, repr(m))
        for s in ctx.sig.all_assignments():
            event = list(zip(ctx.sig.dom, s))
            expected = Fraction(m.team.count(s), m.size)
            if joint_prob(sem, event) != expected:
                return CheckResult("SEM round trip", cases, f"event {event} on {m}")
    return CheckResult("SEM round trip", cases)


def _mixed(ctx: _Ctx) -> CheckResult:
    cases = 0
    for _ in range(30 * ctx.n):
        m = ctx.model()
        gamma, alpha = ctx.gen.co(2), ctx.gen.co(2)
        pairs = ctx.gen.pairs(allow_inconsistent=False)
        eps = ctx.rng.choice((Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)))
        cases += 1
        do_form = sat(m, Cf(pairs, Sup(gamma, PrConst(alpha, ">=", eps))))
        pearl_form = sat(m, Sup(gamma, Cf(pairs, PrConst(alpha, ">=", eps))))
        if m.is_empty():
            if not (do_form and pearl_form):
                return CheckResult("conditional causal statements", cases, repr(m))
            continue
        p = cond_prob(intervene(m, pairs), alpha, gamma)
        q = cond_prob(m, Cf(pairs, alpha), gamma)
        if do_form != (p is None or p >= eps) or pearl_form != (q is None or q >= eps):
            return CheckResult("conditional causal statements", cases, f"{pairs} on {m}")
    return CheckResult("conditional causal statements", cases)


def _cardinality(ctx: _Ctx) -> CheckResult:
    cases = 0
    for m in ctx.models:
        pairs = ctx.gen.pairs(allow_inconsistent=False)
        cases += 1
        if intervene(m, pairs).size != m.size:
            return CheckResult("interventions keep cardinality", cases, f"{pairs} on {m}")
    return CheckResult("interventions keep cardinality", cases)


CHECKS: dict[str, Callable[[_Ctx], CheckResult]] = {
    "flatness": _flatness,
    "empty": _empty_team,
    "roundtrip": _round_trip,
    "nf": _normal_form,
    "cneg": _cneg,
    "rescaling": _rescaling,
    "sem": _sem,
    "mixed": _mixed,
    "cardinality": _cardinality,
}


def run_suite(seed: int = 0, scale_factor: int = 1, only: Optional[list[str]] = None) -> list[CheckResult]:
    """Run the named checks (all by default); ``scale_factor`` multiplies the case counts."""
    ctx = _Ctx(seed, scale_factor)
    names = only or list(CHECKS)
    return [CHECKS[name](ctx) for name in names]
