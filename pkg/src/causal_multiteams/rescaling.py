"""Rescaling of causal multiteams, the capture formulas for distributions and
laws, and definability of finite classes.

Two models are rescalings of each other when they share their laws and give
every assignment the same probability. Formulas built from the core
connectives cannot tell rescalings apart; ``theta_k_formula`` shows that the
strict tensor can.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .core import Assignment, CausalMultiteam, FunctionComponent, Multiteam, Signature
from .enumeration import count_models, function_components, models_up_to
from .errors import BudgetExceeded, EmptyClass, EmptyModel, NotRescalings, SignatureMismatch
from .formula.nodes import (
    NE,
    And,
    Bot,
    Cf,
    Eq,
    Formula,
    PrConst,
    StrictTensor,
    Sup,
    Top,
    conj,
    eq_conj,
    gdisj,
)
from .semantics import sat


def epsilon_of(m: CausalMultiteam, s: Assignment) -> Fraction:
    """Probability of the assignment ``s`` in ``m``."""
    if m.is_empty():
        raise EmptyModel("assignment probabilities are undefined on an empty model")
    return Fraction(m.team.count(s), m.size)


def _same_sig(a: CausalMultiteam, b: CausalMultiteam) -> None:
    if a.sig != b.sig:
        raise SignatureMismatch("models have different signatures")


def canonical(m: CausalMultiteam) -> CausalMultiteam:
    """Divide all counts by their gcd; the smallest rescaling of ``m``."""
    if m.is_empty():
        return m
    g = math.gcd(*m.team.counts.values())
    if g == 1:
        return m
    return m.with_team(Multiteam({s: c // g for s, c in m.team.items()}))


def is_rescaling(a: CausalMultiteam, b: CausalMultiteam) -> bool:
    _same_sig(a, b)
    if a.laws != b.laws:
        return False
    if a.is_empty() or b.is_empty():
        return a.is_empty() and b.is_empty()
    return canonical(a).team == canonical(b).team


def scale(m: CausalMultiteam, n: int) -> CausalMultiteam:
    """Multiply every count by ``n``."""
    if n < 1:
        raise ValueError("scale factor must be a positive integer")
    return m.with_team(m.team.scaled(n))


def common_multiple(a: CausalMultiteam, b: CausalMultiteam) -> CausalMultiteam:
    """The least model that is a multiple of both ``a`` and ``b``."""
    if a.is_empty() or b.is_empty() or not is_rescaling(a, b):
        raise NotRescalings("a common multiple needs two nonempty rescalings")
    size = math.lcm(a.size, b.size)
    out = scale(a, size // a.size)
    assert out == scale(b, size // b.size)
    return out


def theta_formula(team: Multiteam, sig: Signature) -> Formula:
    """Holds exactly on models whose rows are a rescaling of ``team``.

    One equality per assignment of the signature, zero-probability ones
    included; the empty team gives ``bot``.
    """
    if not team:
        return Bot()
    n = team.size
    return conj(
        PrConst(eq_conj(zip(sig.dom, s)), "==", Fraction(team.count(s), n)) for s in sig.all_assignments()
    )


def _law_conjuncts(var: str, laws: FunctionComponent, sig: Signature) -> list[Formula]:
    others = sig.others(var)
    backgrounds = list(_assignments_of(others, sig))
    if var in laws:
        f = laws[var]
        out = []
        for w in backgrounds:
            row = dict(zip(others, w))
            value = f(tuple(row[a] for a in f.args))
            out.append(Cf(tuple(zip(others, w)), Eq(var, value)))
        return out
    out = []
    for w in backgrounds:
        for v in sig.ran(var):
            if others:
                out.append(Sup(Eq(var, v), Cf(tuple(zip(others, w)), Eq(var, v))))
            else:
                out.append(Sup(Eq(var, v), Eq(var, v)))
    return out


def _assignments_of(variables: tuple, sig: Signature) -> Iterable[tuple]:
    return itertools.product(*(sig.ran(v) for v in variables))


def phi_formula(laws: FunctionComponent, sig: Signature) -> Formula:
    """Holds on a nonempty model exactly when its laws are ``laws``.

    Each endogenous V must follow its table under every intervention on all
    other variables; each exogenous V must keep its value under every such
    intervention.
    """
    parts = []
    for var in sig.dom:
        parts.extend(_law_conjuncts(var, laws, sig))
    return conj(parts)


class FiniteClass:
    """Finitely many models over one signature, duplicates removed."""

    def __init__(self, members: Iterable[CausalMultiteam]):
        unique: list[CausalMultiteam] = []
        for m in members:
            if unique and m.sig != unique[0].sig:
                raise SignatureMismatch("class members must share one signature")
            if m not in unique:
                unique.append(m)
        self.members = tuple(unique)

    @property
    def sig(self) -> Optional[Signature]:
        return self.members[0].sig if self.members else None

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def psi_formula(k: FiniteClass) -> Formula:
    """Global disjunction of the distribution and law captures of each member."""
    if not k.members:
        raise EmptyClass("the class has no members")
    parts = []
    for m in k.members:
        laws_part = Top() if m.is_empty() else phi_formula(m.laws, m.sig)
        parts.append(And(theta_formula(m.team, m.sig), laws_part))
    return gdisj(parts)


@dataclass(frozen=True)
class DefinabilityReport:
    bound: int
    checked: int
    satisfying: int
    expected: int
    false_positives: tuple = field(default=())  # satisfy the formula, outside the closure
    false_negatives: tuple = field(default=())  # inside the closure, fail the formula

    @property
    def agrees(self) -> bool:
        return not self.false_positives and not self.false_negatives

    def summary(self) -> str:
        status = "agree" if self.agrees else "DISAGREE"
        return (
            f"{status}: {self.checked} models up to {self.bound} rows; "
            f"{self.satisfying} satisfy the class formula, {self.expected} lie in the "
            f"rescaling closure plus empty models; "
            f"{len(self.false_positives)} false positives, {len(self.false_negatives)} false negatives"
        )


def check_definability(
    k: FiniteClass, size_bound: int, sig: Optional[Signature] = None, cap: int = 10**6
) -> DefinabilityReport:
    """Compare the models of the class formula with the rescaling closure of ``k``.

    Every causal multiteam over ``sig`` with at most ``size_bound`` rows is
    enumerated; empty models always count as members of the closure.
    """
    sig = sig or k.sig
    if sig is None:
        raise EmptyClass("the class has no members")
    for m in k.members:
        if m.sig != sig:
            raise SignatureMismatch("class members must use the given signature")
    psi = psi_formula(k)
    components = function_components(sig)
    estimate = count_models(sig, size_bound, components)
    if estimate > cap:
        raise BudgetExceeded(estimate, cap)
    closure = {(m.laws, canonical(m).team) for m in k.members if not m.is_empty()}
    checked = satisfying = expected = 0
    false_pos, false_neg = [], []
    for m in models_up_to(sig, size_bound, components):
        checked += 1
        inside = m.is_empty() or (m.laws, canonical(m).team) in closure
        verdict = sat(m, psi)
        satisfying += verdict
        expected += inside
        if verdict and not inside:
            false_pos.append(m)
        elif inside and not verdict:
            false_neg.append(m)
    return DefinabilityReport(size_bound, checked, satisfying, expected, tuple(false_pos), tuple(false_neg))


def theta_k_formula(k: int, sig: Optional[Signature] = None) -> Formula:
    """``NE <|> ... <|> NE`` with ``k`` operands: at least ``k`` rows."""
    if k < 1:
        raise ValueError("k must be positive")
    out: Formula = NE()
    for _ in range(k - 1):
        out = StrictTensor(out, NE())
    return out
