"""Structural equation models with a rational exogenous distribution, and
their translation to and from causal multiteams."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .core import (
    Assignment,
    CausalMultiteam,
    FunctionComponent,
    Multiteam,
    Signature,
    _plan,
    _validate_laws,
)
from .errors import EmptyModel, ValidationError


@dataclass(frozen=True)
class Sem:
    """``exo_dist`` maps tuples of exogenous values (dom order) to probabilities."""

    sig: Signature
    laws: FunctionComponent
    exo_dist: Mapping[tuple, Fraction]

    def __post_init__(self) -> None:
        laws = _validate_laws(self.laws, self.sig)
        object.__setattr__(self, "laws", laws)
        exo = self.exogenous
        dist: dict[tuple, Fraction] = {}
        for u, p in self.exo_dist.items():
            u = tuple(u)
            p = Fraction(p)
            if len(u) != len(exo):
                raise ValidationError(f"exogenous tuple {u} does not list {len(exo)} values")
            for var, value in zip(exo, u):
                self.sig.check_value(var, value)
            if p < 0:
                raise ValidationError(f"negative probability {p} for {u}")
            if p:
                dist[u] = dist.get(u, Fraction(0)) + p
        if sum(dist.values(), Fraction(0)) != 1:
            raise ValidationError("exogenous probabilities do not sum to 1")
        object.__setattr__(self, "exo_dist", dist)

    @property
    def exogenous(self) -> tuple[str, ...]:
        return tuple(v for v in self.sig.dom if v not in self.laws)


def solve_endogenous(sem: Sem, u: Iterable[str]) -> Assignment:
    """The unique full assignment extending exogenous values ``u`` that obeys the laws."""
    u = tuple(u)
    exo = sem.exogenous
    row: list[Optional[str]] = [None] * len(sem.sig.dom)
    for var, value in zip(exo, u, strict=True):
        sem.sig.check_value(var, value)
        row[sem.sig.index(var)] = value
    for target, args, table in _plan(sem.laws, sem.sig):
        row[target] = table[tuple(row[a] for a in args)]
    return tuple(row)


def joint_prob(sem: Sem, event: Iterable[tuple[str, str]]) -> Fraction:
    """Total weight of exogenous tuples whose solution satisfies every (var, value) in ``event``."""
    checks = []
    for var, value in event:
        sem.sig.check_value(var, value)
        checks.append((sem.sig.index(var), value))
    total = Fraction(0)
    for u, p in sem.exo_dist.items():
        s = solve_endogenous(sem, u)
        if all(s[i] == value for i, value in checks):
            total += p
    return total


def sem_to_multiteam(sem: Sem) -> CausalMultiteam:
    """Multiteam with ``a`` copies of each solution whose tuple has probability ``a/b``.

    ``b`` is the lcm of the denominators, so the result has cardinality ``b``.
    """
    b = math.lcm(*(p.denominator for p in sem.exo_dist.values()))
    counts: dict[Assignment, int] = {}
    for u, p in sem.exo_dist.items():
        s = solve_endogenous(sem, u)
        counts[s] = counts.get(s, 0) + int(p * b)
    return CausalMultiteam(sem.sig, Multiteam(counts), sem.laws)


def multiteam_to_sem(m: CausalMultiteam) -> Sem:
    """Exogenous marginal of ``m`` by counting, with the same laws."""
    if m.is_empty():
        raise EmptyModel("an empty model induces no distribution")
    idx = [m.sig.index(v) for v in m.exogenous]
    weights: dict[tuple, int] = {}
    for s, c in m.team.items():
        u = tuple(s[i] for i in idx)
        weights[u] = weights.get(u, 0) + c
    return Sem(m.sig, m.laws, {u: Fraction(c, m.size) for u, c in weights.items()})


@dataclass(frozen=True)
class MarkovReport:
    holds: bool
    violations: tuple  # ((U, u), (V, v), joint, product) entries

    @property
    def witness(self):
        return self.violations[0] if self.violations else None

    def __bool__(self) -> bool:
        return self.holds


def markov_check(m: CausalMultiteam) -> MarkovReport:
    """Pairwise independence of the exogenous variables under the counting distribution."""
    if m.is_empty():
        raise EmptyModel("independence is undefined on an empty model")
    sig, n = m.sig, m.size
    marginal: dict[tuple[int, str], int] = {}
    for s, c in m.team.items():
        for i, value in enumerate(s):
            marginal[(i, value)] = marginal.get((i, value), 0) + c
    violations = []
    for a, b in itertools.combinations(m.exogenous, 2):
        i, j = sig.index(a), sig.index(b)
        for x in sig.ran(a):
            for y in sig.ran(b):
                joint = Fraction(sum(c for s, c in m.team.items() if s[i] == x and s[j] == y), n)
                product = Fraction(marginal.get((i, x), 0), n) * Fraction(marginal.get((j, y), 0), n)
                if joint != product:
                    violations.append(((a, x), (b, y), joint, product))
    return MarkovReport(not violations, tuple(violations))
