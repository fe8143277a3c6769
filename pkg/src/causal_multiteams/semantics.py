"""Satisfaction, observation (restriction), intervention and exact probabilities.

Event-level formulas are flat, so they are decided row by row with
:func:`holds`; the probabilistic connectives are evaluated on whole models.
"""

from __future__ import annotations

import functools
import itertools
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

from .core import Assignment, CausalMultiteam, FunctionComponent, Multiteam, Signature, _plan
from .errors import EmptyModel, InconsistentIntervention
from .formula.nodes import (
    And,
    Bot,
    Cf,
    CondPrCmp,
    CondPrConst,
    Eq,
    Formula,
    Gdisj,
    NE,
    Neg,
    Neq,
    PrCmp,
    PrConst,
    PrStar,
    StrictTensor,
    Sup,
    Tensor,
    Top,
    has_sugar,
    is_consistent_antecedent,
)
from .formula.printer import to_text
from .formula.sugar import expand_sugar

RELATIONS = {
    ">=": operator.ge,
    ">": operator.gt,
    "<=": operator.le,
    "<": operator.lt,
    "==": operator.eq,
    "!=": operator.ne,
}


@functools.lru_cache(maxsize=4096)
def _laws_without(laws: FunctionComponent, variables: frozenset) -> FunctionComponent:
    return laws.without(variables)


def _resolve_pairs(sig: Signature, pairs: Iterable[tuple[str, str]]) -> tuple[tuple[int, str], ...]:
    out: dict[int, str] = {}
    for var, value in pairs:
        sig.check_value(var, value)
        i = sig.index(var)
        if out.setdefault(i, value) != value:
            raise InconsistentIntervention(f"{var} is set to both {out[i]} and {value}")
    return tuple(out.items())


def intervene_row(s: Assignment, fixed: tuple[tuple[int, str], ...], plan: tuple) -> Assignment:
    """The row after fixing ``fixed`` (index, value) and recomputing downstream laws."""
    row = list(s)
    done = set()
    for i, value in fixed:
        row[i] = value
        done.add(i)
    for target, args, table in plan:
        if target not in done:
            row[target] = table[tuple(row[a] for a in args)]
    return tuple(row)


def holds(s: Assignment, alpha: Formula, sig: Signature, laws: FunctionComponent) -> bool:
    """Truth of an event-level formula on the one-row model ``({s}, laws)``."""
    if isinstance(alpha, Eq):
        return s[sig.index(alpha.var)] == alpha.value
    if isinstance(alpha, Neq):
        return s[sig.index(alpha.var)] != alpha.value
    if isinstance(alpha, And):
        return holds(s, alpha.left, sig, laws) and holds(s, alpha.right, sig, laws)
    if isinstance(alpha, Tensor):
        # a one-row team splits only into itself and the empty team
        return holds(s, alpha.left, sig, laws) or holds(s, alpha.right, sig, laws)
    if isinstance(alpha, Sup):
        return not holds(s, alpha.antecedent, sig, laws) or holds(s, alpha.consequent, sig, laws)
    if isinstance(alpha, Cf):
        if not is_consistent_antecedent(alpha.antecedent):
            return True
        fixed = _resolve_pairs(sig, alpha.antecedent)
        t = intervene_row(s, fixed, _plan(laws, sig))
        rest = _laws_without(laws, frozenset(v for v, _ in alpha.antecedent))
        return holds(t, alpha.consequent, sig, rest)
    if isinstance(alpha, Neg):
        return not holds(s, alpha.arg, sig, laws)
    if isinstance(alpha, Top):
        return True
    if isinstance(alpha, Bot):
        return False
    raise TypeError(f"{type(alpha).__name__} is not an event-level formula")


def restrict(m: CausalMultiteam, alpha: Formula) -> CausalMultiteam:
    """Keep exactly the rows whose singleton satisfies ``alpha``, with their counts."""
    sig, laws = m.sig, m.laws
    kept = {s: c for s, c in m.team.items() if holds(s, alpha, sig, laws)}
    if len(kept) == len(m.team.counts):
        return m
    return m.with_team(Multiteam(kept))


def intervene(m: CausalMultiteam, pairs: Iterable[tuple[str, str]]) -> CausalMultiteam:
    """Apply ``do(X=x)``: fix X, recompute the other endogenous variables, drop the laws of X."""
    pairs = tuple(pairs)
    fixed = _resolve_pairs(m.sig, pairs)
    plan = m.plan()
    counts: dict[Assignment, int] = {}
    for s, c in m.team.items():
        t = intervene_row(s, fixed, plan)
        counts[t] = counts.get(t, 0) + c
    laws = _laws_without(m.laws, frozenset(v for v, _ in pairs))
    return CausalMultiteam(m.sig, Multiteam(counts), laws, validate=False)


def _count(m: CausalMultiteam, alpha: Formula) -> int:
    sig, laws = m.sig, m.laws
    return sum(c for s, c in m.team.items() if holds(s, alpha, sig, laws))


def _prepare(f: Formula, sig: Signature) -> Formula:
    return expand_sugar(f, sig) if has_sugar(f) else f


def prob(m: CausalMultiteam, alpha: Formula) -> Fraction:
    """P_T(alpha) = |T^alpha| / |T|."""
    if m.is_empty():
        raise EmptyModel("probability of an event in an empty model")
    return Fraction(_count(m, _prepare(alpha, m.sig)), m.size)


def cond_prob(m: CausalMultiteam, alpha: Formula, gamma: Formula) -> Optional[Fraction]:
    """P_T(alpha | gamma), or None when P_T(gamma) = 0."""
    if m.is_empty():
        raise EmptyModel("conditional probability in an empty model")
    alpha, gamma = _prepare(alpha, m.sig), _prepare(gamma, m.sig)
    sig, laws = m.sig, m.laws
    both = given = 0
    for s, c in m.team.items():
        if holds(s, gamma, sig, laws):
            given += c
            if holds(s, alpha, sig, laws):
                both += c
    return Fraction(both, given) if given else None


@dataclass
class TraceNode:
    clause: str
    formula: str
    verdict: Optional[bool] = None
    children: list = field(default_factory=list)

    def render(self, indent: int = 0) -> str:
        mark = "true " if self.verdict else "false"
        lines = [f"{'  ' * indent}{mark} [{self.clause}] {self.formula}"]
        lines.extend(c.render(indent + 1) for c in self.children)
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "clause": self.clause,
            "formula": self.formula,
            "verdict": self.verdict,
            "children": [c.to_dict() for c in self.children],
        }


@dataclass(frozen=True)
class EvalResult:
    verdict: bool
    trace: Optional[TraceNode] = None

    def __bool__(self) -> bool:
        return self.verdict


_EVENT_NODES = (Eq, Neq, Tensor, Neg, Top, Bot)


class _Evaluator:
    def __init__(self, tracing: bool = False):
        self.tracing = tracing
        self._stack: list[TraceNode] = []
        self._split_memo: dict = {}

    def sat(self, m: CausalMultiteam, f: Formula) -> bool:
        if not self.tracing:
            return self._sat(m, f)
        node = TraceNode(self._clause(m, f), to_text(f))
        if self._stack:
            self._stack[-1].children.append(node)
        self._stack.append(node)
        try:
            node.verdict = self._sat(m, f)
        finally:
            if len(self._stack) > 1:
                self._stack.pop()
        return node.verdict

    @staticmethod
    def _clause(m: CausalMultiteam, f: Formula) -> str:
        name = type(f).__name__
        if m.is_empty():
            return f"{name}, empty model"
        return f"{name}, {m.size} rows"

    def _sat(self, m: CausalMultiteam, f: Formula) -> bool:
        if isinstance(f, _EVENT_NODES):
            sig, laws = m.sig, m.laws
            return all(holds(s, f, sig, laws) for s in m.team.counts)
        if isinstance(f, And):
            return self.sat(m, f.left) and self.sat(m, f.right)
        if isinstance(f, Gdisj):
            return any(self.sat(m, d) for d in f.disjuncts)
        if isinstance(f, Sup):
            return self.sat(restrict(m, f.antecedent), f.consequent)
        if isinstance(f, Cf):
            if not is_consistent_antecedent(f.antecedent):
                return True
            return self.sat(intervene(m, f.antecedent), f.consequent)
        if isinstance(f, PrConst):
            if m.is_empty():
                return True
            return RELATIONS[f.rel](Fraction(_count(m, f.arg), m.size), f.eps)
        if isinstance(f, PrCmp):
            if m.is_empty():
                return True
            return RELATIONS[f.rel](_count(m, f.left), _count(m, f.right))
        if isinstance(f, CondPrConst):
            p = _cond_count(m, f.arg, f.cond)
            return p is None or RELATIONS[f.rel](p, f.eps)
        if isinstance(f, CondPrCmp):
            p = _cond_count(m, f.arg1, f.cond1)
            q = _cond_count(m, f.arg2, f.cond2)
            return p is None or q is None or RELATIONS[f.rel](p, q)
        if isinstance(f, PrStar):
            return pr_star(m, f)
        if isinstance(f, NE):
            return not m.is_empty()
        if isinstance(f, StrictTensor):
            return self._strict_tensor(m, f)
        raise TypeError(f"cannot evaluate {type(f).__name__}; expand sugar first")

    def _strict_tensor(self, m: CausalMultiteam, f: StrictTensor) -> bool:
        key = (m, f)
        if key in self._split_memo:
            return self._split_memo[key]
        saved, self.tracing = self.tracing, False
        items = m.rows()
        result = False
        try:
            for cut in itertools.product(*(range(c + 1) for _, c in items)):
                left = Multiteam({s: k for (s, _), k in zip(items, cut)})
                right = Multiteam({s: c - k for (s, c), k in zip(items, cut)})
                if self.sat(m.with_team(left), f.left) and self.sat(m.with_team(right), f.right):
                    result = True
                    break
        finally:
            self.tracing = saved
        self._split_memo[key] = result
        return result


def _cond_count(m: CausalMultiteam, alpha: Formula, gamma: Formula) -> Optional[Fraction]:
    sig, laws = m.sig, m.laws
    both = given = 0
    for s, c in m.team.items():
        if holds(s, gamma, sig, laws):
            given += c
            if holds(s, alpha, sig, laws):
                both += c
    return Fraction(both, given) if given else None


def pr_star(m: CausalMultiteam, f: PrStar) -> bool:
    """Probability atom under which an empty model behaves as if every event had probability 1."""
    if m.is_empty():
        return RELATIONS[f.rel](Fraction(1), f.eps)
    return RELATIONS[f.rel](Fraction(_count(m, f.arg), m.size), f.eps)


def satisfies(m: CausalMultiteam, phi: Formula, trace: bool = False) -> EvalResult:
    """Decide ``m |= phi``; abbreviations are expanded against ``m.sig`` first."""
    phi = _prepare(phi, m.sig)
    ev = _Evaluator(tracing=trace)
    verdict = ev.sat(m, phi)
    root = ev._stack[0] if trace and ev._stack else None
    return EvalResult(verdict, root)


def sat(m: CausalMultiteam, phi: Formula) -> bool:
    """Boolean shorthand for :func:`satisfies` without a trace."""
    return _Evaluator().sat(m, _prepare(phi, m.sig))


@dataclass(frozen=True)
class MixedReport:
    """Both readings of a conditional causal statement.

    ``do_*`` is the post-intervention conditioning ``pairs ~> (gamma => atom)``;
    ``pearl_*`` is the counterfactual form ``gamma => (pairs ~> atom)``.
    Probabilities are None when the model is empty or the condition has
    probability zero.
    """

    do_verdict: bool
    pearl_verdict: bool
    do_prob: Optional[Fraction]
    pearl_prob: Optional[Fraction]


def satisfies_mixed(
    m: CausalMultiteam,
    gamma: Formula,
    pairs: Iterable[tuple[str, str]],
    alpha: Formula,
    rel: str,
    t: Union[Fraction, Formula],
) -> MixedReport:
    pairs = tuple(pairs)
    atom = PrConst(alpha, rel, Fraction(t)) if not isinstance(t, Formula) else PrCmp(alpha, rel, t)
    do_form = Cf(pairs, Sup(gamma, atom))
    pearl_form = Sup(gamma, Cf(pairs, atom))
    do_prob = pearl_prob = None
    if not m.is_empty():
        if is_consistent_antecedent(pairs):
            do_prob = cond_prob(intervene(m, pairs), alpha, gamma)
        pearl_prob = cond_prob(m, Cf(pairs, alpha), gamma)
    return MixedReport(sat(m, do_form), sat(m, pearl_form), do_prob, pearl_prob)
