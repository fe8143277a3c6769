"""Exhaustive and random generation of function components, models and formulas.

Used by the definability checker, the property suite and the tests.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .core import (
    CausalFunction,
    CausalMultiteam,
    FunctionComponent,
    Multiteam,
    Signature,
    minimize_parents,
    topological_order,
)
from .errors import CyclicGraph
from .formula.nodes import (
    And,
    Cf,
    Eq,
    Formula,
    Gdisj,
    Neq,
    PrCmp,
    PrConst,
    Sup,
    Tensor,
)


def nonconstant_functions(var: str, sig: Signature) -> list[CausalFunction]:
    """Every function for ``var`` whose listed arguments are all non-dummy."""
    out = []
    others = sig.others(var)
    for r in range(1, len(others) + 1):
        for args in itertools.combinations(others, r):
            keys = list(itertools.product(*(sig.ran(a) for a in args)))
            for outs in itertools.product(sig.ran(var), repeat=len(keys)):
                f = CausalFunction(var, args, dict(zip(keys, outs)))
                if minimize_parents(f, sig).args == args:
                    out.append(f)
    return out


def function_components(sig: Signature) -> list[FunctionComponent]:
    """All recursive function components of ``sig`` with minimized tables."""
    options = [[None] + nonconstant_functions(v, sig) for v in sig.dom]
    out = []
    for choice in itertools.product(*options):
        laws = FunctionComponent([f for f in choice if f is not None])
        try:
            topological_order(laws, sig)
        except CyclicGraph:
            continue
        out.append(laws)
    return out


def compatible_assignments(sig: Signature, laws: FunctionComponent) -> list[tuple]:
    out = []
    for s in sig.all_assignments():
        if all(laws[v].evaluate(s, sig) == s[sig.index(v)] for v in laws):
            out.append(s)
    return out


def count_models(sig: Signature, size_bound: int, components: Optional[Sequence[FunctionComponent]] = None) -> int:
    """Number of causal multiteams with at most ``size_bound`` rows."""
    components = function_components(sig) if components is None else components
    return sum(
        math.comb(len(compatible_assignments(sig, laws)) + size_bound, size_bound) for laws in components
    )


def models_up_to(
    sig: Signature, size_bound: int, components: Optional[Sequence[FunctionComponent]] = None
) -> Iterator[CausalMultiteam]:
    """Every causal multiteam with at most ``size_bound`` rows, empty ones included."""
    components = function_components(sig) if components is None else components
    for laws in components:
        rows = compatible_assignments(sig, laws)
        for n in range(size_bound + 1):
            for combo in itertools.combinations_with_replacement(rows, n):
                yield CausalMultiteam(sig, Multiteam.from_rows(combo), laws, validate=False)


def random_model(
    rng: random.Random,
    sig: Signature,
    components: Sequence[FunctionComponent],
    max_rows: int = 4,
    max_count: int = 3,
    allow_empty: bool = True,
) -> CausalMultiteam:
    laws = rng.choice(list(components))
    rows = compatible_assignments(sig, laws)
    k = rng.randint(0 if allow_empty else 1, min(max_rows, len(rows)))
    chosen = rng.sample(rows, k)
    team = Multiteam({s: rng.randint(1, max_count) for s in chosen})
    return CausalMultiteam(sig, team, laws, validate=False)


_EPS = [Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4), Fraction(1)]


class FormulaGenerator:
    """Random formulas over a signature; every draw comes from ``rng``."""

    def __init__(self, sig: Signature, rng: random.Random):
        self.sig = sig
        self.rng = rng

    def literal(self) -> Formula:
        var = self.rng.choice(self.sig.dom)
        value = self.rng.choice(self.sig.ran(var))
        return Eq(var, value) if self.rng.random() < 0.5 else Neq(var, value)

    def pairs(self, allow_inconsistent: bool = True) -> tuple:
        k = self.rng.randint(1, min(2, len(self.sig.dom)))
        if allow_inconsistent and self.rng.random() < 0.1:
            var = self.rng.choice(self.sig.dom)
            ran = self.sig.ran(var)
            if len(ran) > 1:
                a, b = self.rng.sample(ran, 2)
                return ((var, a), (var, b))
        vars_ = self.rng.sample(self.sig.dom, k)
        return tuple((v, self.rng.choice(self.sig.ran(v))) for v in vars_)

    def co(self, depth: int) -> Formula:
        if depth <= 1 or self.rng.random() < 0.25:
            return self.literal()
        kind = self.rng.choice(("and", "or", "sup", "cf"))
        if kind == "and":
            return And(self.co(depth - 1), self.co(depth - 1))
        if kind == "or":
            return Tensor(self.co(depth - 1), self.co(depth - 1))
        if kind == "sup":
            return Sup(self.co(depth - 1), self.co(depth - 1))
        return Cf(self.pairs(), self.co(depth - 1))

    def pr_atom(self, arg_depth: int = 2) -> Formula:
        if self.rng.random() < 0.25:
            return PrCmp(self.co(arg_depth), self.rng.choice((">=", ">")), self.co(arg_depth))
        return PrConst(self.co(arg_depth), self.rng.choice((">=", ">")), self.rng.choice(_EPS))

    def pco(self, depth: int) -> Formula:
        """A sugar-free core formula of AST depth at most about ``depth``."""
        if depth <= 1:
            return self.pr_atom(1) if self.rng.random() < 0.8 else self.literal()
        r = self.rng.random()
        if r < 0.2:
            return self.pr_atom(min(2, depth - 1))
        if r < 0.3:
            return self.co(depth)
        kind = self.rng.choice(("and", "gdisj", "sup", "cf"))
        if kind == "and":
            return And(self.pco(depth - 1), self.pco(depth - 1))
        if kind == "gdisj":
            n = self.rng.choice((2, 2, 3))
            return Gdisj(tuple(self.pco(depth - 1) for _ in range(n)))
        if kind == "sup":
            return Sup(self.co(min(2, depth - 1)), self.pco(depth - 1))
        return Cf(self.pairs(), self.pco(depth - 1))
