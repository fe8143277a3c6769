"""Purely syntactic expansion of abbreviations into core constructors."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Optional

from ..core import Signature
from ..errors import SignatureRequired
from .nodes import (
    And,
    Bot,
    CIndep,
    CNeg,
    Cf,
    CondPrCmp,
    CondPrConst,
    Dep,
    Eq,
    Formula,
    Gdisj,
    Impl,
    Neg,
    Neq,
    PrCmp,
    PrConst,
    PrStar,
    StrictTensor,
    Sup,
    Tensor,
    Top,
    conj,
    eq_conj,
    gdisj,
)

ONE = Fraction(1)
ZERO = Fraction(0)


def _need(sig: Optional[Signature], what: str) -> Signature:
    if sig is None:
        raise SignatureRequired(f"expanding {what} needs a signature")
    return sig


def bottom(sig: Signature) -> Formula:
    """``X0=x0 ~> X0!=x0`` for the first variable and its first value."""
    var, value = sig.dom[0], sig.ranges[0][0]
    return Cf(((var, value),), Neq(var, value))


def top(sig: Signature) -> Formula:
    var, value = sig.dom[0], sig.ranges[0][0]
    return Cf(((var, value),), Eq(var, value))


def pr_const(arg: Formula, rel: str, eps: Fraction, bot: Formula) -> Formula:
    """Core form of ``Pr(arg) rel eps``; ``arg`` and ``bot`` are already expanded."""
    if rel in (">=", ">"):
        return PrConst(arg, rel, eps)
    if rel == "<=":
        return PrConst(Sup(arg, bot), ">=", ONE - eps)
    if rel == "<":
        return PrConst(Sup(arg, bot), ">", ONE - eps)
    if rel == "==":
        return And(PrConst(arg, ">=", eps), PrConst(Sup(arg, bot), ">=", ONE - eps))
    return Gdisj((PrConst(arg, ">", eps), PrConst(Sup(arg, bot), ">", ONE - eps)))


def pr_cmp(left: Formula, rel: str, right: Formula) -> Formula:
    if rel in (">=", ">"):
        return PrCmp(left, rel, right)
    if rel == "<=":
        return PrCmp(right, ">=", left)
    if rel == "<":
        return PrCmp(right, ">", left)
    if rel == "==":
        return And(PrCmp(left, ">=", right), PrCmp(right, ">=", left))
    return Gdisj((PrCmp(left, ">", right), PrCmp(right, ">", left)))


class _Expander:
    def __init__(self, sig: Optional[Signature]):
        self.sig = sig

    def bot(self) -> Formula:
        return bottom(_need(self.sig, "bot"))

    def __call__(self, f: Formula) -> Formula:
        x = self
        if isinstance(f, (Eq, Neq)):
            return f
        if isinstance(f, Bot):
            return self.bot()
        if isinstance(f, Top):
            return top(_need(self.sig, "top"))
        if isinstance(f, Neg):
            return Sup(x(f.arg), self.bot())
        if isinstance(f, And):
            return And(x(f.left), x(f.right))
        if isinstance(f, Tensor):
            return Tensor(x(f.left), x(f.right))
        if isinstance(f, StrictTensor):
            return StrictTensor(x(f.left), x(f.right))
        if isinstance(f, Sup):
            return Sup(x(f.antecedent), x(f.consequent))
        if isinstance(f, Cf):
            return Cf(f.antecedent, x(f.consequent))
        if isinstance(f, Gdisj):
            return Gdisj(tuple(x(d) for d in f.disjuncts))
        if isinstance(f, PrConst):
            if f.rel in (">=", ">"):
                return PrConst(x(f.arg), f.rel, f.eps)
            return pr_const(x(f.arg), f.rel, f.eps, self.bot())
        if isinstance(f, PrCmp):
            return pr_cmp(x(f.left), f.rel, x(f.right))
        if isinstance(f, CondPrConst):
            return Sup(x(f.cond), x(PrConst(f.arg, f.rel, f.eps)))
        if isinstance(f, CondPrCmp):
            c1, c2 = x(f.cond1), x(f.cond2)
            if c1 == c2:
                return Sup(c1, pr_cmp(x(f.arg1), f.rel, x(f.arg2)))
            return CondPrCmp(x(f.arg1), c1, f.rel, x(f.arg2), c2)
        if isinstance(f, PrStar):
            return PrStar(x(f.arg), f.rel, f.eps)
        if isinstance(f, Dep):
            return self.dep(f)
        if isinstance(f, CIndep):
            a, b, g = x(f.left), x(f.right), x(f.given)
            ag = And(a, g)
            return Gdisj(
                (
                    pr_const(g, "==", ZERO, self.bot()),
                    pr_const(ag, "==", ZERO, self.bot()),
                    CondPrCmp(b, ag, "==", b, g),
                )
            )
        if isinstance(f, Impl):
            from ..transforms import compile_cneg

            return gdisj((compile_cneg(x(f.left), self.sig), x(f.right)))
        if isinstance(f, CNeg):
            from ..transforms import compile_cneg

            return compile_cneg(x(f.arg), self.sig)
        # atoms without sugar inside (NE)
        return f

    def dep(self, f: Dep) -> Formula:
        sig = _need(self.sig, "dep")
        values = gdisj(Eq(f.dependent, y) for y in sig.ran(f.dependent))
        if not f.determiners:
            return values
        ranges = [sig.ran(v) for v in f.determiners]
        return conj(
            Sup(eq_conj(zip(f.determiners, xs)), values) for xs in itertools.product(*ranges)
        )


def expand_sugar(f: Formula, sig: Optional[Signature] = None) -> Formula:
    """Rewrite every abbreviation in ``f`` into core and extension constructors.

    ``bot``, ``top``, ``!`` and some probability atoms need a signature to
    instantiate the falsum; :class:`SignatureRequired` is raised without one.
    """
    return _Expander(sig)(f)
