"""Rewriting passes: weak contradictory negation, counterfactual flattening,
the conditional/counterfactual normal form and rung classification."""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import Signature
from .errors import UnsupportedNode
from .formula.nodes import (
    EXTENSION_TYPES,
    SUGAR_TYPES,
    And,
    Cf,
    Eq,
    Formula,
    Gdisj,
    Neq,
    PrCmp,
    PrConst,
    Sup,
    is_co,
    is_consistent_antecedent,
    walk,
)
from .formula.sugar import bottom, expand_sugar

ONE = Fraction(1)
ZERO = Fraction(0)


def _falsum(sig: Optional[Signature], arg: Formula) -> Formula:
    """An event that no row satisfies.

    Without a signature the first literal of ``arg`` supplies the variable:
    ``Y=y ~> Y!=y`` is false on every row for any choice of Y and y.
    """
    if sig is not None:
        return bottom(sig)
    for node in walk(arg):
        if isinstance(node, (Eq, Neq)):
            return Cf(((node.var, node.value),), Neq(node.var, node.value))
        if isinstance(node, Cf):
            var, value = node.antecedent[0]
            return Cf(((var, value),), Neq(var, value))
    raise UnsupportedNode("cannot build a falsum for an argument without variables")


def _below_one(arg: Formula, sig: Optional[Signature]) -> Formula:
    """Core form of ``Pr(arg) < 1``."""
    return PrConst(Sup(arg, _falsum(sig, arg)), ">", ZERO)


def compile_cneg(phi: Formula, sig: Optional[Signature] = None) -> Formula:
    """The weak contradictory negation of a sugar-free core formula.

    On nonempty models exactly one of ``phi`` and the result holds; on the
    empty model both hold.
    """
    if isinstance(phi, EXTENSION_TYPES) or isinstance(phi, SUGAR_TYPES):
        raise UnsupportedNode(f"weak contradictory negation is not defined for {type(phi).__name__}")
    if isinstance(phi, PrConst):
        bot = _falsum(sig, phi.arg)
        neg = Sup(phi.arg, bot)
        if phi.rel == ">=":
            return PrConst(neg, ">", ONE - phi.eps)
        if phi.rel == ">":
            return PrConst(neg, ">=", ONE - phi.eps)
        raise UnsupportedNode(f"expand the relation {phi.rel!r} before negating")
    if isinstance(phi, PrCmp):
        if phi.rel == ">=":
            return PrCmp(phi.right, ">", phi.left)
        if phi.rel == ">":
            return PrCmp(phi.right, ">=", phi.left)
        raise UnsupportedNode(f"expand the relation {phi.rel!r} before negating")
    if isinstance(phi, And):
        return Gdisj((compile_cneg(phi.left, sig), compile_cneg(phi.right, sig)))
    if isinstance(phi, Gdisj):
        items = [compile_cneg(d, sig) for d in phi.disjuncts]
        out = items[0]
        for f in items[1:]:
            out = And(out, f)
        return out
    if isinstance(phi, Sup):
        return And(PrConst(phi.antecedent, ">", ZERO), Sup(phi.antecedent, compile_cneg(phi.consequent, sig)))
    if isinstance(phi, Cf):
        if not is_consistent_antecedent(phi.antecedent):
            # the counterfactual is valid, so its negation fails on every nonempty model
            var, value = phi.antecedent[0]
            return _below_one(Cf(((var, value),), Eq(var, value)), sig)
        return Cf(phi.antecedent, compile_cneg(phi.consequent, sig))
    if is_co(phi):
        # literals and tensor disjunctions: a CO formula holds iff its probability is 1
        return _below_one(phi, sig)
    raise UnsupportedNode(f"weak contradictory negation is not defined for {type(phi).__name__}")


def merge_antecedents(outer: tuple, inner: tuple) -> tuple:
    """Antecedent of ``outer ~> (inner ~> f)`` as one intervention: inner values win."""
    inner_vars = {v for v, _ in inner}
    return tuple(p for p in outer if p[0] not in inner_vars) + tuple(inner)


def flatten_counterfactuals(phi: Formula) -> Formula:
    """Merge directly nested counterfactuals whose antecedents are both consistent."""
    if isinstance(phi, Cf):
        body = flatten_counterfactuals(phi.consequent)
        if (
            isinstance(body, Cf)
            and is_consistent_antecedent(phi.antecedent)
            and is_consistent_antecedent(body.antecedent)
        ):
            return Cf(merge_antecedents(phi.antecedent, body.antecedent), body.consequent)
        return Cf(phi.antecedent, body)
    kids = phi.children()
    if not kids:
        return phi
    return _rebuild(phi, [flatten_counterfactuals(k) for k in kids])


def _rebuild(phi: Formula, kids: list) -> Formula:
    """A copy of ``phi`` with its children replaced, in ``children()`` order."""
    if isinstance(phi, Gdisj):
        return Gdisj(tuple(kids))
    names = [f.name for f in dataclasses.fields(phi) if isinstance(getattr(phi, f.name), Formula)]
    return dataclasses.replace(phi, **dict(zip(names, kids)))


class LeafTag(str, enum.Enum):
    BARE = "BareAtom"
    RUNG1 = "Rung1"
    RUNG2 = "Rung2"
    RUNG3 = "Rung3"

    @property
    def rung(self) -> int:
        return {"BareAtom": 1, "Rung1": 1, "Rung2": 2, "Rung3": 3}[self.value]


def leaf_tag(f: Formula) -> Optional[LeafTag]:
    """Shape of a normal-form leaf, or None when ``f`` is not a leaf."""
    if isinstance(f, (PrConst, PrCmp)):
        return LeafTag.BARE
    if isinstance(f, Cf) and isinstance(f.consequent, (PrConst, PrCmp)):
        return LeafTag.RUNG2
    if isinstance(f, Sup) and is_co(f.antecedent):
        if isinstance(f.consequent, (PrConst, PrCmp)):
            return LeafTag.RUNG1
        if leaf_tag(f.consequent) is LeafTag.RUNG2:
            return LeafTag.RUNG3
    return None


@dataclass(frozen=True)
class NormalForm:
    formula: Formula
    leaves: tuple  # (leaf formula, LeafTag) in left-to-right order

    def __str__(self) -> str:
        return str(self.formula)


@dataclass(frozen=True)
class RungReport:
    tags: tuple
    max_rung: int


def _pco_leaves(f: Formula) -> list:
    if isinstance(f, And):
        return _pco_leaves(f.left) + _pco_leaves(f.right)
    if isinstance(f, Gdisj):
        out = []
        for d in f.disjuncts:
            out.extend(_pco_leaves(d))
        return out
    return [f]


def check_normal_form(f: Formula) -> list[str]:
    """Structural violations of the normal-form shape; empty when it conforms.

    At every position outside probability arguments and ``=>`` antecedents,
    a counterfactual must have a probability atom as consequent and a
    selective implication must have a probability atom or such a
    counterfactual as consequent.
    """
    problems = []
    for leaf in _pco_leaves(f):
        if leaf_tag(leaf) is None:
            problems.append(f"not a normal-form leaf: {leaf}")
    return problems


class _Normalizer:
    def __init__(self, sig: Optional[Signature]):
        self.sig = sig

    def __call__(self, f: Formula) -> Formula:
        if isinstance(f, (PrConst, PrCmp)):
            if f.rel not in (">=", ">"):
                raise UnsupportedNode("expand sugar before normalizing")
            return f
        if isinstance(f, And):
            return And(self(f.left), self(f.right))
        if isinstance(f, Gdisj):
            return Gdisj(tuple(self(d) for d in f.disjuncts))
        if isinstance(f, Sup):
            return self.select(f.antecedent, self(f.consequent))
        if isinstance(f, Cf):
            if not is_consistent_antecedent(f.antecedent):
                return self.inconsistent(f.antecedent)
            return self.intervene(f.antecedent, self(f.consequent))
        if isinstance(f, EXTENSION_TYPES) or isinstance(f, SUGAR_TYPES):
            raise UnsupportedNode(f"normal form is not defined for {type(f).__name__}")
        if is_co(f):
            # literals and tensor disjunctions become certainty statements
            return PrConst(f, ">=", ONE)
        raise UnsupportedNode(f"normal form is not defined for {type(f).__name__}")

    @staticmethod
    def inconsistent(pairs: tuple) -> Formula:
        seen: dict[str, str] = {}
        for var, value in pairs:
            if seen.setdefault(var, value) != value:
                return Cf(pairs, PrConst(Eq(var, value), ">=", ONE))
        raise AssertionError("antecedent is consistent")

    def select(self, alpha: Formula, body: Formula) -> Formula:
        if isinstance(body, And):
            return And(self.select(alpha, body.left), self.select(alpha, body.right))
        if isinstance(body, Gdisj):
            return Gdisj(tuple(self.select(alpha, d) for d in body.disjuncts))
        if isinstance(body, Sup):
            return Sup(And(alpha, body.antecedent), body.consequent)
        return Sup(alpha, body)

    def intervene(self, pairs: tuple, body: Formula) -> Formula:
        if isinstance(body, And):
            return And(self.intervene(pairs, body.left), self.intervene(pairs, body.right))
        if isinstance(body, Gdisj):
            return Gdisj(tuple(self.intervene(pairs, d) for d in body.disjuncts))
        if isinstance(body, Sup):
            return Sup(Cf(pairs, body.antecedent), self.intervene(pairs, body.consequent))
        if isinstance(body, Cf):
            if not is_consistent_antecedent(body.antecedent):
                return body
            return Cf(merge_antecedents(pairs, body.antecedent), body.consequent)
        return Cf(pairs, body)


def normal_form(phi: Formula, sig: Optional[Signature] = None) -> NormalForm:
    """Equivalent formula built from conditional, interventional and counterfactual atoms.

    The result is an and/or tree whose leaves are probability atoms, possibly
    under ``gamma =>``, ``X=x ~>`` or ``gamma => (X=x ~> ...)``. Abbreviations
    are expanded first, which needs ``sig`` when they include the falsum.
    """
    phi = expand_sugar(phi, sig)
    out = _Normalizer(sig)(phi)
    leaves = tuple((leaf, leaf_tag(leaf)) for leaf in _pco_leaves(out))
    return NormalForm(out, leaves)


def classify_rung(nf: NormalForm) -> RungReport:
    tags = tuple(tag for _, tag in nf.leaves)
    return RungReport(tags, max(t.rung for t in tags))
