"""Immutable AST for the causal-observational and probabilistic languages.

One node hierarchy covers both layers. :func:`is_co` decides whether a node
is an event-level (CO) formula; the parser enforces that probability
arguments, antecedents of ``=>`` and operands of ``|`` and ``!`` are CO.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

CORE_RELS = (">=", ">")
ALL_RELS = (">=", ">", "<=", "<", "==", "!=")

Pairs = tuple  # tuple[tuple[str, str], ...]


class Formula:
    """Base class of every AST node."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self) -> str:
        from .printer import to_text

        return to_text(self)


def _check_eps(eps: Fraction) -> None:
    if not isinstance(eps, Fraction):
        raise TypeError(f"threshold must be a Fraction, got {type(eps).__name__}")
    if not 0 <= eps <= 1:
        raise ValueError(f"threshold {eps} is outside [0, 1]")


def _check_rel(rel: str) -> None:
    if rel not in ALL_RELS:
        raise ValueError(f"unknown relation {rel!r}")


# -- literals and event connectives ------------------------------------------


@dataclass(frozen=True)
class Eq(Formula):
    var: str
    value: str


@dataclass(frozen=True)
class Neq(Formula):
    var: str
    value: str


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Tensor(Formula):
    """Tensor disjunction of events (``|``)."""

    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Sup(Formula):
    """Selective implication ``antecedent => consequent``."""

    antecedent: Formula
    consequent: Formula

    def children(self):
        return (self.antecedent, self.consequent)


@dataclass(frozen=True)
class Cf(Formula):
    """Interventionist counterfactual; ``antecedent`` is a nonempty tuple of (var, value)."""

    antecedent: Pairs
    consequent: Formula

    def __post_init__(self):
        if not self.antecedent:
            raise ValueError("counterfactual antecedent must be nonempty")
        object.__setattr__(self, "antecedent", tuple((str(v), str(x)) for v, x in self.antecedent))

    def children(self):
        return (self.consequent,)


# -- probabilistic layer -----------------------------------------------------


@dataclass(frozen=True)
class Gdisj(Formula):
    """Global disjunction over two or more disjuncts (binary and finite n-ary unified)."""

    disjuncts: tuple

    def __post_init__(self):
        object.__setattr__(self, "disjuncts", tuple(self.disjuncts))
        if len(self.disjuncts) < 2:
            raise ValueError("global disjunction needs at least two disjuncts")

    def children(self):
        return self.disjuncts


@dataclass(frozen=True)
class PrConst(Formula):
    arg: Formula
    rel: str
    eps: Fraction

    def __post_init__(self):
        _check_rel(self.rel)
        _check_eps(self.eps)

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class PrCmp(Formula):
    left: Formula
    rel: str
    right: Formula

    def __post_init__(self):
        _check_rel(self.rel)

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class CondPrConst(Formula):
    """``Pr(arg | cond) rel eps``."""

    arg: Formula
    cond: Formula
    rel: str
    eps: Fraction

    def __post_init__(self):
        _check_rel(self.rel)
        _check_eps(self.eps)

    def children(self):
        return (self.arg, self.cond)


@dataclass(frozen=True)
class CondPrCmp(Formula):
    """``Pr(arg1 | cond1) rel Pr(arg2 | cond2)``."""

    arg1: Formula
    cond1: Formula
    rel: str
    arg2: Formula
    cond2: Formula

    def __post_init__(self):
        _check_rel(self.rel)

    def children(self):
        return (self.arg1, self.cond1, self.arg2, self.cond2)


@dataclass(frozen=True)
class PrStar(Formula):
    """Probability atom that treats empty models as assigning probability 1."""

    arg: Formula
    rel: str
    eps: Fraction

    def __post_init__(self):
        _check_rel(self.rel)
        _check_eps(self.eps)

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class NE(Formula):
    """Nonemptiness atom."""


@dataclass(frozen=True)
class StrictTensor(Formula):
    """Disjunction over a split of the rows into two disjoint parts (``<|>``)."""

    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


# -- sugar -------------------------------------------------------------------


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Neg(Formula):
    """Dual negation of a CO formula (``!``)."""

    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class CNeg(Formula):
    """Weak contradictory negation (``cneg(...)``)."""

    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Impl(Formula):
    """Material implication (``->``)."""

    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Dep(Formula):
    """Functional dependence atom ``dep(X1,...,Xn; Y)``."""

    determiners: tuple
    dependent: str

    def __post_init__(self):
        object.__setattr__(self, "determiners", tuple(self.determiners))


@dataclass(frozen=True)
class CIndep(Formula):
    """Conditional independence ``cindep(a; b | g)``."""

    left: Formula
    right: Formula
    given: Formula

    def children(self):
        return (self.left, self.right, self.given)


SUGAR_TYPES = (Bot, Top, Neg, CNeg, Impl, Dep, CIndep)
PR_ATOMS = (PrConst, PrCmp)
EXTENSION_TYPES = (CondPrConst, CondPrCmp, PrStar, NE, StrictTensor)

_CO_LEAVES = (Eq, Neq, Bot, Top)


def is_co(f: Formula) -> bool:
    """True when ``f`` belongs to the event-level (CO) language, sugar included."""
    if isinstance(f, _CO_LEAVES):
        return True
    if isinstance(f, (And, Tensor, Sup)):
        return is_co(f.children()[0]) and is_co(f.children()[1])
    if isinstance(f, Cf):
        return is_co(f.consequent)
    if isinstance(f, Neg):
        return is_co(f.arg)
    return False


def is_literal(f: Formula) -> bool:
    return isinstance(f, (Eq, Neq))


def walk(f: Formula) -> Iterator[Formula]:
    yield f
    for c in f.children():
        yield from walk(c)


def has_sugar(f: Formula) -> bool:
    for node in walk(f):
        if isinstance(node, SUGAR_TYPES):
            return True
        if isinstance(node, (PrConst, PrCmp)) and node.rel not in CORE_RELS:
            return True
        if isinstance(node, CondPrConst):
            return True
        if isinstance(node, CondPrCmp) and node.cond1 == node.cond2:
            return True
    return False


def is_consistent_antecedent(pairs: Iterable[tuple[str, str]]) -> bool:
    """False iff some variable is set to two distinct values."""
    seen: dict[str, str] = {}
    for var, value in pairs:
        if seen.setdefault(var, value) != value:
            return False
    return True


def conj(items: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; an empty list yields ``Top()``."""
    items = list(items)
    if not items:
        return Top()
    out = items[0]
    for f in items[1:]:
        out = And(out, f)
    return out


def gdisj(items: Iterable[Formula]) -> Formula:
    """Global disjunction that collapses a single disjunct; an empty list yields ``Bot()``."""
    items = tuple(items)
    if not items:
        return Bot()
    if len(items) == 1:
        return items[0]
    return Gdisj(items)


def eq_conj(pairs: Iterable[tuple[str, str]]) -> Formula:
    return conj(Eq(v, x) for v, x in pairs)


def variables(f: Formula) -> set[str]:
    out: set[str] = set()
    for node in walk(f):
        if isinstance(node, (Eq, Neq)):
            out.add(node.var)
        elif isinstance(node, Cf):
            out.update(v for v, _ in node.antecedent)
        elif isinstance(node, Dep):
            out.update(node.determiners)
            out.add(node.dependent)
    return out


def size(f: Formula) -> int:
    return sum(1 for _ in walk(f))


def depth(f: Formula) -> int:
    kids = f.children()
    return 1 + (max(depth(c) for c in kids) if kids else 0)

