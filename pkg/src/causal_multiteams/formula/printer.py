"""Canonical ASCII rendering; ``parse(to_text(f)) == f`` for every AST."""

from __future__ import annotations

import re

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
)

# binding strength, loosest first
_IMPL, _GDISJ, _STRICT, _TENSOR, _AND, _NEG, _ATOM = range(1, 8)

_WORD = re.compile(r"[A-Za-z0-9_.']+\Z")


def _value(x: str) -> str:
    return x if _WORD.match(x) else f'"{x}"'


def _level(f: Formula) -> int:
    if isinstance(f, (Cf, Sup, Impl)):
        return _IMPL
    if isinstance(f, Gdisj):
        return _GDISJ
    if isinstance(f, StrictTensor):
        return _STRICT
    if isinstance(f, Tensor):
        return _TENSOR
    if isinstance(f, And):
        return _AND
    if isinstance(f, Neg):
        return _NEG
    return _ATOM


def _pairs(pairs) -> str:
    return " & ".join(f"{v}={_value(x)}" for v, x in pairs)


def _pr(arg: Formula, cond: Formula | None = None, star: bool = False) -> str:
    head = "Pr*(" if star else "Pr("
    inner = _text(arg, _IMPL, bar=False)
    if cond is not None:
        inner += " | " + _text(cond, _IMPL, bar=False)
    return head + inner + ")"


def _text(f: Formula, min_level: int, bar: bool = True) -> str:
    """Render ``f`` in a context that binds at ``min_level``.

    ``bar`` is False inside ``Pr(...)``, where a bare ``|`` would be read as
    the conditioning bar; tensor disjunctions there are parenthesized.
    """
    level = _level(f)
    if level < min_level or (not bar and isinstance(f, Tensor)):
        return "(" + _text(f, _IMPL) + ")"

    if isinstance(f, Eq):
        return f"{f.var}={_value(f.value)}"
    if isinstance(f, Neq):
        return f"{f.var}!={_value(f.value)}"
    if isinstance(f, Cf):
        return f"{_pairs(f.antecedent)} ~> {_text(f.consequent, _IMPL, bar)}"
    if isinstance(f, Sup):
        return f"{_text(f.antecedent, _GDISJ, bar)} => {_text(f.consequent, _IMPL, bar)}"
    if isinstance(f, Impl):
        return f"{_text(f.left, _GDISJ, bar)} -> {_text(f.right, _IMPL, bar)}"
    if isinstance(f, Gdisj):
        return " \\/ ".join(_text(d, _STRICT, bar) for d in f.disjuncts)
    if isinstance(f, StrictTensor):
        return f"{_text(f.left, _STRICT, bar)} <|> {_text(f.right, _TENSOR, bar)}"
    if isinstance(f, Tensor):
        return f"{_text(f.left, _TENSOR, bar)} | {_text(f.right, _AND, bar)}"
    if isinstance(f, And):
        return f"{_text(f.left, _AND, bar)} & {_text(f.right, _NEG, bar)}"
    if isinstance(f, Neg):
        return "!" + _text(f.arg, _NEG, bar)
    if isinstance(f, PrConst):
        return f"{_pr(f.arg)} {f.rel} {f.eps}"
    if isinstance(f, PrStar):
        return f"{_pr(f.arg, star=True)} {f.rel} {f.eps}"
    if isinstance(f, PrCmp):
        return f"{_pr(f.left)} {f.rel} {_pr(f.right)}"
    if isinstance(f, CondPrConst):
        return f"{_pr(f.arg, f.cond)} {f.rel} {f.eps}"
    if isinstance(f, CondPrCmp):
        return f"{_pr(f.arg1, f.cond1)} {f.rel} {_pr(f.arg2, f.cond2)}"
    if isinstance(f, NE):
        return "NE"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Top):
        return "top"
    if isinstance(f, CNeg):
        return f"cneg({_text(f.arg, _IMPL)})"
    if isinstance(f, Dep):
        return f"dep({', '.join(f.determiners)}; {f.dependent})"
    if isinstance(f, CIndep):
        return (
            f"cindep({_text(f.left, _IMPL)}; {_text(f.right, _IMPL, bar=False)}"
            f" | {_text(f.given, _IMPL, bar=False)})"
        )
    raise TypeError(f"cannot print {type(f).__name__}")


def to_text(f: Formula) -> str:
    return _text(f, _IMPL)
