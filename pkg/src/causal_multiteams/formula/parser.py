"""Recursive-descent parser for the ASCII formula syntax.

Precedence, loosest first: ``~>`` ``=>`` ``->`` (right associative), ``\\/``,
``<|>``, ``|``, ``&``, prefix ``!``. Inside ``Pr(...)`` and after the ``;`` of
``cindep`` a top-level ``|`` separates the conditioning event, so a tensor
disjunction there must be parenthesized.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..core import Signature
from ..errors import FormulaSyntaxError, UnknownFormulaVariable, ValueNotInRange
from .nodes import (
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
    And,
    Bot,
    PrCmp,
    PrConst,
    PrStar,
    StrictTensor,
    Sup,
    Tensor,
    Top,
    is_co,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<op><\|>|~>|=>|->|\\/|>=|<=|==|!=|[|&!=<>();,*/])
  | (?P<str>"[^"]*")
  | (?P<word>[A-Za-z0-9_.']+)
    """,
    re.VERBOSE,
)

_RELS = (">=", ">", "<=", "<", "==", "!=")
_KEYWORDS = {"Pr", "NE", "bot", "top", "dep", "cindep", "cneg"}


@dataclass(frozen=True)
class Token:
    kind: str  # "op", "word", "str" or "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Optional[Signature]):
        self.text = text
        self.sig = sig
        self.tokens = tokenize(text)
        self.i = 0

    # -- token helpers -------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def at(self, *texts: str) -> bool:
        t = self.tok
        return t.kind == "op" and t.text in texts

    def at_word(self, *words: str) -> bool:
        return self.tok.kind == "word" and self.tok.text in words

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def error(self, message: str, expected: str = "", tok: Optional[Token] = None) -> FormulaSyntaxError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        if expected:
            message = f"{message}: expected {expected}, found {found}"
        return FormulaSyntaxError(message, tok.pos, self.text, expected)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error("syntax error", repr(text))
        return self.advance()

    # -- grammar -------------------------------------------------------------

    def parse(self) -> Formula:
        f = self.implication(bar=True)
        if self.tok.kind != "end":
            raise self.error("syntax error", "end of input")
        return f

    def implication(self, bar: bool) -> Formula:
        left = self.global_disjunction(bar)
        if not self.at("~>", "=>", "->"):
            return left
        op = self.advance()
        right = self.implication(bar)
        if op.text == "~>":
            return Cf(self._antecedent_pairs(left, op), right)
        if op.text == "=>":
            if not is_co(left):
                raise FormulaSyntaxError(
                    "the antecedent of '=>' must be a CO formula", op.pos, self.text
                )
            return Sup(left, right)
        return Impl(left, right)

    def _antecedent_pairs(self, f: Formula, op: Token) -> tuple:
        pairs = []
        stack = [f]
        while stack:
            node = stack.pop()
            if isinstance(node, And):
                stack.append(node.right)
                stack.append(node.left)
            elif isinstance(node, Eq):
                pairs.append((node.var, node.value))
            else:
                raise FormulaSyntaxError(
                    "the antecedent of '~>' must be a conjunction of equalities X=x",
                    op.pos,
                    self.text,
                )
        return tuple(pairs)

    def global_disjunction(self, bar: bool) -> Formula:
        items = [self.strict_tensor(bar)]
        while self.at("\\/"):
            self.advance()
            items.append(self.strict_tensor(bar))
        return items[0] if len(items) == 1 else Gdisj(tuple(items))

    def strict_tensor(self, bar: bool) -> Formula:
        left = self.tensor(bar)
        while self.at("<|>"):
            self.advance()
            left = StrictTensor(left, self.tensor(bar))
        return left

    def tensor(self, bar: bool) -> Formula:
        start = self.tok
        left = self.conjunction(bar)
        while bar and self.at("|"):
            op = self.advance()
            right = self.conjunction(bar)
            if not (is_co(left) and is_co(right)):
                raise FormulaSyntaxError(
                    "operands of '|' must be CO formulas", op.pos if is_co(left) else start.pos, self.text
                )
            left = Tensor(left, right)
        return left

    def conjunction(self, bar: bool) -> Formula:
        left = self.unary(bar)
        while self.at("&"):
            self.advance()
            left = And(left, self.unary(bar))
        return left

    def unary(self, bar: bool) -> Formula:
        if self.at("!"):
            op = self.advance()
            arg = self.unary(bar)
            if not is_co(arg):
                raise FormulaSyntaxError("'!' applies to CO formulas only", op.pos, self.text)
            return Neg(arg)
        return self.atom()

    def atom(self) -> Formula:
        tok = self.tok
        if self.at("("):
            self.advance()
            f = self.implication(bar=True)
            self.expect(")")
            return f
        if tok.kind == "end":
            raise self.error("unexpected end of input", "a formula")
        if tok.kind == "word":
            word = tok.text
            nxt = self.tokens[self.i + 1]
            if word == "Pr" and nxt.kind == "op" and nxt.text in ("(", "*"):
                return self.probability_atom()
            if word in ("bot", "top", "NE") and not (nxt.kind == "op" and nxt.text in ("=", "!=")):
                self.advance()
                return {"bot": Bot, "top": Top, "NE": NE}[word]()
            if word == "cneg" and nxt.kind == "op" and nxt.text == "(":
                self.advance()
                self.advance()
                f = self.implication(bar=True)
                self.expect(")")
                return CNeg(f)
            if word == "dep" and nxt.kind == "op" and nxt.text == "(":
                return self.dependence()
            if word == "cindep" and nxt.kind == "op" and nxt.text == "(":
                return self.independence()
            return self.literal()
        raise self.error("syntax error", "a formula")

    def literal(self) -> Formula:
        var_tok = self.advance()
        if var_tok.kind != "word" or not re.match(r"[A-Za-z_]", var_tok.text):
            raise self.error("syntax error", "a variable", var_tok)
        var = var_tok.text
        self._check_var(var, var_tok)
        if not self.at("=", "!="):
            raise self.error("syntax error", "'=' or '!='")
        op = self.advance()
        value_tok = self.advance()
        if value_tok.kind == "str":
            value = value_tok.text[1:-1]
        elif value_tok.kind == "word":
            value = value_tok.text
        else:
            raise self.error("syntax error", "a value", value_tok)
        self._check_value(var, value, value_tok)
        return Eq(var, value) if op.text == "=" else Neq(var, value)

    def _check_var(self, var: str, tok: Token) -> None:
        if self.sig is not None and var not in self.sig:
            raise UnknownFormulaVariable(f"unknown variable {var!r}", tok.pos, self.text)

    def _check_value(self, var: str, value: str, tok: Token) -> None:
        if self.sig is not None and value not in self.sig.ran(var):
            raise ValueNotInRange(f"value {value!r} is not in the range of {var}", tok.pos, self.text)

    def _co_argument(self, bar: bool) -> Formula:
        start = self.tok
        f = self.implication(bar=bar)
        if not is_co(f):
            raise FormulaSyntaxError("probability arguments must be CO formulas", start.pos, self.text)
        return f

    def _pr_term(self) -> tuple[bool, Formula, Optional[Formula], Token]:
        """Parse ``Pr(a)``, ``Pr(a | g)`` or ``Pr*(a)``; returns (star, arg, cond, start)."""
        start = self.advance()  # "Pr"
        star = False
        if self.at("*"):
            self.advance()
            star = True
        self.expect("(")
        arg = self._co_argument(bar=False)
        cond = None
        if self.at("|"):
            bar_tok = self.advance()
            if star:
                raise FormulaSyntaxError("Pr* does not take a condition", bar_tok.pos, self.text)
            cond = self._co_argument(bar=False)
        self.expect(")")
        return star, arg, cond, start

    def _rational(self) -> Fraction:
        tok = self.tok
        if tok.kind != "word":
            raise self.error("syntax error", "a rational threshold")
        self.advance()
        text = tok.text
        if self.at("/"):
            self.advance()
            den = self.tok
            if den.kind != "word":
                raise self.error("syntax error", "a denominator")
            self.advance()
            text = f"{text}/{den.text}"
        try:
            value = Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise FormulaSyntaxError(f"invalid rational {text!r}", tok.pos, self.text, "a rational") from None
        if not 0 <= value <= 1:
            raise FormulaSyntaxError(f"threshold {text} is outside [0, 1]", tok.pos, self.text)
        return value

    def probability_atom(self) -> Formula:
        star, arg, cond, start = self._pr_term()
        if not self.at(*_RELS):
            raise self.error("syntax error", "a comparison (>=, >, <=, <, ==, !=)")
        rel = self.advance().text
        if self.at_word("Pr") and self.tokens[self.i + 1].text in ("(", "*"):
            star2, arg2, cond2, start2 = self._pr_term()
            if star or star2:
                raise FormulaSyntaxError("Pr* can only be compared with a constant", start.pos, self.text)
            if cond is None and cond2 is None:
                return PrCmp(arg, rel, arg2)
            return CondPrCmp(arg, cond if cond is not None else Top(), rel, arg2, cond2 if cond2 is not None else Top())
        eps = self._rational()
        if star:
            return PrStar(arg, rel, eps)
        if cond is not None:
            return CondPrConst(arg, cond, rel, eps)
        return PrConst(arg, rel, eps)

    def dependence(self) -> Formula:
        self.advance()
        self.expect("(")
        determiners = []
        while not self.at(";"):
            tok = self.advance()
            if tok.kind != "word":
                raise self.error("syntax error", "a variable", tok)
            self._check_var(tok.text, tok)
            determiners.append(tok.text)
            if not self.at(","):
                break
            self.advance()
        self.expect(";")
        tok = self.advance()
        if tok.kind != "word":
            raise self.error("syntax error", "a variable", tok)
        self._check_var(tok.text, tok)
        self.expect(")")
        return Dep(tuple(determiners), tok.text)

    def independence(self) -> Formula:
        self.advance()
        self.expect("(")
        left = self._co_argument(bar=True)
        self.expect(";")
        right = self._co_argument(bar=False)
        given: Formula = Top()
        if self.at("|"):
            self.advance()
            given = self._co_argument(bar=False)
        self.expect(")")
        return CIndep(left, right, given)


def parse(text: str, sig: Optional[Signature] = None) -> Formula:
    """Parse ``text``; with ``sig`` every variable and value is checked against it."""
    return _Parser(text, sig).parse()


def parse_co(text: str, sig: Optional[Signature] = None) -> Formula:
    f = parse(text, sig)
    if not is_co(f):
        raise FormulaSyntaxError("expected a CO formula", 0, text)
    return f


def parse_pairs(text: str, sig: Optional[Signature] = None) -> tuple:
    """Parse an intervention such as ``X=1 & Y=0`` into (var, value) pairs."""
    p = _Parser(text, sig)
    f = p.global_disjunction(bar=True)
    if p.tok.kind != "end":
        raise p.error("syntax error", "end of input")
    return p._antecedent_pairs(f, Token("op", "~>", 0))
