"""Formula AST, parser, printer and sugar expansion."""

from .nodes import (
    ALL_RELS,
    CORE_RELS,
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
    conj,
    depth,
    eq_conj,
    gdisj,
    has_sugar,
    is_co,
    is_consistent_antecedent,
    is_literal,
    size,
    variables,
    walk,
)
from .parser import parse, parse_co, parse_pairs, tokenize
from .printer import to_text
from .sugar import bottom, expand_sugar, top

__all__ = [
    "ALL_RELS",
    "CORE_RELS",
    "And",
    "Bot",
    "CIndep",
    "CNeg",
    "Cf",
    "CondPrCmp",
    "CondPrConst",
    "Dep",
    "Eq",
    "Formula",
    "Gdisj",
    "Impl",
    "NE",
    "Neg",
    "Neq",
    "PrCmp",
    "PrConst",
    "PrStar",
    "StrictTensor",
    "Sup",
    "Tensor",
    "Top",
    "bottom",
    "conj",
    "depth",
    "eq_conj",
    "expand_sugar",
    "gdisj",
    "has_sugar",
    "is_co",
    "is_consistent_antecedent",
    "is_literal",
    "parse",
    "parse_co",
    "parse_pairs",
    "size",
    "to_text",
    "tokenize",
    "top",
    "variables",
    "walk",
]
