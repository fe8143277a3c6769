"""Exact model checking for probabilistic causal team logic."""

from .core import (
    CausalFunction,
    CausalGraph,
    CausalMultiteam,
    FunctionComponent,
    Multiteam,
    Signature,
    causal_graph,
    check_compatibility_tolerant,
    minimize_parents,
    new_causal_multiteam,
    support,
)
from .errors import CausalTeamError
from .formula import expand_sugar, parse, to_text
from .semantics import (
    EvalResult,
    cond_prob,
    intervene,
    prob,
    restrict,
    sat,
    satisfies,
    satisfies_mixed,
)

__all__ = [
    "CausalFunction",
    "CausalGraph",
    "CausalMultiteam",
    "CausalTeamError",
    "EvalResult",
    "FunctionComponent",
    "Multiteam",
    "Signature",
    "causal_graph",
    "check_compatibility_tolerant",
    "cond_prob",
    "expand_sugar",
    "intervene",
    "minimize_parents",
    "new_causal_multiteam",
    "parse",
    "prob",
    "restrict",
    "sat",
    "satisfies",
    "satisfies_mixed",
    "support",
    "to_text",
]
