"""Signatures, multiteams, function components and causal multiteams.

Assignments are plain tuples of value tokens listed in the signature's
variable order; :class:`Signature` converts between tuples and dicts.
Multiplicities replace an explicit key column: a multiteam is a map from
assignment to a positive count.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import (
    CompatibilityViolation,
    ConstantFunction,
    CyclicGraph,
    NonNumericValue,
    RangeError,
    UnknownVariable,
    ValidationError,
)

Assignment = tuple  # values in signature order
Rational = Fraction


@dataclass(frozen=True)
class Signature:
    """Ordered variables with finite ordered ranges of opaque value tokens."""

    dom: tuple[str, ...]
    ranges: tuple[tuple[str, ...], ...]
    _index: Mapping[str, int] = field(init=False, repr=False, compare=False, hash=False)
    _value_rank: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if len(self.dom) != len(self.ranges):
            raise ValidationError("dom and ranges differ in length")
        if len(set(self.dom)) != len(self.dom):
            raise ValidationError("duplicate variable in signature")
        for var, ran in zip(self.dom, self.ranges):
            if not ran:
                raise ValidationError(f"variable {var} has an empty range")
            if len(set(ran)) != len(ran):
                raise ValidationError(f"duplicate value in the range of {var}")
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.dom)})
        object.__setattr__(
            self, "_value_rank", tuple({x: j for j, x in enumerate(r)} for r in self.ranges)
        )

    @classmethod
    def from_dict(cls, ranges: Mapping[str, Sequence[object]]) -> "Signature":
        dom = tuple(str(v) for v in ranges)
        return cls(dom, tuple(tuple(str(x) for x in ranges[v]) for v in ranges))

    def to_dict(self) -> dict[str, list[str]]:
        return {v: list(r) for v, r in zip(self.dom, self.ranges)}

    def __contains__(self, var: object) -> bool:
        return var in self._index

    def index(self, var: str) -> int:
        try:
            return self._index[var]
        except KeyError:
            raise UnknownVariable(var) from None

    def ran(self, var: str) -> tuple[str, ...]:
        return self.ranges[self.index(var)]

    def check_value(self, var: str, value: str) -> None:
        if value not in self._value_rank[self.index(var)]:
            raise RangeError(var, value)

    def assignment(self, values: Mapping[str, object]) -> Assignment:
        """Build a validated assignment tuple from a ``{var: value}`` mapping."""
        extra = set(values) - set(self.dom)
        if extra:
            raise UnknownVariable(sorted(extra)[0])
        out = []
        for var in self.dom:
            if var not in values:
                raise ValidationError(f"assignment does not give a value to {var}")
            value = str(values[var])
            self.check_value(var, value)
            out.append(value)
        return tuple(out)

    def as_dict(self, s: Assignment) -> dict[str, str]:
        return dict(zip(self.dom, s))

    def sort_key(self, s: Assignment) -> tuple[int, ...]:
        return tuple(rank[x] for rank, x in zip(self._value_rank, s))

    def all_assignments(self) -> Iterator[Assignment]:
        """Every assignment of the signature, lexicographic in dom and range order."""
        return itertools.product(*self.ranges)

    def others(self, var: str) -> tuple[str, ...]:
        """All variables except ``var``, in dom order."""
        return tuple(v for v in self.dom if v != var)


class Multiteam:
    """A finite multiset of assignments, stored as positive multiplicities."""

    __slots__ = ("_counts", "_size", "_hash")

    def __init__(self, counts: Union[Mapping[Assignment, int], Iterable[tuple[Assignment, int]]] = ()):
        items = counts.items() if isinstance(counts, Mapping) else counts
        merged: dict[Assignment, int] = {}
        for s, c in items:
            if not isinstance(c, int) or isinstance(c, bool) or c < 0:
                raise ValidationError(f"multiplicity must be a nonnegative integer, got {c!r}")
            if c:
                s = tuple(s)
                merged[s] = merged.get(s, 0) + c
        self._counts = merged
        self._size = sum(merged.values())
        self._hash = None

    @classmethod
    def from_rows(cls, rows: Iterable[Assignment]) -> "Multiteam":
        return cls((tuple(r), 1) for r in rows)

    @property
    def counts(self) -> Mapping[Assignment, int]:
        return MappingProxyType(self._counts)

    @property
    def size(self) -> int:
        """Cardinality: the sum of all multiplicities."""
        return self._size

    def count(self, s: Assignment) -> int:
        return self._counts.get(tuple(s), 0)

    def support(self) -> frozenset:
        return frozenset(self._counts)

    def items(self):
        return self._counts.items()

    def scaled(self, n: int) -> "Multiteam":
        return Multiteam({s: c * n for s, c in self._counts.items()})

    def __bool__(self) -> bool:
        return self._size > 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multiteam):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Multiteam({self._counts!r})"


class CausalFunction:
    """A structural function for ``target`` given as a table over ``args``.

    The table maps tuples of argument values (in ``args`` order) to an output
    value. Arguments outside ``args`` are implicitly dummy.
    """

    __slots__ = ("target", "args", "table", "_hash")

    def __init__(self, target: str, args: Sequence[str], table: Mapping[tuple, str]):
        self.target = target
        self.args = tuple(args)
        self.table = MappingProxyType({tuple(k): str(v) for k, v in table.items()})
        self._hash = None

    @classmethod
    def from_callable(cls, target: str, args: Sequence[str], sig: Signature, fn) -> "CausalFunction":
        """Tabulate ``fn(*arg_values) -> value`` over the argument ranges."""
        table = {vals: str(fn(*vals)) for vals in itertools.product(*(sig.ran(a) for a in args))}
        return cls(target, args, table)

    def __call__(self, values: Sequence[str]) -> str:
        return self.table[tuple(values)]

    def evaluate(self, s: Assignment, sig: Signature) -> str:
        return self.table[tuple(s[sig.index(a)] for a in self.args)]

    def outputs(self) -> set[str]:
        return set(self.table.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CausalFunction):
            return NotImplemented
        return (self.target, self.args, dict(self.table)) == (other.target, other.args, dict(other.table))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.target, self.args, frozenset(self.table.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"CausalFunction({self.target!r}, args={self.args!r}, table={dict(self.table)!r})"


def check_function_table(f: CausalFunction, sig: Signature, *, outputs_in_range: bool = True) -> None:
    """Raise unless ``f`` is a total table over its argument ranges."""
    sig.index(f.target)
    for a in f.args:
        sig.index(a)
        if a == f.target:
            raise ValidationError(f"{f.target} cannot be an argument of its own function")
    if len(set(f.args)) != len(f.args):
        raise ValidationError(f"repeated argument in the function for {f.target}")
    expected = set(itertools.product(*(sig.ran(a) for a in f.args)))
    if set(f.table) != expected:
        missing = expected - set(f.table)
        if missing:
            raise ValidationError(
                f"table for {f.target} is not total: missing {','.join(sorted(missing)[0])}"
            )
        raise ValidationError(f"table for {f.target} has entries outside the argument ranges")
    if outputs_in_range:
        for out in f.table.values():
            sig.check_value(f.target, out)


def minimize_parents(f: CausalFunction, sig: Signature) -> CausalFunction:
    """Drop every dummy argument of ``f``; the remaining args are the parents.

    An argument is dummy when varying it, with all other arguments fixed,
    never changes the output. Arguments are returned in dom order.
    """
    args = sorted(f.args, key=sig.index)
    table = {tuple(k[f.args.index(a)] for a in args): v for k, v in f.table.items()}
    i = 0
    while i < len(args):
        groups: dict[tuple, str] = {}
        dummy = True
        for key, out in table.items():
            rest = key[:i] + key[i + 1:]
            seen = groups.setdefault(rest, out)
            if seen != out:
                dummy = False
                break
        if dummy:
            args.pop(i)
            table = {k[:i] + k[i + 1:]: v for k, v in table.items()}
        else:
            i += 1
    return CausalFunction(f.target, args, table)


class FunctionComponent:
    """Map from endogenous variable to its causal function."""

    __slots__ = ("_functions", "_hash")

    def __init__(self, functions: Union[Mapping[str, CausalFunction], Iterable[CausalFunction]] = ()):
        if isinstance(functions, Mapping):
            fns = dict(functions)
            for var, fn in fns.items():
                if fn.target != var:
                    raise ValidationError(f"function keyed by {var} targets {fn.target}")
        else:
            fns = {}
            for fn in functions:
                if fn.target in fns:
                    raise ValidationError(f"two functions given for {fn.target}")
                fns[fn.target] = fn
        self._functions = fns
        self._hash = None

    @property
    def functions(self) -> Mapping[str, CausalFunction]:
        return MappingProxyType(self._functions)

    @property
    def endogenous(self) -> frozenset:
        return frozenset(self._functions)

    def __getitem__(self, var: str) -> CausalFunction:
        return self._functions[var]

    def __contains__(self, var: object) -> bool:
        return var in self._functions

    def __len__(self) -> int:
        return len(self._functions)

    def __iter__(self):
        return iter(self._functions)

    def without(self, variables: Iterable[str]) -> "FunctionComponent":
        drop = set(variables)
        return FunctionComponent({v: f for v, f in self._functions.items() if v not in drop})

    def minimized(self, sig: Signature) -> "FunctionComponent":
        return FunctionComponent({v: minimize_parents(f, sig) for v, f in self._functions.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FunctionComponent):
            return NotImplemented
        return self._functions == other._functions

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._functions.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"FunctionComponent({list(self._functions.values())!r})"


def topological_order(laws: FunctionComponent, sig: Signature) -> list[str]:
    """Endogenous variables ordered so that parents come first; raises CyclicGraph."""
    parents = {v: [a for a in laws[v].args if a in laws] for v in laws}
    order: list[str] = []
    state: dict[str, int] = {}  # 1 = on stack, 2 = done
    for root in sorted(laws, key=sig.index):
        if state.get(root):
            continue
        stack: list[tuple[str, Iterator[str]]] = [(root, iter(parents[root]))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                state[node] = 2
                order.append(node)
            elif state.get(nxt) == 1:
                path = [n for n, _ in stack]
                raise CyclicGraph(path[path.index(nxt):] + [nxt])
            elif not state.get(nxt):
                state[nxt] = 1
                stack.append((nxt, iter(parents[nxt])))
    return order


@functools.lru_cache(maxsize=4096)
def _plan(laws: FunctionComponent, sig: Signature) -> tuple:
    """(target index, argument indices, table) triples in topological order."""
    return tuple(
        (sig.index(v), tuple(sig.index(a) for a in laws[v].args), laws[v].table)
        for v in topological_order(laws, sig)
    )


@dataclass(frozen=True)
class CausalGraph:
    edges: tuple[tuple[str, str], ...]

    def parents(self, var: str) -> tuple[str, ...]:
        return tuple(p for p, c in self.edges if c == var)

    def children(self, var: str) -> tuple[str, ...]:
        return tuple(c for p, c in self.edges if p == var)


class CausalMultiteam:
    """A multiteam paired with a recursive function component it is compatible with.

    The stored laws are always minimized (argument lists equal parent sets).
    """

    __slots__ = ("sig", "team", "laws", "_hash")

    def __init__(self, sig: Signature, team: Multiteam, laws: FunctionComponent, *, validate: bool = True):
        if validate:
            laws = _validate_laws(laws, sig)
            _validate_rows(sig, team, laws)
        self.sig = sig
        self.team = team
        self.laws = laws
        self._hash = None

    @property
    def size(self) -> int:
        return self.team.size

    def is_empty(self) -> bool:
        return self.team.size == 0

    @property
    def exogenous(self) -> tuple[str, ...]:
        return tuple(v for v in self.sig.dom if v not in self.laws)

    @property
    def endogenous(self) -> tuple[str, ...]:
        return tuple(v for v in self.sig.dom if v in self.laws)

    def rows(self) -> list[tuple[Assignment, int]]:
        """(assignment, count) pairs in lexicographic order."""
        return sorted(self.team.items(), key=lambda kv: self.sig.sort_key(kv[0]))

    def with_team(self, team: Multiteam) -> "CausalMultiteam":
        """Same signature and laws, different rows; rows are trusted to be compatible."""
        return CausalMultiteam(self.sig, team, self.laws, validate=False)

    def plan(self) -> tuple:
        return _plan(self.laws, self.sig)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CausalMultiteam):
            return NotImplemented
        return (self.sig, self.laws, self.team) == (other.sig, other.laws, other.team)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.sig, self.laws, self.team))
        return self._hash

    def __repr__(self) -> str:
        rows = ", ".join(f"{s}x{c}" for s, c in self.rows())
        return f"CausalMultiteam(dom={self.sig.dom}, laws={sorted(self.laws)}, rows=[{rows}])"


def _validate_laws(laws: FunctionComponent, sig: Signature) -> FunctionComponent:
    minimized = {}
    for var in sorted(laws, key=sig.index):
        f = laws[var]
        check_function_table(f, sig)
        g = minimize_parents(f, sig)
        if not g.args or len(g.outputs()) < 2:
            raise ConstantFunction(var)
        minimized[var] = g
    out = FunctionComponent(minimized)
    topological_order(out, sig)
    return out


def _validate_rows(sig: Signature, team: Multiteam, laws: FunctionComponent) -> None:
    plan = _plan(laws, sig)
    for s in team.counts:
        if len(s) != len(sig.dom):
            raise ValidationError(f"assignment {s} does not match the signature length")
        for var, value in zip(sig.dom, s):
            sig.check_value(var, value)
        for target, arg_idx, table in plan:
            expected = table[tuple(s[i] for i in arg_idx)]
            if s[target] != expected:
                raise CompatibilityViolation(sig.as_dict(s), sig.dom[target], expected)


def new_causal_multiteam(sig: Signature, team: Multiteam, laws: FunctionComponent) -> CausalMultiteam:
    """Validated constructor: compatibility, non-constancy and recursivity."""
    return CausalMultiteam(sig, team, laws, validate=True)


def causal_graph(m: CausalMultiteam) -> CausalGraph:
    idx = m.sig.index
    edges = [(p, y) for y in m.laws for p in m.laws[y].args]
    edges.sort(key=lambda e: (idx(e[1]), idx(e[0])))
    return CausalGraph(tuple(edges))


def support(m: CausalMultiteam) -> frozenset:
    return m.team.support()


def _as_decimal(var: str, value: str) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise NonNumericValue(var, value) from None


def check_compatibility_tolerant(
    sig: Signature, team: Multiteam, laws: FunctionComponent, delta: Union[Fraction, int, str] = 0
) -> list[tuple[Assignment, str]]:
    """Rows and variables where ``|s(Y) - F_Y(s)|`` exceeds ``delta``.

    A pair is listed once per copy of the row, as if rows carried keys.

    ``laws`` need not be compatible with ``team``; function outputs need not lie
    in the range of their target. With ``delta == 0`` tokens are compared
    exactly, which is ordinary compatibility.
    """
    delta = Fraction(delta)
    if delta < 0:
        raise ValidationError("delta must be nonnegative")
    for var in laws:
        check_function_table(laws[var], sig, outputs_in_range=False)
    violations = []
    for s, count in sorted(team.items(), key=lambda kv: sig.sort_key(kv[0])):
        for var in sorted(laws, key=sig.index):
            out = laws[var].evaluate(s, sig)
            actual = s[sig.index(var)]
            if delta == 0:
                bad = actual != out
            else:
                bad = abs(_as_decimal(var, actual) - _as_decimal(var, out)) > delta
            if bad:
                violations.extend([(s, var)] * count)
    return violations
