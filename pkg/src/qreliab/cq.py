"""Self-join-free Boolean conjunctive queries: parsing, validation, analysis.

Grammar: an optional head ``Name :-`` followed by comma-separated atoms
``Rel(t1,...,tk)``.  Relation names match ``[A-Z][A-Za-z0-9_]*``.  An argument
token starting with a lowercase letter is a variable; a token in single quotes
or starting with a digit is a constant.  Whitespace is insignificant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations

from .errors import (
    ArityError,
    HierarchicalQueryError,
    QuerySyntaxError,
    SelfJoinError,
    UnknownVariableError,
)

_RELATION_RE = re.compile(r"[A-Z][A-Za-z0-9_]*")
_VARIABLE_RE = re.compile(r"[a-z][A-Za-z0-9_]*")
_BARE_CONST_RE = re.compile(r"[0-9][A-Za-z0-9_.@]*")
_QUOTED_CONST_RE = re.compile(r"'([A-Za-z0-9_.@]+)'")


@dataclass(frozen=True)
class Term:
    """A query argument: either a variable or a constant."""

    kind: str  # "variable" | "constant"
    name: str

    @property
    def is_variable(self) -> bool:
        return self.kind == "variable"


@dataclass(frozen=True)
class Atom:
    relation: str
    args: tuple[Term, ...]

    @property
    def variables(self) -> tuple[str, ...]:
        """Variable names in position order, deduplicated."""
        seen: dict[str, None] = {}
        for t in self.args:
            if t.is_variable:
                seen.setdefault(t.name, None)
        return tuple(seen)

    def __str__(self) -> str:
        parts = []
        for t in self.args:
            if t.is_variable or t.name[0].isdigit():
                parts.append(t.name)
            else:
                parts.append(f"'{t.name}'")
        return f"{self.relation}({', '.join(parts)})"


@dataclass(frozen=True)
class Query:
    """A validated self-join-free Boolean CQ."""

    atoms: tuple[Atom, ...]

    def __post_init__(self):
        seen: set[str] = set()
        for atom in self.atoms:
            if atom.relation in seen:
                raise SelfJoinError(atom.relation)
            seen.add(atom.relation)

    @property
    def schema(self) -> dict[str, int]:
        return {a.relation: len(a.args) for a in self.atoms}

    @property
    def variables(self) -> tuple[str, ...]:
        """Variable names in first-occurrence order."""
        seen: dict[str, None] = {}
        for atom in self.atoms:
            for v in atom.variables:
                seen.setdefault(v, None)
        return tuple(seen)

    def __str__(self) -> str:
        return ", ".join(str(a) for a in self.atoms)


@dataclass(frozen=True)
class HierarchyReport:
    hierarchical: bool
    witness: tuple[str, str] | None = None
    witness_atoms: tuple[frozenset[int], frozenset[int]] | None = None


def parse_query(text: str) -> Query:
    """Parse query text into a validated Query.

    Atom order follows textual order.  Raises QuerySyntaxError, SelfJoinError,
    or ArityError (a relation cannot occur twice, so arity conflicts reduce to
    self-joins; ArityError is still reported for malformed argument lists).
    """
    pos = 0
    n = len(text)

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    # Optional head "Name :-" (the head name is ignored).
    head = text.find(":-")
    if head != -1:
        before = text[:head].strip()
        if before and not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", before):
            raise QuerySyntaxError("malformed query head", 0)
        pos = head + 2

    atoms: list[Atom] = []
    while True:
        skip_ws()
        if pos >= n:
            if atoms:
                raise QuerySyntaxError("expected an atom after ','", pos)
            raise QuerySyntaxError("empty query", pos)
        m = _RELATION_RE.match(text, pos)
        if not m:
            raise QuerySyntaxError("expected a relation name", pos)
        relation = m.group(0)
        pos = m.end()
        skip_ws()
        if pos >= n or text[pos] != "(":
            raise QuerySyntaxError("expected '('", pos)
        pos += 1
        args: list[Term] = []
        while True:
            skip_ws()
            if pos >= n:
                raise QuerySyntaxError("unterminated argument list", pos)
            if (m := _QUOTED_CONST_RE.match(text, pos)) is not None:
                args.append(Term("constant", m.group(1)))
            elif (m := _BARE_CONST_RE.match(text, pos)) is not None:
                args.append(Term("constant", m.group(0)))
            elif (m := _VARIABLE_RE.match(text, pos)) is not None:
                args.append(Term("variable", m.group(0)))
            else:
                raise QuerySyntaxError("expected a variable or constant", pos)
            pos = m.end()
            skip_ws()
            if pos < n and text[pos] == ",":
                pos += 1
                continue
            if pos < n and text[pos] == ")":
                pos += 1
                break
            raise QuerySyntaxError("expected ',' or ')'", pos)
        if not args:
            raise ArityError(f"atom {relation} has no arguments")
        atoms.append(Atom(relation, tuple(args)))
        skip_ws()
        if pos < n and text[pos] == ",":
            pos += 1
            continue
        if pos >= n:
            break
        raise QuerySyntaxError("expected ',' or end of query", pos)
    return Query(tuple(atoms))


def atoms_of(q: Query, v: str) -> frozenset[int]:
    """Indices of the atoms of q in which variable v occurs."""
    if v not in q.variables:
        raise UnknownVariableError(f"variable {v!r} does not occur in the query")
    return frozenset(i for i, a in enumerate(q.atoms) if v in a.variables)


def classify_hierarchical(q: Query) -> HierarchyReport:
    """Check the pairwise nested-or-disjoint condition on variable atom sets.

    The witness, when present, is the first violating pair in first-occurrence
    variable order.
    """
    variables = q.variables
    sets = {v: atoms_of(q, v) for v in variables}
    for x, y in combinations(variables, 2):
        ax, ay = sets[x], sets[y]
        if ax & ay and not ax <= ay and not ay <= ax:
            return HierarchyReport(False, (x, y), (ax, ay))
    return HierarchyReport(True)


def noncomparable_pair_and_rst(q: Query) -> tuple[str, str, int, int, int]:
    """Witness pair (x, y) of a non-hierarchical query, with the three
    atom-set difference cardinalities (r, s, t)."""
    report = classify_hierarchical(q)
    if report.hierarchical:
        raise HierarchicalQueryError("query is hierarchical; no witness pair exists")
    x, y = report.witness
    ax, ay = report.witness_atoms
    r = len(ax - ay)
    s = len(ax & ay)
    t = len(ay - ax)
    return x, y, r, s, t


def enumerate_matches(q: Query, instance) -> list[frozenset]:
    """All query matches of q over the instance, as fact supports.

    One entry per total assignment of q's variables to constants under which
    every atom maps to a fact of the instance; ordered lexicographically by
    the assigned constants (in first-occurrence variable order).
    """
    for relation, arity in q.schema.items():
        inst_arity = instance.arity_of(relation)
        if inst_arity is not None and inst_arity != arity:
            raise ArityError(
                f"relation {relation!r} has arity {arity} in the query "
                f"but {inst_arity} in the instance"
            )

    variables = q.variables
    results: list[tuple[tuple[str, ...], frozenset]] = []

    def extend(atom_idx: int, binding: dict[str, str], support: list):
        if atom_idx == len(q.atoms):
            key = tuple(binding[v] for v in variables)
            results.append((key, frozenset(support)))
            return
        atom = q.atoms[atom_idx]
        for fact in instance.facts_of(atom.relation):
            new = dict(binding)
            ok = True
            for term, value in zip(atom.args, fact.args):
                if term.is_variable:
                    if new.setdefault(term.name, value) != value:
                        ok = False
                        break
                elif term.name != value:
                    ok = False
                    break
            if ok:
                support.append(fact)
                extend(atom_idx + 1, new, support)
                support.pop()

    extend(0, {}, [])
    results.sort(key=lambda kv: kv[0])
    return [support for _, support in results]
