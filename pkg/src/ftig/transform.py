"""Structural homomorphisms on interfaces and conditional-interface evaluation.

All of these are group homomorphisms: motive expansion, entity refinement,
annihilation of designated elements, and catalog renaming.  Conditional
interfaces attach branches guarded by boolean condition literals; the
all-assignments check enumerates every truth assignment and applies the
closedness check to each evaluation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .algebra import Generator, Interface, interface_sum
from .errors import CapacityError, ScopeError
from .reflection import ClosednessReport, is_closed

MAX_CONDITION_VARS = 16


def expand_motives(iface: Interface) -> Interface:
    """Distribute composite motives into atomic-motive terms.

    A term with motive ``v + w`` splits into one term per atom occurrence
    (the coefficient multiplying through the multiset multiplicity); terms
    with the zero motive vanish.  Idempotent.
    """
    acc = []
    for gen, coeff in iface:
        for atom in gen.motive:
            acc.append(
                (Generator(gen.target, gen.action, (atom,), gen.polarity, gen.host, gen.alpha),
                 coeff)
            )
    return Interface(acc)


@dataclass(frozen=True)
class RefinementSpec:
    """Expansion of one coarse entity into finer parallel parts."""

    coarse: str
    parts: tuple[str, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise ValueError("refinement needs at least one part")
        if len(set(parts)) != len(parts):
            raise ValueError("refinement parts must be pairwise distinct")
        if self.coarse in parts:
            raise ValueError("refined entity cannot be one of its own parts")
        object.__setattr__(self, "parts", parts)


def refine(iface: Interface, spec: RefinementSpec) -> Interface:
    """Rewrite every element mentioning the coarse entity over its parts.

    Both target and host equal to the coarse entity produce the full grid
    of part pairs (self-transfers included); only the target or only the
    host produce one sum over parts; untouched elements pass through.
    Applies to both polarities; motives must already be atomic.
    """
    if iface.scope == "local":
        raise ScopeError("refine expects a global interface")
    acc = []
    for gen, coeff in iface:
        if not gen.has_atomic_motive:
            raise ValueError(
                f"refine needs atomic motives; expand first (offending element: {gen.text()})"
            )
        hits_target = gen.target == spec.coarse
        hits_host = gen.host == spec.coarse
        if hits_target and hits_host:
            for ti, hj in itertools.product(spec.parts, spec.parts):
                acc.append((Generator(ti, gen.action, gen.motive, gen.polarity, hj, gen.alpha),
                            coeff))
        elif hits_target:
            for ti in spec.parts:
                acc.append((Generator(ti, gen.action, gen.motive, gen.polarity, gen.host,
                                      gen.alpha), coeff))
        elif hits_host:
            for hj in spec.parts:
                acc.append((Generator(gen.target, gen.action, gen.motive, gen.polarity, hj,
                                      gen.alpha), coeff))
        else:
            acc.append((gen, coeff))
    return Interface(acc)


def annihilate(iface: Interface, kill: Iterable[Generator]) -> Interface:
    """Set the coefficient of each listed generator to zero."""
    doomed = set(kill)
    return Interface(tuple((g, c) for g, c in iface if g not in doomed))


@dataclass(frozen=True)
class RenameMap:
    """Catalog renaming (abstraction); unlisted names map to themselves.

    Merging previously distinct names is legal and produces element
    multiplicities.
    """

    entity_map: Mapping[str, str] = field(default_factory=dict)
    action_map: Mapping[str, str] = field(default_factory=dict)
    motive_map: Mapping[str, str] = field(default_factory=dict)

    def entity(self, name: str) -> str:
        return self.entity_map.get(name, name)

    def action(self, name: str) -> str:
        return self.action_map.get(name, name)

    def motive_atom(self, name: str) -> str:
        return self.motive_map.get(name, name)


def rename(iface: Interface, mapping: RenameMap) -> Interface:
    """Apply a catalog renaming to every element; identical images merge."""
    acc = []
    for gen, coeff in iface:
        acc.append(
            (Generator(
                mapping.entity(gen.target),
                mapping.action(gen.action),
                tuple(mapping.motive_atom(a) for a in gen.motive),
                gen.polarity,
                None if gen.host is None else mapping.entity(gen.host),
                gen.alpha,
            ), coeff)
        )
    return Interface(acc)


@dataclass(frozen=True)
class ConditionLiteral:
    """A boolean condition variable or its negation."""

    variable: str
    negated: bool = False

    def satisfied_by(self, assignment: Mapping[str, bool]) -> bool:
        return assignment[self.variable] != self.negated

    def text(self) -> str:
        return ("!" if self.negated else "") + self.variable

    def sort_key(self):
        return (self.variable, self.negated)


class ConditionalInterface:
    """An interface plus branches contributed only under satisfied literals."""

    __slots__ = ("_unconditional", "_branches")

    def __init__(self, unconditional: Interface = Interface.zero(),
                 branches: Mapping[ConditionLiteral, Interface] | Iterable[tuple[ConditionLiteral, Interface]] = ()):
        items = branches.items() if isinstance(branches, Mapping) else branches
        acc: dict[ConditionLiteral, Interface] = {}
        for lit, iface in items:
            merged = acc.get(lit, Interface.zero()) + iface
            if merged.is_zero:
                acc.pop(lit, None)
            else:
                acc[lit] = merged
        scopes = {unconditional.scope} | {i.scope for i in acc.values()}
        scopes.discard(None)
        if len(scopes) > 1:
            raise ScopeError("conditional branches mix local and global interfaces")
        self._unconditional = unconditional
        self._branches = tuple(sorted(acc.items(), key=lambda t: t[0].sort_key()))

    @property
    def unconditional(self) -> Interface:
        return self._unconditional

    @property
    def branches(self) -> tuple[tuple[ConditionLiteral, Interface], ...]:
        return self._branches

    @property
    def is_plain(self) -> bool:
        return not self._branches

    @property
    def scope(self) -> str | None:
        for scope in (self._unconditional.scope, *(i.scope for _, i in self._branches)):
            if scope is not None:
                return scope
        return None

    def variables(self) -> tuple[str, ...]:
        return tuple(sorted({lit.variable for lit, _ in self._branches}))

    def __add__(self, other):
        if isinstance(other, Interface):
            other = ConditionalInterface(other)
        if not isinstance(other, ConditionalInterface):
            return NotImplemented
        return ConditionalInterface(
            self._unconditional + other._unconditional,
            tuple(self._branches) + tuple(other._branches),
        )

    def __eq__(self, other):
        if not isinstance(other, ConditionalInterface):
            return NotImplemented
        return (self._unconditional, self._branches) == (other._unconditional, other._branches)

    def __hash__(self):
        return hash((self._unconditional, self._branches))

    def map_interfaces(self, fn: Callable[[Interface], Interface]) -> ConditionalInterface:
        return ConditionalInterface(
            fn(self._unconditional),
            tuple((lit, fn(iface)) for lit, iface in self._branches),
        )

    def render(self) -> str:
        chunks = []
        if not self._unconditional.is_zero or not self._branches:
            chunks.append(self._unconditional.render())
        for lit, iface in self._branches:
            body = iface.render()
            if len(iface) > 1:
                body = f"({body})"
            chunks.append(f"{body} <| {lit.text()} |> 0")
        return " + ".join(chunks)

    def __repr__(self):
        return f"ConditionalInterface<{self.render()}>"


def eval_conditional(cond: ConditionalInterface, assignment: Mapping[str, bool]) -> Interface:
    """The unconditional part plus every branch whose literal is satisfied."""
    missing = [v for v in cond.variables() if v not in assignment]
    if missing:
        raise ValueError(f"assignment missing condition variables: {', '.join(missing)}")
    return cond.unconditional + interface_sum(
        iface for lit, iface in cond.branches if lit.satisfied_by(assignment)
    )


@dataclass(frozen=True)
class AssignmentReport:
    closed: bool
    cases: tuple[tuple[tuple[tuple[str, bool], ...], ClosednessReport], ...]

    def failing_assignments(self) -> list[dict[str, bool]]:
        return [dict(a) for a, rep in self.cases if not rep.closed]


def closed_under_all_assignments(cond: ConditionalInterface) -> AssignmentReport:
    """Closedness check under every assignment of the condition variables."""
    variables = cond.variables()
    if len(variables) > MAX_CONDITION_VARS:
        raise CapacityError(
            f"{len(variables)} condition variables exceed the limit of {MAX_CONDITION_VARS}"
        )
    cases = []
    for values in itertools.product((False, True), repeat=len(variables)):
        assignment = dict(zip(variables, values))
        report = is_closed(eval_conditional(cond, assignment))
        cases.append((tuple(sorted(assignment.items())), report))
    return AssignmentReport(all(rep.closed for _, rep in cases), tuple(cases))
