"""Named components, architecture closedness checking, diffing, and
transfer-event-log compliance.

An architecture is a sequence of named local interfaces.  Its global sum
hosts each member interface at its entity; the architecture is closed when
that sum vanishes modulo reflection (under every condition assignment, if
members carry conditional branches).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .algebra import (
    ALPHA_F, ALPHA_NONE, ALPHA_T, ALPHA_TF, ALPHAS, CLIENT, SERVICE,
    Generator, Interface,
)
from .catalog import Catalog
from .errors import LogFormatError, ScopeError
from .locglob import globalize
from .reflection import ClosednessReport, is_closed
from .transform import (
    AssignmentReport, ConditionalInterface, closed_under_all_assignments,
    eval_conditional, expand_motives,
)


@dataclass(frozen=True)
class ArchMember:
    entity: str
    interface: ConditionalInterface
    contained: bool = False


def _as_conditional(iface) -> ConditionalInterface:
    if isinstance(iface, ConditionalInterface):
        return iface
    if isinstance(iface, Interface):
        return ConditionalInterface(iface)
    raise TypeError(f"expected Interface or ConditionalInterface, got {type(iface).__name__}")


class Architecture:
    """Ordered members with distinct entities; duplicate listings for the
    same entity are merged additively at construction."""

    def __init__(self, name: str, members=()):
        self.name = name
        merged: dict[str, ArchMember] = {}
        order: list[str] = []
        for item in members:
            if isinstance(item, ArchMember):
                entity, iface, contained = item.entity, item.interface, item.contained
            else:
                entity, iface = item[0], item[1]
                contained = item[2] if len(item) > 2 else False
            cond = _as_conditional(iface)
            if cond.scope == "global":
                raise ScopeError(f"member {entity} must hold a local interface")
            if entity in merged:
                prev = merged[entity]
                merged[entity] = ArchMember(entity, prev.interface + cond,
                                            prev.contained or contained)
            else:
                merged[entity] = ArchMember(entity, cond, contained)
                order.append(entity)
        self.members: tuple[ArchMember, ...] = tuple(merged[e] for e in order)

    def entities(self) -> tuple[str, ...]:
        return tuple(m.entity for m in self.members)

    def member(self, entity: str) -> ArchMember | None:
        for m in self.members:
            if m.entity == entity:
                return m
        return None

    @property
    def has_conditionals(self) -> bool:
        return any(not m.interface.is_plain for m in self.members)

    def __repr__(self):
        return f"Architecture({self.name!r}, {len(self.members)} members)"


def global_sum(arch: Architecture, assignment=None, catalog: Catalog | None = None) -> Interface:
    """Sum of the globalized member interfaces, motives expanded.

    Architectures with conditional members need a truth assignment.
    """
    total = Interface.zero()
    for member in arch.members:
        if member.interface.is_plain:
            part = member.interface.unconditional
        else:
            if assignment is None:
                raise ValueError(
                    f"architecture {arch.name} has conditional members; "
                    f"supply a condition assignment"
                )
            part = eval_conditional(member.interface, assignment)
        total = total + globalize(member.entity, part, catalog)
    return expand_motives(total)


def _conditional_global_sum(arch: Architecture, catalog: Catalog | None) -> ConditionalInterface:
    total = ConditionalInterface()
    for member in arch.members:
        hosted = member.interface.map_interfaces(
            lambda i, e=member.entity: expand_motives(globalize(e, i, catalog))
        )
        total = total + hosted
    return total


@dataclass(frozen=True)
class ArchitectureReport:
    """Closedness verdict for one architecture.

    ``plain`` is set for unconditional architectures, ``conditional`` when
    branches forced an all-assignments check.
    """

    architecture: str
    closed: bool
    plain: ClosednessReport | None = None
    conditional: AssignmentReport | None = None

    def residual_lines(self) -> list[str]:
        if self.plain is not None:
            return _residual_lines(self.plain)
        lines = []
        for assignment, rep in self.conditional.cases:
            if rep.closed:
                continue
            label = ", ".join(f"{v}={'true' if b else 'false'}" for v, b in assignment)
            lines.append(f"under {label}:")
            lines.extend("  " + line for line in _residual_lines(rep))
        return lines


def _residual_lines(report: ClosednessReport) -> list[str]:
    from .algebra import render_motive

    lines = []
    for gen, coeff in report.residual.canonical:
        direction = f"{gen.host} -> {gen.target}"
        if gen.polarity == CLIENT:
            direction = f"{gen.target} -> {gen.host} (incoming side)"
        alpha = "" if gen.alpha == ALPHA_TF else f"/{gen.alpha}"
        lines.append(
            f"{direction} : {gen.action}({render_motive(gen.motive)}){alpha} x {coeff:+d}"
        )
    for gen in report.residual.non_cancellable:
        lines.append(f"non-cancellable reply constraint: {gen.text()}")
    return lines


def check_closed(arch: Architecture, catalog: Catalog | None = None) -> ArchitectureReport:
    """Zero-sum check; enumerates condition assignments when needed."""
    if arch.has_conditionals:
        report = closed_under_all_assignments(_conditional_global_sum(arch, catalog))
        return ArchitectureReport(arch.name, report.closed, conditional=report)
    report = is_closed(global_sum(arch, catalog=catalog))
    return ArchitectureReport(arch.name, report.closed, plain=report)


def diff(a: Architecture, b: Architecture) -> tuple[tuple[str, Interface], ...]:
    """Per-entity deltas turning ``a`` into ``b`` (zero deltas included)."""
    entities = sorted(set(a.entities()) | set(b.entities()))
    out = []
    for entity in entities:
        out.append((entity, _plain_member(b, entity) - _plain_member(a, entity)))
    return tuple(out)


def _plain_member(arch: Architecture, entity: str) -> Interface:
    member = arch.member(entity)
    if member is None:
        return Interface.zero()
    if not member.interface.is_plain:
        raise ValueError(f"member {entity} is conditional; evaluate it before diffing")
    return member.interface.unconditional


# ---------------------------------------------------------------- event logs

_REPLY_VALUES = ("T", "F")
_ADMITS = {
    ALPHA_TF: frozenset(_REPLY_VALUES),
    ALPHA_T: frozenset({"T"}),
    ALPHA_F: frozenset({"F"}),
    ALPHA_NONE: frozenset(_REPLY_VALUES),
}

_LOG_HEADER = ("source", "destination", "action", "motive", "reply")


@dataclass(frozen=True)
class TransferEvent:
    source: str
    destination: str
    action: str
    motive: str          # one atomic motive
    reply: str           # "T" or "F"

    def __post_init__(self):
        if self.reply not in _REPLY_VALUES:
            raise ValueError(f"reply must be T or F, got {self.reply!r}")


def read_event_log(text: str) -> list[TransferEvent]:
    """Ingest ``source,destination,action,motive,reply`` rows (header optional)."""
    events = []
    rows = csv.reader(io.StringIO(text))
    for row_no, row in enumerate(rows, start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        cells = [c.strip() for c in row]
        if row_no == 1 and tuple(c.lower() for c in cells) == _LOG_HEADER:
            continue
        if len(cells) != 5:
            raise LogFormatError(f"expected 5 columns, found {len(cells)}", row_no)
        if cells[4] not in _REPLY_VALUES:
            raise LogFormatError(f"reply must be T or F, got {cells[4]!r}", row_no)
        if not all(cells[:4]):
            raise LogFormatError("empty column", row_no)
        events.append(TransferEvent(*cells))
    return events


VIOLATION_KINDS = ("unmatched-outgoing", "unmatched-incoming", "reply-forbidden")


@dataclass(frozen=True)
class Violation:
    index: int                     # position of the event in the checked log
    kind: str
    side: str                      # "outgoing" or "incoming"
    entity: str
    candidates: tuple[Generator, ...] = ()


@dataclass(frozen=True)
class ComplianceReport:
    violations: tuple[Violation, ...]
    warnings: tuple[Violation, ...]

    @property
    def complies(self) -> bool:
        return not self.violations


def _member_interfaces(arch: Architecture, assignment) -> dict[str, Interface]:
    out = {}
    for member in arch.members:
        if member.interface.is_plain:
            iface = member.interface.unconditional
        else:
            if assignment is None:
                raise ValueError(
                    f"member {member.entity} is conditional; supply an assignment"
                )
            iface = eval_conditional(member.interface, assignment)
        out[member.entity] = expand_motives(iface)
    return out


def _match(iface: Interface, polarity: str, target: str, action: str, motive: str,
           reply: str) -> str:
    """Returns "ok", "reply-forbidden", or "unmatched"."""
    declared = []
    for alpha in ALPHAS:
        gen = Generator(target, action, (motive,), polarity, None, alpha)
        if iface.coefficient(gen) > 0:
            declared.append(alpha)
    if any(reply in _ADMITS[alpha] for alpha in declared):
        return "ok"
    if declared:
        return "reply-forbidden"
    return "unmatched"


def _candidates(iface: Interface, polarity: str, target: str, action: str,
                motive: str) -> tuple[Generator, ...]:
    """Nearest-candidate hints: positive elements agreeing on at least two
    of target/action/motive."""
    hits = []
    for gen, coeff in iface:
        if coeff <= 0 or gen.polarity != polarity:
            continue
        score = sum((gen.target == target, gen.action == action, gen.motive == (motive,)))
        if score >= 2:
            hits.append(gen)
    return tuple(sorted(hits, key=Generator.sort_key)[:3])


def comply_events(events, arch: Architecture, assignment=None) -> ComplianceReport:
    """Check each logged transfer against the declared member interfaces.

    The source member must declare a positive outgoing element for the
    transfer whose reply constraint admits the observed reply; the
    destination member must declare the matching incoming element.  A
    missing incoming declaration is a warning unless the member is
    contained, in which case it is a violation.
    """
    members = _member_interfaces(arch, assignment)
    contained = {m.entity: m.contained for m in arch.members}
    violations: list[Violation] = []
    warnings: list[Violation] = []
    for index, ev in enumerate(events):
        if ev.source not in members and ev.destination not in members:
            raise ValueError(
                f"event {index}: neither {ev.source} nor {ev.destination} "
                f"is an architecture member"
            )
        if ev.source in members:
            iface = members[ev.source]
            verdict = _match(iface, SERVICE, ev.destination, ev.action, ev.motive, ev.reply)
            if verdict == "reply-forbidden":
                violations.append(Violation(index, "reply-forbidden", "outgoing", ev.source))
            elif verdict == "unmatched":
                violations.append(Violation(
                    index, "unmatched-outgoing", "outgoing", ev.source,
                    _candidates(iface, SERVICE, ev.destination, ev.action, ev.motive)))
        if ev.destination in members:
            iface = members[ev.destination]
            verdict = _match(iface, CLIENT, ev.source, ev.action, ev.motive, ev.reply)
            if verdict == "reply-forbidden":
                violations.append(Violation(index, "reply-forbidden", "incoming", ev.destination))
            elif verdict == "unmatched":
                hit = Violation(
                    index, "unmatched-incoming", "incoming", ev.destination,
                    _candidates(iface, CLIENT, ev.source, ev.action, ev.motive))
                if contained.get(ev.destination):
                    violations.append(hit)
                else:
                    warnings.append(hit)
    return ComplianceReport(tuple(violations), tuple(warnings))
