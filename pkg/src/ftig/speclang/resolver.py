"""Name resolution and evaluation of parsed specification modules.

Definitions are evaluated by name with memoization, so the resulting
environment does not depend on declaration order.  Name errors are
collected exhaustively rather than aborting at the first failure;
evaluation continues with the offending names treated as extern.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..algebra import ALPHA_TF, Generator, Interface
from ..architecture import Architecture
from ..catalog import Catalog
from ..errors import ScopeError, SourcePosition
from ..transform import (
    ConditionalInterface, ConditionLiteral, RefinementSpec, RenameMap,
    expand_motives, refine, rename,
)
from .astnodes import (
    ActionItem, ArchitectureDef, CheckDirective, CondExpr, ConditionItem,
    EntityItem, GenExpr, InterfaceDef, MotiveItem, NegExpr, ParenExpr,
    RefExpr, RefineDef, RenameDef, ScaleExpr, SpecModule, SumExpr, ZeroExpr,
)
from .parser import parse_expression


@dataclass(frozen=True)
class Diagnostic:
    severity: str                      # "error" or "warning"
    message: str
    pos: SourcePosition | None = None

    def render(self) -> str:
        if self.pos is None:
            return f"{self.severity}: {self.message}"
        return f"{self.pos}: {self.severity}: {self.message}"

    def sort_key(self):
        if self.pos is None:
            return ("", 0, 0, self.severity, self.message)
        return (self.pos.file or "", self.pos.line, self.pos.col, self.severity, self.message)


@dataclass
class Resolution:
    module: SpecModule
    catalog: Catalog
    interfaces: dict[str, object] = field(default_factory=dict)   # Interface | ConditionalInterface
    architectures: dict[str, Architecture] = field(default_factory=dict)
    monoid_names: set[str] = field(default_factory=set)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == "error"]

    @property
    def warnings(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.errors

    def directives(self) -> list[CheckDirective]:
        return self.module.directives()

    def plain_interface(self, name: str) -> Interface:
        value = self.interfaces[name]
        if isinstance(value, ConditionalInterface):
            if not value.is_plain:
                raise ValueError(f"{name} is conditional")
            return value.unconditional
        return value


class _Evaluator:
    def __init__(self, module: SpecModule, catalog: Catalog, allow_undeclared: bool):
        self.catalog = catalog
        self.allow_undeclared = allow_undeclared
        self.diagnostics: list[Diagnostic] = []
        self.defs: dict[str, object] = {}
        for item in module.interface_defs() + module.derived_defs():
            if item.name in self.defs:
                self.error(f"duplicate interface definition: {item.name}", item.pos)
            else:
                self.defs[item.name] = item
        self.values: dict[str, ConditionalInterface] = {}
        self.in_progress: set[str] = set()
        self.reported_undeclared: set[tuple[str, str]] = set()

    def error(self, message: str, pos):
        self.diagnostics.append(Diagnostic("error", message, pos))

    def warning(self, message: str, pos):
        self.diagnostics.append(Diagnostic("warning", message, pos))

    # ------------------------------------------------------------ names

    def _check_name(self, kind: str, name: str, pos) -> None:
        if kind == "entity":
            known = self.catalog.has_entity(name)
        elif kind == "action":
            known = name in self.catalog.actions
        elif kind == "motive":
            known = name in self.catalog.motives
        else:
            known = name in self.catalog.condition_vars
        if known:
            return
        if self.allow_undeclared:
            if (kind, name) not in self.reported_undeclared:
                self.reported_undeclared.add((kind, name))
                self.warning(f"undeclared {kind} {name} treated as extern", pos)
            if kind == "entity":
                self.catalog.add_entity(name, extern=True)
            elif kind == "action":
                self.catalog.add_action(name, extern=True)
            elif kind == "motive":
                self.catalog.add_motive(name, extern=True)
            else:
                self.catalog.add_condition(name)
        else:
            if (kind, name) not in self.reported_undeclared:
                self.reported_undeclared.add((kind, name))
                self.error(f"undeclared {kind}: {name}", pos)

    # ------------------------------------------------------- evaluation

    def resolve_name(self, name: str, pos) -> ConditionalInterface:
        if name in self.values:
            return self.values[name]
        if name not in self.defs:
            self.error(f"reference to undefined interface: {name}", pos)
            return ConditionalInterface()
        if name in self.in_progress:
            self.error(f"cyclic interface reference through {name}", pos)
            return ConditionalInterface()
        self.in_progress.add(name)
        item = self.defs[name]
        try:
            if isinstance(item, RefineDef):
                value = self._eval_refine(item)
            elif isinstance(item, RenameDef):
                value = self._eval_rename(item)
            else:
                value = self.eval(item.expr)
                scope = value.scope
                if item.scope_annotation and scope and item.scope_annotation != scope:
                    self.error(
                        f"interface {name} declared @{item.scope_annotation} "
                        f"but its elements are {scope}", item.pos)
        except (ScopeError, OverflowError, ValueError) as exc:
            self.error(f"in interface {name}: {exc}", item.pos)
            value = ConditionalInterface()
        finally:
            self.in_progress.discard(name)
        self.values[name] = value
        return value

    def _plain_source(self, item) -> Interface:
        source = self.resolve_name(item.source, item.pos)
        if not source.is_plain:
            raise ValueError(f"{item.source} is conditional and cannot be transformed")
        return source.unconditional

    def _eval_refine(self, item: RefineDef) -> ConditionalInterface:
        source = self._plain_source(item)
        self._check_name("entity", item.coarse, item.pos)
        for part in item.parts:
            if self.catalog.has_entity(part):
                self.warning(
                    f"refinement part {part} collides with an already declared entity",
                    item.pos)
            else:
                self.catalog.add_entity(part, extern=True)
        spec = RefinementSpec(item.coarse, item.parts)
        return ConditionalInterface(refine(expand_motives(source), spec))

    def _eval_rename(self, item: RenameDef) -> ConditionalInterface:
        source = self._plain_source(item)
        catalogs = {"entity": self.catalog.entities, "action": self.catalog.actions,
                    "motive": self.catalog.motives}
        for kind, pairs in (("entity", item.entity_map), ("action", item.action_map),
                            ("motive", item.motive_map)):
            for old, new in pairs:
                if old not in catalogs[kind]:
                    self.warning(f"rename of undeclared {kind} {old} has no effect", item.pos)
                self._check_name(kind, new, item.pos)
        mapping = RenameMap(dict(item.entity_map), dict(item.action_map),
                            dict(item.motive_map))
        return ConditionalInterface(rename(source, mapping))

    def eval(self, node) -> ConditionalInterface:
        if isinstance(node, ZeroExpr):
            return ConditionalInterface()
        if isinstance(node, RefExpr):
            return self.resolve_name(node.name, node.pos)
        if isinstance(node, GenExpr):
            self._check_name("entity", node.target, node.pos)
            if node.host is not None:
                self._check_name("entity", node.host, node.pos)
            self._check_name("action", node.action, node.pos)
            for atom in node.motive:
                self._check_name("motive", atom, node.pos)
            gen = Generator(node.target, node.action, node.motive, node.polarity,
                            node.host, node.alpha)
            return ConditionalInterface(Interface.term(gen))
        if isinstance(node, NegExpr):
            return self.eval(node.inner).map_interfaces(lambda i: -i)
        if isinstance(node, ScaleExpr):
            return self.eval(node.inner).map_interfaces(lambda i: node.factor * i)
        if isinstance(node, ParenExpr):
            return self.eval(node.inner)
        if isinstance(node, SumExpr):
            total = ConditionalInterface()
            for sign, part in node.parts:
                value = self.eval(part)
                if sign < 0:
                    value = value.map_interfaces(lambda i: -i)
                total = total + value
            return total
        if isinstance(node, CondExpr):
            self._check_name("condition", node.variable, node.pos)
            then = self.eval(node.then)
            otherwise = self.eval(node.otherwise)
            if not then.is_plain or not otherwise.is_plain:
                self.error("conditional elements cannot nest", node.pos)
                return ConditionalInterface()
            branches = []
            if not then.unconditional.is_zero:
                branches.append((ConditionLiteral(node.variable, node.negated),
                                 then.unconditional))
            if not otherwise.unconditional.is_zero:
                branches.append((ConditionLiteral(node.variable, not node.negated),
                                 otherwise.unconditional))
            return ConditionalInterface(branches=branches)
        raise TypeError(f"unknown expression node: {type(node).__name__}")


def _declare_entities(item: EntityItem, parent: str | None, catalog: Catalog, diags: list):
    try:
        catalog.add_entity(item.name, parent, item.extern)
    except ValueError as exc:
        diags.append(Diagnostic("error", str(exc), item.pos))
    for child in item.children:
        _declare_entities(child, item.name, catalog, diags)


def build_catalog(module: SpecModule) -> tuple[Catalog, list[Diagnostic]]:
    catalog = Catalog()
    diags: list[Diagnostic] = []
    for item in module.items:
        try:
            if isinstance(item, EntityItem):
                _declare_entities(item, None, catalog, diags)
            elif isinstance(item, ActionItem):
                catalog.add_action(item.name, item.extern)
            elif isinstance(item, MotiveItem):
                catalog.add_motive(item.name, item.extern)
            elif isinstance(item, ConditionItem):
                catalog.add_condition(item.name)
        except ValueError as exc:
            diags.append(Diagnostic("error", str(exc), item.pos))
    return catalog, diags


def resolve(module: SpecModule, allow_undeclared: bool = False) -> Resolution:
    catalog, diags = build_catalog(module)
    evaluator = _Evaluator(module, catalog, allow_undeclared)
    for name in evaluator.defs:
        evaluator.resolve_name(name, evaluator.defs[name].pos)

    res = Resolution(module, catalog)
    res.diagnostics.extend(diags)
    for name, value in evaluator.values.items():
        res.interfaces[name] = value.unconditional if value.is_plain else value
    for item in module.interface_defs():
        if item.monoid:
            res.monoid_names.add(item.name)

    seen_archs: set[str] = set()
    for arch_def in module.architecture_defs():
        if arch_def.name in seen_archs:
            res.diagnostics.append(Diagnostic(
                "error", f"duplicate architecture definition: {arch_def.name}", arch_def.pos))
            continue
        seen_archs.add(arch_def.name)
        members = []
        broken = False
        for member in arch_def.members:
            evaluator._check_name("entity", member.entity, member.pos)
            try:
                value = evaluator.eval(member.expr)
            except (ScopeError, OverflowError) as exc:
                res.diagnostics.append(Diagnostic(
                    "error", f"in architecture {arch_def.name}: {exc}", member.pos))
                broken = True
                continue
            if value.scope == "global":
                res.diagnostics.append(Diagnostic(
                    "error",
                    f"architecture member {member.entity} must hold a local interface",
                    member.pos))
                broken = True
                continue
            members.append((member.entity, value, member.contained))
        if not broken:
            res.architectures[arch_def.name] = Architecture(arch_def.name, members)
    # architecture evaluation may have added more name diagnostics
    res.diagnostics.extend(evaluator.diagnostics)

    for directive in module.directives():
        if directive.target not in res.architectures:
            res.diagnostics.append(Diagnostic(
                "error", f"check {directive.kind} names unknown architecture {directive.target}",
                directive.pos))

    res.diagnostics.sort(key=Diagnostic.sort_key)
    return res


# ----------------------------------------------------------------- lint

def _walk_exprs(node, into):
    into.append(node)
    for attr in ("inner", "then", "otherwise"):
        child = getattr(node, attr, None)
        if child is not None:
            _walk_exprs(child, into)
    if isinstance(node, SumExpr):
        for _, part in node.parts:
            _walk_exprs(part, into)


def lint(res: Resolution) -> list[Diagnostic]:
    """Style and suspicion warnings on a resolved module (never errors)."""
    diags: list[Diagnostic] = []

    used_entities: set[str] = set()
    used_actions: set[str] = set()
    used_motives: set[str] = set()
    used_conditions: set[str] = set()
    exprs = []
    for item in res.module.items:
        if isinstance(item, InterfaceDef):
            _walk_exprs(item.expr, exprs)
        elif isinstance(item, ArchitectureDef):
            for member in item.members:
                used_entities.add(member.entity)
                _walk_exprs(member.expr, exprs)
        elif isinstance(item, RefineDef):
            used_entities.add(item.coarse)
            used_entities.update(item.parts)
        elif isinstance(item, RenameDef):
            for old, new in item.entity_map:
                used_entities.update((old, new))
            for old, new in item.action_map:
                used_actions.update((old, new))
            for old, new in item.motive_map:
                used_motives.update((old, new))
    for node in exprs:
        if isinstance(node, GenExpr):
            used_entities.add(node.target)
            if node.host is not None:
                used_entities.add(node.host)
            used_actions.add(node.action)
            used_motives.update(node.motive)
        elif isinstance(node, CondExpr):
            used_conditions.add(node.variable)

    # ancestors of a used entity count as used (they exist to group it)
    for name in list(used_entities):
        if res.catalog.has_entity(name):
            used_entities.update(res.catalog.entity_path(name))

    for item in res.module.interface_defs():
        value = res.interfaces.get(item.name)
        if value is None:
            continue
        parts = ([value] if isinstance(value, Interface)
                 else [value.unconditional] + [i for _, i in value.branches])
        gens = [g for part in parts for g, _ in part]
        selfers = sorted({g.text() for g in gens if g.is_self_loop})
        for text in selfers:
            diags.append(Diagnostic(
                "warning", f"{item.name}: self-transfer {text} vanishes under reflection",
                item.pos))
        if item.name in res.monoid_names and not all(p.in_monoid() for p in parts):
            diags.append(Diagnostic(
                "warning",
                f"{item.name} is declared monoid but has a negative coefficient "
                f"or a non-TF reply constraint", item.pos))
        alphas = sorted({g.alpha for g in gens if g.alpha != ALPHA_TF})
        if alphas:
            diags.append(Diagnostic(
                "warning",
                f"{item.name} uses reply constraint(s) {', '.join('/' + a for a in alphas)}",
                item.pos))

    for arch in res.module.architecture_defs():
        value = res.architectures.get(arch.name)
        if value is None:
            continue
        for member in value.members:
            parts = [member.interface.unconditional] + \
                    [i for _, i in member.interface.branches]
            for part in parts:
                for gen, _ in part:
                    if gen.target == member.entity:
                        diags.append(Diagnostic(
                            "warning",
                            f"architecture {arch.name}: member {member.entity} transfers "
                            f"to itself via {gen.text()}", arch.pos))

    def unused(kind, names, used):
        for name in sorted(names):
            if name not in used:
                diags.append(Diagnostic("warning", f"unused {kind}: {name}", None))

    unused("entity", res.catalog.entities, used_entities)
    unused("action", res.catalog.actions, used_actions)
    unused("motive", res.catalog.motives, used_motives)
    unused("condition", res.catalog.condition_vars, used_conditions)
    diags.sort(key=Diagnostic.sort_key)
    return diags


def evaluate_expression_text(text: str):
    """Parse and evaluate a standalone interface expression (no catalogs,
    no named references).  Returns an Interface, or a ConditionalInterface
    when conditional elements are present."""
    node = parse_expression(text)
    module = SpecModule()
    evaluator = _Evaluator(module, Catalog(), allow_undeclared=True)
    value = evaluator.eval(node)
    hard = [d for d in evaluator.diagnostics if d.severity == "error"]
    if hard:
        raise ValueError(hard[0].render())
    return value.unconditional if value.is_plain else value
