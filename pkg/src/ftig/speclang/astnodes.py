"""Syntax tree for the interface-specification language."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import SourcePosition


@dataclass(frozen=True)
class ExprNode:
    pos: SourcePosition


@dataclass(frozen=True)
class ZeroExpr(ExprNode):
    pass


@dataclass(frozen=True)
class RefExpr(ExprNode):
    name: str
    comments: tuple[str, ...] = ()


@dataclass(frozen=True)
class GenExpr(ExprNode):
    polarity: str
    target: str
    action: str
    motive: tuple[str, ...]      # atom names in written order; () is the zero motive
    host: str | None
    alpha: str
    comments: tuple[str, ...] = ()


@dataclass(frozen=True)
class NegExpr(ExprNode):
    inner: ExprNode


@dataclass(frozen=True)
class ScaleExpr(ExprNode):
    factor: int
    inner: ExprNode


@dataclass(frozen=True)
class SumExpr(ExprNode):
    # (sign, operand) pairs; the first sign is +1 unless the source had a leading minus
    parts: tuple[tuple[int, ExprNode], ...]


@dataclass(frozen=True)
class ParenExpr(ExprNode):
    inner: ExprNode
    comments: tuple[str, ...] = ()


@dataclass(frozen=True)
class CondExpr(ExprNode):
    then: ExprNode
    variable: str
    negated: bool
    otherwise: ExprNode
    comments: tuple[str, ...] = ()


@dataclass(frozen=True)
class Item:
    pos: SourcePosition


@dataclass(frozen=True)
class EntityItem(Item):
    name: str
    children: tuple["EntityItem", ...] = ()
    extern: bool = False


@dataclass(frozen=True)
class ActionItem(Item):
    name: str
    extern: bool = False


@dataclass(frozen=True)
class MotiveItem(Item):
    name: str
    extern: bool = False


@dataclass(frozen=True)
class ConditionItem(Item):
    name: str


@dataclass(frozen=True)
class InterfaceDef(Item):
    name: str
    scope_annotation: str | None     # "local", "global", or None to infer
    monoid: bool
    expr: ExprNode


@dataclass(frozen=True)
class ArchMemberDef:
    pos: SourcePosition
    entity: str
    contained: bool
    expr: ExprNode


@dataclass(frozen=True)
class ArchitectureDef(Item):
    name: str
    members: tuple[ArchMemberDef, ...]


@dataclass(frozen=True)
class CheckDirective(Item):
    kind: str                        # currently only "closed"
    target: str


@dataclass(frozen=True)
class RefineDef(Item):
    """``refine NEW = OLD expand COARSE into P1, P2``: a derived interface."""

    name: str
    source: str
    coarse: str
    parts: tuple[str, ...]


@dataclass(frozen=True)
class RenameDef(Item):
    """``rename NEW = OLD { entity A -> B, ... }``: a derived interface."""

    name: str
    source: str
    entity_map: tuple[tuple[str, str], ...]
    action_map: tuple[tuple[str, str], ...]
    motive_map: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class StandaloneComment(Item):
    text: str


@dataclass
class SpecModule:
    """Parsed declarations of one or more concatenated source files."""

    items: list[Item] = field(default_factory=list)

    def interface_defs(self) -> list[InterfaceDef]:
        return [i for i in self.items if isinstance(i, InterfaceDef)]

    def derived_defs(self) -> list[Item]:
        return [i for i in self.items if isinstance(i, (RefineDef, RenameDef))]

    def architecture_defs(self) -> list[ArchitectureDef]:
        return [i for i in self.items if isinstance(i, ArchitectureDef)]

    def directives(self) -> list[CheckDirective]:
        return [i for i in self.items if isinstance(i, CheckDirective)]

    def extend(self, other: "SpecModule"):
        self.items.extend(other.items)
