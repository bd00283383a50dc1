"""Canonical re-emission of parsed modules, comments included."""

from __future__ import annotations

from .astnodes import (
    ActionItem, ArchitectureDef, CheckDirective, CondExpr, ConditionItem,
    EntityItem, GenExpr, InterfaceDef, MotiveItem, NegExpr, ParenExpr,
    RefExpr, RefineDef, RenameDef, ScaleExpr, SpecModule, StandaloneComment,
    SumExpr, ZeroExpr,
)


def _comments(node) -> str:
    texts = getattr(node, "comments", ())
    return "".join(f" %[{t}%]" for t in texts)


def render_expr(node) -> str:
    if isinstance(node, ZeroExpr):
        return "0"
    if isinstance(node, RefExpr):
        return node.name + _comments(node)
    if isinstance(node, GenExpr):
        tilde = "~" if node.polarity == "client" else ""
        motive = " + ".join(node.motive) if node.motive else "0"
        s = f"{tilde}{node.target}.{node.action}({motive})"
        if node.host is not None:
            s += f"@{node.host}"
        if node.alpha != "TF":
            s += f"/{node.alpha}"
        return s + _comments(node)
    if isinstance(node, NegExpr):
        return "-" + render_expr(node.inner)
    if isinstance(node, ScaleExpr):
        return f"{node.factor} x {render_expr(node.inner)}"
    if isinstance(node, ParenExpr):
        return f"({render_expr(node.inner)})" + _comments(node)
    if isinstance(node, SumExpr):
        chunks = []
        for i, (sign, part) in enumerate(node.parts):
            body = render_expr(part)
            if i == 0:
                chunks.append(("-" if sign < 0 else "") + body)
            else:
                chunks.append(("- " if sign < 0 else "+ ") + body)
        return " ".join(chunks)
    if isinstance(node, CondExpr):
        lit = ("!" if node.negated else "") + node.variable
        s = f"{render_expr(node.then)} <| {lit} |> {render_expr(node.otherwise)}"
        return s + _comments(node)
    raise TypeError(f"unknown expression node: {type(node).__name__}")


def _render_entity(item: EntityItem, indent: str, out: list[str]):
    prefix = "extern entity" if item.extern else "entity"
    if item.children:
        out.append(f"{indent}{prefix} {item.name} {{")
        for child in item.children:
            _render_entity(child, indent + "  ", out)
        out.append(f"{indent}}}")
    else:
        out.append(f"{indent}{prefix} {item.name}")


def render_module(module: SpecModule) -> str:
    out: list[str] = []
    for item in module.items:
        if isinstance(item, EntityItem):
            _render_entity(item, "", out)
        elif isinstance(item, ActionItem):
            out.append(("extern action " if item.extern else "action ") + item.name)
        elif isinstance(item, MotiveItem):
            out.append(("extern motive " if item.extern else "motive ") + item.name)
        elif isinstance(item, ConditionItem):
            out.append("condition " + item.name)
        elif isinstance(item, InterfaceDef):
            head = f"interface {item.name}"
            if item.scope_annotation:
                head += f" @{item.scope_annotation}"
            if item.monoid:
                head += " monoid"
            out.append(f"{head} {{")
            out.append("  " + render_expr(item.expr))
            out.append("}")
        elif isinstance(item, ArchitectureDef):
            out.append(f"architecture {item.name} {{")
            for i, member in enumerate(item.members):
                flag = "contained " if member.contained else ""
                comma = "," if i + 1 < len(item.members) else ""
                out.append(f"  {flag}{member.entity} : {render_expr(member.expr)}{comma}")
            out.append("}")
        elif isinstance(item, CheckDirective):
            out.append(f"check {item.kind} {item.target}")
        elif isinstance(item, RefineDef):
            out.append(f"refine {item.name} = {item.source} expand {item.coarse} "
                       f"into {', '.join(item.parts)}")
        elif isinstance(item, RenameDef):
            pairs = [f"{kind} {old} -> {new}"
                     for kind, table in (("entity", item.entity_map),
                                         ("action", item.action_map),
                                         ("motive", item.motive_map))
                     for old, new in table]
            out.append(f"rename {item.name} = {item.source} {{ {', '.join(pairs)} }}")
        elif isinstance(item, StandaloneComment):
            out.append(f"%[{item.text}%]")
        else:
            raise TypeError(f"unknown item: {type(item).__name__}")
    return "\n".join(out) + "\n"
