"""Command-line front end: parse, resolve, transform and check pipelines.

Exit status: 0 success (or closed / compliant), 1 failed check, 2 static
error (parse, resolution, unknown name, malformed input), 3 capacity or
arithmetic error.  Results go to stdout, diagnostics to stderr; set
NO_COLOR to disable ANSI coloring of diagnostics.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import report
from .algebra import Interface
from .architecture import (
    Architecture, check_closed, comply_events, diff, read_event_log,
)
from .errors import CapacityError, LogFormatError, ParseError
from .locglob import decompose, globalize, localize
from .reflection import reduce_modulo_reflection
from .speclang import lint, parse_module, resolve
from .speclang.astnodes import SpecModule
from .transform import ConditionalInterface, RefinementSpec, RenameMap, expand_motives, refine, rename


class CliError(Exception):
    """User-facing static error (exit status 2)."""


def _print_diagnostics(diags, stream=None):
    stream = stream if stream is not None else sys.stderr
    use_color = stream.isatty() and not os.environ.get("NO_COLOR")
    for d in diags:
        line = d.render()
        if use_color:
            color = "\x1b[31m" if d.severity == "error" else "\x1b[33m"
            line = f"{color}{line}\x1b[0m"
        print(line, file=stream)


def _load(args):
    module = SpecModule()
    for path in args.files:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot read {path}: {exc}") from exc
        module.extend(parse_module(text, filename=path))
    return resolve(module, allow_undeclared=args.allow_undeclared)


def _require_resolved(args):
    res = _load(args)
    _print_diagnostics(res.diagnostics)
    if not res.ok:
        raise CliError(f"{len(res.errors)} resolution error(s)")
    return res


def _get_value(res, name):
    if name not in res.interfaces:
        raise CliError(f"unknown interface: {name}")
    value = res.interfaces[name]
    if isinstance(value, Interface):
        return ConditionalInterface(value)
    return value


def _get_plain(res, name) -> Interface:
    value = _get_value(res, name)
    if not value.is_plain:
        raise CliError(f"interface {name} is conditional; this command needs a plain interface")
    return value.unconditional


def _get_architecture(res, name) -> Architecture:
    if name not in res.architectures:
        raise CliError(f"unknown architecture: {name}")
    return res.architectures[name]


def _emit(args, doc: dict, text_lines: list[str]):
    if args.format == "json":
        sys.stdout.write(report.dumps(doc))
    else:
        for line in text_lines:
            print(line)


# ------------------------------------------------------------- handlers

def _cmd_check(args) -> int:
    res = _load(args)
    diags = list(res.diagnostics)
    if res.ok:
        diags += lint(res)
    _print_diagnostics(diags)
    checks = []
    failed = False
    if res.ok:
        for directive in res.directives():
            rep = check_closed(_get_architecture(res, directive.target), res.catalog)
            checks.append(rep)
            failed = failed or not rep.closed
    doc = report.document(
        "check",
        ok=res.ok,
        checks=[{"kind": "closed", "architecture": c.architecture,
                 "verdict": "closed" if c.closed else "not-closed"} for c in checks],
        diagnostics=[report.diagnostic_object(d) for d in diags],
    )
    lines = [f"closed {c.architecture}: {'CLOSED' if c.closed else 'NOT CLOSED'}"
             for c in checks]
    lines.append("OK" if res.ok and not failed else "FAILED")
    _emit(args, doc, lines)
    if not res.ok:
        return 2
    return 1 if failed else 0


def _closed_doc(rep) -> dict:
    fields = {
        "architecture": rep.architecture,
        "verdict": "closed" if rep.closed else "not-closed",
    }
    if rep.plain is not None:
        fields["residual"] = report.interface_terms(rep.plain.residual.canonical)
        fields["non_cancellable"] = [report.generator_object(g)
                                     for g in rep.plain.residual.non_cancellable]
        fields["assignments"] = None
    else:
        fields["residual"] = []
        fields["non_cancellable"] = []
        fields["assignments"] = [
            {
                "assignment": {var: value for var, value in assignment},
                "verdict": "closed" if case.closed else "not-closed",
                "residual": report.interface_terms(case.residual.canonical),
            }
            for assignment, case in rep.conditional.cases
        ]
    return report.document("closed", **fields)


def _cmd_closed(args) -> int:
    res = _require_resolved(args)
    rep = check_closed(_get_architecture(res, args.architecture), res.catalog)
    lines = ["CLOSED" if rep.closed else "NOT CLOSED"]
    if not rep.closed:
        lines.extend("  " + line for line in rep.residual_lines())
    _emit(args, _closed_doc(rep), lines)
    return 0 if rep.closed else 1


def _conditional_doc(value: ConditionalInterface) -> dict:
    return {
        "unconditional": report.interface_terms(value.unconditional),
        "branches": [
            {"condition": lit.text(), "terms": report.interface_terms(iface)}
            for lit, iface in value.branches
        ],
    }


def _cmd_normalize(args) -> int:
    res = _require_resolved(args)
    value = _get_value(res, args.interface)
    if args.expand_motives:
        value = value.map_interfaces(expand_motives)
    if args.modulo_reflection:
        if not value.is_plain:
            raise CliError("cannot reduce a conditional interface modulo reflection")
        residual = reduce_modulo_reflection(value.unconditional)
        for gen in residual.non_cancellable:
            print(f"warning: non-cancellable element {gen.text()}", file=sys.stderr)
        doc = report.document(
            "normalize", interface=args.interface,
            rendered=residual.canonical.render(),
            terms=report.interface_terms(residual.canonical),
            non_cancellable=[report.generator_object(g) for g in residual.non_cancellable],
        )
        _emit(args, doc, [residual.canonical.render()])
        return 0
    if value.is_plain:
        iface = value.unconditional
        doc = report.document("normalize", interface=args.interface,
                              rendered=iface.render(), terms=report.interface_terms(iface))
        _emit(args, doc, [iface.render()])
    else:
        doc = report.document("normalize", interface=args.interface,
                              rendered=value.render(), **_conditional_doc(value))
        _emit(args, doc, [value.render()])
    return 0


def _render_result(args, command: str, iface: Interface, **extra) -> int:
    doc = report.document(command, rendered=iface.render(),
                          terms=report.interface_terms(iface), **extra)
    _emit(args, doc, [iface.render()])
    return 0


def _cmd_localize(args) -> int:
    res = _require_resolved(args)
    iface = localize(args.entity, _get_plain(res, args.interface))
    return _render_result(args, "localize", iface, entity=args.entity)


def _cmd_globalize(args) -> int:
    res = _require_resolved(args)
    try:
        iface = globalize(args.entity, _get_plain(res, args.interface), res.catalog)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    return _render_result(args, "globalize", iface, entity=args.entity)


def _cmd_decompose(args) -> int:
    res = _require_resolved(args)
    parts = decompose(_get_plain(res, args.interface))
    doc = report.document(
        "decompose", interface=args.interface,
        parts=[{"entity": e, "rendered": i.render(), "terms": report.interface_terms(i)}
               for e, i in parts.parts],
    )
    _emit(args, doc, [f"{e} : {i.render()}" for e, i in parts.parts])
    return 0


def _cmd_refine(args) -> int:
    res = _require_resolved(args)
    parts = tuple(p for p in args.into.split(",") if p)
    for part in parts:
        if res.catalog.has_entity(part):
            print(f"warning: refinement part {part} collides with a declared entity",
                  file=sys.stderr)
    try:
        spec = RefinementSpec(args.entity, parts)
        iface = refine(expand_motives(_get_plain(res, args.interface)), spec)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    return _render_result(args, "refine", iface, entity=args.entity, into=list(parts))


def _read_rename_map(path: str) -> RenameMap:
    entity_map: dict[str, str] = {}
    action_map: dict[str, str] = {}
    motive_map: dict[str, str] = {}
    tables = {"entity": entity_map, "action": action_map, "motive": motive_map}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 3 or fields[0] not in tables:
            raise CliError(
                f"{path}:{line_no}: rename map lines are 'entity|action|motive OLD NEW'"
            )
        tables[fields[0]][fields[1]] = fields[2]
    return RenameMap(entity_map, action_map, motive_map)


def _cmd_rename(args) -> int:
    res = _require_resolved(args)
    mapping = _read_rename_map(args.map)
    iface = rename(_get_plain(res, args.interface), mapping)
    return _render_result(args, "rename", iface)


def _cmd_diff(args) -> int:
    res = _require_resolved(args)
    deltas = diff(_get_architecture(res, args.a), _get_architecture(res, args.b))
    doc = report.document(
        "diff", a=args.a, b=args.b,
        deltas=[{"entity": e, "rendered": d.render(), "terms": report.interface_terms(d)}
                for e, d in deltas],
    )
    _emit(args, doc, [f"{e} : {d.render()}" for e, d in deltas])
    return 0


def _violation_object(v) -> dict:
    return {
        "event": v.index,
        "kind": v.kind,
        "side": v.side,
        "entity": v.entity,
        "candidates": [report.generator_object(g) for g in v.candidates],
    }


def _check_event_names(events, res, allow_undeclared: bool):
    catalog = res.catalog
    unknown = []
    for index, ev in enumerate(events):
        for kind, name in (("entity", ev.source), ("entity", ev.destination),
                           ("action", ev.action), ("motive", ev.motive)):
            table = {"entity": catalog.entities, "action": catalog.actions,
                     "motive": catalog.motives}[kind]
            if name not in table:
                unknown.append(f"event {index}: undeclared {kind} {name}")
    if not unknown:
        return
    if allow_undeclared:
        for line in unknown:
            print(f"warning: {line}", file=sys.stderr)
    else:
        raise CliError("; ".join(unknown))


def _parse_assignments(pairs) -> dict | None:
    if not pairs:
        return None
    assignment = {}
    for pair in pairs:
        var, eq, value = pair.partition("=")
        if not eq or value not in ("true", "false") or not var:
            raise CliError(f"bad assignment {pair!r}; expected VAR=true or VAR=false")
        assignment[var] = value == "true"
    return assignment


def _cmd_comply(args) -> int:
    res = _require_resolved(args)
    arch = _get_architecture(res, args.architecture)
    try:
        text = Path(args.log).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {args.log}: {exc}") from exc
    events = read_event_log(text)
    _check_event_names(events, res, args.allow_undeclared)
    try:
        rep = comply_events(events, arch, _parse_assignments(args.assign))
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    for warning in rep.warnings:
        hint = ""
        if warning.candidates:
            hint = " (closest: " + ", ".join(g.text() for g in warning.candidates) + ")"
        print(f"warning: event {warning.index}: {warning.kind} at {warning.entity}{hint}",
              file=sys.stderr)
    lines = ["COMPLIANT" if rep.complies else "NOT COMPLIANT"]
    for v in rep.violations:
        hint = ""
        if v.candidates:
            hint = " (closest: " + ", ".join(g.text() for g in v.candidates) + ")"
        lines.append(f"  event {v.index}: {v.kind} at {v.entity}{hint}")
    doc = report.document(
        "comply", architecture=args.architecture, log=args.log,
        verdict="compliant" if rep.complies else "violations",
        violations=[_violation_object(v) for v in rep.violations],
        warnings=[_violation_object(v) for v in rep.warnings],
    )
    _emit(args, doc, lines)
    return 0 if rep.complies else 1


# --------------------------------------------------------------- parser

def _add_common(sp):
    sp.add_argument("files", nargs="+", metavar="FILE",
                    help=".fti specification files, concatenated in order")
    sp.add_argument("--format", choices=("text", "json"), default="text",
                    help="output format (default: text)")
    sp.add_argument("--allow-undeclared", action="store_true",
                    help="treat undeclared names as extern declarations (warn only)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fti",
        description="Interface-group toolchain for financial-transfer architectures.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sp = sub.add_parser("check", help="parse, resolve and lint; run check directives")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_check)

    sp = sub.add_parser("closed", help="zero-sum closedness check of an architecture")
    sp.add_argument("architecture")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_closed)

    sp = sub.add_parser("normalize", help="print the normal form of a named interface")
    sp.add_argument("interface")
    sp.add_argument("--modulo-reflection", action="store_true",
                    help="reduce to the canonical residual modulo reflection")
    sp.add_argument("--expand-motives", action="store_true",
                    help="distribute composite motives first")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_normalize)

    sp = sub.add_parser("localize", help="project a global interface onto one entity")
    sp.add_argument("-e", "--entity", required=True)
    sp.add_argument("interface")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_localize)

    sp = sub.add_parser("globalize", help="host a local interface at an entity")
    sp.add_argument("-e", "--entity", required=True)
    sp.add_argument("interface")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_globalize)

    sp = sub.add_parser("decompose", help="split a global interface into per-entity parts")
    sp.add_argument("interface")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_decompose)

    sp = sub.add_parser("refine", help="expand one entity into parallel parts")
    sp.add_argument("-f", "--entity", required=True, help="coarse entity to expand")
    sp.add_argument("--into", required=True, help="comma-separated part entities")
    sp.add_argument("interface")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_refine)

    sp = sub.add_parser("rename", help="apply a catalog renaming to an interface")
    sp.add_argument("--map", required=True, help="rename map file")
    sp.add_argument("interface")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_rename)

    sp = sub.add_parser("diff", help="per-entity deltas between two architectures")
    sp.add_argument("a")
    sp.add_argument("b")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_diff)

    sp = sub.add_parser("comply", help="check a transfer-event log against an architecture")
    sp.add_argument("--log", required=True, help="CSV event log: source,destination,action,motive,reply")
    sp.add_argument("--assign", action="append", metavar="VAR=BOOL",
                    help="condition assignment for conditional members (repeatable)")
    sp.add_argument("architecture")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_comply)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RecursionError:
        print("error: expression nesting too deep", file=sys.stderr)
        return 2
    except LogFormatError as exc:
        print(f"error: event log {exc}", file=sys.stderr)
        return 2
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CapacityError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
