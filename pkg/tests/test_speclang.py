import random

import pytest

from ftig.algebra import Interface, client, service
from ftig.errors import ParseError
from ftig.speclang import (
    evaluate_expression_text, lint, parse_expression, parse_module,
    render_expr, render_module, resolve, tokenize,
)
from ftig.speclang.astnodes import (
    CondExpr, GenExpr, NegExpr, RefExpr, ScaleExpr, SpecModule, SumExpr,
)


class TestLexer:
    def test_colon_identifiers(self):
        kinds = [(t.kind, t.text) for t in tokenize("RIi:L:CSP:SE hmt:csla")]
        assert kinds[:2] == [("IDENT", "RIi:L:CSP:SE"), ("IDENT", "hmt:csla")]

    def test_colon_as_separator_needs_boundary(self):
        # no space: one identifier; spaced: three tokens
        assert [t.text for t in tokenize("SE:X")][:-1] == ["SE:X"]
        assert [t.kind for t in tokenize("SE : X")][:-1] == ["IDENT", "COLON", "IDENT"]
        assert [t.kind for t in tokenize("SE :X")][:-1] == ["IDENT", "COLON", "IDENT"]

    def test_comment_token(self):
        toks = tokenize("x %[a comment\nwith lines%] y")
        assert [t.kind for t in toks][:-1] == ["IDENT", "COMMENT", "IDENT"]
        assert toks[1].text == "a comment\nwith lines"

    def test_unterminated_comment(self):
        with pytest.raises(ParseError, match="%]"):
            tokenize("x %[oops")

    def test_stray_percent(self):
        with pytest.raises(ParseError, match="%"):
            tokenize("x % y")

    def test_positions(self):
        toks = tokenize("a\n  b")
        assert (toks[0].pos.line, toks[0].pos.col) == (1, 1)
        assert (toks[1].pos.line, toks[1].pos.col) == (2, 3)

    def test_lambda_letter(self):
        toks = tokenize("f.a(m)/λ")
        assert toks[-2].text == "lambda"

    def test_unexpected_character(self):
        with pytest.raises(ParseError):
            tokenize("a $ b")


class TestParserPrecedence:
    def test_full_element_structure(self):
        node = parse_expression("~f.a(m)@g/TF")
        assert node == GenExpr(node.pos, "client", "f", "a", ("m",), "g", "TF")

    def test_subtraction_convention(self):
        node = parse_expression("I - ~f.a(m)@g - J")
        assert isinstance(node, SumExpr)
        signs = [sign for sign, _ in node.parts]
        assert signs == [1, -1, -1]
        assert isinstance(node.parts[0][1], RefExpr)
        assert isinstance(node.parts[1][1], GenExpr)
        assert node.parts[1][1].polarity == "client"

    def test_multiplicity_prefix(self):
        node = parse_expression("2 x OEEins.et(fp:fsla + fp:dsla)")
        assert isinstance(node, ScaleExpr) and node.factor == 2
        assert node.inner.motive == ("fp:fsla", "fp:dsla")

    def test_plus_followed_by_unary_minus(self):
        node = parse_expression("X + -Di.it(us)")
        assert isinstance(node.parts[1][1], NegExpr)

    def test_x_is_an_ordinary_name_elsewhere(self):
        node = parse_expression("x + 2 x x.a(m)")
        assert isinstance(node.parts[0][1], RefExpr)
        assert node.parts[0][1].name == "x"
        assert isinstance(node.parts[1][1], ScaleExpr)

    def test_integer_without_x_rejected(self):
        with pytest.raises(ParseError, match="multiplicity"):
            parse_expression("2 f.a(m)")

    def test_zero_atom(self):
        assert evaluate_expression_text("0").is_zero
        assert evaluate_expression_text("f.a(0)@g") == \
            Interface.term(service("f", "a", (), host="g"))

    def test_conditional_element(self):
        node = parse_expression("f.a(m) <| c |> 0")
        assert isinstance(node, CondExpr)
        assert (node.variable, node.negated) == ("c", False)
        negated = parse_expression("f.a(m) <| !c |> 0")
        assert negated.negated

    def test_comment_attaches_to_preceding_element(self):
        node = parse_expression("f.a(m)@g %[why%] + h.b(m)@g")
        assert node.parts[0][1].comments == ("why",)

    def test_comment_attaches_across_plus(self):
        node = parse_expression("f.a(m)@g + %[why%] h.b(m)@g")
        assert node.parts[0][1].comments == ("why",)
        assert node.parts[1][1].comments == ()

    def test_error_position(self):
        with pytest.raises(ParseError) as err:
            parse_expression("f.a(m) +\n+ g")
        assert err.value.pos.line == 2

    def test_unknown_reply_constraint(self):
        with pytest.raises(ParseError, match="reply"):
            parse_expression("f.a(m)@g/Q")


MODULE_TEXT = """
entity e1
entity e2 { entity inner }
action a
motive m
condition c

interface Plain @local monoid { e2.a(m) + 2 x inner.a(m) }
interface Hosted @global { e2.a(m)@e1 - ~e1.a(m)@e2 }
interface Maybe @local { e2.a(m) <| c |> 0 }

architecture Demo {
  e1 : Plain,
  contained e2 : { ~e1.a(m) },
}

check closed Demo
"""


class TestModules:
    def test_parse_and_resolve(self):
        res = resolve(parse_module(MODULE_TEXT))
        assert res.ok, [d.render() for d in res.errors]
        assert res.catalog.entity_path("inner") == ("e2", "inner")
        plain = res.plain_interface("Plain")
        assert plain.coefficient(service("inner", "a", "m")) == 2
        arch = res.architectures["Demo"]
        assert arch.member("e2").contained
        assert res.directives()[0].target == "Demo"

    def test_conditional_definition(self):
        res = resolve(parse_module(MODULE_TEXT))
        maybe = res.interfaces["Maybe"]
        assert not maybe.is_plain
        assert maybe.variables() == ("c",)

    def test_undeclared_entity_named_in_error(self):
        res = resolve(parse_module("action a\nmotive m\ninterface I { XYZ.a(m) }"))
        assert not res.ok
        assert any("XYZ" in d.message for d in res.errors)

    def test_errors_collected_exhaustively(self):
        text = "interface I { A.x(y) }\ninterface J { B.z(w) }"
        res = resolve(parse_module(text))
        missing = {d.message for d in res.errors}
        for name in ("A", "B", "x", "z", "y", "w"):
            assert any(name in m for m in missing), name

    def test_allow_undeclared_downgrades_to_warning(self):
        res = resolve(parse_module("interface I { A.x(y) }"), allow_undeclared=True)
        assert res.ok
        assert len(res.warnings) == 3
        assert res.catalog.entities["A"].extern

    def test_cyclic_reference(self):
        text = "interface A { B }\ninterface B { A }"
        res = resolve(parse_module(text), allow_undeclared=True)
        assert any("cyclic" in d.message for d in res.errors)

    def test_duplicate_definitions(self):
        text = "entity e\nentity e\naction a\ninterface I { 0 }\ninterface I { 0 }"
        res = resolve(parse_module(text))
        assert sum("duplicate" in d.message for d in res.errors) == 2

    def test_scope_annotation_mismatch(self):
        text = "entity e\nentity f\naction a\nmotive m\ninterface I @local { f.a(m)@e }"
        res = resolve(parse_module(text))
        assert any("@local" in d.message for d in res.errors)

    def test_scope_mixing_reported(self):
        text = "entity e\nentity f\naction a\nmotive m\ninterface I { f.a(m)@e + f.a(m) }"
        res = resolve(parse_module(text))
        assert any("cannot combine" in d.message and "I" in d.message for d in res.errors)

    def test_global_member_rejected(self):
        text = ("entity e\nentity f\naction a\nmotive m\n"
                "architecture A { e : { f.a(m)@e } }")
        res = resolve(parse_module(text))
        assert any("local" in d.message for d in res.errors)

    def test_resolution_is_order_independent(self):
        module = parse_module(MODULE_TEXT)
        res = resolve(module)
        rng = random.Random(7)
        for _ in range(5):
            items = list(module.items)
            rng.shuffle(items)
            shuffled = SpecModule(items)
            res2 = resolve(shuffled)
            assert res2.ok
            assert res2.interfaces == res.interfaces

    def test_reference_to_undefined_interface(self):
        res = resolve(parse_module("interface I { Nowhere }"))
        assert any("undefined interface" in d.message for d in res.errors)


DERIVED_TEXT = """
entity f
entity g
entity h
action a
motive m
motive m2

interface G @global { f.a(m)@g + h.a(m2)@g }

refine Split = G expand f into f1, f2
rename Merged = G { motive m -> m2, entity h -> g }
"""


class TestDerivedDefinitions:
    def test_refine_definition(self):
        res = resolve(parse_module(DERIVED_TEXT))
        assert res.ok, [d.render() for d in res.errors]
        split = res.plain_interface("Split")
        assert split.coefficient(service("f1", "a", "m", host="g")) == 1
        assert split.coefficient(service("f2", "a", "m", host="g")) == 1
        assert split.coefficient(service("f", "a", "m", host="g")) == 0
        # parts become extern entities
        assert res.catalog.entities["f1"].extern

    def test_rename_definition(self):
        res = resolve(parse_module(DERIVED_TEXT))
        merged = res.plain_interface("Merged")
        assert merged.coefficient(service("f", "a", "m2", host="g")) == 1
        assert merged.coefficient(service("g", "a", "m2", host="g")) == 1

    def test_refine_part_collision_warns(self):
        text = DERIVED_TEXT + "\nrefine Bad = G expand h into g, hx\n"
        res = resolve(parse_module(text))
        assert any("collides" in d.message for d in res.warnings)

    def test_rename_target_must_be_declared(self):
        text = DERIVED_TEXT + "\nrename Bad = G { motive m -> nowhere }\n"
        res = resolve(parse_module(text))
        assert any("nowhere" in d.message for d in res.errors)

    def test_refine_of_local_source_fails(self):
        text = ("entity f\nentity g\naction a\nmotive m\n"
                "interface L @local { f.a(m) }\n"
                "refine R = L expand f into f1, f2\n")
        res = resolve(parse_module(text))
        assert any("R" in d.message for d in res.errors)

    def test_derived_definitions_chain_and_render(self):
        module = parse_module(DERIVED_TEXT)
        res = resolve(module)
        res2 = resolve(parse_module(render_module(module)))
        assert res2.ok
        assert res2.interfaces == res.interfaces


class TestRoundTrip:
    def test_render_module_reparses_to_same_environment(self):
        module = parse_module(MODULE_TEXT)
        res = resolve(module)
        text = render_module(module)
        res2 = resolve(parse_module(text))
        assert res2.ok, [d.render() for d in res2.errors]
        assert res2.interfaces == res.interfaces
        assert {n: a.entities() for n, a in res2.architectures.items()} == \
            {n: a.entities() for n, a in res.architectures.items()}

    def test_comments_preserved(self):
        text = "entity f\nentity g\naction a\nmotive m\n" \
            "interface I { f.a(m)@g %[keep me%] }\n"
        out = render_module(parse_module(text))
        assert "%[keep me%]" in out

    def test_expr_render_round_trip(self):
        for text in ("0", "f.a(m)", "~f.a(m)@g/T", "2 x (A + B)", "-f.a(0)",
                     "f.a(m) <| !c |> g.a(m)", "A - 3 x ~g.b(v + w)@h/lambda"):
            node = parse_expression(text)
            assert render_expr(parse_expression(render_expr(node))) == render_expr(node)

    def test_resolved_interfaces_reparse(self, rng):
        from conftest import random_interface
        for _ in range(100):
            i = random_interface(rng, composite_motives=True)
            assert evaluate_expression_text(i.render()) == i


class TestLint:
    def test_self_transfer_warning(self):
        text = "entity f\naction a\nmotive m\ninterface I @global { f.a(m)@f }"
        res = resolve(parse_module(text))
        assert any("self-transfer" in d.message for d in lint(res))

    def test_member_self_transfer_warning(self):
        text = "entity f\naction a\nmotive m\narchitecture A { f : { f.a(m) } }"
        res = resolve(parse_module(text))
        assert any("transfers" in d.message and "itself" in d.message for d in lint(res))

    def test_monoid_with_negative_coefficient(self):
        text = "entity f\nentity g\naction a\nmotive m\n" \
            "interface I @local monoid { f.a(m) - g.a(m) }"
        res = resolve(parse_module(text))
        assert any("monoid" in d.message for d in lint(res))

    def test_non_tf_reply_warning(self):
        text = "entity f\naction a\nmotive m\ninterface I { f.a(m)/F }"
        res = resolve(parse_module(text))
        assert any("/F" in d.message for d in lint(res))

    def test_unused_declaration_warning(self):
        text = "entity f\nentity ghost\naction a\nmotive m\ninterface I { f.a(m) }"
        res = resolve(parse_module(text))
        assert any("unused entity: ghost" in d.message for d in lint(res))

    def test_clean_module_has_no_warnings(self):
        text = "entity f\naction a\nmotive m\ninterface I @local monoid { f.a(m) }"
        res = resolve(parse_module(text))
        assert lint(res) == []

    def test_parent_of_used_entity_counts_as_used(self):
        text = "entity p { entity ch }\naction a\nmotive m\ninterface I { ch.a(m) }"
        res = resolve(parse_module(text))
        assert not any("unused entity: p" in d.message for d in lint(res))
