import random

import pytest

from ftig.algebra import (
    ALPHA_F, ALPHA_NONE, ALPHA_T, ALPHA_TF, CLIENT, SERVICE,
    Generator, Interface, client, service,
)
from ftig.architecture import (
    Architecture, TransferEvent, check_closed, comply_events, diff,
    global_sum, read_event_log,
)
from ftig.errors import LogFormatError, ScopeError
from ftig.transform import ConditionalInterface, ConditionLiteral, RefinementSpec, refine

from conftest import random_monoid_interface


def arch(*members, name="A"):
    return Architecture(name, members)


I1 = Interface.term(service("e2", "a", "m"))
I2 = Interface.term(client("e1", "a", "m"))


class TestGlobalSum:
    def test_two_entity_example(self):
        a = arch(("e1", I1), ("e2", I2))
        assert global_sum(a) == \
            Interface.term(service("e2", "a", "m", host="e1")) + \
            Interface.term(client("e1", "a", "m", host="e2"))

    def test_empty(self):
        assert global_sum(arch()).is_zero

    def test_single_member(self):
        assert global_sum(arch(("e1", I1))) == \
            Interface.term(service("e2", "a", "m", host="e1"))

    def test_expands_motives(self):
        a = arch(("e1", Interface.term(service("e2", "a", ("v", "w")))))
        assert global_sum(a) == \
            Interface.term(service("e2", "a", "v", host="e1")) + \
            Interface.term(service("e2", "a", "w", host="e1"))

    def test_global_member_rejected(self):
        with pytest.raises(ScopeError):
            arch(("e1", Interface.term(service("e2", "a", "m", host="e1"))))


class TestCheckClosed:
    def test_two_entity_closed(self):
        rep = check_closed(arch(("e1", I1), ("e2", I2)))
        assert rep.closed
        assert rep.residual_lines() == []

    def test_dangling_member_not_closed(self):
        rep = check_closed(arch(("e1", I1)))
        assert not rep.closed
        assert any("e1 -> e2" in line for line in rep.residual_lines())

    def test_verdict_invariant_under_member_permutation(self, rng):
        members = [("e1", I1), ("e2", I2),
                   ("e3", Interface.term(service("e4", "b", "m2"))),
                   ("e4", Interface.term(client("e3", "b", "m2")))]
        base = check_closed(arch(*members)).closed
        for _ in range(5):
            rng.shuffle(members)
            assert check_closed(arch(*members)).closed == base

    def test_verdict_invariant_under_member_splitting(self):
        whole = arch(("e1", I1 + 2 * Interface.term(service("e3", "b", "m"))), ("e2", I2))
        split = arch(("e1", I1), ("e2", I2),
                     ("e1", 2 * Interface.term(service("e3", "b", "m"))))
        assert check_closed(whole).closed == check_closed(split).closed
        assert global_sum(whole) == global_sum(split)

    def test_conditional_members_checked_under_all_assignments(self):
        c = ConditionLiteral("c")
        rep = check_closed(arch(
            ("g", ConditionalInterface(branches={c: Interface.term(service("f", "a", "m"))})),
            ("f", ConditionalInterface(branches={c: Interface.term(client("g", "a", "m"))})),
        ))
        assert rep.closed
        assert rep.conditional is not None and len(rep.conditional.cases) == 2

    def test_conditional_mismatch_reports_assignment(self):
        c = ConditionLiteral("c")
        rep = check_closed(arch(
            ("g", ConditionalInterface(branches={c: Interface.term(service("f", "a", "m"))})),
            ("f", I2),
        ))
        assert not rep.closed
        assert any("c=true" in line for line in rep.residual_lines())

    def test_refinement_keeps_architecture_closed(self, rng):
        for _ in range(50):
            x = random_monoid_interface(rng)
            matched = x + Interface((g.reflection_partner(), c) for g, c in x)
            spec = RefinementSpec("e2", ("e2a", "e2b"))
            from ftig.reflection import is_closed
            assert is_closed(refine(matched, spec)).closed


class TestDiff:
    def test_diff_with_self_is_all_zero(self):
        a = arch(("e1", I1), ("e2", I2))
        deltas = diff(a, a)
        assert [e for e, _ in deltas] == ["e1", "e2"]
        assert all(d.is_zero for _, d in deltas)

    def test_diff_against_empty(self):
        b = arch(("e1", I1), ("e2", I2), name="B")
        deltas = dict(diff(Architecture("empty"), b))
        assert deltas == {"e1": I1, "e2": I2}

    def test_member_recomposition(self, rng):
        a = arch(("e1", I1), ("e3", random_monoid_interface(rng, local=True)))
        b = arch(("e1", 2 * I1), ("e2", I2), name="B")
        for entity, delta in diff(a, b):
            member_a = a.member(entity)
            member_b = b.member(entity)
            left = (member_a.interface.unconditional if member_a else Interface.zero()) + delta
            right = member_b.interface.unconditional if member_b else Interface.zero()
            assert left == right


class TestEventLog:
    def test_reads_plain_rows(self):
        text = "e1,e2,a,m,T\ne2,e1,a,m,F\n"
        events = read_event_log(text)
        assert events == [TransferEvent("e1", "e2", "a", "m", "T"),
                          TransferEvent("e2", "e1", "a", "m", "F")]

    def test_header_skipped(self):
        text = "source,destination,action,motive,reply\ne1,e2,a,m,T\n"
        assert len(read_event_log(text)) == 1

    def test_malformed_row_number_reported(self):
        with pytest.raises(LogFormatError, match="row 2"):
            read_event_log("e1,e2,a,m,T\ne1,e2,a\n")

    def test_bad_reply_rejected(self):
        with pytest.raises(LogFormatError, match="reply"):
            read_event_log("e1,e2,a,m,yes\n")


def two_entity_arch(alpha_out=ALPHA_TF, alpha_in=ALPHA_TF, contained=False):
    out = Interface.term(service("e2", "a", "m", alpha=alpha_out))
    inc = Interface.term(client("e1", "a", "m", alpha=alpha_in))
    return Architecture("A", [("e1", out), ("e2", inc, contained)])


class TestComply:
    def test_matching_event_has_no_violation(self):
        rep = comply_events([TransferEvent("e1", "e2", "a", "m", "T")], two_entity_arch())
        assert rep.complies and not rep.warnings

    def test_unknown_motive_is_unmatched_outgoing(self):
        rep = comply_events([TransferEvent("e1", "e2", "a", "m2", "T")], two_entity_arch())
        kinds = [v.kind for v in rep.violations]
        assert "unmatched-outgoing" in kinds
        # candidate hint: same target and action, different motive
        v = rep.violations[0]
        assert any(g.action == "a" for g in v.candidates)

    def test_unmatched_incoming_is_warning_by_default(self):
        a = Architecture("A", [("e1", Interface.term(service("e2", "a", "m"))),
                               ("e2", Interface.zero())])
        rep = comply_events([TransferEvent("e1", "e2", "a", "m", "T")], a)
        assert rep.complies
        assert [w.kind for w in rep.warnings] == ["unmatched-incoming"]

    def test_contained_member_makes_unmatched_incoming_an_error(self):
        a = Architecture("A", [("e1", Interface.term(service("e2", "a", "m"))),
                               ("e2", Interface.zero(), True)])
        rep = comply_events([TransferEvent("e1", "e2", "a", "m", "T")], a)
        assert not rep.complies
        assert rep.violations[0].kind == "unmatched-incoming"

    def test_reply_forbidden(self):
        rep = comply_events([TransferEvent("e1", "e2", "a", "m", "F")],
                            two_entity_arch(alpha_out=ALPHA_T))
        assert [v.kind for v in rep.violations] == ["reply-forbidden"]

    def test_alpha_semantics_table(self):
        for alpha, ok_replies in ((ALPHA_TF, {"T", "F"}), (ALPHA_T, {"T"}),
                                  (ALPHA_F, {"F"}), (ALPHA_NONE, {"T", "F"})):
            a = two_entity_arch(alpha_out=alpha, alpha_in=alpha)
            for reply in ("T", "F"):
                rep = comply_events([TransferEvent("e1", "e2", "a", "m", reply)], a)
                assert rep.complies == (reply in ok_replies), (alpha, reply)

    def test_event_between_strangers_rejected(self):
        with pytest.raises(ValueError, match="member"):
            comply_events([TransferEvent("x", "y", "a", "m", "T")], two_entity_arch())

    def test_external_source_checks_destination_only(self):
        a = Architecture("A", [("e2", Interface.term(client("outside", "a", "m")))])
        rep = comply_events([TransferEvent("outside", "e2", "a", "m", "T")], a)
        assert rep.complies

    def test_motive_expansion_applies(self):
        a = Architecture("A", [
            ("e1", Interface.term(service("e2", "a", ("m", "n")))),
            ("e2", Interface.term(client("e1", "a", ("m", "n")))),
        ])
        rep = comply_events([TransferEvent("e1", "e2", "a", "m", "T"),
                             TransferEvent("e1", "e2", "a", "n", "F")], a)
        assert rep.complies

    def test_outgoing_match_agrees_with_ordering_on_monoid_members(self, rng):
        # an event matches exactly when its single-element interface sits
        # below the member's expanded interface in the partial order
        from ftig.transform import expand_motives
        for _ in range(100):
            member = random_monoid_interface(rng, local=True, composite_motives=True)
            a = Architecture("A", [("e1", member), ("e2", Interface.zero())])
            dst, action, motive = "e2", "a", "m1"
            p = Interface.term(service(dst, action, motive))
            rep = comply_events([TransferEvent("e1", dst, action, motive, "T")], a)
            outgoing_ok = not any(v.kind == "unmatched-outgoing" for v in rep.violations)
            assert outgoing_ok == p.leq(expand_motives(member))


# --------------------------------------------------------------------------
# brute-force matcher: scan every expanded member element per event

def brute_force_matcher(events, architecture):
    expanded = {}
    for member in architecture.members:
        terms = []
        for gen, coeff in member.interface.unconditional:
            if coeff <= 0:
                continue
            for atom in gen.motive:
                terms.append(Generator(gen.target, gen.action, (atom,), gen.polarity,
                                       None, gen.alpha))
        expanded[member.entity] = (terms, member.contained)
    admits = {ALPHA_TF: "TF", ALPHA_T: "T", ALPHA_F: "F", ALPHA_NONE: "TF"}
    violations, warnings = [], []
    for index, ev in enumerate(events):
        if ev.source in expanded:
            terms, _ = expanded[ev.source]
            sharing = [g for g in terms if g.polarity == SERVICE and g.target == ev.destination
                       and g.action == ev.action and g.motive == (ev.motive,)]
            if not sharing:
                violations.append((index, "unmatched-outgoing", ev.source))
            elif not any(ev.reply in admits[g.alpha] for g in sharing):
                violations.append((index, "reply-forbidden", ev.source))
        if ev.destination in expanded:
            terms, is_contained = expanded[ev.destination]
            sharing = [g for g in terms if g.polarity == CLIENT and g.target == ev.source
                       and g.action == ev.action and g.motive == (ev.motive,)]
            if not sharing:
                hit = (index, "unmatched-incoming", ev.destination)
                (violations if is_contained else warnings).append(hit)
            elif not any(ev.reply in admits[g.alpha] for g in sharing):
                violations.append((index, "reply-forbidden", ev.destination))
    return violations, warnings


def random_compliance_architecture(rng):
    entities = ("e1", "e2", "e3")
    members = []
    for e in entities:
        terms = []
        for _ in range(rng.randint(1, 6)):
            other = rng.choice([x for x in entities if x != e] + ["outside"])
            terms.append((Generator(other, rng.choice(("a", "b")),
                                    (rng.choice(("m1", "m2")),),
                                    rng.choice((SERVICE, CLIENT)), None,
                                    rng.choice((ALPHA_TF, ALPHA_T, ALPHA_F, ALPHA_NONE))),
                          rng.randint(1, 2)))
        members.append((e, Interface(terms), rng.random() < 0.3))
    return Architecture("R", members)


def test_compliance_matches_brute_force_oracle(rng):
    for _ in range(20):
        architecture = random_compliance_architecture(rng)
        events = []
        for _ in range(200):
            src, dst = rng.sample(("e1", "e2", "e3", "outside"), 2)
            if src == "outside" and dst == "outside":
                continue
            events.append(TransferEvent(src, dst, rng.choice(("a", "b")),
                                        rng.choice(("m1", "m2")), rng.choice(("T", "F"))))
        rep = comply_events(events, architecture)
        got_violations = [(v.index, v.kind, v.entity) for v in rep.violations]
        got_warnings = [(w.index, w.kind, w.entity) for w in rep.warnings]
        want_violations, want_warnings = brute_force_matcher(events, architecture)
        assert sorted(got_violations) == sorted(want_violations)
        assert sorted(got_warnings) == sorted(want_warnings)
