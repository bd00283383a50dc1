"""Reduction modulo the reflection law and the zero-sum closedness check.

The reflection law pairs every outgoing transfer with its matching
incoming counterpart: a service element hosted at ``g`` targeting ``f``
cancels against the client element hosted at ``f`` targeting ``g`` (same
action, motive and TF reply constraint).  Self-transfer elements (host =
target, TF) vanish on their own.  Reducing a global interface against
these rules yields a canonical residual; the interface is closed exactly
when the residual is zero.

Elements with a reply constraint other than TF have no cancellation rule;
they pass through unchanged and are reported as non-cancellable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import ALPHA_TF, CLIENT, SERVICE, Generator, Interface
from .errors import ScopeError


def reflect_generator(gen: Generator) -> tuple[Generator, int] | None:
    """Canonical signed term for one global element.

    Service elements are already canonical (+1).  A client element maps to
    minus its reflection partner.  Self-transfer elements with TF map to
    zero (returned as ``None``).  Elements with a non-TF reply constraint
    have no rewrite rule and are returned unchanged; callers decide how to
    flag them.
    """
    if gen.is_local:
        raise ScopeError("reflection is defined on global elements only")
    if gen.alpha != ALPHA_TF:
        return (gen, 1)
    if gen.is_self_loop:
        return None
    if gen.polarity == CLIENT:
        return (gen.reflection_partner(), -1)
    return (gen, 1)


@dataclass(frozen=True)
class Residual:
    """Image of an interface in the group modulo reflection.

    ``canonical`` holds only service-polarity, non-self-transfer TF
    elements plus any non-cancellable (non-TF) elements.
    ``non_cancellable`` lists the non-TF generators that were present.
    """

    canonical: Interface
    non_cancellable: tuple[Generator, ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.canonical.is_zero and not self.non_cancellable


def reduce_modulo_reflection(iface: Interface) -> Residual:
    """Reduce a global interface to its canonical residual.

    A group homomorphism: applied term by term, its kernel is exactly the
    reflector subgroup.
    """
    if iface.scope == "local":
        raise ScopeError("cannot reduce a local interface modulo reflection")
    acc = []
    stuck = []
    for gen, coeff in iface:
        if gen.alpha != ALPHA_TF:
            stuck.append(gen)
        reflected = reflect_generator(gen)
        if reflected is None:
            continue
        canon_gen, sign = reflected
        acc.append((canon_gen, sign * coeff))
    return Residual(Interface(acc), tuple(sorted(stuck, key=Generator.sort_key)))


@dataclass(frozen=True)
class ClosednessReport:
    closed: bool
    residual: Residual

    def unmatched(self) -> list[str]:
        """Human-readable line per residual term: who still owes or expects what."""
        lines = []
        for gen, coeff in self.residual.canonical:
            if gen.alpha != ALPHA_TF:
                continue
            action = f"{gen.action}({', '.join(gen.motive) or '0'})"
            if coeff > 0:
                lines.append(
                    f"{gen.host} may still issue {coeff} x {action} to {gen.target} "
                    f"with no receiving counterpart"
                )
            else:
                # -f.a(m)@g is the incoming side ~g.a(m)@f with nothing to receive from
                lines.append(
                    f"{gen.target} may still receive {-coeff} x {action} from {gen.host} "
                    f"with no issuing counterpart"
                )
        for gen in self.residual.non_cancellable:
            lines.append(
                f"{gen.text()} carries reply constraint /{gen.alpha} and cannot cancel"
            )
        return lines


def is_closed(iface: Interface) -> ClosednessReport:
    """Zero-sum integrity check: closed iff the residual vanishes entirely."""
    residual = reduce_modulo_reflection(iface)
    return ClosednessReport(residual.is_zero, residual)
