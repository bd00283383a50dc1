"""Free commutative group of financial-transfer interface elements.

A generator is one interface element: the permission of a host entity to
issue (service polarity) or receive (client polarity, written ``~``) a
transfer action with a motive towards/from a target entity, qualified by a
reply constraint.  An :class:`Interface` is a finitely supported map from
generators to signed integer coefficients, kept in canonical normal form
(sorted terms, no zero coefficients, no local/global mixing).

Coefficients are 64-bit signed with checked arithmetic: overflow raises
``OverflowError`` instead of silently corrupting a zero-sum check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union

from .errors import ScopeError

I64_MIN = -(2**63)
I64_MAX = 2**63 - 1

SERVICE = "service"
CLIENT = "client"

ALPHA_TF = "TF"
ALPHA_T = "T"
ALPHA_F = "F"
ALPHA_NONE = "lambda"
ALPHAS = (ALPHA_TF, ALPHA_T, ALPHA_F, ALPHA_NONE)
_ALPHA_ORDER = {a: i for i, a in enumerate(ALPHAS)}

LOCAL = "local"
GLOBAL = "global"

MotiveLike = Union[str, Iterable[str]]


def _check_i64(n: int) -> int:
    if n < I64_MIN or n > I64_MAX:
        raise OverflowError(f"coefficient {n} exceeds 64-bit signed range")
    return n


def as_motive(motive: MotiveLike) -> tuple[str, ...]:
    """Normalize a motive to its canonical multiset form (a sorted tuple).

    Accepts a single atom name, an iterable of atom names, or the empty
    motive written as ``""``, ``"0"`` or ``()``.
    """
    if isinstance(motive, str):
        atoms = () if motive in ("", "0") else (motive,)
    else:
        atoms = tuple(motive)
    for atom in atoms:
        if not atom or not isinstance(atom, str):
            raise ValueError(f"bad motive atom: {atom!r}")
    return tuple(sorted(atoms))


def render_motive(atoms: tuple[str, ...]) -> str:
    return " + ".join(atoms) if atoms else "0"


@dataclass(frozen=True)
class Generator:
    """One interface element.

    ``host`` is the entity whose interface the element belongs to; ``None``
    marks a localized element (host left implicit).  ``motive`` is a
    multiset of motive atoms stored as a sorted tuple; the empty tuple is
    the zero motive.
    """

    target: str
    action: str
    motive: tuple[str, ...] = ()
    polarity: str = SERVICE
    host: str | None = None
    alpha: str = ALPHA_TF

    def __post_init__(self):
        if not self.target:
            raise ValueError("generator needs a target entity")
        if not self.action:
            raise ValueError("generator needs an action")
        if self.polarity not in (SERVICE, CLIENT):
            raise ValueError(f"bad polarity: {self.polarity!r}")
        if self.alpha not in ALPHAS:
            raise ValueError(f"bad reply constraint: {self.alpha!r}")
        if self.host is not None and not self.host:
            raise ValueError("empty host name")
        object.__setattr__(self, "motive", as_motive(self.motive))

    @property
    def is_local(self) -> bool:
        return self.host is None

    @property
    def is_self_loop(self) -> bool:
        return self.host is not None and self.host == self.target

    @property
    def has_atomic_motive(self) -> bool:
        return len(self.motive) == 1

    def sort_key(self):
        return (
            self.host or "",
            0 if self.polarity == SERVICE else 1,
            self.target,
            self.action,
            self.motive,
            _ALPHA_ORDER[self.alpha],
        )

    def reflection_partner(self) -> Generator:
        """The element whose sum with this one lies in the reflector group.

        Defined for global elements only: the partner of an outgoing
        transfer to ``f`` hosted at ``g`` is the matching incoming transfer
        from ``g`` hosted at ``f``, and vice versa.
        """
        if self.host is None:
            raise ScopeError("local elements have no reflection partner")
        flipped = CLIENT if self.polarity == SERVICE else SERVICE
        return Generator(
            target=self.host,
            action=self.action,
            motive=self.motive,
            polarity=flipped,
            host=self.target,
            alpha=self.alpha,
        )

    def text(self) -> str:
        """Canonical rendering without a coefficient."""
        tilde = "~" if self.polarity == CLIENT else ""
        s = f"{tilde}{self.target}.{self.action}({render_motive(self.motive)})"
        if self.host is not None:
            s += f"@{self.host}"
        if self.alpha != ALPHA_TF:
            s += f"/{self.alpha}"
        return s

    def __str__(self):
        return self.text()


def service(target: str, action: str, motive: MotiveLike = (), host: str | None = None,
            alpha: str = ALPHA_TF) -> Generator:
    """Outgoing transfer element: permission to issue ``action(motive)`` to ``target``."""
    return Generator(target, action, as_motive(motive), SERVICE, host, alpha)


def client(target: str, action: str, motive: MotiveLike = (), host: str | None = None,
           alpha: str = ALPHA_TF) -> Generator:
    """Incoming transfer element: permission to receive ``action(motive)`` from ``target``."""
    return Generator(target, action, as_motive(motive), CLIENT, host, alpha)


TermsLike = Union[Mapping[Generator, int], Iterable[tuple[Generator, int]]]


class Interface:
    """An element of the free commutative interface group, in normal form.

    Immutable; all arithmetic returns new values.  Terms are stored sorted
    by the generator order so equality, hashing and rendering are
    canonical.  An interface is local or global according to its
    generators; the empty interface is compatible with either scope.
    """

    __slots__ = ("_terms", "_scope")

    def __init__(self, terms: TermsLike = ()):
        acc: dict[Generator, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for gen, coeff in items:
            if not isinstance(gen, Generator):
                raise TypeError(f"expected Generator, got {type(gen).__name__}")
            if coeff == 0:
                continue
            acc[gen] = _check_i64(acc.get(gen, 0) + _check_i64(coeff))
            if acc[gen] == 0:
                del acc[gen]
        scope = None
        for gen in acc:
            gen_scope = LOCAL if gen.is_local else GLOBAL
            if scope is None:
                scope = gen_scope
            elif scope != gen_scope:
                raise ScopeError("local and global elements mixed in one interface")
        self._terms = tuple(sorted(acc.items(), key=lambda t: t[0].sort_key()))
        self._scope = scope

    @classmethod
    def zero(cls) -> Interface:
        return _ZERO

    @classmethod
    def term(cls, gen: Generator, coeff: int = 1) -> Interface:
        return cls(((gen, coeff),))

    @property
    def terms(self) -> tuple[tuple[Generator, int], ...]:
        return self._terms

    @property
    def scope(self) -> str | None:
        """``"local"``, ``"global"``, or ``None`` for the empty interface."""
        return self._scope

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_local(self) -> bool:
        return self._scope != GLOBAL

    @property
    def is_global(self) -> bool:
        return self._scope != LOCAL

    def in_monoid(self) -> bool:
        """True when every coefficient is positive and every reply constraint is TF."""
        return all(c > 0 and g.alpha == ALPHA_TF for g, c in self._terms)

    def generators(self) -> tuple[Generator, ...]:
        return tuple(g for g, _ in self._terms)

    def coefficient(self, gen: Generator) -> int:
        for g, c in self._terms:
            if g == gen:
                return c
        return 0

    def _require_compatible(self, other: Interface):
        if self._scope is not None and other._scope is not None and self._scope != other._scope:
            raise ScopeError(f"cannot combine a {self._scope} interface with a {other._scope} one")

    def __add__(self, other: Interface) -> Interface:
        if not isinstance(other, Interface):
            return NotImplemented
        self._require_compatible(other)
        return Interface(tuple(self._terms) + tuple(other._terms))

    def __neg__(self) -> Interface:
        return Interface(tuple((g, -c) for g, c in self._terms))

    def __sub__(self, other: Interface) -> Interface:
        if not isinstance(other, Interface):
            return NotImplemented
        return self + (-other)

    def __mul__(self, n: int) -> Interface:
        if not isinstance(n, int):
            return NotImplemented
        return Interface(tuple((g, _check_i64(c * n)) for g, c in self._terms))

    __rmul__ = __mul__

    def leq(self, other: Interface) -> bool:
        """Partial ordering: true when ``other - self`` has no negative coefficient."""
        return all(c >= 0 for _, c in (other - self)._terms)

    def __eq__(self, other):
        if not isinstance(other, Interface):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Generator, int]]:
        return iter(self._terms)

    def render(self) -> str:
        """Canonical text form; ``parse(render(i)) == i`` on normal forms.

        Terms sorted by (host, polarity, target, action, motive, alpha);
        coefficient magnitudes other than 1 printed as an ``n x `` prefix,
        negative terms joined with ``-``.
        """
        if not self._terms:
            return "0"
        parts = []
        for i, (gen, coeff) in enumerate(self._terms):
            mag = abs(coeff)
            body = ("" if mag == 1 else f"{mag} x ") + gen.text()
            if i == 0:
                parts.append(("-" if coeff < 0 else "") + body)
            else:
                parts.append(("- " if coeff < 0 else "+ ") + body)
        return " ".join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Interface<{self.render()}>"


_ZERO = Interface()


def interface_sum(parts: Iterable[Interface]) -> Interface:
    total = Interface.zero()
    for part in parts:
        total = total + part
    return total
