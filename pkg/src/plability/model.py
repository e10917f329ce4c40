"""Domain vocabulary: signatures, components, edges, products, classifications, ratios."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class PlabilityError(ValueError):
    """Raised when an operation's precondition fails. ``code`` is a stable identifier."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


class TypeKind(enum.Enum):
    NAT = "NAT"
    INT = "INT"
    REAL = "REAL"
    NAMED = "NAMED"


BUILTIN_TYPES = frozenset(k.value for k in TypeKind if k is not TypeKind.NAMED)


class Status(enum.Enum):
    REQUIRED = "required"
    OPTIONAL = "optional"


@dataclass(frozen=True)
class TypeTag:
    kind: TypeKind
    name: Optional[str] = None

    def __post_init__(self):
        if self.kind is TypeKind.NAMED:
            if not self.name or not IDENT_RE.match(self.name) or self.name in BUILTIN_TYPES:
                raise ValueError(f"invalid named type {self.name!r}")
        elif self.name is not None:
            raise ValueError("only NAMED types carry a name")

    @classmethod
    def parse(cls, text: str) -> "TypeTag":
        if text in BUILTIN_TYPES:
            return cls(TypeKind(text))
        return cls(TypeKind.NAMED, text)

    def __str__(self) -> str:
        return self.name if self.kind is TypeKind.NAMED else self.kind.value

    # enum members are not orderable; sort on the rendered form instead
    def __lt__(self, other: "TypeTag") -> bool:
        return str(self) < str(other)


@dataclass(frozen=True)
class MessageSignature:
    """One message payload: a set of ``(field_id, type)`` pairs. Empty means a plain call."""

    fields: frozenset[tuple[str, TypeTag]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "fields", frozenset(self.fields))
        ids = [fid for fid, _ in self.fields]
        if len(ids) != len(set(ids)):
            raise ValueError(f"duplicate field ids in signature: {sorted(ids)}")
        for fid in ids:
            if not IDENT_RE.match(fid):
                raise ValueError(f"invalid field id {fid!r}")

    @classmethod
    def of(cls, **fields: str) -> "MessageSignature":
        """Shorthand: ``MessageSignature.of(a="NAT", b="Signal")``."""
        return cls(frozenset((k, TypeTag.parse(v)) for k, v in fields.items()))

    def sort_key(self) -> tuple:
        return tuple((fid, str(t)) for fid, t in sorted(self.fields, key=lambda f: f[0]))

    def __lt__(self, other: "MessageSignature") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return "{" + ", ".join(f"{fid}: {t}" for fid, t in self.sort_key()) + "}"


@dataclass(frozen=True)
class Component:
    name: str
    accepts: frozenset[MessageSignature] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "accepts", frozenset(self.accepts))
        if not IDENT_RE.match(self.name):
            raise ValueError(f"invalid component name {self.name!r}")


@dataclass(frozen=True)
class DependencyEdge:
    source: str
    target: str
    signature: MessageSignature = MessageSignature()
    status: Status = Status.REQUIRED

    @property
    def identity(self) -> tuple[str, str, MessageSignature]:
        return (self.source, self.target, self.signature)

    def sort_key(self) -> tuple:
        return (self.source, self.target, self.signature.sort_key())


@dataclass(frozen=True, eq=True)
class ProductGraph:
    """One product's annotated dependency graph.

    ``declared`` is an optional partial classification (component name to
    status). ``lines`` maps statement keys to source line numbers and is
    excluded from equality.
    """

    product_id: str
    components: frozenset[Component]
    edges: frozenset[DependencyEdge] = frozenset()
    start_set: frozenset[str] = frozenset()
    declared: Mapping[str, Status] = field(default_factory=dict)
    lines: Mapping[object, int] = field(default_factory=dict, compare=False, repr=False)

    __hash__ = None  # declared is a dict

    def __post_init__(self):
        object.__setattr__(self, "components", frozenset(self.components))
        object.__setattr__(self, "edges", frozenset(self.edges))
        object.__setattr__(self, "start_set", frozenset(self.start_set))
        object.__setattr__(self, "declared", dict(self.declared))
        if not IDENT_RE.match(self.product_id):
            raise ValueError(f"invalid product id {self.product_id!r}")
        by_name = {}
        for comp in self.components:
            if comp.name in by_name:
                raise ValueError(f"duplicate component {comp.name!r} in {self.product_id}")
            by_name[comp.name] = comp
        object.__setattr__(self, "_by_name", by_name)
        seen = set()
        for edge in self.edges:
            for end in (edge.source, edge.target):
                if end not in by_name:
                    raise ValueError(f"edge endpoint {end!r} is not a component of {self.product_id}")
            if edge.source == edge.target:
                raise ValueError(f"self-loop on {edge.source!r}")
            if edge.identity in seen:
                raise ValueError(f"duplicate edge {edge.source}->{edge.target} {edge.signature}")
            seen.add(edge.identity)
        unknown = (set(self.start_set) | set(self.declared)) - by_name.keys()
        if unknown:
            raise ValueError(f"unknown components {sorted(unknown)} in {self.product_id}")

    @property
    def component_names(self) -> frozenset[str]:
        return frozenset(self._by_name)

    def component(self, name: str) -> Component:
        return self._by_name[name]

    def has_component(self, name: str) -> bool:
        return name in self._by_name

    def line_of(self, key: object) -> int:
        return self.lines.get(key, self.lines.get("product", 1))


@dataclass(frozen=True)
class Classification:
    required: frozenset[str]
    optional: frozenset[str]
    isolated: frozenset[str] = frozenset()

    def status(self, name: str) -> Status:
        return Status.REQUIRED if name in self.required else Status.OPTIONAL


@dataclass(frozen=True)
class Ratio:
    """An exact, unreduced ratio of two counts.

    Equality is rational (``1/2 == 2/4``); the raw counts are kept so
    reports can show what was divided by what. An undefined ratio (zero
    denominator) is represented by ``None`` at call sites, never by this class.
    """

    num: int
    den: int

    def __post_init__(self):
        if self.den <= 0 or self.num < 0:
            raise ValueError(f"invalid ratio {self.num}/{self.den}")

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __eq__(self, other):
        if isinstance(other, Ratio):
            return self.num * other.den == other.num * self.den
        if isinstance(other, (int, Fraction)):
            return self.fraction == other
        return NotImplemented

    def __hash__(self):
        return hash(self.fraction)

    def __lt__(self, other):
        return self.fraction < _as_fraction(other)

    def __le__(self, other):
        return self.fraction <= _as_fraction(other)

    def __gt__(self, other):
        return self.fraction > _as_fraction(other)

    def __ge__(self, other):
        return self.fraction >= _as_fraction(other)

    def __float__(self) -> float:
        return self.num / self.den

    def rounded(self, places: int = 2) -> str:
        """Decimal string rounded half-up, e.g. ``2/7 -> '0.29'``."""
        scale = 10**places
        q = (2 * self.num * scale + self.den) // (2 * self.den)
        whole, frac = divmod(q, scale)
        return f"{whole}.{frac:0{places}d}" if places else str(whole)

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


def _as_fraction(value) -> Fraction:
    return value.fraction if isinstance(value, Ratio) else Fraction(value)


def ratio(num: int, den: int) -> Optional[Ratio]:
    """Build a ratio, or ``None`` when the denominator is zero."""
    return Ratio(num, den) if den else None


def format_ratio(value: Optional[Ratio], places: int = 2) -> str:
    return "n/a" if value is None else value.rounded(places)
