"""Value universe for the Forensic Lucid implementation.

Primitive values are plain Python ints, floats, bools, and strings; arrays
are tuples.  This module adds the structured kinds: stream sentinels,
tag sets, dimensions, simple contexts and context sets, and the
three-level forensic hierarchy (observation, observation sequence,
evidential statement) with defaulting and lifting rules.

Everything here is immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence, Tuple, Union


class FlucidError(Exception):
    """Root of the package exception hierarchy."""


class ValidationError(FlucidError):
    """A constructor argument violated a declared constraint."""

    def __init__(self, message: str, fieldname: str = ""):
        super().__init__(message)
        self.fieldname = fieldname


# ---------------------------------------------------------------------------
# Sentinels
# ---------------------------------------------------------------------------


class Sentinel:
    """Interned stream/infinity markers: bod, eod, INF+, INF-.

    INF+ compares greater than every finite number, INF- less than every
    finite number.  bod and eod do not participate in ordering; they are
    boundary markers tested with iseod/isbod.
    """

    _interned: dict = {}
    __slots__ = ("name",)

    def __new__(cls, name: str) -> "Sentinel":
        existing = cls._interned.get(name)
        if existing is not None:
            return existing
        inst = super().__new__(cls)
        object.__setattr__(inst, "name", name)
        cls._interned[name] = inst
        return inst

    def __repr__(self) -> str:
        return self.name

    def __deepcopy__(self, memo):
        return self

    def __copy__(self):
        return self

    def _ordered(self) -> bool:
        return self.name in ("INF+", "INF-")

    def __lt__(self, other: Any):
        if not self._ordered():
            return NotImplemented
        if isinstance(other, Sentinel):
            if not other._ordered():
                return NotImplemented
            return self.name == "INF-" and other.name == "INF+"
        if isinstance(other, (int, float)):
            return self.name == "INF-"
        return NotImplemented

    def __gt__(self, other: Any):
        if not self._ordered():
            return NotImplemented
        if isinstance(other, Sentinel):
            if not other._ordered():
                return NotImplemented
            return self.name == "INF+" and other.name == "INF-"
        if isinstance(other, (int, float)):
            return self.name == "INF+"
        return NotImplemented

    def __le__(self, other: Any):
        gt = self.__gt__(other)
        if gt is NotImplemented:
            return NotImplemented
        return not gt

    def __ge__(self, other: Any):
        lt = self.__lt__(other)
        if lt is NotImplemented:
            return NotImplemented
        return not lt


BOD = Sentinel("bod")
EOD = Sentinel("eod")
PLUS_INF = Sentinel("INF+")
MINUS_INF = Sentinel("INF-")


def is_bound_marker(v: Any) -> bool:
    return v is BOD or v is EOD


def saturating_add(a: Any, b: Any) -> Any:
    """Addition where INF+ absorbs; avoids wraparound on unbounded durations."""
    if a is PLUS_INF or b is PLUS_INF:
        return PLUS_INF
    if a is MINUS_INF or b is MINUS_INF:
        return MINUS_INF
    return a + b


class _AnyProperty:
    """The wildcard property of the no-observation $."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "$"

    def __deepcopy__(self, memo):
        return self

    def __copy__(self):
        return self


ANY_PROPERTY = _AnyProperty()


# ---------------------------------------------------------------------------
# Tag sets and dimensions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TagSet:
    """Declared tag collection of a dimension.

    Declaration order is preserved even for unordered sets: it provides the
    implicit index used by the stream operators.  Infinite sets carry a
    from/to/step generator instead of explicit tags.
    """

    ordering: str = "ordered"          # ordered | unordered
    cardinality: str = "finite"        # finite | infinite
    periodicity: str = "nonperiodic"   # periodic | nonperiodic
    tags: Optional[Tuple[Any, ...]] = None
    generator: Optional[Tuple[Any, Any, Any]] = None   # (from, to, step)

    def __post_init__(self):
        if self.ordering not in ("ordered", "unordered"):
            raise ValidationError("ordering must be ordered or unordered", "ordering")
        if self.cardinality not in ("finite", "infinite"):
            raise ValidationError("cardinality must be finite or infinite", "cardinality")
        if self.periodicity not in ("periodic", "nonperiodic"):
            raise ValidationError("periodicity must be periodic or nonperiodic", "periodicity")
        if self.cardinality == "finite":
            if self.tags is None:
                raise ValidationError("finite tag set requires declared tags", "tags")
            seen = []
            for t in self.tags:
                if t in seen:
                    raise ValidationError("duplicate tag %r in tag set" % (t,), "tags")
                seen.append(t)
        elif self.tags is None and self.generator is None:
            raise ValidationError("infinite tag set requires a generator", "generator")

    @staticmethod
    def from_range(frm: int, to: int, step: int = 1) -> "TagSet":
        tags = tuple(range(frm, to + (1 if step > 0 else -1), step))
        return TagSet(tags=tags)

    @staticmethod
    def naturals() -> "TagSet":
        """The open integer tag set used by implicitly declared dimensions."""
        return TagSet(cardinality="infinite", tags=None, generator=(0, PLUS_INF, 1))

    def is_finite(self) -> bool:
        return self.cardinality == "finite"

    def index_of(self, tag: Any) -> int:
        if self.tags is not None:
            for i, t in enumerate(self.tags):
                if t == tag and type(t) in (type(tag), bool) or t == tag:
                    return i
            raise ValidationError("tag %r not in tag set" % (tag,), "tags")
        frm, _to, step = self.generator
        if isinstance(tag, int):
            return (tag - frm) // step
        raise ValidationError("tag %r not indexable in generated tag set" % (tag,), "tags")

    def tag_at(self, index: int) -> Any:
        if self.tags is not None:
            if 0 <= index < len(self.tags):
                return self.tags[index]
            raise IndexError(index)
        frm, _to, step = self.generator
        return frm + index * step

    def __contains__(self, tag: Any) -> bool:
        if self.tags is not None:
            return any(t == tag for t in self.tags)
        frm, to, step = self.generator
        if not isinstance(tag, int):
            return False
        if to is PLUS_INF:
            return tag >= frm and (tag - frm) % step == 0
        return frm <= tag <= to and (tag - frm) % step == 0

    def __len__(self) -> int:
        if self.tags is None:
            raise ValidationError("infinite tag set has no length", "tags")
        return len(self.tags)


@dataclass(frozen=True)
class Dimension:
    """A named axis of variation; tag_set None means open (implicit) dimension."""

    name: str
    tag_set: Optional[TagSet] = None


# ---------------------------------------------------------------------------
# Contexts
# ---------------------------------------------------------------------------


class SimpleContext:
    """A point in the context space: dimension:tag pairs, one per dimension.

    Stored canonically sorted by dimension name so that equality, hashing,
    and printed form are deterministic regardless of construction order.
    """

    __slots__ = ("pairs",)

    def __init__(self, pairs: Union[dict, Iterable[Tuple[str, Any]], None] = None):
        if pairs is None:
            items: Sequence[Tuple[str, Any]] = ()
        elif isinstance(pairs, dict):
            items = tuple(pairs.items())
        else:
            items = tuple(pairs)
        seen = {}
        for dim, tag in items:
            if dim in seen and not _tags_equal(seen[dim], tag):
                raise ValidationError(
                    "dimension %r bound twice in one simple context" % dim, "pairs")
            seen[dim] = tag
        object.__setattr__(self, "pairs",
                           tuple(sorted(seen.items(), key=lambda p: p[0])))

    def dimensions(self) -> Tuple[str, ...]:
        return tuple(d for d, _ in self.pairs)

    def tag(self, dim: str, default: Any = None) -> Any:
        for d, t in self.pairs:
            if d == dim:
                return t
        return default

    def has(self, dim: str) -> bool:
        return any(d == dim for d, _ in self.pairs)

    def with_pair(self, dim: str, tag: Any) -> "SimpleContext":
        kept = [(d, t) for d, t in self.pairs if d != dim]
        kept.append((dim, tag))
        return SimpleContext(kept)

    def without(self, dim: str) -> "SimpleContext":
        return SimpleContext((d, t) for d, t in self.pairs if d != dim)

    def items(self) -> Tuple[Tuple[str, Any], ...]:
        return self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, SimpleContext) and self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash(("SimpleContext", self.pairs))

    def __repr__(self) -> str:
        return to_source(self)


def _tags_equal(a: Any, b: Any) -> bool:
    return type(a) is type(b) and a == b or a == b


class ContextSet:
    """A region of the context space: a set of simple contexts."""

    __slots__ = ("members",)

    def __init__(self, members: Iterable[SimpleContext] = ()):
        unique = []
        for m in members:
            if not isinstance(m, SimpleContext):
                raise ValidationError("context set members must be simple contexts",
                                      "members")
            if m not in unique:
                unique.append(m)
        # canonical order: by printed form, for deterministic iteration
        object.__setattr__(self, "members",
                           tuple(sorted(unique, key=lambda c: repr(c))))

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, c: SimpleContext) -> bool:
        return c in self.members

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, ContextSet) and set(self.members) == set(other.members)

    def __hash__(self) -> int:
        return hash(("ContextSet", frozenset(self.members)))

    def __repr__(self) -> str:
        return to_source(self)


# ---------------------------------------------------------------------------
# Forensic hierarchy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Observation:
    """o = (P, min, max, w, t): property P held for min..min+max steps.

    w is the credibility mass in [0,1]; t the optional wall-clock start in
    epoch seconds.  description carries the human-readable => annotation.
    """

    property: Any
    min: int = 1
    max: Any = 0               # int >= 0 or PLUS_INF
    w: float = 1.0
    t: Union[int, str, None] = None
    description: Optional[str] = None

    def is_no_observation(self) -> bool:
        return self.property is ANY_PROPERTY

    def is_zero_observation(self) -> bool:
        return self.min == 0 and self.max == 0 and self.property is not ANY_PROPERTY

    def __repr__(self) -> str:
        return to_source(self)


@dataclass(frozen=True)
class ObservationSequence:
    """Chronologically ordered witness account; ordering is significant."""

    observations: Tuple[Observation, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "observations", tuple(self.observations))

    def __len__(self) -> int:
        return len(self.observations)

    def __iter__(self):
        return iter(self.observations)

    def __repr__(self) -> str:
        label = self.name or "os"
        return "%s%s" % (label, to_source(self))


@dataclass(frozen=True)
class EvidentialStatement:
    """All observation sequences of a case.

    Semantically unordered; declaration order is retained so that iteration
    and printed output stay deterministic.
    """

    sequences: Tuple[ObservationSequence, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "sequences", tuple(self.sequences))

    def __len__(self) -> int:
        return len(self.sequences)

    def __iter__(self):
        return iter(self.sequences)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, EvidentialStatement):
            return NotImplemented
        return set(self.sequences) == set(other.sequences)

    def __hash__(self) -> int:
        return hash(("EvidentialStatement", frozenset(self.sequences)))

    def __repr__(self) -> str:
        label = self.name or "es"
        return "%s{%s}" % (label, ", ".join(os.name or repr(os) for os in self.sequences))


@dataclass(frozen=True)
class FunctionHandle:
    """Opaque callable value; payload is interpreted by the evaluator."""

    name: str
    dim_params: Tuple[str, ...] = ()
    params: Tuple[str, ...] = ()
    payload: Any = None

    def __repr__(self) -> str:
        return "<function %s/%d>" % (self.name, len(self.params))


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def make_observation(property: Any, min: Any = None, max: Any = None,
                     w: Any = None, t: Any = None,
                     description: Optional[str] = None) -> Observation:
    """Build an observation, filling defaults min=1, max=0, w=1.0, t absent."""
    if min is None:
        min = 1
    if max is None:
        max = 0
    if w is None:
        w = 1.0
    if isinstance(min, bool) or not isinstance(min, int):
        raise ValidationError("min must be an integer", "min")
    if min < 0:
        raise ValidationError("min must be non-negative", "min")
    if max is not PLUS_INF:
        if isinstance(max, bool) or not isinstance(max, int):
            raise ValidationError("max must be an integer or INF+", "max")
        if max < 0:
            raise ValidationError("max must be non-negative", "max")
    if not isinstance(w, (int, float)) or isinstance(w, bool):
        raise ValidationError("w must be a real number", "w")
    if not (0.0 <= float(w) <= 1.0):
        raise ValidationError("w must be within [0, 1]", "w")
    if t is not None and t is not EOD:
        # both epoch integers and raw log-format strings are legal timestamps
        if isinstance(t, bool) or not isinstance(t, (int, str)):
            raise ValidationError("t must be an integer or string timestamp", "t")
    else:
        t = None
    return Observation(property=property, min=min, max=max, w=float(w), t=t,
                       description=description)


def no_observation() -> Observation:
    """$ : puts no restrictions on computations."""
    return Observation(property=ANY_PROPERTY, min=0, max=PLUS_INF, w=1.0)


def zero_observation(property: Any) -> Observation:
    """\\0(P) : explained only by an empty run."""
    return Observation(property=property, min=0, max=0, w=1.0)


def lift(v: Any) -> Any:
    """Lift contextual knowledge into the forensic hierarchy.

    Scalars and simple contexts become single default observations; a
    context set becomes an observation sequence wrapping each member.
    Already-forensic values pass through unchanged (idempotent).
    """
    if isinstance(v, (Observation, ObservationSequence, EvidentialStatement)):
        return v
    if isinstance(v, ContextSet):
        return ObservationSequence(
            tuple(make_observation(member) for member in v))
    return make_observation(v)


# ---------------------------------------------------------------------------
# Kind inspection and serialization
# ---------------------------------------------------------------------------


def kind_of(v: Any) -> str:
    if isinstance(v, bool):
        return "boolean"
    if isinstance(v, int):
        return "integer"
    if isinstance(v, float):
        return "real"
    if isinstance(v, str):
        return "string"
    if isinstance(v, tuple):
        return "array"
    if isinstance(v, Sentinel):
        return "sentinel"
    if isinstance(v, SimpleContext):
        return "simple context"
    if isinstance(v, ContextSet):
        return "context set"
    if isinstance(v, TagSet):
        return "tag set"
    if isinstance(v, Observation):
        return "observation"
    if isinstance(v, ObservationSequence):
        return "observation sequence"
    if isinstance(v, EvidentialStatement):
        return "evidential statement"
    if isinstance(v, FunctionHandle):
        return "function"
    if v is ANY_PROPERTY:
        return "any-property"
    return type(v).__name__


def is_forensic(v: Any) -> bool:
    return isinstance(v, (Observation, ObservationSequence, EvidentialStatement))


def _quote(s: str) -> str:
    return '"%s"' % s.replace("\\", "\\\\").replace('"', '\\"')


def to_source(v: Any) -> str:
    """Render a value in concrete syntax; re-parsing yields an equal value."""
    if v is True:
        return "true"
    if v is False:
        return "false"
    if isinstance(v, (int, float)):
        return repr(v)
    if isinstance(v, str):
        return _quote(v)
    if isinstance(v, Sentinel):
        return v.name
    if v is ANY_PROPERTY:
        return "$"
    if isinstance(v, tuple):
        return "(%s)" % ", ".join(to_source(x) for x in v)
    if isinstance(v, SimpleContext):
        return "[%s]" % ", ".join(
            "%s:%s" % (d, to_source(t)) for d, t in v.pairs)
    if isinstance(v, ContextSet):
        return "{%s}" % ", ".join(to_source(c) for c in v.members)
    if isinstance(v, Observation):
        if v.is_no_observation():
            return "$"
        if v.is_zero_observation() and v.w == 1.0 and v.t is None:
            return "\\0(%s)" % to_source(v.property)
        prop = to_source(v.property)
        if v.description is not None:
            prop = "%s => %s" % (prop, _quote(v.description))
        parts = [prop, str(v.min), to_source(v.max), repr(v.w)]
        if v.t is not None:
            parts.append(to_source(v.t))
        return "(%s)" % ", ".join(parts)
    if isinstance(v, ObservationSequence):
        return "{ %s }" % ", ".join(to_source(o) for o in v.observations)
    if isinstance(v, EvidentialStatement):
        return "{ %s }" % ", ".join(to_source(s) for s in v.sequences)
    raise ValidationError("value of kind %s has no source form" % kind_of(v))
