"""Demand-driven evaluation.

Expressions are evaluated by demand at a context: a demand names a
definition, a simple context, and a call frame; its value is computed
once and kept in a warehouse that is never overwritten.  Scoping was
flattened by the analyzer (every definition has a unique name) so one
global definition environment serves the whole program; call frames
carry only the lazy argument bindings of function application, which
gives the substitution semantics directly: a formal occurrence
evaluates its argument expression at the context of the occurrence,
not of the call.

Stream operators are evaluated directly by index arithmetic; the
semantics.rewrite_to_core reduction is the cross-check, not the
implementation.  Forensic values (observations, sequences, statements)
flow through the same machinery, and a call applying a claim-evaluator
function to an evidential statement is dispatched to the embedded
reconstruction engine: the transition function declared alongside it is
tabulated into a finite state machine, and the claim is either checked
by reconstruction or, when the program declares explicit hypothesis
chains, validated hop by hop against the tabulated transitions.
"""

from __future__ import annotations

import itertools
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import calculus, dstme, era
from .semantics import Analysis, analyze
from .syntax import nodes as N
from .syntax import parse
from .values import (
    BOD,
    EOD,
    EvidentialStatement,
    FlucidError,
    FunctionHandle,
    MINUS_INF,
    Observation,
    ObservationSequence,
    PLUS_INF,
    SimpleContext,
    ContextSet,
    TagSet,
    ValidationError,
    kind_of,
    make_observation,
    no_observation,
    to_source,
    zero_observation,
)

EMPTY_CONTEXT = SimpleContext()
DEFAULT_DIMENSION = "d"
DEFAULT_THRESHOLD = 0.5

_FORENSIC = (Observation, ObservationSequence, EvidentialStatement)

# Reserved context dimensions for forensic navigation; "~" cannot occur
# in a source identifier, so user dimensions can never collide.
CURRENT_OBSERVATION = "~o"
CURRENT_SEQUENCE = "~os"
CURRENT_STATEMENT = "~es"

_SENTINELS = {"eod": EOD, "bod": BOD, "INF+": PLUS_INF, "INF-": MINUS_INF}


class EvaluationError(FlucidError):
    def __init__(self, message: str, span=None):
        super().__init__(message)
        self.span = span


@dataclass(frozen=True)
class Hypothesis:
    """A declared run: elements newest first, each with the event that
    produced it from its (older) successor in the tuple."""
    items: Tuple[Tuple[Any, Optional[str]], ...]


class Thunk:
    """Lazy binding of a formal: an argument expression closed over the
    caller's frame, or an already-computed value."""

    __slots__ = ("expr", "frame", "value", "has_value")

    def __init__(self, expr=None, frame=None, value=None, has_value=False):
        self.expr = expr
        self.frame = frame
        self.value = value
        self.has_value = has_value

    @staticmethod
    def of_value(value) -> "Thunk":
        return Thunk(value=value, has_value=True)


class Frame:
    __slots__ = ("id", "parent", "bindings")
    _ids = itertools.count(1)

    def __init__(self, parent: Optional["Frame"],
                 bindings: Dict[str, Thunk]):
        self.id = next(Frame._ids)
        self.parent = parent
        self.bindings = bindings

    def lookup(self, name: str) -> Optional[Thunk]:
        frame: Optional[Frame] = self
        while frame is not None:
            hit = frame.bindings.get(name)
            if hit is not None:
                return hit
            frame = frame.parent
        return None


_ROOT = Frame(None, {})
_ROOT.id = 0


class Warehouse:
    """Demand store: first value wins, a differing re-store is a bug."""

    def __init__(self) -> None:
        self._store: Dict[Any, Any] = {}
        self._lock = threading.Lock()

    def get(self, key):
        return self._store.get(key, _MISS)

    def put(self, key, value):
        with self._lock:
            old = self._store.setdefault(key, value)
        if old is not value and old != value:
            raise EvaluationError(
                "warehouse overwrite for %r: %r vs %r" % (key, old, value))
        return old

    def __len__(self) -> int:
        return len(self._store)


class _Miss:
    __repr__ = lambda self: "<miss>"          # noqa: E731


_MISS = _Miss()


def _is_sentinel(v: Any) -> bool:
    return v is EOD or v is BOD


def _truthy(v: Any) -> bool:
    if isinstance(v, bool):
        return v
    if isinstance(v, (int, float)):
        return v != 0
    raise EvaluationError(
        "a condition must be a truth value, got %s" % kind_of(v))


_RECURSION_LIMIT = 12000


class Evaluator:
    def __init__(self, analysis: Analysis, *,
                 threshold: float = DEFAULT_THRESHOLD,
                 horizon: Optional[int] = None,
                 trace: Optional[Callable[[str], None]] = None,
                 max_scan: int = 10000,
                 max_depth: int = 3000,
                 jobs: int = 1):
        self.analysis = analysis
        self.env = analysis.env
        self.threshold = threshold
        self.horizon = horizon
        self.trace = trace
        self.max_scan = max_scan
        self.max_depth = max_depth
        self.jobs = max(1, jobs)
        self.warehouse = Warehouse()
        self._local = threading.local()     # per-thread demand chain
        self._dims: Dict[str, TagSet] = {}
        self._machines: Dict[Any, era.StateMachine] = {}
        self._pool = (ThreadPoolExecutor(max_workers=self.jobs)
                      if self.jobs > 1 else None)

    # -- entry points ------------------------------------------------------

    def run(self, context: Optional[SimpleContext] = None) -> Any:
        ctx = context if context is not None else EMPTY_CONTEXT
        previous = sys.getrecursionlimit()
        if previous < _RECURSION_LIMIT:
            sys.setrecursionlimit(_RECURSION_LIMIT)
        try:
            return self.eval(self.analysis.tree, ctx, _ROOT)
        except RecursionError:
            raise EvaluationError(
                "demand depth exceeded; a definition recurses too deeply "
                "for this interpreter")
        finally:
            if previous < _RECURSION_LIMIT:
                sys.setrecursionlimit(previous)

    # -- demands -----------------------------------------------------------

    def _chain(self) -> List[Any]:
        chain = getattr(self._local, "chain", None)
        if chain is None:
            chain = []
            self._local.chain = chain
            self._local.chain_set = set()
        return chain

    def demand(self, name: str, ctx: SimpleContext, frame: Frame) -> Any:
        key = (name, ctx, frame.id)
        hit = self.warehouse.get(key)
        if hit is not _MISS:
            return hit
        chain = self._chain()
        chain_set = self._local.chain_set
        if key in chain_set:
            start = chain.index(key)
            cycle = [k[0] for k in chain[start:]] + [name]
            raise EvaluationError(
                "cyclic definition: %s" % " -> ".join(cycle))
        chain.append(key)
        chain_set.add(key)
        try:
            value = self._define(name, ctx, frame)
        finally:
            chain.pop()
            chain_set.discard(key)
        value = self.warehouse.put(key, value)
        if self.trace is not None:
            self.trace("DEMAND %s @ %s -> %s"
                       % (name, to_source(ctx), _show(value)))
        return value

    def _define(self, name: str, ctx: SimpleContext, frame: Frame) -> Any:
        defn = self.env[name]
        node = defn.node
        if defn.kind == "var":
            return self.eval(node.expr, ctx, frame)
        if defn.kind == "obs":
            return self._observation_value(node.value, ctx, frame)
        if defn.kind == "os":
            return self._sequence_value(
                self.eval(node.value, ctx, frame), defn.source)
        if defn.kind == "es":
            return self._statement_value(
                self.eval(node.value, ctx, frame), defn.source)
        raise EvaluationError("cannot demand %s '%s'" % (defn.kind, name))

    # -- generic dispatch ----------------------------------------------------

    def eval(self, node: N.Node, ctx: SimpleContext, frame: Frame) -> Any:
        depth = getattr(self._local, "depth", 0) + 1
        if depth > self.max_depth:
            raise EvaluationError(
                "demand depth exceeded; a stream is probably unbounded "
                "in the direction being scanned")
        self._local.depth = depth
        try:
            return self._dispatch[type(node)](self, node, ctx, frame)
        finally:
            self._local.depth = depth - 1

    # -- literals ------------------------------------------------------------

    def _e_IntLit(self, node, ctx, frame):
        return node.value

    def _e_RealLit(self, node, ctx, frame):
        return node.value

    def _e_StringLit(self, node, ctx, frame):
        return node.value

    def _e_BoolLit(self, node, ctx, frame):
        return node.value

    def _e_SentinelLit(self, node, ctx, frame):
        return _SENTINELS[node.name]

    def _e_NoObsLit(self, node, ctx, frame):
        return no_observation()

    def _e_ZeroObs(self, node, ctx, frame):
        return zero_observation(self.eval(node.prop, ctx, frame))

    def _e_Described(self, node, ctx, frame):
        # the free-text annotation matters when an observation is built;
        # elsewhere the description is presentation only
        return self.eval(node.expr, ctx, frame)

    def _e_TupleLit(self, node, ctx, frame):
        return tuple(self.eval(item, ctx, frame) for item in node.items)

    def _e_BracketLit(self, node, ctx, frame):
        if node.entries and all(e.key is not None for e in node.entries):
            pairs = []
            for entry in node.entries:
                pairs.append((self._key_name(entry.key),
                              self.eval(entry.value, ctx, frame)))
            return SimpleContext(pairs)
        return tuple(self.eval(e.value, ctx, frame) for e in node.entries)

    def _key_name(self, key: N.Node) -> str:
        if isinstance(key, N.Ident):
            return key.name
        raise EvaluationError("a context key must be a dimension name")

    def _e_BraceLit(self, node, ctx, frame):
        values = [self.eval(item, ctx, frame) for item in node.items]
        if values and all(isinstance(v, _FORENSIC) for v in values):
            if all(isinstance(v, Observation) for v in values):
                return ObservationSequence(tuple(values))
            return EvidentialStatement(
                tuple(self._sequence_value(v, None) for v in values))
        if values and all(isinstance(v, SimpleContext) for v in values):
            return ContextSet(values)
        return tuple(values)

    def _e_RangeLit(self, node, ctx, frame):
        lo = self.eval(node.lo, ctx, frame)
        hi = self.eval(node.hi, ctx, frame)
        step = self.eval(node.step, ctx, frame) if node.step else 1
        return TagSet.from_range(lo, hi, step)

    def _e_AngleTuple(self, node, ctx, frame):
        dim = node.dim.name if isinstance(node.dim, N.Ident) \
            else DEFAULT_DIMENSION
        idx = self._index(ctx.tag(dim, 0))
        if idx < 0:
            return BOD
        if idx >= len(node.items):
            return EOD
        return self.eval(node.items[idx], ctx, frame)

    # -- identifiers and navigation -------------------------------------------

    def _e_Ident(self, node, ctx, frame):
        bound = frame.lookup(node.name)
        if bound is not None:
            if bound.has_value:
                return bound.value
            return self.eval(bound.expr, ctx, bound.frame)
        defn = self.env.get(node.name)
        if defn is None:
            raise EvaluationError("'%s' has no value here" % node.name,
                                  node.span)
        if defn.kind in ("var", "obs", "os", "es"):
            return self.demand(node.name, ctx, frame)
        if defn.kind == "dim":
            return self._dim_tags(node.name)
        if defn.kind == "func":
            return FunctionHandle(name=defn.unique,
                                  dim_params=defn.dim_params,
                                  params=defn.params, payload=defn)
        raise EvaluationError(
            "%s '%s' is used outside its function" % (defn.kind, defn.source),
            node.span)

    def _dim_tags(self, name: str) -> TagSet:
        cached = self._dims.get(name)
        if cached is not None:
            return cached
        defn = self.env[name]
        decl = defn.node
        if decl.tags is not None:
            v = self.eval(decl.tags, EMPTY_CONTEXT, _ROOT)
            tags = v if isinstance(v, TagSet) else TagSet(
                ordering="ordered" if "ordered" in defn.flags else "unordered",
                tags=tuple(v))
        elif decl.value is not None:
            v = self.eval(decl.value, EMPTY_CONTEXT, _ROOT)
            if not isinstance(v, TagSet):
                raise EvaluationError(
                    "dimension '%s' must be defined by a tag set"
                    % defn.source)
            tags = v
        else:
            tags = TagSet.naturals()
        self._dims[name] = tags
        return tags

    def _e_HashExpr(self, node, ctx, frame):
        target = node.target
        if target is None:
            return ctx
        if isinstance(target, N.Ident):
            defn = self.env.get(target.name)
            if defn is None or defn.kind in ("dim", "dimformal"):
                bound = frame.lookup(target.name) if defn else None
                if bound is None:
                    return ctx.tag(target.name, 0)
        return _hash_view(self.eval(target, ctx, frame))

    def _e_AtExpr(self, node, ctx, frame):
        if node.dim is not None:
            idx = self.eval(node.right, ctx, frame)
            if _is_sentinel(idx):
                return idx
            return self.eval(node.left, ctx.with_pair(node.dim, idx), frame)
        place = self.eval(node.right, ctx, frame)
        if _is_sentinel(place):
            return place
        if isinstance(place, SimpleContext):
            return self.eval(node.left, calculus.override(ctx, place), frame)
        if isinstance(place, ContextSet):
            return self._at_each(node.left, ctx, frame, tuple(place))
        if isinstance(place, tuple) and place and \
                all(isinstance(m, SimpleContext) for m in place):
            return self._at_each(node.left, ctx, frame,
                                 tuple(ContextSet(place)))
        if isinstance(place, Observation):
            if isinstance(place.w, (int, float)) and \
                    place.w < self.threshold:
                return EOD                     # not credible enough to enter
            inner = ctx
            if isinstance(place.property, SimpleContext):
                inner = calculus.override(inner, place.property)
            return self.eval(node.left,
                             inner.with_pair(CURRENT_OBSERVATION, place),
                             frame)
        if isinstance(place, ObservationSequence):
            return self.eval(node.left,
                             ctx.with_pair(CURRENT_SEQUENCE, place), frame)
        if isinstance(place, EvidentialStatement):
            return self.eval(node.left,
                             ctx.with_pair(CURRENT_STATEMENT, place), frame)
        if isinstance(place, int) and not isinstance(place, bool):
            return self.eval(node.left,
                             ctx.with_pair(DEFAULT_DIMENSION, place), frame)
        raise EvaluationError(
            "navigation target must be a context or forensic value, "
            "got %s" % kind_of(place), node.span)

    def _at_each(self, left, ctx, frame, members):
        if self._pool is not None and len(members) > 1:
            futures = [self._pool.submit(
                self.eval, left, calculus.override(ctx, m), frame)
                for m in members]
            return tuple(f.result() for f in futures)
        return tuple(self.eval(left, calculus.override(ctx, m), frame)
                     for m in members)

    def _e_Dot(self, node, ctx, frame):
        base = self.eval(node.base, ctx, frame)
        if _is_sentinel(base):
            return base
        member = node.member
        if isinstance(member, N.HashExpr):
            return _hash_view(base)
        name = member.name
        if isinstance(base, Observation):
            if name in ("property", "min", "max", "w", "t"):
                return getattr(base, name)
            raise EvaluationError(
                "an observation has no member '%s'" % name, node.span)
        if isinstance(base, EvidentialStatement):
            for os in base.sequences:
                if os.name == name:
                    return os
            raise EvaluationError(
                "statement has no sequence named '%s'" % name, node.span)
        if isinstance(base, SimpleContext):
            if base.has(name):
                return base.tag(name)
            raise EvaluationError(
                "context has no dimension '%s'" % name, node.span)
        if isinstance(base, tuple) and len(base) == 5:
            fields = ("property", "min", "max", "w", "t")
            if name in fields:
                return base[fields.index(name)]
        raise EvaluationError(
            "%s has no member '%s'" % (kind_of(base), name), node.span)

    # -- conditionals and operators -------------------------------------------

    def _e_IfExpr(self, node, ctx, frame):
        cond = self.eval(node.cond, ctx, frame)
        if _is_sentinel(cond):
            return cond
        if _truthy(cond):
            return self.eval(node.then_branch, ctx, frame)
        return self.eval(node.else_branch, ctx, frame)

    def _e_UnaryOp(self, node, ctx, frame):
        v = self.eval(node.operand, ctx, frame)
        if _is_sentinel(v):
            return v
        op = node.op
        if op == "-":
            self._need_number(v, "-")
            return -v
        if op == "+":
            self._need_number(v, "+")
            return v
        if op == "!":
            return not _truthy(v)
        if op == "~":
            if not isinstance(v, int) or isinstance(v, bool):
                raise EvaluationError("~ needs an integer", node.span)
            return ~v
        raise AssertionError(op)

    def _need_number(self, v, op):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise EvaluationError(
                "'%s' is not defined on %s" % (op, kind_of(v)))

    def _e_BinOp(self, node, ctx, frame):
        op = node.op
        if op == "&&":
            left = self.eval(node.left, ctx, frame)
            if _is_sentinel(left):
                return left
            if not _truthy(left):
                return False
            right = self.eval(node.right, ctx, frame)
            if _is_sentinel(right):
                return right
            return _truthy(right)
        if op == "||":
            left = self.eval(node.left, ctx, frame)
            if _is_sentinel(left):
                return left
            if _truthy(left):
                return True
            right = self.eval(node.right, ctx, frame)
            if _is_sentinel(right):
                return right
            return _truthy(right)
        a = self.eval(node.left, ctx, frame)
        if _is_sentinel(a):
            return a
        b = self.eval(node.right, ctx, frame)
        if _is_sentinel(b):
            return b
        return self._scalar_op(op, a, b, node.span)

    def _scalar_op(self, op, a, b, span):
        if op == "==":
            return _values_equal(a, b)
        if op == "!=":
            return not _values_equal(a, b)
        if op in ("<", "<=", ">", ">="):
            try:
                if op == "<":
                    return a < b
                if op == "<=":
                    return a <= b
                if op == ">":
                    return a > b
                return a >= b
            except TypeError:
                raise EvaluationError(
                    "'%s' is not defined between %s and %s"
                    % (op, kind_of(a), kind_of(b)), span)
        if op == "+" and isinstance(a, str) and isinstance(b, str):
            return a + b
        if op in ("+", "-", "*", "/", "%"):
            self._need_number(a, op)
            self._need_number(b, op)
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if op == "/":
                if b == 0:
                    raise EvaluationError("division by zero", span)
                out = a / b
                if isinstance(a, int) and isinstance(b, int) \
                        and a % b == 0:
                    return a // b
                return out
            if b == 0:
                raise EvaluationError("modulo by zero", span)
            return a % b
        raise EvaluationError("operator '%s' is not defined" % op, span)

    def _e_CtxBin(self, node, ctx, frame):
        op = node.op
        if op in ("projection", "hiding"):
            target = self.eval(node.left, ctx, frame)
            return calculus.filter(op, target,
                                   self._selector(node.right, ctx, frame))
        a = self.eval(node.left, ctx, frame)
        b = self.eval(node.right, ctx, frame)
        if _is_sentinel(a):
            return a
        if _is_sentinel(b):
            return b
        if op in ("in", "isSubContext"):
            if isinstance(b, TagSet) and not isinstance(a, TagSet):
                return a in b
            if isinstance(b, (tuple, frozenset, set)) and \
                    not isinstance(a, (tuple, frozenset, set)):
                return a in b
            return calculus.membership(op, a, b)
        if op in ("difference", "intersection", "union"):
            return calculus.set_like(op, a, b)
        if op == "override":
            return calculus.override(a, b)
        raise AssertionError(op)

    def _selector(self, node, ctx, frame):
        # {d, e} selects the dimensions themselves, not their tag sets
        if isinstance(node, N.BraceLit) and node.items and all(
                isinstance(i, N.Ident) and
                self.env.get(i.name) is not None and
                self.env[i.name].kind == "dim"
                for i in node.items):
            return tuple(i.name for i in node.items)
        return self.eval(node, ctx, frame)

    # -- stream operators ------------------------------------------------------

    def _elem(self, operand, ctx, frame, dim, index):
        if index < 0:
            return BOD
        return self.eval(operand, ctx.with_pair(dim, index), frame)

    def _index(self, v) -> int:
        if isinstance(v, bool) or not isinstance(v, int):
            raise EvaluationError(
                "a stream index must be an integer, got %s" % kind_of(v))
        return v

    def _scan(self, operand, ctx, frame, dim) -> List[Any]:
        """Everything up to the first end marker, for bounded operators.

        A begin marker can appear as an element (prev X starts with one)
        and is kept as a value; only the end marker terminates.
        """
        out: List[Any] = []
        for i in range(self.max_scan):
            v = self._elem(operand, ctx, frame, dim, i)
            if v is EOD:
                return out
            out.append(v)
        raise EvaluationError(
            "stream did not end within %d elements; bounded input is "
            "required here" % self.max_scan)

    def _e_StreamUnary(self, node, ctx, frame):
        op = node.op
        dim = node.dim or DEFAULT_DIMENSION
        x = node.operand
        if op == "iseod":
            return self.eval(x, ctx, frame) is EOD
        if op == "isbod":
            return self.eval(x, ctx, frame) is BOD
        if op == "neg":
            v = self.eval(x, ctx, frame)
            if _is_sentinel(v):
                return v
            self._need_number(v, "neg")
            return -v
        if op == "not":
            v = self.eval(x, ctx, frame)
            if _is_sentinel(v):
                return v
            return not _truthy(v)
        if op in ("nnext", "nprev"):
            raise EvaluationError(
                "'%s' has no defined semantics" % op, node.span)
        if op == "first":
            return self._elem(x, ctx, frame, dim, 0)
        if op == "second":
            return self._elem(x, ctx, frame, dim, 1)
        cur = self._index(ctx.tag(dim, 0))
        if op == "next":
            return self._elem(x, ctx, frame, dim, cur + 1)
        if op == "prev":
            return self._elem(x, ctx, frame, dim, cur - 1)
        if op == "last":
            xs = self._scan(x, ctx, frame, dim)
            return xs[-1] if xs else EOD
        if op == "prelast":
            xs = self._scan(x, ctx, frame, dim)
            return xs[-2] if len(xs) >= 2 else BOD
        raise AssertionError(op)

    def _e_StreamBin(self, node, ctx, frame):
        if node.annotation is not None:
            return self._hypothesis(node, ctx, frame)
        op = node.op
        dim = node.dim or DEFAULT_DIMENSION
        x, y = node.left, node.right
        if op in ("nfby", "npby"):
            raise EvaluationError(
                "'%s' has no defined semantics" % op, node.span)
        if op == "fby":
            return self._fby(x, y, ctx, frame, dim)
        if op == "pby":
            return self._pby(x, y, ctx, frame, dim)
        if op in ("wvr", "nwvr"):
            return self._wvr(x, y, ctx, frame, dim, op == "nwvr")
        if op in ("upon", "nupon"):
            return self._upon(x, y, ctx, frame, dim, op == "nupon")
        if op in ("asa", "nasa"):
            return self._asa(x, y, ctx, frame, dim, op == "nasa")
        if op in ("ala", "nala"):
            return self._ala(x, y, ctx, frame, dim, op == "nala")
        if op in ("rwvr", "nrwvr", "rupon", "nrupon"):
            return self._reversed_op(x, y, ctx, frame, dim, op)
        if op in ("and", "or", "nand", "nor"):
            return self._short_logic(x, y, ctx, frame, op)
        if op in ("xor", "nxor"):
            a = self.eval(x, ctx, frame)
            if _is_sentinel(a):
                return a
            b = self.eval(y, ctx, frame)
            if _is_sentinel(b):
                return b
            one = _truthy(a) != _truthy(b)
            return int(one if op == "xor" else not one)
        if op in ("band", "bor", "bxor"):
            a = self.eval(x, ctx, frame)
            if _is_sentinel(a):
                return a
            b = self.eval(y, ctx, frame)
            if _is_sentinel(b):
                return b
            for v in (a, b):
                if isinstance(v, bool) or not isinstance(v, int):
                    raise EvaluationError(
                        "'%s' needs integers, got %s" % (op, kind_of(v)),
                        node.span)
            if op == "band":
                return a & b
            if op == "bor":
                return a | b
            return a ^ b
        if op == "combine":
            return self._combine(self.eval(x, ctx, frame),
                                 self.eval(y, ctx, frame))
        if op == "product":
            return self._product(self.eval(x, ctx, frame),
                                 self.eval(y, ctx, frame))
        raise AssertionError(op)

    def _fby(self, x, y, ctx, frame, dim):
        i = self._index(ctx.tag(dim, 0))
        if i < 0:
            return BOD
        if i == 0:
            lv = self.eval(x, ctx, frame)
            if isinstance(lv, _FORENSIC):
                rv = self.eval(y, ctx, frame)
                return self._prepend(lv, rv)
            return lv
        return self.eval(y, ctx.with_pair(dim, i - 1), frame)

    def _prepend(self, lv, rv):
        head = self._sequence_value(lv, None).observations
        tail = self._sequence_value(rv, None).observations
        name = rv.name if isinstance(rv, ObservationSequence) else None
        return ObservationSequence(head + tail, name=name)

    def _pby(self, x, y, ctx, frame, dim):
        i = self._index(ctx.tag(dim, 0))
        yv = self._elem(y, ctx, frame, dim, i)
        if yv is not EOD:
            return yv
        before = self._elem(y, ctx, frame, dim, i - 1)
        if before is EOD:
            return EOD
        return self._elem(x, ctx, frame, dim, 0)

    def _wvr(self, x, y, ctx, frame, dim, negate):
        target = self._index(ctx.tag(dim, 0))
        if target < 0:
            return BOD
        count = -1
        for j in range(self.max_scan):
            yv = self._elem(y, ctx, frame, dim, j)
            if _is_sentinel(yv):
                return yv
            if _truthy(yv) != negate:
                count += 1
                if count == target:
                    return self._elem(x, ctx, frame, dim, j)
        raise EvaluationError(
            "filter scanned %d elements without finding index %d"
            % (self.max_scan, target))

    def _upon(self, x, y, ctx, frame, dim, negate):
        target = self._index(ctx.tag(dim, 0))
        if target < 0:
            return BOD
        advanced = 0
        for j in range(target):
            yv = self._elem(y, ctx, frame, dim, j)
            if _is_sentinel(yv):
                return yv
            if _truthy(yv) != negate:
                advanced += 1
        return self._elem(x, ctx, frame, dim, advanced)

    def _asa(self, x, y, ctx, frame, dim, negate):
        for j in range(self.max_scan):
            yv = self._elem(y, ctx, frame, dim, j)
            if _is_sentinel(yv):
                return yv
            if _truthy(yv) != negate:
                return self._elem(x, ctx, frame, dim, j)
        raise EvaluationError(
            "no matching element within %d steps" % self.max_scan)

    def _ala(self, x, y, ctx, frame, dim, negate):
        # the last element of the filtered stream: an end marker in
        # either the guard or a kept sample closes that stream
        best = _MISS
        for j in range(self.max_scan):
            yv = self._elem(y, ctx, frame, dim, j)
            if yv is EOD:
                return EOD if best is _MISS else best
            if yv is BOD:
                return BOD
            if _truthy(yv) != negate:
                xv = self._elem(x, ctx, frame, dim, j)
                if xv is EOD:
                    return EOD if best is _MISS else best
                best = xv
        raise EvaluationError(
            "stream did not end within %d elements; bounded input is "
            "required here" % self.max_scan)

    def _reversed_op(self, x, y, ctx, frame, dim, op):
        xs = self._scan(x, ctx, frame, dim)
        ys = self._scan(y, ctx, frame, dim)
        rx = xs[::-1]
        ry = ys[::-1]
        i = self._index(ctx.tag(dim, 0))
        if i < 0:
            return BOD
        negate = op in ("nrwvr", "nrupon")
        if op in ("rwvr", "nrwvr"):
            count = -1
            for j, yv in enumerate(ry):
                if _is_sentinel(yv):
                    return BOD                  # poisoned guard element
                if _truthy(yv) != negate:
                    count += 1
                    if count == i:
                        return rx[j] if j < len(rx) else BOD
            return BOD                          # reverse exhaustion
        advanced = 0
        for j in range(i):
            if j >= len(ry):
                return BOD
            if _is_sentinel(ry[j]):
                return BOD
            if _truthy(ry[j]) != negate:
                advanced += 1
        return rx[advanced] if advanced < len(rx) else BOD

    def _short_logic(self, x, y, ctx, frame, op):
        a = self.eval(x, ctx, frame)
        if _is_sentinel(a):
            return a
        at = _truthy(a)
        if op in ("and", "nand") and not at:
            return 0 if op == "and" else 1
        if op in ("or", "nor") and at:
            return 1 if op == "or" else 0
        b = self.eval(y, ctx, frame)
        if _is_sentinel(b):
            return b
        bt = _truthy(b)
        if op == "and":
            return int(bt)
        if op == "nand":
            return int(not bt)
        if op == "or":
            return int(bt)
        return int(not bt)

    # -- calls, functions, claims ----------------------------------------------

    def _e_Call(self, node, ctx, frame):
        func = node.func
        dim_nodes: Tuple[N.Node, ...] = ()
        if isinstance(func, N.Subscript):
            dim_nodes = func.indices
            func = func.base
        if isinstance(func, N.Ident):
            name = func.name
            if name not in self.env:
                if name in ("bel", "pl"):
                    return dstme.credibility(
                        name, self.eval(node.args[0], ctx, frame))
                if name == "combine":
                    return self._combine(
                        self.eval(node.args[0], ctx, frame),
                        self.eval(node.args[1], ctx, frame))
                if name == "product":
                    return self._product(
                        self.eval(node.args[0], ctx, frame),
                        self.eval(node.args[1], ctx, frame))
                raise EvaluationError("'%s' has no value here" % name,
                                      node.span)
            defn = self.env[name]
            if defn.kind == "func":
                return self._call(defn, dim_nodes, node.args, ctx, frame,
                                  node.span)
        handle = self.eval(func, ctx, frame)
        if isinstance(handle, FunctionHandle):
            return self._call(self.env[handle.name], dim_nodes, node.args,
                              ctx, frame, node.span)
        raise EvaluationError(
            "%s is not callable" % kind_of(handle), node.span)

    def _call(self, defn, dim_nodes, arg_nodes, ctx, frame, span):
        if len(arg_nodes) != len(defn.params) or \
                len(dim_nodes) != len(defn.dim_params):
            raise EvaluationError(
                "'%s' takes [%d](%d) arguments" % (
                    defn.source, len(defn.dim_params), len(defn.params)),
                span)
        if len(defn.params) == 1 and defn.dim_params:
            argv = self.eval(arg_nodes[0], ctx, frame)
            if isinstance(argv, (EvidentialStatement, ObservationSequence)):
                return self._claim(defn, dim_nodes, argv, ctx, frame)
            bindings = {defn.params[0]: Thunk.of_value(argv)}
        else:
            bindings = {p: Thunk(expr=a, frame=frame)
                        for p, a in zip(defn.params, arg_nodes)}
        for p, a in zip(defn.dim_params, dim_nodes):
            bindings[p] = Thunk(expr=a, frame=frame)
        return self.eval(defn.node.body, ctx, Frame(frame, bindings))

    # claim evaluation

    def _claim(self, defn, dim_nodes, claim_value, ctx, frame):
        es = self._statement_value(claim_value, None)
        dim_values = tuple(self.eval(d, ctx, frame) for d in dim_nodes)
        fsm = self._machine(defn, dim_values, ctx, frame)
        chains = self._declared_chains(defn)
        if chains is not None:
            validated = []
            for chain in chains:
                hyp = self._hypothesis(chain, ctx, frame)
                steps = _validate_hypothesis(fsm, hyp)
                if steps is not None:
                    validated.append(steps)
            return era.ClaimResult(
                consistent=bool(validated),
                explanations=tuple(
                    era.MSPR(lens=((len(c),),),
                             computations=frozenset({c}))
                    for c in validated),
                backtraces=tuple(validated),
                horizon_warning=False,
                horizon=max((len(c) for c in validated), default=0),
                route="declared")
        return era.check_claim(fsm, _era_statement(fsm, es),
                               horizon=self.horizon)

    def _machine(self, claim_defn, dim_values, ctx, frame):
        candidates = sorted(
            (d for d in self.env.values()
             if d.kind == "func" and len(d.params) == 2 and d.dim_params
             and d.unique != claim_defn.unique),
            key=lambda d: d.unique)
        errors = []
        for cand in candidates:
            key = (cand.unique, tuple(repr(v) for v in dim_values))
            if key in self._machines:
                return self._machines[key]
            fsm = _tabulate_static(cand, self.env)
            if fsm is None:
                try:
                    fsm = self._tabulate_dynamic(cand, dim_values, frame)
                except (EvaluationError, ValidationError,
                        era.ReconstructionError) as exc:
                    errors.append("%s: %s" % (cand.source, exc))
                    fsm = None
            if fsm is not None:
                self._machines[key] = fsm
                return fsm
        detail = ("; ".join(errors)) or "none declared"
        raise EvaluationError(
            "no transition function could be tabulated into a state "
            "machine (%s)" % detail)

    def _tabulate_dynamic(self, cand, dim_values, frame):
        """Interpret a two-argument transition function over every
        (event, cell pair) and read the successor pair off its result
        stream.  A result equal to the current pair is the function's
        'nothing happens' fallback, not a declared transition."""
        body = cand.node.body
        events = _event_literals(body, cand.params[0])
        if not events:
            return None
        cells = list(dict.fromkeys(itertools.chain(
            *(ts.tags for ts in dim_values
              if isinstance(ts, TagSet) and ts.tags),
            (lit for lit in _string_literals(body) if lit not in events))))
        if not cells:
            return None
        dim_bindings = {p: Thunk.of_value(v)
                        for p, v in zip(cand.dim_params, dim_values)}
        edges = {}
        chainable = set()
        for event in events:
            for pair in itertools.product(cells, repeat=2):
                stream = N.AngleTuple(
                    N.Ident(DEFAULT_DIMENSION),
                    (N.StringLit(pair[0]), N.StringLit(pair[1])))
                bindings = dict(dim_bindings)
                bindings[cand.params[0]] = Thunk.of_value(event)
                bindings[cand.params[1]] = Thunk(expr=stream, frame=_ROOT)
                call_frame = Frame(frame, bindings)
                fst = self.eval(cand.node.body,
                                SimpleContext({DEFAULT_DIMENSION: 0}),
                                call_frame)
                snd = self.eval(cand.node.body,
                                SimpleContext({DEFAULT_DIMENSION: 1}),
                                call_frame)
                source = _pair_state(pair)
                if _is_sentinel(fst) or _is_sentinel(snd):
                    edges[(event, source)] = source
                    continue
                target = _pair_state((fst, snd))
                edges[(event, source)] = target
                if target != source:
                    chainable.add((event, source))
        if not chainable:
            return None
        states = tuple(_pair_state(p)
                       for p in itertools.product(cells, repeat=2))
        properties = {
            cell: era.Property(name=cell,
                               states=frozenset({_pair_state((cell, cell))}))
            for cell in cells}
        return era.StateMachine(states=states, events=tuple(events),
                                psi=edges, properties=properties,
                                chainable=frozenset(chainable))

    def _declared_chains(self, defn):
        body = defn.node.body
        while isinstance(body, N.WhereExpr):
            body = body.body
        expr = self._static_expr(body)
        if not isinstance(expr, N.BracketLit) or not expr.entries:
            return None
        chains = []
        for entry in expr.entries:
            if entry.key is not None:
                return None
            item = self._static_expr(entry.value)
            if not (isinstance(item, N.StreamBin) and item.op == "pby"
                    and item.annotation is not None):
                return None
            chains.append(item)
        return chains

    def _static_expr(self, node):
        seen = set()
        while isinstance(node, N.Ident):
            if node.name in seen:
                return node
            seen.add(node.name)
            defn = self.env.get(node.name)
            if defn is None or defn.kind != "var":
                return node
            node = defn.node.expr
        return node

    def _hypothesis(self, node, ctx, frame) -> Hypothesis:
        items: List[Tuple[Any, Optional[str]]] = []
        cursor: N.Node = node
        while (isinstance(cursor, N.StreamBin) and cursor.op == "pby"
               and cursor.annotation is not None):
            items.append((self.eval(cursor.left, ctx, frame),
                          _annotation_event(cursor.annotation)))
            cursor = cursor.right
        items.append((self.eval(cursor, ctx, frame), None))
        return Hypothesis(tuple(items))

    # -- forensic operators ------------------------------------------------------

    def _combine(self, a, b):
        return calculus.union(self._lift_forensic(a),
                              self._lift_forensic(b))

    def _product(self, a, b):
        a = self._sequence_value(self._lift_forensic(a), None)
        b = self._sequence_value(self._lift_forensic(b), None)
        return EvidentialStatement(tuple(
            ObservationSequence((oa, ob))
            for oa in a.observations for ob in b.observations))

    def _lift_forensic(self, v):
        if isinstance(v, _FORENSIC):
            return v
        if isinstance(v, (SimpleContext, ContextSet, str, int, float, bool)):
            from .values import lift
            return lift(v)
        raise EvaluationError(
            "a forensic operator needs forensic operands, got %s"
            % kind_of(v))

    # -- remaining expression forms ------------------------------------------------

    def _e_Select(self, node, ctx, frame):
        idx = self.eval(node.index, ctx, frame)
        if _is_sentinel(idx):
            return idx
        dim = DEFAULT_DIMENSION
        if isinstance(node.source, N.AngleTuple) and \
                isinstance(node.source.dim, N.Ident):
            dim = node.source.dim.name
        return self.eval(node.source,
                         ctx.with_pair(dim, self._index(idx)), frame)

    def _e_BoxExpr(self, node, ctx, frame):
        names = []
        for d in node.dims:
            if not isinstance(d, N.Ident):
                raise EvaluationError("Box needs dimension names", node.span)
            names.append(d.name)
        axes = []
        for name in names:
            tags = self._dim_tags(name) if name in self.env else None
            if tags is None or not tags.is_finite():
                raise EvaluationError(
                    "Box needs finite declared dimensions; '%s' is not"
                    % name, node.span)
            axes.append(tags.tags)
        members = []
        for combo in itertools.product(*axes):
            inner = ctx
            for name, tag in zip(names, combo):
                inner = inner.with_pair(name, tag)
            ok = self.eval(node.predicate, inner, frame)
            if not _is_sentinel(ok) and _truthy(ok):
                members.append(SimpleContext(zip(names, combo)))
        return ContextSet(members)

    def _e_Embed(self, node, ctx, frame):
        raise EvaluationError(
            "embed needs an external program store, which this "
            "evaluator does not provide", node.span)

    def _e_Subscript(self, node, ctx, frame):
        raise EvaluationError(
            "a dimensional subscript is only meaningful in a call",
            node.span)

    def _e_WhereExpr(self, node, ctx, frame):
        # declarations were flattened into the environment by analysis
        return self.eval(node.body, ctx, frame)

    # -- forensic value coercions -----------------------------------------------

    def _observation_value(self, value_node, ctx, frame):
        if value_node is None:
            return no_observation()
        if isinstance(value_node, N.TupleLit):
            parts = []
            description = None
            for pos, item in enumerate(value_node.items):
                if pos == 0 and isinstance(item, N.Described):
                    description = item.text
                    parts.append(self.eval(item.expr, ctx, frame))
                else:
                    parts.append(self.eval(item, ctx, frame))
            if len(parts) > 5:
                raise EvaluationError(
                    "an observation takes at most five components")
            return make_observation(*parts, description=description)
        v = self.eval(value_node, ctx, frame)
        if isinstance(v, Observation):
            return v
        if isinstance(v, tuple) and 1 <= len(v) <= 5:
            return make_observation(*v)
        return make_observation(v)

    def _sequence_value(self, v, name) -> ObservationSequence:
        if isinstance(v, ObservationSequence):
            if name is not None and v.name != name:
                return ObservationSequence(v.observations, name=name)
            return v
        if isinstance(v, Observation):
            return ObservationSequence((v,), name=name)
        if isinstance(v, tuple):
            if _observation_shaped(v):
                return ObservationSequence(
                    (make_observation(*v),), name=name)
            obs = []
            for item in v:
                if isinstance(item, Observation):
                    obs.append(item)
                elif isinstance(item, tuple) and _observation_shaped(item):
                    obs.append(make_observation(*item))
                else:
                    obs.append(make_observation(item))
            return ObservationSequence(tuple(obs), name=name)
        raise EvaluationError(
            "cannot use %s as an observation sequence" % kind_of(v))

    def _statement_value(self, v, name) -> EvidentialStatement:
        if isinstance(v, EvidentialStatement):
            if name is not None and v.name != name:
                return EvidentialStatement(v.sequences, name=name)
            return v
        if isinstance(v, (Observation, ObservationSequence)):
            return EvidentialStatement(
                (self._sequence_value(v, None),), name=name)
        if isinstance(v, tuple):
            return EvidentialStatement(
                tuple(self._sequence_value(m, None) for m in v), name=name)
        raise EvaluationError(
            "cannot use %s as an evidential statement" % kind_of(v))

    # dispatch table (filled in below)
    _dispatch: Dict[type, Callable] = {}


Evaluator._dispatch = {
    getattr(N, attr): getattr(Evaluator, "_e_" + attr)
    for attr in dir(N)
    if isinstance(getattr(N, attr), type)
    and issubclass(getattr(N, attr), N.Node)
    and hasattr(Evaluator, "_e_" + attr)
}


# --- helpers shared with the claim machinery ---------------------------------


def _observation_shaped(v: tuple) -> bool:
    """(property, min[, max[, w[, t]]]) with a duration in slot two;
    the property itself may be any value, a nested sequence included."""
    if not 2 <= len(v) <= 5:
        return False
    if not (isinstance(v[1], int) and not isinstance(v[1], bool)):
        return False
    if len(v) >= 3 and not (v[2] is PLUS_INF or (
            isinstance(v[2], int) and not isinstance(v[2], bool))):
        return False
    if len(v) >= 4 and not isinstance(v[3], (int, float)):
        return False
    return True


def _values_equal(a, b) -> bool:
    if type(a) is bool or type(b) is bool:
        if isinstance(a, (bool, int, float)) and \
                isinstance(b, (bool, int, float)):
            return bool(a) == bool(b) and float(a) == float(b)
    try:
        return bool(a == b)
    except Exception:
        return False


def _hash_view(v: Any) -> Any:
    if isinstance(v, EvidentialStatement):
        return v.sequences
    if isinstance(v, ObservationSequence):
        return v.observations
    if isinstance(v, Observation):
        return (v.property, v.min, v.max, v.w, v.t)
    return v


def _show(v: Any) -> str:
    try:
        return to_source(v)
    except Exception:
        return repr(v)


def _annotation_event(annotation: N.BracketLit) -> str:
    event = None
    for entry in annotation.entries:
        if entry.key is not None and isinstance(entry.value, N.StringLit):
            event = entry.value.value
    if event is None:
        raise EvaluationError("a hop annotation must name its event")
    return event


def _pair_state(pair: Sequence[Any]) -> str:
    return "(%s,%s)" % (pair[0], pair[1])


def _label_state(label: str, counter: int) -> str:
    inner = label[1:-1] if label.startswith("(") and label.endswith(")") \
        else label
    return "(%d,%s)" % (counter, inner)


def _event_literals(body: N.Node, event_param: str) -> List[str]:
    """String literals compared for equality against the event formal."""
    found: List[str] = []

    def walk(node):
        if isinstance(node, N.BinOp) and node.op == "==":
            sides = (node.left, node.right)
            for a, b in (sides, sides[::-1]):
                if isinstance(a, N.Ident) and a.name == event_param and \
                        isinstance(b, N.StringLit) and \
                        b.value not in found:
                    found.append(b.value)
        if isinstance(node, N.Node):
            for value in vars(node).values():
                walk(value)
        elif isinstance(node, tuple):
            for item in node:
                walk(item)

    walk(body)
    return found


def _string_literals(body: N.Node) -> List[str]:
    found: List[str] = []

    def walk(node):
        if isinstance(node, N.StringLit) and node.value not in found:
            found.append(node.value)
        if isinstance(node, N.Node):
            for value in vars(node).values():
                walk(value)
        elif isinstance(node, tuple):
            for item in node:
                walk(item)

    walk(body)
    return found


def _tabulate_static(cand, env) -> Optional[era.StateMachine]:
    """Read a transition function written as a guard chain over
    (label, counter) state pairs without evaluating it."""
    body = cand.node.body
    seen = set()
    while True:
        if isinstance(body, N.WhereExpr):
            body = body.body
        elif isinstance(body, N.Ident) and body.name in env and \
                env[body.name].kind == "var" and body.name not in seen:
            seen.add(body.name)
            body = env[body.name].node.expr
        else:
            break
    event_param, state_param = cand.params
    edges: List[Tuple[str, str, str]] = []
    node = body
    while isinstance(node, N.IfExpr):
        match = _static_guard(node.cond, event_param, state_param)
        if match is None:
            return None
        event, source = match
        target = _static_target(node.then_branch)
        if target is None:
            return None
        edges.append((event, source, target))
        node = node.else_branch
    if not isinstance(node, N.SentinelLit) or not edges:
        return None

    events = list(dict.fromkeys(e for e, _, _ in edges))
    states = list(dict.fromkeys(
        itertools.chain(*((s, t) for _, s, t in edges))))
    psi = {}
    chainable = set()
    for event, source, target in edges:
        psi[(event, source)] = target
        if target != source:
            chainable.add((event, source))
    for event in events:
        for state in states:
            psi.setdefault((event, state), state)
    labels: Dict[str, set] = {}
    for state in states:
        label = "(" + state.split(",", 1)[1]
        labels.setdefault(label, set()).add(state)
    properties = {label: era.Property(name=label,
                                      states=frozenset(members))
                  for label, members in labels.items()}
    return era.StateMachine(states=tuple(states), events=tuple(events),
                            psi=psi, properties=properties,
                            chainable=frozenset(chainable))


def _static_guard(cond, event_param, state_param):
    if not (isinstance(cond, N.BinOp) and cond.op == "&&"):
        return None
    event = None
    state = None
    for side in (cond.left, cond.right):
        if not (isinstance(side, N.BinOp) and side.op == "=="):
            return None
        a, b = side.left, side.right
        if isinstance(b, N.Ident):
            a, b = b, a
        if not isinstance(a, N.Ident):
            return None
        if a.name == event_param and isinstance(b, N.StringLit):
            event = b.value
        elif a.name == state_param:
            state = _static_pair(b)
        else:
            return None
    if event is None or state is None:
        return None
    return event, state


def _static_pair(node) -> Optional[str]:
    if isinstance(node, N.TupleLit) and len(node.items) == 2 and \
            isinstance(node.items[0], N.StringLit) and \
            isinstance(node.items[1], N.IntLit):
        return _label_state(node.items[0].value, node.items[1].value)
    return None


def _static_target(node) -> Optional[str]:
    if isinstance(node, N.StreamBin) and node.op == "fby":
        return _static_pair(node.left)
    return _static_pair(node)


def _validate_hypothesis(fsm: era.StateMachine,
                         hyp: Hypothesis) -> Optional[era.Computation]:
    """Check a declared run against the tabulated transitions.

    Items are newest first; each item's event links its (older)
    successor item to it.  The oldest item names the starting state;
    intermediate items name states; the newest is the observation whose
    property must hold in the state the final event reaches.  Steps come
    back oldest first in the engine's convention: (event, the state the
    event occurs in), closed by a wildcard step in the terminal state,
    so the states of the steps spell out the whole run.
    """
    items = hyp.items
    if len(items) < 2:
        return None
    state = _hypothesis_state(fsm, items[-1][0])
    if state is None:
        return None
    steps: List[Tuple[str, str]] = []
    for pos in range(len(items) - 2, -1, -1):
        value, event = items[pos]
        if event is None or not fsm.fires(event, state):
            return None
        reached = fsm.psi.get((event, state))
        if reached is None:
            return None
        steps.append((event, state))
        if pos == 0:
            if isinstance(value, Observation):
                prop = era.resolve_property(fsm, value.property)
                if not prop.step_ok(era.WILDCARD, reached):
                    return None
            else:
                target = _hypothesis_state(fsm, value)
                if target is None or target != reached:
                    return None
            steps.append((era.WILDCARD, reached))
            return tuple(steps)
        target = _hypothesis_state(fsm, value)
        if target is None or target != reached:
            return None
        state = reached
    return None


def _hypothesis_state(fsm: era.StateMachine, value) -> Optional[str]:
    if isinstance(value, tuple) and len(value) == 2 and \
            isinstance(value[1], int):
        name = _label_state(str(value[0]), value[1])
    elif isinstance(value, str):
        name = value
    else:
        return None
    return name if name in fsm.states else None


def _era_statement(fsm: era.StateMachine,
                   es: EvidentialStatement) -> EvidentialStatement:
    """Rework observation properties into the engine's vocabulary: a
    tag set is an event filter, everything else resolves by name."""
    sequences = []
    for os in es.sequences:
        obs = []
        for o in os.observations:
            if isinstance(o.property, TagSet):
                tags = o.property.tags or ()
                prop = era.Property(
                    name="|".join(str(t) for t in tags),
                    allow_events=frozenset(tags))
                o = Observation(property=prop, min=o.min, max=o.max,
                                w=o.w, t=o.t, description=o.description)
            obs.append(o)
        sequences.append(ObservationSequence(tuple(obs), name=os.name))
    return EvidentialStatement(tuple(sequences), name=es.name)


# --- module-level convenience --------------------------------------------------


def evaluate(program, *, context: Optional[SimpleContext] = None,
             threshold: float = DEFAULT_THRESHOLD,
             horizon: Optional[int] = None,
             trace: Optional[Callable[[str], None]] = None,
             max_scan: int = 10000, max_depth: int = 2500,
             jobs: int = 1) -> Any:
    """Parse/analyze as needed, then evaluate the program's head."""
    if isinstance(program, str):
        program = parse(program)
    if isinstance(program, N.Node):
        program = analyze(program)
    ev = Evaluator(program, threshold=threshold, horizon=horizon,
                   trace=trace, max_scan=max_scan, max_depth=max_depth,
                   jobs=jobs)
    return ev.run(context)
