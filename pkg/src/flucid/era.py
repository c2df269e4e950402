"""Finite-state event reconstruction.

The machine is a total transition map psi over finite state and event
alphabets.  A computation window of length L is L (event, state) steps:
the first L-1 steps chain through psi, and the last step names the event
about to occur in the final state, written "*" while nothing constrains
it.  An observation (P, min, max) explains a segment of min..min+max
consecutive steps each satisfying P; an observation sequence partitions
the whole window; an evidential statement demands one window satisfying
every sequence at once.

Two reconstruction routes produce identical answers: exact set algebra
over expanded fixed-length variants (small windows), and a layered
product construction that tracks per-sequence match positions per state
(large windows), from which a capped number of witness paths is read
back.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .values import (
    ANY_PROPERTY,
    EvidentialStatement,
    FlucidError,
    Observation,
    ObservationSequence,
    PLUS_INF,
    ValidationError,
)

WILDCARD = "*"

Step = Tuple[Any, Any]                 # (event, state)
Computation = Tuple[Step, ...]


class ReconstructionError(FlucidError):
    """A reconstruction request violated a precondition."""


# ---------------------------------------------------------------------------
# Machine, properties, result containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Property:
    """Step predicate with a declarative serializable form.

    states None means any state; allow None means any event; deny lists
    forbidden events.  The wildcard final event satisfies only properties
    that put no constraint on events.
    """

    name: str = ""
    states: Optional[FrozenSet[Any]] = None
    allow_events: Optional[FrozenSet[Any]] = None
    deny_events: FrozenSet[Any] = frozenset()
    anything: bool = False

    def constrains_events(self) -> bool:
        return not self.anything and (
            self.allow_events is not None or bool(self.deny_events))

    def step_ok(self, event: Any, state: Any) -> bool:
        if self.anything:
            return True
        if self.states is not None and state not in self.states:
            return False
        if event == WILDCARD:
            return not self.constrains_events()
        if self.allow_events is not None and event not in self.allow_events:
            return False
        if event in self.deny_events:
            return False
        return True


ANYTHING = Property(name="$", anything=True)


@dataclass(frozen=True, eq=False)
class StateMachine:
    """T = (states, events, psi); psi total over events x states.

    chainable, when given, marks the pairs where the event really fires;
    the remaining pairs exist only to keep the map total and no
    reconstructed step may use them.  None means every pair fires.
    """

    states: Tuple[Any, ...]
    events: Tuple[Any, ...]
    psi: Mapping[Tuple[Any, Any], Any]
    properties: Mapping[str, Property] = field(default_factory=dict)
    chainable: Optional[FrozenSet[Tuple[Any, Any]]] = None

    def __post_init__(self):
        for e in self.events:
            for s in self.states:
                if (e, s) not in self.psi:
                    raise ValidationError(
                        "transition map is not total: no entry for event %r "
                        "in state %r" % (e, s), "psi")
        for (e, s), q in self.psi.items():
            if e not in self.events or s not in self.states or q not in self.states:
                raise ValidationError(
                    "transition (%r, %r) -> %r uses undeclared labels"
                    % (e, s, q), "psi")

    def successor(self, event: Any, state: Any) -> Any:
        return self.psi[(event, state)]

    def fires(self, event: Any, state: Any) -> bool:
        return self.chainable is None or (event, state) in self.chainable


@dataclass(frozen=True)
class MPR:
    """Map of partitioned runs: segment lengths plus initial computations."""

    lens: Tuple[int, ...]
    computations: FrozenSet[Computation]

    def total(self) -> int:
        return sum(self.lens)

    def is_empty(self) -> bool:
        return not self.computations


@dataclass(frozen=True)
class MSPR:
    """Map of a sequence of partitioned runs (one lens vector per account)."""

    lens: Tuple[Tuple[int, ...], ...]
    computations: FrozenSet[Computation]

    def is_proper(self) -> bool:
        sums = {sum(v) for v in self.lens}
        return len(sums) <= 1

    def is_empty(self) -> bool:
        return not self.computations


EMPTY_MSPR = MSPR(lens=(), computations=frozenset())


@dataclass(frozen=True)
class ClaimResult:
    consistent: bool
    explanations: Tuple[MSPR, ...]
    backtraces: Tuple[Computation, ...]
    horizon_warning: bool
    horizon: int
    route: str


# ---------------------------------------------------------------------------
# Back-tracing primitives
# ---------------------------------------------------------------------------


def invert_transition(fsm: StateMachine) -> Dict[Any, FrozenSet[Step]]:
    """Predecessor table: (e, q) lands in result[q'] iff psi(e, q) = q'."""
    table: Dict[Any, Set[Step]] = {s: set() for s in fsm.states}
    for (e, q), q2 in fsm.psi.items():
        table[q2].add((e, q))
    return {s: frozenset(v) for s, v in table.items()}


def psi_inverse_set(fsm: StateMachine,
                    computations: Iterable[Computation]) -> Set[Computation]:
    """Extend every computation one chained step to the left."""
    inverse = invert_transition(fsm)
    out: Set[Computation] = set()
    for c in computations:
        if not c:
            continue
        head_state = c[0][1]
        for e, q in inverse[head_state]:
            out.add(((e, q),) + c)
    return out


# ---------------------------------------------------------------------------
# Meanings of observation sequences
# ---------------------------------------------------------------------------


def resolve_property(fsm: StateMachine, prop: Any) -> Property:
    """Map an observation's property value onto a step predicate."""
    if isinstance(prop, Property):
        return prop
    if prop is ANY_PROPERTY or prop == "$":
        return ANYTHING
    if isinstance(prop, str):
        if prop in fsm.properties:
            return fsm.properties[prop]
        if prop in fsm.states:
            return Property(name=prop, states=frozenset([prop]))
    if prop in fsm.states:
        return Property(name=str(prop), states=frozenset([prop]))
    raise ReconstructionError(
        "property %r is neither a declared property nor a state" % (prop,))


def _triples(fsm: StateMachine,
             os: ObservationSequence) -> List[Tuple[Property, int, Any]]:
    out = []
    for o in os.observations:
        out.append((resolve_property(fsm, o.property), o.min, o.max))
    return out


def meaning_fixed_length(fsm: StateMachine,
                         os: Sequence[Tuple[Property, int]]) -> MPR:
    """All windows explained by a fixed-length observation sequence."""
    lens = tuple(int(d) for _, d in os)
    if any(d < 0 for d in lens):
        raise ValidationError("segment lengths must be non-negative", "os")
    total = sum(lens)
    if total == 0:
        return MPR(lens, frozenset({()}))
    schedule: List[Property] = []
    for p, d in os:
        schedule.extend([p] * d)
    runs: Set[Computation] = set()

    def extend(prefix: List[Step], state: Any) -> None:
        i = len(prefix)
        if i == total - 1:
            last = schedule[i]
            if last.step_ok(WILDCARD, state):
                runs.add(tuple(prefix + [(WILDCARD, state)]))
            else:
                for e in fsm.events:
                    if fsm.fires(e, state) and last.step_ok(e, state):
                        runs.add(tuple(prefix + [(e, state)]))
            return
        for e in fsm.events:
            if fsm.fires(e, state) and schedule[i].step_ok(e, state):
                extend(prefix + [(e, state)], fsm.successor(e, state))

    for s in fsm.states:
        extend([], s)
    return MPR(lens, frozenset(runs))


def expand_generic(os: ObservationSequence, horizon: int) -> Tuple[ObservationSequence, ...]:
    """All fixed-length variants of a generic observation sequence.

    Each observation's duration ranges over min..min+max, with an
    unbounded max truncated at the horizon.
    """
    minsum = sum(o.min for o in os.observations)
    if horizon < minsum:
        raise ValidationError(
            "horizon %d is below the total minimum duration %d"
            % (horizon, minsum), "horizon")
    per_obs: List[List[Observation]] = []
    for o in os.observations:
        hi = horizon if o.max is PLUS_INF else o.min + o.max
        variants = [Observation(o.property, d, 0, o.w, o.t, o.description)
                    for d in range(o.min, hi + 1)]
        per_obs.append(variants)
    return tuple(ObservationSequence(combo, name=os.name)
                 for combo in itertools.product(*per_obs))


def dedupe_wildcard_twins(runs: Iterable[Computation]) -> Set[Computation]:
    """Drop a concrete-final-event run whose wildcard twin is also present."""
    pool = set(runs)
    out = set()
    for r in pool:
        if r and r[-1][0] != WILDCARD:
            twin = r[:-1] + ((WILDCARD, r[-1][1]),)
            if twin in pool:
                continue
        out.add(r)
    return out


def comb(x: MPR, y: MPR) -> MSPR:
    """Combine two maps of partitioned runs into a proper MSPR."""
    if x.total() != y.total():
        return EMPTY_MSPR
    common = x.computations & y.computations
    if not common:
        return EMPTY_MSPR
    return MSPR(lens=(y.lens, x.lens), computations=frozenset(common))


# ---------------------------------------------------------------------------
# Claim checking
# ---------------------------------------------------------------------------


def default_horizon(fsm: StateMachine, es: EvidentialStatement) -> int:
    """Window bound: the longest account's sum of min + capped max."""
    best = 0
    for os in es.sequences:
        total = 0
        for o in os.observations:
            cap = len(fsm.states) if o.max is PLUS_INF else min(o.max, len(fsm.states))
            total += o.min + cap
        best = max(best, total)
    return max(best, 1)


def check_claim(fsm: StateMachine, es: EvidentialStatement,
                horizon: Optional[int] = None,
                max_backtraces: int = 64,
                route: Optional[str] = None) -> ClaimResult:
    """Verdict plus explanations for an evidential statement.

    Consistent iff some window length admits a computation satisfying
    every observation sequence simultaneously.  Backtraces are the
    witness windows with consecutive identical steps collapsed (dwelling
    in a self-loop is presentation noise, not a separate explanation).
    route forces "exact" set algebra or the "layered" search; by default
    small problems go exact and everything else layered.
    """
    if not isinstance(es, EvidentialStatement) or len(es) == 0:
        raise ValidationError("evidential statement must be non-empty", "es")
    all_triples = [_triples(fsm, os) for os in es.sequences]
    if horizon is None:
        horizon = default_horizon(fsm, es)
    has_unbounded = any(mx is PLUS_INF for tri in all_triples for _, _, mx in tri)

    if route is None:
        route = "exact" if horizon <= 8 and len(fsm.states) <= 64 else "layered"
    if route == "exact":
        consistent, msprs = _check_exact(fsm, es, all_triples, horizon)
    elif route == "layered":
        consistent, msprs = _check_layered(fsm, all_triples, horizon,
                                           max_backtraces)
    else:
        raise ValidationError("route must be exact or layered", "route")

    msprs = list(dict.fromkeys(msprs))
    runs = sorted({c for m in msprs for c in m.computations},
                  key=lambda c: (len(c), repr(c)))
    traces = []
    seen = set()
    for r in runs:
        collapsed = collapse_stutters(r)
        if collapsed not in seen:
            seen.add(collapsed)
            traces.append(collapsed)
    return ClaimResult(
        consistent=consistent,
        explanations=tuple(msprs),
        backtraces=tuple(traces),
        horizon_warning=bool(has_unbounded and not consistent),
        horizon=horizon,
        route=route,
    )


def collapse_stutters(run: Computation) -> Computation:
    out: List[Step] = []
    for step in run:
        if out and out[-1] == step:
            continue
        out.append(step)
    return tuple(out)


def _window(triple_list: Sequence[Tuple[Property, int, Any]]) -> Tuple[int, Any]:
    lo = sum(mn for _, mn, _ in triple_list)
    hi: Any = 0
    for _, mn, mx in triple_list:
        if mx is PLUS_INF:
            hi = PLUS_INF
        if hi is not PLUS_INF:
            hi += mn + mx
    return lo, hi


def _unify_intersect(left: Iterable[Computation],
                     right: Iterable[Computation]) -> FrozenSet[Computation]:
    """Common runs, letting a wildcard final event stand for any event."""
    index: Dict[Tuple[Computation, Any], Set[Any]] = {}
    has_empty_right = False
    for r in right:
        if not r:
            has_empty_right = True
            continue
        index.setdefault((r[:-1], r[-1][1]), set()).add(r[-1][0])
    out: Set[Computation] = set()
    for r in left:
        if not r:
            if has_empty_right:
                out.add(r)
            continue
        events = index.get((r[:-1], r[-1][1]))
        if not events:
            continue
        ev = r[-1][0]
        if ev in events:
            out.add(r)
        elif ev == WILDCARD:
            out.update(r[:-1] + ((e, r[-1][1]),) for e in events)
        elif WILDCARD in events:
            out.add(r)
    return frozenset(out)


def _check_exact(fsm: StateMachine, es: EvidentialStatement,
                 all_triples, horizon: int) -> Tuple[bool, List[MSPR]]:
    per_os_mprs: List[List[MPR]] = []
    for os, triples in zip(es.sequences, all_triples):
        try:
            expanded = expand_generic(os, horizon)
        except ValidationError:
            return False, []
        mprs = []
        pool: Set[Computation] = set()
        for variant in expanded:
            fixed = [(resolve_property(fsm, o.property), o.min)
                     for o in variant.observations]
            if sum(d for _, d in fixed) > horizon:
                continue
            m = meaning_fixed_length(fsm, fixed)
            if not m.is_empty():
                mprs.append(m)
                pool.update(m.computations)
        # one account's meaning keeps only the most general final step
        keep = dedupe_wildcard_twins(pool)
        mprs = [MPR(m.lens, frozenset(m.computations & keep)) for m in mprs]
        mprs = [m for m in mprs if not m.is_empty()]
        if not mprs:
            return False, []
        per_os_mprs.append(mprs)

    acc: List[MSPR] = [MSPR((m.lens,), m.computations) for m in per_os_mprs[0]]
    for mprs in per_os_mprs[1:]:
        merged: List[MSPR] = []
        for left in acc:
            for right in mprs:
                if sum(left.lens[0]) != right.total():
                    continue
                common = _unify_intersect(left.computations,
                                          right.computations)
                if common:
                    merged.append(MSPR((right.lens,) + left.lens, common))
        acc = merged
        if not acc:
            break
    return bool(acc), acc


# --------------------------- layered route ---------------------------------


NfaPos = Tuple[int, int]               # (observation index, consumed steps)


def _closure(positions: FrozenSet[NfaPos],
             triples: Sequence[Tuple[Property, int, Any]]) -> FrozenSet[NfaPos]:
    m = len(triples)
    work = set(positions)
    changed = True
    while changed:
        changed = False
        for j, k in list(work):
            if j < m and k >= triples[j][1] and (j + 1, 0) not in work:
                work.add((j + 1, 0))
                changed = True
    return frozenset(work)


def _advance(positions: FrozenSet[NfaPos],
             triples: Sequence[Tuple[Property, int, Any]],
             event: Any, state: Any) -> FrozenSet[NfaPos]:
    m = len(triples)
    out: Set[NfaPos] = set()
    for j, k in _closure(positions, triples):
        if j >= m:
            continue
        prop, mn, mx = triples[j]
        if not prop.step_ok(event, state):
            continue
        if mx is PLUS_INF:
            out.add((j, min(k + 1, mn)))
        elif k + 1 <= mn + mx:
            out.add((j, k + 1))
    return frozenset(out)


def _accepting(positions: FrozenSet[NfaPos],
               triples: Sequence[Tuple[Property, int, Any]]) -> bool:
    return (len(triples), 0) in _closure(positions, triples)


def _check_layered(fsm: StateMachine, all_triples, horizon: int,
                   max_backtraces: int) -> Tuple[bool, List[MSPR]]:
    windows = [_window(t) for t in all_triples]
    lengths = [L for L in range(1, horizon + 1)
               if all(lo <= L and (hi is PLUS_INF or L <= hi)
                      for lo, hi in windows)]
    found: List[Tuple[int, Computation]] = []
    empty_ok = all(lo == 0 for lo, _ in windows)
    if empty_ok:
        found.append((0, ()))
    if not lengths:
        return empty_ok, _synthesize_msprs(all_triples, found)

    init = tuple(_closure(frozenset({(0, 0)}), t) for t in all_triples)
    Node = Tuple[Any, Tuple[FrozenSet[NfaPos], ...]]
    layers: List[Dict[Node, List[Tuple[Node, Step]]]] = [
        {(s, init): [] for s in fsm.states}]

    want = set(lengths)

    def final_steps(state: Any, poss: Tuple[FrozenSet[NfaPos], ...]) -> List[Step]:
        def ok(ev: Any) -> bool:
            return all(_accepting(_advance(p, t, ev, state), t)
                       for p, t in zip(poss, all_triples))
        if ok(WILDCARD):
            return [(WILDCARD, state)]
        return [(e, state) for e in fsm.events
                if fsm.fires(e, state) and ok(e)]

    def read_back(layer_idx: int, node: Node, suffix: Computation) -> None:
        if len(found) >= max_backtraces:
            return
        if layer_idx == 0:
            found.append((len(suffix), suffix))
            return
        for prev_node, step in layers[layer_idx][node]:
            read_back(layer_idx - 1, prev_node, (step,) + suffix)
            if len(found) >= max_backtraces:
                return

    consistent = empty_ok
    for t in range(0, horizon):
        # close off windows of length t+1: t chained steps plus a final step
        if (t + 1) in want:
            for (state, poss) in list(layers[t].keys()):
                for fstep in final_steps(state, poss):
                    consistent = True
                    if len(found) < max_backtraces:
                        read_back(t, (state, poss), (fstep,))
            if consistent and len(found) >= max_backtraces:
                break
        if t + 1 >= max(lengths):
            break
        nxt: Dict[Node, List[Tuple[Node, Step]]] = {}
        for (state, poss), _edges in layers[t].items():
            for e in fsm.events:
                if not fsm.fires(e, state):
                    continue
                new_poss = tuple(_advance(p, tri, e, state)
                                 for p, tri in zip(poss, all_triples))
                if any(not p for p in new_poss):
                    continue
                node = (fsm.successor(e, state), new_poss)
                nxt.setdefault(node, []).append(((state, poss), (e, state)))
        layers.append(nxt)
        if not nxt:
            break

    if not found:
        return consistent, []
    msprs = _synthesize_msprs(all_triples, found)
    return consistent, msprs


def _partition_lens(triples: Sequence[Tuple[Property, int, Any]],
                    run: Computation) -> Optional[Tuple[int, ...]]:
    """First composition of the run into satisfying segments, if any."""
    L = len(run)

    def rec(j: int, pos: int) -> Optional[Tuple[int, ...]]:
        if j == len(triples):
            return () if pos == L else None
        prop, mn, mx = triples[j]
        hi = L - pos if mx is PLUS_INF else mn + mx
        for d in range(mn, min(hi, L - pos) + 1):
            if all(prop.step_ok(*run[k]) for k in range(pos, pos + d)):
                rest = rec(j + 1, pos + d)
                if rest is not None:
                    return (d,) + rest
        return None

    return rec(0, 0)


def _synthesize_msprs(all_triples,
                      found: List[Tuple[int, Computation]]) -> List[MSPR]:
    groups: Dict[Tuple[Tuple[int, ...], ...], Set[Computation]] = {}
    for _, run in found:
        vectors = []
        ok = True
        for triples in all_triples:
            lens = _partition_lens(triples, run)
            if lens is None:
                ok = False
                break
            vectors.append(lens)
        if ok:
            key = tuple(reversed(vectors))
            groups.setdefault(key, set()).add(run)
    return [MSPR(lens, frozenset(runs))
            for lens, runs in sorted(groups.items(), key=repr)]


# ---------------------------------------------------------------------------
# Fixture parsing
# ---------------------------------------------------------------------------


def load_fsm(text: str) -> StateMachine:
    """Parse the transition fixture format.

    One transition per line: `event state -> state`; `#` starts a comment;
    named step predicates as blocks:
    `property NAME { states: a, b; allow-events: e; deny-events: f; }`.

    The transition map must be total, so any event/state pair the file
    leaves out becomes a self-loop; those filler pairs are marked
    non-chainable, meaning the event cannot actually fire there and no
    reconstructed path may step through them.
    """
    transitions: Dict[Tuple[str, str], str] = {}
    states: List[str] = []
    events: List[str] = []
    properties: Dict[str, Property] = {}
    lines = text.splitlines()
    i = 0

    def note_state(s: str) -> None:
        if s not in states:
            states.append(s)

    while i < len(lines):
        line = lines[i].split("#", 1)[0].strip()
        i += 1
        if not line:
            continue
        if line.startswith("property "):
            block = line
            while "}" not in block and i < len(lines):
                block += " " + lines[i].split("#", 1)[0].strip()
                i += 1
            name, prop = _parse_property_block(block)
            properties[name] = prop
            continue
        if "->" not in line:
            raise ValidationError("unrecognized fixture line: %r" % line, "fsm")
        left, _, target = line.partition("->")
        parts = left.split()
        if len(parts) != 2:
            raise ValidationError(
                "transition needs `event state -> state`: %r" % line, "fsm")
        event, src = parts
        dst = target.strip()
        if not dst:
            raise ValidationError("missing target state: %r" % line, "fsm")
        if event not in events:
            events.append(event)
        note_state(src)
        note_state(dst)
        transitions[(event, src)] = dst

    declared = frozenset(transitions)
    for e in events:
        for s in states:
            transitions.setdefault((e, s), s)
    return StateMachine(states=tuple(states), events=tuple(events),
                        psi=transitions, properties=properties,
                        chainable=declared)


def _split_top_commas(text: str) -> List[str]:
    """Split on commas outside parentheses; labels like (1,u,o2) stay whole."""
    items: List[str] = []
    depth = 0
    buf: List[str] = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            items.append("".join(buf).strip())
            buf = []
        else:
            buf.append(ch)
    tail = "".join(buf).strip()
    if tail:
        items.append(tail)
    return [i for i in items if i]


def _parse_property_block(block: str) -> Tuple[str, Property]:
    head, _, rest = block.partition("{")
    name = head.split()[1].strip()
    body = rest.rsplit("}", 1)[0]
    states = allow = None
    deny: FrozenSet[str] = frozenset()
    for clause in body.split(";"):
        clause = clause.strip()
        if not clause:
            continue
        key, _, vals = clause.partition(":")
        items = frozenset(_split_top_commas(vals))
        key = key.strip()
        if key == "states":
            states = items
        elif key == "allow-events":
            allow = items
        elif key == "deny-events":
            deny = items
        else:
            raise ValidationError("unknown property clause %r" % key, "fsm")
    return name, Property(name=name, states=states, allow_events=allow,
                          deny_events=deny)


def load_es(text: str) -> EvidentialStatement:
    """Parse the claim fixture format.

    `observation NAME = $` / `\\0(PROP)` / `(PROP, min, max[, w[, t]])`,
    `sequence NAME = obs obs ...`, and one `statement = seq seq ...` line.
    Properties stay symbolic; they resolve against a machine at check time.
    max accepts an integer or `infinitum` / `INF+`.
    """
    from .values import make_observation, no_observation, zero_observation

    observations: Dict[str, Observation] = {}
    sequences: Dict[str, ObservationSequence] = {}
    statement: Optional[List[str]] = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("observation "):
            decl = line[len("observation "):]
            name, _, value = decl.partition("=")
            name = name.strip()
            value = value.strip()
            if not name or not value:
                raise ValidationError(
                    "observation needs `observation NAME = VALUE`: %r"
                    % raw, "es")
            if value == "$":
                observations[name] = no_observation()
            elif value.startswith("\\0(") and value.endswith(")"):
                observations[name] = zero_observation(value[3:-1].strip())
            elif value.startswith("(") and value.endswith(")"):
                parts = _split_top_commas(value[1:-1])
                if len(parts) < 3:
                    raise ValidationError(
                        "observation tuple needs (PROP, min, max[, w[, t]]):"
                        " %r" % raw, "es")
                prop = parts[0]
                mn = int(parts[1])
                mx = PLUS_INF if parts[2] in ("infinitum", "INF+") else int(parts[2])
                w = float(parts[3]) if len(parts) > 3 else None
                t = int(parts[4]) if len(parts) > 4 else None
                observations[name] = make_observation(prop, mn, mx, w, t)
            else:
                raise ValidationError(
                    "unrecognized observation value %r" % value, "es")
        elif line.startswith("sequence "):
            decl = line[len("sequence "):]
            name, _, members = decl.partition("=")
            name = name.strip()
            try:
                obs = [observations[m] for m in members.split()]
            except KeyError as missing:
                raise ValidationError(
                    "sequence %s references unknown observation %s"
                    % (name, missing), "es")
            if not obs:
                raise ValidationError("sequence %s is empty" % name, "es")
            sequences[name] = ObservationSequence(obs, name=name)
        elif line.startswith("statement"):
            _, _, members = line.partition("=")
            statement = members.split()
        else:
            raise ValidationError("unrecognized claim line: %r" % raw, "es")
    if statement is None:
        raise ValidationError("claim fixture has no statement line", "es")
    try:
        seqs = [sequences[m] for m in statement]
    except KeyError as missing:
        raise ValidationError(
            "statement references unknown sequence %s" % missing, "es")
    return EvidentialStatement(seqs)
