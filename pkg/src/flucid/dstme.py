"""Mathematical evidence: mass assignments, belief, plausibility, and
Dempster's combination rule, plus the credibility operators over the
forensic context hierarchy.

A MassAssignment is a basic belief assignment m : 2^Q -> [0,1] over a
finite frame Q with m(empty) = 0 and total mass 1.  Belief of A sums the
masses of subsets of A; plausibility sums the masses of sets meeting A.
"""

from __future__ import annotations

import itertools
import math
from typing import Any, Dict, FrozenSet, Iterable, Mapping, Tuple

from .values import (
    ContextSet,
    EvidentialStatement,
    FlucidError,
    Observation,
    ObservationSequence,
    SimpleContext,
    ValidationError,
    kind_of,
    to_source,
)

TOL = 1e-9


class DomainError(FlucidError):
    """A queried set is not within the assignment's frame."""


class CombinationUndefinedError(FlucidError):
    """Dempster's rule with total conflict (K = 1) has no result."""


class MassAssignment:
    """Immutable basic belief assignment over a finite frame."""

    __slots__ = ("frame", "masses")

    def __init__(self, frame: Iterable[Any],
                 masses: Mapping[FrozenSet[Any], float]):
        fr = frozenset(frame)
        clean: Dict[FrozenSet[Any], float] = {}
        total = 0.0
        for subset, m in masses.items():
            s = frozenset(subset)
            if not s <= fr:
                raise DomainError("focal set %s outside frame" % sorted(map(str, s)))
            if not s:
                if abs(m) > TOL:
                    raise ValidationError("mass of the empty set must be 0", "masses")
                continue
            if m < -TOL or m > 1 + TOL:
                raise ValidationError("mass %r outside [0, 1]" % m, "masses")
            if abs(m) <= TOL:
                continue
            clean[s] = clean.get(s, 0.0) + m
            total += m
        if abs(total - 1.0) > TOL:
            raise ValidationError(
                "masses must sum to 1, got %.12f" % total, "masses")
        object.__setattr__(self, "frame", fr)
        object.__setattr__(self, "masses", clean)

    def mass(self, subset: Iterable[Any]) -> float:
        return self.masses.get(frozenset(subset), 0.0)

    def focal_sets(self) -> Tuple[FrozenSet[Any], ...]:
        return tuple(sorted(self.masses, key=lambda s: (len(s), sorted(map(str, s)))))

    def __repr__(self) -> str:
        parts = ", ".join("%s:%g" % (set(s) or "{}", m)
                          for s, m in sorted(self.masses.items(),
                                             key=lambda kv: sorted(map(str, kv[0]))))
        return "MassAssignment(%s)" % parts


def _check_subset(m: MassAssignment, a: Iterable[Any]) -> FrozenSet[Any]:
    s = frozenset(a)
    if not s <= m.frame:
        raise DomainError("queried set %s outside frame" % sorted(map(str, s)))
    return s


def belief(m: MassAssignment, a: Iterable[Any]) -> float:
    """Total mass committed to subsets of a."""
    s = _check_subset(m, a)
    return sum(mass for focal, mass in m.masses.items() if focal <= s)


def plausibility(m: MassAssignment, a: Iterable[Any]) -> float:
    """Total mass not contradicting a (mass of sets intersecting a)."""
    s = _check_subset(m, a)
    return sum(mass for focal, mass in m.masses.items() if focal & s)


def mass_from_belief(bel_values: Mapping[FrozenSet[Any], float],
                     frame: Iterable[Any]) -> MassAssignment:
    """Recover masses from a full belief table by Moebius inversion."""
    fr = tuple(sorted(frame, key=str))
    table = {frozenset(k): v for k, v in bel_values.items()}
    masses: Dict[FrozenSet[Any], float] = {}
    for r in range(len(fr) + 1):
        for combo in itertools.combinations(fr, r):
            a = frozenset(combo)
            total = 0.0
            for rr in range(len(combo) + 1):
                for sub in itertools.combinations(combo, rr):
                    b = frozenset(sub)
                    total += ((-1) ** len(a - b)) * table.get(b, 0.0)
            if total < -TOL:
                raise ValidationError(
                    "belief table is inconsistent: recovered m(%s) = %.3g"
                    % (sorted(map(str, a)), total), "bel_values")
            if total > TOL:
                masses[a] = total
    return MassAssignment(fr, masses)


def dempster_combine(m1: MassAssignment, m2: MassAssignment) -> MassAssignment:
    """Join two independent assignments; undefined under total conflict."""
    if m1.frame != m2.frame:
        raise DomainError("combination requires identical frames")
    conflict = 0.0
    joint: Dict[FrozenSet[Any], float] = {}
    for b, mb in m1.masses.items():
        for c, mc in m2.masses.items():
            inter = b & c
            if inter:
                joint[inter] = joint.get(inter, 0.0) + mb * mc
            else:
                conflict += mb * mc
    if conflict >= 1.0 - TOL:
        raise CombinationUndefinedError(
            "total conflict between the assignments (K = 1)")
    scale = 1.0 / (1.0 - conflict)
    return MassAssignment(m1.frame, {a: m * scale for a, m in joint.items()})


def vacuous(frame: Iterable[Any]) -> MassAssignment:
    """The all-ignorance assignment: full mass on the frame itself."""
    fr = frozenset(frame)
    return MassAssignment(fr, {fr: 1.0})


# ---------------------------------------------------------------------------
# Credibility over the forensic hierarchy
# ---------------------------------------------------------------------------


def credibility(kind: str, f: Any) -> float:
    """bel or pl of a forensic value.

    Observations carry their own mass w; the no-observation is fully
    believed and the zero-observation not at all.  A sequence averages the
    credibility of its accounts, first fusing repeated claims about the
    same property as independent corroboration.  A statement commits each
    distinct claim's fused credibility as mass over claims plus an
    unexplained remainder; its belief is the explained share and its
    plausibility one minus the (never positive) contrary share.
    """
    if kind not in ("bel", "pl"):
        raise ValueError("unknown credibility kind %r" % kind)
    if isinstance(f, (SimpleContext, ContextSet)):
        return 1.0
    if isinstance(f, Observation):
        return _observation_credibility(f)
    if isinstance(f, ObservationSequence):
        return _sequence_credibility(f)
    if isinstance(f, EvidentialStatement):
        if kind == "pl":
            return 1.0 if len(f) == 0 else _statement_plausibility(f)
        return _statement_belief(f)
    raise DomainError("credibility is not defined on %s" % kind_of(f))


def _observation_credibility(o: Observation) -> float:
    if o.is_no_observation():
        return 1.0
    if o.is_zero_observation():
        return 0.0
    return o.w


def _fuse_independent(weights: Iterable[float]) -> float:
    doubt = 1.0
    for w in weights:
        doubt *= 1.0 - w
    return 1.0 - doubt


def _sequence_groups(os: ObservationSequence) -> Dict[str, float]:
    """Fused credibility per distinct observed property."""
    groups: Dict[str, list] = {}
    for o in os.observations:
        groups.setdefault(to_source(o.property), []).append(
            _observation_credibility(o))
    return {key: _fuse_independent(ws) for key, ws in groups.items()}


def _sequence_credibility(os: ObservationSequence) -> float:
    groups = _sequence_groups(os)
    if not groups:
        return 1.0          # an empty account asserts nothing to doubt
    return math.fsum(groups.values()) / len(groups)


def _statement_claims(es: EvidentialStatement) -> Dict[str, float]:
    """Fused credibility per distinct claim (a sequence's property profile)."""
    claims: Dict[str, list] = {}
    for os in es.sequences:
        key = "|".join(sorted(to_source(o.property) for o in os.observations))
        claims.setdefault(key, []).append(_sequence_credibility(os))
    return {key: _fuse_independent(ws) for key, ws in claims.items()}


def _statement_belief(es: EvidentialStatement) -> float:
    claims = _statement_claims(es)
    if not claims:
        return 0.0
    # mass over {claims..., unexplained}; normalized when overcommitted
    return min(1.0, math.fsum(claims.values()))


def _statement_plausibility(es: EvidentialStatement) -> float:
    # no mass is ever committed strictly against the claims
    return 1.0
