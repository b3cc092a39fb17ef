"""Reversible prime event structures.

Undoing an event ``u`` is never represented by a separate id. A mixed step is
a pair ``(A, B)``: ``A`` holds events to perform and ``B`` holds undoable
events to undo. Reverse causality and prevention are sets of pairs
``(e, u)``, read "e is required to undo u" and "e blocks undoing u".
"""

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .core import Violation, check_carrier, transitive_closure
from .errors import NotEnabled, UnknownId, ValidationError
from .es import PrePes, ppes_configurations, ppes_violations, heredity_violations

UNDO_PREFIX = "~"


@dataclass(frozen=True)
class Rpes:
    events: frozenset
    undoable: frozenset = frozenset()
    causality: frozenset = frozenset()
    conflict: frozenset = frozenset()
    revcausality: frozenset = frozenset()
    prevention: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "events", frozenset(self.events))
        object.__setattr__(self, "undoable", frozenset(self.undoable))
        for name in ("causality", "conflict", "revcausality", "prevention"):
            object.__setattr__(self, name, frozenset(tuple(p) for p in getattr(self, name)))
        for u in self.undoable:
            if u not in self.events:
                raise UnknownId(f"undoable event {u!r} is not an event")
        check_carrier(self.causality, self.events, "causality")
        check_carrier(self.conflict, self.events, "conflict")
        for rel, name in ((self.revcausality, "reverse causality"), (self.prevention, "prevention")):
            for e, u in rel:
                if e not in self.events:
                    raise UnknownId(f"{name} mentions unknown event {e!r}")
                if u not in self.undoable:
                    raise UnknownId(f"{name} mentions {u!r}, which is not undoable")

    @classmethod
    def build(cls, events, undoable=(), causality=(), conflict=(), revcausality=None,
              prevention=()):
        """Convenience constructor.

        Closes causality transitively, makes conflict symmetric and, when
        ``revcausality`` is omitted, uses the minimal one (each undoable event
        requires itself).
        """
        undoable = frozenset(undoable)
        rc = {(u, u) for u in undoable} if revcausality is None else set(revcausality)
        conflict = set(conflict) | {(y, x) for x, y in conflict}
        return cls(frozenset(events), undoable, transitive_closure(causality),
                   frozenset(conflict), frozenset(rc), frozenset(prevention))

    @cached_property
    def base(self) -> PrePes:
        return PrePes(self.events, self.causality, self.conflict)

    @cached_property
    def sustained(self) -> frozenset:
        """Transitive closure of the causal pairs that survive undoing."""
        pairs = [(e, e2) for e, e2 in self.causality
                 if e not in self.undoable or (e2, e) in self.prevention]
        return transitive_closure(pairs)

    @cached_property
    def _required(self):
        out = {u: set() for u in self.undoable}
        for e, u in self.revcausality:
            out[u].add(e)
        return {u: frozenset(v) for u, v in out.items()}

    @cached_property
    def _preventers(self):
        out = {u: set() for u in self.undoable}
        for e, u in self.prevention:
            out[u].add(e)
        return {u: frozenset(v) for u, v in out.items()}

    def required_for_undo(self, u) -> frozenset:
        return self._required[u]

    def preventers(self, u) -> frozenset:
        return self._preventers[u]

    def conflict_free(self, xs) -> bool:
        return self.base.conflict_free(xs)

    def with_fields(self, **changes) -> "Rpes":
        vals = {f: getattr(self, f) for f in
                ("events", "undoable", "causality", "conflict", "revcausality", "prevention")}
        vals.update(changes)
        return Rpes(**vals)


def rpes_violations(p: Rpes) -> list:
    out = list(ppes_violations(p.base))
    for e in sorted(p.events):
        if isinstance(e, str) and e.startswith(UNDO_PREFIX) and e[1:] in p.undoable:
            out.append(Violation("undo names disjoint",
                                 f"event {e} clashes with the undo of {e[1:]}"))
    for u in sorted(p.undoable):
        if (u, u) not in p.revcausality:
            out.append(Violation("undo requires itself", f"{u} is not required to undo {u}"))
        req = sorted(p.required_for_undo(u))
        for a, b in combinations(req, 2):
            if (a, b) in p.conflict:
                out.append(Violation("undo requirements conflict free",
                                     f"requirements to undo {u} contain {a} # {b}"))
    for e, u in sorted(p.revcausality & p.prevention):
        out.append(Violation("require excludes prevent",
                             f"{e} is both required for and prevents undoing {u}"))
    for e, e1, e2 in heredity_violations(p.base, p.sustained):
        out.append(Violation("conflict inherited along sustained causation",
                             f"{e} # {e1} and {e1} sustains {e2} but not {e} # {e2}"))
    return out


def validate_rpes(p: Rpes) -> Rpes:
    bad = rpes_violations(p)
    if bad:
        raise ValidationError("rPES", bad)
    return p


def sustained_causation(p: Rpes) -> frozenset:
    return p.sustained


def enabling_failures(p: Rpes, xs, a=(), b=()) -> list:
    """Human-readable list of the enabling clauses that fail (empty if enabled)."""
    xs, a, b = frozenset(xs), frozenset(a), frozenset(b)
    for e in xs | a:
        if e not in p.events:
            raise UnknownId(f"unknown event {e!r}")
    for e in b:
        if e not in p.undoable:
            raise UnknownId(f"event {e!r} cannot be undone")
    out = []
    if a & xs:
        out.append(f"occurrence: {sorted(a & xs)[0]} already in X")
    if not b <= xs:
        out.append(f"presence: {sorted(b - xs)[0]} to undo is not in X")
    if not p.conflict_free(xs | a):
        out.append("conflict: X ∪ A is not conflict free")
    remaining = xs - b
    for e in sorted(a):
        for c in sorted(p.base.causes(e)):
            if c not in remaining:
                out.append(f"causality: {c} < {e} but {c} ∉ X∖B")
    for u in sorted(b):
        keep = xs - (b - {u})
        for c in sorted(p.required_for_undo(u)):
            if c not in keep:
                out.append(f"reverse causality: {c} ≺ ~{u} but {c} ∉ X∖(B∖{{{u}}})")
        for c in sorted(p.preventers(u)):
            if c in xs or c in a:
                out.append(f"prevention: {c} ▷ ~{u} but {c} ∈ X ∪ A")
    return out


def mixed_enabled(p: Rpes, xs, a=(), b=()) -> bool:
    return not enabling_failures(p, xs, a, b)


def mixed_step(p: Rpes, xs, a=(), b=()) -> frozenset:
    bad = enabling_failures(p, xs, a, b)
    if bad:
        raise NotEnabled(f"mixed step not enabled at {sorted(xs)}", bad)
    return (frozenset(xs) - frozenset(b)) | frozenset(a)


def _subsets(items):
    items = sorted(items)
    for k in range(len(items) + 1):
        yield from combinations(items, k)


def enabled_steps(p: Rpes, xs):
    """All enabled mixed steps ``(A, B)`` at ``xs`` with ``A ∪ B`` nonempty.

    Every clause is monotone in the step, so only events that are enabled on
    their own can take part; the remaining pairs are filtered exactly.
    """
    xs = frozenset(xs)
    fwd = [e for e in sorted(p.events - xs) if mixed_enabled(p, xs, {e}, ())]
    bwd = [u for u in sorted(p.undoable & xs) if mixed_enabled(p, xs, (), {u})]
    for a in _subsets(fwd):
        for b in _subsets(bwd):
            if (a or b) and mixed_enabled(p, xs, a, b):
                yield frozenset(a), frozenset(b)


def rpes_configurations(p: Rpes, steps: str = "all") -> frozenset:
    """Configurations reachable from the empty set by mixed steps.

    ``steps="single"`` restricts to one event per step.
    """
    start = frozenset()
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        if steps == "single":
            succs = [x | {e} for e in sorted(p.events - x) if mixed_enabled(p, x, {e}, ())]
            succs += [x - {u} for u in sorted(p.undoable & x) if mixed_enabled(p, x, (), {u})]
        elif steps == "all":
            succs = [(x - b) | a for a, b in enabled_steps(p, x)]
        else:
            raise ValueError(f"unknown step mode {steps!r}")
        for y in succs:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def forwards_reachable_configurations(p: Rpes) -> frozenset:
    """Configurations reachable using only forward steps."""
    return ppes_configurations(p.base)


def rpes_forwards_reachable(p: Rpes, xs) -> bool:
    return frozenset(xs) in forwards_reachable_configurations(p)


def is_cause_respecting(p: Rpes) -> bool:
    return p.causality <= p.sustained


def is_causal(p: Rpes) -> bool:
    want_rc = {(u, u) for u in p.undoable}
    want_prev = {(e, u) for u, e in p.causality if u in p.undoable}
    return p.revcausality == want_rc and p.prevention == want_prev


def causal_rpes(events, undoable=(), causality=(), conflict=()) -> Rpes:
    """The causal rPES over the given PES data: undoing u needs u and no successor of u."""
    causality = transitive_closure(causality)
    undoable = frozenset(undoable)
    conflict = set(conflict) | {(y, x) for x, y in conflict}
    return Rpes(frozenset(events), undoable, causality, frozenset(conflict),
                frozenset((u, u) for u in undoable),
                frozenset((e, u) for u, e in causality if u in undoable))
