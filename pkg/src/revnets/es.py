"""Prime event structures and pre-PESs (no conflict heredity)."""

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .core import (Violation, check_carrier, is_irreflexive, is_symmetric,
                   is_transitive, symmetric_closure, transitive_closure)
from .errors import NotEnabled, UnknownId, ValidationError


@dataclass(frozen=True, eq=False)
class PrePes:
    """Events with a causality order and a symmetric conflict relation.

    ``causality`` holds strict pairs (e, e') meaning e < e'. ``conflict`` is
    stored symmetrically. Use :meth:`build` to close the inputs.
    """

    events: frozenset
    causality: frozenset = frozenset()
    conflict: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "events", frozenset(self.events))
        object.__setattr__(self, "causality", frozenset(tuple(p) for p in self.causality))
        object.__setattr__(self, "conflict", frozenset(tuple(p) for p in self.conflict))
        check_carrier(self.causality, self.events, "causality")
        check_carrier(self.conflict, self.events, "conflict")

    @classmethod
    def build(cls, events, causality=(), conflict=()):
        """Close causality transitively and conflict symmetrically."""
        return cls(frozenset(events), transitive_closure(causality), symmetric_closure(conflict))

    def _key(self):
        return (self.events, self.causality, self.conflict)

    def __eq__(self, other):
        if not isinstance(other, PrePes):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (f"{type(self).__name__}(events={sorted(self.events)}, "
                f"causality={sorted(self.causality)}, conflict={sorted(self.conflict)})")

    @cached_property
    def _below(self):
        below = {e: set() for e in self.events}
        for x, y in self.causality:
            below[y].add(x)
        return {e: frozenset(v) for e, v in below.items()}

    @cached_property
    def _conflicts_of(self):
        out = {e: set() for e in self.events}
        for x, y in self.conflict:
            out[x].add(y)
        return {e: frozenset(v) for e, v in out.items()}

    def causes(self, e) -> frozenset:
        """Events strictly below ``e``."""
        try:
            return self._below[e]
        except KeyError:
            raise UnknownId(f"unknown event {e!r}") from None

    def history(self, e) -> frozenset:
        return self.causes(e) | {e}

    def conflicts_of(self, e) -> frozenset:
        return self._conflicts_of[e]

    def conflict_free(self, xs) -> bool:
        xs = list(xs)
        for i, a in enumerate(xs):
            if a not in self.events:
                raise UnknownId(f"unknown event {a!r}")
            cs = self._conflicts_of[a]
            if any(b in cs for b in xs[i + 1:]):
                return False
        return True

    def is_left_closed(self, xs) -> bool:
        xs = frozenset(xs)
        return all(self.causes(e) <= xs for e in xs)

    def is_pes(self) -> bool:
        return not pes_violations(self)


class Pes(PrePes):
    """A pre-PES whose conflict is inherited along causality."""


def ppes_violations(p: PrePes) -> list:
    out = []
    if not is_irreflexive(p.causality):
        bad = sorted(x for x, y in p.causality if x == y)
        out.append(Violation("causality irreflexive", f"{bad[0]} < {bad[0]}"))
    if not is_transitive(p.causality):
        out.append(Violation("causality transitive", "causality is not transitive"))
    if not is_irreflexive(p.conflict):
        bad = sorted(x for x, y in p.conflict if x == y)
        out.append(Violation("conflict irreflexive", f"{bad[0]} # {bad[0]}"))
    if not is_symmetric(p.conflict):
        x, y = sorted((x, y) for x, y in p.conflict if (y, x) not in p.conflict)[0]
        out.append(Violation("conflict symmetric", f"{x} # {y} but not {y} # {x}"))
    for e in sorted(p.events):
        causes = sorted(p.causes(e))
        for a, b in combinations(causes, 2):
            if (a, b) in p.conflict or (b, a) in p.conflict:
                out.append(Violation("causes conflict free",
                                     f"causes of {e} contain conflicting {a} # {b}"))
    for x, y in sorted(p.causality):
        if (x, y) in p.conflict or (y, x) in p.conflict:
            out.append(Violation("causality excludes conflict", f"{x} < {y} and {x} # {y}"))
    return out


def heredity_violations(p: PrePes, order=None) -> list:
    """Pairs where e # e' and e' < e'' but not e # e''."""
    order = p.causality if order is None else order
    out = []
    succ = {}
    for x, y in order:
        succ.setdefault(x, []).append(y)
    for e, e1 in sorted(p.conflict):
        for e2 in sorted(succ.get(e1, ())):
            if (e, e2) not in p.conflict:
                out.append((e, e1, e2))
    return out


def pes_violations(p: PrePes) -> list:
    out = ppes_violations(p)
    for e, e1, e2 in heredity_violations(p):
        out.append(Violation("conflict hereditary", f"{e} # {e1} < {e2} but not {e} # {e2}"))
    return out


def validate_ppes(events, causality=(), conflict=()) -> PrePes:
    p = events if isinstance(events, PrePes) else PrePes(events, causality, conflict)
    bad = ppes_violations(p)
    if bad:
        raise ValidationError("pre-PES", bad)
    return PrePes(p.events, p.causality, p.conflict)


def validate_pes(events, causality=(), conflict=()) -> Pes:
    p = events if isinstance(events, PrePes) else PrePes(events, causality, conflict)
    bad = pes_violations(p)
    if bad:
        raise ValidationError("PES", bad)
    return Pes(p.events, p.causality, p.conflict)


def cf(p: PrePes, xs) -> bool:
    return p.conflict_free(xs)


def ppes_enabling_failures(p: PrePes, xs, a) -> list:
    xs, a = frozenset(xs), frozenset(a)
    for e in xs | a:
        if e not in p.events:
            raise UnknownId(f"unknown event {e!r}")
    out = []
    if a & xs:
        out.append(f"events {sorted(a & xs)} already occurred")
    if not p.conflict_free(xs | a):
        out.append("step would introduce a conflict")
    for e in sorted(a):
        missing = p.causes(e) - xs
        if missing:
            out.append(f"cause {sorted(missing)[0]} of {e} has not occurred")
    return out


def ppes_enabled(p: PrePes, xs, a) -> bool:
    return not ppes_enabling_failures(p, xs, a)


def ppes_step(p: PrePes, xs, a) -> frozenset:
    bad = ppes_enabling_failures(p, xs, a)
    if bad:
        raise NotEnabled(f"step {sorted(a)} not enabled at {sorted(xs)}", bad)
    return frozenset(xs) | frozenset(a)


def _nonempty_subsets(items):
    items = sorted(items)
    for k in range(1, len(items) + 1):
        yield from combinations(items, k)


def ppes_configurations(p: PrePes, steps: str = "single") -> frozenset:
    """Forwards reachable configurations.

    ``steps="single"`` explores one event at a time; ``steps="all"`` tries every
    enabled subset, exactly as the definition allows. Both give the same result.
    """
    start = frozenset()
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        cands = [e for e in sorted(p.events - x) if ppes_enabled(p, x, {e})]
        if steps == "single":
            succs = [x | {e} for e in cands]
        elif steps == "all":
            succs = [x | frozenset(a) for a in _nonempty_subsets(cands) if ppes_enabled(p, x, a)]
        else:
            raise ValueError(f"unknown step mode {steps!r}")
        for y in succs:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def hereditary_closure(p: PrePes, order=None) -> Pes:
    """Least symmetric conflict containing ``p.conflict`` and inherited along ``order``.

    ``order`` defaults to the causality of ``p``.
    """
    order = transitive_closure(p.causality if order is None else order)
    below = {e: {e} for e in p.events}
    for x, y in order:
        below[y].add(x)
    base = symmetric_closure(p.conflict)
    out = set()
    for e, e1 in base:
        for x in p.events:
            if e not in below[x]:
                continue
            for y in p.events:
                if e1 in below[y]:
                    out.add((x, y))
    return Pes(p.events, p.causality, frozenset(out))


def is_left_closed(p: PrePes, xs) -> bool:
    return p.is_left_closed(xs)
