"""Reversible causal nets: occurrence nets extended with reversing events.

A reversing event has as preset the postset of the forward event it undoes,
and as postset that event's preset. Removing the reversing events leaves an
occurrence net, the forward subnet.
"""

from collections import deque
from functools import cached_property

from .core import Multiset, Violation
from .errors import (ExplorationLimitExceeded, InvariantViolation, NotAConfiguration,
                     NotEnabled, UnknownId, ValidationError)
from .occnet import OccurrenceNet, occurrence_net_violations
from .petri import DEFAULT_CAP, FiringSequence, Net, fire, is_safe, reachable_markings, step_enabled


def _mirrors(n: Net, u, forward):
    return sorted(e for e in forward if n.pre(u) == n.post(e) and n.post(u) == n.pre(e))


def rcn_violations(n: Net, reversing, cap: int = DEFAULT_CAP) -> list:
    reversing = frozenset(reversing)
    out = []
    extra = reversing - n.transitions
    for u in sorted(extra):
        out.append(Violation("reversing are events", f"reversing event {u} is not a transition"))
    if extra:
        return out
    forward = n.transitions - reversing
    images = {}
    for u in sorted(reversing):
        ms = _mirrors(n, u, forward)
        if not ms:
            out.append(Violation("unique mirror", f"reversing event {u} has no mirror"))
        elif len(ms) > 1:
            out.append(Violation("unique mirror", f"reversing event {u} mirrors {ms[0]} and {ms[1]}"))
        else:
            images.setdefault(ms[0], []).append(u)
    for e, us in sorted(images.items()):
        if len(us) > 1:
            out.append(Violation("undo map injective", f"{us[0]} and {us[1]} both undo {e}"))
    seen = {}
    for e in sorted(n.transitions):
        key = (n.pre(e), n.post(e))
        if key in seen:
            out.append(Violation("distinct events",
                                 f"events {seen[key]} and {e} have the same preset and postset"))
        else:
            seen[key] = e
    used = set()
    for e in n.transitions:
        used |= n.pre(e) | n.post(e)
    for b in sorted(n.places - used - n.initial.support):
        out.append(Violation("no isolated conditions", f"isolated condition {b}"))
    fwd_net = n.restrict(forward)
    for v in occurrence_net_violations(fwd_net, cap):
        out.append(Violation("forward subnet: " + v.rule, v.message))
    if not out:
        try:
            if not is_safe(n, cap):
                out.append(Violation("safe", "some reachable marking is not a set"))
        except ExplorationLimitExceeded as exc:
            out.append(Violation("exploration", str(exc)))
    return out


class Rcn:
    """A validated reversible causal net.

    ``undo_map`` sends each reversing event to the forward event it undoes.
    """

    def __init__(self, net: Net, reversing, _checked=False):
        self.net = net
        self.reversing = frozenset(reversing)
        if not _checked:
            bad = rcn_violations(net, self.reversing)
            if bad:
                raise ValidationError("reversible causal net", bad)

    def __eq__(self, other):
        return isinstance(other, Rcn) and (self.net, self.reversing) == (other.net, other.reversing)

    def __hash__(self):
        return hash(("rcn", self.net, self.reversing))

    def __repr__(self):
        return (f"Rcn({len(self.net.places)} conditions, {len(self.forward_events)} forward, "
                f"{len(self.reversing)} reversing)")

    @property
    def conditions(self):
        return self.net.places

    @property
    def events(self):
        return self.net.transitions

    @property
    def initial(self):
        return self.net.initial.support

    @cached_property
    def forward_events(self) -> frozenset:
        return self.net.transitions - self.reversing

    @cached_property
    def undo_map(self) -> dict:
        return {u: _mirrors(self.net, u, self.forward_events)[0] for u in sorted(self.reversing)}

    @cached_property
    def reverser_of(self) -> dict:
        """Inverse of the undo map: forward event to its reversing event."""
        return {e: u for u, e in self.undo_map.items()}

    @cached_property
    def undoable(self) -> frozenset:
        return frozenset(self.undo_map.values())

    @cached_property
    def forward_net(self) -> OccurrenceNet:
        return OccurrenceNet(self.net.restrict(self.forward_events), _checked=True)

    @cached_property
    def _forward_tree(self):
        """BFS tree over forward firings: marking -> (parent marking, event)."""
        n = self.forward_net.net
        start = n.initial
        parent = {start: None}
        queue = deque([start])
        while queue:
            m = queue.popleft()
            for t in sorted(n.transitions):
                if n.pre(t) <= m.support:
                    m2 = m - Multiset(n.pre(t)) + Multiset(n.post(t))
                    if m2 not in parent:
                        parent[m2] = (m, t)
                        queue.append(m2)
        return parent


def validate_rcn(n: Net, reversing) -> Rcn:
    return Rcn(n, reversing)


def future(r: Rcn, e) -> frozenset:
    if e not in r.forward_events:
        raise UnknownId(f"{e!r} is not a forward event")
    return r.forward_net.future(e)


def rcn_configurations(r: Rcn) -> frozenset:
    return r.forward_net.configurations()


def mark(r: Rcn, xs) -> Multiset:
    """Marking reached after performing the configuration ``xs``."""
    xs = frozenset(xs)
    if not r.forward_net.is_configuration(xs):
        raise NotAConfiguration(f"{sorted(xs)} is not a configuration")
    produced, consumed = set(), set()
    for e in xs:
        produced |= r.net.post(e)
        consumed |= r.net.pre(e)
    return Multiset((r.initial | produced) - consumed)


def check_reach_equality(r: Rcn, cap: int = DEFAULT_CAP) -> bool:
    return reachable_markings(r.net, cap) == reachable_markings(r.forward_net.net, cap)


def forward_normalize(r: Rcn, seq: FiringSequence) -> FiringSequence:
    """A firing sequence of forward events only, ending where ``seq`` ends."""
    if seq.start != r.net.initial:
        raise ValueError("firing sequence must start at the initial marking")
    if seq.state.support <= r.forward_events:
        return seq
    tree = r._forward_tree
    target = seq.lead
    if target not in tree:
        raise InvariantViolation(f"marking {target} is not reachable with forward events")
    steps, marks = [], []
    m = target
    while tree[m] is not None:
        prev, t = tree[m]
        steps.append(Multiset([t]))
        marks.append(m)
        m = prev
    return FiringSequence(r.net.initial, tuple(reversed(steps)), tuple(reversed(marks)))


def mixed_step_check(r: Rcn, xs, step):
    """Split a net step at ``mark(xs)`` into forward and undone events.

    Returns ``(forward, undone, target)`` where ``undone`` holds the forward
    events undone by the reversing events of ``step`` and ``target`` is the
    configuration reached. Also confirms that the same step is enabled in the
    associated rPES and that the markings agree.
    """
    from .rpes import enabling_failures
    from .xform import rcn_to_rpes

    xs = frozenset(xs)
    step = frozenset(step)
    m = mark(r, xs)
    for t in step:
        if t not in r.events:
            raise UnknownId(f"unknown event {t!r}")
    if not step_enabled(r.net, m, Multiset(step)):
        raise NotEnabled(f"step {sorted(step)} not enabled at {m}")
    fwd = step - r.reversing
    undone = frozenset(r.undo_map[u] for u in step & r.reversing)
    p = rcn_to_rpes(r)
    bad = enabling_failures(p, xs, fwd, undone)
    if bad:
        raise InvariantViolation(f"net step {sorted(step)} not matched in the event structure: {bad}")
    target = (xs - undone) | fwd
    if mark(r, target) != fire(r.net, m, Multiset(step)):
        raise InvariantViolation("marking of the target configuration differs from the fired marking")
    return fwd, undone, target
