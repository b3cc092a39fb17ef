"""Occurrence nets: validation, causality, conflict, histories, configurations."""

from functools import cached_property

from .core import Violation, transitive_closure
from .errors import ExplorationLimitExceeded, UnknownId, ValidationError
from .petri import DEFAULT_CAP, Net, is_safe


def _find_cycle(n: Net):
    """Return a node on a cycle of the flow graph, or None."""
    succ = {x: sorted(n.post(x)) for x in n.places | n.transitions}
    color = {}
    for root in sorted(succ):
        if root in color:
            continue
        stack = [(root, iter(succ[root]))]
        color[root] = 1
        while stack:
            node, it = stack[-1]
            child = next(it, None)
            if child is None:
                color[node] = 2
                stack.pop()
            elif color.get(child) == 1:
                return child
            elif child not in color:
                color[child] = 1
                stack.append((child, iter(succ[child])))
    return None


def occurrence_net_violations(n: Net, cap: int = DEFAULT_CAP) -> list:
    out = []
    cycle_at = _find_cycle(n)
    if cycle_at is not None:
        out.append(Violation("acyclic", f"flow has a cycle through {cycle_at}"))
    if not n.initial.is_set():
        out.append(Violation("initial set", f"initial marking {n.initial} is not a set"))
    init = n.initial.support
    for b in sorted(n.places):
        producers = n.pre(b)
        if b in init and producers:
            out.append(Violation("initial unproduced",
                                 f"initial condition {b} has producer {sorted(producers)[0]}"))
        if len(producers) > 1:
            out.append(Violation("single producer",
                                 f"condition {b} has {len(producers)} producers"))
        if not producers and b not in init:
            out.append(Violation("rooted", f"condition {b} has no producer and is not initial"))
    for t in sorted(n.transitions):
        if not n.pre(t):
            out.append(Violation("spontaneous", f"spontaneous event {t}"))
    if cycle_at is None:
        # each condition must have an initial ancestor (reflexively)
        order = transitive_closure(n.flow)
        for b in sorted(n.places):
            if b in init:
                continue
            if not any((b0, b) in order for b0 in init):
                out.append(Violation("rooted", f"condition {b} is not rooted in the initial marking"))
    if not out:
        occ = OccurrenceNet(n, _checked=True)
        for e in sorted(n.transitions):
            if (e, e) in occ.conflict:
                out.append(Violation("self conflict", f"event {e} is in conflict with itself"))
    if cycle_at is None and out and not any(v.rule == "spontaneous" for v in out):
        # structure broken: fall back to explicit safety check
        try:
            if not is_safe(n, cap):
                out.append(Violation("safe", "some reachable marking is not a set"))
        except ExplorationLimitExceeded as exc:
            out.append(Violation("exploration", str(exc)))
    return out


class OccurrenceNet:
    """A net known to satisfy the occurrence-net conditions, plus derived data.

    Conditions are the net's places and events its transitions. A net passing
    the structural conditions is safe, so no reachability check is needed on
    success.
    """

    def __init__(self, net: Net, _checked=False):
        self.net = net
        if not _checked:
            bad = occurrence_net_violations(net)
            if bad:
                raise ValidationError("occurrence net", bad)

    def __eq__(self, other):
        return isinstance(other, OccurrenceNet) and self.net == other.net

    def __hash__(self):
        return hash(("on", self.net))

    def __repr__(self):
        return f"OccurrenceNet({len(self.net.places)} conditions, {len(self.net.transitions)} events)"

    @property
    def conditions(self):
        return self.net.places

    @property
    def events(self):
        return self.net.transitions

    @property
    def initial(self):
        return self.net.initial.support

    def pre(self, x):
        return self.net.pre(x)

    def post(self, x):
        return self.net.post(x)

    @cached_property
    def flow_order(self) -> frozenset:
        """Strict order induced by the flow on all net elements."""
        return transitive_closure(self.net.flow)

    @cached_property
    def causality(self) -> frozenset:
        """Strict causality between events."""
        ev = self.events
        return frozenset((x, y) for x, y in self.flow_order if x in ev and y in ev)

    @cached_property
    def _histories(self):
        hist = {e: {e} for e in self.events}
        for x, y in self.causality:
            hist[y].add(x)
        return {e: frozenset(h) for e, h in hist.items()}

    def history(self, e) -> frozenset:
        try:
            return self._histories[e]
        except KeyError:
            raise UnknownId(f"unknown event {e!r}") from None

    def future(self, e) -> frozenset:
        if e not in self.events:
            raise UnknownId(f"unknown event {e!r}")
        return frozenset(y for x, y in self.causality if x == e)

    @cached_property
    def immediate_conflict(self) -> frozenset:
        ev = sorted(self.events)
        out = set()
        for i, e in enumerate(ev):
            for e2 in ev[i + 1:]:
                if self.pre(e) & self.pre(e2):
                    out.add((e, e2))
                    out.add((e2, e))
        return frozenset(out)

    @cached_property
    def conflict(self) -> frozenset:
        ups = {e: [x for x in self.events if e in self._histories[x]] for e in self.events}
        out = set()
        for y, y2 in self.immediate_conflict:
            for x in ups[y]:
                for x2 in ups[y2]:
                    out.add((x, x2))
        return frozenset(out)

    def conflict_free(self, xs) -> bool:
        xs = list(xs)
        return not any((a, b) in self.conflict for a in xs for b in xs if a != b)

    def is_configuration(self, xs) -> bool:
        xs = frozenset(xs)
        if not xs <= self.events:
            return False
        return self.conflict_free(xs) and all(self._histories[e] <= xs for e in xs)

    @cached_property
    def _topo_events(self):
        return sorted(self.events, key=lambda e: (len(self._histories[e]), e))

    def configurations(self) -> frozenset:
        """All conflict-free, left-closed event sets (backtracking search)."""
        order = self._topo_events
        confl = {e: {y for x, y in self.conflict if x == e} for e in self.events}
        out = []

        def go(i, chosen, blocked):
            if i == len(order):
                out.append(frozenset(chosen))
                return
            e = order[i]
            go(i + 1, chosen, blocked)
            if e not in blocked and self._histories[e] - {e} <= chosen:
                chosen.add(e)
                go(i + 1, chosen, blocked | confl[e])
                chosen.discard(e)

        go(0, set(), frozenset())
        return frozenset(out)


def validate_occurrence_net(n: Net) -> OccurrenceNet:
    return OccurrenceNet(n)


def on_configurations(c: OccurrenceNet) -> frozenset:
    return c.configurations()


def history(c: OccurrenceNet, e) -> frozenset:
    return c.history(e)


def conflict(c: OccurrenceNet) -> frozenset:
    return c.conflict
