"""Safe Petri nets with step semantics.

A step is a multiset of transitions. It is enabled at marking ``m`` when the
summed preset fits into ``m``; firing it removes the summed preset and adds
the summed postset.
"""

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from .core import Multiset, Violation
from .errors import ExplorationLimitExceeded, NotEnabled, UnknownId

DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class Net:
    places: frozenset
    transitions: frozenset
    flow: frozenset
    initial: Multiset = field(default_factory=Multiset)

    def __post_init__(self):
        object.__setattr__(self, "places", frozenset(self.places))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "flow", frozenset(tuple(p) for p in self.flow))
        init = self.initial
        if not isinstance(init, Multiset):
            init = Multiset(init)
        object.__setattr__(self, "initial", init)
        nodes = self.places | self.transitions
        for x, y in self.flow:
            for z in (x, y):
                if z not in nodes:
                    raise UnknownId(f"flow arc ({x}, {y}) mentions unknown node {z!r}")
        for p in init.support:
            if p not in self.places:
                raise UnknownId(f"initial marking mentions unknown place {p!r}")

    @cached_property
    def _pre(self):
        pre = {x: [] for x in self.places | self.transitions}
        for x, y in self.flow:
            pre[y].append(x)
        return {x: frozenset(v) for x, v in pre.items()}

    @cached_property
    def _post(self):
        post = {x: [] for x in self.places | self.transitions}
        for x, y in self.flow:
            post[x].append(y)
        return {x: frozenset(v) for x, v in post.items()}

    def pre(self, x) -> frozenset:
        try:
            return self._pre[x]
        except KeyError:
            raise UnknownId(f"unknown node {x!r}") from None

    def post(self, x) -> frozenset:
        try:
            return self._post[x]
        except KeyError:
            raise UnknownId(f"unknown node {x!r}") from None

    def restrict(self, transitions) -> "Net":
        """Same places and marking, keeping only the given transitions."""
        keep = frozenset(transitions)
        flow = {(x, y) for x, y in self.flow if x in keep or y in keep}
        return Net(self.places, keep, flow, self.initial)


def preset(n: Net, x) -> Multiset:
    return Multiset(n.pre(x))


def postset(n: Net, x) -> Multiset:
    return Multiset(n.post(x))


def _as_step(n: Net, step) -> Multiset:
    step = step if isinstance(step, Multiset) else Multiset(step)
    for t in step.support:
        if t not in n.transitions:
            raise UnknownId(f"unknown transition {t!r}")
    return step


def step_pre(n: Net, step) -> Multiset:
    step = _as_step(n, step)
    out = Multiset()
    for t, k in step.items():
        out = out + Multiset(n.pre(t)).scale(k)
    return out


def step_post(n: Net, step) -> Multiset:
    step = _as_step(n, step)
    out = Multiset()
    for t, k in step.items():
        out = out + Multiset(n.post(t)).scale(k)
    return out


def step_enabled(n: Net, m, step) -> bool:
    m = m if isinstance(m, Multiset) else Multiset(m)
    return step_pre(n, step) <= m


def fire(n: Net, m, step) -> Multiset:
    m = m if isinstance(m, Multiset) else Multiset(m)
    need = step_pre(n, step)
    if not need <= m:
        missing = [p for p, k in need.items() if m[p] < k]
        raise NotEnabled(
            f"step {Multiset(step)} not enabled at {m}",
            [f"place {p} lacks tokens" for p in missing],
        )
    return m - need + step_post(n, step)


@dataclass(frozen=True)
class FiringSequence:
    """A start marking followed by steps and the markings they produce."""

    start: Multiset
    steps: tuple = ()
    markings: tuple = ()

    @property
    def lead(self) -> Multiset:
        return self.markings[-1] if self.markings else self.start

    @property
    def remains(self) -> "FiringSequence":
        """The sequence without its first step."""
        if not self.steps:
            return self
        return FiringSequence(self.markings[0], self.steps[1:], self.markings[1:])

    @property
    def state(self) -> Multiset:
        out = Multiset()
        for s in self.steps:
            out = out + s
        return out

    def __len__(self):
        return len(self.steps)


def firing_sequence(n: Net, steps, start=None) -> FiringSequence:
    """Replay ``steps`` from ``start`` (default: the initial marking)."""
    m = n.initial if start is None else Multiset(start)
    begin = m
    ms, ss = [], []
    for s in steps:
        s = _as_step(n, s)
        m = fire(n, m, s)
        ss.append(s)
        ms.append(m)
    return FiringSequence(begin, tuple(ss), tuple(ms))


def _successors(n: Net, m: Multiset):
    for t in sorted(n.transitions):
        pre = n.pre(t)
        if all(m[p] >= 1 for p in pre):
            yield t, m - Multiset(pre) + Multiset(n.post(t))


def reachable_markings(n: Net, cap: int = DEFAULT_CAP) -> frozenset:
    """All markings reachable from the initial one.

    Single-transition firings suffice: a step fires iff some interleaving of
    its transitions does.
    """
    seen = {n.initial}
    queue = deque([n.initial])
    while queue:
        m = queue.popleft()
        for _t, m2 in _successors(n, m):
            if m2 not in seen:
                seen.add(m2)
                if len(seen) > cap:
                    raise ExplorationLimitExceeded(f"more than {cap} markings")
                queue.append(m2)
    return frozenset(seen)


def states(n: Net, max_length: Optional[int] = None, cap: int = DEFAULT_CAP) -> frozenset:
    """Multisets of transitions fired along some firing sequence.

    With ``max_length`` only sequences of at most that many transitions are
    considered; this is needed for nets with reversing transitions, whose
    state sets are infinite.
    """
    start = (n.initial, Multiset())
    seen = {start}
    frontier = [start]
    depth = 0
    while frontier and (max_length is None or depth < max_length):
        nxt = []
        for m, x in frontier:
            for t, m2 in _successors(n, m):
                item = (m2, x + Multiset([t]))
                if item not in seen:
                    seen.add(item)
                    if len(seen) > cap:
                        raise ExplorationLimitExceeded(f"more than {cap} states")
                    nxt.append(item)
        frontier = nxt
        depth += 1
    return frozenset(x for _m, x in seen)


def is_safe(n: Net, cap: int = DEFAULT_CAP) -> bool:
    return all(m.is_set() for m in reachable_markings(n, cap))


def net_violations(n: Net, cap: int = DEFAULT_CAP) -> list:
    """Standing assumptions on nets that ``n`` breaks (empty list when fine)."""
    out = []
    overlap = n.places & n.transitions
    for x in sorted(overlap):
        out.append(Violation("disjoint", f"{x} is both a place and a transition"))
    for x, y in sorted(n.flow):
        if not ((x in n.places and y in n.transitions) or (x in n.transitions and y in n.places)):
            out.append(Violation("bipartite", f"arc ({x}, {y}) does not join a place and a transition"))
    for t in sorted(n.transitions):
        if not n.pre(t):
            out.append(Violation("spontaneous", f"spontaneous transition {t}"))
    if overlap or any(v.rule == "spontaneous" for v in out):
        # a spontaneous transition with outputs makes the net unbounded
        return out
    try:
        reach = reachable_markings(n, cap)
    except ExplorationLimitExceeded as exc:
        out.append(Violation("exploration", str(exc)))
        return out
    fired = set()
    for m in reach:
        fired.update(t for t, _ in _successors(n, m))
    for t in sorted(n.transitions - fired):
        if n.pre(t):
            out.append(Violation("dead transition", f"transition never fires: {t}"))
    marked = set()
    for m in reach:
        marked |= m.support
    for p in sorted(n.places - marked):
        out.append(Violation("dead place", f"place never marked: {p}"))
    return out


def validate_net(n: Net, cap: int = DEFAULT_CAP) -> list:
    """Report-style validation; same as ``net_violations``."""
    return net_violations(n, cap)
