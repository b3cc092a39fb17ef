"""Translations between occurrence nets, event structures and reversible nets.

Generated identifiers use printable encodings so documents round-trip:

* ``f(e)`` is the forward copy of event ``e`` and ``r(e)`` its reversing event;
* ``cond(a,{e1,e2})`` is the condition with owner ``a`` (``⊥`` for initial
  conditions) and the set of events that consume it, sorted.
"""

import warnings
from functools import lru_cache

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from .core import Multiset, transitive_closure
from .errors import CarrierTooLarge, InvariantViolation
from .es import Pes, PrePes, ppes_configurations
from .occnet import OccurrenceNet
from .petri import Net
from .rcn import Rcn, rcn_configurations
from .rpes import Rpes, is_causal, rpes_configurations

BOTTOM = "⊥"
DEFAULT_MAX_EVENTS = 16


class NonCausalWarning(UserWarning):
    pass


def fwd(e) -> str:
    return f"f({e})"


def rev(e) -> str:
    return f"r({e})"


def cond(owner, consumers) -> str:
    return f"cond({owner},{{{','.join(sorted(consumers))}}})"


def _split_top(text):
    """Split on commas that are not nested in parentheses or braces."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def decode(name):
    """Inverse of the encodings: returns ``("f", e)``, ``("r", e)``,
    ``("cond", owner, frozenset)`` or ``("plain", name)``."""
    if name.startswith("f(") and name.endswith(")"):
        return ("f", name[2:-1])
    if name.startswith("r(") and name.endswith(")"):
        return ("r", name[2:-1])
    if name.startswith("cond(") and name.endswith(")"):
        owner, members = _split_top(name[5:-1])
        if not (members.startswith("{") and members.endswith("}")):
            raise ValueError(f"malformed condition id {name!r}")
        inner = members[1:-1]
        items = frozenset(_split_top(inner)) if inner else frozenset()
        return ("cond", owner, items)
    return ("plain", name)


def untag(name):
    """``f(e)`` and ``r(e)`` to ``e``; anything else unchanged."""
    kind = decode(name)
    return kind[1] if kind[0] in ("f", "r") else name


def conflict_cliques(events, conflict):
    """All subsets of ``events`` whose members are pairwise in conflict, ∅ included."""
    g = nx.Graph()
    g.add_nodes_from(events)
    g.add_edges_from((x, y) for x, y in conflict if x in g and y in g and x != y)
    out = [frozenset()]
    out.extend(frozenset(c) for c in nx.enumerate_all_cliques(g))
    return out


def on_to_pes(c: OccurrenceNet, check: bool = True) -> Pes:
    """Event structure of an occurrence net: its causality and conflict."""
    p = Pes(c.events, c.causality, c.conflict)
    if check and ppes_configurations(p) != c.configurations():
        raise InvariantViolation("configurations of the net and its event structure differ")
    return p


def _condition_carrier(events, order, conflict, max_events):
    if len(events) > max_events:
        raise CarrierTooLarge(f"{len(events)} events exceed the limit of {max_events}")
    conds = []
    for a_set in conflict_cliques(events, conflict):
        conds.append((BOTTOM, a_set))
    succ = {e: set() for e in events}
    for x, y in order:
        succ[x].add(y)
    for a in sorted(events):
        for a_set in conflict_cliques(succ[a], conflict):
            conds.append((a, a_set))
    return conds


def pes_to_on(p: PrePes, max_events: int = DEFAULT_MAX_EVENTS, check: bool = True) -> OccurrenceNet:
    """Occurrence net whose conditions are pairs (owner, set of pairwise conflicting consumers)."""
    conds = _condition_carrier(p.events, p.causality, p.conflict, max_events)
    flow = set()
    for a, a_set in conds:
        b = cond(a, a_set)
        for e in a_set:
            flow.add((b, e))
        if a != BOTTOM:
            flow.add((a, b))
    places = {cond(a, s) for a, s in conds}
    init = Multiset(cond(a, s) for a, s in conds if a == BOTTOM)
    c = OccurrenceNet(Net(places, p.events, flow, init), _checked=not check)
    if check and c.configurations() != ppes_configurations(p):
        raise InvariantViolation("configurations of the event structure and its net differ")
    return c


def reversify(c: OccurrenceNet, undoable, check: bool = True) -> Rcn:
    """Add a reversing event ``r(e)`` for each ``e`` in ``undoable``; forward events become ``f(e)``."""
    undoable = frozenset(undoable)
    if not undoable <= c.events:
        raise ValueError(f"not events of the net: {sorted(undoable - c.events)}")
    flow = set()
    for x, y in c.net.flow:
        if x in c.events:
            flow.add((fwd(x), y))
            if x in undoable:
                flow.add((y, rev(x)))
        else:
            flow.add((x, fwd(y)))
            if y in undoable:
                flow.add((rev(y), x))
    events = {fwd(e) for e in c.events} | {rev(u) for u in undoable}
    net = Net(c.conditions, events, flow, c.net.initial)
    return Rcn(net, {rev(u) for u in undoable}, _checked=not check)


@lru_cache(maxsize=512)
def rcn_to_rpes(r: Rcn, check: bool = True) -> Rpes:
    """Causal event structure of a reversible causal net."""
    c = r.forward_net
    undoable = r.undoable
    prevention = frozenset((e, u) for u in undoable for e in c.future(u))
    p = Rpes(c.events, undoable, c.causality, c.conflict,
             frozenset((u, u) for u in undoable), prevention)
    if check and not is_causal(p):
        raise InvariantViolation("event structure of a reversible causal net is not causal")
    return p


@lru_cache(maxsize=512)
def rpes_to_rcn(p: Rpes, max_events: int = DEFAULT_MAX_EVENTS, check: bool = True) -> Rcn:
    """Reversible causal net of a causal rPES.

    Forward events are ``f(e)`` and reversing events ``r(u)``. Non-causal
    inputs are accepted with a :class:`NonCausalWarning`.
    """
    if not is_causal(p):
        warnings.warn("input is not causal; configurations may not correspond",
                      NonCausalWarning, stacklevel=2)
    conds = _condition_carrier(p.events, p.causality, p.conflict, max_events)
    flow = set()
    for a, a_set in conds:
        b = cond(a, a_set)
        for e in a_set:
            flow.add((b, fwd(e)))
            if e in p.undoable:
                flow.add((rev(e), b))
        if a != BOTTOM:
            flow.add((fwd(a), b))
            if a in p.undoable:
                flow.add((b, rev(a)))
    places = {cond(a, s) for a, s in conds}
    init = Multiset(cond(a, s) for a, s in conds if a == BOTTOM)
    events = {fwd(e) for e in p.events} | {rev(u) for u in p.undoable}
    return Rcn(Net(places, events, flow, init), {rev(u) for u in p.undoable}, _checked=not check)


def rename_rpes(p: Rpes, fn) -> Rpes:
    """Apply ``fn`` to every event name."""
    def pairs(rel):
        return frozenset((fn(x), fn(y)) for x, y in rel)
    return Rpes(frozenset(map(fn, p.events)), frozenset(map(fn, p.undoable)),
                pairs(p.causality), pairs(p.conflict), pairs(p.revcausality), pairs(p.prevention))


def flow_successor_order(c: OccurrenceNet) -> frozenset:
    """Transitive closure of the direct event succession e• ∩ •e' ≠ ∅."""
    direct = {(e, e2) for e in c.events for e2 in c.events if c.post(e) & c.pre(e2)}
    return transitive_closure(direct)


def _net_graph(n: Net, reversing=frozenset()):
    g = nx.DiGraph()
    for p in n.places:
        g.add_node(p, kind="place", tokens=n.initial[p])
    for t in n.transitions:
        g.add_node(t, kind="transition", rev=t in reversing)
    g.add_edges_from(n.flow)
    return g


def _node_match(a, b):
    return a == b


def net_isomorphism(n1, n2, reversing1=frozenset(), reversing2=frozenset()):
    """A renaming of ``n1`` onto ``n2`` respecting flow, marking and the
    reversing flag, or None. Accepts nets, occurrence nets or RCNs."""
    if isinstance(n1, Rcn):
        n1, reversing1 = n1.net, n1.reversing
    if isinstance(n2, Rcn):
        n2, reversing2 = n2.net, n2.reversing
    if isinstance(n1, OccurrenceNet):
        n1 = n1.net
    if isinstance(n2, OccurrenceNet):
        n2 = n2.net
    g1, g2 = _net_graph(n1, reversing1), _net_graph(n2, reversing2)
    m = DiGraphMatcher(g1, g2, node_match=_node_match)
    if not m.is_isomorphic():
        return None
    return dict(m.mapping)


def is_isomorphic(n1, n2, **kw) -> bool:
    return net_isomorphism(n1, n2, **kw) is not None


def rcn_rpes_configurations_agree(r: Rcn) -> bool:
    return rcn_configurations(r) == rpes_configurations(rcn_to_rpes(r))
