"""Small hand-built structures used by tests, documentation and the CLI.

Reversing events in the hand-written nets are named ``ē1``, ``ē2``, ...
"""

from .core import Multiset
from .occnet import OccurrenceNet
from .petri import Net
from .rcn import Rcn
from .rpes import Rpes, causal_rpes


def _net(arcs, initial, transitions=None):
    """Build a net from ``(pre, t, post)`` triples."""
    places, trans, flow = set(initial), set(transitions or ()), set()
    for pre, t, post in arcs:
        trans.add(t)
        for b in pre:
            places.add(b)
            flow.add((b, t))
        for b in post:
            places.add(b)
            flow.add((t, b))
    return Net(places, trans, flow, Multiset(initial))


def concurrent_pair() -> OccurrenceNet:
    """Two independent events e1, e2."""
    return OccurrenceNet(_net([(["b1"], "e1", ["b2"]), (["b3"], "e2", ["b4"])], ["b1", "b3"]))


def conflict_pair() -> OccurrenceNet:
    """Two events competing for the same initial condition."""
    return OccurrenceNet(_net([(["b1"], "e1", ["b2"]), (["b1"], "e2", ["b3"])], ["b1"]))


def sequence_pair() -> OccurrenceNet:
    """e1 followed by e2."""
    return OccurrenceNet(_net([(["b1"], "e1", ["b2"]), (["b2"], "e2", ["b3"])], ["b1"]))


def conflicting_chains() -> OccurrenceNet:
    """e1 # e2 with e1 < e3 and e2 < e4."""
    return OccurrenceNet(_net([
        (["b1"], "e1", ["b2"]), (["b1"], "e2", ["b3"]),
        (["b2"], "e3", ["b4"]), (["b3"], "e4", ["b5"]),
    ], ["b1"]))


def _with_reversing(c: OccurrenceNet, undo) -> Rcn:
    arcs = [(sorted(c.pre(e)), e, sorted(c.post(e))) for e in c.events]
    arcs += [(sorted(c.post(e)), u, sorted(c.pre(e))) for u, e in undo.items()]
    return Rcn(_net(arcs, sorted(c.initial)), set(undo))


def reversible_concurrent_pair() -> Rcn:
    return _with_reversing(concurrent_pair(), {"ē1": "e1", "ē2": "e2"})


def reversible_conflict_pair() -> Rcn:
    return _with_reversing(conflict_pair(), {"ē1": "e1"})


def reversible_conflicting_chains() -> Rcn:
    return _with_reversing(conflicting_chains(), {"ē1": "e1", "ē3": "e3", "ē4": "e4"})


def abc_rpes() -> Rpes:
    """a < b, all undoable; undoing a needs c present and b absent."""
    return Rpes.build("abc", "abc", [("a", "b")],
                      revcausality=[("a", "a"), ("b", "b"), ("c", "c"), ("c", "a")],
                      prevention=[("b", "a")])


def abc_out_of_order_rpes() -> Rpes:
    """Like :func:`abc_rpes` but a blocks undoing b, so a can be undone before b."""
    return Rpes.build("abc", "abc", [("a", "b")],
                      revcausality=[("a", "a"), ("b", "b"), ("c", "c"), ("c", "a")],
                      prevention=[("a", "b")])


def abc_causal_rpes() -> Rpes:
    """:func:`abc_rpes` without the extra requirement on c."""
    return Rpes.build("abc", "abc", [("a", "b")],
                      revcausality=[("a", "a"), ("b", "b"), ("c", "c")],
                      prevention=[("b", "a")])


def four_event_causal_rpes() -> Rpes:
    """e1 < e3, e2 < e4, e1 # e2 (inherited), e1 and e3 undoable."""
    conflict = [("e1", "e2"), ("e1", "e4"), ("e2", "e3"), ("e3", "e4")]
    return causal_rpes(["e1", "e2", "e3", "e4"], ["e1", "e3"],
                       [("e1", "e3"), ("e2", "e4")], conflict)


def non_causal_chain_rpes() -> Rpes:
    """e1 < e2 with e1 undoable and nothing preventing its undo."""
    return Rpes.build(["e1", "e2"], ["e1"], [("e1", "e2")])


def single_event_rpes() -> Rpes:
    return causal_rpes(["a"], ["a"])


def empty_rpes() -> Rpes:
    return Rpes(frozenset())


OCCURRENCE_NETS = {
    "concurrent_pair": concurrent_pair,
    "conflict_pair": conflict_pair,
    "sequence_pair": sequence_pair,
    "conflicting_chains": conflicting_chains,
}

REVERSIBLE_NETS = {
    "reversible_concurrent_pair": reversible_concurrent_pair,
    "reversible_conflict_pair": reversible_conflict_pair,
    "reversible_conflicting_chains": reversible_conflicting_chains,
}

EVENT_STRUCTURES = {
    "abc_rpes": abc_rpes,
    "abc_out_of_order_rpes": abc_out_of_order_rpes,
    "abc_causal_rpes": abc_causal_rpes,
    "four_event_causal_rpes": four_event_causal_rpes,
    "non_causal_chain_rpes": non_causal_chain_rpes,
    "single_event_rpes": single_event_rpes,
}

CAUSAL_EVENT_STRUCTURES = ("abc_causal_rpes", "four_event_causal_rpes", "single_event_rpes")
