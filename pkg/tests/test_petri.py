import pytest

from revnets.core import Multiset, mset
from revnets.errors import ExplorationLimitExceeded, NotEnabled, UnknownId
from revnets.petri import (
    Net, fire, firing_sequence, is_safe, net_violations, reachable_markings, states,
    step_enabled, step_post, step_pre,
)


def fork():
    """t splits p into q and r; u and v consume them independently."""
    return Net({"p", "q", "r", "s", "w"}, {"t", "u", "v"},
               {("p", "t"), ("t", "q"), ("t", "r"), ("q", "u"), ("u", "s"),
                ("r", "v"), ("v", "w")},
               mset("p"))


def test_unknown_ids_rejected():
    with pytest.raises(UnknownId):
        Net({"p"}, {"t"}, {("p", "x")})
    with pytest.raises(UnknownId):
        Net({"p"}, {"t"}, set(), mset("q"))
    with pytest.raises(UnknownId):
        fork().pre("nope")
    with pytest.raises(UnknownId):
        step_enabled(fork(), mset("p"), ["nope"])


def test_step_firing():
    n = fork()
    m = fire(n, n.initial, ["t"])
    assert m == mset("q", "r")
    assert step_enabled(n, m, ["u", "v"])
    assert fire(n, m, ["u", "v"]) == mset("s", "w")
    assert step_pre(n, ["u", "v"]) == mset("q", "r")
    assert step_post(n, ["u", "v"]) == mset("s", "w")


def test_autoconcurrent_step_needs_double_tokens():
    n = fork()
    assert not step_enabled(n, mset("q", "r"), Multiset({"u": 2}))


def test_not_enabled_reports_missing_place():
    n = fork()
    with pytest.raises(NotEnabled) as info:
        fire(n, n.initial, ["u"])
    assert info.value.reasons == ["place q lacks tokens"]


def test_firing_sequence_parts():
    n = fork()
    seq = firing_sequence(n, [["t"], ["u", "v"]])
    assert len(seq) == 2
    assert seq.lead == mset("s", "w")
    assert seq.state == mset("t", "u", "v")
    assert seq.remains.start == mset("q", "r")
    assert len(seq.remains) == 1


def test_reachable_markings_and_states():
    n = fork()
    assert reachable_markings(n) == {mset("p"), mset("q", "r"), mset("s", "r"),
                                     mset("q", "w"), mset("s", "w")}
    assert states(n) == {Multiset(), mset("t"), mset("t", "u"), mset("t", "v"),
                         mset("t", "u", "v")}
    assert states(n, max_length=1) == {Multiset(), mset("t")}
    assert is_safe(n)


def test_exploration_cap():
    with pytest.raises(ExplorationLimitExceeded):
        reachable_markings(fork(), cap=2)


def test_unsafe_net_detected():
    n = Net({"p", "q"}, {"t"}, {("p", "t"), ("t", "q")}, Multiset({"p": 2}))
    assert not is_safe(n)


def test_net_violations():
    assert net_violations(fork()) == []
    spont = Net({"p"}, {"t"}, {("t", "p")})
    assert [v.rule for v in net_violations(spont)] == ["spontaneous"]
    dead = Net({"p", "q", "r"}, {"t"}, {("q", "t"), ("t", "r")}, mset("p"))
    rules = [v.rule for v in net_violations(dead)]
    assert "dead transition" in rules and "dead place" in rules
    bad = Net({"p", "q"}, {"t"}, {("p", "q"), ("p", "t")}, mset("p"))
    assert "bipartite" in [v.rule for v in net_violations(bad)]
    both = Net({"x"}, {"x"}, set())
    assert [v.rule for v in net_violations(both)] == ["disjoint", "spontaneous"]
