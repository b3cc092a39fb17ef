import warnings

import pytest

from revnets import fixtures as F
from revnets.errors import CarrierTooLarge
from revnets.es import Pes, ppes_configurations
from revnets.rcn import rcn_configurations
from revnets.rpes import is_causal, rpes_configurations
from revnets.xform import (
    BOTTOM, NonCausalWarning, cond, conflict_cliques, decode, flow_successor_order, fwd,
    is_isomorphic, net_isomorphism, on_to_pes, pes_to_on, rcn_rpes_configurations_agree,
    rcn_to_rpes, rename_rpes, rev, reversify, rpes_to_rcn, untag,
)

S = frozenset


def sym(*pairs):
    return S(pairs) | S((y, x) for x, y in pairs)


def test_encodings_round_trip():
    assert decode(fwd("e1")) == ("f", "e1")
    assert decode(rev("e1")) == ("r", "e1")
    assert decode(cond("a", ["c", "b"])) == ("cond", "a", S({"b", "c"}))
    assert decode(cond(BOTTOM, [])) == ("cond", BOTTOM, S())
    assert decode(cond(fwd("x"), [cond("a", ["b"])])) == ("cond", "f(x)", S({"cond(a,{b})"}))
    assert decode("b1") == ("plain", "b1")
    assert untag("f(a)") == "a" and untag("r(a)") == "a" and untag("b1") == "b1"


def test_conflict_cliques():
    got = set(conflict_cliques("abc", sym(("a", "b"), ("b", "c"), ("a", "c"))))
    assert got == {S(), S("a"), S("b"), S("c"), S("ab"), S("bc"), S("ac"), S("abc")}
    assert set(conflict_cliques("ab", S())) == {S(), S("a"), S("b")}


def test_event_structures_of_the_occurrence_net_fixtures():
    assert on_to_pes(F.concurrent_pair()) == Pes({"e1", "e2"}, S(), S())
    assert on_to_pes(F.conflict_pair()) == Pes({"e1", "e2"}, S(), sym(("e1", "e2")))
    assert on_to_pes(F.sequence_pair()) == Pes({"e1", "e2"}, {("e1", "e2")}, S())
    chains = on_to_pes(F.conflicting_chains())
    assert chains.causality == {("e1", "e3"), ("e2", "e4")}
    inherited = sym(("e1", "e4"), ("e2", "e3"), ("e3", "e4"))
    assert chains.conflict == sym(("e1", "e2")) | inherited


def test_causality_is_flow_order():
    for make in F.OCCURRENCE_NETS.values():
        c = make()
        assert flow_successor_order(c) == c.causality


def test_pes_to_on_round_trip():
    for make in F.OCCURRENCE_NETS.values():
        p = on_to_pes(make())
        c = pes_to_on(p)
        assert ppes_configurations(p) == c.configurations()
        assert on_to_pes(c) == p


def test_pes_to_on_of_a_pair_in_conflict():
    c = pes_to_on(Pes({"a", "b"}, S(), sym(("a", "b"))))
    assert c.initial == {cond(BOTTOM, []), cond(BOTTOM, ["a"]), cond(BOTTOM, ["b"]),
                         cond(BOTTOM, ["a", "b"])}
    assert c.conditions == c.initial | {cond("a", []), cond("b", [])}


def test_carrier_limit():
    with pytest.raises(CarrierTooLarge):
        pes_to_on(Pes(set("abc")), max_events=2)


def test_reversify_reconstructs_the_reversible_fixtures():
    r1 = reversify(F.concurrent_pair(), {"e1", "e2"})
    assert is_isomorphic(r1, F.reversible_concurrent_pair())
    r2 = reversify(F.conflict_pair(), {"e1"})
    assert is_isomorphic(r2, F.reversible_conflict_pair())
    r3 = reversify(F.conflicting_chains(), {"e1", "e3", "e4"})
    assert is_isomorphic(r3, F.reversible_conflicting_chains())
    assert not is_isomorphic(r3, reversify(F.conflicting_chains(), {"e1", "e2", "e3"}))
    iso = net_isomorphism(r3, F.reversible_conflicting_chains())
    assert iso["r(e3)"] == "ē3" and iso["f(e2)"] == "e2"
    with pytest.raises(ValueError):
        reversify(F.conflict_pair(), {"zz"})


def test_isomorphism_respects_reversing_flag():
    r = F.reversible_concurrent_pair()
    assert not is_isomorphic(r.net, r.net, reversing1={"ē1"}, reversing2={"e1"})


def test_rpes_of_reversible_chains():
    p = rcn_to_rpes(F.reversible_conflicting_chains())
    assert p.undoable == {"e1", "e3", "e4"}
    assert p.revcausality == {("e1", "e1"), ("e3", "e3"), ("e4", "e4")}
    assert p.prevention == {("e3", "e1")}
    assert is_causal(p)


def test_net_configurations_match_the_rpes():
    for make in F.REVERSIBLE_NETS.values():
        assert rcn_rpes_configurations_agree(make())


def test_net_of_the_four_event_structure():
    p = F.four_event_causal_rpes()
    r = rpes_to_rcn(p)
    # the drawn conditions plus an initial condition consumed by nothing
    assert len(r.conditions) == 15
    assert cond(BOTTOM, []) in r.initial
    assert r.reversing == {"r(e1)", "r(e3)"}
    assert {S(map(untag, x)) for x in rcn_configurations(r)} == rpes_configurations(p)
    assert rename_rpes(rcn_to_rpes(r), untag) == p


def test_non_causal_input_warns_and_loses_a_configuration():
    p = F.non_causal_chain_rpes()
    rpes_to_rcn.cache_clear()
    with pytest.warns(NonCausalWarning):
        r = rpes_to_rcn(p)
    assert S({"e2"}) in rpes_configurations(p)
    assert S({"f(e2)"}) not in rcn_configurations(r)


def test_causal_input_does_not_warn():
    rpes_to_rcn.cache_clear()
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        rpes_to_rcn(F.abc_causal_rpes())


def test_empty_structure():
    r = rpes_to_rcn(F.empty_rpes())
    assert r.events == S() and r.conditions == {cond(BOTTOM, [])}
    assert rcn_configurations(r) == {S()}
