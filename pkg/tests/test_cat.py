import itertools

import pytest

from revnets import fixtures as F
from revnets.cat import (
    BETA_READINGS, EsMorphism, NetMorphism, compose, coreflection_check, functor_C, functor_E,
    identity, is_morphism, is_on_morphism, is_pes_morphism, is_rcn_morphism, is_rpes_morphism,
    mediating_morphisms, morphism_violations, on_morphism_violations, rcn_morphism_violations,
    rpes_morphism_violations, unit,
)
from revnets.errors import InvalidMorphism, SearchSpaceTooLarge, TypeMismatch
from revnets.rpes import causal_rpes
from revnets.xform import on_to_pes, rcn_to_rpes, rpes_to_rcn


def es_morphisms(p, q):
    src, dst = sorted(p.events), [None] + sorted(q.events)
    for choice in itertools.product(dst, repeat=len(src)):
        m = EsMorphism.of(p, q, {x: y for x, y in zip(src, choice) if y is not None})
        if is_rpes_morphism(m):
            yield m


def pair_to_conflict():
    """Keep e1 of the concurrent pair and send it to e1 of the conflict pair."""
    return NetMorphism.of(F.concurrent_pair(), F.conflict_pair(),
                          [("b1", "b1"), ("b2", "b2")], {"e1": "e1"})


def conflict_to_chains():
    """Include the conflict pair as the first step of the conflicting chains."""
    return NetMorphism.of(F.conflict_pair(), F.conflicting_chains(),
                          [("b1", "b1"), ("b2", "b2"), ("b3", "b3")],
                          {"e1": "e1", "e2": "e2"})


def reversible_pair_to_conflict():
    return NetMorphism.of(F.reversible_concurrent_pair(), F.reversible_conflict_pair(),
                          [("b1", "b1"), ("b2", "b2")], {"e1": "e1", "ē1": "ē1"})


def reversible_conflict_to_chains():
    return NetMorphism.of(F.reversible_conflict_pair(), F.reversible_conflicting_chains(),
                          [("b1", "b1"), ("b2", "b2"), ("b3", "b3")],
                          {"e1": "e1", "e2": "e2", "ē1": "ē1"})


def test_identities_are_morphisms():
    for make in [*F.OCCURRENCE_NETS.values(), *F.REVERSIBLE_NETS.values(),
                 *F.EVENT_STRUCTURES.values()]:
        x = make()
        assert is_morphism(identity(x))
    assert is_pes_morphism(identity(on_to_pes(F.conflicting_chains())))
    with pytest.raises(TypeMismatch):
        identity(42)


def test_occurrence_net_morphisms():
    assert is_on_morphism(pair_to_conflict())
    assert is_on_morphism(conflict_to_chains())
    # the chains cannot be folded onto the pair: e3 would be unmapped while
    # its precondition b2 has to be related
    fold = NetMorphism.of(F.conflicting_chains(), F.conflict_pair(),
                          [("b1", "b1"), ("b2", "b2"), ("b3", "b3")],
                          {"e1": "e1", "e2": "e2"})
    assert {v.rule for v in on_morphism_violations(fold)} == {"unmapped event"}
    assert is_on_morphism(fold, literal=True)
    no_init = NetMorphism.of(F.conflict_pair(), F.conflict_pair(), [], {})
    assert "initial" in [v.rule for v in on_morphism_violations(no_init)]
    bad = NetMorphism.of(F.conflict_pair(), F.conflict_pair(), [("b1", "zz")], {})
    assert [v.rule for v in on_morphism_violations(bad)] == ["beta codomain"]


def test_event_structure_morphisms():
    p = F.four_event_causal_rpes()
    q = causal_rpes(["a", "b"], ["a"], [], [("a", "b")])
    good = EsMorphism.of(p, q, {"e1": "a", "e2": "b"})
    assert is_rpes_morphism(good)
    assert good("e1") == "a" and good("e3") is None
    # e1 and e3 are not in conflict, so they cannot share an image
    assert "injective up to conflict" in [
        v.rule for v in rpes_morphism_violations(EsMorphism.of(p, q, {"e1": "a", "e3": "a"}))]
    chain = causal_rpes(["x", "y"], [], [("x", "y")])
    lost = EsMorphism.of(chain, chain, {"y": "y"})
    assert [v.rule for v in rpes_morphism_violations(lost)] == ["history"]
    assert [v.rule for v in rpes_morphism_violations(EsMorphism.of(p, q, {"zz": "a"}))] == ["domain"]


def test_prevention_must_be_reflected():
    src = causal_rpes(["a", "b"], ["a"])
    dst = causal_rpes(["a", "b"], ["a"], [("a", "b")])
    m = EsMorphism.of(src, dst, {"a": "a", "b": "b"})
    rules = [v.rule for v in rpes_morphism_violations(m)]
    assert "prevention reflected" in rules


def test_reversible_net_morphisms():
    m = reversible_conflict_to_chains()
    assert is_rcn_morphism(m)
    assert is_rcn_morphism(reversible_pair_to_conflict())
    no_rev = NetMorphism.of(m.source, m.target, m.beta, {"e1": "e1", "e2": "e2"})
    assert [v.rule for v in rcn_morphism_violations(no_rev)] == ["undo map"]
    assert is_rcn_morphism(no_rev, reversing="weak")
    wrong = NetMorphism.of(m.source, m.target, m.beta, {"e1": "e1", "e2": "e2", "ē1": "e1"})
    assert "reversing preserved" in [v.rule for v in rcn_morphism_violations(wrong)]
    with pytest.raises(ValueError):
        rcn_morphism_violations(m, reversing="other")


def test_composition_laws():
    for f, g in [(pair_to_conflict(), conflict_to_chains()),
                 (reversible_pair_to_conflict(), reversible_conflict_to_chains())]:
        h = compose(f, g)
        assert is_morphism(h)
        assert h.event_map == {"e1": "e1", **({"ē1": "ē1"} if "ē1" in f.event_map else {})}
        for m in (f, g, h):
            assert compose(identity(m.source), m) == m
            assert compose(m, identity(m.target)) == m
        assert compose(compose(f, g), identity(g.target)) == compose(f, compose(g, identity(g.target)))


def test_composition_type_errors():
    with pytest.raises(TypeMismatch):
        compose(conflict_to_chains(), conflict_to_chains())
    with pytest.raises(TypeMismatch):
        compose(identity(F.conflict_pair()), identity(F.abc_rpes()))
    bad = NetMorphism.of(F.conflict_pair(), F.conflict_pair(), [], {})
    with pytest.raises(InvalidMorphism):
        compose(bad, identity(F.conflict_pair()))


def test_functor_C_laws():
    r = F.reversible_conflicting_chains()
    assert functor_C(identity(r)) == identity(rcn_to_rpes(r))
    f, g = reversible_pair_to_conflict(), reversible_conflict_to_chains()
    assert functor_C(compose(f, g)) == compose(functor_C(f), functor_C(g))


def test_functor_E_laws():
    p = F.four_event_causal_rpes()
    assert functor_E(identity(p)) == identity(rpes_to_rcn(p))
    q = causal_rpes(["a", "b"], ["a"], [], [("a", "b")])
    f = EsMorphism.of(p, q, {"e1": "a", "e2": "b"})
    g = EsMorphism.of(q, p, {"a": "e1", "b": "e2"})
    assert functor_E(compose(f, g)) == compose(functor_E(f), functor_E(g))
    assert functor_E(compose(g, f)) == compose(functor_E(g), functor_E(f))


def test_only_the_preimage_reading_gives_morphisms():
    p = F.four_event_causal_rpes()
    verdicts = {reading: is_rcn_morphism(functor_E(identity(p), reading=reading, check=False))
                for reading in BETA_READINGS}
    assert verdicts == {"preimage": True, "quoted": False, "unrestricted": False}


def test_unit_is_a_renaming():
    p = F.four_event_causal_rpes()
    u = unit(p)
    assert is_rpes_morphism(u)
    assert u.mapping == {e: f"f({e})" for e in p.events}


def test_coreflection_on_identity():
    r = F.reversible_conflicting_chains()
    p = rcn_to_rpes(r)
    g = coreflection_check(p, r, identity(p))
    assert is_rcn_morphism(g)
    assert {x: y for x, y in g.eta} == {f"f({e})": e for e in p.events} | {
        f"r({u})": r.reverser_of[u] for u in p.undoable}


def test_coreflection_for_every_morphism_into_small_nets():
    p = F.abc_causal_rpes()
    for r in F.REVERSIBLE_NETS.values():
        r = r()
        for f in es_morphisms(p, rcn_to_rpes(r)):
            g = coreflection_check(p, r, f)
            assert compose(unit(p), functor_C(g)).f == f.f


def test_coreflection_guards():
    r = F.reversible_conflict_pair()
    with pytest.raises(ValueError):
        coreflection_check(F.abc_rpes(), r, identity(F.abc_rpes()))
    big = causal_rpes([f"x{i}" for i in range(6)])
    with pytest.raises(SearchSpaceTooLarge):
        list(mediating_morphisms(big, r, EsMorphism.of(big, rcn_to_rpes(r), {})))
    p = F.single_event_rpes()
    with pytest.raises(InvalidMorphism):
        coreflection_check(p, r, EsMorphism.of(p, rcn_to_rpes(r), {"a": "zz"}))


def test_literal_reading_is_not_unique():
    """Without the strict conditions an unmapped event's conditions may go anywhere."""
    p = causal_rpes(["a", "b"], ["a"])
    r = F.reversible_conflict_pair()
    f = EsMorphism.of(p, rcn_to_rpes(r), {"a": "e1"})
    strict = list(mediating_morphisms(p, r, f))
    assert len(strict) == 1
    g = strict[0]
    # the postcondition of the unmapped event b is related to an arbitrary condition
    loose = NetMorphism(g.source, r, g.beta | {("cond(b,{})", "b3")}, g.eta)
    assert loose != g
    assert not is_rcn_morphism(loose)
    assert is_rcn_morphism(loose, literal=True)


def test_dispatch():
    assert morphism_violations(identity(F.abc_rpes())) == []
    assert morphism_violations(identity(on_to_pes(F.conflict_pair()))) == []
    with pytest.raises(SearchSpaceTooLarge):
        coreflection_check(causal_rpes(["a"], []), F.reversible_conflict_pair(),
                           EsMorphism.of(causal_rpes(["a"], []),
                                         rcn_to_rpes(F.reversible_conflict_pair()), {}),
                           budget=0)
