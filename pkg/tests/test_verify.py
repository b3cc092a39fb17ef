import pytest

from revnets import fixtures as F
from revnets.es import pes_violations, ppes_violations
from revnets.occnet import occurrence_net_violations
from revnets.rcn import rcn_violations
from revnets.rpes import is_causal, is_cause_respecting, rpes_violations
from revnets.verify import (
    KINDS, all_passed, check_names, fingerprint, gen_random, run_checks,
)


def by_name(reports):
    return {r.name: r for r in reports}


def test_generators_are_deterministic():
    for kind in KINDS:
        for size in range(5):
            assert fingerprint(gen_random(kind, size, 7)) == fingerprint(gen_random(kind, size, 7))


def test_generators_produce_valid_structures():
    for seed in range(15):
        for size in range(6):
            assert pes_violations(gen_random("pes", size, seed)) == []
            assert ppes_violations(gen_random("ppes", size, seed)) == []
            c = gen_random("on", size, seed)
            assert occurrence_net_violations(c.net) == [] and len(c.events) == size
            p = gen_random("causal_rpes", size, seed)
            assert rpes_violations(p) == [] and is_causal(p)
            q = gen_random("cr_rpes", size, seed)
            assert rpes_violations(q) == [] and is_cause_respecting(q)
            assert rpes_violations(gen_random("rpes", size, seed)) == []
            r = gen_random("rcn", size, seed)
            assert rcn_violations(r.net, r.reversing) == []


def test_empty_pes():
    p = gen_random("pes", 0, 123)
    assert not p.events and not p.causality and not p.conflict


def test_generator_arguments():
    with pytest.raises(ValueError):
        gen_random("tree", 2, 0)
    with pytest.raises(ValueError):
        gen_random("pes", 8, 0)


def test_reversible_fixtures_pass_everything():
    for make in F.REVERSIBLE_NETS.values():
        reports = run_checks(make())
        assert [r.name for r in reports] == check_names(make())
        assert all(r.verdict == "pass" for r in reports), [r for r in reports if r.verdict != "pass"]


def test_causal_fixtures_pass_everything():
    for name in F.CAUSAL_EVENT_STRUCTURES:
        reports = run_checks(F.EVENT_STRUCTURES[name]())
        assert all_passed(reports)


def test_occurrence_net_and_pes_checks():
    from revnets.xform import on_to_pes
    for make in F.OCCURRENCE_NETS.values():
        assert all_passed(run_checks(make()))
        assert all_passed(run_checks(on_to_pes(make())))


def test_non_causal_counterexample():
    reports = by_name(run_checks(F.non_causal_chain_rpes()))
    r = reports["rpes-rcn-configurations"]
    assert r.verdict == "fail" and r.known
    assert r.counterexample == {"only_rpes": [["e2"]], "only_rcn": []}
    assert "causal: false" in r.notes
    assert reports["causal"].known and reports["causal"].verdict == "fail"
    assert not all_passed(reports.values())
    assert all_passed(reports.values(), allow_known=True)


def test_selection():
    reports = run_checks(F.abc_rpes(), ["causal", "cause-respecting"])
    assert [(r.name, r.verdict) for r in reports] == [("causal", "fail"), ("cause-respecting", "pass")]
    with pytest.raises(ValueError):
        run_checks(F.abc_rpes(), ["reach-equality"])


def test_report_fields():
    r = run_checks(F.abc_causal_rpes(), ["causal"])[0]
    d = r.to_dict()
    assert set(d) == {"name", "claim", "fingerprint", "verdict", "counterexample", "notes", "known"}
    assert d["fingerprint"] == fingerprint(F.abc_causal_rpes())
    assert len(d["fingerprint"]) == 64


def test_random_sweep_has_only_known_failures():
    for kind in ("pes", "on", "causal_rpes", "cr_rpes", "rpes", "rcn"):
        for seed in range(10):
            x = gen_random(kind, 1 + seed % 5, seed)
            reports = run_checks(x)
            assert all_passed(reports, allow_known=True), (kind, seed, [
                r for r in reports if r.verdict == "fail" and not r.known])
