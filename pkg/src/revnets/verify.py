"""Random structure generators and exhaustive property checks.

Each check enumerates everything relevant on one structure and reports
``pass``, ``fail`` (with a counterexample) or ``skipped``.
"""

import hashlib
import random
import warnings
from dataclasses import asdict, dataclass
from itertools import combinations

from .core import Multiset, transitive_closure
from .documents import dumps
from .errors import RevnetsError
from .es import (Pes, PrePes, hereditary_closure, pes_violations, ppes_configurations,
                 ppes_violations)
from .occnet import OccurrenceNet
from .petri import Net, firing_sequence, states
from .rcn import (Rcn, check_reach_equality, forward_normalize, mark, mixed_step_check,
                  rcn_configurations, rcn_violations)
from .rpes import (Rpes, causal_rpes, enabled_steps, forwards_reachable_configurations,
                   is_cause_respecting, is_causal, mixed_enabled, rpes_configurations,
                   rpes_violations)
from .xform import (NonCausalWarning, fwd, flow_successor_order, on_to_pes, pes_to_on,
                    rcn_to_rpes, rename_rpes, reversify, rpes_to_rcn, untag)

KINDS = ("pes", "ppes", "on", "causal_rpes", "cr_rpes", "rpes", "rcn")
DEFAULT_MAX_SIZE = 7
MAX_SUBSET_EXPONENT = 18
STATE_DEPTH = 6
SEQUENCE_LENGTH = 6
DENSITY = 0.3


# ------------------------------------------------------------ generators

def _names(n):
    return [f"e{i + 1}" for i in range(n)]


def _random_order(rng, ev):
    """Random causality on ``ev`` (index order) where ev[0] and ev[1] share no successor."""
    n = len(ev)
    pairs = set()
    for j in range(n):
        for i in range(j):
            if (i, j) == (0, 1) or rng.random() >= DENSITY:
                continue
            trial = transitive_closure(pairs | {(ev[i], ev[j])})
            if any((ev[0], z) in trial and (ev[1], z) in trial for z in ev):
                continue
            pairs.add((ev[i], ev[j]))
    if n >= 3 and not pairs:
        pairs.add((ev[0], ev[2]))
    return transitive_closure(pairs)


def _conflict_ok(events, order, conflict, hereditary):
    p = Pes(events, order, conflict)
    if hereditary:
        p = hereditary_closure(p)
    return not ppes_violations(p), p.conflict


def _random_pes(rng, n, hereditary=True) -> PrePes:
    ev = _names(n)
    order = _random_order(rng, ev)
    conflict = frozenset()
    if n >= 2:
        cands = [(x, y) for x, y in combinations(ev, 2)
                 if (x, y) not in order and (y, x) not in order]
        rng.shuffle(cands)
        if n >= 3:
            # first event pair has no common successor, so their conflict is always valid
            cands.insert(0, (ev[0], ev[1]))
        for k, (x, y) in enumerate(cands):
            if k > 0 and rng.random() >= DENSITY:
                continue
            if k == 0 and n < 3 and rng.random() >= DENSITY:
                continue
            ok, closed = _conflict_ok(ev, order, conflict | {(x, y), (y, x)}, hereditary)
            if ok:
                conflict = closed
    cls = Pes if hereditary else PrePes
    return cls(frozenset(ev), order, frozenset(conflict))


def _random_subset(rng, items, prob=0.5):
    return frozenset(x for x in sorted(items) if rng.random() < prob)


def _random_on(rng, n) -> OccurrenceNet:
    places, flow, init = set(), set(), []
    counter = [0]

    def fresh():
        counter[0] += 1
        b = f"b{counter[0]}"
        places.add(b)
        return b

    for _ in range(rng.choice((1, 2))):
        init.append(fresh())
    events = []
    for i in range(n):
        net = Net(places, events, flow, Multiset(init))
        c = OccurrenceNet(net, _checked=True)
        confs = sorted(c.configurations(), key=lambda s: (len(s), sorted(s)))
        x = rng.choice(confs)
        produced = set().union(*(net.post(e) for e in x)) if x else set()
        consumed = set().union(*(net.pre(e) for e in x)) if x else set()
        marking = sorted((set(init) | produced) - consumed)
        unused = [b for b in marking if not net.post(b)]
        k = 1 if rng.random() < 0.7 or len(marking) < 2 else 2
        pre = set(rng.sample(marking, min(k, len(marking))))
        if unused and rng.random() < 0.5:
            pre.add(rng.choice(unused))
        e = f"e{i + 1}"
        events.append(e)
        for b in pre:
            flow.add((b, e))
        for _ in range(rng.choice((1, 1, 2))):
            flow.add((e, fresh()))
    return OccurrenceNet(Net(places, events, flow, Multiset(init)))


def _random_cr_rpes(rng, n) -> Rpes:
    base = _random_pes(rng, n)
    undoable = _random_subset(rng, base.events)
    prevention = {(e, u) for u, e in base.causality if u in undoable}
    revc = {(u, u) for u in undoable}
    for u in sorted(undoable):
        for e in sorted(base.events):
            if e == u or (e, u) in prevention or rng.random() >= DENSITY / 2:
                continue
            req = {x for x, y in revc if y == u} | {e}
            if base.conflict_free(req):
                revc.add((e, u))
        for e in sorted(base.events):
            if (e, u) not in revc and rng.random() < DENSITY / 2:
                prevention.add((e, u))
    return Rpes(base.events, undoable, base.causality, base.conflict,
                frozenset(revc), frozenset(prevention))


def _random_rpes(rng, n) -> Rpes:
    base = _random_pes(rng, n)
    undoable = _random_subset(rng, base.events)
    revc = {(u, u) for u in undoable}
    prevention = set()
    for u in sorted(undoable):
        for e in sorted(base.events):
            if e == u:
                continue
            roll = rng.random()
            if roll < DENSITY / 2:
                req = {x for x, y in revc if y == u} | {e}
                if base.conflict_free(req):
                    revc.add((e, u))
            elif roll < DENSITY:
                prevention.add((e, u))
    return Rpes(base.events, undoable, base.causality, base.conflict,
                frozenset(revc), frozenset(prevention))


def gen_random(kind: str, size: int, seed: int, max_size: int = DEFAULT_MAX_SIZE):
    """Deterministic random structure of the given kind with ``size`` events."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    if size < 0 or size > max_size:
        raise ValueError(f"size must be between 0 and {max_size}")
    rng = random.Random(f"{kind}:{size}:{seed}")
    if kind == "pes":
        return _random_pes(rng, size)
    if kind == "ppes":
        return _random_pes(rng, size, hereditary=False)
    if kind == "on":
        return _random_on(rng, size)
    if kind == "causal_rpes":
        p = _random_pes(rng, size)
        return causal_rpes(p.events, _random_subset(rng, p.events), p.causality, p.conflict)
    if kind == "cr_rpes":
        return _random_cr_rpes(rng, size)
    if kind == "rpes":
        return _random_rpes(rng, size)
    c = _random_on(rng, size)
    return reversify(c, _random_subset(rng, c.events))


# ---------------------------------------------------------------- reports

@dataclass
class CheckReport:
    name: str
    claim: str
    fingerprint: str
    verdict: str
    counterexample: object = None
    notes: str = ""
    known: bool = False

    def to_dict(self):
        return asdict(self)


def fingerprint(x) -> str:
    return hashlib.sha256(dumps(x).encode("utf-8")).hexdigest()


class _Fail(Exception):
    def __init__(self, counterexample, notes=""):
        super().__init__(notes)
        self.counterexample = counterexample
        self.notes = notes


class _Skip(Exception):
    pass


def _sets(sets):
    return sorted(sorted(s) for s in sets)


def _guard(n):
    if n > MAX_SUBSET_EXPONENT:
        raise _Skip(f"2^{n} candidate subsets exceed the limit 2^{MAX_SUBSET_EXPONENT}")


def _compare_sets(left, right, lname, rname):
    if left != right:
        only_l = _sets(left - right)
        only_r = _sets(right - left)
        raise _Fail({f"only_{lname}": only_l, f"only_{rname}": only_r})


# ------------------------------------------------------------ the checks
# Each check takes the structure and returns an optional note, raising
# _Fail or _Skip otherwise.

def _on_states_are_configurations(c: OccurrenceNet):
    _guard(len(c.events))
    confs = c.configurations()
    for x in sorted(states(c.net), key=str):
        if not x.is_set() or x.support not in confs:
            raise _Fail({"state": str(x)})


def _on_to_pes(c: OccurrenceNet):
    _guard(len(c.events))
    p = on_to_pes(c, check=False)
    bad = pes_violations(p)
    if bad:
        raise _Fail({"violations": [str(v) for v in bad]})
    _compare_sets(c.configurations(), ppes_configurations(p), "net", "pes")


def _on_flow_order(c: OccurrenceNet):
    if c.causality != flow_successor_order(c):
        raise _Fail({"causality": sorted(c.causality), "flow_order": sorted(flow_successor_order(c))})


def _on_reversify(c: OccurrenceNet):
    for u in (frozenset(), c.events):
        r = reversify(c, u, check=False)
        bad = rcn_violations(r.net, r.reversing)
        if bad:
            raise _Fail({"undoable": sorted(u), "violations": [str(v) for v in bad]})


def _pes_hc_identity(p: PrePes):
    if pes_violations(p):
        raise _Skip("input is not a PES")
    if hereditary_closure(p) != p:
        raise _Fail({"added": sorted(hereditary_closure(p).conflict - p.conflict)})


def _pes_hc_is_pes(p: PrePes):
    h = hereditary_closure(p)
    bad = pes_violations(h)
    if bad:
        raise _Fail({"violations": [str(v) for v in bad]})
    if hereditary_closure(h) != h:
        raise _Fail({"not idempotent": True})


def _pes_hc_configurations(p: PrePes):
    _guard(len(p.events))
    _compare_sets(ppes_configurations(p), ppes_configurations(hereditary_closure(p)), "ppes", "hc")


def _pes_single_steps(p: PrePes):
    _guard(len(p.events))
    _compare_sets(ppes_configurations(p, "single"), ppes_configurations(p, "all"), "single", "all")


def _pes_to_on(p: PrePes):
    if pes_violations(p):
        raise _Skip("input is not a PES")
    _guard(len(p.events))
    c = pes_to_on(p, check=False)
    from .occnet import occurrence_net_violations
    bad = occurrence_net_violations(c.net)
    if bad:
        raise _Fail({"violations": [str(v) for v in bad]})
    _compare_sets(ppes_configurations(p), c.configurations(), "pes", "net")


def _left_closed_candidates(p: Rpes):
    _guard(len(p.events))
    base = p.base
    for x in ppes_configurations(base):
        yield x


def _all_steps(p: Rpes, x):
    yield from enabled_steps(p, x)


def _rpes_left_closure(p: Rpes):
    if not is_cause_respecting(p):
        raise _Skip("input is not cause-respecting")
    for x in sorted(_left_closed_candidates(p), key=sorted):
        for a, b in _all_steps(p, x):
            y = (x - b) | a
            if not p.base.is_left_closed(y):
                raise _Fail({"from": sorted(x), "do": sorted(a), "undo": sorted(b), "to": sorted(y)})


def _rpes_undo_inversion(p: Rpes):
    if not is_cause_respecting(p):
        raise _Skip("input is not cause-respecting")
    for x in sorted(_left_closed_candidates(p), key=sorted):
        for a, b in _all_steps(p, x):
            if a:
                continue
            y = x - b
            if not mixed_enabled(p, y, b, ()):
                raise _Fail({"from": sorted(x), "undo": sorted(b)})


def _rpes_step_inversion(p: Rpes):
    if not is_causal(p):
        raise _Skip("input is not causal")
    for x in sorted(_left_closed_candidates(p), key=sorted):
        for a, b in _all_steps(p, x):
            if not a <= p.undoable:
                continue
            y = (x - b) | a
            if not mixed_enabled(p, y, b, a):
                raise _Fail({"from": sorted(x), "do": sorted(a), "undo": sorted(b), "to": sorted(y)})


def _rpes_forwards_reachable(p: Rpes):
    if not is_cause_respecting(p):
        raise _Skip("input is not cause-respecting")
    _guard(len(p.events))
    confs = rpes_configurations(p)
    fwd_confs = forwards_reachable_configurations(p)
    missing = confs - fwd_confs
    if missing:
        raise _Fail({"not_forwards_reachable": _sets(missing)})


def _rpes_causal_implies_cr(p: Rpes):
    if is_causal(p) and not is_cause_respecting(p):
        raise _Fail({"causal": True, "cause_respecting": False})


def _rpes_conflict_inherited(p: Rpes):
    if not is_causal(p):
        raise _Skip("input is not causal")
    for e, e1 in sorted(p.conflict):
        for x, y in p.causality:
            if x == e1 and (e, y) not in p.conflict:
                raise _Fail({"conflict": [e, e1], "successor": y})


def _rpes_causal(p: Rpes):
    if not is_causal(p):
        raise _Fail({"causal": False})


def _rpes_cause_respecting(p: Rpes):
    if not is_cause_respecting(p):
        missing = sorted(p.causality - p.sustained)
        raise _Fail({"not_sustained": [list(m) for m in missing]})


def _rpes_to_rcn(p: Rpes):
    _guard(len(p.events))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonCausalWarning)
        r = rpes_to_rcn(p, check=False)
    bad = rcn_violations(r.net, r.reversing)
    if bad:
        raise _Fail({"violations": [str(v) for v in bad]})


def _rpes_rcn_configurations(p: Rpes):
    _guard(len(p.events))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonCausalWarning)
        r = rpes_to_rcn(p, check=False)
    left = frozenset(frozenset(fwd(e) for e in x) for x in rpes_configurations(p))
    right = rcn_configurations(r)
    if left != right:
        raise _Fail({
            "only_rpes": [sorted(untag(e) for e in x) for x in _sets_raw(left - right)],
            "only_rcn": [sorted(untag(e) for e in x) for x in _sets_raw(right - left)],
        }, "" if is_causal(p) else "input is not causal")


def _sets_raw(sets):
    return sorted(sets, key=lambda s: (len(s), sorted(s)))


def _rpes_unit_round_trip(p: Rpes):
    if not is_causal(p):
        raise _Skip("input is not causal")
    _guard(len(p.events))
    back = rename_rpes(rcn_to_rpes(rpes_to_rcn(p)), untag)
    if back != p:
        raise _Fail({"round_trip": dumps(back)})


def _rcn_reach_equality(r: Rcn):
    if not check_reach_equality(r):
        raise _Fail({"reach_equality": False})


def _rcn_sequences(r: Rcn, length):
    """All single-transition firing sequences from the initial marking, up to ``length``."""
    n = r.net
    frontier = [()]
    out = [()]
    for _ in range(length):
        nxt = []
        for seq in frontier:
            m = firing_sequence(n, [[t] for t in seq]).lead if seq else n.initial
            for t in sorted(n.transitions):
                if n.pre(t) <= m.support:
                    nxt.append(seq + (t,))
        out.extend(nxt)
        frontier = nxt
    return out


def _rcn_forward_normalize(r: Rcn):
    _guard(len(r.forward_events))
    for seq in _rcn_sequences(r, SEQUENCE_LENGTH):
        sigma = firing_sequence(r.net, [[t] for t in seq])
        norm = forward_normalize(r, sigma)
        if norm.lead != sigma.lead or not norm.state.support <= r.forward_events:
            raise _Fail({"sequence": list(seq)})
        replay = firing_sequence(r.net, norm.steps)
        if replay.lead != sigma.lead:
            raise _Fail({"sequence": list(seq), "normalized": [str(s) for s in norm.steps]})


def _rcn_to_rpes(r: Rcn):
    p = rcn_to_rpes(r, check=False)
    bad = rpes_violations(p)
    if bad:
        raise _Fail({"violations": [str(v) for v in bad]})
    if not is_causal(p):
        raise _Fail({"causal": False})


def _rcn_configurations(r: Rcn):
    _guard(len(r.forward_events))
    _compare_sets(rcn_configurations(r), rpes_configurations(rcn_to_rpes(r)), "rcn", "rpes")


def _rcn_mixed_step(r: Rcn):
    _guard(len(r.forward_events))
    for x in sorted(rcn_configurations(r), key=sorted):
        m = mark(r, x)
        live = sorted(t for t in r.events if r.net.pre(t) <= m.support)
        for k in range(len(live) + 1):
            for step in combinations(live, k):
                pre = Multiset()
                for t in step:
                    pre = pre + Multiset(r.net.pre(t))
                if not pre <= m:
                    continue
                try:
                    mixed_step_check(r, x, step)
                except RevnetsError as exc:
                    raise _Fail({"configuration": sorted(x), "step": list(step)}, str(exc))


def _rename_state(r: Rcn):
    def fn(t):
        tag = t[:2]
        inner = untag(t)
        return inner if tag == "f(" else r.reverser_of[inner]
    return fn


def _rcn_states_round_trip(r: Rcn):
    _guard(len(r.forward_events))
    back = rpes_to_rcn(rcn_to_rpes(r))
    fn = _rename_state(r)
    left = states(r.net, max_length=STATE_DEPTH)
    right = frozenset(Multiset({fn(t): k for t, k in s.items()})
                      for s in states(back.net, max_length=STATE_DEPTH))
    if left != right:
        raise _Fail({"only_original": sorted(str(s) for s in left - right),
                     "only_round_trip": sorted(str(s) for s in right - left)},
                    f"states compared up to {STATE_DEPTH} firings")


def _rcn_forward_states(r: Rcn):
    _on_states_are_configurations(r.forward_net)


CHECKS = {
    "on": [
        ("states-are-configurations", "every state of an occurrence net is a configuration",
         _on_states_are_configurations),
        ("on-to-pes", "the event structure of an occurrence net is a PES with the same configurations",
         _on_to_pes),
        ("causality-is-flow-order", "event causality equals the closure of direct event succession",
         _on_flow_order),
        ("reversify", "adding reversing events yields a reversible causal net", _on_reversify),
    ],
    "pes": [
        ("hc-identity", "hereditary closure leaves a PES unchanged", _pes_hc_identity),
        ("hc-is-pes", "hereditary closure yields a PES and is idempotent", _pes_hc_is_pes),
        ("hc-configurations", "hereditary closure preserves configurations", _pes_hc_configurations),
        ("single-steps", "single-event steps reach every configuration", _pes_single_steps),
        ("pes-to-on", "the occurrence net of a PES has the same configurations", _pes_to_on),
    ],
    "rpes": [
        ("causal", "the structure is causal", _rpes_causal),
        ("cause-respecting", "the structure is cause-respecting", _rpes_cause_respecting),
        ("causal-implies-cause-respecting", "causal structures are cause-respecting",
         _rpes_causal_implies_cr),
        ("left-closure", "steps from left-closed sets stay left-closed when cause-respecting",
         _rpes_left_closure),
        ("undo-inversion", "an undo step can be redone when cause-respecting", _rpes_undo_inversion),
        ("step-inversion", "every mixed step can be inverted when causal", _rpes_step_inversion),
        ("forwards-reachable", "configurations are forwards reachable when cause-respecting",
         _rpes_forwards_reachable),
        ("conflict-inherited", "conflict is inherited along causality when causal",
         _rpes_conflict_inherited),
        ("rpes-to-rcn", "the net construction yields a reversible causal net", _rpes_to_rcn),
        ("rpes-rcn-configurations",
         "configurations of a causal rPES match those of its reversible net", _rpes_rcn_configurations),
        ("unit-round-trip", "the rPES of the reversible net of a causal rPES is the rPES itself",
         _rpes_unit_round_trip),
    ],
    "rcn": [
        ("forward-states-are-configurations", "states of the forward subnet are configurations",
         _rcn_forward_states),
        ("reach-equality", "reversing events do not add reachable markings", _rcn_reach_equality),
        ("forward-normalization", "every reachable marking is reached by forward events alone",
         _rcn_forward_normalize),
        ("rcn-to-rpes", "the rPES of a reversible causal net is a causal rPES", _rcn_to_rpes),
        ("rcn-rpes-configurations", "a net and its rPES have the same configurations",
         _rcn_configurations),
        ("mixed-step", "every net step is an enabled mixed step of the rPES", _rcn_mixed_step),
        ("states-round-trip", "the net rebuilt from the rPES has the same states", _rcn_states_round_trip),
    ],
}

# Failures that are information about the input rather than library bugs.
KNOWN_FAILURES = {"causal", "cause-respecting"}


def _kind_of(x):
    if isinstance(x, Rcn):
        return "rcn"
    if isinstance(x, OccurrenceNet):
        return "on"
    if isinstance(x, Rpes):
        return "rpes"
    if isinstance(x, PrePes):
        return "pes"
    raise TypeError(f"no checks for {type(x).__name__}")


def check_names(x=None):
    if x is None:
        return sorted({name for checks in CHECKS.values() for name, _c, _f in checks})
    return [name for name, _c, _f in CHECKS[_kind_of(x)]]


def run_checks(structure, selection=None) -> list:
    """Run the checks applicable to ``structure`` (all, or the named ones)."""
    checks = CHECKS[_kind_of(structure)]
    if selection is not None:
        selection = set(selection)
        unknown = selection - {name for name, _c, _f in checks}
        if unknown:
            raise ValueError(f"checks not applicable here: {', '.join(sorted(unknown))}")
    fp = fingerprint(structure)
    reports = []
    for name, claim, fn in checks:
        if selection is not None and name not in selection:
            continue
        try:
            note = fn(structure)
            reports.append(CheckReport(name, claim, fp, "pass", notes=note or ""))
        except _Skip as exc:
            reports.append(CheckReport(name, claim, fp, "skipped", notes=str(exc)))
        except _Fail as exc:
            known = name in KNOWN_FAILURES
            notes = exc.notes
            if name == "rpes-rcn-configurations":
                causal = is_causal(structure)
                known = not causal
                notes = (notes + "; " if notes else "") + f"causal: {str(causal).lower()}"
            reports.append(CheckReport(name, claim, fp, "fail", exc.counterexample, notes, known))
    return reports


def all_passed(reports, allow_known: bool = False) -> bool:
    return all(r.verdict != "fail" or (allow_known and r.known) for r in reports)
