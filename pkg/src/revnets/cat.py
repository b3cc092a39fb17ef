"""Morphisms between occurrence nets, event structures and reversible nets.

Net morphisms are pairs ``(beta, eta)``: ``beta`` relates source conditions to
target conditions and ``eta`` is a partial map on events. Event-structure
morphisms are partial maps ``f``. Maps are stored as frozensets of pairs.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import product

from .core import Violation
from .errors import InvalidMorphism, InvariantViolation, SearchSpaceTooLarge, TypeMismatch
from .es import PrePes
from .occnet import OccurrenceNet
from .rcn import Rcn
from .rpes import Rpes, is_causal
from .xform import BOTTOM, cond, decode, fwd, rcn_to_rpes, rev, rpes_to_rcn


def _pairs(mapping):
    if isinstance(mapping, dict):
        return frozenset(mapping.items())
    return frozenset(tuple(p) for p in mapping)


@dataclass(frozen=True)
class EsMorphism:
    source: object
    target: object
    f: frozenset

    @classmethod
    def of(cls, source, target, mapping):
        return cls(source, target, _pairs(mapping))

    @cached_property
    def mapping(self) -> dict:
        return dict(self.f)

    def __call__(self, e):
        return self.mapping.get(e)


@dataclass(frozen=True)
class NetMorphism:
    source: object
    target: object
    beta: frozenset
    eta: frozenset

    @classmethod
    def of(cls, source, target, beta, eta):
        return cls(source, target, frozenset(tuple(p) for p in beta), _pairs(eta))

    @cached_property
    def event_map(self) -> dict:
        return dict(self.eta)

    def image(self, conds) -> frozenset:
        conds = set(conds)
        return frozenset(b1 for b0, b1 in self.beta if b0 in conds)


# ---------------------------------------------------------------- checks

def _map_shape(f, src_events, dst_events, what="f"):
    out = []
    seen = {}
    for x, y in sorted(f):
        if x not in src_events:
            out.append(Violation("domain", f"{what} is defined on unknown source event {x}"))
        if y not in dst_events:
            out.append(Violation("codomain", f"{what} maps {x} to unknown target event {y}"))
        if x in seen and seen[x] != y:
            out.append(Violation("partial map", f"{what} maps {x} to both {seen[x]} and {y}"))
        seen[x] = y
    return out


def _net_parts(x):
    """(conditions, events, pre, post, initial) of an ON, or of an RCN's forward subnet."""
    c = x.forward_net if isinstance(x, Rcn) else x
    return c.conditions, c.events, c.pre, c.post, c.initial


def on_morphism_violations(m: NetMorphism, literal: bool = False, forward_only: bool = False) -> list:
    """Violations of the occurrence-net morphism conditions.

    The default reading also asks that conditions around an event on which
    ``eta`` is undefined are related to nothing, and that for a mapped event
    every target pre/postcondition has exactly one related source
    pre/postcondition. ``literal=True`` checks only the set equations.
    """
    b0s, e0s, pre0, post0, c0 = _net_parts(m.source)
    b1s, e1s, pre1, post1, c1 = _net_parts(m.target)
    eta = dict(m.eta)
    if forward_only:
        eta = {x: y for x, y in eta.items() if x in e0s}
    out = _map_shape(eta.items(), e0s, e1s, "eta")
    for b0, b1 in sorted(m.beta):
        if b0 not in b0s:
            out.append(Violation("beta domain", f"beta relates unknown source condition {b0}"))
        if b1 not in b1s:
            out.append(Violation("beta codomain", f"beta relates unknown target condition {b1}"))
    if out:
        return out
    rel = {}
    for b0, b1 in m.beta:
        rel.setdefault(b0, set()).add(b1)

    def img(bs):
        return set().union(*(rel.get(b, set()) for b in bs)) if bs else set()

    def unique_cover(src, dst, what):
        res = []
        for b1 in sorted(dst):
            n = sum(1 for b0 in src if b1 in rel.get(b0, ()))
            if n != 1:
                res.append(Violation(what, f"{b1} is related to {n} conditions instead of one"))
        return res

    if img(c0) != set(c1):
        out.append(Violation("initial", "beta does not map the initial marking onto the initial marking"))
    out += unique_cover(c0, c1, "initial unique")
    for e0 in sorted(e0s):
        e1 = eta.get(e0)
        if e1 is None:
            if not literal:
                for b0 in sorted(pre0(e0) | post0(e0)):
                    if rel.get(b0):
                        out.append(Violation("unmapped event",
                                             f"{e0} is unmapped but its condition {b0} is related"))
            continue
        if img(pre0(e0)) != set(pre1(e1)):
            out.append(Violation("preset", f"beta of the preset of {e0} differs from the preset of {e1}"))
        if img(post0(e0)) != set(post1(e1)):
            out.append(Violation("postset", f"beta of the postset of {e0} differs from the postset of {e1}"))
        if not literal:
            out += unique_cover(pre0(e0), pre1(e1), f"preset unique for {e0}")
            out += unique_cover(post0(e0), post1(e1), f"postset unique for {e0}")
    return out


def _es_common(f, p0: PrePes, p1: PrePes) -> list:
    out = []
    items = sorted(f.items())
    for e0, e1 in items:
        want = p1.causes(e1)
        have = {f[x] for x in p0.causes(e0) if x in f}
        missing = want - have
        if missing:
            out.append(Violation("history", f"{sorted(missing)[0]} < {e1} has no preimage below {e0}"))
    for i, (a, fa) in enumerate(items):
        for b, fb in items[i + 1:]:
            if (fa, fb) in p1.conflict and (a, b) not in p0.conflict:
                out.append(Violation("conflict reflected", f"{fa} # {fb} but not {a} # {b}"))
            if fa == fb and (a, b) not in p0.conflict:
                out.append(Violation("injective up to conflict",
                                     f"{a} and {b} both map to {fa} without conflicting"))
    return out


def pes_morphism_violations(m: EsMorphism) -> list:
    p0, p1 = m.source, m.target
    p0 = p0.base if isinstance(p0, Rpes) else p0
    p1 = p1.base if isinstance(p1, Rpes) else p1
    out = _map_shape(m.f, p0.events, p1.events)
    if out:
        return out
    return _es_common(m.mapping, p0, p1)


def rpes_morphism_violations(m: EsMorphism) -> list:
    p0, p1 = m.source, m.target
    out = _map_shape(m.f, p0.events, p1.events)
    if out:
        return out
    f = m.mapping
    out = _es_common(f, p0.base, p1.base)
    for u in sorted(p0.undoable):
        if u not in f:
            continue
        for e0 in sorted(f):
            if (f[e0], f[u]) in p1.prevention and (e0, u) not in p0.prevention:
                out.append(Violation("prevention reflected",
                                     f"{f[e0]} blocks undoing {f[u]} but {e0} does not block undoing {u}"))
        if f[u] in p1.undoable:
            want = p1.required_for_undo(f[u])
            have = {f[x] for x in p0.required_for_undo(u) if x in f}
            missing = want - have
            if missing:
                out.append(Violation("reverse causality",
                                     f"undoing {f[u]} needs {sorted(missing)[0]}, which has no "
                                     f"preimage needed to undo {u}"))
    return out


def rcn_morphism_violations(m: NetMorphism, reversing: str = "strict", literal: bool = False) -> list:
    """Violations of the reversible-net morphism conditions.

    ``reversing="strict"``: a reversing event ``u`` is mapped exactly when its
    forward event is mapped to an undoable event, and then to that event's
    reversing event. ``reversing="weak"``: mapped reversing events go to
    reversing events and their forward events are mapped.
    """
    r0, r1 = m.source, m.target
    eta = m.event_map
    out = _map_shape(m.eta, r0.events, r1.events, "eta")
    if out:
        return out
    for e0 in sorted(r0.forward_events):
        if e0 in eta and eta[e0] in r1.reversing:
            out.append(Violation("forward to forward", f"forward {e0} mapped to reversing {eta[e0]}"))
    forward_part = NetMorphism(r0, r1, m.beta, frozenset((x, y) for x, y in m.eta
                                                         if x in r0.forward_events
                                                         and y in r1.forward_events))
    out += [Violation("forward subnet: " + v.rule, v.message)
            for v in on_morphism_violations(forward_part, literal=literal)]
    for u in sorted(r0.reversing):
        e0 = r0.undo_map[u]
        if u in eta and eta[u] not in r1.reversing:
            out.append(Violation("reversing preserved", f"reversing {u} mapped to forward {eta[u]}"))
            continue
        if reversing == "weak":
            if u in eta and e0 not in eta:
                out.append(Violation("undo map", f"{u} is mapped but {e0} is not"))
        elif reversing == "strict":
            want = r1.reverser_of.get(eta.get(e0))
            if eta.get(u) != want:
                out.append(Violation("undo map",
                                     f"{u} should map to {want if want is not None else 'nothing'}, "
                                     f"not {eta.get(u, 'nothing')}"))
        else:
            raise ValueError(f"unknown reading {reversing!r}")
    return out


def morphism_violations(m) -> list:
    """Dispatch on the kind of source structure."""
    src = m.source
    if isinstance(m, EsMorphism):
        return rpes_morphism_violations(m) if isinstance(src, Rpes) else pes_morphism_violations(m)
    if isinstance(src, Rcn):
        return rcn_morphism_violations(m)
    return on_morphism_violations(m)


def is_on_morphism(m, **kw) -> bool:
    return not on_morphism_violations(m, **kw)


def is_pes_morphism(m) -> bool:
    return not pes_morphism_violations(m)


def is_rpes_morphism(m) -> bool:
    return not rpes_morphism_violations(m)


def is_rcn_morphism(m, **kw) -> bool:
    return not rcn_morphism_violations(m, **kw)


def is_morphism(m) -> bool:
    return not morphism_violations(m)


# ------------------------------------------------------ identity/compose

def identity(x):
    if isinstance(x, (PrePes, Rpes)):
        return EsMorphism(x, x, frozenset((e, e) for e in x.events))
    if isinstance(x, (OccurrenceNet, Rcn)):
        return NetMorphism(x, x, frozenset((b, b) for b in x.conditions),
                           frozenset((e, e) for e in x.events))
    raise TypeMismatch(f"no identity for {type(x).__name__}")


def _compose_maps(f, g):
    g = dict(g)
    return frozenset((x, g[y]) for x, y in f if y in g)


def compose(m1, m2, check: bool = True):
    """``m2`` after ``m1``; the target of ``m1`` must be the source of ``m2``."""
    if type(m1) is not type(m2):
        raise TypeMismatch("cannot compose net and event-structure morphisms")
    if m1.target != m2.source:
        raise TypeMismatch("target of the first morphism is not the source of the second")
    if check:
        for m in (m1, m2):
            bad = morphism_violations(m)
            if bad:
                raise InvalidMorphism(bad)
    if isinstance(m1, EsMorphism):
        out = EsMorphism(m1.source, m2.target, _compose_maps(m1.f, m2.f))
    else:
        out = NetMorphism(m1.source, m2.target, _relcompose(m1.beta, m2.beta),
                          _compose_maps(m1.eta, m2.eta))
    if check:
        bad = morphism_violations(out)
        if bad:
            raise InvariantViolation(f"composition of valid morphisms is invalid: {bad}")
    return out


def _relcompose(r1, r2):
    succ = {}
    for x, y in r2:
        succ.setdefault(x, set()).add(y)
    return frozenset((x, z) for x, y in r1 for z in succ.get(y, ()))


# ------------------------------------------------------------- functors

def functor_C(m: NetMorphism, check: bool = True) -> EsMorphism:
    """Event-structure morphism between the associated rPESs: eta on forward events."""
    if check:
        bad = rcn_morphism_violations(m)
        if bad:
            raise InvalidMorphism(bad)
    src, dst = rcn_to_rpes(m.source), rcn_to_rpes(m.target)
    f = frozenset((x, y) for x, y in m.eta if x in m.source.forward_events)
    out = EsMorphism(src, dst, f)
    if check:
        bad = rpes_morphism_violations(out)
        if bad:
            raise InvariantViolation(f"image of a net morphism is not an rPES morphism: {bad}")
    return out


BETA_READINGS = ("preimage", "quoted", "unrestricted")


def _beta_for(f: dict, p0: Rpes, p1: Rpes, r0: Rcn, r1: Rcn, reading: str):
    conds0 = [decode(b)[1:] for b in sorted(r0.conditions)]
    conds1 = [decode(b)[1:] for b in sorted(r1.conditions)]
    succ0 = {e: {y for x, y in p0.causality if x == e} for e in p0.events}
    beta = set()
    for a0, s0 in conds0:
        for a1, s1 in conds1:
            if (a0 == BOTTOM) != (a1 == BOTTOM):
                continue
            if a0 != BOTTOM and f.get(a0) != a1:
                continue
            image = frozenset(f[x] for x in s0 if x in f)
            if reading == "preimage":
                pre = {x for x in p0.events if f.get(x) in s1}
                if a0 != BOTTOM:
                    pre &= succ0[a0]
                ok = frozenset(pre) == s0
            elif reading == "quoted":
                ok = image == s1 and bool(s1) and (a0 != BOTTOM or len(s0) == 1)
                ok = ok and all(x in f for x in s0)
            elif reading == "unrestricted":
                ok = image == s1 and bool(s1) and all(x in f for x in s0)
            else:
                raise ValueError(f"unknown reading {reading!r}")
            if ok:
                beta.add((cond(a0, s0), cond(a1, s1)))
    return frozenset(beta)


def functor_E(m: EsMorphism, reading: str = "preimage", check: bool = True) -> NetMorphism:
    """Net morphism between the reversible nets of two causal rPESs.

    Events: ``f(e)`` goes to ``f(m(e))`` and ``r(e)`` to ``r(m(e))`` when the
    image is undoable. Conditions are related according to ``reading``; only
    ``"preimage"`` gives valid morphisms in general.
    """
    p0, p1 = m.source, m.target
    if check:
        bad = rpes_morphism_violations(m)
        if bad:
            raise InvalidMorphism(bad)
    r0, r1 = rpes_to_rcn(p0), rpes_to_rcn(p1)
    f = m.mapping
    eta = {fwd(x): fwd(y) for x, y in f.items()}
    for u in p0.undoable:
        if u in f and f[u] in p1.undoable:
            eta[rev(u)] = rev(f[u])
    out = NetMorphism(r0, r1, _beta_for(f, p0, p1, r0, r1, reading), frozenset(eta.items()))
    if check and reading == "preimage":
        bad = rcn_morphism_violations(out)
        if bad:
            raise InvariantViolation(f"image of an rPES morphism is not a net morphism: {bad}")
    return out


def unit(p: Rpes) -> EsMorphism:
    """The renaming e -> f(e) from ``p`` to the rPES of its reversible net."""
    return EsMorphism(p, rcn_to_rpes(rpes_to_rcn(p)), frozenset((e, fwd(e)) for e in p.events))


# ------------------------------------------------------------ coreflection

def _exact_covers(rows: dict, columns: set):
    """All sets of row keys covering every column exactly once (Algorithm X)."""
    cols = {c: set() for c in columns}
    for key, cs in rows.items():
        for c in cs:
            cols[c].add(key)

    def select(key):
        removed = []
        for c in rows[key]:
            for other in cols[c]:
                for c2 in rows[other]:
                    if c2 != c:
                        cols[c2].discard(other)
            removed.append(cols.pop(c))
        return removed

    def deselect(key, removed):
        for c in reversed(rows[key]):
            cols[c] = removed.pop()
            for other in cols[c]:
                for c2 in rows[other]:
                    if c2 != c:
                        cols[c2].add(other)

    solution = []

    def search():
        if not cols:
            yield list(solution)
            return
        c = min(cols, key=lambda k: (len(cols[k]), repr(k)))
        for key in sorted(cols[c], key=repr):
            solution.append(key)
            removed = select(key)
            yield from search()
            deselect(key, removed)
            solution.pop()

    yield from search()


def _beta_candidates(r0: Rcn, r1: Rcn, eta: dict):
    """Exact-cover rows/columns encoding the strict condition constraints."""
    c0, c1 = r0.forward_net, r1.forward_net
    init0, init1 = c0.initial, c1.initial
    rows = {}
    columns = {("init", b1) for b1 in init1}
    for e0 in c0.events:
        e1 = eta.get(e0)
        if e1 is not None:
            columns |= {("pre", e0, b1) for b1 in c1.pre(e1)}
            columns |= {("post", e0, b1) for b1 in c1.post(e1)}
    for b0 in sorted(c0.conditions):
        allowed = set(c1.conditions)
        if b0 in init0:
            allowed &= init1
        producers = c0.pre(b0)
        for e0 in producers:
            e1 = eta.get(e0)
            allowed &= set(c1.post(e1)) if e1 is not None else set()
        for e0 in c0.post(b0):
            e1 = eta.get(e0)
            allowed &= set(c1.pre(e1)) if e1 is not None else set()
        for b1 in sorted(allowed):
            cs = []
            if b0 in init0:
                cs.append(("init", b1))
            for e0 in producers:
                cs.append(("post", e0, b1))
            for e0 in sorted(c0.post(b0)):
                cs.append(("pre", e0, b1))
            rows[(b0, b1)] = cs
    return rows, columns


def mediating_morphisms(p: Rpes, r: Rcn, f: EsMorphism, max_events: int = 5,
                        budget: int = 10**6):
    """Every net morphism g from the net of ``p`` to ``r`` whose forward part,
    after the unit, is ``f``."""
    if len(p.events) > max_events or len(r.forward_events) > max_events:
        raise SearchSpaceTooLarge(f"more than {max_events} events on one side")
    r0 = rpes_to_rcn(p)
    fmap = f.mapping
    base_eta = {fwd(e): y for e, y in fmap.items()}
    rev_options = []
    for u in sorted(r0.reversing):
        rev_options.append([None] + sorted(r.reversing))
    rows = cols = None
    tried = 0
    for choice in product(*rev_options):
        eta = dict(base_eta)
        for u, v in zip(sorted(r0.reversing), choice):
            if v is not None:
                eta[u] = v
        probe = NetMorphism(r0, r, frozenset(), frozenset(eta.items()))
        if any(v.rule in ("undo map", "reversing preserved")
               for v in rcn_morphism_violations(probe)):
            continue
        if rows is None:
            rows, cols = _beta_candidates(r0, r, eta)
        for cover in _exact_covers(rows, cols):
            tried += 1
            if tried > budget:
                raise SearchSpaceTooLarge("search budget exhausted")
            g = NetMorphism(r0, r, frozenset(cover), frozenset(eta.items()))
            if rcn_morphism_violations(g):
                continue
            composed = compose(unit(p), functor_C(g), check=False)
            if composed.f != f.f:
                continue
            yield g


def coreflection_check(p: Rpes, r: Rcn, f: EsMorphism, **kw) -> NetMorphism:
    """The unique mediating morphism; raises InvariantViolation if there are
    none or several."""
    if not is_causal(p):
        raise ValueError("source rPES must be causal")
    bad = rpes_morphism_violations(f)
    if bad:
        raise InvalidMorphism(bad)
    found = []
    for g in mediating_morphisms(p, r, f, **kw):
        found.append(g)
        if len(found) > 1:
            break
    if len(found) != 1:
        raise InvariantViolation(f"expected exactly one mediating morphism, found {len(found)}")
    return found[0]
