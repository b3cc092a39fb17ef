"""JSON documents for all structures.

Every document is an object with ``kind``, ``version`` ("1") and a
kind-specific payload. Serialization is canonical: sorted keys, sorted
collections, two-space indentation, short lists on one line, trailing
newline.
"""

import json

from .core import Multiset
from .errors import RevnetsError
from .es import Pes, PrePes
from .occnet import OccurrenceNet
from .petri import Net
from .rcn import Rcn
from .rpes import Rpes

VERSION = "1"
KINDS = ("net", "on", "rcn", "pes", "ppes", "rpes", "morphism")

_NET_FIELDS = {"kind", "version", "places", "transitions", "flow", "initial"}
_FIELDS = {
    "net": _NET_FIELDS,
    "on": _NET_FIELDS,
    "rcn": _NET_FIELDS | {"reversing", "undo"},
    "pes": {"kind", "version", "events", "causality", "conflict"},
    "ppes": {"kind", "version", "events", "causality", "conflict"},
    "rpes": {"kind", "version", "events", "causality", "conflict", "undoable",
             "revcausality", "prevention"},
    "morphism": {"kind", "version", "source", "target", "map", "beta", "eta"},
}


class DocumentError(RevnetsError):
    """Malformed or inconsistent document."""


def _sorted_pairs(pairs):
    return [list(p) for p in sorted(pairs)]


def _unordered(pairs):
    return [list(p) for p in sorted({tuple(sorted(p)) for p in pairs})]


def _net_payload(n: Net) -> dict:
    init = n.initial
    initial = sorted(init.support) if init.is_set() else {k: v for k, v in init.items()}
    return {
        "places": sorted(n.places),
        "transitions": sorted(n.transitions),
        "flow": _sorted_pairs(n.flow),
        "initial": initial,
    }


def to_document(x) -> dict:
    from .cat import EsMorphism, NetMorphism

    if isinstance(x, Net):
        doc = {"kind": "net", **_net_payload(x)}
    elif isinstance(x, OccurrenceNet):
        doc = {"kind": "on", **_net_payload(x.net)}
    elif isinstance(x, Rcn):
        doc = {"kind": "rcn", **_net_payload(x.net), "reversing": sorted(x.reversing),
               "undo": dict(sorted(x.undo_map.items()))}
    elif isinstance(x, Rpes):
        doc = {"kind": "rpes", "events": sorted(x.events), "causality": _sorted_pairs(x.causality),
               "conflict": _unordered(x.conflict), "undoable": sorted(x.undoable),
               "revcausality": _sorted_pairs(x.revcausality),
               "prevention": _sorted_pairs(x.prevention)}
    elif isinstance(x, PrePes):
        kind = "pes" if isinstance(x, Pes) else "ppes"
        doc = {"kind": kind, "events": sorted(x.events), "causality": _sorted_pairs(x.causality),
               "conflict": _unordered(x.conflict)}
    elif isinstance(x, EsMorphism):
        doc = {"kind": "morphism", "source": to_document(x.source),
               "target": to_document(x.target), "map": dict(sorted(x.f))}
    elif isinstance(x, NetMorphism):
        doc = {"kind": "morphism", "source": to_document(x.source),
               "target": to_document(x.target), "beta": _sorted_pairs(x.beta),
               "eta": dict(sorted(x.eta))}
    else:
        raise TypeError(f"cannot serialize {type(x).__name__}")
    doc["version"] = VERSION
    return doc


def _render(value, level=0):
    """JSON with sorted keys; lists of scalars stay on one line."""
    pad = "  " * (level + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {_render(value[k], level + 1)}"
                 for k in sorted(value)]
        return "{\n" + ",\n".join(items) + "\n" + "  " * level + "}"
    if isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            return json.dumps(value, ensure_ascii=False)
        items = [pad + _render(v, level + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + "  " * level + "]"
    return json.dumps(value, ensure_ascii=False)


def dumps(x) -> str:
    """Canonical text of a structure (or of an already built document dict)."""
    doc = x if isinstance(x, dict) else to_document(x)
    return _render(doc) + "\n"


def _field(doc, name, kind, default=None):
    if name not in doc:
        if default is not None:
            return default
        raise DocumentError(f"{kind} document: missing field '{name}'")
    return doc[name]


def _str_list(value, ctx):
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise DocumentError(f"{ctx}: expected a list of strings")
    return value


def _pair_list(value, ctx):
    if not isinstance(value, list):
        raise DocumentError(f"{ctx}: expected a list of pairs")
    out = []
    for i, p in enumerate(value):
        if not (isinstance(p, list) and len(p) == 2 and all(isinstance(v, str) for v in p)):
            raise DocumentError(f"{ctx}[{i}]: expected a 2-element list of strings")
        out.append(tuple(p))
    return out


def _net_from(doc, kind) -> Net:
    places = _str_list(_field(doc, "places", kind), f"{kind}.places")
    trans = _str_list(_field(doc, "transitions", kind), f"{kind}.transitions")
    flow = _pair_list(_field(doc, "flow", kind), f"{kind}.flow")
    init = _field(doc, "initial", kind, default=[])
    if isinstance(init, dict):
        if not all(isinstance(v, int) and v >= 0 for v in init.values()):
            raise DocumentError(f"{kind}.initial: multiplicities must be nonnegative integers")
        initial = Multiset(init)
    else:
        initial = Multiset(_str_list(init, f"{kind}.initial"))
    try:
        return Net(places, trans, flow, initial)
    except RevnetsError as exc:
        raise DocumentError(f"{kind}: {exc}") from exc


def from_document(doc, validate: bool = True):
    """Build the structure described by ``doc``.

    With ``validate=False`` occurrence nets and reversible nets are built
    without checking their defining conditions (the CLI validates separately).
    """
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"field 'kind': unknown kind {kind!r}")
    if doc.get("version") != VERSION:
        raise DocumentError(f"field 'version': expected \"{VERSION}\", got {doc.get('version')!r}")
    extra = set(doc) - _FIELDS[kind]
    if extra:
        raise DocumentError(f"{kind} document: unknown field '{sorted(extra)[0]}'")
    if kind == "net":
        return _net_from(doc, kind)
    if kind == "on":
        return OccurrenceNet(_net_from(doc, kind), _checked=not validate)
    if kind == "rcn":
        net = _net_from(doc, kind)
        reversing = _str_list(_field(doc, "reversing", kind), "rcn.reversing")
        r = Rcn(net, reversing, _checked=not validate)
        undo = doc.get("undo")
        if undo is not None:
            if not isinstance(undo, dict):
                raise DocumentError("rcn.undo: expected an object")
            if validate and undo != r.undo_map:
                raise DocumentError("rcn.undo: does not match the mirrored presets and postsets")
        return r
    if kind in ("pes", "ppes", "rpes"):
        events = _str_list(_field(doc, "events", kind), f"{kind}.events")
        causality = _pair_list(_field(doc, "causality", kind, default=[]), f"{kind}.causality")
        conflict = _pair_list(_field(doc, "conflict", kind, default=[]), f"{kind}.conflict")
        conflict = set(conflict) | {(y, x) for x, y in conflict}
        try:
            if kind == "rpes":
                return Rpes(
                    frozenset(events),
                    frozenset(_str_list(_field(doc, "undoable", kind, default=[]), "rpes.undoable")),
                    frozenset(causality), frozenset(conflict),
                    frozenset(_pair_list(_field(doc, "revcausality", kind, default=[]),
                                         "rpes.revcausality")),
                    frozenset(_pair_list(_field(doc, "prevention", kind, default=[]),
                                         "rpes.prevention")))
            cls = Pes if kind == "pes" else PrePes
            return cls(frozenset(events), frozenset(causality), frozenset(conflict))
        except RevnetsError as exc:
            raise DocumentError(f"{kind}: {exc}") from exc
    return _morphism_from(doc, validate)


def _morphism_from(doc, validate):
    from .cat import EsMorphism, NetMorphism

    src = from_document(_field(doc, "source", "morphism"), validate)
    dst = from_document(_field(doc, "target", "morphism"), validate)
    if "map" in doc:
        m = doc["map"]
        if not isinstance(m, dict):
            raise DocumentError("morphism.map: expected an object")
        return EsMorphism.of(src, dst, m)
    eta = _field(doc, "eta", "morphism")
    if not isinstance(eta, dict):
        raise DocumentError("morphism.eta: expected an object")
    beta = _pair_list(_field(doc, "beta", "morphism"), "morphism.beta")
    return NetMorphism.of(src, dst, beta, eta)


def loads(text: str, validate: bool = True):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return from_document(doc, validate)


def load(path, validate: bool = True):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), validate)


def dump(x, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(x))
