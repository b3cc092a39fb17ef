"""Command-line interface: ``revnets <command> ...``.

Exit codes: 0 success, 1 parse or I/O error, 2 semantic violation or a
disabled step.
"""

import argparse
import sys
import warnings

from .core import Multiset, fmt_set, sort_key_sets
from .documents import DocumentError, dumps, load
from .errors import ExplorationLimitExceeded, NotEnabled, RevnetsError, UnknownId, ValidationError
from .es import PrePes, Pes, pes_violations, ppes_configurations, ppes_violations
from .occnet import OccurrenceNet, occurrence_net_violations
from .petri import DEFAULT_CAP, Net, fire, net_violations, reachable_markings, states, step_enabled
from .rcn import Rcn, rcn_configurations, rcn_violations
from .rpes import Rpes, enabling_failures, rpes_configurations, rpes_violations
from .verify import KINDS as GEN_KINDS, all_passed, check_names, gen_random, run_checks
from .xform import NonCausalWarning, fwd, on_to_pes, pes_to_on, rcn_to_rpes, rev, reversify, rpes_to_rcn

EXIT_OK, EXIT_PARSE, EXIT_SEMANTIC = 0, 1, 2

CONVERSIONS = {("on", "pes"), ("pes", "on"), ("on", "rcn"), ("rcn", "rpes"), ("rpes", "rcn")}


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _out(text, path=None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read(path, validate=True):
    try:
        return load(path, validate)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_PARSE)
    except DocumentError as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE)
    except ValidationError as exc:
        raise CliError(f"{path}: {exc}", EXIT_SEMANTIC)


def _kind(x):
    if isinstance(x, Rcn):
        return "rcn"
    if isinstance(x, OccurrenceNet):
        return "on"
    if isinstance(x, Net):
        return "net"
    if isinstance(x, Rpes):
        return "rpes"
    if isinstance(x, Pes):
        return "pes"
    if isinstance(x, PrePes):
        return "ppes"
    return "morphism"


# --------------------------------------------------------------- commands

def cmd_validate(args):
    x = _read(args.file, validate=False)
    kind = _kind(x)
    if kind == "net":
        bad = net_violations(x, args.cap)
    elif kind == "on":
        bad = occurrence_net_violations(x.net, args.cap)
    elif kind == "rcn":
        bad = rcn_violations(x.net, x.reversing, args.cap)
    elif kind == "pes":
        bad = pes_violations(x)
    elif kind == "ppes":
        bad = ppes_violations(x)
    elif kind == "rpes":
        bad = rpes_violations(x)
    else:
        from .cat import morphism_violations
        bad = morphism_violations(x)
    if bad:
        for v in bad:
            print(f"violation: {v}")
        return EXIT_SEMANTIC
    print(f"valid {kind}")
    return EXIT_OK


def cmd_convert(args):
    pair = (args.source_kind, args.target_kind)
    if pair not in CONVERSIONS:
        raise CliError(f"unsupported conversion {pair[0]} -> {pair[1]}", EXIT_PARSE)
    x = _read(args.input)
    if _kind(x) != args.source_kind and not (args.source_kind == "pes" and _kind(x) == "ppes"):
        raise CliError(f"{args.input}: expected a {args.source_kind} document, got {_kind(x)}",
                       EXIT_PARSE)
    if pair == ("on", "pes"):
        y = on_to_pes(x)
    elif pair == ("pes", "on"):
        bad = pes_violations(x)
        if bad:
            raise CliError(f"{args.input}: {bad[0]}", EXIT_SEMANTIC)
        y = pes_to_on(Pes(x.events, x.causality, x.conflict))
    elif pair == ("on", "rcn"):
        if args.reversible is None:
            raise CliError("--reversible is required for on -> rcn", EXIT_PARSE)
        names = [s for s in args.reversible.split(",") if s]
        unknown = [s for s in names if s not in x.events]
        if unknown:
            raise CliError(f"--reversible: unknown event {unknown[0]}", EXIT_SEMANTIC)
        y = reversify(x, names)
    elif pair == ("rcn", "rpes"):
        y = rcn_to_rpes(x)
    else:
        bad = rpes_violations(x)
        if bad:
            raise CliError(f"{args.input}: {bad[0]}", EXIT_SEMANTIC)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", NonCausalWarning)
            rpes_to_rcn.cache_clear()
            y = rpes_to_rcn(x)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    _out(dumps(y), args.output)
    return EXIT_OK


def _configurations(x):
    kind = _kind(x)
    if kind == "on":
        return x.configurations()
    if kind == "rcn":
        return rcn_configurations(x)
    if kind in ("pes", "ppes"):
        return ppes_configurations(x)
    if kind == "rpes":
        return rpes_configurations(x)
    raise CliError(f"no configurations for a {kind} document", EXIT_PARSE)


def _net_of(x):
    if isinstance(x, (Rcn, OccurrenceNet)):
        return x.net
    if isinstance(x, Net):
        return x
    raise CliError(f"expected a net document, got {_kind(x)}", EXIT_PARSE)


def cmd_configs(args):
    x = _read(args.file)
    for s in sort_key_sets(_configurations(x)):
        print(fmt_set(s))
    return EXIT_OK


def _mset_key(m):
    return (m.total(), str(m))


def cmd_reach(args):
    n = _net_of(_read(args.file))
    for m in sorted(reachable_markings(n, args.cap), key=_mset_key):
        print(m)
    return EXIT_OK


def cmd_states(args):
    x = _read(args.file)
    n = _net_of(x)
    depth = args.depth
    if depth is None and isinstance(x, Rcn) and x.reversing:
        depth = 6
    for s in sorted(states(n, max_length=depth, cap=args.cap), key=_mset_key):
        print(s)
    return EXIT_OK


def _parse_trace(text):
    steps = []
    for chunk in text.split(";"):
        tokens = [t.strip() for t in chunk.split(",") if t.strip()]
        if not tokens:
            raise CliError(f"--trace: empty step in {text!r}", EXIT_PARSE)
        steps.append(tokens)
    return steps


def _resolve_net_token(r, token):
    events = r.events if not isinstance(r, Net) else r.transitions
    undo = token.startswith("~")
    name = token[1:] if undo else token
    if not undo:
        for cand in (name, fwd(name)):
            if cand in events:
                return cand
        raise UnknownId(f"unknown event {token!r}")
    if not isinstance(r, Rcn):
        raise UnknownId(f"{token!r}: this net has no reversing events")
    for cand in (name, fwd(name)):
        if cand in r.reverser_of:
            return r.reverser_of[cand]
    if rev(name) in r.reversing:
        return rev(name)
    raise UnknownId(f"{token!r}: {name} cannot be reversed")


def _simulate_net(x, steps):
    n = _net_of(x)
    m = n.initial
    print(f"start: {m}")
    for i, tokens in enumerate(steps, 1):
        step = Multiset(_resolve_net_token(x, t) for t in tokens)
        if not step_enabled(n, m, step):
            missing = [p for p, k in _step_need(n, step).items() if m[p] < k]
            print(f"step {i} {step}: not enabled: place {missing[0]} is not marked", file=sys.stdout)
            return EXIT_SEMANTIC
        m = fire(n, m, step)
        print(f"step {i} {step}: {m}")
    print(f"final: {m}")
    return EXIT_OK


def _step_need(n, step):
    need = Multiset()
    for t, k in step.items():
        need = need + Multiset(n.pre(t)).scale(k)
    return need


def _simulate_es(x, steps):
    conf = frozenset()
    print(f"start: {fmt_set(conf)}")
    is_r = isinstance(x, Rpes)
    for i, tokens in enumerate(steps, 1):
        a = {t for t in tokens if not t.startswith("~")}
        b = {t[1:] for t in tokens if t.startswith("~")}
        label = ",".join(tokens)
        if is_r:
            bad = enabling_failures(x, conf, a, b)
        else:
            if b:
                raise UnknownId("event structures without undoable events cannot undo")
            from .es import ppes_enabling_failures
            bad = ppes_enabling_failures(x, conf, a)
        if bad:
            print(f"step {i} {label}: not enabled: {'; '.join(bad)}")
            return EXIT_SEMANTIC
        conf = (conf - b) | a
        print(f"step {i} {label}: {fmt_set(conf)}")
    print(f"final: {fmt_set(conf)}")
    return EXIT_OK


def cmd_simulate(args):
    x = _read(args.file)
    steps = _parse_trace(args.trace)
    try:
        if isinstance(x, (Net, OccurrenceNet, Rcn)):
            return _simulate_net(x, steps)
        if isinstance(x, (PrePes, Rpes)):
            return _simulate_es(x, steps)
    except UnknownId as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    raise CliError(f"cannot simulate a {_kind(x)} document", EXIT_PARSE)


def cmd_check(args):
    x = _read(args.file)
    selection = None
    if args.checks:
        selection = [c for c in args.checks.split(",") if c]
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NonCausalWarning)
            reports = run_checks(x, selection)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE)
    doc = {"kind": "report", "version": "1", "checks": [r.to_dict() for r in reports]}
    text = dumps(doc)
    _out(text, args.output)
    if args.output:
        for r in reports:
            print(f"{r.verdict:7} {r.name}" + (" (known)" if r.verdict == "fail" and r.known else ""))
    return EXIT_OK if all_passed(reports, args.allow_known) else EXIT_SEMANTIC


def cmd_dot(args):
    from .dot import to_dot
    x = _read(args.file, validate=False)
    if _kind(x) not in ("net", "on", "rcn"):
        raise CliError(f"expected a net document, got {_kind(x)}", EXIT_PARSE)
    _out(to_dot(x), args.output)
    return EXIT_OK


def cmd_gen(args):
    try:
        x = gen_random(args.kind, args.size, args.seed)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE)
    _out(dumps(x), args.output)
    return EXIT_OK


# ----------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    """Usage errors are parse errors: exit 1 instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser():
    ap = _Parser(prog="revnets", description=(
        "Occurrence nets, prime event structures and their reversible variants."))
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--cap", type=int, default=DEFAULT_CAP,
                       help="maximum number of markings explored (default %(default)s)")
        p.set_defaults(func=fn)
        return p

    p = add("validate", cmd_validate, "check a document against its kind's rules")
    p.add_argument("file")

    p = add("convert", cmd_convert, "translate between structure kinds")
    p.add_argument("--from", dest="source_kind", required=True, choices=["on", "pes", "rcn", "rpes"])
    p.add_argument("--to", dest="target_kind", required=True, choices=["on", "pes", "rcn", "rpes"])
    p.add_argument("--reversible", help="comma-separated events to make reversible (on -> rcn)")
    p.add_argument("input")
    p.add_argument("output", nargs="?")

    p = add("configs", cmd_configs, "list configurations")
    p.add_argument("file")

    p = add("reach", cmd_reach, "list reachable markings")
    p.add_argument("file")

    p = add("states", cmd_states, "list states (multisets of fired events)")
    p.add_argument("--depth", type=int, help="maximum firing-sequence length "
                   "(default: unbounded, 6 for nets with reversing events)")
    p.add_argument("file")

    p = add("simulate", cmd_simulate, "replay a trace such as 'a ; b ; c,~b'")
    p.add_argument("--trace", required=True)
    p.add_argument("file")

    p = add("check", cmd_check, "run exhaustive property checks")
    p.add_argument("--checks", help="comma-separated check names (default: all applicable); "
                   f"known names: {', '.join(check_names())}")
    p.add_argument("--allow-known", action="store_true",
                   help="exit 0 when the only failures are expected ones")
    p.add_argument("-o", "--output", help="write the JSON report here")
    p.add_argument("file")

    p = add("dot", cmd_dot, "export a net as Graphviz DOT")
    p.add_argument("file")
    p.add_argument("output", nargs="?")

    p = add("gen", cmd_gen, "generate a random structure")
    p.add_argument("kind", choices=GEN_KINDS)
    p.add_argument("--size", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ExplorationLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except NotEnabled as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except RevnetsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
