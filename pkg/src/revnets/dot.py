"""Graphviz DOT export for nets."""

from .occnet import OccurrenceNet
from .rcn import Rcn


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(x) -> str:
    """Conditions as circles (a dot when initially marked), events as boxes,
    reversing events as red boxes in group "rev"."""
    reversing = frozenset()
    if isinstance(x, Rcn):
        reversing = x.reversing
        x = x.net
    elif isinstance(x, OccurrenceNet):
        x = x.net
    lines = ["digraph net {"]
    if x.places or x.transitions:
        lines.append("  rankdir=TB;")
    for p in sorted(x.places):
        k = x.initial[p]
        label = "•" if k == 1 else (str(k) if k else "")
        lines.append(f"  {_quote(p)} [shape=circle, label={_quote(label)}, xlabel={_quote(p)}];")
    for t in sorted(x.transitions):
        if t in reversing:
            lines.append(f"  {_quote(t)} [shape=box, group=\"rev\", style=filled, "
                         f"fillcolor=\"#f4a0a0\", color=red];")
        else:
            lines.append(f"  {_quote(t)} [shape=box];")
    for a, b in sorted(x.flow):
        lines.append(f"  {_quote(a)} -> {_quote(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
