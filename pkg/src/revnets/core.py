"""Identifiers, finite multisets and binary-relation helpers.

Everything here is immutable. Relations are plain frozensets of pairs so they
can be hashed, compared and stored inside frozen dataclasses.
"""

from collections import Counter
from itertools import chain, combinations
from typing import Iterable, NamedTuple

from .errors import UnderflowError, UnknownId

FORBIDDEN_CHARS = set(",;(){}⊥")


def is_plain_id(name) -> bool:
    """True for names usable as hand-written identifiers.

    A plain id is a nonempty string without whitespace, without any of
    ``,;(){}⊥`` and not starting with ``~`` (that prefix denotes undoing in
    traces).
    """
    if not isinstance(name, str) or not name:
        return False
    if name.startswith("~"):
        return False
    return not any(ch.isspace() or ch in FORBIDDEN_CHARS for ch in name)


class Violation(NamedTuple):
    """One broken rule found by a validator."""

    rule: str
    message: str

    def __str__(self):
        return f"{self.rule}: {self.message}"


class Multiset:
    """A finite multiset over hashable ids; missing keys have multiplicity 0."""

    __slots__ = ("_items", "_hash")

    def __init__(self, items=()):
        if isinstance(items, Multiset):
            counts = dict(items._items)
        elif isinstance(items, dict):
            counts = {}
            for k, v in items.items():
                if not isinstance(v, int) or v < 0:
                    raise ValueError(f"bad multiplicity {v!r} for {k!r}")
                if v:
                    counts[k] = v
        else:
            counts = dict(Counter(items))
        self._items = counts
        self._hash = None

    def __getitem__(self, key) -> int:
        return self._items.get(key, 0)

    def __contains__(self, key):
        return key in self._items

    def __iter__(self):
        return iter(sorted(self._items))

    def __len__(self):
        """Number of distinct elements (like ``Counter``)."""
        return len(self._items)

    def __bool__(self):
        return bool(self._items)

    def items(self):
        return sorted(self._items.items())

    def total(self) -> int:
        return sum(self._items.values())

    @property
    def support(self) -> frozenset:
        return frozenset(self._items)

    def flatten(self) -> frozenset:
        return frozenset(self._items)

    def is_set(self) -> bool:
        return all(v == 1 for v in self._items.values())

    def __add__(self, other):
        other = other if isinstance(other, Multiset) else Multiset(other)
        out = dict(self._items)
        for k, v in other._items.items():
            out[k] = out.get(k, 0) + v
        return Multiset(out)

    def __sub__(self, other):
        other = other if isinstance(other, Multiset) else Multiset(other)
        out = dict(self._items)
        for k, v in other._items.items():
            have = out.get(k, 0)
            if have < v:
                raise UnderflowError(f"cannot remove {k}:{v} from {self}")
            out[k] = have - v
        return Multiset(out)

    def scale(self, n: int):
        return Multiset({k: v * n for k, v in self._items.items()})

    def __le__(self, other):
        other = other if isinstance(other, Multiset) else Multiset(other)
        return all(other[k] >= v for k, v in self._items.items())

    def __ge__(self, other):
        other = other if isinstance(other, Multiset) else Multiset(other)
        return other <= self

    def __eq__(self, other):
        if isinstance(other, Multiset):
            return self._items == other._items
        if isinstance(other, (set, frozenset)):
            return self.is_set() and self.support == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._items.items()))
        return self._hash

    def __str__(self):
        parts = []
        for k, v in self.items():
            parts.append(str(k) if v == 1 else f"{k}:{v}")
        return "{" + ",".join(parts) + "}"

    def __repr__(self):
        return f"Multiset({str(self)})"


def mset(*names, **counts) -> Multiset:
    """Shorthand: ``mset("a", "b", c=2)``."""
    return Multiset(names) + Multiset(counts)


def check_carrier(pairs: Iterable, carrier, what="relation"):
    """Raise UnknownId if some pair uses an element outside ``carrier``."""
    for x, y in pairs:
        for z in (x, y):
            if z not in carrier:
                raise UnknownId(f"{what} mentions unknown id {z!r}")


def transitive_closure(pairs: Iterable) -> frozenset:
    succ = {}
    for x, y in pairs:
        succ.setdefault(x, set()).add(y)
    closure = set()
    for start in succ:
        stack = list(succ[start])
        seen = set()
        while stack:
            y = stack.pop()
            if y in seen:
                continue
            seen.add(y)
            stack.extend(succ.get(y, ()))
        closure.update((start, y) for y in seen)
    return frozenset(closure)


def reflexive_closure(pairs: Iterable, carrier: Iterable) -> frozenset:
    return frozenset(pairs) | frozenset((x, x) for x in carrier)


def symmetric_closure(pairs: Iterable) -> frozenset:
    pairs = frozenset(pairs)
    return pairs | frozenset((y, x) for x, y in pairs)


def is_irreflexive(pairs: Iterable) -> bool:
    return all(x != y for x, y in pairs)


def is_symmetric(pairs: Iterable) -> bool:
    pairs = frozenset(pairs)
    return all((y, x) in pairs for x, y in pairs)


def is_transitive(pairs: Iterable) -> bool:
    pairs = frozenset(pairs)
    return transitive_closure(pairs) <= pairs


def is_strict_partial_order(pairs: Iterable) -> bool:
    pairs = frozenset(pairs)
    return is_irreflexive(pairs) and is_transitive(pairs)


def down(pairs: Iterable, x) -> frozenset:
    """Elements strictly below ``x`` in the given relation."""
    return frozenset(a for a, b in pairs if b == x)


def up(pairs: Iterable, x) -> frozenset:
    return frozenset(b for a, b in pairs if a == x)


def powerset(items: Iterable):
    items = sorted(items)
    return chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))


def fmt_set(items) -> str:
    """Canonical ``{a,b,c}`` rendering with sorted members."""
    return "{" + ",".join(sorted(str(x) for x in items)) + "}"


def sort_key_sets(sets):
    """Deterministic ordering for a collection of sets: by size, then members."""
    return sorted(sets, key=lambda s: (len(s), sorted(str(x) for x in s)))
