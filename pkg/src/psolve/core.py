"""Core types: interned vertices, canonical vertex sets, bihypergraphs, and
the S-partition test.

A bihypergraph <V, E, F> has property S when V splits into {X, V-X} with X
meeting every E-set and V-X meeting every F-set.  Everything downstream
(closures, search, encodings) trades in the types defined here.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Iterator

# Characters with structural meaning in the text formats; names and labels
# may not contain them.
_FORBIDDEN_CHARS = set(" \t\r\n\f\v#:,/<")


def check_token(token: str, what: str = "name") -> str:
    """Validate a vertex name or label for use in the line-oriented formats."""
    if not isinstance(token, str) or not token:
        raise ValueError(f"empty {what} token")
    if token == "{}" or not token.isprintable() or any(c in _FORBIDDEN_CHARS for c in token):
        raise ValueError(
            f"invalid {what} {token!r}: tokens may not be '{{}}' or contain "
            "whitespace or any of '#:,/<'"
        )
    return token


@dataclass(frozen=True)
class Vertex:
    """An interned vertex: dense integer id plus its display name."""

    id: int
    name: str


@dataclass(frozen=True)
class VertexSet:
    """Canonical immutable vertex set.

    Internally a bitmask (bit i set iff vertex id i is a member), so subset,
    union, difference and intersection tests are single integer operations.
    The canonical external form is the sorted id sequence from ``members``.
    """

    mask: int = 0

    def __post_init__(self) -> None:
        if self.mask < 0:
            raise ValueError("vertex ids must be nonnegative")

    @classmethod
    def of(cls, ids: Iterable[int]) -> "VertexSet":
        mask = 0
        for i in ids:
            if i < 0:
                raise ValueError("vertex ids must be nonnegative")
            mask |= 1 << i
        return cls(mask)

    @property
    def members(self) -> tuple[int, ...]:
        out = []
        m = self.mask
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return tuple(out)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, vertex_id: int) -> bool:
        return vertex_id >= 0 and bool(self.mask >> vertex_id & 1)

    def __bool__(self) -> bool:
        return self.mask != 0

    def __repr__(self) -> str:
        return f"VertexSet.of({list(self.members)})"

    def union(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask | other.mask)

    def difference(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask & ~other.mask)

    def intersection(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask & other.mask)

    def intersects(self, other: "VertexSet") -> bool:
        return bool(self.mask & other.mask)

    def issubset(self, other: "VertexSet") -> bool:
        return self.mask & ~other.mask == 0


@dataclass(frozen=True)
class SPartition:
    """The witnessing cell X of an S-partition {X, V-X}."""

    x_side: VertexSet


@dataclass(frozen=True)
class Bihypergraph:
    """A finite bihypergraph <V, E, F> with stable per-family set labels."""

    names: tuple[str, ...]
    e_sets: tuple[VertexSet, ...]
    f_sets: tuple[VertexSet, ...]
    e_labels: tuple[str, ...]
    f_labels: tuple[str, ...]

    def __post_init__(self) -> None:
        index: dict[str, int] = {}
        for i, name in enumerate(self.names):
            check_token(name, "vertex name")
            if name in index:
                raise ValueError(f"duplicate vertex name {name!r}")
            index[name] = i
        for family, sets, labels in (("E", self.e_sets, self.e_labels),
                                     ("F", self.f_sets, self.f_labels)):
            if len(sets) != len(labels):
                raise ValueError(f"{family}: one label per set required")
            seen: set[str] = set()
            for label in labels:
                check_token(label, "label")
                if label in seen:
                    raise ValueError(f"duplicate {family}-label {label!r}")
                seen.add(label)
            for vs in sets:
                if vs.mask >> len(self.names):
                    raise ValueError(f"{family}-set member id out of range: {vs!r}")
        object.__setattr__(self, "_name_index", index)
        object.__setattr__(self, "_e_index", {l: i for i, l in enumerate(self.e_labels)})
        object.__setattr__(self, "_f_index", {l: i for i, l in enumerate(self.f_labels)})

    @property
    def vertex_count(self) -> int:
        return len(self.names)

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return tuple(Vertex(i, n) for i, n in enumerate(self.names))

    @property
    def full_set(self) -> VertexSet:
        return VertexSet((1 << len(self.names)) - 1)

    def id_of(self, name: str) -> int:
        try:
            return self._name_index[name]  # type: ignore[attr-defined]
        except KeyError:
            raise ValueError(f"unknown vertex name {name!r}") from None

    def name_of(self, vertex_id: int) -> str:
        return self.names[vertex_id]

    def set_of_names(self, names: Iterable[str]) -> VertexSet:
        return VertexSet.of(self.id_of(n) for n in names)

    def names_of(self, vs: VertexSet) -> tuple[str, ...]:
        return tuple(self.names[i] for i in vs.members)

    def complement(self, vs: VertexSet) -> VertexSet:
        if vs.mask >> self.vertex_count:
            raise ValueError("vertex id out of range for this instance")
        return VertexSet(self.full_set.mask & ~vs.mask)

    def e_set(self, label: str) -> VertexSet:
        try:
            return self.e_sets[self._e_index[label]]  # type: ignore[attr-defined]
        except KeyError:
            raise ValueError(f"unknown E-label {label!r}") from None

    def f_set(self, label: str) -> VertexSet:
        try:
            return self.f_sets[self._f_index[label]]  # type: ignore[attr-defined]
        except KeyError:
            raise ValueError(f"unknown F-label {label!r}") from None


def build(names: Iterable[str] = (),
          e_sets: Iterable[Iterable[str]] = (),
          f_sets: Iterable[Iterable[str]] = (),
          e_labels: Iterable[str] | None = None,
          f_labels: Iterable[str] | None = None) -> Bihypergraph:
    """Construct a bihypergraph from vertex names and name-sets.

    Names listed in ``names`` are interned first, in the given order; any
    name appearing only inside a set is interned at first occurrence.
    Labels default to E1..En and F1..Fm.
    """
    interned: dict[str, int] = {}
    order: list[str] = []
    for name in names:
        check_token(name, "vertex name")
        if name in interned:
            raise ValueError(f"duplicate vertex name {name!r}")
        interned[name] = len(order)
        order.append(name)

    def intern(name: str) -> int:
        check_token(name, "vertex name")
        if name not in interned:
            interned[name] = len(order)
            order.append(name)
        return interned[name]

    e_vs = tuple(VertexSet.of(intern(n) for n in s) for s in e_sets)
    f_vs = tuple(VertexSet.of(intern(n) for n in s) for s in f_sets)
    e_lab = tuple(e_labels) if e_labels is not None else tuple(f"E{i + 1}" for i in range(len(e_vs)))
    f_lab = tuple(f_labels) if f_labels is not None else tuple(f"F{i + 1}" for i in range(len(f_vs)))
    return Bihypergraph(tuple(order), e_vs, f_vs, e_lab, f_lab)


def validate(b: Bihypergraph) -> list[str]:
    """Return non-fatal warnings (hard errors are raised at construction).

    Duplicate sets within one family are legal, since proof annotations may
    reference either label, but they are worth flagging.
    """
    warnings = []
    for family, sets, labels in (("E", b.e_sets, b.e_labels), ("F", b.f_sets, b.f_labels)):
        first: dict[int, str] = {}
        for vs, label in zip(sets, labels):
            if vs.mask in first:
                warnings.append(
                    f"{family}: sets {first[vs.mask]!r} and {label!r} are equal")
            else:
                first[vs.mask] = label
    return warnings


def is_transversal(x: VertexSet, family: Iterable[VertexSet],
                   universe: VertexSet | None = None) -> bool:
    """True iff x meets every set in the family (vacuously true if empty).

    When ``universe`` is given, x and all family members must be subsets of
    it; a stray member id raises ValueError.
    """
    if universe is not None and not x.issubset(universe):
        raise ValueError("member id out of range")
    ok = True
    for a in family:
        if universe is not None and not a.issubset(universe):
            raise ValueError("member id out of range")
        if not (a.mask & x.mask):
            ok = False
            if universe is None:
                return False
    return ok


def check_s_partition(b: Bihypergraph, x: VertexSet) -> bool:
    """True iff {x, V-x} is an S-partition of b.

    Computed both as "V-x meets every F-set" and as "x contains no F-set";
    the two formulations must agree, and the agreement is asserted.
    """
    comp = b.complement(x)
    f_via_complement = is_transversal(comp, b.f_sets)
    f_via_containment = not any(f.issubset(x) for f in b.f_sets)
    assert f_via_complement == f_via_containment
    return is_transversal(x, b.e_sets) and f_via_complement


def family_intersection(e_family: Iterable[VertexSet],
                        f_family: Iterable[VertexSet]) -> tuple[VertexSet, ...]:
    """Sets occurring (up to set equality) in both families, deduplicated
    and in canonical order."""
    common = {vs.mask for vs in e_family} & {vs.mask for vs in f_family}
    return tuple(sorted((VertexSet(m) for m in common), key=lambda v: v.members))


class Verdict(str, Enum):
    """Outcome of a decision procedure or a sufficient/necessary criterion."""

    HAS_S = "HasS"
    FAILS_S = "FailsS"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Certificate:
    """Verdict plus its checkable evidence.

    ``witness`` is an SPartition for HasS, a Refutation for FailsS when one
    was produced by resolution, and None when FailsS was established by
    exhaustive search alone (or when HasS came from a fixed-point argument
    that yields no explicit partition).
    """

    verdict: Verdict
    witness: Any = None
    method: str = ""
    stats: Any = None
