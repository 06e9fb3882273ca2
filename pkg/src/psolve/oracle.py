"""Ground-truth brute force: enumerate every X subseteq V and test the
S-partition condition directly.  Deliberately unclever; every other decider
is validated against this one.
"""

from __future__ import annotations

from typing import Iterator

from .core import Bihypergraph, Certificate, SPartition, Verdict, VertexSet

DEFAULT_MAX_VERTICES = 24


class UniverseTooLargeError(Exception):
    """The vertex universe exceeds the enumeration cap."""


def _subsets_in_lex_order(n: int) -> Iterator[int]:
    """Yield all subset masks of {0..n-1} ordered lexicographically by their
    sorted id sequences ({} < {0} < {0,1} < ... < {1} < ...)."""
    stack = [(0, 0)]
    while stack:
        mask, start = stack.pop()
        yield mask
        # Push children in reverse so the smallest extension pops first.
        for j in range(n - 1, start - 1, -1):
            stack.append((mask | 1 << j, j + 1))


def _is_witness(mask: int, e_masks: list[int], cf_full: int, f_masks: list[int]) -> bool:
    comp = cf_full & ~mask
    return all(mask & em for em in e_masks) and all(comp & fm for fm in f_masks)


def brute_force_decide(b: Bihypergraph,
                       max_vertices: int = DEFAULT_MAX_VERTICES) -> Certificate:
    """Decide by full enumeration; HasS carries the lexicographically least
    witness X (compared as sorted id sequences)."""
    n = b.vertex_count
    if n > max_vertices:
        raise UniverseTooLargeError(f"|V| = {n} exceeds cap {max_vertices}")
    e_masks = [s.mask for s in b.e_sets]
    f_masks = [s.mask for s in b.f_sets]
    full = (1 << n) - 1
    for mask in _subsets_in_lex_order(n):
        if _is_witness(mask, e_masks, full, f_masks):
            return Certificate(Verdict.HAS_S, SPartition(VertexSet(mask)), method="oracle")
    return Certificate(Verdict.FAILS_S, None, method="oracle")


def count_s_partitions(b: Bihypergraph,
                       max_vertices: int = DEFAULT_MAX_VERTICES) -> int:
    """Number of subsets X of V for which {X, V-X} is an S-partition."""
    n = b.vertex_count
    if n > max_vertices:
        raise UniverseTooLargeError(f"|V| = {n} exceeds cap {max_vertices}")
    e_masks = [s.mask for s in b.e_sets]
    f_masks = [s.mask for s in b.f_sets]
    full = (1 << n) - 1
    return sum(1 for mask in range(1 << n) if _is_witness(mask, e_masks, full, f_masks))
