"""Generalized n-ary resolution over vertex sets.

The rule: from clauses c1..cn and a pivot set d = {v1..vn} with vi in ci,
derive the resolvent e = union of (ci minus {vi}).  Closing one family under
resolution on pivots drawn from the other decides property S: the instance
fails iff the empty set is derivable.  This module implements single steps,
closures with subsumption reduction, alternating closures, refutation
extraction from recorded parent links, and an independent refutation checker.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Bihypergraph, Certificate, Verdict, VertexSet


class ResourceLimitError(Exception):
    """Closure limits were exhausted before the answer was known.

    The result is indeterminate: it must never be reported as HasS.
    """


@dataclass(frozen=True)
class Limits:
    """Caps on closure work: kept sets, rounds, and per-pivot fan-out."""

    max_sets: int = 1_000_000
    max_rounds: int = 10_000


DEFAULT_LIMITS = Limits()

MODE_E_OVER_F = "E-over-F"
MODE_F_OVER_E = "F-over-E"


@dataclass(frozen=True)
class ResolutionStep:
    """One resolution inference, annotated as (premises / pivot).

    ``premises`` and ``pivot`` are references: family labels or ids of
    earlier steps.  ``pairing`` maps each pivot element (ascending vertex id)
    to a position in ``premises``; None means the pairing was not recorded
    (e.g. a transcribed proof) and the checker must find one.
    """

    step_id: str
    conclusion: VertexSet
    premises: tuple[str, ...]
    pivot: str
    pairing: tuple[tuple[int, int], ...] | None = None


@dataclass(frozen=True)
class Refutation:
    """A derivation of the empty set: topologically ordered steps, the last
    concluding the empty set, under one closure discipline (``mode``)."""

    mode: str
    steps: tuple[ResolutionStep, ...]


@dataclass(frozen=True)
class ClosureStats:
    generated: int
    kept: int
    subsumed: int
    rounds: int


@dataclass(frozen=True)
class ClosureResult:
    """Subsumption-reduced closure: an antichain of sets.

    ``contains_empty`` answers empty-set membership for the true, unreduced
    closure; subsumption reduction does not change that answer.  When true,
    ``sets`` is exactly (the empty set,).
    """

    sets: tuple[VertexSet, ...]
    contains_empty: bool
    stats: ClosureStats


@dataclass(frozen=True)
class CheckResult:
    """Outcome of refutation checking; falsy with the first failing step."""

    ok: bool
    step_id: str | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def resolve(premises: Sequence[VertexSet], pivot: VertexSet,
            pairing: Iterable[tuple[int, int]]) -> VertexSet:
    """Apply one resolution step and return the resolvent.

    ``pairing`` lists (pivot vertex, premise index) pairs; every pivot
    element must be paired exactly once with a premise containing it.
    Premises may repeat: one set may serve several pivot elements.
    """
    premises = list(premises)
    covered: set[int] = set()
    out = 0
    for v, idx in pairing:
        if v not in pivot:
            raise ValueError(f"pairing vertex {v} is not in the pivot")
        if v in covered:
            raise ValueError(f"pivot element {v} paired more than once")
        covered.add(v)
        if not 0 <= idx < len(premises):
            raise ValueError(f"premise index {idx} out of range")
        if v not in premises[idx]:
            raise ValueError(f"paired vertex {v} is absent from premise {idx}")
        out |= premises[idx].mask & ~(1 << v)
    if len(covered) != len(pivot):
        raise ValueError("pivot element left unpaired")
    return VertexSet(out)


class _Stats:
    __slots__ = ("generated", "kept", "subsumed", "rounds")

    def __init__(self) -> None:
        self.generated = 0
        self.kept = 0
        self.subsumed = 0
        self.rounds = 0

    def freeze(self) -> ClosureStats:
        return ClosureStats(self.generated, self.kept, self.subsumed, self.rounds)


class _Trace:
    """Derivation records for every set ever kept, indexed by step number.

    A record is (mask, pivot_ref, pairing) where pairing is a tuple of
    (vertex, premise_ref) pairs in ascending vertex order.  References are
    ('E', i) / ('F', i) for input sets and ('step', k) for records.
    """

    __slots__ = ("records",)

    def __init__(self) -> None:
        self.records: list[tuple[int, tuple, tuple]] = []

    def add(self, mask: int, pivot_ref: tuple, pairing: tuple) -> int:
        self.records.append((mask, pivot_ref, pairing))
        return len(self.records) - 1


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _pivot_resolvents(working: list[tuple[int, tuple]], pivot_mask: int,
                      limits: Limits, stats: _Stats,
                      prune_against: list[tuple[int, tuple]] | None = None):
    """All resolvents of ``working`` on one pivot, subsumption-reduced.

    Runs a union DP over the pivot elements in ascending id order: partial
    states are the achievable unions of contributions so far, pruned to an
    antichain per level.  Pruning preserves the minimal resolvents exactly
    (a dominated partial union can only lead to a dominated resolvent) and
    keeps the fan-out polynomial in practice where literal pairing
    enumeration is exponential in the pivot size.

    Returns a list of (mask, pairing) with pairing as in _Trace.  When
    ``prune_against`` is given, resolvents that are supersets of any of
    those masks are dropped early; callers that will reject such resolvents
    anyway (the closure loop) use this, the public enumeration must not.
    """
    elems = _bits(pivot_mask)
    states: dict[int, tuple | None] = {0: None}
    level_maps: list[dict[int, tuple]] = []
    for v in elems:
        bit = 1 << v
        choices = [(m & ~bit, ref) for m, ref in working if m & bit]
        if not choices:
            return []
        nxt: dict[int, tuple] = {}
        for s in states:
            for cm, ref in choices:
                u = s | cm
                if u in nxt:
                    continue
                dominated = False
                for k in nxt:
                    if k & u == k:
                        dominated = True
                        break
                if dominated:
                    continue
                for k in [k for k in nxt if u & k == u]:
                    del nxt[k]
                if prune_against is not None and any(
                        am & u == am for am, _ in prune_against):
                    continue
                nxt[u] = (s, v, ref)
                if len(nxt) > limits.max_sets:
                    raise ResourceLimitError(
                        f"pivot fan-out exceeded max_sets={limits.max_sets}")
        if not nxt:
            return []
        states = nxt
        level_maps.append(nxt)

    finals = []
    for final_mask in states:
        pairing = []
        cur = final_mask
        for level in reversed(level_maps):
            prev, v, ref = level[cur]
            pairing.append((v, ref))
            cur = prev
        pairing.reverse()
        finals.append((final_mask, tuple(pairing)))
    stats.generated += len(finals)
    return finals


def all_resolvents(working: Iterable[VertexSet], pivot: VertexSet,
                   limits: Limits | None = None) -> tuple[VertexSet, ...]:
    """Every resolvent obtainable from ``working`` by resolving on ``pivot``,
    deduplicated and subsumption-reduced against each other.

    ``working`` is expected to be an antichain.  The empty pivot yields the
    single resolvent {} (the empty union over zero premises).
    """
    limits = limits or DEFAULT_LIMITS
    items = [(vs.mask, ("W", i)) for i, vs in enumerate(working)]
    finals = _pivot_resolvents(items, pivot.mask, limits, _Stats())
    return tuple(sorted((VertexSet(m) for m, _ in finals), key=lambda v: v.members))


def _run_closure(base_items: list[tuple[int, tuple]],
                 pivot_items: list[tuple[int, tuple]],
                 limits: Limits, trace: _Trace, stats: _Stats):
    """Close ``base_items`` under resolution on ``pivot_items``.

    Maintains the kept sets as an antichain (only subset-minimal sets
    survive) and stops as soon as the empty set is derived.  Termination:
    each distinct mask is admitted at most once, because every admitted mask
    leaves behind a kept subset of itself for the rest of the run.

    Returns (antichain, contains_empty) where antichain is a list of
    (mask, ref) in insertion order.
    """
    antichain: list[tuple[int, tuple]] = []

    def is_subsumed(mask: int) -> bool:
        return any(m & mask == m for m, _ in antichain)

    def insert(mask: int, ref: tuple) -> None:
        keep = [(m, r) for m, r in antichain if mask & m != mask]
        stats.subsumed += len(antichain) - len(keep)
        antichain[:] = keep
        antichain.append((mask, ref))
        stats.kept += 1
        if stats.kept > limits.max_sets:
            raise ResourceLimitError(f"kept-set limit {limits.max_sets} exceeded")

    for mask, ref in base_items:
        if is_subsumed(mask):
            stats.subsumed += 1
            continue
        insert(mask, ref)
        if mask == 0:
            return antichain, True

    pivots = []
    seen_pivots: set[int] = set()
    for mask, ref in pivot_items:
        if mask not in seen_pivots:
            seen_pivots.add(mask)
            pivots.append((mask, ref))

    changed = bool(pivots)
    while changed:
        stats.rounds += 1
        if stats.rounds > limits.max_rounds:
            raise ResourceLimitError(f"round limit {limits.max_rounds} exceeded")
        changed = False
        for dmask, dref in pivots:
            finals = _pivot_resolvents(list(antichain), dmask, limits, stats,
                                       prune_against=antichain)
            for mask, pairing in finals:
                if is_subsumed(mask):
                    stats.subsumed += 1
                    continue
                idx = trace.add(mask, dref, pairing)
                insert(mask, ("step", idx))
                changed = True
                if mask == 0:
                    return antichain, True
    return antichain, False


def _family_items(b: Bihypergraph, side: str) -> list[tuple[int, tuple]]:
    sets = b.e_sets if side == "E" else b.f_sets
    return [(vs.mask, (side, i)) for i, vs in enumerate(sets)]


def _closure_result(antichain, contains_empty, stats: _Stats) -> ClosureResult:
    sets = tuple(sorted((VertexSet(m) for m, _ in antichain), key=lambda v: v.members))
    return ClosureResult(sets, contains_empty, stats.freeze())


def closure(a_family: Iterable[VertexSet], d_family: Iterable[VertexSet],
            limits: Limits | None = None) -> ClosureResult:
    """The closure of ``a_family`` under resolution on pivots from
    ``d_family``, subsumption-reduced, with early exit once {} is derived."""
    limits = limits or DEFAULT_LIMITS
    trace, stats = _Trace(), _Stats()
    base = [(vs.mask, ("A", i)) for i, vs in enumerate(a_family)]
    pivots = [(vs.mask, ("D", i)) for i, vs in enumerate(d_family)]
    antichain, has_empty = _run_closure(base, pivots, limits, trace, stats)
    return _closure_result(antichain, has_empty, stats)


def _alternating_items(b: Bihypergraph, n: int, side: str, limits: Limits,
                       trace: _Trace, stats: _Stats):
    """Iterated closure chain: level 0 is the (reduced) base family, level k
    closes the base family over the level k-1 family of the other side.

    Returns (antichain, contains_empty) of the requested level.
    """
    memo: dict[tuple[str, int], tuple[list, bool]] = {}

    def level(s: str, k: int):
        key = (s, k)
        if key not in memo:
            if k == 0:
                pivots: list[tuple[int, tuple]] = []
            else:
                pivots = level("F" if s == "E" else "E", k - 1)[0]
            memo[key] = _run_closure(_family_items(b, s), pivots, limits,
                                     trace, stats)
        return memo[key]

    return level(side, n)


def alternating_closure(b: Bihypergraph, n: int, side: str = "E",
                        limits: Limits | None = None) -> ClosureResult:
    """The depth-n alternating closure starting from the given family.

    side='E' computes the chain whose level k closes E over the level k-1
    closure of F, and symmetrically for side='F'.  n=0 returns the
    subsumption-reduced base family itself.
    """
    if side not in ("E", "F"):
        raise ValueError("side must be 'E' or 'F'")
    if n < 0:
        raise ValueError("depth must be nonnegative")
    limits = limits or DEFAULT_LIMITS
    trace, stats = _Trace(), _Stats()
    antichain, has_empty = _alternating_items(b, n, side, limits, trace, stats)
    return _closure_result(antichain, has_empty, stats)


def _parse_strategy(strategy: str) -> tuple[str, int | None]:
    if strategy == "ef":
        return "ef", None
    if strategy == "fe":
        return "fe", None
    if strategy.startswith("alt:"):
        depth = strategy[4:]
        if depth.isdigit() and int(depth) > 0:
            return "alt", int(depth)
    raise ValueError(f"unknown strategy {strategy!r} (expected ef, fe or alt:N)")


def _fresh_step_ids(count: int, taken: set[str]) -> list[str]:
    prefix = "r"
    while any(f"{prefix}{k + 1}" in taken for k in range(count)):
        prefix += "r"
    return [f"{prefix}{k + 1}" for k in range(count)]


def _extract_refutation(b: Bihypergraph, trace: _Trace, final_idx: int,
                        mode: str) -> Refutation:
    needed: set[int] = set()
    stack = [final_idx]
    while stack:
        j = stack.pop()
        if j in needed:
            continue
        needed.add(j)
        _, pivot_ref, pairing = trace.records[j]
        for ref in itertools.chain([pivot_ref], (r for _, r in pairing)):
            if ref[0] == "step":
                stack.append(ref[1])
    order = sorted(needed)
    taken = set(b.e_labels) | set(b.f_labels)
    ids = dict(zip(order, _fresh_step_ids(len(order), taken)))

    def ref_str(ref: tuple) -> str:
        kind, i = ref
        if kind == "E":
            return b.e_labels[i]
        if kind == "F":
            return b.f_labels[i]
        return ids[i]

    steps = []
    for j in order:
        mask, pivot_ref, pairing = trace.records[j]
        premises: list[str] = []
        position: dict[str, int] = {}
        pairs = []
        for v, ref in pairing:
            name = ref_str(ref)
            if name not in position:
                position[name] = len(premises)
                premises.append(name)
            pairs.append((v, position[name]))
        steps.append(ResolutionStep(ids[j], VertexSet(mask), tuple(premises),
                                    ref_str(pivot_ref), tuple(pairs)))
    return Refutation(mode, tuple(steps))


def decide_by_resolution(b: Bihypergraph, strategy: str = "ef",
                         limits: Limits | None = None) -> Certificate:
    """Decide property S by the chosen closure discipline.

    Strategies: 'ef' closes E over F, 'fe' closes F over E, 'alt:N' runs the
    depth-N alternating chain ending on the E side.  A fixed point without
    the empty set certifies HasS; otherwise the recorded parent links are
    unwound into a Refutation.  When the empty set is an input set, the
    verdict is FailsS with no derivation (there is nothing to derive).
    """
    limits = limits or DEFAULT_LIMITS
    kind, depth = _parse_strategy(strategy)
    trace, stats = _Trace(), _Stats()
    if kind == "ef":
        mode = MODE_E_OVER_F
        antichain, has_empty = _run_closure(_family_items(b, "E"),
                                            _family_items(b, "F"),
                                            limits, trace, stats)
    elif kind == "fe":
        mode = MODE_F_OVER_E
        antichain, has_empty = _run_closure(_family_items(b, "F"),
                                            _family_items(b, "E"),
                                            limits, trace, stats)
    else:
        mode = f"alternating {depth}"
        antichain, has_empty = _alternating_items(b, depth, "E", limits,
                                                  trace, stats)
    if not has_empty:
        return Certificate(Verdict.HAS_S, None, "resolution", stats.freeze())
    ref = antichain[-1][1]
    witness = None
    if ref[0] == "step":
        witness = _extract_refutation(b, trace, ref[1], mode)
    return Certificate(Verdict.FAILS_S, witness, "resolution", stats.freeze())


def _parse_mode(mode: str) -> tuple[str, int | None]:
    if mode == MODE_E_OVER_F:
        return "ef", None
    if mode == MODE_F_OVER_E:
        return "fe", None
    parts = mode.split()
    if len(parts) == 2 and parts[0] == "alternating" and parts[1].isdigit():
        return "alt", int(parts[1])
    raise ValueError(f"unknown proof mode {mode!r}")


_PAIRING_SEARCH_CAP = 1 << 16


def _find_pairing(conclusion: int, prem_masks: list[int], pivot_mask: int):
    """Is some assignment of premises to pivot elements a valid derivation
    of ``conclusion``?  Returns an error reason or None.

    Premise lists in transcribed proofs are unordered and may serve several
    pivot elements, so this searches over achievable unions (contributions
    outside the conclusion can never participate and are dropped first).
    """
    states = {0}
    for v in _bits(pivot_mask):
        bit = 1 << v
        options = {pm & ~bit for pm in prem_masks
                   if pm & bit and (pm & ~bit) & ~conclusion == 0}
        if not options:
            return f"no listed premise both contains pivot vertex {v} and stays inside the conclusion"
        states = {s | o for s in states for o in options}
        if len(states) > _PAIRING_SEARCH_CAP:
            return "pairing search exceeded its cap"
    if conclusion not in states:
        return "no pairing of premises to pivot elements yields the conclusion"
    return None


def _check_explicit_pairing(step: ResolutionStep, prem_masks: list[int],
                            pivot_mask: int):
    covered: set[int] = set()
    out = 0
    for v, idx in step.pairing:  # type: ignore[union-attr]
        if not (pivot_mask >> v) & 1:
            return f"pairing vertex {v} is not in the pivot"
        if v in covered:
            return f"pivot element {v} paired more than once"
        covered.add(v)
        if not 0 <= idx < len(prem_masks):
            return f"premise index {idx} out of range"
        if not (prem_masks[idx] >> v) & 1:
            return f"paired vertex {v} is absent from its premise"
        out |= prem_masks[idx] & ~(1 << v)
    if len(covered) != pivot_mask.bit_count():
        return "pivot element left unpaired"
    if out != step.conclusion.mask:
        return "conclusion differs from the resolvent of the pairing"
    return None


def check_refutation(b: Bihypergraph, refutation: Refutation) -> CheckResult:
    """Validate a refutation against an instance.

    Every step must be a correct resolution inference whose premises and
    pivot are drawn from what the declared mode permits, and the final
    conclusion must be the empty set.  Returns a falsy CheckResult naming
    the first failing step instead of raising.
    """
    try:
        kind, depth = _parse_mode(refutation.mode)
    except ValueError as exc:
        return CheckResult(False, None, str(exc))
    if not refutation.steps:
        return CheckResult(False, None, "proof has no steps")

    e_tbl = {lab: b.e_sets[i].mask for i, lab in enumerate(b.e_labels)}
    f_tbl = {lab: b.f_sets[i].mask for i, lab in enumerate(b.f_labels)}
    # info per reference: (mask, side, depth, is_input)
    step_infos: dict[str, tuple[int, str, int, bool]] = {}

    def resolve_ref(token: str):
        if token in step_infos:
            return step_infos[token]
        in_e, in_f = token in e_tbl, token in f_tbl
        if in_e and in_f:
            return f"ambiguous reference {token!r} (a label in both families)"
        if in_e:
            return (e_tbl[token], "E", 0, True)
        if in_f:
            return (f_tbl[token], "F", 0, True)
        return f"unknown reference {token!r}"

    last_info = None
    for step in refutation.steps:
        sid = step.step_id
        if sid in step_infos:
            return CheckResult(False, sid, "duplicate step id")
        if sid in e_tbl or sid in f_tbl:
            return CheckResult(False, sid, "step id shadows an instance label")
        if step.conclusion.mask >> b.vertex_count:
            return CheckResult(False, sid, "conclusion member out of range")

        prem_infos = []
        for token in step.premises:
            info = resolve_ref(token)
            if isinstance(info, str):
                return CheckResult(False, sid, info)
            prem_infos.append(info)
        pivot_info = resolve_ref(step.pivot)
        if isinstance(pivot_info, str):
            return CheckResult(False, sid, pivot_info)

        if kind == "ef" or kind == "fe":
            clause_side, pivot_side = ("E", "F") if kind == "ef" else ("F", "E")
            for token, info in zip(step.premises, prem_infos):
                if info[1] != clause_side:
                    return CheckResult(
                        False, sid,
                        f"premise {token!r} is not available in mode {refutation.mode}")
            if not (pivot_info[3] and pivot_info[1] == pivot_side):
                return CheckResult(
                    False, sid,
                    f"pivot {step.pivot!r} must be an input {pivot_side}-set in mode {refutation.mode}")
            side, step_depth = clause_side, 1
        else:
            sides = {info[1] for info in prem_infos}
            if len(sides) > 1:
                return CheckResult(False, sid, "premises mix both closure sides")
            pivot_side = pivot_info[1]
            side = sides.pop() if sides else ("E" if pivot_side == "F" else "F")
            if pivot_side == side:
                return CheckResult(
                    False, sid, "pivot must come from the opposite closure side")
            step_depth = max([info[2] for info in prem_infos] + [pivot_info[2] + 1])

        prem_masks = [info[0] for info in prem_infos]
        if step.pairing is not None:
            reason = _check_explicit_pairing(step, prem_masks, pivot_info[0])
        else:
            reason = _find_pairing(step.conclusion.mask, prem_masks, pivot_info[0])
        if reason is not None:
            return CheckResult(False, sid, reason)

        step_infos[sid] = (step.conclusion.mask, side, step_depth, False)
        last_info = (sid, step.conclusion.mask, step_depth)

    sid, mask, step_depth = last_info  # type: ignore[misc]
    if mask != 0:
        return CheckResult(False, sid, "final conclusion is not the empty set")
    if kind == "alt" and step_depth > depth:  # type: ignore[operator]
        return CheckResult(
            False, sid,
            f"final step needs alternation depth {step_depth}, mode allows {depth}")
    return CheckResult(True)
