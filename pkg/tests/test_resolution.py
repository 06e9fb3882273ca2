import random

import pytest

from psolve import (Limits, Refutation, ResolutionStep, ResourceLimitError,
                    Verdict, VertexSet, all_resolvents, alternating_closure,
                    build, check_refutation, closure, decide_by_resolution,
                    resolve)
from psolve.cli import bind_proof, parse_proof_text

from helpers import (all_s_partitions, grid_lists_instance,
                     naive_closure_contains_empty, rand_instance,
                     six_clause_instance)


def _named(b, *names):
    return b.set_of_names(names)


class TestResolve:
    def test_two_clause_step(self):
        b = six_clause_instance()
        out = resolve([_named(b, "p", "-q", "r"), _named(b, "p", "-q", "-r")],
                      _named(b, "r", "-r"),
                      [(b.id_of("r"), 0), (b.id_of("-r"), 1)])
        assert out == _named(b, "p", "-q")

    def test_pair_sides_step(self):
        b = six_clause_instance()
        out = resolve([_named(b, "p", "-p"), _named(b, "q", "-q")],
                      _named(b, "-p", "-q"),
                      [(b.id_of("-p"), 0), (b.id_of("-q"), 1)])
        assert out == _named(b, "p", "q")

    def test_unit_annihilation(self):
        out = resolve([VertexSet.of([3])], VertexSet.of([3]), [(3, 0)])
        assert out == VertexSet()

    def test_repeated_premise_allowed(self):
        c = VertexSet.of([0, 1, 2])
        out = resolve([c, c], VertexSet.of([0, 1]), [(0, 0), (1, 1)])
        assert out == VertexSet.of([1, 2]).union(VertexSet.of([0, 2]))

    def test_pairing_vertex_not_in_pivot(self):
        with pytest.raises(ValueError, match="not in the pivot"):
            resolve([VertexSet.of([0])], VertexSet.of([1]), [(0, 0)])

    def test_paired_vertex_absent_from_premise(self):
        with pytest.raises(ValueError, match="absent"):
            resolve([VertexSet.of([1])], VertexSet.of([0]), [(0, 0)])

    def test_pivot_element_unpaired(self):
        with pytest.raises(ValueError, match="unpaired"):
            resolve([VertexSet.of([0, 1])], VertexSet.of([0, 1]), [(0, 0)])

    def test_double_pairing_rejected(self):
        with pytest.raises(ValueError, match="more than once"):
            resolve([VertexSet.of([0]), VertexSet.of([0])],
                    VertexSet.of([0]), [(0, 0), (0, 1)])


class TestAllResolvents:
    def test_unmatched_pivot_element(self):
        b = six_clause_instance()
        assert all_resolvents([_named(b, "p", "q")], _named(b, "p", "-p")) == ()

    def test_six_clause_pivot(self):
        b = six_clause_instance()
        out = all_resolvents(b.e_sets, _named(b, "r", "-r"))
        # the four pairings produce {p,-q}, {-p,q} and two dominated
        # four-member unions, so the reduced answer is exactly these two
        assert set(out) == {_named(b, "p", "-q"), _named(b, "-p", "q")}

    def test_empty_pivot_yields_empty_resolvent(self):
        assert all_resolvents([], VertexSet()) == (VertexSet(),)
        assert all_resolvents([VertexSet.of([1])], VertexSet()) == (VertexSet(),)

    def test_matches_unreduced_enumeration(self):
        from helpers import unreduced_resolvents
        rng = random.Random(5)
        for _ in range(200):
            b = rand_instance(rng, max_vertices=6, max_sets=5, max_size=3)
            working = list(dict.fromkeys(b.e_sets))
            # keep only subset-minimal sets so the antichain precondition holds
            working = [s for s in working
                       if not any(o != s and o.issubset(s) for o in working)]
            for pivot in b.f_sets:
                got = set(all_resolvents(working, pivot))
                full = unreduced_resolvents({s.mask for s in working}, pivot.mask)
                minimal = {m for m in full
                           if not any(o != m and o & m == o for o in full)}
                assert {v.mask for v in got} == minimal


class TestClosure:
    def test_no_pivots_reduces_family(self):
        e = [VertexSet.of([0, 1]), VertexSet.of([0]), VertexSet.of([0, 1, 2])]
        result = closure(e, [])
        assert set(result.sets) == {VertexSet.of([0])}
        assert not result.contains_empty

    def test_no_pivots_empty_member(self):
        result = closure([VertexSet()], [])
        assert result.contains_empty and result.sets == (VertexSet(),)

    def test_six_clause_both_directions(self):
        b = six_clause_instance()
        assert closure(b.e_sets, b.f_sets).contains_empty
        assert closure(b.f_sets, b.e_sets).contains_empty

    def test_antichain_invariant(self):
        rng = random.Random(23)
        for _ in range(100):
            b = rand_instance(rng, max_vertices=7, max_sets=5, max_size=3)
            result = closure(b.e_sets, b.f_sets)
            if result.contains_empty:
                assert result.sets == (VertexSet(),)
            for s in result.sets:
                assert not any(o != s and o.issubset(s) for o in result.sets)

    def test_empty_pivot_in_family_forces_failure(self):
        # no set can meet the empty set, so resolving on it yields {} at once
        result = closure([VertexSet.of([0])], [VertexSet()])
        assert result.contains_empty

    def test_subsumption_never_changes_empty_membership(self):
        rng = random.Random(29)
        for _ in range(400):
            b = rand_instance(rng, max_vertices=7, max_sets=6, max_size=3)
            reduced = closure(b.e_sets, b.f_sets).contains_empty
            naive = naive_closure_contains_empty(b.e_sets, b.f_sets)
            assert reduced == naive

    def test_reduced_closure_is_minimal_antichain_of_full_closure(self):
        from helpers import unreduced_resolvents

        def full_closure(e_sets, f_sets):
            derived = {s.mask for s in e_sets}
            pivots = [s.mask for s in f_sets]
            changed = True
            while changed:
                changed = False
                for d in pivots:
                    new = unreduced_resolvents(derived, d) - derived
                    if new:
                        derived |= new
                        changed = True
            return derived

        rng = random.Random(4242)
        for _ in range(200):
            b = rand_instance(rng, max_vertices=6, max_sets=4, max_size=3)
            full = full_closure(b.e_sets, b.f_sets)
            got = {vs.mask for vs in closure(b.e_sets, b.f_sets).sets}
            if 0 in full:
                assert got == {0}
            else:
                assert got == {m for m in full
                               if not any(o != m and o & m == o for o in full)}


class TestAlternatingClosure:
    def test_depth_zero_is_reduced_base(self):
        b = six_clause_instance()
        result = alternating_closure(b, 0, "E")
        assert set(result.sets) == set(b.e_sets)
        assert not result.contains_empty

    def test_six_clause_depth_two_from_pairs(self):
        assert alternating_closure(six_clause_instance(), 2, "F").contains_empty

    def test_six_clause_depth_one_both_sides(self):
        b = six_clause_instance()
        assert alternating_closure(b, 1, "E").contains_empty
        assert alternating_closure(b, 1, "F").contains_empty

    def test_symmetric_refutability(self):
        rng = random.Random(31)
        for _ in range(150):
            b = rand_instance(rng, max_vertices=7, max_sets=5, max_size=3)
            answers = {alternating_closure(b, n, side).contains_empty
                       for n in (1, 2) for side in ("E", "F")}
            assert len(answers) == 1

    def test_bad_arguments(self):
        b = six_clause_instance()
        with pytest.raises(ValueError):
            alternating_closure(b, 1, "X")
        with pytest.raises(ValueError):
            alternating_closure(b, -1, "E")


class TestDecideByResolution:
    def test_empty_e_family_has_s(self):
        b = build(["a", "b"], [], [["a"], ["a", "b"]])
        cert = decide_by_resolution(b)
        assert cert.verdict is Verdict.HAS_S and cert.witness is None

    def test_six_clause_refutation(self):
        b = six_clause_instance()
        cert = decide_by_resolution(b, "ef")
        assert cert.verdict is Verdict.FAILS_S
        refutation = cert.witness
        assert isinstance(refutation, Refutation)
        assert refutation.mode == "E-over-F"
        assert refutation.steps[-1].conclusion == VertexSet()
        assert check_refutation(b, refutation)

    def test_grid_lists_refutation(self):
        b = grid_lists_instance()
        cert = decide_by_resolution(b, "ef")
        assert cert.verdict is Verdict.FAILS_S
        assert check_refutation(b, cert.witness)

    def test_all_strategies_agree_and_validate(self):
        rng = random.Random(37)
        for _ in range(200):
            b = rand_instance(rng, max_vertices=7, max_sets=5, max_size=3)
            expected = bool(all_s_partitions(b))
            for strategy in ("ef", "fe", "alt:1", "alt:2", "alt:3"):
                cert = decide_by_resolution(b, strategy)
                assert (cert.verdict is Verdict.HAS_S) == expected
                if cert.verdict is Verdict.FAILS_S:
                    assert check_refutation(b, cert.witness), strategy

    def test_empty_input_set_yields_no_derivation(self):
        b = build(["a"], [[]], [["a"]])
        cert = decide_by_resolution(b, "ef")
        assert cert.verdict is Verdict.FAILS_S
        assert cert.witness is None

    def test_deterministic(self):
        b = six_clause_instance()
        first = decide_by_resolution(b, "ef")
        second = decide_by_resolution(b, "ef")
        assert first.witness == second.witness
        assert first.stats == second.stats

    def test_step_ids_avoid_instance_labels(self):
        # labels that look like generated step ids push the generator to a
        # fresh prefix, and the proof still validates
        b = build(["p", "-p"], [["p"], ["-p"]], [["p", "-p"]],
                  e_labels=["r1", "r2"], f_labels=["A"])
        cert = decide_by_resolution(b, "ef")
        assert cert.verdict is Verdict.FAILS_S
        taken = set(b.e_labels) | set(b.f_labels)
        for step in cert.witness.steps:
            assert step.step_id not in taken
        assert check_refutation(b, cert.witness)

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            decide_by_resolution(six_clause_instance(), "sideways")
        with pytest.raises(ValueError):
            decide_by_resolution(six_clause_instance(), "alt:0")

    def test_closure_preserves_witnesses(self):
        # every S-partition's X keeps meeting everything derived from E
        rng = random.Random(41)
        checked = 0
        for _ in range(150):
            b = rand_instance(rng, max_vertices=6, max_sets=4, max_size=3)
            witnesses = all_s_partitions(b)
            if not witnesses:
                continue
            result = closure(b.e_sets, b.f_sets)
            for x in witnesses:
                for s in result.sets:
                    assert x & set(s.members)
                    checked += 1
        assert checked > 100


class TestLimits:
    def test_kept_set_limit(self):
        b = six_clause_instance()
        with pytest.raises(ResourceLimitError):
            decide_by_resolution(b, "ef", Limits(max_sets=3))

    def test_round_limit(self):
        b = six_clause_instance()
        with pytest.raises(ResourceLimitError):
            decide_by_resolution(b, "ef", Limits(max_rounds=0))

    def test_generous_limits_succeed(self):
        cert = decide_by_resolution(six_clause_instance(), "ef",
                                    Limits(max_sets=1000, max_rounds=100))
        assert cert.verdict is Verdict.FAILS_S


class TestCheckRefutation:
    def _load(self, fixtures_dir, b, name):
        text = (fixtures_dir / name).read_text()
        mode, steps = parse_proof_text(text, name)
        return bind_proof(b, mode, steps)

    def test_fixture_proofs_validate(self, fixtures_dir):
        b = six_clause_instance()
        for name in ("unsat3_ef.prf", "unsat3_fe.prf", "unsat3_alt.prf"):
            assert check_refutation(b, self._load(fixtures_dir, b, name)), name
        grid = grid_lists_instance()
        assert check_refutation(grid, self._load(fixtures_dir, grid,
                                                 "grid_lists_ef.prf"))

    def test_perturbed_pivot_fails_at_step(self, fixtures_dir):
        b = six_clause_instance()
        text = (fixtures_dir / "unsat3_ef.prf").read_text()
        mode, steps = parse_proof_text(text.replace("9: -q <- 6,7 / A",
                                                    "9: -q <- 6,7 / B"))
        outcome = check_refutation(b, bind_proof(b, mode, steps))
        assert not outcome and outcome.step_id == "9"

    def test_empty_step_list_is_invalid(self):
        b = six_clause_instance()
        outcome = check_refutation(b, Refutation("E-over-F", ()))
        assert not outcome and "no steps" in outcome.reason

    def test_final_conclusion_must_be_empty(self):
        b = six_clause_instance()
        step = ResolutionStep("7", _named(b, "p", "-q"), ("2", "3"), "C")
        outcome = check_refutation(b, Refutation("E-over-F", (step,)))
        assert not outcome and "empty set" in outcome.reason

    def test_unknown_and_forward_references(self):
        b = six_clause_instance()
        step = ResolutionStep("7", VertexSet(), ("99",), "A")
        outcome = check_refutation(b, Refutation("E-over-F", (step,)))
        assert not outcome and "unknown reference" in outcome.reason

    def test_mode_restricts_premises(self):
        b = six_clause_instance()
        # A is an F-label: not usable as a premise when closing E over F
        step = ResolutionStep("7", _named(b, "-p", "q"), ("A", "1"), "B")
        outcome = check_refutation(b, Refutation("E-over-F", (step,)))
        assert not outcome and "not available" in outcome.reason

    def test_mode_restricts_pivot(self):
        b = six_clause_instance()
        step = ResolutionStep("7", _named(b, "q", "-q"), ("1", "6"), "A")
        outcome = check_refutation(b, Refutation("F-over-E", (step,)))
        assert not outcome and "premise" in outcome.reason

    def test_alternating_depth_cap(self, fixtures_dir):
        b = six_clause_instance()
        text = (fixtures_dir / "unsat3_alt.prf").read_text()
        mode, steps = parse_proof_text(text.replace("alternating 2",
                                                    "alternating 1"))
        outcome = check_refutation(b, bind_proof(b, mode, steps))
        assert not outcome and outcome.step_id == "N"

    def test_duplicate_step_id(self):
        b = six_clause_instance()
        steps = (ResolutionStep("7", _named(b, "p", "-q"), ("2", "3"), "C"),
                 ResolutionStep("7", _named(b, "-p", "q"), ("4", "5"), "C"))
        outcome = check_refutation(b, Refutation("E-over-F", steps))
        assert not outcome and "duplicate" in outcome.reason

    def test_step_id_shadowing_label(self):
        b = six_clause_instance()
        step = ResolutionStep("6", _named(b, "p", "-q"), ("2", "3"), "C")
        outcome = check_refutation(b, Refutation("E-over-F", (step,)))
        assert not outcome and "shadows" in outcome.reason

    def test_bad_mode_string(self):
        b = six_clause_instance()
        step = ResolutionStep("7", VertexSet(), (), "A")
        outcome = check_refutation(b, Refutation("widdershins", (step,)))
        assert not outcome and "mode" in outcome.reason

    def test_label_shared_by_both_families_is_ambiguous(self):
        b = build(["a", "b"], [["a", "b"]], [["a"]],
                  e_labels=["X"], f_labels=["X"])
        step = ResolutionStep("s1", b.set_of_names(["b"]), ("X",), "X")
        outcome = check_refutation(b, Refutation("E-over-F", (step,)))
        assert not outcome and "ambiguous" in outcome.reason

    def test_tampered_explicit_pairing(self):
        b = six_clause_instance()
        good = decide_by_resolution(b, "ef").witness
        last = good.steps[-1]
        bad_pairing = tuple((v, (idx + 1) % len(last.premises))
                            for v, idx in last.pairing)
        tampered = Refutation(good.mode, good.steps[:-1] + (
            ResolutionStep(last.step_id, last.conclusion, last.premises,
                           last.pivot, bad_pairing),))
        assert not check_refutation(b, tampered)

    def test_wrong_conclusion_rejected(self, fixtures_dir):
        b = six_clause_instance()
        text = (fixtures_dir / "unsat3_ef.prf").read_text()
        mode, steps = parse_proof_text(text.replace("7: p -q <-", "7: p <-"))
        outcome = check_refutation(b, bind_proof(b, mode, steps))
        assert not outcome and outcome.step_id == "7"


def test_stats_track_work():
    b = six_clause_instance()
    result = closure(b.e_sets, b.f_sets)
    stats = result.stats
    assert stats.generated > 0 and stats.kept > 0 and stats.rounds >= 1
    idle = closure(b.e_sets, [])
    assert idle.stats.generated == 0 and idle.stats.rounds == 0
