import random

import pytest

from halfpos.automata import (
    Alphabet,
    Lasso,
    alpha_free_components,
    extend_to_safe_cycle,
    format_dba,
    is_safe,
    is_saturated,
    parse_dba,
    residual,
    run_state,
    saturate,
)
from halfpos.errors import ContractError, InputError
from halfpos.languages import dba_equivalent, lasso_accepted
from halfpos import fixtures

from helpers import lassos_upto, random_dba, words_upto


def name_at(dba, q):
    return dba.names[q]


class TestRunState:
    def test_trace_ba(self, reach_aa):
        q = run_state(reach_aa, reach_aa.init, reach_aa.word("ba"))
        assert name_at(reach_aa, q) == "q_a"

    def test_empty_word_is_identity(self, reach_aa):
        for q in range(reach_aa.n):
            assert run_state(reach_aa, q, ()) == q

    def test_trace_aa(self, reach_aa):
        q = run_state(reach_aa, reach_aa.init, reach_aa.word("aa"))
        assert name_at(reach_aa, q) == "q_aa"

    def test_unknown_symbol(self, reach_aa):
        with pytest.raises(InputError):
            run_state(reach_aa, reach_aa.init, ("c",))


class TestIsSafe:
    def test_bab_safe_from_init(self, reach_aa):
        assert is_safe(reach_aa, reach_aa.init, reach_aa.word("bab"))

    def test_empty_always_safe(self, reach_aa):
        for q in range(reach_aa.n):
            assert is_safe(reach_aa, q, ())

    def test_marked_transition_unsafe(self, reach_aa):
        assert not is_safe(reach_aa, reach_aa.state_of("q_a"), reach_aa.word("a"))


class TestComponents:
    def test_unsaturated_example(self, unsat_example):
        comps = alpha_free_components(unsat_example)
        by_names = {
            frozenset(unsat_example.names[q] for q in members): {
                (unsat_example.names[q], unsat_example.alphabet.symbols[ci])
                for q, ci in edges
            }
            for members, edges in comps
        }
        assert by_names == {
            frozenset({"q_init"}): {("q_init", "b")},
            frozenset({"q_a"}): set(),
            frozenset({"q_aa"}): set(),
        }

    def test_all_accepting_gives_singletons(self):
        d = fixtures.buchi_condition("ab", "ab")
        comps = alpha_free_components(d)
        assert all(len(members) == 1 and not edges for members, edges in comps)

    def test_reach_aa_components(self, reach_aa):
        comps = alpha_free_components(reach_aa)
        by_names = {
            frozenset(reach_aa.names[q] for q in members): {
                (reach_aa.names[q], reach_aa.alphabet.symbols[ci]) for q, ci in edges
            }
            for members, edges in comps
        }
        assert by_names == {
            frozenset({"q_init", "q_a"}): {("q_init", "a"), ("q_init", "b"), ("q_a", "b")},
            frozenset({"q_aa"}): set(),
        }

    def test_topological_order(self, reach_aa):
        comps = alpha_free_components(reach_aa)
        position = {}
        for i, (members, _) in enumerate(comps):
            for q in members:
                position[q] = i
        for q, ci, t in reach_aa.transitions():
            if (q, ci) not in reach_aa.buchi:
                assert position[q] <= position[t]


class TestSaturate:
    def test_unsaturated_example_gains_all_but_one(self, unsat_example, inf_a_or_reach_aa):
        sat = saturate(unsat_example)
        assert sat.same_structure(inf_a_or_reach_aa)
        b_ci = sat.alphabet.index_of("b")
        assert (sat.state_of("q_init"), b_ci) not in sat.buchi
        assert len(sat.buchi) == sat.n * 2 - 1

    def test_already_saturated_unchanged(self, reach_aa):
        assert saturate(reach_aa).same_structure(reach_aa)

    def test_one_state_unchanged(self):
        d = fixtures.buchi_condition("ab", "a")
        assert saturate(d).same_structure(d)

    def test_idempotent(self, unsat_example):
        sat = saturate(unsat_example)
        assert saturate(sat).same_structure(sat)

    def test_language_preserved_on_randoms(self):
        rng = random.Random(101)
        for _ in range(25):
            d = random_dba(rng, max_states=5, symbols="abc")
            sat = saturate(d)
            assert sat.buchi >= d.buchi
            for lasso in lassos_upto("abc", 4, 4):
                assert lasso_accepted(d, lasso) == lasso_accepted(sat, lasso)

    def test_maximality_on_randoms(self):
        # marking any further transition accepting changes some small lasso
        rng = random.Random(102)
        for _ in range(15):
            sat = saturate(random_dba(rng, max_states=4, symbols="ab"))
            full = {(q, ci) for q in range(sat.n) for ci in range(2)}
            for extra in sorted(full - sat.buchi):
                flipped = sat.with_buchi(sat.buchi | {extra})
                assert any(
                    lasso_accepted(sat, l) != lasso_accepted(flipped, l)
                    for l in lassos_upto("ab", sat.n, sat.n)
                ), f"flipping {extra} left the language unchanged"

    def test_safe_congruence_on_randoms(self):
        # states with equal safe languages keep them equal along safe words
        rng = random.Random(103)
        for _ in range(30):
            d = random_dba(rng, max_states=4, symbols="ab")
            for q1 in range(d.n):
                for q2 in range(d.n):
                    if not _safe_languages_equal(d, q1, q2):
                        continue
                    for w in words_upto("ab", 4):
                        if not is_safe(d, q1, w):
                            continue
                        assert _safe_languages_equal(
                            d, run_state(d, q1, w), run_state(d, q2, w)
                        )


def _safe_languages_equal(dba, q1, q2) -> bool:
    """DFA equivalence of the safe-word languages, by product search with a
    shared dead state."""
    seen = {(q1, q2)}
    stack = [(q1, q2)]
    while stack:
        x, y = stack.pop()
        for ci in range(len(dba.alphabet)):
            dead_x = x is None or (x, ci) in dba.buchi
            dead_y = y is None or (y, ci) in dba.buchi
            if dead_x != dead_y:
                return False
            if dead_x:
                continue
            child = (dba.delta[x][ci], dba.delta[y][ci])
            if child not in seen:
                seen.add(child)
                stack.append(child)
    return True


class TestExtendToSafeCycle:
    def test_self_loop_needs_nothing(self, reach_aa):
        assert extend_to_safe_cycle(reach_aa, reach_aa.init, reach_aa.word("b")) == ()

    def test_shortest_return(self, reach_aa):
        assert extend_to_safe_cycle(reach_aa, reach_aa.init, reach_aa.word("a")) == ("b",)

    def test_cycle_already_closed(self, reach_aa):
        q_a = reach_aa.state_of("q_a")
        assert extend_to_safe_cycle(reach_aa, q_a, reach_aa.word("ba")) == ()

    def test_requires_saturated(self, unsat_example):
        with pytest.raises(ContractError):
            extend_to_safe_cycle(unsat_example, unsat_example.init, ())

    def test_requires_safe_word(self, reach_aa):
        with pytest.raises(ContractError):
            extend_to_safe_cycle(reach_aa, reach_aa.state_of("q_a"), reach_aa.word("a"))

    def test_replay_on_randoms(self):
        rng = random.Random(104)
        for _ in range(40):
            d = saturate(random_dba(rng, max_states=4, symbols="ab"))
            for q in range(d.n):
                for w in words_upto("ab", 3):
                    if not is_safe(d, q, w):
                        continue
                    completion = extend_to_safe_cycle(d, q, w)
                    assert is_safe(d, q, w + completion)
                    assert run_state(d, q, w + completion) == q


class TestResidual:
    def test_absorbing_state_accepts_everything(self, inf_a_or_reach_aa):
        top = residual(inf_a_or_reach_aa, inf_a_or_reach_aa.state_of("q_aa"))
        assert dba_equivalent(top, fixtures.buchi_condition("ab", "ab")).equal

    def test_reroot_at_init_is_identity(self, inf_a_or_reach_aa):
        again = residual(inf_a_or_reach_aa, inf_a_or_reach_aa.init)
        assert again.same_structure(inf_a_or_reach_aa)

    def test_middle_state_memberships(self, inf_a_or_reach_aa):
        # the middle state accepts a.anything plus the original language
        q_a = inf_a_or_reach_aa.state_of("q_a")
        alph = inf_a_or_reach_aa.alphabet
        assert lasso_accepted(inf_a_or_reach_aa, Lasso(alph.word("a"), alph.word("b")), q_a)
        assert lasso_accepted(inf_a_or_reach_aa, Lasso((), alph.word("ba")), q_a)
        assert not lasso_accepted(inf_a_or_reach_aa, Lasso((), alph.word("b")), q_a)


class TestLasso:
    def test_normalize_folds_prefix(self):
        assert Lasso(("a", "b"), ("b", "b")).normalize() == Lasso(("a",), ("b",))

    def test_normalize_primitive_root(self):
        assert Lasso((), ("a", "b", "a", "b")).normalize() == Lasso((), ("a", "b"))

    def test_empty_cycle_rejected(self):
        with pytest.raises(InputError):
            Lasso((), ())

    def test_render_parse_roundtrip(self):
        alph = Alphabet("ab")
        lasso = Lasso(("a",), ("b", "a"))
        assert Lasso.parse(alph, lasso.render(alph)) == lasso


class TestTextFormat:
    def test_roundtrip_fixtures(self):
        for build in fixtures.AUTOMATA.values():
            d = build()
            again = parse_dba(format_dba(d))
            assert again.same_structure(d)
            assert again.names == d.names

    def test_parse_errors(self):
        with pytest.raises(InputError):
            parse_dba("states: 1\ninit: 0\n0 a 0\n")  # missing alphabet
        with pytest.raises(InputError):
            parse_dba("alphabet: a\nstates: 1\ninit: 0\n")  # missing transition
        with pytest.raises(InputError):
            parse_dba("alphabet: a\nstates: 1\ninit: 0\n0 b 0\n")  # unknown color
        with pytest.raises(InputError):
            parse_dba("alphabet: a\nstates: 1\ninit: 2\n0 a 0\n")  # bad init

    def test_comments_and_marks(self):
        d = parse_dba("# demo\nalphabet: a b\nstates: 1\ninit: 0\n0 a 0 *\n0 b 0\n")
        assert (0, 0) in d.buchi and (0, 1) not in d.buchi

    def test_unreachable_states_pruned(self):
        d = parse_dba(
            "alphabet: a\nstates: 3\ninit: 0\n0 a 1\n1 a 0\n2 a 0\n"
        )
        assert d.n == 2


class TestSaturationFlag:
    def test_is_saturated(self, unsat_example, reach_aa):
        assert not is_saturated(unsat_example)
        assert is_saturated(reach_aa)
