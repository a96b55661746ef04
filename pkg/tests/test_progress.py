import random

import pytest

from halfpos.automata import Lasso, is_safe, residual, run_state, saturate
from halfpos.congruence import compute_prefix_order
from halfpos.errors import ContractError
from halfpos.languages import dba_included, lasso_accepted
from halfpos.progress import is_progress_consistent, shortest_word_to
from halfpos import fixtures

from helpers import random_dba, words_upto


def qualifying(dba):
    """Saturated, one state per class, total order; the check's hypotheses."""
    sat = saturate(dba)
    order = compute_prefix_order(sat)
    if order.class_order is None or any(len(m) != 1 for m in order.classes):
        return None
    return sat, order


class TestExamples:
    def test_reach_aa_fails(self, reach_aa):
        order = compute_prefix_order(reach_aa)
        consistent, witness = is_progress_consistent(reach_aa, order)
        assert not consistent
        assert reach_aa.names[witness.q] == "q_init"
        assert reach_aa.names[witness.q_prime] == "q_a"
        assert witness.w == ("b", "a")
        assert witness.w1 == ()

    def test_saturated_variant_passes(self, inf_a_or_reach_aa):
        order = compute_prefix_order(inf_a_or_reach_aa)
        consistent, witness = is_progress_consistent(inf_a_or_reach_aa, order)
        assert consistent and witness is None

    def test_prefix_independent_vacuous(self):
        d = fixtures.buchi_condition("ab", "a")
        consistent, _ = is_progress_consistent(d, compute_prefix_order(d))
        assert consistent

    def test_contract_checks(self, unsat_example, prefix_aa_or_bb):
        with pytest.raises(ContractError):
            is_progress_consistent(unsat_example, compute_prefix_order(unsat_example))
        sat = saturate(prefix_aa_or_bb)
        with pytest.raises(ContractError):
            is_progress_consistent(sat, compute_prefix_order(sat))


class TestWitnessSoundness:
    def test_witness_invariants_on_randoms(self):
        rng = random.Random(400)
        found = 0
        for _ in range(1500):
            got = qualifying(random_dba(rng, max_states=4, p_buchi=0.3))
            if got is None:
                continue
            sat, order = got
            consistent, witness = is_progress_consistent(sat, order)
            if consistent:
                continue
            found += 1
            q, q2, w, w1 = witness.q, witness.q_prime, witness.w, witness.w1
            assert run_state(sat, sat.init, w1) == q
            assert run_state(sat, q, w) == q2
            assert is_safe(sat, q2, w) and run_state(sat, q2, w) == q2
            strict = dba_included(residual(sat, q), residual(sat, q2))
            assert strict.holds
            assert not dba_included(residual(sat, q2), residual(sat, q)).holds
            assert not lasso_accepted(sat, Lasso(w1, w))
        assert found >= 5

    def test_matches_word_level_definition(self):
        # bounded word-level semantics: progress-consistency holds iff every
        # strictly improving bounded pump is accepted when repeated
        rng = random.Random(401)
        checked = 0
        for _ in range(300):
            got = qualifying(random_dba(rng, max_states=3))
            if got is None:
                continue
            sat, order = got
            checked += 1
            consistent, _ = is_progress_consistent(sat, order)
            violation = None
            for w1 in words_upto("ab", sat.n):
                q1 = run_state(sat, sat.init, w1)
                for w2 in words_upto("ab", 2 * sat.n, min_len=1):
                    q2 = run_state(sat, q1, w2)
                    if order.rel(q1, q2).value != "less":
                        continue
                    if not lasso_accepted(sat, Lasso(w1, w2)):
                        violation = (w1, w2)
                        break
                if violation:
                    break
            assert consistent == (violation is None), violation
        assert checked >= 30


class TestShortestWord:
    def test_init_is_empty(self, reach_aa):
        assert shortest_word_to(reach_aa, reach_aa.init) == ()

    def test_bfs_prefers_alphabet_order(self, reach_aa):
        assert shortest_word_to(reach_aa, reach_aa.state_of("q_a")) == ("a",)
        assert shortest_word_to(reach_aa, reach_aa.state_of("q_aa")) == ("a", "a")
