import itertools
import random

import pytest

from halfpos.automata import residual, run_state, saturate
from halfpos.congruence import (
    Rel,
    build_classifier,
    candidate_acceptance,
    compute_prefix_order,
    is_total,
    recognizable_by_classifier,
)
from halfpos.errors import ContractError
from halfpos.languages import dba_equivalent, dba_included, lasso_accepted
from halfpos import fixtures

from helpers import random_dba, words_upto


def chain_names(dba, order):
    return [dba.names[order.classes[cid][0]] for cid in order.class_order]


class TestPrefixOrder:
    def test_reach_aa_chain(self, reach_aa):
        order = compute_prefix_order(reach_aa)
        assert chain_names(reach_aa, order) == ["q_init", "q_a", "q_aa"]

    def test_incomparable_pair(self, prefix_aa_or_bb):
        order = compute_prefix_order(prefix_aa_or_bb)
        d = prefix_aa_or_bb
        assert order.rel(d.state_of("q_a"), d.state_of("q_b")) is Rel.INCOMPARABLE
        assert order.class_order is None

    def test_one_state(self):
        order = compute_prefix_order(fixtures.buchi_condition("ab", "a"))
        assert order.matrix == ((Rel.EQUIVALENT,),)

    def test_matrix_matches_pairwise_inclusion(self):
        rng = random.Random(300)
        for _ in range(25):
            d = saturate(random_dba(rng, max_states=4))
            order = compute_prefix_order(d)
            for q in range(d.n):
                for p in range(d.n):
                    fwd = dba_included(residual(d, q), residual(d, p)).holds
                    bwd = dba_included(residual(d, p), residual(d, q)).holds
                    want = (
                        Rel.EQUIVALENT if fwd and bwd
                        else Rel.LESS if fwd
                        else Rel.GREATER if bwd
                        else Rel.INCOMPARABLE
                    )
                    assert order.rel(q, p) is want

    def test_run_monotone_for_order(self):
        # reading any word preserves the state order
        rng = random.Random(301)
        for _ in range(25):
            d = random_dba(rng, max_states=4)
            order = compute_prefix_order(d)
            below = {Rel.LESS, Rel.EQUIVALENT}
            for q1, q2 in itertools.product(range(d.n), repeat=2):
                if order.rel(q1, q2) not in below:
                    continue
                for w in words_upto("ab", 4):
                    assert order.rel(run_state(d, q1, w), run_state(d, q2, w)) in below


class TestFastFail:
    def test_agrees_with_full_pipeline(self):
        from halfpos.congruence import has_total_prefix_order

        rng = random.Random(304)
        for _ in range(40):
            d = random_dba(rng, max_states=4)
            order = compute_prefix_order(d)
            assert has_total_prefix_order(d) == (order.class_order is not None)


class TestIsTotal:
    def test_negative_with_replayable_lassos(self, prefix_aa_or_bb):
        d = prefix_aa_or_bb
        out = is_total(compute_prefix_order(d))
        assert not out.total
        q, q2 = out.pair
        assert (d.names[q], d.names[q2]) == ("q_a", "q_b")
        assert lasso_accepted(d, out.lasso_first, q)
        assert not lasso_accepted(d, out.lasso_first, q2)
        assert lasso_accepted(d, out.lasso_second, q2)
        assert not lasso_accepted(d, out.lasso_second, q)

    def test_positive(self, inf_a_or_reach_aa):
        out = is_total(compute_prefix_order(inf_a_or_reach_aa))
        assert out.total and out.pair is None

    def test_one_state_total(self):
        assert is_total(compute_prefix_order(fixtures.buchi_condition("ab", "a"))).total


class TestClassifier:
    def test_prefix_independent_collapses(self, inf_a_and_inf_b):
        order = compute_prefix_order(inf_a_and_inf_b)
        classifier = build_classifier(inf_a_and_inf_b, order)
        assert classifier.structure.n == 1

    def test_distinct_residuals_keep_structure(self, inf_a_or_reach_aa):
        order = compute_prefix_order(inf_a_or_reach_aa)
        classifier = build_classifier(inf_a_or_reach_aa, order)
        assert classifier.structure.n == inf_a_or_reach_aa.n
        assert classifier.structure.delta == inf_a_or_reach_aa.delta

    def test_members_share_language(self):
        rng = random.Random(302)
        for _ in range(20):
            d = saturate(random_dba(rng, max_states=4))
            order = compute_prefix_order(d)
            for members in order.classes:
                for q1, q2 in itertools.combinations(members, 2):
                    assert dba_equivalent(residual(d, q1), residual(d, q2)).equal


class TestCandidateAcceptance:
    def test_intersection_example_empty(self, inf_a_and_inf_b):
        d = inf_a_and_inf_b  # already saturated
        order = compute_prefix_order(d)
        classifier = build_classifier(d, order)
        assert candidate_acceptance(d, classifier) == frozenset()

    def test_singleton_classes_keep_acceptance(self, inf_a_or_reach_aa):
        d = inf_a_or_reach_aa
        order = compute_prefix_order(d)
        classifier = build_classifier(d, order)
        got = candidate_acceptance(d, classifier)
        want = {(classifier.class_of[q], ci) for (q, ci) in d.buchi}
        assert got == frozenset(want)

    def test_requires_saturation(self, unsat_example):
        order = compute_prefix_order(unsat_example)
        classifier = build_classifier(unsat_example, order)
        with pytest.raises(ContractError):
            candidate_acceptance(unsat_example, classifier)


class TestRecognizability:
    def test_intersection_example_not_recognizable(self, inf_a_and_inf_b):
        out = recognizable_by_classifier(inf_a_and_inf_b)
        assert not out.recognizable
        assert lasso_accepted(inf_a_and_inf_b, out.equivalence.witness)

    def test_positive_example(self, inf_a_or_reach_aa):
        out = recognizable_by_classifier(inf_a_or_reach_aa)
        assert out.recognizable
        assert out.classifier_dba.n == 3
        assert dba_equivalent(out.classifier_dba, inf_a_or_reach_aa).equal

    def test_one_state_trivial(self):
        assert recognizable_by_classifier(fixtures.buchi_condition("ab", "a")).recognizable

    def test_candidate_is_complete_choice(self):
        # whenever any accepting set on the quotient structure recognizes the
        # language, the canonical candidate does too
        rng = random.Random(303)
        checked = 0
        for _ in range(300):
            d = saturate(random_dba(rng, max_states=3))
            out = recognizable_by_classifier(d)
            structure = out.classifier.structure
            slots = [(q, ci) for q in range(structure.n) for ci in range(2)]
            if len(slots) > 6:
                continue
            checked += 1
            any_works = False
            for r in range(len(slots) + 1):
                for combo in itertools.combinations(slots, r):
                    if dba_equivalent(d, structure.with_buchi(combo)).equal:
                        any_works = True
                        break
                if any_works:
                    break
            assert out.recognizable == any_works
        assert checked >= 40
