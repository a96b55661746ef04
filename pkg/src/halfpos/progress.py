"""Progress-consistency: whenever a finite word strictly improves the set of
winning continuations, repeating that word forever must win.

For a saturated automaton built on top of its prefix-classifier with a total
prefix preorder, this reduces to checking, for every strictly increasing state
pair, that no word simultaneously moves the smaller state to the larger one
and labels a safe cycle on the larger one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automata import Dba, Word, is_saturated
from .congruence import PrefixOrder
from .errors import ContractError
from .languages import reach_language_meets_safe_cycles


@dataclass(frozen=True)
class ProgressWitness:
    """Certificate that progress-consistency fails.

    `w` moves `q` to `q_prime` (a strictly larger state) and is a safe cycle
    on `q_prime`; `w1` takes the initial state to `q`.  Consequently w1
    strictly improves to w1.w while w1.w^omega is rejected.
    """

    q: int
    q_prime: int
    w: Word
    w1: Word


def is_progress_consistent(
    dba: Dba, order: PrefixOrder
) -> tuple[bool, ProgressWitness | None]:
    """Scan strictly increasing state pairs in ascending order; the first
    reach-meets-safe-cycles hit is returned as the witness."""
    if order.dba is not dba and not order.dba.same_structure(dba):
        raise ContractError("order was computed for a different automaton")
    if not is_saturated(dba):
        raise ContractError("progress check requires a saturated automaton")
    if any(len(members) != 1 for members in order.classes):
        raise ContractError(
            "progress check requires an automaton built on top of its prefix-classifier"
        )
    if order.class_order is None:
        raise ContractError("progress check requires a total prefix preorder")

    ranked = [order.classes[cid][0] for cid in order.class_order]
    for i, q in enumerate(ranked):
        for q_prime in ranked[i + 1:]:
            w = reach_language_meets_safe_cycles(dba, q, q_prime)
            if w is not None:
                return False, ProgressWitness(q, q_prime, w, shortest_word_to(dba, q))
    return True, None


def shortest_word_to(dba: Dba, q: int) -> Word:
    """Lexicographically-least shortest word from the initial state to `q`."""
    if q == dba.init:
        return ()
    k = len(dba.alphabet)
    parent: dict[int, tuple[int, int]] = {dba.init: (-1, -1)}
    queue = [dba.init]
    while queue:
        nxt = []
        for x in queue:
            for ci in range(k):
                y = dba.delta[x][ci]
                if y in parent:
                    continue
                parent[y] = (x, ci)
                if y == q:
                    word: list[str] = []
                    cur = y
                    while parent[cur][0] != -1:
                        px, pci = parent[cur]
                        word.append(dba.alphabet.symbols[pci])
                        cur = px
                    return tuple(reversed(word))
                nxt.append(y)
        queue = nxt
    raise ContractError(f"state {dba.names[q]} unreachable from the initial state")
