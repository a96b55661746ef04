"""Top-level half-positionality decision and counterexample-arena emission.

The decision runs three checks in a fixed order: totality of the prefix
preorder, recognizability on the prefix-classifier (on success the automaton
is replaced by the quotient), then progress-consistency on the normalized
automaton.  Negative verdicts carry replayable evidence, and for each failure
mode a finite one-player arena without positional optimal strategies can be
produced and is machine-verified before being returned.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from .automata import Dba, Lasso, Word, saturate
from .congruence import (
    PrefixOrder,
    build_classifier,
    candidate_acceptance,
    compute_prefix_order,
    is_total,
)
from .errors import ContractError, InternalError, SearchExhausted
from .games import DEFAULT_BUDGET, Arena, verify_no_positional_optimal
from .languages import dba_equivalent, dba_included
from .progress import ProgressWitness, is_progress_consistent, shortest_word_to

TOTAL_PREORDER = "total_preorder"
CLASSIFIER_RECOGNIZABILITY = "classifier_recognizability"
PROGRESS_CONSISTENCY = "progress_consistency"

CLAIM = "no positional strategy of P1 is optimal"


@dataclass(frozen=True)
class IncomparableEvidence:
    """Two states with residual languages incomparable under inclusion."""

    pair: tuple[str, str]
    lasso_first: Lasso   # accepted from pair[0], rejected from pair[1]
    lasso_second: Lasso  # accepted from pair[1], rejected from pair[0]


@dataclass(frozen=True)
class RecognizabilityEvidence:
    """A lasso separating the language from its classifier candidate."""

    witness: Lasso
    accepted_by: str  # "input" or "candidate"
    candidate: Dba


@dataclass(frozen=True)
class ProgressEvidence:
    """Progress-consistency failure on the normalized automaton."""

    pair: tuple[str, str]
    w: Word
    w1: Word


@dataclass(frozen=True)
class BuchiSetEvidence:
    """The language is exactly 'infinitely many colors from F'."""

    colors: tuple[str, ...]


@dataclass(frozen=True)
class Verdict:
    half_positional: bool
    failed_condition: str | None
    evidence: object | None
    timings: dict[str, float] = field(default_factory=dict)
    saturated: Dba | None = None
    normalized: Dba | None = None
    progress_witness: ProgressWitness | None = None


def decide(dba: Dba) -> Verdict:
    """Half-positionality of the recognized objective, with evidence."""
    timings: dict[str, float] = {}

    t = time.perf_counter()
    sat = saturate(dba)
    timings["saturate"] = time.perf_counter() - t

    t = time.perf_counter()
    order = compute_prefix_order(sat)
    timings["prefix_order"] = time.perf_counter() - t

    t = time.perf_counter()
    totality = is_total(order)
    timings["totality"] = time.perf_counter() - t
    if not totality.total:
        assert totality.pair is not None
        q, q2 = totality.pair
        evidence = IncomparableEvidence(
            (sat.names[q], sat.names[q2]), totality.lasso_first, totality.lasso_second
        )
        return Verdict(False, TOTAL_PREORDER, evidence, timings, sat)

    t = time.perf_counter()
    classifier = build_classifier(sat, order)
    buchi = candidate_acceptance(sat, classifier)
    candidate = classifier.structure.with_buchi(buchi)
    eq = dba_equivalent(sat, candidate)
    timings["recognizability"] = time.perf_counter() - t
    if not eq.equal:
        assert eq.witness is not None and eq.accepted_by is not None
        evidence = RecognizabilityEvidence(
            eq.witness, "input" if eq.accepted_by == "left" else "candidate", candidate
        )
        return Verdict(False, CLASSIFIER_RECOGNIZABILITY, evidence, timings, sat)

    t = time.perf_counter()
    norm_order = compute_prefix_order(candidate)
    if not saturate(candidate).same_structure(candidate):
        raise InternalError("classifier candidate is not saturated")
    consistent, witness = is_progress_consistent(candidate, norm_order)
    timings["progress"] = time.perf_counter() - t
    if not consistent:
        assert witness is not None
        evidence = ProgressEvidence(
            (candidate.names[witness.q], candidate.names[witness.q_prime]),
            witness.w,
            witness.w1,
        )
        return Verdict(False, PROGRESS_CONSISTENCY, evidence, timings, sat, candidate, witness)

    if candidate.n == 1:
        colors = tuple(
            candidate.alphabet.symbols[ci] for (q, ci) in sorted(candidate.buchi)
        )
        evidence: object = BuchiSetEvidence(colors)
    else:
        evidence = None
    return Verdict(True, None, evidence, timings, sat, candidate)


def decide_prefix_independent(dba: Dba) -> frozenset[str] | None:
    """For a prefix-independent language: the color set F with language
    'infinitely many colors from F', or None when no such F exists (in which
    case the language is not half-positional)."""
    sat = saturate(dba)
    order = compute_prefix_order(sat)
    classifier = build_classifier(sat, order)
    if classifier.structure.n != 1:
        raise ContractError("decide_prefix_independent requires a prefix-independent language")
    buchi = candidate_acceptance(sat, classifier)
    candidate = classifier.structure.with_buchi(buchi)
    if dba_equivalent(sat, candidate).equal:
        return frozenset(sat.alphabet.symbols[ci] for (_, ci) in buchi)
    return None


# ---------------------------------------------------------------------------
# Counterexample arenas


@dataclass(frozen=True)
class CounterexampleArena:
    arena: Arena
    claim: str
    construction_tag: str  # "preorder_fork", "progress_pump", or "searched"


class _ArenaSketch:
    """Accumulates named vertices and word-labeled edges, expanding words into
    chains of fresh intermediate vertices (arenas carry one color per edge)."""

    def __init__(self, symbols: tuple[str, ...]):
        self.symbols = symbols
        self.vertices: list[tuple[str, int]] = []
        self.edges: list[tuple[str, str, str]] = []
        self._fresh = 0

    def vertex(self, name: str) -> str:
        if name not in [v for v, _ in self.vertices]:
            self.vertices.append((name, 1))
        return name

    def chain(self, src: str, word: Word, dst: str) -> None:
        if not word:
            raise InternalError("cannot expand an empty word into edges")
        cur = src
        for i, color in enumerate(word[:-1]):
            mid = f"{src}~{self._fresh}"
            self._fresh += 1
            self.vertex(mid)
            self.edges.append((cur, color, mid))
            cur = mid
        self.edges.append((cur, word[-1], dst))

    def build(self) -> Arena:
        return Arena.build(self.symbols, self.vertices, self.edges)


def _nonempty_anchor(lasso: Lasso) -> tuple[Word, Word]:
    """Split a lasso into a non-empty entry word and its cycle (an empty
    prefix absorbs one copy of the cycle; the denoted word is unchanged)."""
    if lasso.prefix:
        return lasso.prefix, lasso.cycle
    return lasso.cycle, lasso.cycle


def _fork_arena(sat: Dba, order: PrefixOrder, evidence: IncomparableEvidence) -> Arena:
    """Two entry paths reach a junction offering one escape per lasso; no
    single positional choice at the junction serves both entries."""
    q = sat.state_of(evidence.pair[0])
    q2 = sat.state_of(evidence.pair[1])
    w1 = shortest_word_to(sat, q)
    w2 = shortest_word_to(sat, q2)
    sketch = _ArenaSketch(sat.alphabet.symbols)
    v3 = sketch.vertex("v3")
    for entry, w in (("v1", w1), ("v2", w2)):
        if w:
            sketch.vertex(entry)
            sketch.chain(entry, w, v3)
    for tag, lasso in (("v4", evidence.lasso_first), ("v5", evidence.lasso_second)):
        x, y = _nonempty_anchor(lasso)
        loop = sketch.vertex(tag)
        sketch.chain(v3, x, loop)
        sketch.chain(loop, y, loop)
    return sketch.build()


def _pump_arena(normalized: Dba, witness: ProgressWitness) -> Arena:
    """An entry path, a pump cycle that strictly improves the reached state,
    and an escape lasso winning only after at least one pump."""
    from .automata import residual

    escape = dba_included(
        residual(normalized, witness.q_prime), residual(normalized, witness.q)
    ).counterexample
    if escape is None:
        raise InternalError("progress witness without a strict residual gap")
    x, y = _nonempty_anchor(escape)
    sketch = _ArenaSketch(normalized.alphabet.symbols)
    v2 = sketch.vertex("v2")
    if witness.w1:
        sketch.vertex("v1")
        sketch.chain("v1", witness.w1, v2)
    sketch.chain(v2, witness.w, v2)
    v3 = sketch.vertex("v3")
    sketch.chain(v2, x, v3)
    sketch.chain(v3, y, v3)
    return sketch.build()


def _cycle_words(sat: Dba, q: int, max_len: int, cap: int, safe_only: bool) -> list[Word]:
    """Words labeling cycles on `q` (safe ones, or any), shortest first."""
    out: list[Word] = []
    frontier: list[tuple[int, Word]] = [(q, ())]
    for _ in range(max_len):
        nxt: list[tuple[int, Word]] = []
        for state, word in frontier:
            for ci, color in enumerate(sat.alphabet.symbols):
                if safe_only and (state, ci) in sat.buchi:
                    continue
                target = sat.delta[state][ci]
                grown = word + (color,)
                if target == q:
                    out.append(grown)
                    if len(out) >= cap:
                        return out
                nxt.append((target, grown))
        frontier = nxt
        if len(frontier) > 4096:
            frontier = frontier[:4096]
    return out


def _search_candidates(sat: Dba, max_core: int, rng_seed: int, random_tries: int):
    """Deterministic stream of candidate one-player arenas.

    Bouquets of cycle words drawn from the safe cycles of each state, then all
    tiny arbitrary cores of one or two vertices, then seeded random arenas up
    to `max_core` vertices; every candidate may be entered through a shortest
    access word to some state.
    """
    symbols = sat.alphabet.symbols
    k = len(symbols)
    max_cycle = 2 * sat.n

    prefixes: list[Word] = []
    for q in range(sat.n):
        w = shortest_word_to(sat, q)
        if w not in prefixes:
            prefixes.append(w)
    prefixes.sort(key=lambda w: (len(w), w))

    pool: list[Word] = []
    for q in range(sat.n):
        for w in _cycle_words(sat, q, max_cycle, 6, safe_only=True):
            if w not in pool:
                pool.append(w)
    for q in range(sat.n):
        for w in _cycle_words(sat, q, min(max_cycle, 3), 4, safe_only=False):
            if w not in pool:
                pool.append(w)
    pool.sort(key=lambda w: (len(w), w))
    pool = pool[:12]

    def with_prefix(core: _ArenaSketch, entry: str, prefix: Word) -> Arena:
        if prefix:
            core.vertex("s0")
            core.chain("s0", prefix, entry)
        return core.build()

    # Bouquets of cycles around one core vertex.
    for size in (2, 3):
        for combo in itertools.combinations(pool, size):
            for prefix in prefixes:
                sketch = _ArenaSketch(symbols)
                core = sketch.vertex("c")
                for w in combo:
                    sketch.chain(core, w, core)
                yield with_prefix(sketch, core, prefix)

    # Every one- or two-vertex core, arbitrary edge sets.
    for nv in (1, 2):
        slots = [(v, ci, t) for v in range(nv) for ci in range(k) for t in range(nv)]
        for mask in range(1, 1 << len(slots)):
            chosen = [slots[i] for i in range(len(slots)) if mask >> i & 1]
            if any(all(src != v for (src, _, _) in chosen) for v in range(nv)):
                continue
            for prefix in prefixes:
                sketch = _ArenaSketch(symbols)
                names = [sketch.vertex(f"c{v}") for v in range(nv)]
                for (src, ci, t) in chosen:
                    sketch.edges.append((names[src], symbols[ci], names[t]))
                yield with_prefix(sketch, names[0], prefix)

    # Seeded random arenas.
    rng = random.Random(rng_seed)
    for _ in range(random_tries):
        nv = rng.randint(2, max_core)
        sketch = _ArenaSketch(symbols)
        names = [sketch.vertex(f"c{v}") for v in range(nv)]
        for v in range(nv):
            degree = rng.randint(1, min(3, nv * k))
            picks = rng.sample(
                [(ci, t) for ci in range(k) for t in range(nv)], degree
            )
            for (ci, t) in picks:
                sketch.edges.append((names[v], symbols[ci], names[t]))
        prefix = rng.choice(prefixes)
        yield with_prefix(sketch, names[0], prefix)


def counterexample_arena(
    dba: Dba,
    verdict: Verdict,
    budget: int = DEFAULT_BUDGET,
    max_core: int = 6,
    rng_seed: int = 0,
    random_tries: int = 3000,
) -> CounterexampleArena:
    """A finite one-player arena on which P1 wins somewhere but no positional
    strategy is optimal; machine-verified before being returned.

    For the two word-based failure modes the arena comes from a direct
    construction; the classifier failure mode runs a bounded search and raises
    SearchExhausted when the bounds run out (never a silent failure).
    """
    if verdict.half_positional:
        raise ContractError("counterexample_arena requires a negative verdict")
    sat = verdict.saturated if verdict.saturated is not None else saturate(dba)

    if verdict.failed_condition == TOTAL_PREORDER:
        assert isinstance(verdict.evidence, IncomparableEvidence)
        order = compute_prefix_order(sat)
        arena = _fork_arena(sat, order, verdict.evidence)
        if not verify_no_positional_optimal(arena, dba, budget):
            raise InternalError("fork construction failed its oracle check")
        return CounterexampleArena(arena, CLAIM, "preorder_fork")

    if verdict.failed_condition == PROGRESS_CONSISTENCY:
        assert verdict.progress_witness is not None and verdict.normalized is not None
        arena = _pump_arena(verdict.normalized, verdict.progress_witness)
        if not verify_no_positional_optimal(arena, dba, budget):
            raise InternalError("pump construction failed its oracle check")
        return CounterexampleArena(arena, CLAIM, "progress_pump")

    assert verdict.failed_condition == CLASSIFIER_RECOGNIZABILITY
    tried = 0
    seen: set[tuple] = set()
    for arena in _search_candidates(sat, max_core, rng_seed, random_tries):
        key = (arena.names, arena.owner, arena.edges)
        if key in seen:
            continue
        seen.add(key)
        tried += 1
        if verify_no_positional_optimal(arena, dba, budget):
            return CounterexampleArena(arena, CLAIM, "searched")
    raise SearchExhausted(
        f"no arena without positional optimal strategies found within bounds "
        f"({tried} candidates tried)",
        tried,
    )
