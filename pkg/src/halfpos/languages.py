"""Language-level queries: complementation of a deterministic automaton as an
NBA, NBA intersection, emptiness with lasso extraction, inclusion and
equivalence of deterministic automata, and the regular-language reachability
query used by the progress check.

Lasso witnesses are canonical: shortest prefix, then shortest cycle, ties
broken by alphabet order.  Membership of a lasso in a deterministic automaton
is decided by direct simulation, independently of the product machinery, so it
can serve as a cross-check oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .automata import Alphabet, Dba, Lasso, Word, tarjan_scc
from .errors import ContractError, InputError, InternalError
from .automata import is_saturated


class Nba:
    """Nondeterministic Buchi automaton; all states reachable from an init."""

    __slots__ = ("alphabet", "names", "inits", "trans", "buchi", "out")

    def __init__(
        self,
        alphabet: Alphabet,
        n: int,
        inits: Iterable[int],
        trans: Iterable[tuple[int, int, int]],
        buchi: Iterable[tuple[int, int, int]],
        names: Sequence[str] | None = None,
    ):
        inits = sorted(set(inits))
        if not inits:
            raise InputError("NBA needs at least one initial state")
        trans_set = set(trans)
        buchi_set = set(buchi)
        if not buchi_set <= trans_set:
            raise InputError("accepting transitions must be transitions")
        for (q, ci, t) in trans_set:
            if not (0 <= q < n and 0 <= t < n and 0 <= ci < len(alphabet)):
                raise InputError(f"transition ({q},{ci},{t}) out of range")
        if names is None:
            names = tuple(f"s{q}" for q in range(n))
        else:
            names = tuple(names)

        succ: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for (q, ci, t) in trans_set:
            succ[q].append((ci, t))
        seen = set(inits)
        stack = list(inits)
        while stack:
            q = stack.pop()
            for (_, t) in succ[q]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        keep = sorted(seen)
        remap = {old: new for new, old in enumerate(keep)}
        self.alphabet = alphabet
        self.names = tuple(names[old] for old in keep)
        self.inits = frozenset(remap[q] for q in inits)
        self.trans = tuple(
            sorted((remap[q], ci, remap[t]) for (q, ci, t) in trans_set if q in remap and t in remap)
        )
        self.buchi = frozenset(
            (remap[q], ci, remap[t]) for (q, ci, t) in buchi_set if q in remap and t in remap
        )
        out: list[list[tuple[int, int, bool]]] = [[] for _ in keep]
        for (q, ci, t) in self.trans:
            out[q].append((ci, t, (q, ci, t) in self.buchi))
        self.out = tuple(tuple(lst) for lst in out)

    @property
    def n(self) -> int:
        return len(self.out)

    def __repr__(self) -> str:
        return f"Nba({self.n} states, {len(self.trans)} transitions, {len(self.buchi)} accepting)"


def dba_to_nba(dba: Dba) -> Nba:
    trans = list(dba.transitions())
    buchi = [(q, ci, t) for (q, ci, t) in trans if (q, ci) in dba.buchi]
    return Nba(dba.alphabet, dba.n, [dba.init], trans, buchi, dba.names)


def complement_dba(dba: Dba) -> Nba:
    """NBA for the complement language, with at most twice the states.

    Keeps the original automaton (no accepting transitions), adds a copy with
    the accepting transitions deleted, nondeterministic jumps from original to
    copy mirroring the original transitions, and marks every copy-internal
    transition as accepting: a word is accepted iff from some point on its run
    avoids the original accepting transitions.
    """
    n = dba.n
    trans: list[tuple[int, int, int]] = []
    buchi: list[tuple[int, int, int]] = []
    # states 0..n-1: original part; n..2n-1: the safe copy
    for (q, ci, t) in dba.transitions():
        trans.append((q, ci, t))
        trans.append((q, ci, t + n))  # guess: the accepting-free suffix starts here
        if (q, ci) not in dba.buchi:
            copy_edge = (q + n, ci, t + n)
            trans.append(copy_edge)
            buchi.append(copy_edge)
    names = dba.names + tuple(f"{name}'" for name in dba.names)
    return Nba(dba.alphabet, 2 * n, [dba.init], trans, buchi, names)


def intersect_nba(a: Nba, b: Nba) -> Nba:
    """Product NBA with the standard two-phase flag; recognizes L(a) & L(b)."""
    if a.alphabet != b.alphabet:
        raise InputError("intersection requires identical alphabets")
    index: dict[tuple[int, int, int], int] = {}
    vertices: list[tuple[int, int, int]] = []

    def vid(qa: int, qb: int, phase: int) -> int:
        key = (qa, qb, phase)
        i = index.get(key)
        if i is None:
            i = len(vertices)
            index[key] = i
            vertices.append(key)
        return i

    inits = [vid(qa, qb, 0) for qa in sorted(a.inits) for qb in sorted(b.inits)]
    trans: list[tuple[int, int, int]] = []
    buchi: list[tuple[int, int, int]] = []
    pi = 0
    while pi < len(vertices):
        qa, qb, phase = vertices[pi]
        for (ca, ta, acc_a) in a.out[qa]:
            for (cb, tb, acc_b) in b.out[qb]:
                if ca != cb:
                    continue
                if phase == 0:
                    nphase, mark = (1 if acc_a else 0), False
                else:
                    nphase, mark = (0 if acc_b else 1), acc_b
                edge = (pi, ca, vid(ta, tb, nphase))
                trans.append(edge)
                if mark:
                    buchi.append(edge)
        pi += 1
    names = tuple(f"{a.names[qa]},{b.names[qb]};{phase}" for (qa, qb, phase) in vertices)
    return Nba(a.alphabet, len(vertices), inits, trans, buchi, names)


_CANDIDATE_CAP = 64


def nba_empty(nba: Nba) -> Lasso | None:
    """None iff the language is empty; otherwise a canonical accepted lasso.

    The cycle passes through an accepting transition lying inside a strongly
    connected component; the prefix is a shortest path to it.  Among witnesses
    the shortest prefix wins, then the shortest cycle, then alphabet order;
    on large products only the earliest-reachable accepting transitions (a
    fixed cap, ordered by prefix distance) are compared exactly.
    """
    succ = [sorted({t for (_, t, _) in nba.out[q]}) for q in range(nba.n)]
    comps = tarjan_scc(nba.n, succ)
    comp_of = [0] * nba.n
    for cid, comp in enumerate(comps):
        for q in comp:
            comp_of[q] = cid

    good = [
        (q, ci, t)
        for (q, ci, t) in sorted(nba.buchi)
        if comp_of[q] == comp_of[t]
    ]
    if not good:
        return None

    dist = _bfs_distances(nba, sorted(nba.inits))
    ranked = sorted(
        (g for g in good if dist[g[0]] is not None),
        key=lambda g: (dist[g[0]], g),
    )[:_CANDIDATE_CAP]
    if not ranked:
        raise InternalError("no accepting transition was reachable in a pruned NBA")

    best: tuple[int, int, tuple[int, ...], tuple[int, ...]] | None = None
    best_lasso: Lasso | None = None
    for (q, ci, t) in ranked:
        u = _bfs_word(nba, sorted(nba.inits), q)
        assert u is not None
        back = _bfs_word(nba, [t], q)
        if back is None:
            raise InternalError("accepting transition inside a component has no return path")
        candidate = Lasso(u, (nba.alphabet.symbols[ci],) + back).normalize()
        key = (
            len(candidate.prefix),
            len(candidate.cycle),
            tuple(nba.alphabet.index_of(c) for c in candidate.prefix),
            tuple(nba.alphabet.index_of(c) for c in candidate.cycle),
        )
        if best is None or key < best:
            best = key
            best_lasso = candidate
    assert best_lasso is not None
    return best_lasso


def _bfs_distances(nba: Nba, sources: list[int]) -> list[int | None]:
    dist: list[int | None] = [None] * nba.n
    queue = []
    for q in sources:
        dist[q] = 0
        queue.append(q)
    qi = 0
    while qi < len(queue):
        q = queue[qi]
        qi += 1
        for (_, t, _) in nba.out[q]:
            if dist[t] is None:
                dist[t] = dist[q] + 1
                queue.append(t)
    return dist


def _bfs_word(nba: Nba, sources: list[int], target: int) -> Word | None:
    """Lexicographically-least shortest word from any source to `target`."""
    parent: dict[int, tuple[int, int]] = {q: (-1, -1) for q in sources}
    if target in parent:
        return ()
    queue = list(sources)
    while queue:
        nxt = []
        for q in queue:
            for (ci, t, _) in nba.out[q]:
                if t in parent:
                    continue
                parent[t] = (q, ci)
                if t == target:
                    word: list[str] = []
                    cur = t
                    while parent[cur][0] != -1:
                        pq, pci = parent[cur]
                        word.append(nba.alphabet.symbols[pci])
                        cur = pq
                    return tuple(reversed(word))
                nxt.append(t)
        queue = nxt
    return None


@dataclass(frozen=True)
class InclusionOutcome:
    holds: bool
    counterexample: Lasso | None

    def __post_init__(self) -> None:
        if self.holds == (self.counterexample is not None):
            raise InternalError("counterexample present iff inclusion fails")


@dataclass(frozen=True)
class EquivalenceOutcome:
    equal: bool
    witness: Lasso | None
    accepted_by: str | None  # "left" or "right"


_MINIMIZE_CAP = 8


def _minimize_counterexample(a: Dba, b: Dba, found: Lasso) -> Lasso:
    """Smallest lasso accepted by `a` and rejected by `b`, by enumeration in
    canonical order (total length, then prefix length, then alphabet order),
    bounded by the size of an already-known witness.  Witnesses larger than a
    fixed cap, or over automata too large for cheap replay, are kept as found."""
    import itertools

    size = len(found.prefix) + len(found.cycle)
    if size > _MINIMIZE_CAP or max(a.n, b.n) > 8:
        return found
    symbols = a.alphabet.symbols
    for total in range(1, size + 1):
        for plen in range(0, total):
            clen = total - plen
            for prefix in itertools.product(symbols, repeat=plen):
                for cycle in itertools.product(symbols, repeat=clen):
                    lasso = Lasso(prefix, cycle)
                    if lasso_accepted(a, lasso) and not lasso_accepted(b, lasso):
                        return lasso.normalize()
    return found


def dba_included(a: Dba, b: Dba) -> InclusionOutcome:
    """Does L(a) lie inside L(b)?  On failure the counterexample lasso is
    accepted by `a` and rejected by `b`."""
    if a.alphabet != b.alphabet:
        raise InputError("inclusion requires identical alphabets")
    gap = nba_empty(intersect_nba(dba_to_nba(a), complement_dba(b)))
    if gap is not None:
        gap = _minimize_counterexample(a, b, gap)
    return InclusionOutcome(gap is None, gap)


def dba_equivalent(a: Dba, b: Dba) -> EquivalenceOutcome:
    left = dba_included(a, b)
    if not left.holds:
        return EquivalenceOutcome(False, left.counterexample, "left")
    right = dba_included(b, a)
    if not right.holds:
        return EquivalenceOutcome(False, right.counterexample, "right")
    return EquivalenceOutcome(True, None, None)


def lasso_accepted(dba: Dba, lasso: Lasso, start: int | None = None) -> bool:
    """Membership of prefix.cycle^omega decided by plain simulation: run the
    prefix, then iterate the cycle until the entry state repeats, and test
    whether the repeating segment crosses an accepting transition."""
    q = dba.init if start is None else start
    for c in lasso.prefix:
        q = dba.delta[q][dba.alphabet.index_of(c)]
    cis = [dba.alphabet.index_of(c) for c in lasso.cycle]
    seen: dict[int, int] = {}
    states = [q]
    while states[-1] not in seen:
        seen[states[-1]] = len(states) - 1
        cur = states[-1]
        for ci in cis:
            cur = dba.delta[cur][ci]
        states.append(cur)
    loop_start = seen[states[-1]]
    for entry in states[loop_start:-1]:
        cur = entry
        for ci in cis:
            if (cur, ci) in dba.buchi:
                return True
            cur = dba.delta[cur][ci]
    return False


def reach_language_meets_safe_cycles(dba: Dba, q: int, q_prime: int) -> Word | None:
    """A non-empty word that both moves `q` to `q_prime` and labels a safe
    cycle on `q_prime`, or None if no such word exists.

    Reachability in the synchronized product of the full transition graph
    (rooted at q) with the accepting-free transition graph (rooted at
    q_prime), target pair (q_prime, q_prime) in at least one step.
    """
    if not is_saturated(dba):
        raise ContractError("reach_language_meets_safe_cycles requires a saturated automaton")
    k = len(dba.alphabet)
    target = (q_prime, q_prime)
    start = (q, q_prime)
    parent: dict[tuple[int, int], tuple[tuple[int, int] | None, int]] = {start: (None, -1)}
    queue = [start]
    while queue:
        nxt = []
        for pair in queue:
            x, y = pair
            for ci in range(k):
                if (y, ci) in dba.buchi:
                    continue
                child = (dba.delta[x][ci], dba.delta[y][ci])
                if child == target:  # checked before the visited set: >= 1 step
                    word = [dba.alphabet.symbols[ci]]
                    cur: tuple[int, int] | None = pair
                    while cur is not None and parent[cur][0] is not None:
                        prev, pci = parent[cur]
                        word.append(dba.alphabet.symbols[pci])
                        cur = prev
                    return tuple(reversed(word))
                if child not in parent:
                    parent[child] = (pair, ci)
                    nxt.append(child)
        queue = nxt
    return None
