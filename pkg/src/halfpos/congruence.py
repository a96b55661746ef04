"""Prefix preorder on automaton states, totality with witnesses, the
prefix-classifier quotient, and recognizability of the language on top of it.

All pairwise residual inclusions are decided on one shared product (the
automaton against its own complement), so filling the full matrix costs about
the same as a single inclusion query times the number of states squared only
in the worst case; witness lassos are extracted per pair on demand.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

from .automata import Dba, Lasso, is_saturated, residual, saturate, tarjan_scc
from .errors import ContractError, InternalError
from .languages import dba_equivalent, dba_included, EquivalenceOutcome


class Rel(enum.Enum):
    LESS = "less"
    EQUIVALENT = "equivalent"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


class _InclusionTable:
    """All residual inclusions of one automaton, decided on a shared product.

    Product vertices are (left state, right state, copy flag, phase flag):
    the left automaton runs deterministically; the right side simulates the
    two-part complement (original part, accepting-free copy); the phase flag
    implements the two-phase intersection acceptance.  L(B_x) is not included
    in L(B_y) iff from vertex (x, y, original, phase 0) the product can reach
    an accepting edge that lies on a cycle.
    """

    def __init__(self, dba: Dba):
        n = dba.n
        k = len(dba.alphabet)
        nv = n * n * 4
        succ: list[list[int]] = [[] for _ in range(nv)]
        marked_edges: list[tuple[int, int]] = []

        def vid(x: int, y: int, copy: int, phase: int) -> int:
            return ((x * n + y) * 2 + copy) * 2 + phase

        for x in range(n):
            for y in range(n):
                for copy in (0, 1):
                    for phase in (0, 1):
                        src = vid(x, y, copy, phase)
                        for ci in range(k):
                            x2 = dba.delta[x][ci]
                            y2 = dba.delta[y][ci]
                            if copy == 0:
                                ysucc = [(0, False), (1, False)]
                            elif (y, ci) not in dba.buchi:
                                ysucc = [(1, True)]
                            else:
                                ysucc = []
                            for (ncopy, acc_right) in ysucc:
                                if phase == 0:
                                    nphase = 1 if (x, ci) in dba.buchi else 0
                                    mark = False
                                else:
                                    nphase = 0 if acc_right else 1
                                    mark = acc_right
                                dst = vid(x2, y2, ncopy, nphase)
                                succ[src].append(dst)
                                if mark:
                                    marked_edges.append((src, dst))

        comps = tarjan_scc(nv, [sorted(set(s)) for s in succ])
        comp_of = [0] * nv
        for cid, comp in enumerate(comps):
            for v in comp:
                comp_of[v] = cid

        good_sources = sorted({src for (src, dst) in marked_edges if comp_of[src] == comp_of[dst]})

        rev: list[list[int]] = [[] for _ in range(nv)]
        for src, dsts in enumerate(succ):
            for dst in dsts:
                rev[dst].append(src)
        INF = float("inf")
        dist = [INF] * nv
        queue = []
        for s in good_sources:
            if dist[s] == INF:
                dist[s] = 0
                queue.append(s)
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            for u in rev[v]:
                if dist[u] == INF:
                    dist[u] = dist[v] + 1
                    queue.append(u)

        self._n = n
        self._dist = dist

    def included(self, x: int, y: int) -> bool:
        return self.fail_distance(x, y) == float("inf")

    def fail_distance(self, x: int, y: int) -> float:
        """Steps until the inclusion L(B_x) <= L(B_y) can start to fail
        (infinite when it holds)."""
        return self._dist[((x * self._n + y) * 2 + 0) * 2 + 0]


@dataclass(frozen=True)
class PrefixOrder:
    """Pairwise residual-inclusion matrix plus the induced classes."""

    dba: Dba
    matrix: tuple[tuple[Rel, ...], ...]
    class_of: tuple[int, ...]                 # state -> class id
    classes: tuple[tuple[int, ...], ...]      # class id -> sorted member states
    class_order: tuple[int, ...] | None       # ascending class ids; None if not total
    _table: _InclusionTable

    def rel(self, q: int, q_prime: int) -> Rel:
        return self.matrix[q][q_prime]

    @property
    def total(self) -> bool:
        return self.class_order is not None

    def state_rank(self, q: int) -> int:
        """Position of q's class in the ascending order (requires totality)."""
        if self.class_order is None:
            raise ContractError("state_rank requires a total prefix preorder")
        return self.class_order.index(self.class_of[q])


def has_total_prefix_order(dba: Dba) -> bool:
    """Fast-fail totality probe: stops at the first incomparable pair, without
    materializing the matrix, classes, or witnesses.  Benchmarking aid; the
    full pipeline always computes the complete matrix for diagnostics."""
    table = _InclusionTable(dba)
    for q in range(dba.n):
        for q2 in range(q + 1, dba.n):
            if not table.included(q, q2) and not table.included(q2, q):
                return False
    return True


def compute_prefix_order(dba: Dba) -> PrefixOrder:
    """Fill the full pairwise relation matrix between residual languages."""
    table = _InclusionTable(dba)
    n = dba.n
    matrix = []
    for q in range(n):
        row = []
        for q2 in range(n):
            fwd = table.included(q, q2)
            bwd = table.included(q2, q)
            if fwd and bwd:
                row.append(Rel.EQUIVALENT)
            elif fwd:
                row.append(Rel.LESS)
            elif bwd:
                row.append(Rel.GREATER)
            else:
                row.append(Rel.INCOMPARABLE)
        matrix.append(tuple(row))
    matrix_t = tuple(matrix)
    _validate_matrix(matrix_t)

    rep = [min(q2 for q2 in range(n) if matrix_t[q][q2] == Rel.EQUIVALENT) for q in range(n)]
    reps = sorted(set(rep))
    class_id = {r: i for i, r in enumerate(reps)}
    class_of = tuple(class_id[rep[q]] for q in range(n))
    classes = tuple(
        tuple(q for q in range(n) if class_of[q] == cid) for cid in range(len(reps))
    )

    class_order: tuple[int, ...] | None = None
    if all(entry != Rel.INCOMPARABLE for row in matrix_t for entry in row):
        def cmp(c1: int, c2: int) -> int:
            if c1 == c2:
                return 0
            return -1 if matrix_t[classes[c1][0]][classes[c2][0]] == Rel.LESS else 1

        class_order = tuple(sorted(range(len(classes)), key=functools.cmp_to_key(cmp)))

    return PrefixOrder(dba, matrix_t, class_of, classes, class_order, table)


def _validate_matrix(matrix: tuple[tuple[Rel, ...], ...]) -> None:
    n = len(matrix)
    flip = {Rel.LESS: Rel.GREATER, Rel.GREATER: Rel.LESS,
            Rel.EQUIVALENT: Rel.EQUIVALENT, Rel.INCOMPARABLE: Rel.INCOMPARABLE}
    for q in range(n):
        if matrix[q][q] != Rel.EQUIVALENT:
            raise InternalError(f"relation not reflexive at state {q}")
        for q2 in range(n):
            if matrix[q2][q] != flip[matrix[q][q2]]:
                raise InternalError(f"relation not antisymmetric at ({q},{q2})")
    order = {Rel.LESS, Rel.EQUIVALENT}
    for a in range(n):
        for b in range(n):
            if matrix[a][b] not in order:
                continue
            for c in range(n):
                if matrix[b][c] in order and matrix[a][c] not in order:
                    raise InternalError(f"relation not transitive at ({a},{b},{c})")


@dataclass(frozen=True)
class TotalityOutcome:
    total: bool
    pair: tuple[int, int] | None
    lasso_first: Lasso | None   # accepted from pair[0], rejected from pair[1]
    lasso_second: Lasso | None  # accepted from pair[1], rejected from pair[0]


def is_total(order: PrefixOrder) -> TotalityOutcome:
    """Totality of the prefix preorder; on failure, an incomparable pair with
    distinguishing lassos both ways.

    Among incomparable pairs the one with the smallest distinguishing
    witnesses is reported (pre-filtered by the shared-product failure
    distances, then by actual lasso sizes, then by state ids).
    """
    n = order.dba.n
    incomparable = [
        (q, q2)
        for q in range(n)
        for q2 in range(q + 1, n)
        if order.matrix[q][q2] == Rel.INCOMPARABLE
    ]
    if not incomparable:
        return TotalityOutcome(True, None, None, None)

    table = order._table
    best_rough = min(
        table.fail_distance(q, q2) + table.fail_distance(q2, q) for (q, q2) in incomparable
    )
    shortlist = [
        pair for pair in incomparable
        if table.fail_distance(*pair) + table.fail_distance(pair[1], pair[0]) == best_rough
    ][:8]  # ties are compared exactly; beyond the cap, id order decides

    alphabet = order.dba.alphabet
    best_key = None
    best = None
    for (q, q2) in shortlist:
        first = dba_included(residual(order.dba, q), residual(order.dba, q2)).counterexample
        second = dba_included(residual(order.dba, q2), residual(order.dba, q)).counterexample
        if first is None or second is None:
            raise InternalError("matrix says incomparable but an inclusion query holds")
        key = (
            len(first.prefix) + len(first.cycle) + len(second.prefix) + len(second.cycle),
            tuple(alphabet.index_of(c) for c in first.prefix + first.cycle),
            tuple(alphabet.index_of(c) for c in second.prefix + second.cycle),
            (q, q2),
        )
        if best_key is None or key < best_key:
            best_key = key
            best = (q, q2, first, second)
    assert best is not None
    q, q2, first, second = best
    return TotalityOutcome(False, (q, q2), first, second)


@dataclass(frozen=True)
class Classifier:
    """Quotient automaton structure over the equivalence classes."""

    structure: Dba                      # transitions of the quotient; empty accepting set
    class_of: tuple[int, ...]           # original state -> quotient state
    candidate_buchi: frozenset[tuple[int, int]] | None = None
    witness: Lasso | None = None


def build_classifier(dba: Dba, order: PrefixOrder) -> Classifier:
    """Merge equivalent states into the quotient structure.

    The quotient is well-defined because equivalent states keep equivalent
    successors; this is re-checked and a violation raises an internal error.
    """
    k = len(dba.alphabet)
    classes = order.classes
    delta = []
    for cid, members in enumerate(classes):
        row = []
        for ci in range(k):
            targets = {order.class_of[dba.delta[q][ci]] for q in members}
            if len(targets) != 1:
                raise InternalError(
                    f"equivalent states disagree on color {dba.alphabet.symbols[ci]!r}"
                )
            row.append(targets.pop())
        delta.append(row)
    names = tuple(dba.names[members[0]] for members in classes)
    structure = Dba(dba.alphabet, delta, frozenset(), order.class_of[dba.init], names)
    if structure.n != len(classes):
        raise InternalError("quotient lost a reachable class")
    return Classifier(structure, order.class_of)


def candidate_acceptance(dba: Dba, classifier: Classifier) -> frozenset[tuple[int, int]]:
    """Quotient accepting set: a class-color pair is accepting iff the color's
    transition is accepting at every member state.  Requires saturation."""
    if not is_saturated(dba):
        raise ContractError("candidate_acceptance requires a saturated automaton")
    k = len(dba.alphabet)
    members_of: dict[int, list[int]] = {}
    for q, cid in enumerate(classifier.class_of):
        members_of.setdefault(cid, []).append(q)
    out = set()
    for cid, members in members_of.items():
        for ci in range(k):
            if all((q, ci) in dba.buchi for q in members):
                out.add((cid, ci))
    return frozenset(out)


@dataclass(frozen=True)
class RecognizabilityOutcome:
    recognizable: bool
    classifier_dba: Dba | None
    equivalence: EquivalenceOutcome
    classifier: Classifier


def recognizable_by_classifier(dba: Dba) -> RecognizabilityOutcome:
    """Can the language be recognized on the quotient structure?

    Saturates, quotients, installs the candidate accepting set, and compares
    languages.  Testing this single candidate is complete: if any accepting
    set on the quotient works, the candidate does.
    """
    sat = saturate(dba)
    order = compute_prefix_order(sat)
    classifier = build_classifier(sat, order)
    buchi = candidate_acceptance(sat, classifier)
    candidate = classifier.structure.with_buchi(buchi)
    eq = dba_equivalent(sat, candidate)
    enriched = Classifier(
        classifier.structure, classifier.class_of, buchi, eq.witness
    )
    return RecognizabilityOutcome(eq.equal, candidate if eq.equal else None, eq, enriched)
