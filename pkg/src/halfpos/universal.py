"""Ordered monotone graphs for automata that pass all three conditions, the
complete well-monotonicity check, vertex satisfaction, and the canonical
language-preserving morphism from a given finite graph.

Ordinals are restricted to naturals 0..theta-1.  Vertices are (state, level)
pairs plus a maximal vertex `top`; they are totally ordered lexicographically
by the state order, then by level.  Edges follow three rules for an automaton
transition q -c-> q': accepting transitions connect every level to every
level; non-accepting ones only connect to strictly smaller levels; and any
strictly smaller target state is reachable at every level.  `top` carries
every outgoing edge.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automata import Dba, is_saturated
from .congruence import PrefixOrder
from .errors import BudgetError, ContractError, InputError, InternalError
from .games import Arena
from .progress import is_progress_consistent

MATERIALIZE_CAP = 64


def _check_hypotheses(dba: Dba, order: PrefixOrder) -> None:
    if not is_saturated(dba):
        raise ContractError("universal graph requires a saturated automaton")
    if any(len(members) != 1 for members in order.classes):
        raise ContractError("universal graph requires one state per equivalence class")
    if order.class_order is None:
        raise ContractError("universal graph requires a total prefix preorder")
    consistent, _ = is_progress_consistent(dba, order)
    if not consistent:
        raise ContractError("universal graph requires a progress-consistent language")


class MonotoneGraph:
    """The ordered graph over (state, level) pairs and `top`.

    Vertex ids are `rank * theta + level` with `top = n * theta`, so the
    integer order on ids is exactly the vertex order.  Edges are predicates
    over (source, color, target); `without_edge` masks single edges for
    negative tests.
    """

    __slots__ = ("dba", "order", "theta", "ranked", "rank_of", "removed")

    def __init__(self, dba: Dba, order: PrefixOrder, theta: int,
                 removed: frozenset[tuple[int, int, int]] = frozenset()):
        if theta < 1:
            raise InputError("theta must be at least 1")
        self.dba = dba
        self.order = order
        self.theta = theta
        assert order.class_order is not None
        self.ranked = tuple(order.classes[cid][0] for cid in order.class_order)
        rank_of = [0] * dba.n
        for rank, q in enumerate(self.ranked):
            rank_of[q] = rank
        self.rank_of = tuple(rank_of)
        self.removed = removed

    @property
    def top(self) -> int:
        return self.dba.n * self.theta

    @property
    def n_vertices(self) -> int:
        return self.dba.n * self.theta + 1

    def vertex(self, q: int, level: int) -> int:
        if not (0 <= level < self.theta):
            raise InputError(f"level {level} outside 0..{self.theta - 1}")
        return self.rank_of[q] * self.theta + level

    def pair(self, v: int) -> tuple[int, int] | None:
        """(state, level) of a vertex, or None for top."""
        if v == self.top:
            return None
        rank, level = divmod(v, self.theta)
        return self.ranked[rank], level

    def describe(self, v: int) -> str:
        pair = self.pair(v)
        if pair is None:
            return "top"
        q, level = pair
        return f"({self.dba.names[q]},{level})"

    def has_edge(self, src: int, ci: int, dst: int) -> bool:
        if (src, ci, dst) in self.removed:
            return False
        if src == self.top:
            return True
        if dst == self.top:
            return False
        src_rank, src_level = divmod(src, self.theta)
        dst_rank, dst_level = divmod(dst, self.theta)
        q = self.ranked[src_rank]
        target_rank = self.rank_of[self.dba.delta[q][ci]]
        if dst_rank < target_rank:
            return True
        if dst_rank > target_rank:
            return False
        return (q, ci) in self.dba.buchi or dst_level < src_level

    def successors(self, src: int, ci: int) -> list[int]:
        return [dst for dst in range(self.n_vertices) if self.has_edge(src, ci, dst)]

    def without_edge(self, src: int, ci: int, dst: int) -> "MonotoneGraph":
        return MonotoneGraph(self.dba, self.order, self.theta,
                             self.removed | {(src, ci, dst)})

    def edge_list(self, cap: int = MATERIALIZE_CAP) -> list[tuple[int, int, int]]:
        """Materialized edges; guarded because the count grows with theta^2."""
        if self.theta > cap:
            raise BudgetError(
                f"refusing to materialize edges for theta={self.theta} > cap={cap}"
            )
        k = len(self.dba.alphabet)
        return [
            (src, ci, dst)
            for src in range(self.n_vertices)
            for ci in range(k)
            for dst in self.successors(src, ci)
        ]

    def to_dot(self, cap: int = MATERIALIZE_CAP) -> str:
        lines = ["digraph monotone_graph {", "  rankdir=LR;"]
        for v in range(self.n_vertices):
            lines.append(f'  v{v} [label="{self.describe(v)}"];')
        for (src, ci, dst) in self.edge_list(cap):
            color = self.dba.alphabet.symbols[ci]
            lines.append(f'  v{src} -> v{dst} [label="{color}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_universal_graph(dba: Dba, order: PrefixOrder, theta: int) -> MonotoneGraph:
    """The ordered graph for a saturated, classifier-built, totally ordered,
    progress-consistent automaton, with levels 0..theta-1."""
    _check_hypotheses(dba, order)
    return MonotoneGraph(dba, order, theta)


def check_completely_well_monotonic(g: MonotoneGraph) -> bool:
    """Verify the two monotonicity implications for all vertex triples and the
    maximal-vertex condition (the finite total order is trivially a well-order).

    For each source and color the target set must be downward-closed, target
    sets must grow with the source, and `top` must carry every edge.
    """
    n = g.n_vertices
    k = len(g.dba.alphabet)
    full = (1 << n) - 1
    for ci in range(k):
        prev_mask: int | None = None
        for src in range(n):
            mask = 0
            for dst in range(n):
                if g.has_edge(src, ci, dst):
                    mask |= 1 << dst
            if mask & (mask + 1) != 0:  # not of the form 0..m
                return False
            if prev_mask is not None and prev_mask & ~mask != 0:
                return False
            prev_mask = mask
        if prev_mask != full:  # the last vertex is top: needs every edge
            return False
    return True


def vertex_satisfies(g: MonotoneGraph, vertex: int, dba: Dba, q0: int) -> bool:
    """Do all infinite paths from `vertex` spell words accepted from `q0`?

    Decided on the finite product of the graph with the automaton: a rejected
    path exists iff a cycle of non-accepting product edges is reachable.
    """
    succ_cache: dict[tuple[int, int], list[int]] = {}

    def successors(v: int, ci: int) -> list[int]:
        key = (v, ci)
        got = succ_cache.get(key)
        if got is None:
            got = g.successors(v, ci)
            succ_cache[key] = got
        return got

    k = len(dba.alphabet)
    start = (vertex, q0)
    index = {start: 0}
    nodes = [start]
    succ_all: list[list[int]] = []
    succ_safe: list[list[int]] = []
    i = 0
    while i < len(nodes):
        v, q = nodes[i]
        succ_all.append([])
        succ_safe.append([])
        for ci in range(k):
            q2 = dba.delta[q][ci]
            accepting = (q, ci) in dba.buchi
            for dst in successors(v, ci):
                pair = (dst, q2)
                ti = index.get(pair)
                if ti is None:
                    ti = len(nodes)
                    index[pair] = ti
                    nodes.append(pair)
                succ_all[i].append(ti)
                if not accepting:
                    succ_safe[i].append(ti)
        i += 1

    from .automata import tarjan_scc

    comps = tarjan_scc(len(nodes), [sorted(set(s)) for s in succ_safe])
    comp_of = {}
    for cid, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = cid
    for i, succs in enumerate(succ_safe):
        for t in succs:
            if comp_of[i] == comp_of[t]:
                return False  # a reachable non-accepting cycle rejects a path
    return True


@dataclass(frozen=True)
class Morphism:
    """Vertex assignment into the monotone graph; every source edge maps to an
    edge and satisfying vertices map to satisfying vertices."""

    assignment: dict[str, tuple[str, int] | str]  # vertex name -> (state, level) | "top"
    vertex_ids: dict[int, int]                    # source vertex -> graph vertex id


@dataclass(frozen=True)
class MorphismOutcome:
    morphism: Morphism | None
    diagnostic: str | None
    stabilization: int
    graph: MonotoneGraph
    theta: int


def default_theta(dba: Dba, source: Arena) -> int:
    return dba.n * (source.n + 1)


def compute_morphism(
    source: Arena,
    dba: Dba,
    order: PrefixOrder,
    theta: int | None = None,
) -> MorphismOutcome:
    """The canonical language-preserving morphism from `source` (vertex
    ownership is ignored; only the edge structure matters).

    Assigns each source vertex the smallest automaton state whose residual it
    satisfies, then the least level of the inductive level-set fixpoint, and
    verifies the morphism property edge by edge before returning it.  A theta
    too small for the fixpoint raises a resource error rather than truncating.
    """
    _check_hypotheses(dba, order)
    if theta is None:
        theta = default_theta(dba, source)

    color_map = [dba.alphabet.index_of(c) for c in source.alphabet.symbols]
    n = source.n

    satisfied = _satisfaction_table(source, dba, color_map)
    assert order.class_order is not None
    ranked = [order.classes[cid][0] for cid in order.class_order]
    rank_of = {q: r for r, q in enumerate(ranked)}

    q_v: list[int | None] = []
    for v in range(n):
        best = next((q for q in ranked if satisfied[(v, q)]), None)
        q_v.append(best)

    # Level sets: v belongs at level L for state q iff every outgoing edge is
    # accepting under q or lands one level lower under the followed transition.
    hard_cap = dba.n * (n + 1)
    levels: dict[int, list[int | None]] = {q: [None] * n for q in range(dba.n)}
    prev: dict[int, set[int]] = {q: set() for q in range(dba.n)}
    stabilization = None
    lam = 0
    while True:
        cur: dict[int, set[int]] = {}
        for q in range(dba.n):
            members = set()
            for v in range(n):
                if q_v[v] is None or rank_of[q_v[v]] > rank_of[q]:
                    continue
                ok = True
                for ei in source.out[v]:
                    _, ci, dst = source.edges[ei]
                    dci = color_map[ci]
                    if (q, dci) in dba.buchi:
                        continue
                    if dst not in prev[dba.delta[q][dci]]:
                        ok = False
                        break
                if ok:
                    members.add(v)
                    if levels[q][v] is None:
                        levels[q][v] = lam
            cur[q] = members
        if cur == prev:
            stabilization = lam - 1 if lam > 0 else 0
            break
        if lam > hard_cap:
            raise InternalError("level fixpoint failed to stabilize")
        prev = cur
        lam += 1

    if stabilization >= theta:
        raise BudgetError(
            f"theta={theta} too small: level sets stabilize at {stabilization}"
        )

    graph = MonotoneGraph(dba, order, theta)
    vertex_ids: dict[int, int] = {}
    assignment: dict[str, tuple[str, int] | str] = {}
    for v in range(n):
        if q_v[v] is None:
            vertex_ids[v] = graph.top
            assignment[source.names[v]] = "top"
            continue
        level = levels[q_v[v]][v]
        if level is None:
            raise InternalError("satisfying vertex missing from its level sets")
        if level >= theta:
            raise BudgetError(f"theta={theta} too small: vertex needs level {level}")
        vertex_ids[v] = graph.vertex(q_v[v], level)
        assignment[source.names[v]] = (dba.names[q_v[v]], level)

    diagnostic = None
    for (src, ci, dst) in source.edges:
        if not graph.has_edge(vertex_ids[src], color_map[ci], vertex_ids[dst]):
            diagnostic = (
                f"edge {source.names[src]} -{source.alphabet.symbols[ci]}-> "
                f"{source.names[dst]} does not map to an edge"
            )
            break
    if diagnostic is None:
        for v in range(n):
            if satisfied[(v, dba.init)] and not vertex_satisfies(
                graph, vertex_ids[v], dba, dba.init
            ):
                diagnostic = f"vertex {source.names[v]} loses satisfaction under the map"
                break

    if diagnostic is not None:
        return MorphismOutcome(None, diagnostic, stabilization, graph, theta)
    return MorphismOutcome(Morphism(assignment, vertex_ids), None, stabilization, graph, theta)


def _satisfaction_table(source: Arena, dba: Dba, color_map: list[int]) -> dict[tuple[int, int], bool]:
    """For every (source vertex, automaton state): do all infinite paths from
    the vertex spell words accepted from the state?"""
    from .automata import tarjan_scc

    pairs = [(v, q) for v in range(source.n) for q in range(dba.n)]
    index = {pair: i for i, pair in enumerate(pairs)}
    succ_all: list[list[int]] = [[] for _ in pairs]
    succ_safe: list[list[int]] = [[] for _ in pairs]
    for i, (v, q) in enumerate(pairs):
        for ei in source.out[v]:
            _, ci, dst = source.edges[ei]
            dci = color_map[ci]
            t = index[(dst, dba.delta[q][dci])]
            succ_all[i].append(t)
            if (q, dci) not in dba.buchi:
                succ_safe[i].append(t)

    comps = tarjan_scc(len(pairs), [sorted(set(s)) for s in succ_safe])
    comp_of = [0] * len(pairs)
    for cid, comp in enumerate(comps):
        for x in comp:
            comp_of[x] = cid
    bad = [False] * len(pairs)
    for i, succs in enumerate(succ_safe):
        for t in succs:
            if comp_of[i] == comp_of[t]:
                bad[i] = True
                bad[t] = True
    rev: list[list[int]] = [[] for _ in pairs]
    for i, succs in enumerate(succ_all):
        for t in succs:
            rev[t].append(i)
    losing = list(bad)
    queue = [i for i in range(len(pairs)) if bad[i]]
    qi = 0
    while qi < len(queue):
        for s in rev[queue[qi]]:
            if not losing[s]:
                losing[s] = True
                queue.append(s)
        qi += 1
    return {pair: not losing[i] for i, pair in enumerate(pairs)}
