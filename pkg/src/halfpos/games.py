"""Finite two-player arenas, Buchi games on arena x automaton products, and
the brute-force positional-optimality oracle.

A play is won by P1 iff the produced color sequence is accepted by the
automaton read from its initial state (an arena may override the starting
automaton state for residual objectives).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .automata import Alphabet, Dba, tarjan_scc
from .errors import BudgetError, InputError

P1 = 1
P2 = 2

DEFAULT_BUDGET = 10**6


class Arena:
    """Edge-colored game graph with vertex ownership.

    Non-blocking: every vertex keeps at least one outgoing edge.  Edges are
    (source, color-index, target) triples in a fixed, deterministic order.
    """

    __slots__ = ("alphabet", "names", "owner", "edges", "out", "dba_start")

    def __init__(
        self,
        alphabet: Alphabet,
        names: Sequence[str],
        owner: Sequence[int],
        edges: Iterable[tuple[int, int, int]],
        dba_start: str | None = None,
    ):
        self.alphabet = alphabet
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise InputError("vertex names must be distinct")
        self.owner = tuple(owner)
        if len(self.owner) != len(self.names) or any(o not in (P1, P2) for o in self.owner):
            raise InputError("each vertex needs an owner P1 or P2")
        n = len(self.names)
        edge_list = sorted(set(edges))
        for (src, ci, dst) in edge_list:
            if not (0 <= src < n and 0 <= dst < n and 0 <= ci < len(alphabet)):
                raise InputError(f"edge ({src},{ci},{dst}) out of range")
        self.edges = tuple(edge_list)
        out: list[list[int]] = [[] for _ in range(n)]
        for ei, (src, _, _) in enumerate(self.edges):
            out[src].append(ei)
        for v, lst in enumerate(out):
            if not lst:
                raise InputError(f"vertex {self.names[v]} is blocking (no outgoing edge)")
        self.out = tuple(tuple(lst) for lst in out)
        self.dba_start = dba_start

    @property
    def n(self) -> int:
        return len(self.names)

    def vertex_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"unknown vertex {name!r}") from None

    def __repr__(self) -> str:
        return f"Arena({self.n} vertices, {len(self.edges)} edges)"

    @staticmethod
    def build(
        symbols: str | tuple[str, ...],
        vertices: Sequence[tuple[str, int]],
        edges: Sequence[tuple[str, str, str]],
        dba_start: str | None = None,
    ) -> "Arena":
        alphabet = Alphabet(tuple(symbols))
        names = [name for name, _ in vertices]
        owner = [o for _, o in vertices]
        index = {name: i for i, name in enumerate(names)}
        triples = []
        for (src, color, dst) in edges:
            if src not in index or dst not in index:
                raise InputError(f"edge references unknown vertex: {src} -> {dst}")
            triples.append((index[src], alphabet.index_of(color), index[dst]))
        return Arena(alphabet, names, owner, triples, dba_start)


@dataclass(frozen=True)
class PositionalStrategy:
    """One outgoing edge chosen per P1-owned vertex (edge ids into arena.edges)."""

    choice: dict[int, int]

    def validate(self, arena: Arena) -> None:
        for v in range(arena.n):
            if arena.owner[v] == P1:
                if v not in self.choice:
                    raise InputError(f"strategy misses P1 vertex {arena.names[v]}")
                if arena.edges[self.choice[v]][0] != v:
                    raise InputError(f"strategy edge at {arena.names[v]} has wrong source")

    def describe(self, arena: Arena) -> dict[str, str]:
        out = {}
        for v, ei in sorted(self.choice.items()):
            src, ci, dst = arena.edges[ei]
            out[arena.names[src]] = f"{arena.alphabet.symbols[ci]} -> {arena.names[dst]}"
        return out


class ProductGame:
    """Arena x automaton product: vertices (v, q), edges marked Buchi when the
    automaton transition taken is accepting; ownership is inherited from v."""

    __slots__ = ("arena", "dba", "start_state", "vertices", "index", "owner", "edges", "out")

    def __init__(self, arena: Arena, dba: Dba, start_state: int):
        for (_, ci, _) in arena.edges:
            dba.alphabet.index_of(arena.alphabet.symbols[ci])
        self.arena = arena
        self.dba = dba
        self.start_state = start_state
        color_map = [dba.alphabet.index_of(c) for c in arena.alphabet.symbols]

        vertices: list[tuple[int, int]] = [(v, start_state) for v in range(arena.n)]
        index = {pair: i for i, pair in enumerate(vertices)}
        edges: list[tuple[int, int, int, bool]] = []
        out: list[list[int]] = [[] for _ in vertices]
        frontier = list(range(len(vertices)))
        while frontier:
            nxt = []
            for pi in frontier:
                v, q = vertices[pi]
                for ei in arena.out[v]:
                    _, ci, dst = arena.edges[ei]
                    dci = color_map[ci]
                    q2 = dba.delta[q][dci]
                    pair = (dst, q2)
                    ti = index.get(pair)
                    if ti is None:
                        ti = len(vertices)
                        index[pair] = ti
                        vertices.append(pair)
                        out.append([])
                        nxt.append(ti)
                    out[pi].append(len(edges))
                    edges.append((pi, ci, ti, (q, dci) in dba.buchi))
            frontier = nxt
        self.vertices = tuple(vertices)
        self.index = index
        self.owner = tuple(arena.owner[v] for v, _ in vertices)
        self.edges = tuple(edges)
        self.out = tuple(tuple(lst) for lst in out)

    @property
    def n(self) -> int:
        return len(self.vertices)


def product(arena: Arena, dba: Dba, start_state: int | None = None) -> ProductGame:
    if start_state is None:
        start_state = dba.state_of(arena.dba_start) if arena.dba_start else dba.init
    return ProductGame(arena, dba, start_state)


def solve_buchi_game(game: ProductGame) -> tuple[frozenset[int], dict[int, int]]:
    """Vertices from which P1 forces infinitely many Buchi edges, plus a
    positional witness strategy on the product.

    Greatest fixpoint: restrict the candidate set to the vertices from which
    P1 can force, staying inside it, to take some Buchi edge landing inside
    it.  A Buchi edge into the candidate set counts as an immediate goal; a
    non-Buchi edge contributes only once its target is attracted.
    """
    n = game.n
    alive = [True] * n
    strategy: dict[int, int] = {}

    while True:
        in_attr = [False] * n
        goal_edge: dict[int, int] = {}
        attr_edge: dict[int, int] = {}
        pending = [0] * n  # P2 edges not yet known to be good
        rev: list[list[int]] = [[] for _ in range(n)]
        queue: list[int] = []
        for v in range(n):
            if not alive[v]:
                continue
            if game.owner[v] == P1:
                for ei in game.out[v]:
                    _, _, dst, mark = game.edges[ei]
                    if mark and alive[dst]:
                        if not in_attr[v]:
                            in_attr[v] = True
                            goal_edge[v] = ei
                            queue.append(v)
                    elif alive[dst]:
                        rev[dst].append(ei)
            else:
                blocked = False
                waiting = 0
                for ei in game.out[v]:
                    _, _, dst, mark = game.edges[ei]
                    if not alive[dst]:
                        blocked = True  # P2 escapes the candidate set
                    elif not mark:
                        waiting += 1
                        rev[dst].append(ei)
                if blocked:
                    pending[v] = -1
                elif waiting == 0:
                    in_attr[v] = True
                    queue.append(v)
                else:
                    pending[v] = waiting

        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            for ei in rev[v]:
                src = game.edges[ei][0]
                if in_attr[src]:
                    continue
                if game.owner[src] == P1:
                    in_attr[src] = True
                    attr_edge[src] = ei
                    queue.append(src)
                elif pending[src] > 0:
                    pending[src] -= 1
                    if pending[src] == 0:
                        in_attr[src] = True
                        queue.append(src)

        new_alive = [alive[v] and in_attr[v] for v in range(n)]
        if new_alive == alive:
            for v in range(n):
                if game.owner[v] != P1:
                    continue
                if alive[v]:
                    strategy[v] = goal_edge.get(v, attr_edge.get(v, game.out[v][0]))
                else:
                    strategy[v] = game.out[v][0]
            return frozenset(v for v in range(n) if alive[v]), strategy
        alive = new_alive


def product_strategy_wins(game: ProductGame, choice: dict[int, int]) -> frozenset[int]:
    """Product vertices from which a positional product strategy (P1 product
    vertex -> edge id) wins against every P2 behavior: no cycle of non-Buchi
    edges is reachable in the restriction."""
    succ_all: list[list[int]] = [[] for _ in range(game.n)]
    succ_safe: list[list[int]] = [[] for _ in range(game.n)]
    for v in range(game.n):
        edge_ids = (choice[v],) if game.owner[v] == P1 else game.out[v]
        for ei in edge_ids:
            src, _, dst, mark = game.edges[ei]
            if src != v:
                raise InputError(f"strategy edge at product vertex {v} has wrong source")
            succ_all[v].append(dst)
            if not mark:
                succ_safe[v].append(dst)
    comps = tarjan_scc(game.n, [sorted(set(s)) for s in succ_safe])
    comp_of = [0] * game.n
    for cid, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = cid
    losing = [False] * game.n
    queue = []
    for v, succs in enumerate(succ_safe):
        for t in succs:
            if comp_of[v] == comp_of[t]:
                for x in (v, t):
                    if not losing[x]:
                        losing[x] = True
                        queue.append(x)
    rev: list[list[int]] = [[] for _ in range(game.n)]
    for v, succs in enumerate(succ_all):
        for t in succs:
            rev[t].append(v)
    qi = 0
    while qi < len(queue):
        for s in rev[queue[qi]]:
            if not losing[s]:
                losing[s] = True
                queue.append(s)
        qi += 1
    return frozenset(v for v in range(game.n) if not losing[v])


def winning_vertices(arena: Arena, dba: Dba, start_state: int | None = None) -> frozenset[int]:
    """Arena vertices from which P1 has a winning strategy (any strategy)."""
    game = product(arena, dba, start_state)
    region, _ = solve_buchi_game(game)
    return frozenset(v for v in range(arena.n) if game.index[(v, game.start_state)] in region)


def strategy_wins_from(
    arena: Arena,
    dba: Dba,
    sigma: PositionalStrategy,
    start_state: int | None = None,
) -> frozenset[int]:
    """Arena vertices from which `sigma` wins against every P2 behavior.

    In the product restricted to sigma's choices, a vertex loses iff it can
    reach a cycle of non-Buchi edges; detected via SCCs of the non-Buchi
    subgraph, mirroring the eventually-trapped-in-a-safe-component argument.
    """
    sigma.validate(arena)
    if start_state is None:
        start_state = dba.state_of(arena.dba_start) if arena.dba_start else dba.init
    color_map = [dba.alphabet.index_of(c) for c in arena.alphabet.symbols]

    vertices: list[tuple[int, int]] = [(v, start_state) for v in range(arena.n)]
    index = {pair: i for i, pair in enumerate(vertices)}
    succ_all: list[list[int]] = []
    succ_safe: list[list[int]] = []
    pi = 0
    while pi < len(vertices):
        succ_all.append([])
        succ_safe.append([])
        v, q = vertices[pi]
        if arena.owner[v] == P1:
            edge_ids = (sigma.choice[v],)
        else:
            edge_ids = arena.out[v]
        for ei in edge_ids:
            _, ci, dst = arena.edges[ei]
            dci = color_map[ci]
            pair = (dst, dba.delta[q][dci])
            ti = index.get(pair)
            if ti is None:
                ti = len(vertices)
                index[pair] = ti
                vertices.append(pair)
            succ_all[pi].append(ti)
            if (q, dci) not in dba.buchi:
                succ_safe[pi].append(ti)
        pi += 1

    comps = tarjan_scc(len(vertices), [sorted(set(s)) for s in succ_safe])
    comp_of = {}
    for cid, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = cid
    bad = [False] * len(vertices)
    for pi, succs in enumerate(succ_safe):
        for ti in succs:
            if comp_of[pi] == comp_of[ti]:
                bad[pi] = True
                bad[ti] = True

    # Losing = can reach a vertex on a non-Buchi cycle.
    rev: list[list[int]] = [[] for _ in vertices]
    for pi, succs in enumerate(succ_all):
        for ti in succs:
            rev[ti].append(pi)
    losing = [False] * len(vertices)
    queue = [pi for pi in range(len(vertices)) if bad[pi]]
    for pi in queue:
        losing[pi] = True
    qi = 0
    while qi < len(queue):
        for src in rev[queue[qi]]:
            if not losing[src]:
                losing[src] = True
                queue.append(src)
        qi += 1
    return frozenset(v for v in range(arena.n) if not losing[index[(v, start_state)]])


def strategy_budget(arena: Arena) -> int:
    count = 1
    for v in range(arena.n):
        if arena.owner[v] == P1:
            count *= len(arena.out[v])
    return count


def all_positional_strategies(arena: Arena) -> Iterable[PositionalStrategy]:
    p1 = [v for v in range(arena.n) if arena.owner[v] == P1]
    pools = [arena.out[v] for v in p1]
    for combo in itertools.product(*pools):
        yield PositionalStrategy(dict(zip(p1, combo)))


def exists_positional_optimal(
    arena: Arena,
    dba: Dba,
    budget: int = DEFAULT_BUDGET,
    start_state: int | None = None,
) -> PositionalStrategy | None:
    """Enumerate positional strategies; return one winning from every vertex of
    the full winning region, or None if no such strategy exists."""
    total = strategy_budget(arena)
    if total > budget:
        raise BudgetError(f"{total} positional strategies exceed the budget of {budget}")
    target = winning_vertices(arena, dba, start_state)
    for sigma in all_positional_strategies(arena):
        if strategy_wins_from(arena, dba, sigma, start_state) >= target:
            return sigma
    return None


def verify_no_positional_optimal(
    arena: Arena,
    dba: Dba,
    budget: int = DEFAULT_BUDGET,
    start_state: int | None = None,
) -> bool:
    """True iff P1 wins somewhere on this arena yet no positional strategy is
    optimal; the executable certificate for counterexample arenas."""
    if not winning_vertices(arena, dba, start_state):
        return False
    return exists_positional_optimal(arena, dba, budget, start_state) is None


# ---------------------------------------------------------------------------
# Text format
#
#   alphabet: a b          (optional; default: colors appearing on edges)
#   start_state: q_a       (optional automaton-state override)
#   vertex v1 P1
#   edge v1 a v3


def parse_arena(text: str) -> Arena:
    alphabet_line: tuple[str, ...] | None = None
    dba_start: str | None = None
    vertices: list[tuple[str, int]] = []
    edges: list[tuple[str, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if line.startswith("alphabet:"):
                alphabet_line = tuple(line.split(":", 1)[1].split())
            elif line.startswith("start_state:"):
                dba_start = line.split(":", 1)[1].strip()
            elif parts[0] == "vertex":
                if len(parts) != 3 or parts[2] not in ("P1", "P2"):
                    raise InputError(f"bad vertex line: {raw.strip()!r}")
                vertices.append((parts[1], P1 if parts[2] == "P1" else P2))
            elif parts[0] == "edge":
                if len(parts) != 4:
                    raise InputError(f"bad edge line: {raw.strip()!r}")
                edges.append((parts[1], parts[2], parts[3]))
            else:
                raise InputError(f"unrecognized line: {raw.strip()!r}")
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
    if not vertices:
        raise InputError("arena has no vertices")
    if alphabet_line is None:
        seen: list[str] = []
        for (_, c, _) in edges:
            if c not in seen:
                seen.append(c)
        alphabet_line = tuple(sorted(seen))
    return Arena.build(alphabet_line, vertices, edges, dba_start)


def format_arena(arena: Arena) -> str:
    lines = [f"alphabet: {' '.join(arena.alphabet.symbols)}"]
    if arena.dba_start:
        lines.append(f"start_state: {arena.dba_start}")
    for v, name in enumerate(arena.names):
        lines.append(f"vertex {name} P{arena.owner[v]}")
    for (src, ci, dst) in arena.edges:
        lines.append(f"edge {arena.names[src]} {arena.alphabet.symbols[ci]} {arena.names[dst]}")
    return "\n".join(lines) + "\n"
