"""Shared generators and brute-force oracles for the test suite.

The oracles here deliberately avoid the product machinery under test:
membership is decided by plain simulation, inclusion by enumerating lassos.
"""

from __future__ import annotations

import itertools
import random

from halfpos.automata import Alphabet, Dba, Lasso
from halfpos.games import Arena
from halfpos.languages import dba_to_nba, intersect_nba, lasso_accepted, nba_empty


def random_dba(rng: random.Random, max_states: int = 3, symbols: str = "ab",
               p_buchi: float | None = None) -> Dba:
    n = rng.randint(1, max_states)
    k = len(symbols)
    delta = [[rng.randrange(n) for _ in range(k)] for _ in range(n)]
    p = p_buchi if p_buchi is not None else rng.choice([0.15, 0.3, 0.5, 0.7])
    buchi = {(q, ci) for q in range(n) for ci in range(k) if rng.random() < p}
    return Dba(Alphabet(symbols), delta, buchi, 0)


def random_dba_exact(rng: random.Random, n: int, symbols: str = "abc",
                     p_buchi: float = 0.4) -> Dba:
    """Exactly n states: a spanning chain keeps everything reachable."""
    k = len(symbols)
    delta = [[-1] * k for _ in range(n)]
    for q in range(1, n):
        delta[q - 1][rng.randrange(k)] = q
    for q in range(n):
        for ci in range(k):
            if delta[q][ci] < 0:
                delta[q][ci] = rng.randrange(n)
    buchi = {(q, ci) for q in range(n) for ci in range(k) if rng.random() < p_buchi}
    return Dba(Alphabet(symbols), delta, buchi, 0)


def random_arena(rng: random.Random, symbols: tuple[str, ...], max_vertices: int = 4,
                 max_degree: int = 3, owners: tuple[int, ...] = (1, 2)) -> Arena:
    n = rng.randint(1, max_vertices)
    vertices = [(f"n{i}", rng.choice(owners)) for i in range(n)]
    edges = set()
    for i in range(n):
        for _ in range(rng.randint(1, max_degree)):
            edges.add((f"n{i}", rng.choice(symbols), f"n{rng.randrange(n)}"))
    return Arena.build(symbols, vertices, sorted(edges))


def words_upto(symbols: str | tuple[str, ...], max_len: int, min_len: int = 0):
    for length in range(min_len, max_len + 1):
        for w in itertools.product(tuple(symbols), repeat=length):
            yield w


def lassos_upto(symbols: str | tuple[str, ...], max_prefix: int, max_cycle: int):
    for prefix in words_upto(symbols, max_prefix):
        for cycle in words_upto(symbols, max_cycle, min_len=1):
            yield Lasso(prefix, cycle)


def brute_included(a: Dba, b: Dba, max_prefix: int, max_cycle: int) -> Lasso | None:
    """First lasso within the bounds accepted by `a` but not `b` (simulation
    only; independent of the complementation/product path)."""
    for lasso in lassos_upto(a.alphabet.symbols, max_prefix, max_cycle):
        if lasso_accepted(a, lasso) and not lasso_accepted(b, lasso):
            return lasso
    return None


def nba_accepts_lasso(nba, lasso: Lasso) -> bool:
    """Membership of an ultimately periodic word in an NBA, via intersection
    with a single-word automaton."""
    alphabet = nba.alphabet
    word = lasso.prefix + lasso.cycle
    n = len(word)
    dead = n
    delta = []
    for i in range(n):
        row = []
        for c in alphabet.symbols:
            if c == word[i]:
                row.append(i + 1 if i + 1 < n else len(lasso.prefix))
            else:
                row.append(dead)
        delta.append(row)
    delta.append([dead] * len(alphabet))
    word_dba = Dba(
        alphabet, delta,
        {(q, ci) for q in range(n) for ci in range(len(alphabet))},
        0,
    )
    return nba_empty(intersect_nba(dba_to_nba(word_dba), nba)) is not None


def prefix_independent_pool(rng: random.Random, count: int, symbols: str = "ab") -> list[Dba]:
    """Prefix-independent automata by construction: color-uniform acceptance
    (a plain Buchi condition over any structure), nested intersection
    counters, and redundant state duplications of either."""

    def buchi_uniform() -> Dba:
        n = rng.randint(1, 4)
        k = len(symbols)
        delta = [[rng.randrange(n) for _ in range(k)] for _ in range(n)]
        chosen = [ci for ci in range(k) if rng.random() < 0.5]
        buchi = {(q, ci) for q in range(n) for ci in chosen}
        return Dba(Alphabet(symbols), delta, buchi, 0)

    def intersection_counter() -> Dba:
        m = rng.randint(2, 3)
        k = len(symbols)
        sets = [frozenset(ci for ci in range(k) if rng.random() < 0.6) for _ in range(m)]
        delta = []
        buchi = set()
        for i in range(m):
            row = []
            for ci in range(k):
                if ci in sets[i]:
                    row.append((i + 1) % m)
                    if i == m - 1:
                        buchi.add((i, ci))
                else:
                    row.append(i)
            delta.append(row)
        return Dba(Alphabet(symbols), delta, buchi, 0)

    def duplicated(d: Dba) -> Dba:
        if d.n >= 4:
            return d
        q = rng.randrange(d.n)
        delta = [list(row) for row in d.delta] + [list(d.delta[q])]
        buchi = set(d.buchi) | {(d.n, ci) for (s, ci) in d.buchi if s == q}
        redirected = False
        for x in range(d.n):
            for ci in range(len(symbols)):
                if delta[x][ci] == q and rng.random() < 0.5:
                    delta[x][ci] = d.n
                    redirected = True
        if not redirected:
            return d
        return Dba(d.alphabet, delta, buchi, d.init)

    pool = []
    for _ in range(count):
        kind = rng.randrange(3)
        if kind == 0:
            d = buchi_uniform()
        elif kind == 1:
            d = intersection_counter()
        else:
            d = duplicated(intersection_counter() if rng.random() < 0.5 else buchi_uniform())
        assert d.n <= 4
        pool.append(d)
    return pool
