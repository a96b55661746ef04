"""Bundled example automata, arenas, and graphs used by the tests and the
`fixtures` CLI command.  Names describe the recognized language or the shape
of the structure.
"""

from __future__ import annotations

from pathlib import Path

from .automata import Dba, format_dba
from .games import Arena, format_arena


def inf_a_or_reach_aa_unsaturated() -> Dba:
    """Recognizes Buchi({a}) | C*aaC^w with a deliberately small accepting set."""
    return Dba.build(
        "ab",
        {
            ("q_init", "a"): ("q_a", True),
            ("q_init", "b"): ("q_init", False),
            ("q_a", "a"): ("q_aa", False),
            ("q_a", "b"): ("q_init", False),
            ("q_aa", "a"): ("q_aa", True),
            ("q_aa", "b"): ("q_aa", True),
        },
        "q_init",
    )


def inf_a_or_reach_aa() -> Dba:
    """Recognizes Buchi({a}) | C*aaC^w; saturated; half-positional."""
    return Dba.build(
        "ab",
        {
            ("q_init", "a"): ("q_a", True),
            ("q_init", "b"): ("q_init", False),
            ("q_a", "a"): ("q_aa", True),
            ("q_a", "b"): ("q_init", True),
            ("q_aa", "a"): ("q_aa", True),
            ("q_aa", "b"): ("q_aa", True),
        },
        "q_init",
    )


def prefix_aa_or_bb() -> Dba:
    """Recognizes (aa+bb)C^w; its prefix preorder is not total."""
    return Dba.build(
        "ab",
        {
            ("q_init", "a"): ("q_a", False),
            ("q_init", "b"): ("q_b", False),
            ("q_a", "a"): ("q_win", False),
            ("q_a", "b"): ("q_lose", False),
            ("q_b", "a"): ("q_lose", False),
            ("q_b", "b"): ("q_win", False),
            ("q_win", "a"): ("q_win", True),
            ("q_win", "b"): ("q_win", True),
            ("q_lose", "a"): ("q_lose", False),
            ("q_lose", "b"): ("q_lose", False),
        },
        "q_init",
    )


def reach_aa() -> Dba:
    """Recognizes C*aaC^w (seeing a twice in a row); not progress-consistent."""
    return Dba.build(
        "ab",
        {
            ("q_init", "a"): ("q_a", False),
            ("q_init", "b"): ("q_init", False),
            ("q_a", "a"): ("q_aa", True),
            ("q_a", "b"): ("q_init", False),
            ("q_aa", "a"): ("q_aa", True),
            ("q_aa", "b"): ("q_aa", True),
        },
        "q_init",
    )


def inf_a_and_inf_b() -> Dba:
    """Recognizes Buchi({a}) & Buchi({b}); prefix-independent, not a plain
    Buchi condition, hence not half-positional."""
    return Dba.build(
        "ab",
        {
            ("q_1", "a"): ("q_1", False),
            ("q_1", "b"): ("q_2", True),
            ("q_2", "a"): ("q_1", True),
            ("q_2", "b"): ("q_2", False),
        },
        "q_1",
    )


def buchi_condition(symbols: str | tuple[str, ...], accepting: str | tuple[str, ...]) -> Dba:
    """One-state automaton for Buchi(F): infinitely many colors from F."""
    acc = set(accepting)
    return Dba.build(
        tuple(symbols),
        {("q", c): ("q", c in acc) for c in symbols},
        "q",
    )


def ladder_abc() -> Dba:
    """Three climbing states over {a,b,c}: a climbs, b descends (falling off the
    lowest rung is fatal), c idles; accepting only at the top on a."""
    return Dba.build(
        "abc",
        {
            ("q_1", "a"): ("q_2", False),
            ("q_1", "b"): ("q_0", False),
            ("q_1", "c"): ("q_1", False),
            ("q_2", "a"): ("q_3", False),
            ("q_2", "b"): ("q_1", False),
            ("q_2", "c"): ("q_2", False),
            ("q_3", "a"): ("q_3", True),
            ("q_3", "b"): ("q_2", False),
            ("q_3", "c"): ("q_3", False),
            ("q_0", "a"): ("q_0", False),
            ("q_0", "b"): ("q_0", False),
            ("q_0", "c"): ("q_0", False),
        },
        "q_1",
    )


def arena_fork_two_starts() -> Arena:
    """Two entry vertices funnel into one vertex carrying a and b self-loops."""
    return Arena.build(
        "ab",
        [("v1", 1), ("v2", 1), ("v3", 1)],
        [("v1", "a", "v3"), ("v2", "b", "v3"), ("v3", "a", "v3"), ("v3", "b", "v3")],
    )


def arena_cycle_choice() -> Arena:
    """One choice vertex offering the two-edge cycles ab and ba."""
    return Arena.build(
        "ab",
        [("v", 1), ("u_ab", 1), ("u_ba", 1)],
        [
            ("v", "a", "u_ab"),
            ("u_ab", "b", "v"),
            ("v", "b", "u_ba"),
            ("u_ba", "a", "v"),
        ],
    )


def arena_two_self_loops() -> Arena:
    """A single vertex with an a self-loop and a b self-loop."""
    return Arena.build("ab", [("v", 1)], [("v", "a", "v"), ("v", "b", "v")])


def graph_five_chain() -> Arena:
    """Five-vertex one-player graph used to exercise the morphism computation."""
    return Arena.build(
        "ab",
        [("v1", 1), ("v2", 1), ("v3", 1), ("v4", 1), ("v5", 1)],
        [
            ("v1", "b", "v2"),
            ("v2", "a", "v1"),
            ("v2", "b", "v3"),
            ("v3", "a", "v4"),
            ("v4", "b", "v3"),
            ("v4", "a", "v5"),
            ("v5", "b", "v5"),
        ],
    )


def graph_ac_cycle() -> Arena:
    """Two vertices on an a/c cycle; pairs with the ladder automaton."""
    return Arena.build(
        "abc",
        [("v1", 1), ("v2", 1)],
        [("v1", "a", "v2"), ("v2", "c", "v1")],
    )


AUTOMATA = {
    "inf_a_or_reach_aa_unsaturated": inf_a_or_reach_aa_unsaturated,
    "inf_a_or_reach_aa": inf_a_or_reach_aa,
    "prefix_aa_or_bb": prefix_aa_or_bb,
    "reach_aa": reach_aa,
    "inf_a_and_inf_b": inf_a_and_inf_b,
    "ladder_abc": ladder_abc,
}

ARENAS = {
    "arena_fork_two_starts": arena_fork_two_starts,
    "arena_cycle_choice": arena_cycle_choice,
    "arena_two_self_loops": arena_two_self_loops,
    "graph_five_chain": graph_five_chain,
    "graph_ac_cycle": graph_ac_cycle,
}


def write_all(directory: str | Path) -> list[Path]:
    """Regenerate every bundled automaton and arena file under `directory`."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, builder in AUTOMATA.items():
        path = directory / f"{name}.aut"
        path.write_text(format_dba(builder()))
        written.append(path)
    for name, builder in ARENAS.items():
        path = directory / f"{name}.arena"
        path.write_text(format_arena(builder()))
        written.append(path)
    return written
