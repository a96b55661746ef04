"""Tab-separated reports emitted by the CLI, and re-validation of the
witnesses they carry (the `check` subcommand).

A report is an ordered list of (field, value) pairs rendered one per line as
`field<TAB>value`.  Field names are stable; the schema is documented in
docs/format.md.  Every witness in a report can be replayed against the input
files it names.
"""

from __future__ import annotations

from pathlib import Path

from .automata import Dba, Lasso, is_safe, parse_dba, run_state
from .congruence import compute_prefix_order
from .decider import (
    BuchiSetEvidence,
    IncomparableEvidence,
    ProgressEvidence,
    RecognizabilityEvidence,
    Verdict,
    decide,
)
from .errors import InputError
from .games import (
    exists_positional_optimal,
    parse_arena,
    verify_no_positional_optimal,
    winning_vertices,
)
from .languages import dba_included, lasso_accepted
from .automata import residual

Fields = list[tuple[str, str]]


def format_report(fields: Fields) -> str:
    for key, value in fields:
        if "\t" in key or "\n" in key or "\n" in value or "\t" in value:
            raise InputError(f"report field {key!r} contains a separator")
    return "".join(f"{key}\t{value}\n" for key, value in fields)


def parse_report(text: str) -> Fields:
    fields: Fields = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        if "\t" not in raw:
            raise InputError(f"line {lineno}: expected 'field<TAB>value'")
        key, _, value = raw.partition("\t")
        fields.append((key, value))
    return fields


def get_field(fields: Fields, key: str) -> str:
    for k, v in fields:
        if k == key:
            return v
    raise InputError(f"report is missing field {key!r}")


def verdict_fields(verdict: Verdict, dba: Dba) -> Fields:
    alphabet = dba.alphabet
    fields: Fields = [
        ("half_positional", "true" if verdict.half_positional else "false"),
        ("failed", verdict.failed_condition or "-"),
    ]
    ev = verdict.evidence
    if isinstance(ev, IncomparableEvidence):
        fields += [
            ("witness.pair", f"{ev.pair[0]} {ev.pair[1]}"),
            ("witness.lasso.first", ev.lasso_first.render(alphabet)),
            ("witness.lasso.second", ev.lasso_second.render(alphabet)),
        ]
    elif isinstance(ev, RecognizabilityEvidence):
        fields += [
            ("witness.lasso", ev.witness.render(alphabet)),
            ("witness.accepted_by", ev.accepted_by),
            ("classifier_states", str(ev.candidate.n)),
        ]
    elif isinstance(ev, ProgressEvidence):
        fields += [
            ("witness.pair", f"{ev.pair[0]} {ev.pair[1]}"),
            ("witness.w", alphabet.format_word(ev.w)),
            ("witness.w1", alphabet.format_word(ev.w1)),
        ]
    elif isinstance(ev, BuchiSetEvidence):
        fields.append(("buchi_colors", " ".join(ev.colors)))
    if verdict.normalized is not None:
        fields.append(("normalized_states", str(verdict.normalized.n)))
    for stage, seconds in verdict.timings.items():
        fields.append((f"stage.{stage}.seconds", f"{seconds:.6f}"))
    return fields


# ---------------------------------------------------------------------------
# Witness re-validation


def check_report(fields: Fields, base: Path) -> list[str]:
    """Replay every witness in a parsed report; returns human-readable
    problems (empty when everything validates)."""
    command = get_field(fields, "command")
    if command in ("decide", "explain"):
        return _check_decide(fields, base)
    if command == "counterexample":
        return _check_counterexample(fields, base)
    if command == "solve-game":
        return _check_solve_game(fields, base)
    if command == "morphism":
        return _check_morphism(fields, base)
    if command == "universal-graph":
        return _check_universal_graph(fields, base)
    return [f"no validation defined for command {command!r}"]


def _load_dba(fields: Fields, base: Path, key: str = "input") -> Dba:
    path = Path(get_field(fields, key))
    if not path.is_absolute():
        path = base / path
    return parse_dba(path.read_text())


def _check_decide(fields: Fields, base: Path) -> list[str]:
    problems = []
    dba = _load_dba(fields, base)
    verdict = decide(dba)
    want = "true" if verdict.half_positional else "false"
    if get_field(fields, "half_positional") != want:
        problems.append("half_positional does not match a fresh decision")
    if get_field(fields, "failed") != (verdict.failed_condition or "-"):
        problems.append("failed condition does not match a fresh decision")

    failed = get_field(fields, "failed")
    alphabet = dba.alphabet
    if failed == "total_preorder":
        sat = verdict.saturated or dba
        first, second = get_field(fields, "witness.pair").split()
        l1 = Lasso.parse(alphabet, get_field(fields, "witness.lasso.first"))
        l2 = Lasso.parse(alphabet, get_field(fields, "witness.lasso.second"))
        q, q2 = sat.state_of(first), sat.state_of(second)
        if not (lasso_accepted(sat, l1, q) and not lasso_accepted(sat, l1, q2)):
            problems.append("first lasso does not separate the pair")
        if not (lasso_accepted(sat, l2, q2) and not lasso_accepted(sat, l2, q)):
            problems.append("second lasso does not separate the pair")
    elif failed == "classifier_recognizability":
        lasso = Lasso.parse(alphabet, get_field(fields, "witness.lasso"))
        side = get_field(fields, "witness.accepted_by")
        if lasso_accepted(dba, lasso) != (side == "input"):
            problems.append("classifier witness lasso does not replay on the input")
    elif failed == "progress_consistency":
        normalized = verdict.normalized
        if normalized is None:
            problems.append("fresh decision produced no normalized automaton")
        else:
            first, second = get_field(fields, "witness.pair").split()
            w = alphabet.word(get_field(fields, "witness.w"))
            w1 = alphabet.word(get_field(fields, "witness.w1"))
            q = normalized.state_of(first)
            q2 = normalized.state_of(second)
            if run_state(normalized, normalized.init, w1) != q:
                problems.append("witness.w1 does not reach the first state")
            if run_state(normalized, q, w) != q2:
                problems.append("witness.w does not move the first state to the second")
            if not (is_safe(normalized, q2, w) and run_state(normalized, q2, w) == q2):
                problems.append("witness.w is not a safe cycle on the second state")
            if not dba_included(residual(normalized, q), residual(normalized, q2)).holds:
                problems.append("first state is not below the second")
            if lasso_accepted(normalized, Lasso(w1, w)):
                problems.append("pumped witness lasso is unexpectedly accepted")
    return problems


def _check_counterexample(fields: Fields, base: Path) -> list[str]:
    problems = []
    dba = _load_dba(fields, base)
    arena_path = Path(get_field(fields, "arena_file"))
    if not arena_path.is_absolute():
        arena_path = base / arena_path
    arena = parse_arena(arena_path.read_text())
    if not verify_no_positional_optimal(arena, dba):
        problems.append("arena does not refute positional optimality under replay")
    return problems


def _check_solve_game(fields: Fields, base: Path) -> list[str]:
    problems = []
    dba = _load_dba(fields, base, key="automaton")
    arena_path = Path(get_field(fields, "arena"))
    if not arena_path.is_absolute():
        arena_path = base / arena_path
    arena = parse_arena(arena_path.read_text())
    region = winning_vertices(arena, dba)
    reported = set(get_field(fields, "winning_region").split())
    if reported != {arena.names[v] for v in region}:
        problems.append("winning region does not match a fresh solve")
    reported_opt = get_field(fields, "positional_optimal")
    fresh = exists_positional_optimal(arena, dba)
    if (fresh is not None) != (reported_opt == "yes"):
        problems.append("positional-optimal existence does not match a fresh solve")
    return problems


def _check_morphism(fields: Fields, base: Path) -> list[str]:
    from .universal import build_universal_graph

    problems = []
    dba = _load_dba(fields, base, key="automaton")
    graph_path = Path(get_field(fields, "graph"))
    if not graph_path.is_absolute():
        graph_path = base / graph_path
    source = parse_arena(graph_path.read_text())
    verdict = decide(dba)
    if not verdict.half_positional or verdict.normalized is None:
        return ["automaton is not half-positional; no morphism should exist"]
    normalized = verdict.normalized
    theta = int(get_field(fields, "theta"))
    order = compute_prefix_order(normalized)
    graph = build_universal_graph(normalized, order, theta)
    color_map = [normalized.alphabet.index_of(c) for c in source.alphabet.symbols]

    assigned: dict[int, int] = {}
    for key, value in fields:
        if not key.startswith("phi."):
            continue
        v = source.vertex_of(key[len("phi."):])
        if value == "top":
            assigned[v] = graph.top
        else:
            state_name, level = value.rsplit(",", 1)
            assigned[v] = graph.vertex(normalized.state_of(state_name), int(level))
    if len(assigned) != source.n:
        problems.append("report does not assign every graph vertex")
        return problems
    for (src, ci, dst) in source.edges:
        if not graph.has_edge(assigned[src], color_map[ci], assigned[dst]):
            problems.append(
                f"reported map breaks the edge {source.names[src]} -> {source.names[dst]}"
            )
    return problems


def _check_universal_graph(fields: Fields, base: Path) -> list[str]:
    from .universal import build_universal_graph, check_completely_well_monotonic

    dba = _load_dba(fields, base)
    verdict = decide(dba)
    if not verdict.half_positional or verdict.normalized is None:
        return ["automaton is not half-positional; the graph hypotheses fail"]
    theta = int(get_field(fields, "theta"))
    order = compute_prefix_order(verdict.normalized)
    graph = build_universal_graph(verdict.normalized, order, theta)
    problems = []
    if get_field(fields, "completely_well_monotonic") != (
        "true" if check_completely_well_monotonic(graph) else "false"
    ):
        problems.append("monotonicity flag does not match a fresh check")
    return problems
