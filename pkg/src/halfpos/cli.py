"""Command-line front end.

Reports are tab-separated `field<TAB>value` lines on stdout (optionally also
written to a file); diagnostics go to stderr.  Exit codes: 0 success (or a
positive verdict), 1 negative verdict, 2 input or usage error, 3 exhausted
resource bounds.  `--figures DIR` renders matplotlib drawings of the objects
a command touches next to its report.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import fixtures
from .automata import Dba, format_dba, parse_dba, saturate
from .congruence import compute_prefix_order, recognizable_by_classifier
from .decider import decide, counterexample_arena
from .errors import BudgetError, HalfposError, SearchExhausted
from .games import (
    DEFAULT_BUDGET,
    exists_positional_optimal,
    format_arena,
    parse_arena,
    winning_vertices,
)
from .report import Fields, check_report, format_report, parse_report, verdict_fields
from .universal import (
    MATERIALIZE_CAP,
    build_universal_graph,
    check_completely_well_monotonic,
    compute_morphism,
    default_theta,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2
EXIT_EXHAUSTED = 3


def _read_dba(path: str) -> Dba:
    return parse_dba(Path(path).read_text())


def _emit(fields: Fields, report_path: str | None) -> None:
    text = format_report(fields)
    sys.stdout.write(text)
    if report_path:
        Path(report_path).write_text(text)


def _figures_dir(args) -> Path | None:
    if getattr(args, "figures", None):
        d = Path(args.figures)
        d.mkdir(parents=True, exist_ok=True)
        return d
    return None


def cmd_decide(args, explain: bool = False) -> int:
    dba = _read_dba(args.automaton)
    verdict = decide(dba)
    fields: Fields = [
        ("command", "explain" if explain else "decide"),
        ("input", args.automaton),
    ]
    fields += verdict_fields(verdict, dba)
    if explain:
        sat = verdict.saturated or saturate(dba)
        order = compute_prefix_order(sat)
        fields.append(("detail.states", " ".join(sat.names)))
        fields.append(
            ("detail.saturated_accepting",
             " ".join(f"{sat.names[q]}:{sat.alphabet.symbols[ci]}" for q, ci in sorted(sat.buchi)))
        )
        for q in range(sat.n):
            row = " ".join(order.matrix[q][p].value for p in range(sat.n))
            fields.append((f"detail.order.{sat.names[q]}", row))
        fields.append(
            ("detail.classes",
             " | ".join(" ".join(sat.names[q] for q in members) for members in order.classes))
        )
        if order.class_order is not None:
            fields.append(
                ("detail.class_order",
                 " < ".join(sat.names[order.classes[cid][0]] for cid in order.class_order))
            )
    _emit(fields, args.report)
    figures = _figures_dir(args)
    if figures:
        from .render import draw_dba

        draw_dba(dba, figures / "automaton.png")
        if verdict.normalized is not None and verdict.normalized.n != dba.n:
            draw_dba(verdict.normalized, figures / "classifier.png", "classifier automaton")
    return EXIT_OK if verdict.half_positional else EXIT_NEGATIVE


def cmd_explain(args) -> int:
    return cmd_decide(args, explain=True)


def cmd_saturate(args) -> int:
    text = format_dba(saturate(_read_dba(args.automaton)))
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_classifier(args) -> int:
    outcome = recognizable_by_classifier(_read_dba(args.automaton))
    if outcome.recognizable:
        assert outcome.classifier_dba is not None
        text = format_dba(outcome.classifier_dba)
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    witness = outcome.equivalence.witness
    assert witness is not None
    alphabet = outcome.classifier.structure.alphabet
    sys.stderr.write(
        "language is not recognizable on its prefix-classifier; "
        f"distinguishing lasso: {witness.render(alphabet)} "
        f"(accepted by the {'input' if outcome.equivalence.accepted_by == 'left' else 'candidate'})\n"
    )
    return EXIT_NEGATIVE


def cmd_counterexample(args) -> int:
    dba = _read_dba(args.automaton)
    verdict = decide(dba)
    if verdict.half_positional:
        sys.stderr.write("the objective is half-positional; no counterexample arena exists\n")
        return EXIT_NEGATIVE
    try:
        result = counterexample_arena(
            dba, verdict, budget=args.budget, rng_seed=args.seed, random_tries=args.random_tries
        )
    except SearchExhausted as exc:
        sys.stderr.write(f"search exhausted: {exc}\n")
        return EXIT_EXHAUSTED
    arena_text = format_arena(result.arena)
    out = Path(args.output) if args.output else Path(args.automaton).with_suffix(".arena")
    out.write_text(arena_text)
    fields: Fields = [
        ("command", "counterexample"),
        ("input", args.automaton),
        ("failed", verdict.failed_condition or "-"),
        ("arena_file", str(out)),
        ("construction", result.construction_tag),
        ("claim", result.claim),
        ("oracle_verified", "true"),
    ]
    _emit(fields, args.report)
    figures = _figures_dir(args)
    if figures:
        from .render import draw_arena, draw_dba

        draw_dba(dba, figures / "automaton.png")
        draw_arena(result.arena, figures / "arena.png", winning_vertices(result.arena, dba))
    return EXIT_OK


def cmd_solve_game(args) -> int:
    arena = parse_arena(Path(args.arena).read_text())
    dba = _read_dba(args.automaton)
    region = winning_vertices(arena, dba)
    try:
        sigma = exists_positional_optimal(arena, dba, budget=args.budget)
    except BudgetError as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_EXHAUSTED
    fields: Fields = [
        ("command", "solve-game"),
        ("arena", args.arena),
        ("automaton", args.automaton),
        ("winning_region", " ".join(arena.names[v] for v in sorted(region))),
        ("positional_optimal", "yes" if sigma is not None else "no"),
    ]
    if sigma is not None:
        for vertex, move in sigma.describe(arena).items():
            fields.append((f"strategy.{vertex}", move))
    for start in args.start or []:
        v = arena.vertex_of(start)
        fields.append((f"winning.{start}", "true" if v in region else "false"))
    _emit(fields, args.report)
    figures = _figures_dir(args)
    if figures:
        from .render import draw_arena, draw_dba

        draw_arena(arena, figures / "arena.png", region)
        draw_dba(dba, figures / "automaton.png")
    return EXIT_OK


def _normalized_for_graphs(path: str):
    dba = _read_dba(path)
    verdict = decide(dba)
    if not verdict.half_positional or verdict.normalized is None:
        sys.stderr.write(
            "the objective is not half-positional; the monotone-graph hypotheses fail "
            f"(failed: {verdict.failed_condition})\n"
        )
        return None
    return verdict.normalized


def cmd_universal_graph(args) -> int:
    normalized = _normalized_for_graphs(args.automaton)
    if normalized is None:
        return EXIT_NEGATIVE
    theta = args.theta if args.theta else normalized.n
    order = compute_prefix_order(normalized)
    graph = build_universal_graph(normalized, order, theta)
    monotonic = check_completely_well_monotonic(graph)
    fields: Fields = [
        ("command", "universal-graph"),
        ("input", args.automaton),
        ("theta", str(theta)),
        ("vertices", str(graph.n_vertices)),
        ("completely_well_monotonic", "true" if monotonic else "false"),
    ]
    try:
        edges = graph.edge_list(args.cap)
    except BudgetError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_EXHAUSTED
    fields.append(("edges", str(len(edges))))
    _emit(fields, args.report)
    if args.edges_out:
        lines = [
            f"{graph.describe(src)} {graph.dba.alphabet.symbols[ci]} {graph.describe(dst)}"
            for (src, ci, dst) in edges
        ]
        Path(args.edges_out).write_text("\n".join(lines) + "\n")
    if args.dot:
        Path(args.dot).write_text(graph.to_dot(args.cap))
    figures = _figures_dir(args)
    if figures:
        from .render import draw_universal_graph

        draw_universal_graph(graph, figures / "universal_graph.png")
    return EXIT_OK


def cmd_morphism(args) -> int:
    normalized = _normalized_for_graphs(args.automaton)
    if normalized is None:
        return EXIT_NEGATIVE
    source = parse_arena(Path(args.graph).read_text())
    order = compute_prefix_order(normalized)
    theta = args.theta if args.theta else default_theta(normalized, source)
    try:
        outcome = compute_morphism(source, normalized, order, theta)
    except BudgetError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_EXHAUSTED
    if outcome.morphism is None:
        sys.stderr.write(f"morphism verification failed: {outcome.diagnostic}\n")
        return EXIT_ERROR
    fields: Fields = [
        ("command", "morphism"),
        ("graph", args.graph),
        ("automaton", args.automaton),
        ("theta", str(theta)),
        ("stabilization", str(outcome.stabilization)),
    ]
    for name in source.names:
        target = outcome.morphism.assignment[name]
        fields.append(
            (f"phi.{name}", "top" if target == "top" else f"{target[0]},{target[1]}")
        )
    _emit(fields, args.report)
    figures = _figures_dir(args)
    if figures:
        from .render import draw_morphism

        draw_morphism(source, outcome.morphism, figures / "morphism.png")
    return EXIT_OK


def cmd_check(args) -> int:
    path = Path(args.report_file)
    fields = parse_report(path.read_text())
    base = Path(args.base) if args.base else path.parent
    problems = check_report(fields, base)
    if problems:
        for p in problems:
            sys.stderr.write(f"check failed: {p}\n")
        return EXIT_NEGATIVE
    sys.stdout.write("all witnesses replayed\n")
    return EXIT_OK


def cmd_fixtures(args) -> int:
    written = fixtures.write_all(args.out)
    for path in written:
        sys.stdout.write(f"{path}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halfpos",
        description="Decide half-positionality of objectives given as deterministic "
        "Buchi automata, with machine-checkable evidence either way.",
    )
    parser.add_argument(
        "--fixtures", metavar="DIR", default=None,
        help="regenerate the bundled example automata and arenas into DIR and exit",
    )
    sub = parser.add_subparsers(dest="command")

    def common(p, report=True):
        if report:
            p.add_argument("--report", metavar="FILE", default=None,
                           help="also write the report to FILE")
            p.add_argument("--figures", metavar="DIR", default=None,
                           help="render matplotlib figures into DIR")

    p = sub.add_parser("decide", help="decide half-positionality")
    p.add_argument("automaton")
    common(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("explain", help="decide, with per-stage details")
    p.add_argument("automaton")
    common(p)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("saturate", help="print the saturated automaton")
    p.add_argument("automaton")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_saturate)

    p = sub.add_parser("classifier", help="print the classifier automaton when it recognizes the language")
    p.add_argument("automaton")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_classifier)

    p = sub.add_parser("counterexample", help="emit a verified arena without positional optimal strategies")
    p.add_argument("automaton")
    p.add_argument("-o", "--output", default=None, help="arena file to write")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random-tries", type=int, default=3000)
    common(p)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("solve-game", help="winning region and positional-optimality of an arena")
    p.add_argument("arena")
    p.add_argument("automaton")
    p.add_argument("--start", action="append", default=None, metavar="VERTEX")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common(p)
    p.set_defaults(func=cmd_solve_game)

    p = sub.add_parser("universal-graph", help="build and check the ordered monotone graph")
    p.add_argument("automaton")
    p.add_argument("--theta", type=int, default=None)
    p.add_argument("--cap", type=int, default=MATERIALIZE_CAP)
    p.add_argument("--edges-out", default=None)
    p.add_argument("--dot", default=None)
    common(p)
    p.set_defaults(func=cmd_universal_graph)

    p = sub.add_parser("morphism", help="map a finite graph into the monotone graph")
    p.add_argument("graph")
    p.add_argument("automaton")
    p.add_argument("--theta", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_morphism)

    p = sub.add_parser("check", help="replay every witness in a report")
    p.add_argument("report_file")
    p.add_argument("--base", default=None, help="directory input paths are relative to")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fixtures", help="write the bundled example files")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fixtures)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.fixtures:
        return cmd_fixtures(argparse.Namespace(out=args.fixtures))
    if not getattr(args, "command", None):
        parser.print_help(sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except BudgetError as exc:
        sys.stderr.write(f"resource bound exceeded: {exc}\n")
        return EXIT_EXHAUSTED
    except HalfposError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
