"""Matplotlib renderings of automata, arenas, and monotone graphs, written to
files next to the CLI's reports.  These drawings are documentation aids, not a
stability contract.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import FancyArrowPatch

from .automata import Dba
from .games import Arena, P1
from .universal import MonotoneGraph, Morphism


def _circle_layout(n: int, radius: float = 1.0) -> list[tuple[float, float]]:
    if n == 1:
        return [(0.0, 0.0)]
    return [
        (radius * math.cos(2 * math.pi * i / n - math.pi / 2),
         radius * math.sin(2 * math.pi * i / n - math.pi / 2))
        for i in range(n)
    ]


def _draw_edges(ax, pos, edges, labels, emphasized) -> None:
    """edges: list of (src index, dst index); labels/emphasized parallel."""
    seen: dict[tuple[int, int], int] = {}
    for (src, dst), label, strong in zip(edges, labels, emphasized):
        bend = seen.get((src, dst), 0)
        seen[(src, dst)] = bend + 1
        color = "crimson" if strong else "dimgray"
        width = 1.8 if strong else 1.1
        x1, y1 = pos[src]
        if src == dst:
            angle = math.atan2(y1, x1) if (x1, y1) != (0.0, 0.0) else math.pi / 2
            cx = x1 + 0.32 * math.cos(angle)
            cy = y1 + 0.32 * math.sin(angle)
            loop = plt.Circle((cx, cy), 0.16, fill=False, color=color, linewidth=width)
            ax.add_patch(loop)
            ax.annotate(label, (cx + 0.2 * math.cos(angle), cy + 0.2 * math.sin(angle)),
                        ha="center", va="center", fontsize=9, color=color)
            continue
        x2, y2 = pos[dst]
        rad = 0.18 + 0.16 * bend
        arrow = FancyArrowPatch(
            (x1, y1), (x2, y2),
            connectionstyle=f"arc3,rad={rad}",
            arrowstyle="-|>", mutation_scale=12,
            color=color, linewidth=width,
            shrinkA=14, shrinkB=14,
        )
        ax.add_patch(arrow)
        mx = (x1 + x2) / 2 - rad * (y2 - y1) * 0.9
        my = (y1 + y2) / 2 + rad * (x2 - x1) * 0.9
        ax.annotate(label, (mx, my), ha="center", va="center", fontsize=9, color=color)


def _finish(ax, pos, names, shapes, path: Path, title: str) -> None:
    for (x, y), name, shape in zip(pos, names, shapes):
        marker = {"circle": "o", "square": "s", "diamond": "D"}[shape]
        ax.plot([x], [y], marker=marker, markersize=26, markerfacecolor="white",
                markeredgecolor="black", zorder=3)
        ax.annotate(name, (x, y), ha="center", va="center", fontsize=8, zorder=4)
    ax.set_title(title, fontsize=10)
    ax.set_aspect("equal")
    ax.margins(0.25)
    ax.axis("off")
    path.parent.mkdir(parents=True, exist_ok=True)
    plt.savefig(path, dpi=150, bbox_inches="tight")
    plt.close()


def draw_dba(dba: Dba, path: Path, title: str | None = None) -> Path:
    fig, ax = plt.subplots(figsize=(5, 5))
    pos = _circle_layout(dba.n)
    edges, labels, strong = [], [], []
    for (q, ci, t) in dba.transitions():
        edges.append((q, t))
        mark = (q, ci) in dba.buchi
        labels.append(dba.alphabet.symbols[ci] + (" •" if mark else ""))
        strong.append(mark)
    _draw_edges(ax, pos, edges, labels, strong)
    names = [("→" + n) if q == dba.init else n for q, n in enumerate(dba.names)]
    _finish(ax, pos, names, ["diamond"] * dba.n, Path(path),
            title or "automaton (• marks accepting transitions)")
    return Path(path)


def draw_arena(arena: Arena, path: Path, winning: frozenset[int] | None = None,
               title: str | None = None) -> Path:
    fig, ax = plt.subplots(figsize=(5, 5))
    pos = _circle_layout(arena.n)
    edges, labels, strong = [], [], []
    for (src, ci, dst) in arena.edges:
        edges.append((src, dst))
        labels.append(arena.alphabet.symbols[ci])
        strong.append(False)
    _draw_edges(ax, pos, edges, labels, strong)
    names = []
    for v, name in enumerate(arena.names):
        tag = name
        if winning is not None and v in winning:
            tag += " ✓"
        names.append(tag)
    shapes = ["circle" if arena.owner[v] == P1 else "square" for v in range(arena.n)]
    _finish(ax, pos, names, shapes, Path(path),
            title or "arena (circles: P1, squares: P2)")
    return Path(path)


def draw_universal_graph(g: MonotoneGraph, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(max(6, g.n_vertices * 0.8), 4))
    pos = []
    for v in range(g.n_vertices):
        pair = g.pair(v)
        if pair is None:
            pos.append((g.dba.n * (g.theta + 0.6), 0.0))
        else:
            q, level = pair
            rank = g.rank_of[q]
            pos.append((rank * (g.theta + 0.6) + level, 0.0))
    edges, labels, strong = [], [], []
    for (src, ci, dst) in g.edge_list():
        edges.append((src, dst))
        labels.append(g.dba.alphabet.symbols[ci])
        strong.append(False)
    _draw_edges(ax, pos, edges, labels, strong)
    names = [g.describe(v) for v in range(g.n_vertices)]
    _finish(ax, pos, names, ["circle"] * g.n_vertices, Path(path),
            f"monotone graph, levels 0..{g.theta - 1} (vertices ordered left to right)")
    return Path(path)


def draw_morphism(source: Arena, morphism: Morphism, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 5))
    pos = _circle_layout(source.n)
    edges, labels, strong = [], [], []
    for (src, ci, dst) in source.edges:
        edges.append((src, dst))
        labels.append(source.alphabet.symbols[ci])
        strong.append(False)
    _draw_edges(ax, pos, edges, labels, strong)
    names = []
    for v, name in enumerate(source.names):
        target = morphism.assignment[name]
        tag = "top" if target == "top" else f"({target[0]},{target[1]})"
        names.append(f"{name}\n{tag}")
    _finish(ax, pos, names, ["circle"] * source.n, Path(path),
            "graph vertices labeled with their image")
    return Path(path)
