"""Figures written next to command reports (PNG via the Agg backend)."""
from __future__ import annotations

import os
from typing import Mapping

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import networkx as nx  # noqa: E402

from .blocks import BuildingBlock, ConstructionPlan, OpenBlock, plan  # noqa: E402
from .torus_system import Color, DecoratedBipartiteGraph  # noqa: E402

RED = "#d62728"
GREEN = "#2ca02c"
NEUTRAL = "#dddddd"


def _nx(graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(graph.vertices)
    h.add_edges_from(graph.edges)
    return h


def _layout(h: nx.Graph) -> dict:
    if nx.is_tree(h) or h.number_of_nodes() <= 2:
        return nx.kamada_kawai_layout(h)
    return nx.kamada_kawai_layout(h, pos=nx.circular_layout(sorted(h.nodes)))


def plot_block(blk: BuildingBlock | OpenBlock, path: str, title: str | None = None) -> str:
    """Draw the graph with its F_p values inside the nodes; boundary edges bold."""
    h = _nx(blk.graph)
    pos = _layout(h)
    fig, ax = plt.subplots(figsize=(7, 6))
    thick = [e for e in h.edges if tuple(sorted(e)) in {tuple(sorted(x)) for x in blk.graph.distinguished}]
    nx.draw_networkx_edges(h, pos, ax=ax, width=1.0)
    nx.draw_networkx_edges(h, pos, edgelist=thick, ax=ax, width=3.5)
    colors = [NEUTRAL if blk.graph.degree(v) < 3 else "#9ecae1" for v in h.nodes]
    nx.draw_networkx_nodes(h, pos, ax=ax, node_color=colors, edgecolors="black", node_size=420)
    nx.draw_networkx_labels(h, pos, labels={v: str(blk.labeling[v]) for v in h.nodes},
                            ax=ax, font_size=8)
    name = getattr(blk, "name", "") or getattr(getattr(blk, "source", None), "name", "")
    ax.set_title(title or f"{name}  p={blk.labeling.p}  |E|={blk.edge_count}  h1={blk.betti}")
    ax.set_axis_off()
    return _save(fig, path)


def plot_decorated(d: DecoratedBipartiteGraph, path: str, title: str = "") -> str:
    h = _nx(d.graph)
    pos = _layout(h)
    fig, ax = plt.subplots(figsize=(6, 5))
    nx.draw_networkx_edges(h, pos, ax=ax)
    nx.draw_networkx_edge_labels(h, pos, ax=ax, font_size=8,
                                 edge_labels={e: f"mu={d.graph.weight(*e)}" for e in h.edges})
    cols = [RED if d.color[v] == Color.RED else GREEN for v in h.nodes]
    nx.draw_networkx_nodes(h, pos, ax=ax, node_color=cols, edgecolors="black", node_size=380)
    labels = {}
    for v in h.nodes:
        if d.color[v] == Color.RED:
            labels[v] = f"{v}\n({d.k_f[v]},{d.k_inf[v]})"
        else:
            labels[v] = f"{v}\nk_l={d.k_l[v]}"
    nx.draw_networkx_labels(h, pos, labels=labels, ax=ax, font_size=7)
    ax.set_title(title)
    ax.set_axis_off()
    return _save(fig, path)


def plot_reachability(blocks: Mapping[str, BuildingBlock], g_max: int, d_max: int, path: str,
                      marked: ConstructionPlan | None = None) -> str:
    """Which (edges, genus) pairs the block construction reaches, with the
    sufficient bound 43g + 170 drawn for reference."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for g in range(1, g_max + 1):
        ds = [d for d in range(1, d_max + 1) if plan(d, g, blocks) is not None]
        ax.scatter(ds, [g] * len(ds), s=2, color="black")
    gs = list(range(1, g_max + 1))
    ax.plot([43 * g + 170 for g in gs], gs, color=RED, lw=1, label="43g + 170")
    ax.plot([43 * (g - 1) + 170 for g in gs], gs, color=GREEN, lw=1, ls="--",
            label="43(g - 1) + 170")
    if marked is not None:
        ax.scatter([marked.degree], [marked.genus], s=40, color="blue", zorder=3, label="plan")
    ax.set_xlabel("edges d")
    ax.set_ylabel("first Betti number g")
    ax.set_xlim(0, d_max)
    ax.legend(loc="lower right", fontsize=8)
    return _save(fig, path)


def _save(fig, path: str) -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path
