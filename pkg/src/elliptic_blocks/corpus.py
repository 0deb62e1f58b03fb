"""The three reference blocks at p = 23 and the degenerate two-red example.

Fixtures are JSON files in ``data/``, frozen by SHA-256 so edits are deliberate.
G1 and G2 were drawn as open paths; the files hold the glued cycles. In G3
the vertex named 41 is the value-5 node of the B branch.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources
from math import gcd
from typing import Union

from .blocks import BuildingBlock, parse_block, validate_block
from .graph_core import first_betti
from .report import Report
from .torus_system import (
    EQUATION,
    DecoratedBipartiteGraph,
    analyze_branch,
    parse_decorated,
    validate_decorations,
)

PRIME = 23
BOUNDARY_VALUES = (1, 2)

_FIXTURES = {
    "G1": ("g1.json", "c3c7a91ac55e836f040c72c5bd71c1081ed23ba8764ccb8f8469487aa723f0bd",
           "11-cycle labeled by the powers of 2 mod 23"),
    "G2": ("g2.json", "2df0ea50175e1fcd3a174dde3e73407a79a4c534965ab298e93fc32d9c4ca5c3",
           "15-cycle with pendant vertices at the values 8, 9, 6"),
    "G3": ("g3.json", "63cade87b37c55fa0e531588d03effd2433cf986e7eb1c6604c393353a54d36d",
           "two degree-3 hubs joined by three spliced branches"),
    "special_pair": ("special_pair.json",
                     "2dc8b6adf2ad7e83394e1dd77a38255989aef51a8c5af200d182e358050d8aca",
                     "two reds (k_f, k_inf) = (2, 1) on one green k_l = 10, weights 5"),
}

EXPECTED = {"G1": (11, 1), "G2": (18, 1), "G3": (43, 2)}


class CorpusError(RuntimeError):
    pass


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    item: Union[BuildingBlock, DecoratedBipartiteGraph]
    note: str


def fixture_text(name: str, check: bool = True) -> str:
    filename, sha, _ = _FIXTURES[name]
    raw = resources.files(__package__).joinpath("data", filename).read_bytes()
    if check and hashlib.sha256(raw).hexdigest() != sha:
        raise CorpusError(f"fixture {filename} does not match its checksum")
    return raw.decode()


def load_corpus() -> list[CorpusEntry]:
    out = []
    for name, (_, _, note) in _FIXTURES.items():
        text = fixture_text(name)
        item = parse_decorated(text) if name == "special_pair" else parse_block(text, name)
        out.append(CorpusEntry(name, item, note))
    return out


def corpus_blocks() -> dict[str, BuildingBlock]:
    return {e.name: e.item for e in load_corpus() if isinstance(e.item, BuildingBlock)}


def special_pair() -> DecoratedBipartiteGraph:
    return next(e.item for e in load_corpus() if e.name == "special_pair")


def verify_blocks(blocks: dict[str, BuildingBlock], report: Report) -> None:
    for name, blk in blocks.items():
        rep = validate_block(blk)
        for c in rep.checks:
            info = {"witnesses": c.to_dict()["witnesses"]} if c.witnesses else {}
            report.add(f"{name}.{c.name}", c.passed, **info)
        report.add(f"{name}.prime", blk.p == PRIME, value=blk.p)
        report.add(f"{name}.boundary_values", (blk.a, blk.b) == BOUNDARY_VALUES,
                   value=[blk.a, blk.b])
        if name in EXPECTED:
            edges, betti = EXPECTED[name]
            report.add(f"{name}.edge_count", blk.edge_count == edges, value=blk.edge_count,
                       expected=edges)
            report.add(f"{name}.betti", first_betti(blk.graph) == betti,
                       value=first_betti(blk.graph), expected=betti)


def verify_corpus() -> Report:
    report = Report("appendix verify")
    entries = load_corpus()
    report.inputs_digest = "".join(_FIXTURES[e.name][1][:4] for e in entries)
    blocks = {e.name: e.item for e in entries if isinstance(e.item, BuildingBlock)}
    verify_blocks(blocks, report)
    e1, e2 = blocks["G1"].edge_count, blocks["G2"].edge_count
    report.add("G1_G2_edge_counts_coprime", gcd(e1, e2) == 1, value=[e1, e2])

    d = special_pair()
    bad = validate_decorations(d)
    report.add("special_pair.decorations", not bad,
               **({"witnesses": [str(v) for v in bad]} if bad else {}))
    if not bad:
        br = analyze_branch(d, {v: EQUATION for v in d.greens})
        report.add("special_pair.all_equation_infinite", not br.size.finite,
                   rank=br.rank, variables=br.n_variables, result=str(br.size))
    return report
