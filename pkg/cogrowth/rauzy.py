"""Phase 6: Rauzy graphs – line graphs, entropy regulator, edge deletion."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

import networkx as nx
import numpy as np

from cogrowth.config import DEFAULT_LIMITS, Limits
from cogrowth.langword import WordSource, cogrowth_word, factors
from cogrowth.models import (
    ErResult,
    LemmaEdgeResult,
    LemmaReport,
    ResourceLimitError,
    UsageError,
)


@dataclass(frozen=True)
class Edge:
    tail: str
    head: str
    label: str | None = None

    @property
    def key(self) -> str:
        return self.label if self.label is not None else f"{self.tail}>{self.head}"


@dataclass(frozen=True)
class Digraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        known = set(self.vertices)
        if len(known) != len(self.vertices):
            raise UsageError("duplicate vertex")
        keys = set()
        for e in self.edges:
            if e.tail not in known or e.head not in known:
                raise UsageError(f"edge {e.key} has an unknown endpoint")
            if e.key in keys:
                raise UsageError(f"duplicate edge {e.key}")
            keys.add(e.key)

    def out_degree(self) -> dict[str, int]:
        deg = dict.fromkeys(self.vertices, 0)
        for e in self.edges:
            deg[e.tail] += 1
        return deg

    def without(self, key: str) -> "Digraph":
        return Digraph(self.vertices, tuple(e for e in self.edges if e.key != key))

    def induced(self, vertices: Iterable[str]) -> "Digraph":
        keep = set(vertices)
        return Digraph(
            tuple(v for v in self.vertices if v in keep),
            tuple(e for e in self.edges if e.tail in keep and e.head in keep),
        )


def digraph_from_edges(edges: Iterable[tuple[str, str, str | None]],
                       vertices: Iterable[str] = ()) -> Digraph:
    """Build a digraph with vertices and edges in sorted order."""
    es = [Edge(t, h, label) for t, h, label in edges]
    vs = set(vertices) | {e.tail for e in es} | {e.head for e in es}
    return Digraph(tuple(sorted(vs)), tuple(sorted(es, key=lambda e: e.key)))


def to_networkx(H: Digraph) -> nx.MultiDiGraph:
    G = nx.MultiDiGraph()
    G.add_nodes_from(H.vertices)
    for e in H.edges:
        G.add_edge(e.tail, e.head, key=e.key, label=e.label)
    return G


def rauzy_graph(source: WordSource, n: int, limits: Limits = DEFAULT_LIMITS) -> Digraph:
    if n < 1:
        raise UsageError("n must be at least 1")
    words = factors(source, n + 1, limits)
    return digraph_from_edges(((w[:-1], w[1:], w) for w in words), factors(source, n, limits))


def _merge(k1: str, k2: str) -> str:
    if len(k1) == len(k2) and k1[1:] == k2[:-1]:
        return k1 + k2[-1]
    return f"{k1}>{k2}"


def line_graph(H: Digraph) -> Digraph:
    outgoing: dict[str, list[Edge]] = {}
    for e in H.edges:
        outgoing.setdefault(e.tail, []).append(e)
    pairs = [
        (e1.key, e2.key, _merge(e1.key, e2.key))
        for e1 in H.edges
        for e2 in outgoing.get(e1.head, ())
    ]
    return digraph_from_edges(pairs, (e.key for e in H.edges))


def entropy_regulator(H: Digraph) -> ErResult:
    """Edges needed before every directed path meets a vertex of out-degree >= 2."""
    deg = H.out_degree()
    free = [v for v in H.vertices if deg[v] < 2]
    if not free:
        return ErResult(0)
    G = nx.DiGraph()
    G.add_nodes_from(free)
    keep = set(free)
    G.add_edges_from((e.tail, e.head) for e in H.edges if e.tail in keep and e.head in keep)
    if not nx.is_directed_acyclic_graph(G):
        return ErResult(None)
    return ErResult(nx.dag_longest_path_length(G) + 1)


def check_del_edge_lemma(H: Digraph, size_cap: int) -> LemmaReport:
    """Delete each edge of L^{3er}(H) and look for a strongly connected part with er <= 3er."""
    if not H.vertices or not nx.is_strongly_connected(to_networkx(H)):
        raise UsageError("graph must be strongly connected")
    base = entropy_regulator(H)
    if base.infinite:
        raise UsageError("entropy regulator is infinite")
    if base.value == 0:
        raise UsageError("entropy regulator is 0: every vertex branches")
    bound = 3 * base.value
    H1 = H
    for _ in range(bound):
        H1 = line_graph(H1)
        if len(H1.edges) > size_cap:
            raise ResourceLimitError("size_cap", size_cap)
    report = LemmaReport(base.value, bound, len(H1.vertices), len(H1.edges))
    for e in H1.edges:
        report.results.append(_check_edge(H1.without(e.key), e.key, bound))
    return report


def _check_edge(G: Digraph, key: str, bound: int) -> LemmaEdgeResult:
    components = list(nx.strongly_connected_components(to_networkx(G)))
    best: LemmaEdgeResult | None = None
    for comp in sorted(components, key=min):
        sub = G.induced(comp)
        if not sub.edges:
            continue
        er = entropy_regulator(sub)
        if not er.infinite and er.value <= bound:
            return LemmaEdgeResult(key, True, len(sub.vertices), er)
        if best is None:
            best = LemmaEdgeResult(key, False, len(sub.vertices), er)
    return best or LemmaEdgeResult(key, False)


def random_strong_digraph(rng: random.Random, max_vertices: int = 6, max_er: int = 2,
                          max_tries: int = 10_000) -> Digraph:
    """Strongly connected, out-degree <= 2, entropy regulator in 1..max_er."""
    names = "abcdefghijklmnopqrstuvwxyz"
    if not 2 <= max_vertices <= len(names):
        raise UsageError(f"max_vertices must lie in 2..{len(names)}")
    for _ in range(max_tries):
        vs = names[:rng.randint(2, max_vertices)]
        edges = []
        for v in vs:
            for h in rng.sample(vs, rng.randint(1, 2)):
                edges.append((v, h, v + h))
        H = digraph_from_edges(edges, vs)
        if not nx.is_strongly_connected(to_networkx(H)):
            continue
        er = entropy_regulator(H)
        if not er.infinite and 1 <= er.value <= max_er:
            return H
    raise ResourceLimitError("max_tries", max_tries)


def walk_count(H: Digraph, k: int) -> int:
    """Number of directed walks with k edges."""
    if k < 0:
        raise UsageError("k must be nonnegative")
    index = {v: i for i, v in enumerate(H.vertices)}
    A = np.zeros((len(index), len(index)), dtype=np.int64)
    for e in H.edges:
        A[index[e.tail], index[e.head]] += 1
    return int(np.linalg.matrix_power(A, k).sum())


def er_profile(source: WordSource, n_max: int,
               limits: Limits = DEFAULT_LIMITS) -> list[tuple[int, ErResult, int, int]]:
    """Rows (n, er(R_n), O(n), 2^O(n))."""
    cogrowth = cogrowth_word(source, n_max, limits)
    rows = []
    for n in range(1, n_max + 1):
        er = entropy_regulator(rauzy_graph(source, n, limits))
        rows.append((n, er, cogrowth[n - 1], 2 ** cogrowth[n - 1]))
    return rows


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(H: Digraph, name: str = "H") -> str:
    lines = [f"digraph {_quote(name)} {{"]
    lines += [f"  {_quote(v)};" for v in H.vertices]
    for e in H.edges:
        attr = f" [label={_quote(e.label)}]" if e.label is not None else ""
        lines.append(f"  {_quote(e.tail)} -> {_quote(e.head)}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"
