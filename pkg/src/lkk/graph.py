"""Finite directed graphs with edge weights in a f.g. abelian group."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .group import Group, INTEGERS
from .intmat import IntMatrix
from .laurent import LaurentMatrix, ring_element, ring_zero


class GraphFormatError(ValueError):
    """Raised when a graph file cannot be parsed into a graph at all."""


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str
    weight: tuple[int, ...]


@dataclass(frozen=True)
class WeightedGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    group: Group = field(default=INTEGERS)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))

    @classmethod
    def from_adjacency(cls, a: Sequence[Sequence[int]], names: Sequence[str] | None = None) -> "WeightedGraph":
        """Standard Z-grading (every edge has weight 1); ``a[i][j]`` edges i -> j."""
        n = len(a)
        names = list(names) if names is not None else [f"v{i}" for i in range(n)]
        edges = []
        for i in range(n):
            for j in range(n):
                for k in range(a[i][j]):
                    edges.append(Edge(f"e{i}_{j}_{k}", names[i], names[j], (1,)))
        return cls(tuple(names), tuple(edges), INTEGERS)

    # -- derived data -----------------------------------------------------

    def out_degree(self) -> dict[str, int]:
        deg = {v: 0 for v in self.vertices}
        for e in self.edges:
            if e.src in deg:
                deg[e.src] += 1
        return deg

    def regular_vertices(self) -> list[str]:
        """Vertices emitting at least one edge, in vertex order."""
        deg = self.out_degree()
        return [v for v in self.vertices if deg[v] > 0]

    def sinks(self) -> list[str]:
        deg = self.out_degree()
        return [v for v in self.vertices if deg[v] == 0]

    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def adjacency_counts(self) -> IntMatrix:
        """``A_E``: rows are regular vertices, columns all vertices."""
        reg = self.regular_vertices()
        ri = {v: i for i, v in enumerate(reg)}
        ci = self.index()
        a = IntMatrix(len(reg), len(self.vertices))
        for e in self.edges:
            a.data[ri[e.src]][ci[e.dst]] += 1
        return a

    def square_adjacency(self) -> IntMatrix:
        """Edge-count matrix indexed by all vertices (sink rows are zero)."""
        ci = self.index()
        n = len(self.vertices)
        a = IntMatrix(n, n)
        for e in self.edges:
            a.data[ci[e.src]][ci[e.dst]] += 1
        return a

    def weighted_adjacency(self) -> LaurentMatrix:
        """``A_w``: entry (v, w) is the sum of the weights of the edges v -> w."""
        reg = self.regular_vertices()
        ri = {v: i for i, v in enumerate(reg)}
        ci = self.index()
        grp = self.group
        z = ring_zero(grp)
        data = [[z] * len(self.vertices) for _ in reg]
        for e in self.edges:
            i, j = ri[e.src], ci[e.dst]
            data[i][j] = data[i][j] + ring_element(grp, e.weight)
        return LaurentMatrix(grp, len(reg), len(self.vertices), data)

    def has_standard_grading(self) -> bool:
        return self.group.is_integers and all(e.weight == (1,) for e in self.edges)

    def relabel(self, order: Sequence[str]) -> "WeightedGraph":
        """Same graph with the vertex list permuted to ``order``."""
        if sorted(order) != sorted(self.vertices):
            raise ValueError("relabel order must be a permutation of the vertices")
        return WeightedGraph(tuple(order), self.edges, self.group)

    # -- serialisation ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "src": e.src, "dst": e.dst, "weight": list(e.weight)} for e in self.edges],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False)

    @classmethod
    def from_json(cls, obj) -> "WeightedGraph":
        if not isinstance(obj, dict):
            raise GraphFormatError("graph file must hold a JSON object")
        try:
            g = obj.get("group", {"free_rank": 1, "torsion": []})
            group = Group(int(g.get("free_rank", 1)), tuple(int(m) for m in g.get("torsion", [])))
            vertices = tuple(str(v) for v in obj["vertices"])
            edges = []
            for k, e in enumerate(obj.get("edges", [])):
                w = e.get("weight")
                if w is None:
                    w = group.generator()
                else:
                    w = tuple(int(x) for x in w)
                    if len(w) == group.ngens:
                        w = group.reduce(w)
                edges.append(Edge(str(e.get("id", f"e{k}")), str(e["src"]), str(e["dst"]), w))
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            raise GraphFormatError(f"malformed graph: {exc}") from exc
        return cls(vertices, tuple(edges), group)

    @classmethod
    def loads(cls, text: str) -> "WeightedGraph":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"invalid JSON: {exc}") from exc
        return cls.from_json(obj)

    @classmethod
    def load(cls, path) -> "WeightedGraph":
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())


def validate(g: WeightedGraph) -> list[str]:
    """Every well-formedness violation; empty iff ``g`` is valid."""
    out = list(g.group.violations())
    seen_v = set()
    for v in g.vertices:
        if v in seen_v:
            out.append(f"duplicate vertex id {v}")
        seen_v.add(v)
    seen_e = set()
    for e in g.edges:
        if e.id in seen_e:
            out.append(f"duplicate edge id {e.id}")
        seen_e.add(e.id)
        if e.src not in seen_v:
            out.append(f"edge {e.id}: unknown src {e.src}")
        if e.dst not in seen_v:
            out.append(f"edge {e.id}: unknown dst {e.dst}")
        if len(e.weight) != g.group.ngens:
            out.append(f"edge {e.id}: weight {list(e.weight)} does not match group {g.group}")
        elif tuple(e.weight) != g.group.reduce(e.weight):
            out.append(f"edge {e.id}: weight {list(e.weight)} not reduced")
    return out


def regular_vertices(g: WeightedGraph) -> list[str]:
    return g.regular_vertices()


def sinks(g: WeightedGraph) -> list[str]:
    return g.sinks()


def weighted_adjacency(g: WeightedGraph) -> LaurentMatrix:
    return g.weighted_adjacency()


def disjoint_union(g: WeightedGraph, h: WeightedGraph, tags=("a", "b")) -> WeightedGraph:
    if g.group != h.group:
        raise ValueError("disjoint union needs a common weight group")
    ta, tb = tags
    verts = tuple(f"{ta}.{v}" for v in g.vertices) + tuple(f"{tb}.{v}" for v in h.vertices)
    edges = tuple(Edge(f"{ta}.{e.id}", f"{ta}.{e.src}", f"{ta}.{e.dst}", e.weight) for e in g.edges)
    edges += tuple(Edge(f"{tb}.{e.id}", f"{tb}.{e.src}", f"{tb}.{e.dst}", e.weight) for e in h.edges)
    return WeightedGraph(verts, edges, g.group)


# Named small graphs used throughout the tests and docs.

def rose(n: int) -> WeightedGraph:
    """One vertex with ``n`` loops (R_n)."""
    return WeightedGraph.from_adjacency([[n]], ["v"])


def cycle(n: int) -> WeightedGraph:
    a = [[int(j == (i + 1) % n) for j in range(n)] for i in range(n)]
    return WeightedGraph.from_adjacency(a, [f"c{i}" for i in range(n)])
