"""Finite leafless multigraphs carrying Jacobi parameters.

A graph is a connected multigraph without self-loops in which every vertex
has degree at least two.  Jacobi parameters attach a positive weight ``a``
to every edge and a real potential ``b`` to every vertex; together they
define a symmetric operator with ``b`` on the diagonal and ``a`` summed
over parallel edges off the diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np


class GraphError(Exception):
    """Base class for graph input problems."""


class GraphParseError(GraphError):
    """Malformed graph file; carries the offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class GraphValidationError(GraphError):
    """Structurally invalid graph or parameters; names the violated rule."""


@dataclass(frozen=True)
class FiniteGraph:
    """Connected leafless multigraph with string vertex and edge ids.

    ``vertices`` is sorted lexicographically (this fixes the matrix index
    order everywhere) and ``edges`` is sorted by edge id.  Parallel edges
    are distinct entries with distinct ids; self-loops are not allowed.
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]  # (edge id, u, v)

    def __post_init__(self):
        # normalize ordering so graphs compare equal regardless of how they
        # were constructed (parser, builders, literal tuples)
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))

    @property
    def p(self) -> int:
        return len(self.vertices)

    @property
    def q(self) -> int:
        return len(self.edges)

    def index(self, vertex: str) -> int:
        return self._vindex[vertex]

    @property
    def _vindex(self) -> dict[str, int]:
        idx = self.__dict__.get("_vindex_cache")
        if idx is None:
            idx = {v: i for i, v in enumerate(self.vertices)}
            object.__setattr__(self, "_vindex_cache", idx)
        return idx

    def degree(self, vertex: str) -> int:
        return sum(1 for _, u, v in self.edges if vertex in (u, v))


@dataclass(frozen=True)
class JacobiParams:
    """Edge weights ``a`` (strictly positive) and vertex potentials ``b``."""

    a: Mapping[str, float]
    b: Mapping[str, float]

    def __eq__(self, other):
        if not isinstance(other, JacobiParams):
            return NotImplemented
        return dict(self.a) == dict(other.a) and dict(self.b) == dict(other.b)


@dataclass(frozen=True)
class Bipartition:
    """2-coloring of the vertices, or ``None`` when no 2-coloring exists."""

    coloring: Mapping[str, int] | None

    @property
    def is_bipartite(self) -> bool:
        return self.coloring is not None

    def sign(self, vertex: str) -> int:
        """+1 on color-1 vertices, -1 on color-2 vertices."""
        if self.coloring is None:
            raise GraphValidationError("graph is not bipartite")
        return 1 if self.coloring[vertex] == 1 else -1

    def sign_vector(self, graph: FiniteGraph) -> np.ndarray:
        return np.array([self.sign(v) for v in graph.vertices], dtype=float)


@dataclass(frozen=True)
class IndexedGraph:
    """Array view of a graph used by the numerical modules.

    ``eu``/``ev`` hold endpoint indices per edge; the incidence lists are in
    CSR layout (``inc_ptr``, ``inc_edge``, ``inc_other``) with each vertex's
    incident edges sorted by edge position.  ``tail``/``head`` describe the
    two directed copies of each edge: directed edge ``2k`` is ``eu->ev`` of
    undirected edge ``k`` and ``2k+1`` is its reverse (so ``e ^ 1`` is the
    reversal).
    """

    graph: FiniteGraph
    a: np.ndarray
    b: np.ndarray
    eu: np.ndarray
    ev: np.ndarray
    inc_ptr: np.ndarray
    inc_edge: np.ndarray
    inc_other: np.ndarray
    tail: np.ndarray
    head: np.ndarray
    a2_dir: np.ndarray

    @property
    def p(self) -> int:
        return self.graph.p

    @property
    def q(self) -> int:
        return self.graph.q

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.inc_ptr)


def validate(graph: FiniteGraph, params: JacobiParams | None = None) -> None:
    """Check the structural invariants, raising GraphValidationError.

    Rules: no self-loops, every vertex has degree >= 2, the graph is
    connected, every edge has a > 0 and every vertex has a b value.
    """
    if graph.p < 1 or graph.q < 1:
        raise GraphValidationError("graph must have at least one vertex and one edge")
    vset = set(graph.vertices)
    deg: dict[str, int] = {v: 0 for v in graph.vertices}
    for eid, u, v in graph.edges:
        if u == v:
            raise GraphValidationError(f"self-loop: edge {eid!r} joins {u!r} to itself")
        for end in (u, v):
            if end not in vset:
                raise GraphValidationError(f"edge {eid!r} references unknown vertex {end!r}")
        deg[u] += 1
        deg[v] += 1
    for v, d in deg.items():
        if d < 2:
            raise GraphValidationError(f"leafless violated: vertex {v!r} has degree {d}")
    # connectivity by BFS from the first vertex
    adj: dict[str, list[str]] = {v: [] for v in graph.vertices}
    for _, u, v in graph.edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {graph.vertices[0]}
    queue = [graph.vertices[0]]
    while queue:
        x = queue.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    if len(seen) != graph.p:
        missing = sorted(vset - seen)[0]
        raise GraphValidationError(f"disconnected: vertex {missing!r} unreachable from {graph.vertices[0]!r}")
    if params is not None:
        for eid, _, _ in graph.edges:
            if eid not in params.a:
                raise GraphValidationError(f"missing parameter: no a value for edge {eid!r}")
            if not params.a[eid] > 0:
                raise GraphValidationError(f"nonpositive a: edge {eid!r} has a={params.a[eid]}")
        for v in graph.vertices:
            if v not in params.b:
                raise GraphValidationError(f"missing parameter: no b value for vertex {v!r}")


def parse_graph(text: str) -> tuple[FiniteGraph, JacobiParams]:
    """Parse and validate the line-based graph file format.

    Lines are ``vertex <id> b=<float>`` or ``edge <id> <u> <v> a=<float>``;
    ``#`` starts a comment and declaration order is free.
    """
    b: dict[str, float] = {}
    a: dict[str, float] = {}
    edges: list[tuple[str, str, str]] = []
    edge_line: dict[str, int] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "vertex":
            if len(parts) != 3 or not parts[2].startswith("b="):
                raise GraphParseError(line_no, "expected 'vertex <id> b=<float>'")
            vid = parts[1]
            if vid in b:
                raise GraphParseError(line_no, f"duplicate vertex id {vid!r}")
            try:
                b[vid] = float(parts[2][2:])
            except ValueError:
                raise GraphParseError(line_no, f"bad b value {parts[2][2:]!r}") from None
        elif kind == "edge":
            if len(parts) != 5 or not parts[4].startswith("a="):
                raise GraphParseError(line_no, "expected 'edge <id> <u-id> <v-id> a=<float>'")
            eid = parts[1]
            if eid in a:
                raise GraphParseError(line_no, f"duplicate edge id {eid!r}")
            try:
                a[eid] = float(parts[4][2:])
            except ValueError:
                raise GraphParseError(line_no, f"bad a value {parts[4][2:]!r}") from None
            edges.append((eid, parts[2], parts[3]))
            edge_line[eid] = line_no
        else:
            raise GraphParseError(line_no, f"unknown declaration {kind!r}")
    graph = FiniteGraph(vertices=tuple(sorted(b)), edges=tuple(sorted(edges)))
    params = JacobiParams(a=a, b=b)
    validate(graph, params)
    return graph, params


def serialize_graph(graph: FiniteGraph, params: JacobiParams) -> str:
    """Canonical text form; parse(serialize(...)) reproduces the structure."""
    lines = [f"vertex {v} b={params.b[v]!r}" for v in graph.vertices]
    lines += [f"edge {eid} {u} {v} a={params.a[eid]!r}" for eid, u, v in graph.edges]
    return "\n".join(lines) + "\n"


def is_bipartite(graph: FiniteGraph) -> Bipartition:
    """BFS 2-coloring from the smallest vertex id (color 1 at the root)."""
    adj: dict[str, list[str]] = {v: [] for v in graph.vertices}
    for _, u, v in graph.edges:
        adj[u].append(v)
        adj[v].append(u)
    color: dict[str, int] = {graph.vertices[0]: 1}
    queue = [graph.vertices[0]]
    while queue:
        x = queue.pop(0)
        for y in sorted(adj[x]):
            if y not in color:
                color[y] = 3 - color[x]
                queue.append(y)
            elif color[y] == color[x]:
                return Bipartition(coloring=None)
    return Bipartition(coloring=color)


def assemble_jacobi(graph: FiniteGraph, params: JacobiParams) -> np.ndarray:
    """Dense symmetric matrix: b on the diagonal, parallel a values summed."""
    p = graph.p
    mat = np.zeros((p, p))
    for i, v in enumerate(graph.vertices):
        mat[i, i] = params.b[v]
    for eid, u, v in graph.edges:
        i, j = graph.index(u), graph.index(v)
        lo, hi = min(i, j), max(i, j)
        mat[lo, hi] += params.a[eid]
    lower = np.tril_indices(p, k=-1)
    mat[lower] = mat.T[lower]
    return mat


def negate_b(params: JacobiParams) -> JacobiParams:
    """Flip the sign of every potential; an involution."""
    return JacobiParams(a=dict(params.a), b={v: -x for v, x in params.b.items()})


def indexed(graph: FiniteGraph, params: JacobiParams) -> IndexedGraph:
    """Build the array view consumed by the cover and Green's function code."""
    p, q = graph.p, graph.q
    eu = np.empty(q, dtype=np.int64)
    ev = np.empty(q, dtype=np.int64)
    a = np.empty(q)
    for k, (eid, u, v) in enumerate(graph.edges):
        eu[k] = graph.index(u)
        ev[k] = graph.index(v)
        a[k] = params.a[eid]
    b = np.array([params.b[v] for v in graph.vertices])
    counts = np.bincount(np.concatenate([eu, ev]), minlength=p)
    inc_ptr = np.zeros(p + 1, dtype=np.int64)
    np.cumsum(counts, out=inc_ptr[1:])
    inc_edge = np.empty(2 * q, dtype=np.int64)
    inc_other = np.empty(2 * q, dtype=np.int64)
    cursor = inc_ptr[:-1].copy()
    for k in range(q):
        for here, there in ((eu[k], ev[k]), (ev[k], eu[k])):
            inc_edge[cursor[here]] = k
            inc_other[cursor[here]] = there
            cursor[here] += 1
    tail = np.empty(2 * q, dtype=np.int64)
    head = np.empty(2 * q, dtype=np.int64)
    tail[0::2], head[0::2] = eu, ev
    tail[1::2], head[1::2] = ev, eu
    a2_dir = np.repeat(a * a, 2)
    return IndexedGraph(
        graph=graph, a=a, b=b, eu=eu, ev=ev,
        inc_ptr=inc_ptr, inc_edge=inc_edge, inc_other=inc_other,
        tail=tail, head=head, a2_dir=a2_dir,
    )


def _const_params(graph: FiniteGraph, a: float = 1.0, b: float = 0.0) -> JacobiParams:
    return JacobiParams(a={eid: a for eid, _, _ in graph.edges}, b={v: b for v in graph.vertices})


def free_model(d: int) -> tuple[FiniteGraph, JacobiParams]:
    """Two vertices joined by d parallel unit edges, b = 0.

    The universal cover is the degree-d homogeneous tree with the free
    operator on it.
    """
    if d < 3:
        raise GraphValidationError("free model needs degree d >= 3")
    graph = FiniteGraph(
        vertices=("v0", "v1"),
        edges=tuple((f"e{k}", "v0", "v1") for k in range(d)),
    )
    return graph, _const_params(graph)


def alternating_model(b: float) -> tuple[FiniteGraph, JacobiParams]:
    """Two vertices, three parallel unit edges, potentials +b and -b.

    Covered by the degree-3 tree with the potential alternating in sign
    between neighboring sites.
    """
    graph = FiniteGraph(
        vertices=("v0", "v1"),
        edges=tuple((f"e{k}", "v0", "v1") for k in range(3)),
    )
    return graph, JacobiParams(a={f"e{k}": 1.0 for k in range(3)}, b={"v0": float(b), "v1": float(-b)})


def rg_model(r: int, g: int) -> tuple[FiniteGraph, JacobiParams]:
    """Complete bipartite graph on r red and g green vertices, a = 1, b = 0."""
    if not (r > g >= 2):
        raise GraphValidationError("rg model needs integers r > g >= 2")
    reds = [f"r{i}" for i in range(r)]
    greens = [f"g{j}" for j in range(g)]
    edges = []
    k = 0
    for red in reds:
        for green in greens:
            edges.append((f"e{k}", red, green))
            k += 1
    graph = FiniteGraph(vertices=tuple(sorted(reds + greens)), edges=tuple(edges))
    return graph, _const_params(graph)


def cycle_graph(n: int) -> tuple[FiniteGraph, JacobiParams]:
    verts = [f"v{i}" for i in range(n)]
    edges = tuple((f"e{i}", verts[i], verts[(i + 1) % n]) for i in range(n))
    graph = FiniteGraph(vertices=tuple(sorted(verts)), edges=edges)
    return graph, _const_params(graph)


def complete_graph(n: int) -> tuple[FiniteGraph, JacobiParams]:
    verts = [f"v{i}" for i in range(n)]
    edges = []
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            edges.append((f"e{k}", verts[i], verts[j]))
            k += 1
    graph = FiniteGraph(vertices=tuple(sorted(verts)), edges=tuple(edges))
    return graph, _const_params(graph)


def from_edge_list(pairs: Iterable[tuple[str, str]]) -> tuple[FiniteGraph, JacobiParams]:
    """Unit-parameter graph from (u, v) pairs; edge ids are e0, e1, ..."""
    edges = tuple((f"e{k}", u, v) for k, (u, v) in enumerate(pairs))
    verts = tuple(sorted({x for _, u, v in edges for x in (u, v)}))
    graph = FiniteGraph(vertices=verts, edges=edges)
    return graph, _const_params(graph)
