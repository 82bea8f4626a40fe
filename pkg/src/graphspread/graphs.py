"""Undirected simple graphs: named generators, edge-list I/O, hop metric, diffusion.

Vertices are always 0-based integers. Every constructor validates that the
graph is simple and connected; all named generators use a fixed, documented
vertex numbering so that greedy sequences are reproducible.
"""

from __future__ import annotations

import itertools
import os

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .errors import (
    DisconnectedError,
    DuplicateEdgeError,
    EdgeListError,
    InputError,
    SelfLoopError,
    UnknownGraphError,
)


class Metric:
    """All-pairs hop distances of a connected graph."""

    def __init__(self, dist: np.ndarray):
        self.dist = dist
        self.diameter = int(dist.max())

    def __repr__(self):
        return f"Metric(n={self.dist.shape[0]}, diameter={self.diameter})"


class Graph:
    """Connected, simple, undirected graph.

    Immutable after construction; the metric and the sparse adjacency matrix
    are computed lazily and cached, so instances are cheap to share read-only
    across parallel workers.
    """

    def __init__(self, n: int, edges, name: str = ""):
        if n < 2:
            raise InputError(f"graph needs at least 2 vertices, got n={n}")
        seen: set[tuple[int, int]] = set()
        norm: list[tuple[int, int]] = []
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DuplicateEdgeError(f"duplicate edge ({key[0]},{key[1]})")
            seen.add(key)
            norm.append(key)
        norm.sort()
        self.n = n
        self.name = name or f"graph({n}v,{len(norm)}e)"
        self.edges: tuple[tuple[int, int], ...] = tuple(norm)
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in norm:
            nbrs[u].append(v)
            nbrs[v].append(u)
        self.neighbors: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in nbrs)
        self.degrees = np.array([len(a) for a in self.neighbors], dtype=np.int64)
        self._metric: Metric | None = None
        self._cache: dict = {}
        if self.degrees.min(initial=0) < 1:
            raise DisconnectedError("graph has an isolated vertex")
        ncomp, _ = csgraph.connected_components(self.adjacency_matrix(), directed=False)
        if ncomp != 1:
            raise DisconnectedError(f"graph has {ncomp} connected components")
        self.regular = bool(self.degrees.min() == self.degrees.max())

    def __repr__(self):
        return f"Graph({self.name!r}, n={self.n}, m={len(self.edges)})"

    def adjacency_matrix(self) -> sp.csr_matrix:
        """0/1 adjacency matrix in CSR form (cached)."""
        adj = self._cache.get("adj")
        if adj is None:
            m = len(self.edges)
            rows = np.empty(2 * m, dtype=np.int64)
            cols = np.empty(2 * m, dtype=np.int64)
            for e, (u, v) in enumerate(self.edges):
                rows[2 * e], cols[2 * e] = u, v
                rows[2 * e + 1], cols[2 * e + 1] = v, u
            adj = sp.csr_matrix(
                (np.ones(2 * m), (rows, cols)), shape=(self.n, self.n)
            )
            self._cache["adj"] = adj
        return adj

    def metric(self) -> Metric:
        """BFS-exact hop distances, cached on the graph."""
        if self._metric is None:
            d = csgraph.shortest_path(
                self.adjacency_matrix(), method="D", unweighted=True
            )
            self._metric = Metric(d.astype(np.int64))
        return self._metric

    @property
    def diameter(self) -> int:
        return self.metric().diameter

    def to_edge_list(self) -> str:
        """Serialize to the edge-list text format accepted by from_edge_list."""
        lines = [f"# {self.name}", f"n={self.n}"]
        lines += [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


def shortest_paths(g: Graph) -> Metric:
    """Hop-distance metric of a connected graph (cached on the graph)."""
    return g.metric()


def diffuse(g: Graph, v: np.ndarray) -> np.ndarray:
    """One random-walk step: each vertex splits its value equally among neighbors.

    Returns the vector A D^{-1} v; the total sum is preserved up to round-off.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (g.n,):
        raise InputError(f"vertex function has shape {v.shape}, expected ({g.n},)")
    return g.adjacency_matrix() @ (v / g.degrees)


def from_edge_list(text: str, name: str = "") -> Graph:
    """Parse an edge-list document into a validated Graph.

    Format: one edge "u v" per line; blank lines and lines starting with '#'
    are ignored; an optional header line "n=<count>" pins the vertex count
    (otherwise it is inferred as 1 + the largest index seen).
    """
    n_header: int | None = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("n="):
            if n_header is not None:
                raise EdgeListError("repeated n= header", lineno)
            try:
                n_header = int(line[2:])
            except ValueError:
                raise EdgeListError(f"bad vertex count {line[2:]!r}", lineno) from None
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(f"non-integer vertex in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise EdgeListError(f"negative vertex index in {line!r}", lineno)
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(f"duplicate edge ({key[0]},{key[1]})", lineno)
        seen.add(key)
        edges.append((u, v))
    if not edges:
        raise EdgeListError("no edges found")
    n = n_header if n_header is not None else 1 + max(max(u, v) for u, v in edges)
    return Graph(n, edges, name=name or f"edgelist({n}v,{len(edges)}e)")


# ---------------------------------------------------------------------------
# Named generators
# ---------------------------------------------------------------------------

def _cycle(n: int) -> Graph:
    if n < 3:
        raise InputError(f"cycle needs n >= 3, got {n}")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)], name=f"cycle({n})")


def _path(n: int) -> Graph:
    if n < 2:
        raise InputError(f"path needs n >= 2, got {n}")
    return Graph(n, [(i, i + 1) for i in range(n - 1)], name=f"path({n})")


def _complete(n: int) -> Graph:
    if n < 2:
        raise InputError(f"complete needs n >= 2, got {n}")
    return Graph(n, itertools.combinations(range(n), 2), name=f"complete({n})")


def _torus_grid(m: int, n: int) -> Graph:
    # Cartesian product of two cycles; vertex (r, c) gets row-major index r*n + c.
    if m < 3 or n < 3:
        raise InputError(f"torus_grid needs m, n >= 3, got ({m},{n})")
    edges = []
    for r in range(m):
        for c in range(n):
            i = r * n + c
            edges.append((i, r * n + (c + 1) % n))
            edges.append((i, ((r + 1) % m) * n + c))
    return Graph(m * n, edges, name=f"torus_grid({m},{n})")


def _frucht() -> Graph:
    # 3-regular, 12 vertices, trivial automorphism group. Numbering: outer
    # 7-cycle 0..6, inner vertices 7..11 attached as below.
    edges = [(i, (i + 1) % 7) for i in range(7)]
    edges += [(0, 7), (1, 7), (2, 8), (3, 9), (4, 9), (5, 10),
              (6, 10), (7, 11), (8, 11), (8, 9), (10, 11)]
    return Graph(12, edges, name="frucht")


def _truncated_tetrahedral() -> Graph:
    # Skeleton of the truncated tetrahedron: 3-regular, vertex-transitive,
    # 12 vertices. Numbering: Hamiltonian path 0..11 plus seven chords.
    edges = [(i, i + 1) for i in range(11)]
    edges += [(0, 2), (0, 9), (1, 6), (3, 11), (4, 11), (5, 7), (8, 10)]
    return Graph(12, edges, name="truncated_tetrahedral")


def _nauru() -> Graph:
    # Generalized Petersen graph GP(12, 5): outer ring 0..11, inner vertices
    # 12..23 with step-5 chords, spokes i -- 12+i.
    edges = [(i, (i + 1) % 12) for i in range(12)]
    edges += [(i, 12 + i) for i in range(12)]
    edges += [(12 + i, 12 + (i + 5) % 12) for i in range(12)]
    return Graph(24, edges, name="nauru")


def _menger_keep(c: tuple[int, int, int]) -> bool:
    # A subcube of a 3x3x3 subdivision survives iff at most one coordinate is 1.
    return sum(1 for t in c if t == 1) <= 1


def _menger2() -> Graph:
    # Face-adjacency graph of the 400 subcubes surviving two rounds of the
    # Menger drilling rule. Cube coordinates live in {0..8}^3 (side 1/9);
    # vertices are numbered lexicographically by (x, y, z).
    cubes = [
        c
        for c in itertools.product(range(9), repeat=3)
        if _menger_keep(tuple(t // 3 for t in c)) and _menger_keep(tuple(t % 3 for t in c))
    ]
    cubes.sort()
    index = {c: i for i, c in enumerate(cubes)}
    edges = []
    for c, i in index.items():
        for axis in range(3):
            nb = list(c)
            nb[axis] += 1
            j = index.get(tuple(nb))
            if j is not None:
                edges.append((i, j))
    return Graph(len(cubes), edges, name="menger2")


_GENERATORS: dict[str, tuple] = {
    "cycle": (_cycle, 1),
    "path": (_path, 1),
    "complete": (_complete, 1),
    "torus_grid": (_torus_grid, 2),
    "frucht": (_frucht, 0),
    "truncated_tetrahedral": (_truncated_tetrahedral, 0),
    "nauru": (_nauru, 0),
    "menger2": (_menger2, 0),
}

NAMED_GRAPHS = tuple(sorted(_GENERATORS) + ["faulkner_younger"])


def generate_named(name: str, params=()) -> Graph:
    """Build a named graph with its documented deterministic vertex numbering."""
    if name == "faulkner_younger":
        raise InputError(
            "faulkner_younger has no bundled adjacency list; supply the 44-vertex "
            "edge list as a file and load it with from_edge_list"
        )
    try:
        builder, arity = _GENERATORS[name]
    except KeyError:
        raise UnknownGraphError(
            f"unknown graph {name!r}; known: {', '.join(NAMED_GRAPHS)}"
        ) from None
    params = tuple(int(p) for p in params)
    if len(params) != arity:
        raise InputError(f"{name} takes {arity} parameter(s), got {len(params)}")
    return builder(*params)


def parse_graph_spec(spec: str) -> Graph:
    """Resolve a CLI graph spec: 'name', 'name:p1[,p2]', or an edge-list path."""
    base, _, argstr = spec.partition(":")
    if base in NAMED_GRAPHS:
        params = [p for p in argstr.split(",") if p] if argstr else []
        try:
            params = [int(p) for p in params]
        except ValueError:
            raise InputError(f"non-integer parameter in graph spec {spec!r}") from None
        return generate_named(base, params)
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
        stem = os.path.splitext(os.path.basename(spec))[0]
        return from_edge_list(text, name=stem)
    raise UnknownGraphError(
        f"graph spec {spec!r} is neither a known name ({', '.join(NAMED_GRAPHS)}) "
        "nor an existing edge-list file"
    )
