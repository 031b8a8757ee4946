"""Finite connected loopless multigraphs and their homothetic refinements.

Vertices are arbitrary strings.  The vertex order given at construction is
canonical and fixes all matrix rows and coefficient positions, so results
that depend on indexing (Laplacians, enumeration order, inserted-vertex
names) are reproducible.  Edges are stored multiplicity-compressed.

All types are immutable after construction; derived data (adjacency,
degrees, BFS layers) is cached lazily on the instance and never mutates
the defining fields, so graphs can be shared read-only across workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    DisconnectedError,
    EmptyVertexSetError,
    InvalidInputError,
    LoopEdgeError,
    UnknownVertexError,
)

EdgeSpec = Sequence  # (u, v) or (u, v, multiplicity)

# Separator used when naming vertices inserted by refinement.  Chosen so the
# generated names read as "u:v:copy:position".
_REFINE_SEP = ":"


@dataclass(frozen=True)
class Multigraph:
    """A finite weightless connected multigraph without loop edges.

    ``vertices`` is the canonical vertex order; ``edges`` holds one record
    per unordered vertex pair that carries at least one edge, with its
    multiplicity.  Use :func:`build_graph` rather than the raw constructor;
    the constructor does not validate.
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, int], ...]

    def __repr__(self) -> str:
        return f"Multigraph({len(self.vertices)} vertices, {self.num_edges} edges)"

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.vertices)}

    @cached_property
    def num_edges(self) -> int:
        """Edge count with multiplicity."""
        return sum(m for _, _, m in self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex index, the (neighbor index, multiplicity) pairs."""
        adj: list[list[tuple[int, int]]] = [[] for _ in self.vertices]
        idx = self.index
        for u, v, m in self.edges:
            ui, vi = idx[u], idx[v]
            adj[ui].append((vi, m))
            adj[vi].append((ui, m))
        return tuple(tuple(a) for a in adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(sum(m for _, m in nbrs) for nbrs in self.adjacency)

    def degree(self, v: str) -> int:
        return self.degrees[self.index[v]]

    @cached_property
    def edge_list(self) -> tuple[tuple[str, str], ...]:
        """Edges expanded to one entry per parallel copy, in storage order."""
        out: list[tuple[str, str]] = []
        for u, v, m in self.edges:
            out.extend((u, v) for _ in range(m))
        return tuple(out)

    def edge_index(self, u: str, v: str, copy: int = 0) -> int:
        """Position of the ``copy``-th parallel edge between u and v in
        :attr:`edge_list`.  Accepts either endpoint order."""
        pos = 0
        for a, b, m in self.edges:
            if {a, b} == {u, v}:
                if not 0 <= copy < m:
                    raise InvalidInputError(
                        f"edge ({u},{v}) has multiplicity {m}, no copy {copy}"
                    )
                return pos + copy
            pos += m
        raise UnknownVertexError(f"no edge between {u!r} and {v!r}")

    def multiplicity(self, u: str, v: str) -> int:
        for a, b, m in self.edges:
            if {a, b} == {u, v}:
                return m
        return 0

    @cached_property
    def _bfs_cache(self) -> dict[int, tuple[int, ...]]:
        return {}

    def bfs_distances(self, root: int) -> tuple[int, ...]:
        """Hop distances from vertex index ``root`` (multiplicity ignored)."""
        cache = self._bfs_cache
        if root not in cache:
            dist = [-1] * len(self.vertices)
            dist[root] = 0
            frontier = [root]
            while frontier:
                nxt = []
                for v in frontier:
                    for w, _ in self.adjacency[v]:
                        if dist[w] < 0:
                            dist[w] = dist[v] + 1
                            nxt.append(w)
                frontier = nxt
            cache[root] = tuple(dist)
        return cache[root]


def build_graph(vertices: Iterable[str], edges: Iterable[EdgeSpec]) -> Multigraph:
    """Validate and construct a :class:`Multigraph`.

    ``edges`` entries are ``(u, v)`` or ``(u, v, multiplicity)``.  Parallel
    records for the same pair are merged by summing multiplicities.

    Raises :class:`EmptyVertexSetError`, :class:`UnknownVertexError`,
    :class:`LoopEdgeError`, :class:`DisconnectedError` or
    :class:`InvalidInputError` (bad multiplicity, duplicate vertex names).
    """
    verts = tuple(str(v) for v in vertices)
    if not verts:
        raise EmptyVertexSetError("a graph needs at least one vertex")
    if len(set(verts)) != len(verts):
        raise InvalidInputError("duplicate vertex names")
    known = set(verts)

    merged: dict[frozenset[str], tuple[str, str, int]] = {}
    for spec in edges:
        if len(spec) == 2:
            u, v = spec
            m = 1
        elif len(spec) == 3:
            u, v, m = spec
        else:
            raise InvalidInputError(f"edge spec {spec!r} is not (u, v[, mult])")
        u, v = str(u), str(v)
        if u not in known:
            raise UnknownVertexError(f"edge endpoint {u!r} is not a declared vertex")
        if v not in known:
            raise UnknownVertexError(f"edge endpoint {v!r} is not a declared vertex")
        if u == v:
            raise LoopEdgeError(f"loop edge at {u!r}")
        if not isinstance(m, int) or m < 1:
            raise InvalidInputError(f"edge ({u},{v}) multiplicity {m!r} must be >= 1")
        key = frozenset((u, v))
        if key in merged:
            a, b, prev = merged[key]
            merged[key] = (a, b, prev + m)
        else:
            merged[key] = (u, v, m)

    graph = Multigraph(verts, tuple(merged.values()))
    if len(verts) > 1:
        dist = graph.bfs_distances(0)
        if any(d < 0 for d in dist):
            missing = [verts[i] for i, d in enumerate(dist) if d < 0]
            raise DisconnectedError(f"vertices unreachable from {verts[0]!r}: {missing}")
    return graph


def genus(graph: Multigraph) -> int:
    """First Betti number g = 1 - |V| + |E|, edges counted with multiplicity."""
    return 1 - len(graph.vertices) + graph.num_edges


def laplacian(graph: Multigraph) -> list[list[int]]:
    """Combinatorial Laplacian: degree on the diagonal, minus multiplicity
    off it.  Rows follow the canonical vertex order."""
    n = len(graph.vertices)
    mat = [[0] * n for _ in range(n)]
    for i in range(n):
        mat[i][i] = graph.degrees[i]
        for j, m in graph.adjacency[i]:
            mat[i][j] -= m
    return mat


def _bareiss_determinant(mat: list[list[int]]) -> int:
    """Fraction-free exact determinant (Bareiss elimination)."""
    a = [row[:] for row in mat]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def kirchhoff_minor_determinant(graph: Multigraph, drop: int = 0) -> int:
    """Determinant of the Laplacian with row and column ``drop`` deleted.

    By the matrix-tree theorem this equals the spanning tree count for any
    choice of ``drop``.
    """
    full = laplacian(graph)
    minor = [
        [full[i][j] for j in range(len(full)) if j != drop]
        for i in range(len(full))
        if i != drop
    ]
    return _bareiss_determinant(minor)


def spanning_tree_count(graph: Multigraph) -> int:
    """Number of spanning trees, exact (matrix-tree / Kirchhoff)."""
    return kirchhoff_minor_determinant(graph, 0)


@dataclass(frozen=True)
class RefinementMap:
    """The vertex inclusion of a graph into its k-th homothetic refinement.

    ``vertex_embedding[i]`` is the target name of source vertex i (names are
    preserved, so this is the identity on names).  ``edge_chains`` holds, per
    expanded source edge (see :attr:`Multigraph.edge_list`), the ordered k
    inserted vertices subdividing that copy.
    """

    source: Multigraph
    target: Multigraph
    k: int
    vertex_embedding: tuple[str, ...]
    edge_chains: tuple[tuple[str, ...], ...]

    def embed(self, v: str) -> str:
        return self.vertex_embedding[self.source.index[v]]


def refine(graph: Multigraph, k: int) -> tuple[Multigraph, RefinementMap]:
    """Insert k vertices in the interior of every edge.

    Inserted vertices are named ``u:v:c:i`` from the stored edge record
    ``(u, v)``, parallel-copy index c and position i (1-based, counted from
    u), which keeps refined graphs and golden files stable.  ``refine(G, 0)``
    returns an isomorphic copy with the identity map.  The genus is
    invariant under refinement.
    """
    if k < 0:
        raise InvalidInputError("refinement index k must be >= 0")
    new_vertices = list(graph.vertices)
    taken = set(new_vertices)
    new_edges: list[tuple[str, str, int]] = []
    chains: list[tuple[str, ...]] = []

    if k == 0:
        target = Multigraph(tuple(new_vertices), graph.edges)
        chains = [() for _ in graph.edge_list]
    else:
        for u, v, m in graph.edges:
            for c in range(m):
                chain = []
                for i in range(1, k + 1):
                    name = f"{u}{_REFINE_SEP}{v}{_REFINE_SEP}{c}{_REFINE_SEP}{i}"
                    if name in taken:
                        raise InvalidInputError(
                            f"inserted vertex name {name!r} collides with an existing vertex"
                        )
                    taken.add(name)
                    chain.append(name)
                new_vertices.extend(chain)
                path = [u, *chain, v]
                new_edges.extend((path[i], path[i + 1], 1) for i in range(k + 1))
                chains.append(tuple(chain))
        target = Multigraph(tuple(new_vertices), tuple(new_edges))

    iota = RefinementMap(
        source=graph,
        target=target,
        k=k,
        vertex_embedding=graph.vertices,
        edge_chains=tuple(chains),
    )
    return target, iota
