"""Immutable simple graphs stored as adjacency bitmasks, plus the named
constructions and graph operators used by the bounds."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Graph",
    "VertexSet",
    "apex_extension",
    "complement",
    "complete",
    "cycle",
    "disjoint_union",
    "empty",
    "graph_power",
    "induced_subgraph",
    "path",
    "random_graph",
    "schlafli_complement",
    "strong_product",
    "parse_graph",
    "format_graph",
    "read_graph",
    "write_graph",
]


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class VertexSet:
    """A subset of ``{0, ..., n-1}`` stored as a bit mask."""

    mask: int
    n: int

    def __post_init__(self):
        if self.n < 0 or self.mask < 0 or self.mask >> self.n:
            raise ValueError(f"vertex mask {self.mask:#x} out of range for n={self.n}")

    @classmethod
    def of(cls, members: Iterable[int], n: int) -> "VertexSet":
        mask = 0
        for v in members:
            if not 0 <= v < n:
                raise ValueError(f"vertex {v} out of range for n={n}")
            mask |= 1 << v
        return cls(mask, n)

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls((1 << n) - 1, n)

    def members(self) -> list[int]:
        return _bits(self.mask)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __iter__(self):
        return iter(self.members())

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v < self.n and bool(self.mask >> v & 1)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.members())) + "}"


def as_mask(s: VertexSet | Iterable[int] | int, n: int) -> int:
    """Normalise the vertex-set spellings accepted across the package."""
    if isinstance(s, VertexSet):
        if s.n != n:
            raise ValueError(f"vertex set bound to n={s.n}, graph has n={n}")
        return s.mask
    if isinstance(s, int):
        if s < 0 or s >> n:
            raise ValueError(f"vertex mask {s:#x} out of range for n={n}")
        return s
    return VertexSet.of(s, n).mask


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``rows[i]`` is the neighbourhood of ``i`` as a bit mask. Labels are
    optional display names (the fixtures use the 1-based labels of the
    source figure).
    """

    n: int
    rows: tuple[int, ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a graph needs at least one vertex")
        if len(self.rows) != self.n:
            raise ValueError("adjacency row count does not match n")
        for i, r in enumerate(self.rows):
            if r >> self.n:
                raise ValueError(f"row {i} references a vertex >= n")
            if r >> i & 1:
                raise ValueError(f"self-loop at vertex {i}")
            for j in _bits(r):
                if not self.rows[j] >> i & 1:
                    raise ValueError(f"adjacency not symmetric at ({i}, {j})")
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("label count does not match n")

    # construction -----------------------------------------------------

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int]], labels: Sequence[str] | None = None
    ) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows), tuple(labels) if labels is not None else None)

    @classmethod
    def from_adjacency(cls, adjacency, labels: Sequence[str] | None = None) -> "Graph":
        a = np.asarray(adjacency, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be a square matrix")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric")
        if a.diagonal().any():
            raise ValueError("adjacency must have a zero diagonal")
        rows = tuple(sum(1 << int(j) for j in np.flatnonzero(a[i])) for i in range(a.shape[0]))
        return cls(a.shape[0], rows, tuple(labels) if labels is not None else None)

    # queries ----------------------------------------------------------

    @property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        for i, r in enumerate(self.rows):
            a[i, _bits(r)] = True
        return a

    @property
    def vertices(self) -> VertexSet:
        return VertexSet.full(self.n)

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return _bits(self.rows[v])

    def degree(self, v: int) -> int:
        return bin(self.rows[v]).count("1")

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in _bits(self.rows[i]) if j > i]

    @property
    def num_edges(self) -> int:
        return sum(bin(r).count("1") for r in self.rows) // 2

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def index_of(self, label: str) -> int:
        """Vertex index carrying ``label`` (falls back to the integer index)."""
        if self.labels is not None:
            try:
                return self.labels.index(str(label))
            except ValueError:
                pass
        v = int(label)
        if not 0 <= v < self.n:
            raise KeyError(label)
        return v

    def is_clique(self, s: VertexSet | Iterable[int] | int) -> bool:
        mask = as_mask(s, self.n)
        return all((self.rows[v] | 1 << v) & mask == mask for v in _bits(mask))

    def is_independent(self, s: VertexSet | Iterable[int] | int) -> bool:
        mask = as_mask(s, self.n)
        return all(not self.rows[v] & mask for v in _bits(mask))

    def with_labels(self, labels: Sequence[str] | None) -> "Graph":
        return Graph(self.n, self.rows, tuple(labels) if labels is not None else None)

    def without_edge(self, u: int, v: int) -> "Graph":
        if not self.adjacent(u, v):
            raise ValueError(f"no edge ({u}, {v}) to delete")
        rows = list(self.rows)
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
        return Graph(self.n, tuple(rows), self.labels)

    def canonical_key(self) -> str:
        """Labelled (not isomorphism-invariant) encoding, used as a cache key."""
        return f"{self.n}:" + ".".join(format(r, "x") for r in self.rows)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"


# named graphs ---------------------------------------------------------


def complete(m: int) -> Graph:
    if m < 1:
        raise ValueError("K_m needs m >= 1")
    full = (1 << m) - 1
    return Graph(m, tuple(full & ~(1 << i) for i in range(m)))


def empty(m: int) -> Graph:
    if m < 1:
        raise ValueError("empty graph needs m >= 1")
    return Graph(m, (0,) * m)


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError(f"cycle needs n >= 3, got {n}")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path(k: int) -> Graph:
    if k < 1:
        raise ValueError("path needs k >= 1")
    return Graph.from_edges(k, ((i, i + 1) for i in range(k - 1)))


def random_graph(n: int, p: float = 0.5, rng: np.random.Generator | int | None = None) -> Graph:
    """Erdős–Rényi G(n, p); ``rng`` may be a seed."""
    if n < 1:
        raise ValueError("random graph needs n >= 1")
    rng = np.random.default_rng(rng)
    coins = rng.random((n, n)) < p
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if coins[i, j]]
    return Graph.from_edges(n, edges)


def schlafli_complement() -> Graph:
    """Intersection graph of the 27 lines on a cubic surface, SRG(27,10,1,5).

    Vertex order: a1..a6, b1..b6, then c_ij for i<j in lexicographic order.
    """
    pairs = list(itertools.combinations(range(1, 7), 2))
    names = [f"a{i}" for i in range(1, 7)] + [f"b{i}" for i in range(1, 7)]
    names += [f"c{i}{j}" for i, j in pairs]
    kinds = [("a", {i}) for i in range(1, 7)] + [("b", {i}) for i in range(1, 7)]
    kinds += [("c", set(p)) for p in pairs]

    def meets(x, y):
        (kx, sx), (ky, sy) = x, y
        if kx == ky == "c":
            return not sx & sy
        if kx == ky:
            return False
        if "c" not in (kx, ky):
            return sx != sy
        return bool(sx & sy)

    edges = [(i, j) for i, j in itertools.combinations(range(27), 2) if meets(kinds[i], kinds[j])]
    return Graph.from_edges(27, edges, labels=names)


# operators ------------------------------------------------------------


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full & ~r & ~(1 << i) for i, r in enumerate(g.rows)), g.labels)


def strong_product(g: Graph, h: Graph) -> Graph:
    """Strong product with row-major vertex order ``i_g * h.n + i_h``."""
    closed_h = [r | 1 << j for j, r in enumerate(h.rows)]
    rows = []
    for i in range(g.n):
        closed_g = _bits(g.rows[i] | 1 << i)
        for j in range(h.n):
            mask = 0
            for k in closed_g:
                mask |= closed_h[j] << (k * h.n)
            rows.append(mask & ~(1 << (i * h.n + j)))
    labels = None
    if g.labels is not None or h.labels is not None:
        labels = tuple(f"({g.label(i)},{h.label(j)})" for i in range(g.n) for j in range(h.n))
    return Graph(g.n * h.n, tuple(rows), labels)


def graph_power(g: Graph, k: int) -> Graph:
    if k < 1:
        raise ValueError(f"graph power needs k >= 1, got {k}")
    out = g
    for _ in range(k - 1):
        out = strong_product(out, g)
    return out


def disjoint_union(g: Graph, h: Graph) -> Graph:
    rows = g.rows + tuple(r << g.n for r in h.rows)
    labels = None
    if g.labels is not None or h.labels is not None:
        labels = tuple(g.label(i) for i in range(g.n)) + tuple(h.label(j) for j in range(h.n))
    return Graph(g.n + h.n, rows, labels)


def induced_subgraph(g: Graph, s: VertexSet | Iterable[int] | int) -> Graph:
    """Restriction to ``s``; vertices renumbered in ascending order.

    The new labels record the original vertex (its label if present).
    """
    keep = _bits(as_mask(s, g.n))
    if not keep:
        raise ValueError("induced subgraph of an empty vertex set")
    pos = {v: k for k, v in enumerate(keep)}
    rows = []
    for v in keep:
        r = 0
        for u in _bits(g.rows[v]):
            k = pos.get(u)
            if k is not None:
                r |= 1 << k
        rows.append(r)
    return Graph(len(keep), tuple(rows), tuple(g.label(v) for v in keep))


def apex_extension(g: Graph, neighbors: VertexSet | Iterable[int] | int, label: str | None = None) -> Graph:
    mask = as_mask(neighbors, g.n)
    rows = [r | (1 << g.n if mask >> i & 1 else 0) for i, r in enumerate(g.rows)]
    rows.append(mask)
    labels = None
    if g.labels is not None or label is not None:
        labels = tuple(g.label(i) for i in range(g.n)) + (label if label is not None else str(g.n),)
    return Graph(g.n + 1, tuple(rows), labels)


# text format ------------------------------------------------------------


def format_graph(g: Graph) -> str:
    """Canonical text form: ``n m``, sorted edge lines, then label lines."""
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"]
    lines += [f"{u} {v}" for u, v in edges]
    if g.labels is not None:
        lines += [f"# label {i} {name}" for i, name in enumerate(g.labels)]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    header = None
    edges = []
    labels: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split(None, 2)
            if len(parts) == 3 and parts[0] == "label":
                labels[int(parts[1])] = parts[2]
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected two integers, got {raw!r}")
        a, b = int(parts[0]), int(parts[1])
        if header is None:
            header = (a, b)
        else:
            edges.append((a, b))
    if header is None:
        raise ValueError("missing 'n m' header")
    n, m = header
    if len(edges) != m:
        raise ValueError(f"header declares {m} edges, found {len(edges)}")
    names = None
    if labels:
        if sorted(labels) != list(range(n)):
            raise ValueError("label lines must cover every vertex exactly once")
        names = [labels[i] for i in range(n)]
    return Graph.from_edges(n, edges, labels=names)


def read_graph(path: str | Path) -> Graph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def write_graph(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_graph(g), encoding="utf-8")
