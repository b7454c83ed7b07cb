"""Data graphs: which value-to-value rewrites are permitted.

Vertices are the integers ``0..L-1``. Structured vertices (tuples for the
generalized hypercube, strings for the de Bruijn graph) are mapped to
integers in mixed radix, most significant coordinate first.

Each vertex labels its out-edges ``0..outdeg-1`` by sorting its
out-neighbors ascending; the trajectory code stores these labels.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import GraphTooLarge, LabelOutOfRange, NotAnEdge

MAX_VERTICES = 1 << 20


@dataclass(frozen=True)
class DataGraph:
    L: int
    adjacency: tuple[tuple[int, ...], ...]
    name: str = ""
    _labels: tuple[dict, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if self.L < 1 or len(self.adjacency) != self.L:
            raise ValueError("adjacency must have one row per vertex")
        adj = tuple(tuple(sorted(set(row))) for row in self.adjacency)
        for u, row in enumerate(adj):
            for v in row:
                if not 0 <= v < self.L:
                    raise ValueError(f"edge {u}->{v} leaves the vertex set")
                if v == u:
                    raise ValueError(f"self-loop at {u}")
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "_labels", tuple({v: k for k, v in enumerate(row)} for row in adj))

    @property
    def delta(self) -> int:
        return max(len(row) for row in self.adjacency)

    def out_degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.L and v in self._labels[u]

    def edges(self):
        for u, row in enumerate(self.adjacency):
            for v in row:
                yield u, v

    def num_edges(self) -> int:
        return sum(len(row) for row in self.adjacency)

    def is_complete(self) -> bool:
        return self.num_edges() == self.L * (self.L - 1)

    def edge_label(self, u: int, v: int) -> int:
        try:
            return self._labels[u][v]
        except (KeyError, IndexError):
            raise NotAnEdge(f"({u}, {v}) is not an edge of {self.name or 'the graph'}") from None

    def follow(self, u: int, label: int) -> int:
        row = self.adjacency[u]
        if not 0 <= label < len(row):
            raise LabelOutOfRange(f"vertex {u} has out-degree {len(row)}, no label {label}")
        return row[label]

    def is_strongly_connected(self) -> bool:
        if self.L == 1:
            return True
        reverse: list[list[int]] = [[] for _ in range(self.L)]
        for u, v in self.edges():
            reverse[v].append(u)
        return (len(_reachable(self.adjacency, 0)) == self.L
                and len(_reachable(reverse, 0)) == self.L)

    def to_edge_list(self) -> str:
        lines = [f"# L={self.L}"]
        lines += [f"{u} {v}" for u, v in self.edges()]
        return "\n".join(lines) + "\n"


def _reachable(adj, start):
    seen = {start}
    todo = deque([start])
    while todo:
        u = todo.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return seen


def _bfs_distances(adj, start):
    dist = {start: 0}
    todo = deque([start])
    while todo:
        u = todo.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                todo.append(v)
    return dist


def diameter(g: DataGraph) -> int:
    best = 0
    for u in range(g.L):
        dist = _bfs_distances(g.adjacency, u)
        if len(dist) != g.L:
            raise ValueError("diameter is undefined: graph is not strongly connected")
        best = max(best, max(dist.values()))
    return best


def edge_label(g: DataGraph, u: int, v: int) -> int:
    return g.edge_label(u, v)


def follow(g: DataGraph, u: int, label: int) -> int:
    return g.follow(u, label)


def _check_size(ell: int, k: int, limit: int) -> int:
    size = ell ** k
    if size > limit:
        raise GraphTooLarge(f"{ell}^{k} = {size} vertices exceeds the limit {limit}")
    return size


def complete_graph(L: int) -> DataGraph:
    if L < 2:
        raise ValueError(f"a complete data graph needs L >= 2, got {L}")
    adj = tuple(tuple(v for v in range(L) if v != u) for u in range(L))
    return DataGraph(L, adj, name=f"complete:L={L}")


def tuple_to_vertex(digits: Sequence[int], ell: int) -> int:
    v = 0
    for x in digits:
        v = v * ell + x
    return v


def vertex_to_tuple(v: int, k: int, ell: int) -> tuple[int, ...]:
    digits = []
    for _ in range(k):
        v, x = divmod(v, ell)
        digits.append(x)
    return tuple(reversed(digits))


def hypercube_graph(k: int, ell: int, limit: int = MAX_VERTICES) -> DataGraph:
    """Generalized hypercube: ``k`` variables over ``0..ell-1``, one changes per rewrite."""
    if k < 1 or ell < 2:
        raise ValueError(f"need k >= 1 and ell >= 2, got k={k}, ell={ell}")
    L = _check_size(ell, k, limit)
    adj = []
    for u in range(L):
        row = []
        for pos in range(k):
            weight = ell ** (k - 1 - pos)
            cur = (u // weight) % ell
            for x in range(ell):
                if x != cur:
                    row.append(u + (x - cur) * weight)
        adj.append(tuple(row))
    return DataGraph(L, tuple(adj), name=f"hypercube:k={k},l={ell}")


def debruijn_graph(k: int, ell: int, limit: int = MAX_VERTICES) -> DataGraph:
    """Shift graph of a length-``k`` FIFO over ``ell`` symbols.

    ``x1..xk -> x2..xk y``. Constant strings would shift onto themselves;
    those self-loops are dropped, so such vertices have out-degree ell-1.
    """
    if k < 1 or ell < 2:
        raise ValueError(f"need k >= 1 and ell >= 2, got k={k}, ell={ell}")
    L = _check_size(ell, k, limit)
    adj = []
    for u in range(L):
        base = (u * ell) % L
        adj.append(tuple(base + y for y in range(ell) if base + y != u))
    return DataGraph(L, tuple(adj), name=f"debruijn:k={k},l={ell}")


def bidirected_tree(delta: int, L: int) -> DataGraph:
    """Balanced rooted tree with every edge in both directions.

    Filled breadth first: the root takes up to ``delta`` children, every
    other vertex up to ``delta - 1`` so its total degree stays <= delta.
    """
    if delta < 2:
        raise ValueError(f"a tree on more than two vertices needs delta >= 2, got {delta}")
    if L < 2:
        raise ValueError(f"need L >= 2, got {L}")
    nbrs: list[list[int]] = [[] for _ in range(L)]
    parent_queue = deque([0])
    nxt = 1
    while nxt < L:
        p = parent_queue.popleft()
        room = delta if p == 0 else delta - 1
        for _ in range(room):
            if nxt >= L:
                break
            nbrs[p].append(nxt)
            nbrs[nxt].append(p)
            parent_queue.append(nxt)
            nxt += 1
    return DataGraph(L, tuple(tuple(r) for r in nbrs), name=f"tree:delta={delta},L={L}")


def from_edge_list(text: str | Iterable[str]) -> DataGraph:
    """Parse ``u v`` lines (``#`` comments allowed, ``# L=<n>`` fixes the size)."""
    lines = text.splitlines() if isinstance(text, str) else list(text)
    L = None
    pairs = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("L="):
                L = int(body[2:])
            continue
        u, v = (int(x) for x in line.split())
        pairs.append((u, v))
    if L is None:
        L = 1 + max(max(u, v) for u, v in pairs)
    adj: list[list[int]] = [[] for _ in range(L)]
    for u, v in pairs:
        adj[u].append(v)
    return DataGraph(L, tuple(tuple(r) for r in adj), name="edgelist")
