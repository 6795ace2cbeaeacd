"""Acyclic digraphs over the fixed vertex set {1, ..., n}.

Vertices are 1-indexed in every public signature. Internally a graph is a
dense adjacency bitmatrix: ``_out[a]`` has bit ``b`` set iff the arc
``(a+1, b+1)`` is present, ``_in`` is its transpose. Membership is O(1) and
traversals cost O(n + m) word operations.
"""
from __future__ import annotations

from typing import Iterable, Iterator

from .exceptions import InputError

Arc = tuple[int, int]


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Dag:
    """Arc set over ``V = {1..n}``.

    Public methods never mutate; the chain runner owns private copies and
    edits them through the underscore methods.
    """

    __slots__ = ("n", "_out", "_in", "_m")

    def __init__(self, n: int, arcs: Iterable[Arc] = (), *, check: bool = True):
        if not isinstance(n, int) or n < 2:
            raise InputError(f"vertex count must be an integer >= 2, got {n!r}")
        self.n = n
        self._out = [0] * n
        self._in = [0] * n
        self._m = 0
        for i, j in arcs:
            a, b = _vertex(n, i), _vertex(n, j)
            if a == b:
                raise InputError(f"self-loop ({i},{j}) is a circuit")
            if self._out[a] >> b & 1:
                raise InputError(f"duplicate arc ({i},{j})")
            self._add(a, b)
        if check and not is_acyclic(self):
            raise InputError("arc set contains a directed circuit")

    # -- construction -------------------------------------------------------

    @classmethod
    def _from_rows(cls, n: int, out: Iterable[int]) -> Dag:
        g = cls.__new__(cls)
        g.n = n
        g._out = list(out)
        g._in = [0] * n
        m = 0
        for a, row in enumerate(g._out):
            m += row.bit_count()
            for b in _bits(row):
                g._in[b] |= 1 << a
        g._m = m
        return g

    @classmethod
    def from_mask(cls, n: int, mask: int) -> Dag:
        """Inverse of :meth:`to_mask` (no acyclicity check)."""
        out = [0] * n
        for idx in _bits(mask):
            a, r = divmod(idx, n - 1)
            b = r if r < a else r + 1
            out[a] |= 1 << b
        return cls._from_rows(n, out)

    def copy(self) -> Dag:
        g = Dag.__new__(Dag)
        g.n = self.n
        g._out = self._out[:]
        g._in = self._in[:]
        g._m = self._m
        return g

    # -- queries ------------------------------------------------------------

    @property
    def num_arcs(self) -> int:
        return self._m

    @property
    def arcs(self) -> list[Arc]:
        """Arcs in ascending lexicographic order, 1-indexed."""
        return [(a + 1, b + 1) for a in range(self.n) for b in _bits(self._out[a])]

    def has_arc(self, i: int, j: int) -> bool:
        return bool(self._out[_vertex(self.n, i)] >> _vertex(self.n, j) & 1)

    def out_degree(self, i: int) -> int:
        return self._out[_vertex(self.n, i)].bit_count()

    def in_degree(self, i: int) -> int:
        return self._in[_vertex(self.n, i)].bit_count()

    def max_out_degree(self) -> int:
        return max(row.bit_count() for row in self._out)

    def max_in_degree(self) -> int:
        return max(row.bit_count() for row in self._in)

    def key(self) -> tuple[int, ...]:
        return tuple(self._out)

    def to_mask(self) -> int:
        """Bitmask over ordered pairs ``(i, j), i != j`` in lexicographic order.

        Sorting states by this integer is the canonical state order.
        """
        n = self.n
        mask = 0
        for a in range(n):
            row = self._out[a]
            for b in _bits(row):
                mask |= 1 << (a * (n - 1) + (b if b < a else b - 1))
        return mask

    def undirected(self) -> UndirectedView:
        return UndirectedView(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dag):
            return NotImplemented
        return self.n == other.n and self._out == other._out

    def __hash__(self) -> int:
        return hash((self.n, tuple(self._out)))

    def __repr__(self) -> str:
        return f"Dag(n={self.n}, arcs={self.arcs})"

    # -- private mutation (0-indexed) ----------------------------------------

    def _add(self, a: int, b: int) -> None:
        self._out[a] |= 1 << b
        self._in[b] |= 1 << a
        self._m += 1

    def _remove(self, a: int, b: int) -> None:
        self._out[a] &= ~(1 << b)
        self._in[b] &= ~(1 << a)
        self._m -= 1

    def _reverse(self, a: int, b: int) -> None:
        self._out[a] &= ~(1 << b)
        self._in[b] &= ~(1 << a)
        self._out[b] |= 1 << a
        self._in[a] |= 1 << b


class UndirectedView:
    """Edges ``{i, j}`` of a Dag with orientations ignored."""

    __slots__ = ("n", "_adj")

    def __init__(self, g: Dag):
        self.n = g.n
        self._adj = [o | i for o, i in zip(g._out, g._in)]

    @property
    def edges(self) -> set[tuple[int, int]]:
        return {
            (a + 1, b + 1)
            for a in range(self.n)
            for b in _bits(self._adj[a])
            if a < b
        }

    def neighbors(self, v: int) -> list[int]:
        return [b + 1 for b in _bits(self._adj[_vertex(self.n, v)])]

    def degree(self, v: int) -> int:
        return self._adj[_vertex(self.n, v)].bit_count()

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self._adj[_vertex(self.n, i)] >> _vertex(self.n, j) & 1)


def _vertex(n: int, v: int) -> int:
    if not isinstance(v, int) or not 1 <= v <= n:
        raise InputError(f"vertex {v!r} outside 1..{n}")
    return v - 1


def _reaches(out: list[int], src: int, dst: int) -> bool:
    """Directed reachability ``src ->* dst`` over bitmask rows (src != dst)."""
    target = 1 << dst
    seen = 1 << src
    frontier = out[src]
    while frontier:
        if frontier & target:
            return True
        seen |= frontier
        nxt = 0
        while frontier:
            low = frontier & -frontier
            nxt |= out[low.bit_length() - 1]
            frontier ^= low
        frontier = nxt & ~seen
    return False


def _joined_without_edge(out: list[int], inn: list[int], a: int, b: int) -> bool:
    """Whether b stays reachable from a in the undirected view minus {a, b}."""
    target = 1 << b
    seen = 1 << a
    frontier = (out[a] | inn[a]) & ~target
    while frontier:
        if frontier & target:
            return True
        seen |= frontier
        nxt = 0
        while frontier:
            low = frontier & -frontier
            v = low.bit_length() - 1
            nxt |= out[v] | inn[v]
            frontier ^= low
        frontier = nxt & ~seen
    return False


def _spans(out: list[int], inn: list[int], n: int) -> bool:
    full = (1 << n) - 1
    seen = 1
    frontier = out[0] | inn[0]
    while frontier:
        seen |= frontier
        nxt = 0
        while frontier:
            low = frontier & -frontier
            v = low.bit_length() - 1
            nxt |= out[v] | inn[v]
            frontier ^= low
        frontier = nxt & ~seen
    return seen == full


def would_create_circuit(g: Dag, i: int, j: int) -> bool:
    """True iff adding arc ``(i, j)`` to ``g`` closes a directed circuit.

    A self-loop ``i == j`` counts as a circuit. Raises :class:`InputError`
    for out-of-range vertices or if ``(i, j)`` is already an arc.
    """
    a, b = _vertex(g.n, i), _vertex(g.n, j)
    if a == b:
        return True
    if g._out[a] >> b & 1:
        raise InputError(f"({i},{j}) is already an arc")
    return _reaches(g._out, b, a)


def is_disconnecting(g: Dag, i: int, j: int) -> bool:
    """True iff deleting arc ``(i, j)`` disconnects the undirected view.

    One traversal from ``i`` that refuses the edge ``{i, j}``; linear in the
    number of arcs.
    """
    a, b = _vertex(g.n, i), _vertex(g.n, j)
    if not g._out[a] >> b & 1:
        raise InputError(f"({i},{j}) is not an arc")
    return not _joined_without_edge(g._out, g._in, a, b)


def is_connected(g: Dag) -> bool:
    return _spans(g._out, g._in, g.n)


def is_acyclic(g: Dag) -> bool:
    """Kahn's algorithm; independent of the reachability routine above."""
    indeg = [row.bit_count() for row in g._in]
    stack = [v for v in range(g.n) if indeg[v] == 0]
    removed = 0
    while stack:
        v = stack.pop()
        removed += 1
        for w in _bits(g._out[v]):
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    return removed == g.n


def check_dag(g: Dag) -> None:
    """Assert every structural invariant of a Dag; raise InputError if broken."""
    n = g.n
    for a in range(n):
        if g._out[a] >> a & 1:
            raise InputError(f"self-loop at vertex {a + 1}")
        for b in _bits(g._out[a]):
            if g._out[b] >> a & 1:
                raise InputError(f"both ({a + 1},{b + 1}) and ({b + 1},{a + 1}) present")
            if not g._in[b] >> a & 1:
                raise InputError("in/out adjacency rows disagree")
    if sum(r.bit_count() for r in g._out) != g._m:
        raise InputError("arc count out of sync")
    if g._m > n * (n - 1) // 2:
        raise InputError("more arcs than a tournament")
    if not is_acyclic(g):
        raise InputError("directed circuit present")
