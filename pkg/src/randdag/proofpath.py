"""Explicit transition sequences between connected acyclic digraphs.

A path from ``g`` to ``h`` is built in three phases on each side: strip
``g`` down to a spanning tree, fold the tree into a dichain (a directed tree
whose undirected shadow is a simple path), then rearrange the dichain into
a common directed Hamiltonian path. The ``h`` side is run in reverse.

Every move is executed through the connected chain's own transition
function while it is recorded, so a certificate cannot contain a move the
chain would not make.
"""
from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .chain import (
    ADDED,
    CONNECTED,
    DELETED,
    REVERSED,
    UNRESTRICTED,
    ChainConfig,
    TransitionOutcome,
    _apply,
)
from .dag import Dag, UndirectedView, check_dag, is_acyclic, is_connected, would_create_circuit
from .exceptions import InputError
from .oracle import path_length_bound

_WORDS = {ADDED: "ADD", DELETED: "DEL", REVERSED: "REV"}
_TAGS = {v: k for k, v in _WORDS.items()}


@functools.lru_cache(maxsize=None)
def inverse(move: TransitionOutcome) -> TransitionOutcome:
    i, j = move.pair
    if move.tag == ADDED:
        return TransitionOutcome(DELETED, (i, j))
    if move.tag == DELETED:
        return TransitionOutcome(ADDED, (i, j))
    if move.tag == REVERSED:
        return TransitionOutcome(REVERSED, (j, i))
    raise ValueError(f"no inverse for {move.tag}")


def cancel(moves: Sequence[TransitionOutcome]) -> list[TransitionOutcome]:
    """Drop adjacent move/inverse pairs; each one is a detour back to the same state."""
    stack: list[TransitionOutcome] = []
    for mv in moves:
        if stack and inverse(stack[-1]) == mv:
            stack.pop()
        else:
            stack.append(mv)
    return stack


class _Recorder:
    def __init__(self, g: Dag):
        self.state = g.copy()
        self.cfg = ChainConfig(g.n, CONNECTED)
        self.moves: list[TransitionOutcome] = []

    def _do(self, i: int, j: int, expected: str) -> None:
        tag = _apply(self.state, i - 1, j - 1, self.cfg)
        if tag != expected:
            raise AssertionError(f"draw ({i},{j}) gave {tag}, expected {expected}")
        self.moves.append(TransitionOutcome(tag, (i, j)))

    def add_edge(self, u: int, v: int, prefer: Optional[tuple[int, int]] = None) -> None:
        options = [(u, v), (v, u)] if prefer is None else [prefer, prefer[::-1]]
        for i, j in options:
            if not would_create_circuit(self.state, i, j):
                self._do(i, j, ADDED)
                return
        raise AssertionError(f"neither orientation of {{{u},{v}}} is acyclic")

    def delete_edge(self, u: int, v: int) -> None:
        i, j = (u, v) if self.state.has_arc(u, v) else (v, u)
        self._do(i, j, DELETED)

    def orient(self, i: int, j: int) -> None:
        if self.state.has_arc(j, i):
            self._do(j, i, REVERSED)


def _require_member(g: Dag) -> None:
    check_dag(g)
    if not is_connected(g):
        raise InputError("graph is not connected")


def leaf_count(g: Dag) -> int:
    und = g.undirected()
    return sum(1 for v in range(1, g.n + 1) if und.degree(v) == 1)


def is_tree(g: Dag) -> bool:
    return g.num_arcs == g.n - 1 and is_connected(g)


def is_dichain(g: Dag) -> bool:
    if not is_tree(g):
        return False
    und = g.undirected()
    return all(und.degree(v) <= 2 for v in range(1, g.n + 1))


def path_order(c: Dag) -> list[int]:
    """Vertices of a dichain along its path, from the smaller endpoint."""
    und = c.undirected()
    start = min(v for v in range(1, c.n + 1) if und.degree(v) == 1)
    order = [start]
    prev = 0
    while len(order) < c.n:
        cur = order[-1]
        nxt = next(w for w in und.neighbors(cur) if w != prev)
        prev = cur
        order.append(nxt)
    return order


def hamiltonian_dichain(order: Sequence[int]) -> Dag:
    return Dag(len(order), [(order[k], order[k + 1]) for k in range(len(order) - 1)])


def to_spanning_tree(g: Dag) -> tuple[Dag, list[TransitionOutcome]]:
    """Delete every arc outside the BFS tree from vertex 1 (ascending neighbours)."""
    und = g.undirected()
    seen = {1}
    tree: set[tuple[int, int]] = set()
    queue = deque([1])
    while queue:
        u = queue.popleft()
        for v in und.neighbors(u):
            if v not in seen:
                seen.add(v)
                tree.add((min(u, v), max(u, v)))
                queue.append(v)
    rec = _Recorder(g)
    for i, j in g.arcs:
        if (min(i, j), max(i, j)) not in tree:
            # deleting a non-tree arc never disconnects; _do still verifies it
            rec._do(i, j, DELETED)
    return rec.state, rec.moves


def tree_to_dichain(t: Dag) -> tuple[Dag, list[TransitionOutcome]]:
    """Eliminate leaves two moves at a time until the tree is a path."""
    if not is_tree(t):
        raise InputError("input is not a directed tree")
    rec = _Recorder(t)
    while True:
        und = UndirectedView(rec.state)
        leaves = [v for v in range(1, t.n + 1) if und.degree(v) == 1]
        if len(leaves) <= 2:
            break
        u = leaves[0]
        prev, cur = u, und.neighbors(u)[0]
        while und.degree(cur) == 2:
            prev, cur = cur, next(w for w in und.neighbors(cur) if w != prev)
        w = cur
        v = min(x for x in und.neighbors(w) if x != prev)
        rec.add_edge(u, v, prefer=(v, u))
        rec.delete_edge(w, v)
    return rec.state, rec.moves


def _relocate(c: Dag, seq: list[int], target: Sequence[int]) -> _Recorder:
    n = c.n
    prefer = {frozenset(target[k:k + 2]): (target[k], target[k + 1]) for k in range(n - 1)}
    rec = _Recorder(c)

    def add(u: int, v: int) -> None:
        rec.add_edge(u, v, prefer=prefer.get(frozenset((u, v))))

    s = list(seq)
    j = s.index(target[0])
    if j == n - 1:
        s.reverse()
        j = 0
    if j > 0:
        # close the path into a cycle, then cut just before target[0]
        add(s[-1], s[0])
        rec.delete_edge(s[j - 1], s[j])
        s = s[j:] + s[:j]
    for k in range(1, n - 1):
        if s[k] == target[k]:
            continue
        q = s.index(target[k])
        add(s[k - 1], s[q])
        rec.delete_edge(s[k - 1], s[k])
        if q == n - 1:
            s = s[:k] + [s[q]] + s[k:q][::-1]
        else:
            add(s[k], s[-1])
            rec.delete_edge(s[q - 1], s[q])
            s = s[:k] + s[q:] + s[k:q]
    for k in range(n - 1):
        rec.orient(target[k], target[k + 1])
    return rec


def dichain_to_hamiltonian(
    c: Dag, order: Optional[Sequence[int]] = None
) -> tuple[Dag, list[TransitionOutcome]]:
    """Rearrange a dichain into the directed path along ``order``.

    ``order`` defaults to ``1, 2, ..., n``, i.e. the arcs ``(i, i+1)``. Both
    readings of the input path are tried and the shorter move list is kept.
    """
    if not is_dichain(c):
        raise InputError("input is not a dichain")
    target = list(range(1, c.n + 1)) if order is None else list(order)
    if sorted(target) != list(range(1, c.n + 1)):
        raise InputError("order must be a permutation of 1..n")
    seq = path_order(c)
    best = min((_relocate(c, s, target) for s in (seq, seq[::-1])), key=lambda r: len(r.moves))
    return best.state, best.moves


@functools.lru_cache(maxsize=65536)
def _fold(n: int, key: tuple[int, ...]) -> tuple[Dag, list[int], tuple, tuple]:
    g = Dag._from_rows(n, key)
    t, tree_moves = to_spanning_tree(g)
    c, chain_moves = tree_to_dichain(t)
    return c, path_order(c), tuple(tree_moves), tuple(chain_moves)


@functools.lru_cache(maxsize=65536)
def _side(n: int, key: tuple[int, ...], target: tuple[int, ...]) -> tuple[tuple, tuple, dict]:
    """Moves from the graph ``key`` to the directed path ``target``, and their inverse."""
    c, _, tree_moves, chain_moves = _fold(n, key)
    align = tuple(dichain_to_hamiltonian(c, target)[1])
    forward = (*tree_moves, *chain_moves, *align)
    backward = tuple(inverse(mv) for mv in reversed(forward))
    return forward, backward, {"tree": len(tree_moves), "dichain": len(chain_moves), "align": len(align)}


@dataclass
class PathCertificate:
    start: Dag
    end: Dag
    moves: list[TransitionOutcome]
    variant: str = CONNECTED
    phases: dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.moves)

    @property
    def bound(self) -> int:
        return path_length_bound(self.start.n)

    def states(self) -> list[Dag]:
        """Every state visited, ``start`` first; raises on an illegal move."""
        n = self.start.n
        cfg = _replay_config(n, self.variant)
        out = [self.start]
        cur = self.start
        for mv in self.moves:
            i, j = mv.pair
            if not (1 <= i <= n and 1 <= j <= n):
                raise InputError(f"move {mv} names a vertex outside 1..{n}")
            cur = cur.copy()
            tag = _apply(cur, i - 1, j - 1, cfg)
            if tag != mv.tag:
                raise InputError(f"move {_WORDS.get(mv.tag, mv.tag)} {i} {j} replays as {tag}")
            out.append(cur)
        return out

    def validate(self) -> None:
        """Replay the moves, checking membership of each state and the endpoint."""
        if self.start.n != self.end.n:
            raise InputError("start and end have different vertex counts")
        for g in self.states():
            if not is_acyclic(g):
                raise InputError("intermediate state has a circuit")
            if self.variant == CONNECTED and not is_connected(g):
                raise InputError("intermediate state is disconnected")
            last = g
        if last != self.end:
            raise InputError("replay does not reach the end graph")

    def replay(self) -> bool:
        try:
            self.validate()
        except InputError:
            return False
        return True

    def reversed(self) -> PathCertificate:
        return PathCertificate(
            self.end, self.start, [inverse(mv) for mv in reversed(self.moves)], self.variant
        )

    def to_text(self) -> str:
        lines = [f"{self.start.n} {_arc_token(self.start)} {_arc_token(self.end)}"]
        lines += [f"{_WORDS[mv.tag]} {mv.pair[0]} {mv.pair[1]}" for mv in self.moves]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, variant: str = CONNECTED) -> PathCertificate:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines:
            raise InputError("empty certificate")
        head = lines[0].split()
        if len(head) != 3:
            raise InputError("certificate header must be 'N start-arcs end-arcs'")
        try:
            n = int(head[0])
            start, end = _parse_arc_token(n, head[1]), _parse_arc_token(n, head[2])
            moves = []
            for ln in lines[1:]:
                word, i, j = ln.split()
                moves.append(TransitionOutcome(_TAGS[word], (int(i), int(j))))
        except (ValueError, KeyError) as exc:
            raise InputError(f"malformed certificate: {exc}") from exc
        return cls(start, end, moves, variant)


@functools.lru_cache(maxsize=None)
def _replay_config(n: int, variant: str) -> ChainConfig:
    return ChainConfig(n, variant)


def _arc_token(g: Dag) -> str:
    return ",".join(f"{i}>{j}" for i, j in g.arcs) or "-"


def _parse_arc_token(n: int, token: str) -> Dag:
    if token == "-":
        return Dag(n)
    arcs = []
    for part in token.split(","):
        i, j = part.split(">")
        arcs.append((int(i), int(j)))
    return Dag(n, arcs)


def build_path(g: Dag, h: Dag) -> PathCertificate:
    """Legal connected-chain transition sequence from ``g`` to ``h``.

    Both graphs are folded to dichains; the meeting point is a directed
    Hamiltonian path taken from either dichain (either direction) or the
    canonical ``1 -> 2 -> ... -> n``, whichever gives the shortest sequence
    after cancelling immediate back-and-forth moves.
    """
    if g.n != h.n:
        raise InputError(f"vertex counts differ: {g.n} vs {h.n}")
    _require_member(g)
    _require_member(h)
    if g == h:
        return PathCertificate(g, h, [])
    n = g.n
    og = _fold(n, g.key())[1]
    oh = _fold(n, h.key())[1]
    targets = [tuple(og), tuple(og[::-1]), tuple(oh), tuple(oh[::-1]), tuple(range(1, n + 1))]
    best = None
    for target in dict.fromkeys(targets):
        forward, _, phase_g = _side(n, g.key(), target)
        _, backward, phase_h = _side(n, h.key(), target)
        moves = cancel(forward + backward)
        if best is None or len(moves) < len(best[0]):
            phases = {f"{k}_start": v for k, v in phase_g.items()}
            phases.update({f"{k}_end": v for k, v in phase_h.items()})
            phases["cancelled"] = len(forward) + len(backward) - len(moves)
            best = (moves, phases)
    return PathCertificate(g, h, best[0], CONNECTED, best[1])


def unrestricted_path(g: Dag, h: Dag) -> PathCertificate:
    """Delete every arc of ``g``, then add every arc of ``h``."""
    moves = [TransitionOutcome(DELETED, a) for a in g.arcs]
    moves += [TransitionOutcome(ADDED, a) for a in h.arcs]
    return PathCertificate(g, h, cancel(moves), UNRESTRICTED)
