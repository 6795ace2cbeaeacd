"""Markov chains over acyclic digraphs.

Each step draws an ordered pair ``(i, j)`` uniformly from ``V x V`` (the
diagonal included) and then:

* unrestricted chain: delete ``(i, j)`` if present, else add it when the
  result stays acyclic, else do nothing;
* connected chain: a present arc is deleted if that keeps the graph
  connected, otherwise it is reversed; absent arcs are handled as above.

Optional caps (total arcs, per-vertex out/in degree) only veto transitions
whose target would break them.

Random stream
-------------
Draws come from ``numpy.random.Generator(PCG64(SeedSequence(seed)))``,
consumed in blocks of :data:`DRAW_BLOCK` via
``integers(0, n*n, size=DRAW_BLOCK, dtype=int64)``. Code ``c`` maps to the
pair ``(c // n + 1, c % n + 1)``. The seed of the ``index``-th independent
run under ``seed`` is the first ``uint64`` word of
``SeedSequence(seed, spawn_key=(index,)).generate_state(1)``. Both rules are
part of the reproducibility contract.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .dag import Dag, _joined_without_edge, _reaches, _vertex, is_acyclic, is_connected
from .exceptions import ConfigError, InputError

UNRESTRICTED = "unrestricted"
CONNECTED = "connected"
VARIANTS = (UNRESTRICTED, CONNECTED)

ADDED = "added"
DELETED = "deleted"
REVERSED = "reversed"
NOOP = "noop"

DRAW_BLOCK = 4096
_SEED_LIMIT = 1 << 64


@dataclass(frozen=True)
class ChainConfig:
    n: int
    variant: str = UNRESTRICTED
    reversal: bool = True
    max_arcs: Optional[int] = None
    max_out_degree: Optional[int] = None
    max_in_degree: Optional[int] = None
    steps: int = 0
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ConfigError(f"n must be an integer >= 2, got {self.n!r}")
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if not isinstance(self.steps, int) or self.steps < 0:
            raise ConfigError(f"steps must be a non-negative integer, got {self.steps!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < _SEED_LIMIT:
            raise ConfigError(f"seed must be an integer in [0, 2**64), got {self.seed!r}")
        for name in ("max_arcs", "max_out_degree", "max_in_degree"):
            value = getattr(self, name)
            if value is not None and (not isinstance(value, int) or value < 0):
                raise ConfigError(f"{name} must be a non-negative integer, got {value!r}")
        if self.connected and self.max_arcs is not None and self.max_arcs < self.n - 1:
            raise ConfigError(
                f"max_arcs={self.max_arcs} < n-1={self.n - 1}: "
                "no connected digraph fits under the cap"
            )

    @property
    def connected(self) -> bool:
        return self.variant == CONNECTED

    @property
    def degree_capped(self) -> bool:
        return self.max_out_degree is not None or self.max_in_degree is not None

    def replace(self, **changes) -> ChainConfig:
        return dataclasses.replace(self, **changes)

    def admits(self, g: Dag) -> bool:
        """State-space membership: acyclic, connected if required, within caps."""
        if g.n != self.n or not is_acyclic(g):
            return False
        if self.connected and not is_connected(g):
            return False
        return self.within_caps(g)

    def within_caps(self, g: Dag) -> bool:
        if self.max_arcs is not None and g.num_arcs > self.max_arcs:
            return False
        if self.max_out_degree is not None and g.max_out_degree() > self.max_out_degree:
            return False
        if self.max_in_degree is not None and g.max_in_degree() > self.max_in_degree:
            return False
        return True


@dataclass(frozen=True)
class TransitionOutcome:
    tag: str
    pair: tuple[int, int]

    def __str__(self) -> str:
        return f"{self.tag} {self.pair[0]} {self.pair[1]}"


def _apply(g: Dag, a: int, b: int, cfg: ChainConfig) -> str:
    """One transition on ``g`` in place for the 0-indexed draw ``(a, b)``."""
    out = g._out
    if out[a] >> b & 1:
        if not cfg.connected or _joined_without_edge(out, g._in, a, b):
            g._remove(a, b)
            return DELETED
        if not cfg.reversal:
            return NOOP
        if cfg.max_out_degree is not None and out[b].bit_count() >= cfg.max_out_degree:
            return NOOP
        if cfg.max_in_degree is not None and g._in[a].bit_count() >= cfg.max_in_degree:
            return NOOP
        g._reverse(a, b)
        return REVERSED
    if a == b:
        return NOOP
    if cfg.max_arcs is not None and g._m >= cfg.max_arcs:
        return NOOP
    if cfg.max_out_degree is not None and out[a].bit_count() >= cfg.max_out_degree:
        return NOOP
    if cfg.max_in_degree is not None and g._in[b].bit_count() >= cfg.max_in_degree:
        return NOOP
    # covers an existing (b, a) as well: b reaches a in one hop
    if _reaches(out, b, a):
        return NOOP
    g._add(a, b)
    return ADDED


def _step(state: Dag, pair: tuple[int, int], cfg: ChainConfig) -> tuple[Dag, TransitionOutcome]:
    i, j = pair
    a, b = _vertex(state.n, i), _vertex(state.n, j)
    nxt = state.copy()
    tag = _apply(nxt, a, b, cfg)
    return nxt, TransitionOutcome(tag, (i, j))


def step_unrestricted(
    state: Dag, pair: tuple[int, int], config: Optional[ChainConfig] = None
) -> tuple[Dag, TransitionOutcome]:
    """One move of the unrestricted chain; caps are taken from ``config``."""
    cfg = ChainConfig(state.n) if config is None else config.replace(variant=UNRESTRICTED)
    return _step(state, pair, cfg)


def step_connected(
    state: Dag, pair: tuple[int, int], config: Optional[ChainConfig] = None
) -> tuple[Dag, TransitionOutcome]:
    """One move of the connected chain; reversal toggle and caps from ``config``."""
    cfg = ChainConfig(state.n, CONNECTED) if config is None else config.replace(variant=CONNECTED)
    return _step(state, pair, cfg)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def derive_seed(seed: int, index: int) -> int:
    """64-bit seed for the ``index``-th independent run under ``seed``."""
    ss = np.random.SeedSequence(seed, spawn_key=(index,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def default_start(config: ChainConfig) -> Dag:
    """Empty graph for the unrestricted chain; the path 1->2->...->n otherwise."""
    n = config.n
    if not config.connected:
        return Dag(n)
    if config.max_out_degree == 0 or config.max_in_degree == 0:
        raise ConfigError("degree cap 0 leaves no connected digraph on n >= 2 vertices")
    return Dag(n, [(i, i + 1) for i in range(1, n)])


class MarkovChain:
    """Stateful runner; owns a private copy of the current state."""

    def __init__(self, config: ChainConfig, start: Optional[Dag] = None, rng=None):
        if start is None:
            start = default_start(config)
        if start.n != config.n:
            raise InputError(f"start graph has n={start.n}, config has n={config.n}")
        if not config.admits(start):
            raise InputError(f"start graph is not a member of the {config.variant} state space")
        self.config = config
        self.state = start.copy()
        self.rng = make_rng(config.seed) if rng is None else rng
        self._codes: list[int] = []
        self._pos = 0
        self.steps_taken = 0

    def _refill(self) -> None:
        n = self.config.n
        self._codes = self.rng.integers(0, n * n, size=DRAW_BLOCK, dtype=np.int64).tolist()
        self._pos = 0

    def draw(self) -> tuple[int, int]:
        """Next pair from the stream, 1-indexed."""
        if self._pos >= len(self._codes):
            self._refill()
        c = self._codes[self._pos]
        self._pos += 1
        a, b = divmod(c, self.config.n)
        return a + 1, b + 1

    def step(self, pair: Optional[tuple[int, int]] = None) -> TransitionOutcome:
        if pair is None:
            pair = self.draw()
        i, j = pair
        tag = _apply(self.state, _vertex(self.config.n, i), _vertex(self.config.n, j), self.config)
        self.steps_taken += 1
        return TransitionOutcome(tag, (i, j))

    def iter_steps(self, k: int) -> Iterator[TransitionOutcome]:
        for _ in range(k):
            yield self.step()

    def run(self, k: int) -> Dag:
        """Advance ``k`` steps and return a snapshot of the state."""
        self.advance(k)
        return self.state.copy()

    def advance(self, k: int) -> None:
        n = self.config.n
        cfg = self.config
        g = self.state
        remaining = k
        while remaining:
            if self._pos >= len(self._codes):
                self._refill()
            take = min(remaining, len(self._codes) - self._pos)
            for c in self._codes[self._pos:self._pos + take]:
                a, b = divmod(c, n)
                _apply(g, a, b, cfg)
            self._pos += take
            remaining -= take
        self.steps_taken += k


def run_chain(config: ChainConfig, start: Optional[Dag] = None) -> Dag:
    """Apply ``config.steps`` seeded transitions from ``start`` (default start if None)."""
    return MarkovChain(config, start).run(config.steps)


def default_steps(n: int) -> int:
    return 20 * n * n


def default_burn_in(n: int) -> int:
    """``10 n^2 ln B`` with ``B = 3^(n(n-1)/2)`` bounding the number of DAGs."""
    return math.ceil(10 * n * n * (n * (n - 1) / 2) * math.log(3))


def default_gap(n: int) -> int:
    return n * n
