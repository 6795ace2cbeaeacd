"""Exhaustive ground truth for small vertex counts.

Enumerates a chain's full state space, builds its transition matrix with
exact integer counts over the common denominator ``n**2``, and checks the
structural facts the sampler relies on.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .chain import ChainConfig, _apply, default_start
from .dag import Dag, _reaches, _spans
from .exceptions import OracleLimitError

ORACLE_MAX_N = 5


@dataclass
class StateSpace:
    config: ChainConfig
    states: list[Dag]
    index: dict[tuple[int, ...], int] = field(repr=False)

    @property
    def n(self) -> int:
        return self.config.n

    def __len__(self) -> int:
        return len(self.states)

    def ordinal(self, g: Dag) -> int:
        return self.index[g.key()]

    def arc_counts(self) -> np.ndarray:
        return np.array([g.num_arcs for g in self.states], dtype=np.int64)


def enumerate_space(config: ChainConfig, max_n: int = ORACLE_MAX_N) -> StateSpace:
    """All members of the configured state space, in canonical mask order.

    Each unordered pair is left empty or oriented one of two ways; branches
    that close a circuit or exceed a cap are pruned as soon as they appear.
    """
    n = config.n
    if n > max_n:
        raise OracleLimitError(
            f"exhaustive enumeration refused for n={n} (cap {max_n}); "
            "use sampling or histogram mode instead"
        )
    pairs = list(itertools.combinations(range(n), 2))
    out = [0] * n
    inn = [0] * n
    max_arcs = config.max_arcs
    max_out = config.max_out_degree
    max_in = config.max_in_degree
    found: list[Dag] = []

    def fits(a: int, b: int, m: int) -> bool:
        if max_arcs is not None and m >= max_arcs:
            return False
        if max_out is not None and out[a].bit_count() >= max_out:
            return False
        if max_in is not None and inn[b].bit_count() >= max_in:
            return False
        return not _reaches(out, b, a)

    def grow(k: int, m: int) -> None:
        if k == len(pairs):
            if not config.connected or _spans(out, inn, n):
                found.append(Dag._from_rows(n, out))
            return
        grow(k + 1, m)
        a, b = pairs[k]
        for s, t in ((a, b), (b, a)):
            if fits(s, t, m):
                out[s] |= 1 << t
                inn[t] |= 1 << s
                grow(k + 1, m + 1)
                out[s] &= ~(1 << t)
                inn[t] &= ~(1 << s)

    grow(0, 0)
    found.sort(key=Dag.to_mask)
    index = {g.key(): k for k, g in enumerate(found)}
    return StateSpace(config, found, index)


@dataclass
class TransitionMatrix:
    """Entry ``[x, y]`` is ``counts[x, y] / denominator``."""

    space: StateSpace
    counts: sparse.csr_array
    denominator: int

    @property
    def size(self) -> int:
        return self.counts.shape[0]

    def entry(self, x: int, y: int) -> Fraction:
        return Fraction(int(self.counts[x, y]), self.denominator)

    def to_float(self) -> sparse.csr_array:
        return (self.counts.astype(np.float64) / self.denominator).tocsr()

    def neighbors(self) -> list[list[int]]:
        """Off-diagonal positive-transition adjacency lists."""
        c = self.counts
        return [
            [int(y) for y in c.indices[c.indptr[x]:c.indptr[x + 1]] if y != x]
            for x in range(self.size)
        ]


def build_matrix(space: StateSpace) -> TransitionMatrix:
    """Apply the chain's step to every state under each of the ``n**2`` draws."""
    cfg = space.config
    n = cfg.n
    index = space.index
    rows: list[int] = []
    cols: list[int] = []
    for x, g in enumerate(space.states):
        for a in range(n):
            for b in range(n):
                h = g.copy()
                _apply(h, a, b, cfg)
                rows.append(x)
                cols.append(index[tuple(h._out)])
    data = np.ones(len(rows), dtype=np.int64)
    size = len(space)
    counts = sparse.coo_array((data, (rows, cols)), shape=(size, size)).tocsr()
    counts.sum_duplicates()
    return TransitionMatrix(space, counts, n * n)


def check_rows_exact(m: TransitionMatrix) -> bool:
    return bool(np.all(m.counts.sum(axis=1) == m.denominator))


def check_doubly_stochastic(m: TransitionMatrix) -> bool:
    return check_rows_exact(m) and bool(np.all(m.counts.sum(axis=0) == m.denominator))


def check_symmetric(m: TransitionMatrix) -> tuple[bool, Optional[tuple[int, int]]]:
    """Exact ``P[x, y] == P[y, x]``; on failure also return an offending pair."""
    diff = (m.counts - m.counts.T).tocoo()
    diff.eliminate_zeros()
    if diff.nnz == 0:
        return True, None
    return False, (int(diff.row[0]), int(diff.col[0]))


def min_self_loop(m: TransitionMatrix) -> int:
    """Smallest diagonal count; ``>= n`` certifies a holding draw in every state."""
    return int(m.counts.diagonal().min())


def max_offdiagonal(m: TransitionMatrix) -> int:
    c = m.counts.tocoo()
    off = c.data[c.row != c.col]
    return int(off.max()) if off.size else 0


def _reach(adj: list[list[int]], src: int) -> int:
    seen = [False] * len(adj)
    seen[src] = True
    stack = [src]
    count = 1
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if not seen[y]:
                seen[y] = True
                count += 1
                stack.append(y)
    return count


def check_irreducible(m: TransitionMatrix) -> bool:
    """Strong connectivity of the positive-transition digraph."""
    if m.size == 0:
        return False
    fwd = m.neighbors()
    bwd: list[list[int]] = [[] for _ in range(m.size)]
    for x, ys in enumerate(fwd):
        for y in ys:
            bwd[y].append(x)
    return _reach(fwd, 0) == m.size and _reach(bwd, 0) == m.size


def _orbit_representatives(space: StateSpace) -> list[int]:
    # Relabeling vertices maps states to states and transitions to transitions
    # (caps are label-blind), so eccentricity is constant on each orbit.
    n = space.n
    covered = np.zeros(len(space), dtype=bool)
    reps: list[int] = []
    perms = list(itertools.permutations(range(n)))
    for x, g in enumerate(space.states):
        if covered[x]:
            continue
        reps.append(x)
        arcs = [(a - 1, b - 1) for a, b in g.arcs]
        for p in perms:
            out = [0] * n
            for a, b in arcs:
                out[p[a]] |= 1 << p[b]
            covered[space.index[tuple(out)]] = True
    return reps


def eccentricities(m: TransitionMatrix, sources: Optional[Sequence[int]] = None) -> np.ndarray:
    if sources is None:
        sources = range(m.size)
    dist = csgraph.shortest_path(
        m.counts, method="D", directed=True, unweighted=True, indices=list(sources)
    )
    return dist.max(axis=1)


def diameter(m: TransitionMatrix, use_symmetry: bool = True) -> Union[int, float]:
    """Longest shortest transition path over ordered state pairs.

    Returns ``math.inf`` when some state cannot reach another.
    """
    if not check_irreducible(m):
        return math.inf
    sources = _orbit_representatives(m.space) if use_symmetry else None
    ecc = eccentricities(m, sources)
    return int(ecc.max())


def path_length_bound(n: int) -> int:
    """``floor((n + 7)(n - 3/2))``: the connected chain's path-length bound."""
    return (n + 7) * (2 * n - 3) // 2


def uniform(size: int) -> np.ndarray:
    return np.full(size, 1.0 / size)


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def evolve(m: TransitionMatrix, d: np.ndarray, t: int) -> np.ndarray:
    """Distribution after ``t`` steps from ``d`` (``d_{k+1} = d_k P``)."""
    pt = m.to_float().T.tocsr()
    d = np.asarray(d, dtype=np.float64)
    for _ in range(t):
        d = pt @ d
    return d


def check_convergence(m: TransitionMatrix, d: Union[np.ndarray, int], t: int) -> float:
    """Total-variation distance between ``d P^t`` and uniform.

    ``d`` is a distribution vector or a state ordinal (point mass).
    """
    if isinstance(d, (int, np.integer)):
        v = np.zeros(m.size)
        v[int(d)] = 1.0
        d = v
    d = np.asarray(d, dtype=np.float64)
    if d.shape != (m.size,) or np.any(d < 0) or not math.isclose(d.sum(), 1.0, abs_tol=1e-12):
        raise ValueError("d must be a probability vector over the state space")
    return total_variation(evolve(m, d, t), uniform(m.size))


def start_ordinal(space: StateSpace) -> int:
    return space.ordinal(default_start(space.config))


def verify_summary(m: TransitionMatrix, convergence_steps: int = 10_000) -> dict:
    """Machine-readable report of every structural check on one matrix."""
    space = m.space
    cfg = space.config
    n = cfg.n
    symmetric, witness = check_symmetric(m)
    irreducible = check_irreducible(m)
    diam = diameter(m) if irreducible else math.inf
    bound = path_length_bound(n) if cfg.connected else n * (n - 1)
    tv = check_convergence(m, start_ordinal(space), convergence_steps) if irreducible else None
    return {
        "n": n,
        "variant": cfg.variant,
        "reversal": cfg.reversal,
        "max_arcs": cfg.max_arcs,
        "max_out_degree": cfg.max_out_degree,
        "max_in_degree": cfg.max_in_degree,
        "states": len(space),
        "rows_exact": check_rows_exact(m),
        "doubly_stochastic": check_doubly_stochastic(m),
        "symmetric": symmetric,
        "asymmetric_pair": witness,
        "min_self_loop": min_self_loop(m),
        "max_offdiagonal": max_offdiagonal(m),
        "irreducible": irreducible,
        "diameter": diam if diam != math.inf else None,
        "diameter_bound": bound,
        "convergence_steps": convergence_steps,
        "convergence_tv": tv,
    }
