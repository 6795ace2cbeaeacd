"""Empirical checks of the sampler against the exact uniform distribution."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import numpy as np
from scipy import stats as sps

from .chain import ChainConfig, MarkovChain, default_burn_in, default_gap, derive_seed
from .dag import Dag
from .exceptions import OracleLimitError
from .oracle import ORACLE_MAX_N, StateSpace, enumerate_space

STATES = "states"
HISTOGRAM = "histogram"


@dataclass
class SampleSummary:
    config: ChainConfig
    mode: str
    count: int
    burn_in: int
    gap: int
    chains: int
    arc_histogram: np.ndarray
    state_counts: Optional[np.ndarray] = None
    chi2: Optional[float] = None
    dof: Optional[int] = None
    tv: Optional[float] = None
    extra: dict = field(default_factory=dict)

    @property
    def mean_arcs(self) -> float:
        k = np.arange(len(self.arc_histogram))
        return float((k * self.arc_histogram).sum() / self.count)

    @property
    def frequencies(self) -> Optional[np.ndarray]:
        if self.state_counts is None:
            return None
        return self.state_counts / self.count

    def as_dict(self) -> dict:
        out = {
            "n": self.config.n,
            "variant": self.config.variant,
            "reversal": self.config.reversal,
            "seed": self.config.seed,
            "mode": self.mode,
            "count": self.count,
            "burn_in": self.burn_in,
            "gap": self.gap,
            "chains": self.chains,
            "mean_arcs": self.mean_arcs,
            "chi2": self.chi2,
            "dof": self.dof,
            "tv": self.tv,
        }
        out.update(self.extra)
        return out


def _tally(config: ChainConfig, burn_in: int, gap: int, count: int, index: Optional[dict]):
    n = config.n
    hist = np.zeros(n * (n - 1) // 2 + 1, dtype=np.int64)
    states = np.zeros(len(index), dtype=np.int64) if index is not None else None
    mc = MarkovChain(config)
    mc.advance(burn_in)
    g = mc.state
    for _ in range(count):
        mc.advance(gap)
        hist[g.num_arcs] += 1
        if states is not None:
            states[index[tuple(g._out)]] += 1
    return hist, states


def sample_chain(
    config: ChainConfig,
    burn_in: Optional[int] = None,
    gap: Optional[int] = None,
    count: int = 10_000,
    *,
    mode: str = STATES,
    chains: int = 1,
    space: Optional[StateSpace] = None,
    n_jobs: int = 1,
) -> SampleSummary:
    """Run the chain(s) from the default start and tally recorded states.

    Each of ``chains`` independent runs (seeds derived from ``config.seed``
    and the chain index; a single chain uses ``config.seed`` as is) discards
    ``burn_in`` steps, then records ``count / chains`` states ``gap`` steps
    apart. ``mode="states"`` tallies per state against the enumerated space
    and computes chi-square and total variation; ``mode="histogram"`` only
    tallies arc counts and works for any ``n``.
    """
    n = config.n
    burn_in = default_burn_in(n) if burn_in is None else burn_in
    gap = default_gap(n) if gap is None else gap
    if mode not in (STATES, HISTOGRAM):
        raise ValueError(f"mode must be {STATES!r} or {HISTOGRAM!r}")
    if burn_in < 0 or gap < 1 or count < 1 or chains < 1:
        raise ValueError("need burn_in >= 0, gap >= 1, count >= 1, chains >= 1")
    index = None
    if mode == STATES:
        if space is None:
            if n > ORACLE_MAX_N:
                raise OracleLimitError(
                    f"per-state tallies need n <= {ORACLE_MAX_N}; use mode='histogram'"
                )
            space = enumerate_space(config)
        index = space.index

    if chains == 1:
        jobs = [(config, burn_in, gap, count, index)]
    else:
        share, extra = divmod(count, chains)
        jobs = [
            (config.replace(seed=derive_seed(config.seed, k)), burn_in, gap, share + (k < extra), index)
            for k in range(chains)
        ]
    if n_jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            parts = list(pool.map(_tally, *zip(*jobs)))
    else:
        parts = [_tally(*job) for job in jobs]

    hist = sum(p[0] for p in parts)
    summary = SampleSummary(config, mode, count, burn_in, gap, chains, hist)
    if mode == STATES:
        counts = sum(p[1] for p in parts)
        summary.state_counts = counts
        summary.tv = total_variation_uniform(counts)
        if count / len(counts) >= 5:
            summary.chi2, summary.dof = chi_square_uniform(counts, len(counts))
    return summary


def total_variation_uniform(counts: np.ndarray) -> float:
    counts = np.asarray(counts, dtype=np.float64)
    return 0.5 * float(np.abs(counts / counts.sum() - 1.0 / len(counts)).sum())


def chi_square_uniform(freqs, space_size: int) -> tuple[float, int]:
    """Pearson statistic of observed counts against the uniform law.

    ``freqs`` lists the observed count of every state (missing trailing
    states may be omitted and count as zero).
    """
    obs = np.zeros(space_size, dtype=np.float64)
    f = np.asarray(freqs, dtype=np.float64)
    if f.size > space_size:
        raise ValueError("more frequency cells than states")
    obs[: f.size] = f
    expected = obs.sum() / space_size
    if expected < 5:
        raise ValueError(
            f"expected count per state is {expected:.2f} < 5; draw a larger sample"
        )
    return float(((obs - expected) ** 2).sum() / expected), space_size - 1


def chi_square_band(dof: int, lower: float = 0.001, upper: float = 0.999) -> tuple[float, float]:
    return float(sps.chi2.ppf(lower, dof)), float(sps.chi2.ppf(upper, dof))


def uniform_arc_moments(space: StateSpace) -> tuple[float, float]:
    """Exact mean and variance of the arc count under the uniform law."""
    k = space.arc_counts().astype(np.float64)
    return float(k.mean()), float(k.var())


@dataclass
class ArcProfile:
    histogram: dict[int, int]
    mean: float
    count: int
    reference: Optional[float] = None

    def rows(self) -> list[tuple[int, int]]:
        return sorted(self.histogram.items())

    def to_csv(self) -> str:
        return "arc_count,frequency\n" + "".join(f"{k},{v}\n" for k, v in self.rows())


def arc_count_profile(
    config: ChainConfig, samples: Union[SampleSummary, Iterable[Dag]]
) -> ArcProfile:
    """Arc-count distribution of sampled states.

    For the unrestricted chain the profile carries ``n**2 / 4`` as a
    reference value; that average is an asymptotic statement, so only a
    qualitative comparison is meaningful at small ``n``.
    """
    if isinstance(samples, SampleSummary):
        hist = {k: int(v) for k, v in enumerate(samples.arc_histogram) if v}
    else:
        hist = {}
        for g in samples:
            hist[g.num_arcs] = hist.get(g.num_arcs, 0) + 1
    total = sum(hist.values())
    mean = sum(k * v for k, v in hist.items()) / total if total else math.nan
    ref = config.n ** 2 / 4 if not config.connected else None
    return ArcProfile(hist, mean, total, ref)
