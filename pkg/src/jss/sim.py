"""Monte Carlo simulation of submission runs.

The vectorized driver uses a counter-based Philox generator keyed by the
seed and a fixed draw layout: one length-n block of quality draws up
front, then two length-n blocks per period (acceptance draws, feedback
draws), with episode i always at lane i.  Blocks are drawn whether or
not an episode is still alive, so results for a given (instance, order,
n_episodes, seed) are bit-for-bit reproducible and independent of how
other episodes resolved.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt
from typing import Optional

import numpy as np

from .model import Instance, SearchOrder, check_order


@dataclass(frozen=True)
class EpisodeOutcome:
    """One simulated run.

    accepted_period is 1-based; None means the paper was never accepted
    and the outside option was taken.  quality_path[t] is the quality
    ("H"/"L") entering period t+1.  realized_payoff nets out all
    submission costs actually paid (exact arithmetic).
    """

    accepted_period: Optional[int]
    accepting_journal: Optional[str]
    realized_payoff: Fraction
    quality_path: tuple[str, ...]


def simulate_episode(inst: Instance, order: SearchOrder, rng) -> EpisodeOutcome:
    """Simulate a single run; rng needs only a .random() method.

    Draws lazily (acceptance draw, then a feedback draw only when the
    paper is still low quality), so its stream layout differs from the
    fixed-block batch driver; both sample the same process.
    """
    check_order(inst, order)
    high = rng.random() < inst.prior.mu_h
    path = []
    paid = Fraction(0)
    for t, idx in enumerate(order.perm):
        j = inst.journals[idx]
        path.append("H" if high else "L")
        paid += j.c
        accept_draw = rng.random()
        if high and accept_draw < j.a:
            return EpisodeOutcome(t + 1, j.name, j.u - paid, tuple(path))
        feedback_draw = rng.random()
        if not high and feedback_draw < j.q:
            high = True
    return EpisodeOutcome(None, None, inst.outside_option - paid, tuple(path))


def _run_batch(inst: Instance, order: SearchOrder, n_episodes: int, seed: int):
    """accepted_at array (0 = outside option, else 1-based period)."""
    check_order(inst, order)
    if n_episodes < 1:
        raise ValueError("need at least one episode")
    rng = np.random.Generator(np.random.Philox(key=seed))
    n = int(n_episodes)
    high = rng.random(n) < float(inst.prior.mu_h)
    alive = np.ones(n, dtype=bool)
    accepted_at = np.zeros(n, dtype=np.int64)
    for t, idx in enumerate(order.perm):
        j = inst.journals[idx]
        accept_draw = rng.random(n)
        feedback_draw = rng.random(n)
        accepted = alive & high & (accept_draw < float(j.a))
        accepted_at[accepted] = t + 1
        alive &= ~accepted
        flipped = alive & ~high & (feedback_draw < float(j.q))
        high |= flipped
    return accepted_at


def _payoff_table(inst: Instance, order: SearchOrder) -> np.ndarray:
    """payoff_table[k] = realized payoff when accepted at period k (0 = never)."""
    paid = Fraction(0)
    payoffs = [None] * (len(order.perm) + 1)
    for t, idx in enumerate(order.perm):
        j = inst.journals[idx]
        paid += j.c
        payoffs[t + 1] = float(j.u - paid)
    payoffs[0] = float(inst.outside_option - paid)
    return np.array(payoffs, dtype=np.float64)


def estimate_value(inst: Instance, order: SearchOrder, n_episodes: int,
                   seed: int = 0) -> tuple[float, Optional[float]]:
    """Sample mean of the realized payoff and its standard error.

    The standard error uses the ddof=1 sample variance; with a single
    episode it is None.
    """
    accepted_at = _run_batch(inst, order, n_episodes, seed)
    payoffs = _payoff_table(inst, order)[accepted_at]
    mean = float(payoffs.mean())
    if n_episodes < 2:
        return mean, None
    return mean, float(payoffs.std(ddof=1) / sqrt(n_episodes))


def empirical_survival(inst: Instance, order: SearchOrder, n_episodes: int,
                       seed: int = 0) -> np.ndarray:
    """Fraction of episodes reaching each period unaccepted (length I+1).

    Entry 0 is always 1; entry I is the never-accepted frequency.  Mirrors
    the reach column of evaluate()'s trace.
    """
    accepted_at = _run_batch(inst, order, n_episodes, seed)
    periods = len(order.perm)
    freqs = np.empty(periods + 1, dtype=np.float64)
    never = accepted_at == 0
    for t in range(periods + 1):
        freqs[t] = np.mean(never | (accepted_at > t))
    return freqs


def conditional_acceptance(inst: Instance, order: SearchOrder, n_episodes: int,
                           seed: int = 0) -> list[tuple[int, int]]:
    """(episodes reaching period t, acceptances at period t) for each t."""
    accepted_at = _run_batch(inst, order, n_episodes, seed)
    never = accepted_at == 0
    out = []
    for t in range(1, len(order.perm) + 1):
        reached = int(np.sum(never | (accepted_at >= t)))
        taken = int(np.sum(accepted_at == t))
        out.append((reached, taken))
    return out
