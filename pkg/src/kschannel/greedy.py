"""Greedy one-shot steering of a shared proposal stream onto a target law.

Both parties watch the same i.i.d. stream a_1, a_2, ... drawn from a
proposal distribution p.  The sender tracks, per symbol, how much target
mass has already been covered: starting from s_0 = 0, round i claims

    delta_i(a) = min( (1 - S_{i-1}) p(a),  t(a) - s_{i-1}(a) ),
    s_i = s_{i-1} + delta_i,      S_i = sum_a s_i(a),

and accepts the drawn symbol a_i with probability
delta_i(a_i) / ((1 - S_{i-1}) p(a_i)).  The chance of surviving to round i
is exactly 1 - S_{i-1}, so the unconditional law of the accepted symbol is
sum_i delta_i = t: the receiver, who only learns the accepted round index,
ends up holding a sample distributed exactly by the target.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: rounds allowed before the protocol is declared broken
DEFAULT_ROUND_CAP = 1 << 32

#: below this remaining target mass the next wanted symbol is accepted outright
_REMAINDER_FLOOR = 1e-15


class ProtocolFailure(RuntimeError):
    """Acceptance did not happen within the round cap (or the stream ended)."""


@dataclass(eq=False)
class DiscreteDistribution:
    """Probability vector over symbols 0..n-1; validated on construction."""

    masses: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.masses, dtype=float)
        if m.ndim != 1 or m.size == 0:
            raise ValueError("masses must be a non-empty 1-D vector")
        if np.any(m < 0.0):
            raise ValueError("masses must be nonnegative")
        if abs(float(m.sum()) - 1.0) > 1e-12:
            raise ValueError(f"masses must sum to 1, got {float(m.sum())!r}")
        self.masses = m

    @property
    def n(self) -> int:
        return self.masses.size


@dataclass(eq=False)
class SamplerLedger:
    """Accepted-mass bookkeeping: s(a) per symbol, the total S, and the round index."""

    accepted_mass: np.ndarray
    total_accepted: float
    step: int
    history: list = field(default_factory=list)  # S after each completed round


def _advance(s: np.ndarray, remainder: float, target: np.ndarray,
             proposal: np.ndarray) -> np.ndarray:
    """Mass claimed this round: min((1-S) p(a), t(a) - s(a)) per symbol."""
    return np.minimum(remainder * proposal, target - s)


def _check_support(target: np.ndarray, proposal: np.ndarray) -> None:
    if np.any((proposal == 0.0) & (target > 0.0)):
        raise ValueError("target puts mass on a symbol the proposal never emits")


def greedy_one_shot(target: DiscreteDistribution, proposal: DiscreteDistribution,
                    symbols, uniforms, cap: int = DEFAULT_ROUND_CAP,
                    debug: bool = False, ledger: SamplerLedger | None = None,
                    ) -> tuple[int, int]:
    """Run the acceptance loop on explicit symbol and coin streams.

    ``symbols`` yields proposal draws (symbol indices), ``uniforms`` yields
    the sender's private coins in [0, 1); one of each is consumed per round.
    Returns (accepted round index, accepted symbol), 1-based index.  Raises
    :class:`ProtocolFailure` if either stream ends or the cap is exceeded,
    and ValueError if the proposal cannot reach the target's support.

    Pass a :class:`SamplerLedger` to observe the bookkeeping; with
    ``debug=True`` the per-round invariants (s <= t, S nondecreasing) are
    asserted as the loop runs.
    """
    t = target.masses
    p = proposal.masses
    _check_support(t, p)
    s = np.zeros_like(t)
    total = 0.0
    sym_it = iter(symbols)
    coin_it = iter(uniforms)
    i = 0
    while True:
        i += 1
        if i > cap:
            raise ProtocolFailure(f"no acceptance within {cap} rounds")
        try:
            a = int(next(sym_it))
            u = float(next(coin_it))
        except StopIteration:
            raise ProtocolFailure(f"stream exhausted after {i - 1} rounds") from None
        remainder = max(0.0, 1.0 - total)
        delta = _advance(s, remainder, t, p)
        denom = remainder * p[a]
        if remainder <= _REMAINDER_FLOOR or denom <= 0.0:
            # target mass is exhausted to float precision: terminate on the
            # next wanted symbol instead of chasing a vanishing remainder
            p_accept = 1.0 if t[a] > 0.0 else 0.0
        else:
            p_accept = min(1.0, float(delta[a]) / denom)
        if ledger is not None:
            ledger.accepted_mass = s + delta
            ledger.total_accepted = float(np.sum(s + delta))
            ledger.step = i
            ledger.history.append(ledger.total_accepted)
        if u < p_accept:
            return i, a
        s += delta
        new_total = float(np.sum(s))
        if debug:
            assert np.all(s <= t + 1e-12), "accepted mass exceeded the target"
            assert new_total >= total - 1e-15, "total accepted mass decreased"
        total = new_total


def greedy_sample_batch(target: DiscreteDistribution, proposal: DiscreteDistribution,
                        n_runs: int, rng: np.random.Generator,
                        cap: int = DEFAULT_ROUND_CAP) -> tuple[np.ndarray, np.ndarray]:
    """Run ``n_runs`` independent acceptance loops in lockstep.

    Proposal draws and coins come from ``rng``; all runs share the
    (run-independent) mass schedule, so each round is a handful of
    vectorized operations over the still-active runs.  Returns the arrays
    (accepted round indices, accepted symbols).
    """
    t = target.masses
    p = proposal.masses
    _check_support(t, p)
    cdf = np.cumsum(p)
    indices = np.zeros(n_runs, dtype=np.int64)
    symbols_out = np.zeros(n_runs, dtype=np.int64)
    active = np.arange(n_runs)
    s = np.zeros_like(t)
    total = 0.0
    i = 0
    while active.size:
        i += 1
        if i > cap:
            raise ProtocolFailure(f"no acceptance within {cap} rounds")
        remainder = max(0.0, 1.0 - total)
        delta = _advance(s, remainder, t, p)
        a = np.searchsorted(cdf, rng.random(active.size), side="right")
        np.clip(a, 0, t.size - 1, out=a)
        if remainder <= _REMAINDER_FLOOR:
            p_accept = (t[a] > 0.0).astype(float)
        else:
            denom = remainder * p[a]
            with np.errstate(divide="ignore", invalid="ignore"):
                p_accept = np.where(denom > 0.0, delta[a] / denom,
                                    (t[a] > 0.0).astype(float))
            np.minimum(p_accept, 1.0, out=p_accept)
        u = rng.random(active.size)
        hit = u < p_accept
        indices[active[hit]] = i
        symbols_out[active[hit]] = a[hit]
        active = active[~hit]
        s += delta
        total = float(np.sum(s))
    return indices, symbols_out
