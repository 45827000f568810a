"""Finite-communication simulation of the qubit prepare/measure channel.

One trial: the sender knows the Bloch vector v, both parties hold the same
seeded codebook of uniform sphere points (the shared randomness), and the
sender steers the stream onto the conditional density of the hemisphere
model by greedy rejection over height bins, transmitting only the Elias
delta code of the accepted round index.  The receiver decodes the index,
regenerates that codebook entry, and answers the measurement with the
hemisphere response.  The receiver's point is then distributed exactly by
the bin-averaged conditional density, so the simulation error is purely
the 1-D binning of the height z = v.x, of order 1/bins.

Wire format: the raw Elias delta bitstring of the accepted index, most
significant bit first, no padding.  Everything is deterministic given the
64-bit master seed; trial t uses sub-streams keyed off mix(master, t), so
results are independent of chunking and worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .coding import code_lengths, elias_delta_decode, elias_delta_encode
from .geometry import Measurement, born_from_dot, dot3, require_unit, sphere_from_zphi
from .greedy import (DEFAULT_ROUND_CAP, _REMAINDER_FLOOR, DiscreteDistribution,
                     ProtocolFailure, _advance, greedy_one_shot)
from .model import ks_response
from .rngstream import mix, mix_vec, to_unit

_TWO_PI = 2.0 * np.pi

#: salt separating the trial-key stream from other uses of the master seed
_TRIAL_SALT = 0x747269616C
#: per-trial sub-stream indices
_SUB_CODEBOOK, _SUB_ACCEPT, _SUB_STATE, _SUB_MEAS = 1, 2, 3, 4

#: trials per vectorized chunk; fixed so that results never depend on worker count
_CHUNK = 8192


@dataclass(frozen=True)
class Codebook:
    """Shared stream of uniform sphere points, random-access by entry index.

    Entry i >= 1 is built from the two counter words (2i, 2i+1) of the
    seed's stream: z = 2 u - 1 from the first, azimuth = 2 pi u' from the
    second.  Both parties reconstruct any entry independently, bit for bit.
    """

    seed: int

    def entries(self, indices) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.uint64)
        if np.any(np.asarray(indices) < 1):
            raise ValueError("codebook entries are indexed from 1")
        z = 2.0 * to_unit(mix_vec(self.seed, 2 * idx)) - 1.0
        phi = _TWO_PI * to_unit(mix_vec(self.seed, 2 * idx + np.uint64(1)))
        return sphere_from_zphi(z, phi)

    def entry(self, i: int) -> np.ndarray:
        return self.entries(np.array([i], dtype=np.uint64))[0]


@dataclass(eq=False)
class TrialReport:
    """One simulated trial; ``meas``/``outcome`` stay None on the sender side."""

    state: np.ndarray
    meas: np.ndarray | None
    accepted_index: int
    code_bits: int
    outcome: int | None


@dataclass(eq=False)
class TrialBatch:
    """Per-trial arrays for a batch of simulated trials."""

    states: np.ndarray          # (n, 3)
    meas: np.ndarray            # (n, 3)
    accepted_index: np.ndarray  # (n,) int64
    code_bits: np.ndarray       # (n,) int64
    outcome: np.ndarray         # (n,) +1 / -1
    born: np.ndarray            # (n,) quantum "+" probability per trial
    points: np.ndarray          # (n, 3) the codebook entry the receiver regenerates

    @property
    def n(self) -> int:
        return self.accepted_index.size


def ks_bin_masses(bins: int) -> np.ndarray:
    """Target mass per height bin: integral of 2z over the bin's overlap with (0, 1].

    Bins partition z in [-1, 1] uniformly; ``bins`` must be even so that an
    edge falls exactly on z = 0 and no bin straddles the support boundary.
    """
    if bins < 2 or bins % 2:
        raise ValueError(f"bins must be even and >= 2, got {bins}")
    j = np.arange(bins + 1, dtype=float)
    edges = np.clip((2.0 * j - bins) / bins, 0.0, 1.0)
    return edges[1:] ** 2 - edges[:-1] ** 2


def bin_index(z, bins: int) -> np.ndarray:
    """Map height values in [-1, 1] to bin indices 0..bins-1."""
    idx = np.floor((np.asarray(z, dtype=float) + 1.0) * (bins / 2.0)).astype(np.int64)
    return np.clip(idx, 0, bins - 1)


def discretize_ks(v, bins: int):
    """Height-bin reduction of the steering problem for state v.

    Returns (target, proposal, binner): the bin law of z = v.x under the
    conditional density, the uniform bin law it has under the codebook
    stream (z is uniform for uniform sphere points), and a function mapping
    sphere points to their bin.
    """
    v = require_unit(v, "state v")
    target = DiscreteDistribution(ks_bin_masses(bins))
    proposal = DiscreteDistribution(np.full(bins, 1.0 / bins))

    def binner(x) -> np.ndarray:
        return bin_index(dot3(x, v), bins)

    return target, proposal, binner


def alice_send(state, codebook: Codebook, bins: int, accept_uniforms,
               cap: int = DEFAULT_ROUND_CAP) -> tuple[str, TrialReport]:
    """Sender half of one trial: steer the codebook onto rho(.|state).

    ``accept_uniforms`` supplies the sender's private coins (an iterable of
    floats in [0, 1), one per round).  Returns the transmitted bitstring
    and the sender-side report.
    """
    state = require_unit(state, "state")
    target, proposal, binner = discretize_ks(state, bins)

    def binned_stream():
        i = 1
        while True:
            yield int(binner(codebook.entry(i)))
            i += 1

    index, _ = greedy_one_shot(target, proposal, binned_stream(), accept_uniforms, cap=cap)
    bits = elias_delta_encode(index)
    report = TrialReport(state=state, meas=None, accepted_index=index,
                         code_bits=len(bits), outcome=None)
    return bits, report


def bob_receive(bits: str, codebook: Codebook, meas: Measurement) -> int:
    """Receiver half: decode the index, regenerate the point, answer the measurement."""
    index = elias_delta_decode(bits)
    return int(ks_response(codebook.entry(index), meas))


def _trial_keys(master_seed: int, indices: np.ndarray) -> dict[str, np.ndarray]:
    root = mix(master_seed, _TRIAL_SALT)
    trial = mix_vec(root, indices)
    return {
        "codebook": mix_vec(trial, _SUB_CODEBOOK),
        "accept": mix_vec(trial, _SUB_ACCEPT),
        "state": mix_vec(trial, _SUB_STATE),
        "meas": mix_vec(trial, _SUB_MEAS),
    }


def _counter_sphere(keys: np.ndarray) -> np.ndarray:
    z = 2.0 * to_unit(mix_vec(keys, 1)) - 1.0
    phi = _TWO_PI * to_unit(mix_vec(keys, 2))
    return sphere_from_zphi(z, phi)


def trial_codebook(master_seed: int, trial_index: int) -> Codebook:
    """The per-trial codebook both parties derive from the shared master seed."""
    keys = _trial_keys(master_seed, np.array([trial_index], dtype=np.uint64))
    return Codebook(seed=int(keys["codebook"][0]))


def run_trial(master_seed: int, trial_index: int, bins: int,
              state=None, meas=None, cap: int = DEFAULT_ROUND_CAP) -> TrialReport:
    """Reference scalar path for one complete trial (sender then receiver).

    Bit-identical to the corresponding row of :func:`run_trials`.
    """
    keys = _trial_keys(master_seed, np.array([trial_index], dtype=np.uint64))
    v = np.asarray(state, float) if state is not None else _counter_sphere(keys["state"])[0]
    m = np.asarray(meas, float) if meas is not None else _counter_sphere(keys["meas"])[0]
    codebook = Codebook(seed=int(keys["codebook"][0]))
    acc_key = int(keys["accept"][0])

    def coins():
        i = 1
        while True:
            yield to_unit(mix(acc_key, i))
            i += 1

    bits, report = alice_send(v, codebook, bins, coins(), cap=cap)
    outcome = bob_receive(bits, codebook, Measurement(m))
    return TrialReport(state=v, meas=m, accepted_index=report.accepted_index,
                       code_bits=report.code_bits, outcome=outcome)


def _run_chunk(master_seed: int, start: int, count: int, bins: int,
               state, meas, cap: int) -> TrialBatch:
    indices = np.arange(start, start + count, dtype=np.uint64)
    keys = _trial_keys(master_seed, indices)
    if state is not None:
        v = np.broadcast_to(np.asarray(state, float), (count, 3)).copy()
    else:
        v = _counter_sphere(keys["state"])
    if meas is not None:
        m = np.broadcast_to(np.asarray(meas, float), (count, 3)).copy()
    else:
        m = _counter_sphere(keys["meas"])

    target = ks_bin_masses(bins)
    proposal = np.full(bins, 1.0 / bins)
    s = np.zeros(bins)
    total = 0.0

    accepted = np.zeros(count, dtype=np.int64)
    x_final = np.zeros((count, 3))
    active = np.arange(count)
    cb_keys = keys["codebook"]
    acc_keys = keys["accept"]
    i = 0
    while active.size:
        i += 1
        if i > cap:
            raise ProtocolFailure(f"no acceptance within {cap} rounds")
        remainder = max(0.0, 1.0 - total)
        delta = _advance(s, remainder, target, proposal)
        cb = cb_keys[active]
        uz = to_unit(mix_vec(cb, 2 * i))
        uphi = to_unit(mix_vec(cb, 2 * i + 1))
        x = sphere_from_zphi(2.0 * uz - 1.0, _TWO_PI * uphi)
        bidx = bin_index(dot3(x, v[active]), bins)
        if remainder <= _REMAINDER_FLOOR:
            p_accept = (target[bidx] > 0.0).astype(float)
        else:
            p_accept = np.minimum(1.0, delta[bidx] / (remainder * proposal[bidx]))
        u = to_unit(mix_vec(acc_keys[active], i))
        hit = u < p_accept
        rows = active[hit]
        accepted[rows] = i
        x_final[rows] = x[hit]
        active = active[~hit]
        s += delta
        total = float(np.sum(s))

    outcome = np.where(dot3(x_final, m) >= 0.0, 1, -1)
    born = np.asarray(born_from_dot(dot3(v, m)))
    return TrialBatch(states=v, meas=m, accepted_index=accepted,
                      code_bits=code_lengths(accepted), outcome=outcome, born=born,
                      points=x_final)


def run_trials(master_seed: int, n_trials: int, bins: int, state=None, meas=None,
               workers: int = 1, cap: int = DEFAULT_ROUND_CAP) -> TrialBatch:
    """Simulate ``n_trials`` independent trials, vectorized in fixed chunks.

    ``state`` / ``meas`` fix the prepared state or measurement direction for
    every trial; when None they are drawn uniformly per trial from the
    trial's own counter stream.  The chunk grid is constant, so any worker
    count yields bit-identical results.
    """
    if state is not None:
        state = require_unit(state, "state")
    if meas is not None:
        meas = require_unit(meas, "measurement direction")
    spans = [(s0, min(_CHUNK, n_trials - s0)) for s0 in range(0, n_trials, _CHUNK)]
    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(
                lambda sp: _run_chunk(master_seed, sp[0], sp[1], bins, state, meas, cap), spans))
    else:
        parts = [_run_chunk(master_seed, s0, c, bins, state, meas, cap) for s0, c in spans]
    if not parts:
        empty3 = np.zeros((0, 3))
        empty = np.zeros(0, dtype=np.int64)
        return TrialBatch(empty3, empty3, empty, empty, empty.copy(), np.zeros(0), empty3.copy())
    return TrialBatch(
        states=np.concatenate([p.states for p in parts]),
        meas=np.concatenate([p.meas for p in parts]),
        accepted_index=np.concatenate([p.accepted_index for p in parts]),
        code_bits=np.concatenate([p.code_bits for p in parts]),
        outcome=np.concatenate([p.outcome for p in parts]),
        born=np.concatenate([p.born for p in parts]),
        points=np.concatenate([p.points for p in parts]),
    )
