"""Command-line harness: verification sweeps, protocol runs, and cost accounting.

Subcommands
-----------
verify    direct-model sweep over a grid of state/measurement angles,
          empirical "+" rates against the Born rule
simulate  full sender -> bitstring -> receiver pipeline per trial, Born
          conformance plus code-length statistics
mi        exact and Monte Carlo mutual information, with the two entropies
cost      accepted-index and code-length histograms, plug-in entropy, and
          the reference communication costs from the literature

Reports are JSON (default) or flat CSV with identical numbers; every
statistic carries its sample count.  Runs are deterministic given --seed
for any worker count.  Exit codes: 0 success, 1 a requested check failed,
2 usage error, 3 runtime/protocol failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .geometry import (Measurement, born_from_dot, random_unit_vec, rotate_to_frame,
                       sphere_from_zphi)
from .greedy import ProtocolFailure
from .info import (conditional_entropy_ks, exact_ks_mi, marginal_entropy_ks,
                   mc_mutual_information)
from .model import KsModel, ks_response, ks_sample
from .protocol import ks_bin_masses, run_trials
from .rngstream import mix

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3

_DEFAULT_SEED = 7
_DEFAULT_TRIALS = {"verify": 1_000_000, "simulate": 100_000, "mi": 1_000_000, "cost": 100_000}
_DEFAULT_BINS = 4096
_GRID_ANGLES = 13

_VERIFY_SALT = 0x766679
_MI_SALT = 0x6D69

#: reference one-shot / amortized costs (bits) for single-qubit simulation
REFERENCE_COSTS = (
    {"protocol": "hemisphere_model_parallel_limit", "bits": None, "note": "amortized limit = I(X:Psi)"},
    {"protocol": "toner_bacon_single_shot", "bits": 2.0, "note": "exactly 2 bits per realization"},
    {"protocol": "toner_bacon_amortized", "bits": 1.85, "note": "parallel simulations"},
    {"protocol": "cerf_gisin_massar_average", "bits": 2.19, "note": "average over realizations"},
)


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation: one subcommand plus its sampling budget and streams."""

    command: str
    trials: int
    seed: int
    bins: int
    state: tuple[float, float, float] | None
    meas: tuple[float, float, float] | None
    out: str | None
    format: str
    workers: int


def _vector_arg(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 'x,y,z', got {text!r}")
    try:
        v = np.array([float(p) for p in parts])
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-numeric component in {text!r}") from None
    norm = float(np.linalg.norm(v))
    if norm < 1e-12:
        raise argparse.ArgumentTypeError("vector must have nonzero length")
    v = v / norm
    return (float(v[0]), float(v[1]), float(v[2]))


def _bins_arg(text: str) -> int:
    try:
        bins = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bins must be an integer, got {text!r}") from None
    if bins < 2 or bins % 2:
        raise argparse.ArgumentTypeError(f"bins must be even and >= 2, got {bins}")
    return bins


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kschannel",
        description="Classical one-shot simulation of a qubit channel from the hemisphere model.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("verify", "direct-model Born-rule sweep over a polar-angle grid"),
            ("simulate", "full sender/receiver protocol with code-length statistics"),
            ("mi", "exact and Monte Carlo mutual information"),
            ("cost", "communication-cost histograms and reference comparison")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--trials", type=_positive_int, default=None,
                       help=f"samples per cell / trials (default {_DEFAULT_TRIALS[name]})")
        p.add_argument("--seed", type=int, default=_DEFAULT_SEED,
                       help=f"64-bit master seed (default {_DEFAULT_SEED})")
        p.add_argument("--bins", type=_bins_arg, default=_DEFAULT_BINS,
                       help=f"height bins for the protocol, even (default {_DEFAULT_BINS})")
        p.add_argument("--state", type=_vector_arg, default=None, metavar="X,Y,Z",
                       help="fix the prepared Bloch vector (normalized on ingest)")
        p.add_argument("--meas", type=_vector_arg, default=None, metavar="X,Y,Z",
                       help="fix the measurement direction (normalized on ingest)")
        p.add_argument("--out", default=None, metavar="PATH",
                       help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--workers", type=_positive_int, default=1,
                       help="worker threads for trial chunks; never changes results")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        trials=args.trials if args.trials is not None else _DEFAULT_TRIALS[args.command],
        seed=args.seed,
        bins=args.bins,
        state=args.state,
        meas=args.meas,
        out=args.out,
        format=args.format,
        workers=args.workers,
    )


def _binomial_sigma(p: float, n: int) -> float:
    return float(np.sqrt(max(0.0, p * (1.0 - p)) / n))


def cmd_verify(cfg: RunConfig) -> tuple[dict, bool]:
    """Direct-model sweep: sample the conditional density, answer the measurement."""
    if cfg.state is not None and cfg.meas is not None:
        grid = [None]  # both directions pinned: a single cell at their actual angle
    else:
        grid = np.linspace(-1.0, 1.0, _GRID_ANGLES).tolist()
    root = mix(cfg.seed, _VERIFY_SALT)
    cells = []
    for j, target_dot in enumerate(grid):
        rng = np.random.default_rng(mix(root, j))
        if target_dot is None:
            v = np.asarray(cfg.state, float)
            m = np.asarray(cfg.meas, float)
        else:
            pole = np.asarray(cfg.state, float) if cfg.state is not None else random_unit_vec(rng)
            tilt = sphere_from_zphi(target_dot, 0.0)
            m = rotate_to_frame(tilt, pole)
            v = pole
            if cfg.meas is not None:
                # fixed measurement: sweep the state around it instead
                m, v = np.asarray(cfg.meas, float), rotate_to_frame(tilt, np.asarray(cfg.meas, float))
        meas = Measurement(m)
        x = ks_sample(v, rng, cfg.trials)
        empirical = float(np.mean(ks_response(x, meas) == 1))
        born = float(born_from_dot(np.sum(v * m)))
        sigma = _binomial_sigma(born, cfg.trials)
        cells.append({
            "v_dot_m": float(np.sum(v * m)),
            "born": born,
            "empirical": empirical,
            "abs_error": abs(empirical - born),
            "std_error": sigma,
            "n": cfg.trials,
            "passed": bool(abs(empirical - born) <= 3.0 * sigma),
        })
    all_passed = all(c["passed"] for c in cells)
    results = {
        "cells": cells,
        "checks": [{"name": "born_rule_3sigma_all_cells", "passed": all_passed,
                    "detail": f"{sum(c['passed'] for c in cells)}/{len(cells)} cells within 3 sigma"}],
    }
    return results, all_passed


def _code_bit_stats(code_bits: np.ndarray) -> dict:
    n = int(code_bits.size)
    mean = float(np.mean(code_bits))
    return {
        "mean": mean,
        "std_error": float(np.std(code_bits, ddof=1) / np.sqrt(n)) if n > 1 else 0.0,
        "p50": float(np.percentile(code_bits, 50)),
        "p99": float(np.percentile(code_bits, 99)),
        "max": int(np.max(code_bits)),
        "n": n,
    }


def _cost_sandwich(stats: dict) -> dict:
    mi = exact_ks_mi()
    upper = mi + 2.0 * np.log2(mi + 1.0) + 2.0 * np.log2(np.e)
    slack = 3.0 * stats["std_error"]
    passed = (mi - slack) <= stats["mean"] <= (upper + slack)
    return {"lower_bits": mi, "upper_bits": float(upper), "mean_bits": stats["mean"],
            "slack_3se": slack, "passed": bool(passed)}


def cmd_simulate(cfg: RunConfig) -> tuple[dict, bool]:
    """Full protocol pipeline; Born conformance plus code-length statistics."""
    batch = run_trials(cfg.seed, cfg.trials, cfg.bins, state=cfg.state, meas=cfg.meas,
                       workers=cfg.workers)
    plus = (batch.outcome == 1).astype(float)
    empirical = float(np.mean(plus))
    born_mean = float(np.mean(batch.born))
    err = plus - batch.born
    se = float(np.std(err, ddof=1) / np.sqrt(batch.n)) if batch.n > 1 else 0.0
    discretization = 1.0 / (2.0 * cfg.bins)
    conformance_tol = 3.0 * se + discretization
    born_ok = abs(empirical - born_mean) <= conformance_tol
    stats = _code_bit_stats(batch.code_bits)
    sandwich = _cost_sandwich(stats)
    results = {
        "empirical_plus": empirical,
        "born_plus": born_mean,
        "abs_error": abs(empirical - born_mean),
        "conformance_tolerance": conformance_tol,
        "n": batch.n,
        "code_bits": stats,
        "mean_index": float(np.mean(batch.accepted_index)),
        "cost_sandwich": sandwich,
        "checks": [
            {"name": "born_conformance", "passed": bool(born_ok),
             "detail": f"|{empirical:.5f} - {born_mean:.5f}| <= {conformance_tol:.5f}"},
            {"name": "cost_sandwich", "passed": sandwich["passed"],
             "detail": f"mean {stats['mean']:.4f} bits in "
                       f"[{sandwich['lower_bits']:.4f}, {sandwich['upper_bits']:.4f}] +/- 3se"},
        ],
    }
    return results, born_ok and sandwich["passed"]


def cmd_mi(cfg: RunConfig) -> tuple[dict, bool]:
    """Exact entropies and the Monte Carlo mutual-information estimate."""
    rng = np.random.default_rng(mix(cfg.seed, _MI_SALT))
    est = mc_mutual_information(KsModel(), cfg.trials, rng)
    exact = exact_ks_mi()
    bracket = est.brackets(exact)
    results = {
        "exact_bits": exact,
        "conditional_entropy_bits": conditional_entropy_ks(),
        "marginal_entropy_bits": marginal_entropy_ks(),
        "mc": {"value": est.value, "std_error": est.std_error, "n": est.n_samples},
        "checks": [{"name": "mc_brackets_exact_3se", "passed": bool(bracket),
                    "detail": f"{est.value:.5f} +/- 3*{est.std_error:.5f} vs {exact:.5f}"}],
    }
    return results, bool(bracket)


def cmd_cost(cfg: RunConfig) -> tuple[dict, bool]:
    """Index/code-length histograms, plug-in entropy, and reference costs."""
    batch = run_trials(cfg.seed, cfg.trials, cfg.bins, state=cfg.state, meas=cfg.meas,
                       workers=cfg.workers)
    counts = np.bincount(batch.accepted_index)
    probs = counts[counts > 0].astype(float) / batch.n
    plugin_entropy = float(-np.sum(probs * np.log2(probs)))
    stats = _code_bit_stats(batch.code_bits)
    bit_counts = np.bincount(batch.code_bits)

    target = ks_bin_masses(cfg.bins)
    round1_exact_binned = float(np.sum(np.minimum(1.0 / cfg.bins, target)))
    round1_emp = float(counts[1] / batch.n) if counts.size > 1 else 0.0
    sigma1 = _binomial_sigma(round1_exact_binned, batch.n)
    round1_ok = abs(round1_emp - round1_exact_binned) <= 4.0 * sigma1
    entropy_ok = plugin_entropy <= stats["mean"] + 1e-12

    references = []
    for row in REFERENCE_COSTS:
        entry = dict(row)
        if entry["bits"] is None:
            entry["bits"] = exact_ks_mi()
        references.append(entry)

    results = {
        "index_histogram": {str(i): int(c) for i, c in enumerate(counts) if c},
        "code_bits_histogram": {str(i): int(c) for i, c in enumerate(bit_counts) if c},
        "code_bits": stats,
        "plugin_entropy_bits": plugin_entropy,
        "round1_acceptance": {
            "empirical": round1_emp,
            "exact_binned": round1_exact_binned,
            "exact_continuum": 7.0 / 16.0,
            "n": batch.n,
        },
        "cost_sandwich": _cost_sandwich(stats),
        "reference_costs": references,
        "checks": [
            {"name": "round1_acceptance_rate", "passed": bool(round1_ok),
             "detail": f"{round1_emp:.5f} vs {round1_exact_binned:.5f} +/- {4 * sigma1:.5f}"},
            {"name": "plugin_entropy_below_mean_code_length", "passed": bool(entropy_ok),
             "detail": f"{plugin_entropy:.4f} <= {stats['mean']:.4f}"},
        ],
    }
    return results, round1_ok and entropy_ok


_COMMANDS = {"verify": cmd_verify, "simulate": cmd_simulate, "mi": cmd_mi, "cost": cmd_cost}


def _flatten(obj, prefix: str = ""):
    if isinstance(obj, dict):
        for key in sorted(obj):
            yield from _flatten(obj[key], f"{prefix}{key}.")
    elif isinstance(obj, (list, tuple)):
        for i, item in enumerate(obj):
            yield from _flatten(item, f"{prefix}{i}.")
    else:
        yield prefix[:-1], obj


def render_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["metric", "value"])
    for key, value in _flatten(report):
        if value is None:
            value = ""
        elif isinstance(value, bool):
            value = str(value)
        elif isinstance(value, float):
            value = repr(float(value))  # shortest round-trip representation
        writer.writerow([key, value])
    return buf.getvalue()


def render_report(report: dict, fmt: str) -> str:
    if fmt == "csv":
        return render_csv(report)
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = config_from_args(args)
    start = time.perf_counter()
    try:
        results, ok = _COMMANDS[cfg.command](cfg)
    except (ProtocolFailure, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    report = {
        "config": asdict(cfg),
        "results": results,
        "runtime_seconds": time.perf_counter() - start,
        "version": __version__,
    }
    text = render_report(report, cfg.format)
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        try:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write report to {cfg.out}: {exc}", file=sys.stderr)
            return EXIT_RUNTIME
    return EXIT_OK if ok else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
