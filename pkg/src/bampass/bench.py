"""Seeded capacity/noise benchmarks with byte-reproducible CSV output.

For every stored-pair count p in [pairs_min, pairs_max] and every noise
level, the harness runs `trials` independent repetitions: draw p random
bipolar pairs, encode them, probe each stored A-pattern with `noise` bit
flips, and record whether the B-pattern comes back exactly.

Randomness comes from numpy's PCG64 (np.random.default_rng), seeded per
trial with the tuple (seed, pairs, noise, trial). Streams therefore do not
depend on loop order, and identical configs produce identical CSV bytes on
every platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bam

CSV_HEADER = "pairs,noise_bits,trials,exact_rate,mean_sweeps,converged_rate"


@dataclass(frozen=True)
class BenchConfig:
    m: int = 64
    n: int = 64
    pairs_min: int = 1
    pairs_max: int = 16
    trials: int = 20
    noise_bits: tuple[int, ...] = (0,)
    seed: int = 0

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("layer sizes must be positive")
        if not 1 <= self.pairs_min <= self.pairs_max:
            raise ValueError(
                f"invalid pairs range [{self.pairs_min}, {self.pairs_max}]"
            )
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        noise = tuple(int(x) for x in self.noise_bits)
        if not noise:
            raise ValueError("need at least one noise level")
        for nb in noise:
            if not 0 <= nb <= self.m:
                raise ValueError(f"noise_bits {nb} outside 0..{self.m}")
        object.__setattr__(self, "noise_bits", noise)


@dataclass(frozen=True)
class BenchRow:
    pairs_stored: int
    noise_bits: int
    trials: int
    exact_b_recall_rate: float
    mean_sweeps: float
    convergence_rate: float


def random_bipolar_matrix(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.integers(0, 2, size=(rows, cols), dtype=np.int64) * 2 - 1


def flip_bits(v: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Negate k distinct positions of a bipolar vector."""
    out = v.copy()
    if k:
        idx = rng.choice(v.size, size=k, replace=False)
        out[idx] = -out[idx]
    return out


def _trial_rng(cfg: BenchConfig, pairs: int, noise: int, trial: int) -> np.random.Generator:
    return np.random.default_rng((cfg.seed, pairs, noise, trial))


def run_point(cfg: BenchConfig, pairs: int, noise: int) -> BenchRow:
    """One (pairs, noise) point: trials x pairs probes of freshly drawn memories."""
    exact = 0
    converged = 0
    sweeps_total = 0
    probes = 0
    for trial in range(cfg.trials):
        rng = _trial_rng(cfg, pairs, noise, trial)
        a_pats = random_bipolar_matrix(rng, pairs, cfg.m)
        b_pats = random_bipolar_matrix(rng, pairs, cfg.n)
        mem = bam.encode([(a_pats[i], b_pats[i]) for i in range(pairs)])
        for i in range(pairs):
            probe = flip_bits(a_pats[i], noise, rng)
            res = bam.recall(mem, probe)
            probes += 1
            sweeps_total += res.sweeps
            converged += res.converged
            exact += bool(np.array_equal(res.b_final, b_pats[i]))
    return BenchRow(
        pairs_stored=pairs,
        noise_bits=noise,
        trials=cfg.trials,
        exact_b_recall_rate=exact / probes,
        mean_sweeps=sweeps_total / probes,
        convergence_rate=converged / probes,
    )


def run_capacity_bench(cfg: BenchConfig) -> list[BenchRow]:
    """All rows of the sweep, ordered by (pairs, noise) regardless of scheduling."""
    return [
        run_point(cfg, pairs, noise)
        for pairs in range(cfg.pairs_min, cfg.pairs_max + 1)
        for noise in sorted(cfg.noise_bits)
    ]


def rows_to_csv(rows: list[BenchRow]) -> str:
    """Fixed-format CSV: 6-decimal rates, '\\n' line ends, header included."""
    out = [CSV_HEADER]
    for r in rows:
        out.append(
            f"{r.pairs_stored},{r.noise_bits},{r.trials},"
            f"{r.exact_b_recall_rate:.6f},{r.mean_sweeps:.6f},{r.convergence_rate:.6f}"
        )
    return "\n".join(out) + "\n"
