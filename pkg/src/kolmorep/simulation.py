"""Seeded Monte-Carlo sampling of switch choices and detector outcomes.

Each trial draws a context from the setup distribution, then a joint outcome
from that context's exact masses. Sampling inverts integer draws against the
common denominator of the exact weights, so the sampled law is the rational
law itself, not a float approximation of it. A measurement outside the
drawn context is recorded as absent, not as a third outcome value: that is
exactly what makes empirical frequencies effective rather than conditional.

PCG64 is the generator (published algorithm, splittable); emit the algorithm
name and seed alongside any results so runs can be reproduced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm, sqrt
from typing import Iterable, Sequence

import numpy as np

from .censorship import MeasurementSuite, SetupDistribution, context_space
from .rational import DEFAULT_POLICY, RationalizationPolicy

PRNG_ALGORITHM = "PCG64"


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    context: tuple  # measurement names, in suite order
    bits: tuple  # outcome bits aligned with context


@dataclass(frozen=True)
class FrequencyEstimate:
    outcomes: tuple  # measurement names whose outcome must be 1
    performed: tuple  # measurement names whose switch must be on
    frequency: float
    trials: int
    stderr: float


def _integer_sampler(rng: np.random.Generator, weights: Sequence[Fraction], size: int) -> np.ndarray:
    """Indices drawn exactly according to rational weights via integer inversion."""
    denom = lcm(*(w.denominator for w in weights))
    cuts = np.cumsum([int(w * denom) for w in weights])
    draws = rng.integers(0, denom, size=size)
    return np.searchsorted(cuts, draws, side="right")


def run(
    suite: MeasurementSuite,
    dist: SetupDistribution,
    trials: int,
    seed: int,
    policy: RationalizationPolicy = DEFAULT_POLICY,
) -> list:
    """Simulate `trials` switch-and-detect rounds; same seed, same stream."""
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.Generator(np.random.PCG64(seed))

    contexts = list(dist.support)
    kappa = [dist.weights[c] for c in contexts]
    chosen = _integer_sampler(rng, kappa, trials)

    names = []
    point_bits = []
    outcome_draws = np.zeros(trials, dtype=np.int64)
    for k, context in enumerate(contexts):
        members = sorted(context)
        names.append(tuple(suite.name_of(i) for i in members))
        local = context_space(context, suite, policy)
        masses = [local.mass[p] for p in local.points]
        point_bits.append([tuple(int(ch) for ch in p) for p in local.points])
        hits = np.flatnonzero(chosen == k)
        if hits.size:
            outcome_draws[hits] = _integer_sampler(rng, masses, hits.size)

    return [
        TrialRecord(t, names[chosen[t]], point_bits[chosen[t]][outcome_draws[t]])
        for t in range(trials)
    ]


def estimate(records: Sequence[TrialRecord], queries: Iterable) -> list:
    """Empirical effective frequencies for (outcomes, performed) name pairs.

    A trial counts for a query when its context covers every named
    measurement (outcome names included: a beep presupposes the run) and all
    named outcome bits are 1. Standard errors are binomial.
    """
    total = len(records)
    by_context: dict = {}
    for rec in records:
        by_context.setdefault(rec.context, []).append(rec.bits)
    context_bits = {
        ctx: np.array(bits, dtype=np.uint8).reshape(len(bits), len(ctx))
        for ctx, bits in by_context.items()
    }

    results = []
    for outcomes, performed in queries:
        outcomes = tuple(outcomes)
        performed = tuple(performed)
        required = set(outcomes) | set(performed)
        count = 0
        for ctx, bits in context_bits.items():
            if not required <= set(ctx):
                continue
            if outcomes:
                sel = [ctx.index(name) for name in outcomes]
                count += int(np.sum(np.all(bits[:, sel] == 1, axis=1)))
            else:
                count += bits.shape[0]
        freq = count / total if total else 0.0
        stderr = sqrt(freq * (1.0 - freq) / total) if total else 0.0
        results.append(FrequencyEstimate(outcomes, performed, freq, total, stderr))
    return results
