"""Repeated sampling of producing sequences with Wilson score intervals.

Trial ``i`` of a run with master seed ``s`` always uses the generator
``random.Random(f"{s}:{i}")``, so results do not depend on how trials are split
across worker processes.
"""

from __future__ import annotations

import os
import pickle
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .core import TAS, Point
from .dynamics import SequenceResult, run_sequence, sample_raw

DEFAULT_CONFIDENCE = 0.99


@dataclass(frozen=True)
class Estimate:
    successes: int
    trials: int
    cap_exceeded: int
    ci_low: float
    ci_high: float
    confidence: float = DEFAULT_CONFIDENCE

    @property
    def point(self) -> Fraction:
        return Fraction(self.successes, self.trials)

    @property
    def failures(self) -> int:
        return self.trials - self.successes - self.cap_exceeded

    @property
    def half_width(self) -> float:
        return (self.ci_high - self.ci_low) / 2

    @property
    def lower_bound_only(self) -> bool:
        """Cap-exceeded trials were counted as failures, so ``point`` may be low."""
        return self.cap_exceeded > 0

    def line(self) -> str:
        return (
            f"{float(self.point):.6f} {self.ci_low:.6f} {self.ci_high:.6f} "
            f"{self.successes} {self.trials} {self.cap_exceeded}"
        )


def wilson_interval(successes: int, trials: int, confidence: float = DEFAULT_CONFIDENCE) -> tuple[float, float]:
    from scipy.stats import binomtest

    if trials < 1:
        raise ValueError("need at least one trial")
    if not 0 < confidence < 1:
        raise ValueError("confidence must lie strictly between 0 and 1")
    ci = binomtest(successes, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return max(0.0, float(ci.low)), min(1.0, float(ci.high))


def trial_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"{seed}:{index}")


# -- workers -------------------------------------------------------------------


def _shape_chunk(tas: TAS, target: frozenset, seed: int, lo: int, hi: int, step_cap: int, kernel):
    ok = capped = 0
    size = len(target)
    for i in range(lo, hi):
        xs, ys, _, terminal = sample_raw(tas, trial_rng(seed, i), step_cap, kernel)
        if not terminal:
            capped += 1
        elif len(xs) == size and all(p in target for p in zip(xs, ys)):
            ok += 1
    return ok, capped


def _event_chunk(tas: TAS, predicate, seed: int, lo: int, hi: int, step_cap: int, kernel):
    ok = capped = 0
    for i in range(lo, hi):
        res = run_sequence(tas, trial_rng(seed, i), step_cap, kernel=kernel)
        if not res.terminal:
            capped += 1
        elif predicate(res):
            ok += 1
    return ok, capped


def _chunks(trials: int, parts: int) -> list[tuple[int, int]]:
    step = -(-trials // parts)
    return [(lo, min(trials, lo + step)) for lo in range(0, trials, step)]


def _run(fn, payload, trials: int, seed: int, step_cap: int, kernel, workers: int | None):
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if step_cap < 1:
        raise ValueError("step_cap must be at least 1")
    workers = workers or os.cpu_count() or 1
    workers = min(workers, trials)
    if workers > 1:
        try:
            pickle.dumps((payload[0], payload[1]))
        except Exception:
            workers = 1
    if workers <= 1:
        return fn(*payload, seed, 0, trials, step_cap, kernel)
    ok = capped = 0
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *payload, seed, lo, hi, step_cap, kernel) for lo, hi in _chunks(trials, workers * 4)]
        for f in futures:
            a, b = f.result()
            ok += a
            capped += b
    return ok, capped


def estimate_shape_probability(
    tas: TAS,
    target: Iterable,
    trials: int,
    seed: int,
    step_cap: int,
    *,
    confidence: float = DEFAULT_CONFIDENCE,
    workers: int | None = 1,
    kernel: str | None = None,
) -> Estimate:
    """Fraction of trials that end terminal with domain exactly ``target``."""
    target = frozenset(Point(*p) for p in target)
    if not target:
        raise ValueError("target shape is empty")
    ok, capped = _run(_shape_chunk, (tas, target), trials, seed, step_cap, kernel, workers)
    return Estimate(ok, trials, capped, *wilson_interval(ok, trials, confidence), confidence)


def estimate_event_probability(
    tas: TAS,
    predicate: Callable[[SequenceResult], bool],
    trials: int,
    seed: int,
    step_cap: int,
    *,
    confidence: float = DEFAULT_CONFIDENCE,
    workers: int | None = 1,
    kernel: str | None = None,
) -> Estimate:
    """Fraction of terminal trials whose result satisfies ``predicate``.

    Parallel runs need a picklable predicate; otherwise trials run in this process.
    """
    ok, capped = _run(_event_chunk, (tas, predicate), trials, seed, step_cap, kernel, workers)
    return Estimate(ok, trials, capped, *wilson_interval(ok, trials, confidence), confidence)
