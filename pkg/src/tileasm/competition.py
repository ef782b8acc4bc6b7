"""Closed-form race analytics.

A race starts at a shared point and sends two simple paths toward one contested
point. Lengths count points, endpoints included, so a path of length ``l``
needs ``l - 1`` attachments to reach the contested point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .core import Point


@dataclass(frozen=True)
class CompetitionSpec:
    """One declared race: start point, contested point, both paths and the intended winner."""

    start: Point
    poc: Point
    winning_path: tuple[Point, ...]
    losing_path: tuple[Point, ...]
    winner_tile: str
    rigged: bool = False

    def __post_init__(self):
        object.__setattr__(self, "start", Point(*self.start))
        object.__setattr__(self, "poc", Point(*self.poc))
        object.__setattr__(self, "winning_path", tuple(Point(*p) for p in self.winning_path))
        object.__setattr__(self, "losing_path", tuple(Point(*p) for p in self.losing_path))
        validate_paths(self.start, self.poc, self.winning_path, self.losing_path)

    @property
    def l_win(self) -> int:
        return len(self.winning_path)

    @property
    def l_lose(self) -> int:
        return len(self.losing_path)


def validate_paths(start, poc, win: Sequence, lose: Sequence) -> None:
    if start == poc:
        raise ValueError("start and contested point coincide")
    for name, path in (("winning", win), ("losing", lose)):
        if len(path) < 2:
            raise ValueError(f"{name} path is shorter than 2 points")
        if path[0] != start or path[-1] != poc:
            raise ValueError(f"{name} path must run from the start to the contested point")
        if len(set(path)) != len(path):
            raise ValueError(f"{name} path is not simple")
        for a, b in zip(path, path[1:]):
            if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
                raise ValueError(f"{name} path has a non-adjacent step {a}->{b}")
    if set(win) & set(lose) != {start, poc}:
        raise ValueError("paths share points other than start and contested point")


def _check_lengths(l_win: int, l_lose: int) -> None:
    if l_win < 2 or l_lose < 2:
        raise ValueError("path lengths must be at least 2")


def competition_probability(l_win: int, l_lose: int) -> Fraction:
    """Probability that the winning path fills the contested point first."""
    _check_lengths(l_win, l_lose)
    return sum(
        (winning_sequence_count(l_win, i) * Fraction(1, 2 ** (l_win + i - 1)) for i in range(l_lose - 1)),
        Fraction(0),
    )


def winning_sequence_count(l_win: int, i: int) -> int:
    """Interleavings where the winner arrives after exactly ``i`` loser steps."""
    if l_win < 2 or i < 0:
        raise ValueError("need l_win >= 2 and i >= 0")
    return comb(l_win + i - 2, l_win - 2)


def winning_assembly_count(l_lose: int) -> int:
    """Distinct assemblies at the moment the winner lands: one per loser progress 0..l_lose-2."""
    if l_lose < 2:
        raise ValueError("l_lose must be at least 2")
    return l_lose - 1


def read_gadget_probability(h: int) -> Fraction:
    """Race probability for a 4-point short path against a ``4h - 10`` point long path."""
    if h < 6:
        raise ValueError("gadget height must be at least 6")
    return 1 - Fraction(16 * h * h - 68 * h + 74, 2 ** (4 * h - 8))


def theorem1_lower_bound(specs: Iterable) -> Fraction:
    """Product of race probabilities; rigged races contribute a factor of 1.

    Each item is ``(l_win, l_lose)``, ``(l_win, l_lose, rigged)``, the string
    ``"rigged"``, or a :class:`CompetitionSpec`.
    """
    items = list(specs)
    if not items:
        raise ValueError("need at least one competition")
    bound = Fraction(1)
    for item in items:
        if isinstance(item, CompetitionSpec):
            if not item.rigged:
                bound *= competition_probability(item.l_win, item.l_lose)
        elif item == "rigged" or item is None:
            continue
        else:
            l_win, l_lose, *rest = item
            if rest and rest[0]:
                continue
            bound *= competition_probability(l_win, l_lose)
    return bound


def closed_form_check(n: int) -> tuple[Fraction, Fraction]:
    """Direct sum of ``(i+2)(i+1)/2^(i+4)`` for ``i <= n-2`` against its closed form."""
    if n < 2:
        raise ValueError("n must be at least 2")
    lhs = sum((Fraction((i + 2) * (i + 1), 2 ** (i + 4)) for i in range(n - 1)), Fraction(0))
    rhs = 1 - Fraction(n * n + 3 * n + 4, 2 ** (n + 2))
    return lhs, rhs


def h_inequality_check(h: int) -> bool:
    """Whether ``2^(3h-8) >= 16h^2 - 68h + 74``; meaningful for ``h >= 6``."""
    return 2 ** (3 * h - 8) >= 16 * h * h - 68 * h + 74
