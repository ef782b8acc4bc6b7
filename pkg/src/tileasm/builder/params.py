"""Counter parameters derived with exact integer arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

MIN_ROWS = 13


def ceil_log2(x: Fraction) -> int:
    """Smallest integer ``t >= 0`` with ``2**t >= x`` for a positive rational ``x``."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("ceil_log2 needs a positive argument")
    if x <= 1:
        t = 0
        while Fraction(1, 2 ** (t + 1)) >= x:
            t += 1
        return -t
    c = -(-x.numerator // x.denominator)
    return (c - 1).bit_length()


def height_for(N: int, delta) -> int:
    """Gadget height: ``ceil(log2(N^2 / delta)) + 5``."""
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise ValueError("delta must lie strictly between 0 and 1")
    if N < 1:
        raise ValueError("N must be positive")
    return ceil_log2(Fraction(N * N) / delta) + 5


@dataclass(frozen=True)
class BuildParams:
    N: int
    delta: Fraction | None
    n: int
    h: int
    m: int
    e: int
    s: int
    k: int
    K: int

    @property
    def small(self) -> bool:
        """True in the two corner cases that use a deterministic comb."""
        return self.n < MIN_ROWS or self.m == 0

    @property
    def competitions(self) -> int:
        return 0 if self.small else 4 * self.k * self.m


def counter_params(n: int, h: int, N: int | None = None, delta=None) -> BuildParams:
    """Parameters for a counter of height ``n`` built from gadgets of height ``h``."""
    if n < 1:
        raise ValueError("n must be positive")
    if h < 6:
        raise ValueError("gadget height must be at least 6")
    N = n if N is None else N
    delta = None if delta is None else Fraction(delta)
    if n < MIN_ROWS:
        return BuildParams(N, delta, n, h, 0, n, 0, 0, 4)
    m = (n - 1) // (2 * h)
    e = (n - 1) % (2 * h)
    if m == 0:
        return BuildParams(N, delta, n, h, 0, e, 0, 0, 4)
    k = m.bit_length()
    return BuildParams(N, delta, n, h, m, e, (1 << k) - m, k, 12 * k + 4)


def derive_parameters(N: int, delta, n: int | None = None) -> BuildParams:
    n = N if n is None else n
    if not 1 <= n <= N:
        raise ValueError("need 1 <= n <= N")
    return counter_params(n, height_for(N, delta), N, delta)
