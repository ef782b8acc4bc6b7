"""Uniform-attachment dynamics: one-step options and sampled producing sequences."""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from . import _pykernel
from .core import TAS, Assembly, Point, TileType, attach, frontier, neighbors, opposite

try:  # compiled kernel, when the extension was built
    from . import _ckernel
except ImportError:  # pragma: no cover - exercised when the build is skipped
    _ckernel = None

KERNEL_ENV = "TILEASM_KERNEL"


def available_kernels() -> list[str]:
    return ["python"] + (["cython"] if _ckernel is not None else [])


def default_kernel() -> str:
    wanted = os.environ.get(KERNEL_ENV, "").strip().lower()
    if wanted in ("python", "cython"):
        if wanted == "cython" and _ckernel is None:
            raise RuntimeError("the compiled kernel is not built")
        return wanted
    return "cython" if _ckernel is not None else "python"


def _kernel_module(name: str | None):
    name = name or default_kernel()
    if name == "cython":
        if _ckernel is None:
            raise RuntimeError("the compiled kernel is not built")
        return _ckernel
    if name == "python":
        return _pykernel
    raise ValueError(f"unknown kernel {name!r}")


class Status(str, Enum):
    TERMINAL = "Terminal"
    CAP_EXCEEDED = "StepCapExceeded"


@dataclass(frozen=True)
class StepOptions:
    options: tuple[tuple[Point, TileType], ...]

    @property
    def count(self) -> int:
        return len(self.options)


@dataclass
class SequenceResult:
    final: Assembly
    steps: int
    status: Status
    trace: list[tuple[Point, str]] | None = None

    @property
    def terminal(self) -> bool:
        return self.status is Status.TERMINAL


@dataclass
class CompiledTAS:
    """Integer encoding of a tile set consumed by the sampling kernels."""

    names: list[str]
    side_glue: list[int]
    fit_start: list[int]
    fit_list: list[int]
    nglues: int
    seed: tuple[int, int, int]
    tiles: list[TileType] = field(repr=False)

    @classmethod
    def of(cls, tas: TAS) -> "CompiledTAS":
        cached = tas.__dict__.get("_compiled")
        if cached is not None:
            return cached
        tiles = list(tas.tiles)
        ids = {t.name: i for i, t in enumerate(tiles)}
        glue_ids: dict = {}
        side_glue = []
        for t in tiles:
            for g in t.glues:
                if g.strength > 0:
                    side_glue.append(glue_ids.setdefault(g, len(glue_ids) + 1))
                else:
                    side_glue.append(0)
        nglues = len(glue_ids) + 1
        buckets: list[list[int]] = [[] for _ in range(4 * nglues)]
        for i, t in enumerate(tiles):
            for side, g in enumerate(t.glues):
                if g.strength > 0:
                    # tile i sits on side (side+2)%4 of a neighbour exposing g there
                    buckets[((side + 2) % 4) * nglues + glue_ids[g]].append(i)
        fit_start = [0]
        fit_list: list[int] = []
        for b in buckets:
            fit_list.extend(b)
            fit_start.append(len(fit_list))
        sp = tas.seed_point
        compiled = cls(
            names=[t.name for t in tiles],
            side_glue=side_glue,
            fit_start=fit_start,
            fit_list=fit_list,
            nglues=nglues,
            seed=(sp.x, sp.y, ids[tas.seed_tile]),
            tiles=tiles,
        )
        tas.__dict__["_compiled"] = compiled
        return compiled


def step_options(tas: TAS, a: Assembly) -> StepOptions:
    return StepOptions(tuple(frontier(tas, a)))


def sample_raw(tas: TAS, rng: random.Random, step_cap: int, kernel: str | None = None):
    """Run the kernel and return ``(xs, ys, tile_ids, terminal)`` without building objects."""
    if step_cap < 1:
        raise ValueError("step_cap must be at least 1")
    c = CompiledTAS.of(tas)
    mod = _kernel_module(kernel)
    return mod.run(c.side_glue, c.fit_start, c.fit_list, c.nglues, *c.seed, rng, step_cap)


def run_sequence(
    tas: TAS,
    rng: random.Random | int,
    step_cap: int,
    record_trace: bool = False,
    kernel: str | None = None,
) -> SequenceResult:
    """Sample one producing sequence from the seed under uniform attachment.

    ``rng`` may be a ``random.Random`` or an integer seed.
    """
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    xs, ys, ts, terminal = sample_raw(tas, rng, step_cap, kernel)
    c = CompiledTAS.of(tas)
    tiles = c.tiles
    final = Assembly({Point(x, y): tiles[t] for x, y, t in zip(xs, ys, ts)})
    trace = None
    if record_trace:
        names = c.names
        trace = [(Point(x, y), names[t]) for x, y, t in zip(xs, ys, ts)]
    return SequenceResult(
        final=final,
        steps=len(xs) - 1,
        status=Status.TERMINAL if terminal else Status.CAP_EXCEEDED,
        trace=trace,
    )


def index_of(trace: Sequence[tuple[Point, str]], p) -> int | None:
    """1-based position in ``trace`` of the step that fills ``p`` (seed is 1)."""
    p = tuple(p)
    for i, (q, _) in enumerate(trace, start=1):
        if tuple(q) == p:
            return i
    return None


def trace_index(trace: Sequence[tuple[Point, str]]) -> dict[Point, int]:
    """Map every placed point to its 1-based index in ``trace``."""
    return {Point(*q): i for i, (q, _) in enumerate(trace, start=1)}


def replay(tas: TAS, trace: Sequence[tuple]) -> Assembly:
    """Rebuild the result of ``trace``, checking every step against the attachment rule."""
    if not trace:
        raise ValueError("empty trace")
    (p0, name0), rest = trace[0], trace[1:]
    if Point(*p0) != tas.seed_point or name0 != tas.seed_tile:
        raise ValueError("trace does not start with the seed")
    a = tas.seed_assembly()
    for p, name in rest:
        a = attach(a, p, tas.tiles[name], tas)
    return a


def forced_terminal(tas: TAS, forced: Mapping, step_cap: int = 10_000_000) -> Assembly:
    """A terminal assembly in which each point of ``forced`` may only take its named tile.

    Points are filled depth first and ties are broken by tile name, so the
    result is deterministic.
    """
    forced = {Point(*p): name for p, name in forced.items()}
    tiles = tas.tiles
    cells = {tas.seed_point: tiles[tas.seed_tile]}
    stack = [q for _, q in neighbors(tas.seed_point)]
    steps = 0
    while stack:
        p = stack.pop()
        if p in cells:
            continue
        options = set()
        for side, q in neighbors(p):
            u = cells.get(q)
            if u is not None:
                g = u.glues[opposite(side)]
                if g.strength > 0:
                    options.update(tiles.fitting(opposite(side), g))
        want = forced.get(p)
        if want is not None:
            options = {t for t in options if t.name == want}
        if not options:
            continue
        if steps >= step_cap:
            raise RuntimeError(f"no terminal assembly within {step_cap} steps")
        cells[p] = min(options, key=lambda t: t.name)
        steps += 1
        stack.extend(q for _, q in neighbors(p) if q not in cells)
    return Assembly(cells)
