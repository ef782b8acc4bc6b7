"""An ``N x N`` square from three counters arranged around an interior.

The first counter stands upright along the left edge. The second lies along
the top edge, turned a quarter clockwise, and starts from the first one's last
tile. The third is turned a half and runs down the right edge. Five filler
types seeded from the third counter's last tile close the remaining area: a
row along the bottom, columns above it, and a column beside the third counter
that also grows east into that counter's seed corner.
"""

from __future__ import annotations

import re
from dataclasses import replace
from fractions import Fraction

from ..competition import CompetitionSpec
from ..core import EAST, SOUTH, TAS, Assembly, Point, TileSet, TileType, frontier_set, glue
from ..verifier import SndDeclaration
from .counter import build_counter, check_success_bound
from .params import MIN_ROWS, BuildParams, counter_params, height_for
from .result import GeneratedTas
from .templates import BuildError

_TAG = re.compile(r"@r([0-3])$")


def rotate_point(p, quarter_turns: int) -> Point:
    x, y = p
    for _ in range(quarter_turns % 4):
        x, y = y, -x
    return Point(x, y)


def rotate_tile(t: TileType, quarter_turns: int) -> TileType:
    q = quarter_turns % 4
    base, turns = t.name, 0
    m = _TAG.search(base)
    if m:
        base, turns = base[: m.start()], int(m.group(1))
    turns = (turns + q) % 4
    name = base if turns == 0 else f"{base}@r{turns}"
    g = t.glues
    # the glue on side d moves to side d + q
    return TileType(name, *(g[(d - q) % 4] for d in range(4)))


def rotate_tileset(ts, quarter_turns: int) -> TileSet:
    """Turn every tile clockwise; names carry the accumulated turn count."""
    return TileSet(rotate_tile(t, quarter_turns) for t in ts)


def square_counter_params(n: int, h: int) -> BuildParams:
    """Counter parameters whose seed column lies inside the counter's strip."""
    p = counter_params(n, h)
    if p.small or p.e > 0:
        return p
    m = p.m - 1
    if m == 0:
        return replace(p, m=0, e=2 * h, s=0, k=0, K=4)
    k = m.bit_length()
    return replace(p, m=m, e=2 * h, s=(1 << k) - m, k=k, K=12 * k + 4)


def _add_glue(g: GeneratedTas, name: str, side: int, label: str):
    tiles = []
    for t in g.tas.tiles:
        if t.name == name:
            if not t.glues[side].is_null:
                raise BuildError(f"tile {name} already has a glue on side {side}")
            t = t.with_glue(side, glue(label))
        tiles.append(t)
    return tiles


def _last_point(g: GeneratedTas) -> Point:
    p = g.params
    return Point(p.K - 1, p.n - 1)


class _Part:
    """One counter moved into square coordinates."""

    def __init__(self, g: GeneratedTas, turns: int, offset: tuple[int, int], tiles: list[TileType]):
        self.g = g
        self.turns = turns
        self.offset = offset
        by_name = {t.name: rotate_tile(t, turns) for t in tiles}
        self.tiles = list(by_name.values())
        self.cells = {self.place(p): by_name[t.name] for p, t in g.reference.items()}
        self.comps = [
            CompetitionSpec(
                self.place(c.start),
                self.place(c.poc),
                tuple(self.place(q) for q in c.winning_path),
                tuple(self.place(q) for q in c.losing_path),
                by_name[c.winner_tile].name,
                c.rigged,
            )
            for c in g.decl.competitions
        ]

    def place(self, p) -> Point:
        x, y = rotate_point(p, self.turns)
        return Point(x + self.offset[0], y + self.offset[1])


def build_square(N: int, delta) -> GeneratedTas:
    """System whose intended terminal fills ``{0..N-1}^2``."""
    delta = Fraction(delta)
    h = height_for(N, delta)
    try:
        return _three_counters(N, h, delta)
    except _Infeasible:
        return build_comb_square(N, delta)


class _Infeasible(Exception):
    pass


def _three_counters(N: int, h: int, delta) -> GeneratedTas:
    if N < MIN_ROWS:
        raise _Infeasible
    p1 = square_counter_params(N, h)
    if p1.small or N - p1.K < MIN_ROWS:
        raise _Infeasible
    p2 = square_counter_params(N - p1.K, h)
    if p2.small or N - p2.K < MIN_ROWS:
        raise _Infeasible
    p3 = square_counter_params(N - p2.K, h)
    if p3.small or N - p1.K - p3.K < max(1, p2.e):
        raise _Infeasible
    g1, g2, g3 = (build_counter(p, prefix=f"t{i}.") for i, p in enumerate((p1, p2, p3), start=1))

    def last_name(g):
        return g.reference[_last_point(g)].name

    t1_t2, t2_t3, t3_fill = "square/⟨t1_to_t2⟩", "square/⟨t2_to_t3⟩", "square/⟨t3_to_fill⟩"
    tiles1 = _add_glue(g1, last_name(g1), EAST, t1_t2)
    tiles2 = _add_glue(g2, g2.tas.seed_tile, SOUTH, t1_t2)
    tiles2 = _add_glue(replace_tiles(g2, tiles2), last_name(g2), EAST, t2_t3)
    tiles3 = _add_glue(g3, g3.tas.seed_tile, SOUTH, t2_t3)
    tiles3 = _add_glue(replace_tiles(g3, tiles3), last_name(g3), EAST, t3_fill)

    K1, K2, K3 = p1.K, p2.K, p3.K
    parts = [
        _Part(g1, 0, (0, 0), tiles1),
        _Part(g2, 1, (K1, N - 1), tiles2),
        _Part(g3, 2, (N - 1, N - K2 - 1), tiles3),
    ]
    cells: dict[Point, TileType] = {}
    for i, part in enumerate(parts, start=1):
        for p, t in part.cells.items():
            if p in cells:
                raise BuildError(f"counters overlap at {tuple(p)} (counter {i})")
            if not (0 <= p.x < N and 0 <= p.y < N):
                raise _Infeasible
            cells[p] = t

    col = N - K3 - 1
    fill = filler_tiles(t3_fill)
    for x in range(N):
        for y in range(N):
            p = Point(x, y)
            if p in cells:
                continue
            if x == col:
                cells[p] = fill["start" if y == 0 else "column"]
            elif x > col:
                cells[p] = fill["east"]
            elif y == 0:
                cells[p] = fill["row"]
            else:
                cells[p] = fill["up"]

    all_tiles = [t for part in parts for t in part.tiles] + list(fill.values())
    seed_tile = parts[0].cells[Point(0, 0)].name
    tas = TAS(TileSet(all_tiles), Point(0, 0), seed_tile)
    reference = Assembly(cells)
    if frontier_set(tas, reference):
        raise _Infeasible
    comps = [c for part in parts for c in part.comps]
    check_success_bound(comps, delta)
    provenance = tuple(
        f"counter {i} turned {part.turns}/4 at {part.offset}: {line}"
        for i, part in enumerate(parts, start=1)
        for line in part.g.provenance
    ) + ("filler x5",)
    return GeneratedTas(
        tas=tas,
        decl=SndDeclaration.from_competitions(comps),
        expected_domain=frozenset(Point(x, y) for x in range(N) for y in range(N)),
        provenance=provenance,
        reference=reference,
        params=None,
    )


def replace_tiles(g: GeneratedTas, tiles: list[TileType]) -> GeneratedTas:
    tas = TAS(TileSet(tiles), g.tas.seed_point, g.tas.seed_tile)
    return replace(g, tas=tas)


def filler_tiles(start_label: str) -> dict[str, TileType]:
    a, b, c, e = "fill/⟨row⟩", "fill/⟨up⟩", "fill/⟨column⟩", "fill/⟨east⟩"
    return {
        "start": TileType("fill.start", north=glue(c), east=glue(start_label), west=glue(a)),
        "column": TileType("fill.column", north=glue(c), south=glue(c), east=glue(e)),
        "east": TileType("fill.east", east=glue(e), west=glue(e)),
        "row": TileType("fill.row", north=glue(b), east=glue(a), west=glue(a)),
        "up": TileType("fill.up", north=glue(b), south=glue(b)),
    }


def build_comb_square(N: int, delta=None) -> GeneratedTas:
    """Deterministic square: a bottom row with a column of fixed height on every tile.

    Uses ``N`` row types and ``N - 1`` column types.
    """
    if N < 1:
        raise ValueError("N must be positive")
    tooth = [
        TileType(
            f"comb.up{y}",
            north=glue(f"comb/⟨up{y + 1}⟩") if y < N - 1 else glue(""),
            south=glue(f"comb/⟨up{y}⟩"),
        )
        for y in range(1, N)
    ]
    row = []
    for x in range(N):
        row.append(
            TileType(
                f"comb.row{x}",
                north=glue("comb/⟨up1⟩") if N > 1 else glue(""),
                east=glue(f"comb/⟨row{x + 1}⟩") if x < N - 1 else glue(""),
                west=glue(f"comb/⟨row{x}⟩") if x > 0 else glue(""),
            )
        )
    cells = {Point(x, 0): row[x] for x in range(N)}
    cells.update({Point(x, y): tooth[y - 1] for x in range(N) for y in range(1, N)})
    tas = TAS(TileSet(row + tooth), Point(0, 0), row[0].name)
    h = height_for(N, delta) if delta is not None else 0
    return GeneratedTas(
        tas=tas,
        decl=SndDeclaration.empty(),
        expected_domain=frozenset(cells),
        provenance=("comb square",),
        reference=Assembly(cells),
        params=BuildParams(N, None if delta is None else Fraction(delta), N, h, 0, 0, 0, 0, N),
    )
