"""Lattice data model for temperature-1 tile assembly.

Points are plain ``(x, y)`` tuples. Sides are indexed N=0, E=1, S=2, W=3 and a
clockwise quarter turn maps side ``d`` to ``(d + 1) % 4``.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple

NORTH, EAST, SOUTH, WEST = 0, 1, 2, 3
SIDES = (NORTH, EAST, SOUTH, WEST)
SIDE_NAMES = ("north", "east", "south", "west")
OFFSETS = ((0, 1), (1, 0), (0, -1), (-1, 0))


def opposite(side: int) -> int:
    return (side + 2) % 4


class Point(NamedTuple):
    x: int
    y: int

    def neighbor(self, side: int) -> "Point":
        dx, dy = OFFSETS[side]
        return Point(self.x + dx, self.y + dy)


def adjacent(p: tuple[int, int], q: tuple[int, int]) -> bool:
    return abs(p[0] - q[0]) + abs(p[1] - q[1]) == 1


def neighbors(p: tuple[int, int]) -> Iterator[tuple[int, Point]]:
    """Yield ``(side, point)`` for the four lattice neighbors of ``p``."""
    x, y = p
    for side, (dx, dy) in enumerate(OFFSETS):
        yield side, Point(x + dx, y + dy)


class TileError(ValueError):
    """Raised for malformed tiles, tile sets or systems."""


class AttachmentError(ValueError):
    """Raised when a placement violates the attachment rule."""

    def __init__(self, point, tile_name: str, reason: str):
        super().__init__(f"cannot attach {tile_name!r} at {tuple(point)}: {reason}")
        self.point = Point(*point)
        self.tile_name = tile_name


@dataclass(frozen=True, slots=True)
class Glue:
    label: str = ""
    strength: int = 0

    def __post_init__(self):
        if self.strength < 0:
            raise TileError(f"negative glue strength {self.strength}")
        if (self.strength == 0) != (self.label == ""):
            raise TileError(f"glue {self.label!r}:{self.strength} mixes null and non-null parts")

    @property
    def is_null(self) -> bool:
        return self.strength == 0

    def binds(self, other: "Glue") -> bool:
        return self.strength > 0 and self.label == other.label and self.strength == other.strength


NULL_GLUE = Glue()


def glue(label: str, strength: int = 1) -> Glue:
    return Glue(label, strength) if label else NULL_GLUE


@dataclass(frozen=True, slots=True)
class TileType:
    name: str
    north: Glue = NULL_GLUE
    east: Glue = NULL_GLUE
    south: Glue = NULL_GLUE
    west: Glue = NULL_GLUE

    @property
    def glues(self) -> tuple[Glue, Glue, Glue, Glue]:
        return (self.north, self.east, self.south, self.west)

    def side(self, side: int) -> Glue:
        return self.glues[side]

    def with_glue(self, side: int, g: Glue) -> "TileType":
        gs = list(self.glues)
        gs[side] = g
        return TileType(self.name, *gs)


class TileSet:
    """An ordered, name-indexed collection of tile types.

    Besides lookup by name it keeps, per side and glue, the tiles that can sit
    on that side of a tile exposing the glue. Frontier computation uses it.
    """

    __slots__ = ("_tiles", "_by_name", "_fits")

    def __init__(self, tiles: Iterable[TileType]):
        tiles = tuple(tiles)
        by_name: dict[str, TileType] = {}
        for t in tiles:
            if t.name in by_name:
                raise TileError(f"duplicate tile name {t.name!r}")
            by_name[t.name] = t
        self._tiles = tiles
        self._by_name = by_name
        fits: dict[tuple[int, Glue], list[TileType]] = {}
        for t in tiles:
            for side, g in enumerate(t.glues):
                if g.strength > 0:
                    # t can be placed on the opposite side of a tile exposing g
                    fits.setdefault((opposite(side), g), []).append(t)
        self._fits = {k: tuple(v) for k, v in fits.items()}

    def __iter__(self) -> Iterator[TileType]:
        return iter(self._tiles)

    def __len__(self) -> int:
        return len(self._tiles)

    def __contains__(self, item) -> bool:
        name = item.name if isinstance(item, TileType) else item
        return name in self._by_name

    def __getitem__(self, name: str) -> TileType:
        try:
            return self._by_name[name]
        except KeyError:
            raise TileError(f"unknown tile {name!r}") from None

    def __eq__(self, other) -> bool:
        return isinstance(other, TileSet) and self._tiles == other._tiles

    def __hash__(self) -> int:
        return hash(self._tiles)

    def __repr__(self) -> str:
        return f"TileSet({len(self._tiles)} tiles)"

    @property
    def tiles(self) -> tuple[TileType, ...]:
        return self._tiles

    def names(self) -> list[str]:
        return [t.name for t in self._tiles]

    def fitting(self, side: int, g: Glue) -> tuple[TileType, ...]:
        """Tiles that bind to a neighbor exposing ``g`` when placed on its ``side``."""
        if g.strength == 0:
            return ()
        return self._fits.get((side, g), ())

    def glue_labels(self) -> set[str]:
        return {g.label for t in self._tiles for g in t.glues if g.strength > 0}


@dataclass(frozen=True)
class TAS:
    tiles: TileSet
    seed_point: Point
    seed_tile: str
    temperature: int = 1

    def __post_init__(self):
        if self.temperature != 1:
            raise TileError("only temperature 1 is supported")
        if self.seed_tile not in self.tiles:
            raise TileError(f"seed tile {self.seed_tile!r} is not in the tile set")
        object.__setattr__(self, "seed_point", Point(*self.seed_point))

    @property
    def seed(self) -> tuple[Point, str]:
        return self.seed_point, self.seed_tile

    def seed_assembly(self) -> "Assembly":
        return Assembly({self.seed_point: self.tiles[self.seed_tile]})


Option = tuple[Point, TileType]


def _option_key(opt: Option):
    (x, y), t = opt
    return (x, y, t.name)


class Assembly:
    """Immutable finite placement of tile types on lattice points.

    Equality and hashing use the canonical sorted placement list, so two
    sequences that build the same assembly meet at the same key.
    """

    __slots__ = ("_cells", "_key", "_hash", "_frontier")

    def __init__(self, cells: Mapping[tuple[int, int], TileType]):
        if not cells:
            raise TileError("an assembly needs at least one tile")
        self._cells = {Point(*p): t for p, t in cells.items()}
        self._key = None
        self._hash = None
        # frontier caches keyed by the identity of the tile set
        self._frontier: dict[int, tuple] = {}

    # -- mapping-ish protocol -------------------------------------------
    def __len__(self) -> int:
        return len(self._cells)

    def __contains__(self, p) -> bool:
        return tuple(p) in self._cells

    def __getitem__(self, p) -> TileType:
        return self._cells[Point(*p)]

    def get(self, p, default=None):
        return self._cells.get(Point(*p), default)

    def items(self):
        return self._cells.items()

    @property
    def cells(self) -> Mapping[Point, TileType]:
        return MappingProxyType(self._cells)

    @property
    def domain(self) -> frozenset:
        return frozenset(self._cells)

    def placements(self) -> dict[Point, str]:
        return {p: t.name for p, t in self._cells.items()}

    def key(self) -> tuple:
        if self._key is None:
            self._key = tuple(sorted((p.x, p.y, t.name) for p, t in self._cells.items()))
        return self._key

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __eq__(self, other) -> bool:
        if not isinstance(other, Assembly):
            return NotImplemented
        return len(self) == len(other) and self._cells == other._cells

    def __repr__(self) -> str:
        return f"Assembly({len(self)} tiles)"

    # -- structure --------------------------------------------------------
    def binding_strength(self, p, t: TileType) -> int:
        total = 0
        for side, q in neighbors(p):
            other = self._cells.get(q)
            if other is not None and t.glues[side].binds(other.glues[opposite(side)]):
                total += t.glues[side].strength
        return total

    def is_connected(self) -> bool:
        return _connected(set(self._cells), self.binding_graph())

    def agrees_with(self, other: "Assembly") -> bool:
        """True when the two assemblies place the same tile on every shared point."""
        small, large = (self, other) if len(self) <= len(other) else (other, self)
        for p, t in small._cells.items():
            u = large._cells.get(p)
            if u is not None and u != t:
                return False
        return True

    def binding_graph(self) -> list[tuple[Point, Point]]:
        edges = []
        for p, t in self._cells.items():
            for side in (EAST, NORTH):
                q = p.neighbor(side)
                u = self._cells.get(q)
                if u is not None and t.glues[side].binds(u.glues[opposite(side)]):
                    edges.append((p, q))
        edges.sort()
        return edges

    def with_tile(self, p, t: TileType) -> "Assembly":
        cells = dict(self._cells)
        cells[Point(*p)] = t
        return Assembly(cells)


def _connected(nodes: set, edges) -> bool:
    if not nodes:
        return False
    adj: dict = {n: [] for n in nodes}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    start = next(iter(nodes))
    seen = {start}
    stack = [start]
    while stack:
        for q in adj[stack.pop()]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return len(seen) == len(nodes)


def validate_assembly(a: Assembly) -> None:
    """Check the temperature-1 stability of ``a``; raise if unstable."""
    if not a.is_connected():
        raise TileError("assembly binding graph is disconnected")


def _check_member(tas: TAS, t: TileType) -> None:
    if tas.tiles._by_name.get(t.name) != t:
        raise TileError(f"tile {t.name!r} is not in the tile set")


def attachable(tas: TAS, a: Assembly, p, t: TileType) -> bool:
    _check_member(tas, t)
    p = Point(*p)
    if p in a:
        return False
    return a.binding_strength(p, t) >= tas.temperature


def _frontier_at(tiles: TileSet, cells, p: Point) -> set:
    found = set()
    for side, q in neighbors(p):
        other = cells.get(q)
        if other is not None:
            # a tile at p bound to ``other`` sits on other's opposite side
            for t in tiles.fitting(opposite(side), other.glues[opposite(side)]):
                found.add((p, t))
    return found


def frontier_set(tas: TAS, a: Assembly) -> frozenset:
    """Unordered frontier, cached on the assembly and reused by ``attach``."""
    cache = a._frontier.get(id(tas.tiles))
    if cache is not None and cache[0] is tas.tiles:
        return cache[1]
    cells = a._cells
    found = set()
    for p in cells:
        for _, q in neighbors(p):
            if q not in cells:
                found |= _frontier_at(tas.tiles, cells, q)
    fs = frozenset(found)
    a._frontier[id(tas.tiles)] = (tas.tiles, fs)
    return fs


def frontier(tas: TAS, a: Assembly) -> list[Option]:
    """All ``(point, tile)`` pairs that can attach to ``a``, lexicographically ordered."""
    return sorted(frontier_set(tas, a), key=_option_key)


def attach(a: Assembly, p, t: TileType, tas: TAS | None = None) -> Assembly:
    """Return ``a`` plus tile ``t`` at ``p``; ``a`` itself is left untouched.

    When ``tas`` is given and ``a`` has a cached frontier for its tile set, the
    child's frontier is derived incrementally from the parent's.
    """
    p = Point(*p)
    if p in a:
        raise AttachmentError(p, t.name, "point is occupied")
    if a.binding_strength(p, t) < 1:
        raise AttachmentError(p, t.name, "no binding glue")
    if tas is not None:
        _check_member(tas, t)
    child = a.with_tile(p, t)
    if tas is not None:
        cached = a._frontier.get(id(tas.tiles))
        if cached is not None and cached[0] is tas.tiles:
            parent_f = cached[1]
            cells = child._cells
            keep = {opt for opt in parent_f if opt[0] != p}
            for _, q in neighbors(p):
                if q not in cells:
                    keep |= _frontier_at(tas.tiles, cells, q)
            child._frontier[id(tas.tiles)] = (tas.tiles, frozenset(keep))
    return child


def binding_graph(a: Assembly) -> list[tuple[Point, Point]]:
    return a.binding_graph()
