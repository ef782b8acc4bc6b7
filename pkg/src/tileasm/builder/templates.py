"""Gadget templates: small trees of tiles laid out by relative offsets.

A template owns its tile types. Neighboring cells of the tree are joined by a
glue that only they share, so a template can be stamped at many places while
contributing its tiles once. Interface glues on the input and output cells
carry the labels that chain templates together.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core import NORTH, EAST, SOUTH, WEST, OFFSETS, Glue, Point, TileType, glue, opposite

DIRS = {"n": NORTH, "e": EAST, "s": SOUTH, "w": WEST}


class BuildError(ValueError):
    """Raised when gadget instances overlap or the gadget logic is inconsistent."""


def side_towards(a: tuple[int, int], b: tuple[int, int]) -> int:
    d = (b[0] - a[0], b[1] - a[1])
    try:
        return OFFSETS.index(d)
    except ValueError:
        raise BuildError(f"cells {a} and {b} are not adjacent") from None


@dataclass
class Template:
    """A tree of cells with fixed offsets; cell 0 is the input cell."""

    name: str
    cells: list[tuple[int, int]] = field(default_factory=list)
    parent: list[int | None] = field(default_factory=list)
    labels: list[str] = field(default_factory=list)
    extra: dict[int, dict[int, str]] = field(default_factory=dict)

    def __post_init__(self):
        self._tiles: list[TileType] | None = None

    # -- construction -----------------------------------------------------
    def root(self, at: tuple[int, int], label: str = "") -> int:
        if self.cells:
            raise BuildError(f"{self.name}: root already set")
        self.cells.append(tuple(at))
        self.parent.append(None)
        self.labels.append(label or "in")
        return 0

    def grow(self, frm: int, at: tuple[int, int], label: str = "") -> int:
        side_towards(self.cells[frm], at)
        self.cells.append(tuple(at))
        self.parent.append(frm)
        self.labels.append(label or str(len(self.cells) - 1))
        self._tiles = None
        return len(self.cells) - 1

    def walk(self, frm: int, moves: str) -> list[int]:
        """Extend from ``frm`` along a string of moves such as ``"nnne"``."""
        out = []
        cur = frm
        for ch in moves:
            dx, dy = OFFSETS[DIRS[ch]]
            x, y = self.cells[cur]
            cur = self.grow(cur, (x + dx, y + dy))
            out.append(cur)
        return out

    def line(self, frm: int, direction: str, count: int) -> list[int]:
        return self.walk(frm, direction * count) if count > 0 else []

    def port(self, cell: int, side: str | int, label: str) -> None:
        """Attach an interface glue to ``cell``."""
        side = DIRS[side] if isinstance(side, str) else side
        slot = self.extra.setdefault(cell, {})
        if side in slot:
            raise BuildError(f"{self.name}: cell {cell} side {side} already has a port")
        slot[side] = label
        self._tiles = None

    def last(self) -> int:
        return len(self.cells) - 1

    # -- tiles --------------------------------------------------------------
    def tile_name(self, cell: int) -> str:
        return f"{self.name}:{self.labels[cell]}"

    def tiles(self) -> list[TileType]:
        if self._tiles is not None:
            return self._tiles
        glues: list[list[Glue]] = [[glue("")] * 4 for _ in self.cells]
        for c, p in enumerate(self.parent):
            if p is None:
                continue
            s = side_towards(self.cells[p], self.cells[c])
            label = f"{self.name}/{self.labels[p]}>{self.labels[c]}"
            for cell, side in ((p, s), (c, opposite(s))):
                if not glues[cell][side].is_null:
                    raise BuildError(f"{self.name}: two glues on one side of cell {cell}")
                glues[cell][side] = glue(label)
        for cell, ports in self.extra.items():
            for side, label in ports.items():
                if not glues[cell][side].is_null:
                    raise BuildError(f"{self.name}: port clashes with an internal glue on cell {cell}")
                glues[cell][side] = glue(label)
        self._tiles = [TileType(self.tile_name(c), *g) for c, g in enumerate(glues)]
        return self._tiles

    def footprint(self, cells=None) -> list[tuple[int, int]]:
        idx = range(len(self.cells)) if cells is None else cells
        return [self.cells[i] for i in idx]

    def path_between(self, a: int, b: int) -> list[int]:
        """Cells on the tree path from ``a`` up to its ancestor ``b``, ``a`` first."""
        out = [a]
        while out[-1] != b:
            p = self.parent[out[-1]]
            if p is None:
                raise BuildError(f"{self.name}: cell {b} is not an ancestor of {a}")
            out.append(p)
        return out


@dataclass
class Layout:
    """Accumulates placed template instances and the reference assembly."""

    cells: dict[Point, TileType] = field(default_factory=dict)
    owner: dict[Point, str] = field(default_factory=dict)
    instances: list[tuple[str, str, tuple[int, int]]] = field(default_factory=list)
    templates: dict[str, Template] = field(default_factory=dict)

    def register(self, t: Template) -> Template:
        known = self.templates.get(t.name)
        if known is not None and known is not t:
            raise BuildError(f"two templates named {t.name!r}")
        self.templates[t.name] = t
        return t

    def place(self, t: Template, origin: tuple[int, int], skip=(), instance: str | None = None) -> str:
        """Stamp ``t`` at ``origin``; cells in ``skip`` are left out of the reference."""
        self.register(t)
        instance = instance or f"{t.name}@{origin[0]},{origin[1]}"
        tiles = t.tiles()
        skip = set(skip)
        ox, oy = origin
        for c, (dx, dy) in enumerate(t.cells):
            if c in skip:
                continue
            p = Point(ox + dx, oy + dy)
            if p in self.cells:
                raise BuildError(f"instances {self.owner[p]} and {instance} overlap at {tuple(p)}")
            self.cells[p] = tiles[c]
            self.owner[p] = instance
        self.instances.append((instance, t.name, (ox, oy)))
        return instance

    def tile_types(self) -> list[TileType]:
        out = []
        for t in self.templates.values():
            out.extend(t.tiles())
        return out
