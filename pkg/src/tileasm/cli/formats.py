"""Text formats for tile sets, shapes and race declarations.

Tile set::

    tasfile v1
    # comment
    tile <name> n=<label>:<strength> e=... s=... w=...
    seed <name> <x> <y>

Labels and names are percent-encoded UTF-8; a null glue is ``-:0``.

Shape: one ``<x> <y>`` pair per line.

Declaration: one line per contested point, in attachment order::

    poc <x> <y> winner=<tile> start=<x> <y> lwin=<int> llose=<int> [rigged] [wpath=<x>,<y>;...] [lpath=...]

The two path fields are optional; without them a declaration supports the
product bound but not the path-based checks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable
from urllib.parse import quote, unquote

from ..competition import CompetitionSpec, theorem1_lower_bound
from ..core import TAS, Glue, Point, TileSet, TileType
from ..verifier import SndDeclaration

TAS_HEADER = "tasfile v1"
_NAME_SAFE = ".:@_-()[]+=,"


class ParseError(ValueError):
    def __init__(self, source: str, line: int, message: str):
        super().__init__(f"{source}:{line}: {message}")
        self.source = source
        self.line = line


def _enc_name(name: str) -> str:
    return quote(name, safe=_NAME_SAFE)


def _enc_glue(g: Glue) -> str:
    if g.is_null:
        return "-:0"
    return f"{quote(g.label, safe='')}:{g.strength}"


# -- tile sets ------------------------------------------------------------------


def dump_tas(tas: TAS, comments: Iterable[str] = ()) -> str:
    lines = [TAS_HEADER]
    lines += [f"# {c}" for c in comments]
    for t in tas.tiles:
        sides = " ".join(f"{k}={_enc_glue(g)}" for k, g in zip("nesw", t.glues))
        lines.append(f"tile {_enc_name(t.name)} {sides}")
    sp = tas.seed_point
    lines.append(f"seed {_enc_name(tas.seed_tile)} {sp.x} {sp.y}")
    return "\n".join(lines) + "\n"


_GLUE = re.compile(r"^([nesw])=([^:\s]+):(\d+)$")


def _parse_glue(tok: str, side: str, src: str, ln: int) -> Glue:
    m = _GLUE.match(tok)
    if not m or m.group(1) != side:
        raise ParseError(src, ln, f"expected {side}=<label>:<strength>, got {tok!r}")
    label, strength = m.group(2), int(m.group(3))
    if strength == 0:
        if label != "-":
            raise ParseError(src, ln, "a zero-strength glue must be written -:0")
        return Glue()
    return Glue(unquote(label, errors="strict"), strength)


def _int(tok: str, src: str, ln: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(src, ln, f"expected an integer, got {tok!r}") from None


def parse_tas(text: str, source: str = "<tas>") -> TAS:
    tiles: list[TileType] = []
    seed = None
    header_seen = False
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if line != TAS_HEADER:
                raise ParseError(source, ln, f"expected header {TAS_HEADER!r}")
            header_seen = True
            continue
        parts = line.split()
        if parts[0] == "tile":
            if len(parts) != 6:
                raise ParseError(source, ln, "tile line needs a name and four glues")
            glues = [_parse_glue(tok, s, source, ln) for tok, s in zip(parts[2:], "nesw")]
            tiles.append(TileType(unquote(parts[1]), *glues))
        elif parts[0] == "seed":
            if seed is not None:
                raise ParseError(source, ln, "more than one seed line")
            if len(parts) != 4:
                raise ParseError(source, ln, "seed line is: seed <name> <x> <y>")
            seed = (unquote(parts[1]), _int(parts[2], source, ln), _int(parts[3], source, ln), ln)
        else:
            raise ParseError(source, ln, f"unknown record {parts[0]!r}")
    if not header_seen:
        raise ParseError(source, 1, "empty file")
    if seed is None:
        raise ParseError(source, ln if text else 1, "missing seed line")
    name, x, y, sln = seed
    try:
        ts = TileSet(tiles)
    except ValueError as exc:
        raise ParseError(source, sln, str(exc)) from None
    if name not in ts:
        raise ParseError(source, sln, f"seed tile {name!r} is not defined")
    return TAS(ts, Point(x, y), name)


# -- shapes ---------------------------------------------------------------------


def dump_shape(points: Iterable) -> str:
    pts = sorted(Point(*p) for p in points)
    return "".join(f"{p.x} {p.y}\n" for p in pts)


def parse_shape(text: str, source: str = "<shape>") -> frozenset[Point]:
    pts = set()
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(source, ln, "expected '<x> <y>'")
        pts.add(Point(_int(parts[0], source, ln), _int(parts[1], source, ln)))
    if not pts:
        raise ParseError(source, 1, "shape is empty")
    return frozenset(pts)


# -- declarations -------------------------------------------------------------------


@dataclass(frozen=True)
class DeclEntry:
    poc: Point
    winner: str
    start: Point
    l_win: int
    l_lose: int
    rigged: bool = False
    winning_path: tuple[Point, ...] | None = None
    losing_path: tuple[Point, ...] | None = None

    def spec(self) -> CompetitionSpec:
        if self.winning_path is None or self.losing_path is None:
            raise ValueError(f"race at {tuple(self.poc)} has no paths")
        return CompetitionSpec(self.start, self.poc, self.winning_path, self.losing_path, self.winner, self.rigged)


@dataclass(frozen=True)
class DeclFile:
    entries: tuple[DeclEntry, ...]

    @property
    def has_paths(self) -> bool:
        return all(e.winning_path is not None and e.losing_path is not None for e in self.entries)

    def declaration(self) -> SndDeclaration:
        return SndDeclaration.from_competitions(e.spec() for e in self.entries)

    def lower_bound(self):
        return theorem1_lower_bound([(e.l_win, e.l_lose, e.rigged) for e in self.entries])

    @classmethod
    def of(cls, decl: SndDeclaration) -> "DeclFile":
        return cls(
            tuple(
                DeclEntry(c.poc, c.winner_tile, c.start, c.l_win, c.l_lose, c.rigged, c.winning_path, c.losing_path)
                for c in decl.competitions
            )
        )


def _path(points) -> str:
    return ";".join(f"{p.x},{p.y}" for p in points)


def dump_decl(decl: SndDeclaration | DeclFile) -> str:
    df = decl if isinstance(decl, DeclFile) else DeclFile.of(decl)
    lines = ["# contested points in attachment order"]
    for e in df.entries:
        line = (
            f"poc {e.poc.x} {e.poc.y} winner={_enc_name(e.winner)} start={e.start.x} {e.start.y} "
            f"lwin={e.l_win} llose={e.l_lose}"
        )
        if e.rigged:
            line += " rigged"
        if e.winning_path is not None:
            line += f" wpath={_path(e.winning_path)}"
        if e.losing_path is not None:
            line += f" lpath={_path(e.losing_path)}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def _parse_path(tok: str, src: str, ln: int) -> tuple[Point, ...]:
    out = []
    for item in tok.split(";"):
        xy = item.split(",")
        if len(xy) != 2:
            raise ParseError(src, ln, f"bad path point {item!r}")
        out.append(Point(_int(xy[0], src, ln), _int(xy[1], src, ln)))
    return tuple(out)


def parse_decl(text: str, source: str = "<decl>") -> DeclFile:
    entries = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "poc" or len(parts) < 8:
            raise ParseError(source, ln, "expected: poc <x> <y> winner=<tile> start=<x> <y> lwin=<n> llose=<n>")
        poc = Point(_int(parts[1], source, ln), _int(parts[2], source, ln))
        if not parts[3].startswith("winner=") or not parts[4].startswith("start="):
            raise ParseError(source, ln, "expected winner=<tile> start=<x> <y>")
        winner = unquote(parts[3][len("winner="):])
        start = Point(_int(parts[4][len("start="):], source, ln), _int(parts[5], source, ln))
        fields: dict[str, str] = {}
        rigged = False
        for tok in parts[6:]:
            if tok == "rigged":
                rigged = True
                continue
            key, sep, val = tok.partition("=")
            if not sep or key not in ("lwin", "llose", "wpath", "lpath") or key in fields:
                raise ParseError(source, ln, f"unexpected field {tok!r}")
            fields[key] = val
        if "lwin" not in fields or "llose" not in fields:
            raise ParseError(source, ln, "lwin and llose are required")
        wpath = _parse_path(fields["wpath"], source, ln) if "wpath" in fields else None
        lpath = _parse_path(fields["lpath"], source, ln) if "lpath" in fields else None
        entry = DeclEntry(
            poc, winner, start, _int(fields["lwin"], source, ln), _int(fields["llose"], source, ln), rigged, wpath, lpath
        )
        if entry.l_win < 2 or entry.l_lose < 2:
            raise ParseError(source, ln, "path lengths must be at least 2")
        if wpath is not None and len(wpath) != entry.l_win or lpath is not None and len(lpath) != entry.l_lose:
            raise ParseError(source, ln, "path does not match its declared length")
        if wpath is not None and lpath is not None:
            try:
                entry.spec()
            except ValueError as exc:
                raise ParseError(source, ln, str(exc)) from None
        entries.append(entry)
    return DeclFile(tuple(entries))


def read_text(path: str | Path) -> str:
    return Path(path).read_text(encoding="utf-8")


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")
