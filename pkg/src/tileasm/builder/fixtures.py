"""Small hand-made systems with known race probabilities."""

from __future__ import annotations

import re
from collections import defaultdict

from ..competition import CompetitionSpec
from ..core import OFFSETS, TAS, Assembly, Point, TileSet, TileType, glue, opposite
from ..verifier import SndDeclaration
from .result import GeneratedTas

FIXTURES = ("fig1", "fig2", "snd_demo", "conclusion_gadget", "dd_but_disagree")

#: tile placed by the conclusion gadget when at least one race is lost
MARK_TILE = "ok"


class _Sketch:
    """Tiles given by name and position; ``link`` joins two of them with a private glue."""

    def __init__(self):
        self.pos: dict[str, Point] = {}
        self.glues: dict[str, list[str]] = defaultdict(lambda: [""] * 4)

    def tile(self, name: str, at) -> str:
        self.pos[name] = Point(*at)
        self.glues[name]
        return name

    def link(self, a: str, b: str, label: str | None = None) -> None:
        pa, pb = self.pos[a], self.pos[b]
        side = OFFSETS.index((pb.x - pa.x, pb.y - pa.y))
        label = label or f"{a}>{b}"
        for name, s in ((a, side), (b, opposite(side))):
            if self.glues[name][s] not in ("", label):
                raise ValueError(f"tile {name} already has a glue on side {s}")
            self.glues[name][s] = label

    def chain(self, names: list[str]) -> None:
        for a, b in zip(names, names[1:]):
            self.link(a, b)

    def tas(self, seed: str) -> TAS:
        tiles = [TileType(n, *(glue(g) for g in gs)) for n, gs in self.glues.items()]
        return TAS(TileSet(tiles), self.pos[seed], seed)

    def assembly(self, names) -> Assembly:
        tiles = {t.name: t for t in self.tas(next(iter(self.pos))).tiles}
        return Assembly({self.pos[n]: tiles[n] for n in names})

    def race(self, path_win: list[str], path_lose: list[str], rigged: bool = False) -> CompetitionSpec:
        return CompetitionSpec(
            start=self.pos[path_win[0]],
            poc=self.pos[path_win[-1]],
            winning_path=tuple(self.pos[n] for n in path_win),
            losing_path=tuple(self.pos[n] for n in path_lose),
            winner_tile=path_win[-1],
            rigged=rigged,
        )


def _result(sk: _Sketch, seed: str, comps, correct: list[str], label: str) -> GeneratedTas:
    ref = sk.assembly(correct)
    return GeneratedTas(
        tas=sk.tas(seed),
        decl=SndDeclaration.from_competitions(comps),
        expected_domain=ref.domain,
        provenance=(label,),
        reference=ref,
    )


def _fig1_sketch() -> _Sketch:
    sk = _Sketch()
    sk.tile("s", (1, 0))
    sk.tile("4", (0, 0))
    sk.tile("1", (1, 1))
    sk.tile("2", (0, 1))
    sk.tile("3", (0, 0))  # competes with "4"
    sk.link("s", "4")
    sk.chain(["s", "1", "2", "3"])
    return sk


def fig1() -> GeneratedTas:
    """Race of a 2-point path against a 4-point path into the point west of the seed."""
    sk = _fig1_sketch()
    comp = sk.race(["s", "4"], ["s", "1", "2", "3"])
    return _result(sk, "s", [comp], ["s", "4", "1", "2"], "fig1")


def fig2() -> GeneratedTas:
    """``fig1`` plus two side tiles that never interfere with the race."""
    sk = _fig1_sketch()
    sk.tile("A", (2, 0))
    sk.tile("B", (2, 1))
    sk.link("s", "A")
    sk.link("1", "B")
    comp = sk.race(["s", "4"], ["s", "1", "2", "3"])
    return _result(sk, "s", [comp], ["s", "4", "1", "2", "A", "B"], "fig2")


def snd_demo() -> GeneratedTas:
    """Two races in sequence: the ``fig1`` race, then an even race started by its winner."""
    sk = _fig1_sketch()
    sk.tile("5", (-1, 0))
    sk.link("4", "5")
    # the losing tile of the first race opens a dead end at the same point
    sk.tile("C", (-1, 0))
    sk.link("3", "C")
    sk.tile("6", (-1, -1))
    sk.tile("7", (-2, -1))
    sk.tile("8", (-2, 0))
    sk.tile("9", (-2, -1))
    sk.chain(["5", "6", "7"])
    sk.chain(["5", "8", "9"])
    sk.tile("10", (-3, -1))
    sk.link("7", "10")
    first = sk.race(["s", "4"], ["s", "1", "2", "3"])
    second = sk.race(["5", "6", "7"], ["5", "8", "9"])
    correct = ["s", "4", "1", "2", "5", "6", "7", "8", "10"]
    return _result(sk, "s", [first, second], correct, "snd_demo")


def conclusion_gadget(races: int = 3) -> GeneratedTas:
    """Chain of ``fig1`` races; every lost race drops an ``ok`` tile below its contested point."""
    sk = _Sketch()
    comps = []
    correct = []
    prev = None
    for i in range(races):
        x0 = -2 * i
        x, w, a, b = f"x{i}", f"w{i}", f"u{i}", f"v{i}"
        sk.tile(x, (x0, 0))
        sk.tile(w, (x0 - 1, 0))
        sk.tile(a, (x0, 1))
        sk.tile(b, (x0 - 1, 1))
        lose = sk.tile(f"c{i}", (x0 - 1, 0))
        if prev is not None:
            sk.link(prev, x)
        sk.link(x, w)
        sk.chain([x, a, b, lose])
        sk.glues[lose][2] = "mark"
        comps.append(sk.race([x, w], [x, a, b, lose]))
        correct += [x, w, a, b]
        prev = w
    sk.glues[MARK_TILE][0] = "mark"
    return _result(sk, "x0", comps, correct, "conclusion_gadget")


def dd_but_disagree() -> GeneratedTas:
    """``fig1`` plus two tile types that both bind to the seed's east side."""
    sk = _fig1_sketch()
    sk.glues["s"][1] = "fork"
    for name in ("P", "Q"):
        sk.tile(name, (2, 0))
        sk.link("s", name, "fork")
    comp = sk.race(["s", "4"], ["s", "1", "2", "3"])
    return _result(sk, "s", [comp], ["s", "4", "1", "2", "P"], "dd_but_disagree")


def race_paths(l_win: int, l_lose: int) -> tuple[list[Point], list[Point]]:
    """Two simple lattice paths with the given point counts, meeting only at their ends.

    The lattice is bipartite, so the counts must have equal parity. Two 2-point
    paths are the same pair of points; the race is then between two tile types.
    """
    if l_win < 2 or l_lose < 2:
        raise ValueError("path lengths must be at least 2")
    if (l_win - l_lose) % 2:
        raise ValueError(f"no race with lengths {l_win} and {l_lose}: they differ in parity")
    if l_win % 2 == 0:
        # contested point east of the start; detours climb north or drop south
        def tower(length, d):
            t = (length - 2) // 2
            return (
                [Point(0, d * j) for j in range(t + 1)]
                + [Point(1, d * j) for j in range(t, 0, -1)]
                + [Point(1, 0)]
            )

        return tower(l_win, 1), tower(l_lose, -1)

    # odd lengths: contested point diagonal; one path leaves east, the other north
    def east(length):
        t = (length - 3) // 2
        return [Point(j, 0) for j in range(t + 2)] + [Point(j, 1) for j in range(t + 1, 0, -1)]

    def north(length):
        t = (length - 3) // 2
        return [Point(0, j) for j in range(t + 2)] + [Point(1, j) for j in range(t + 1, 0, -1)]

    return east(l_win), north(l_lose)


def race(l_win: int, l_lose: int) -> GeneratedTas:
    """Isolated race of an ``l_win``-point path against an ``l_lose``-point path."""
    win, lose = race_paths(l_win, l_lose)
    sk = _Sketch()
    names_w = ["start"] + [f"w{i}" for i in range(1, len(win) - 1)] + ["win"]
    names_l = ["start"] + [f"l{i}" for i in range(1, len(lose) - 1)] + ["lose"]
    for n, p in zip(names_w, win):
        sk.tile(n, p)
    for n, p in zip(names_l[1:], lose[1:]):
        sk.tile(n, p)
    if len(win) == len(lose) == 2:
        # both tiles bind the same glue of the start tile
        sk.link("start", "win", "go")
        sk.link("start", "lose", "go")
    else:
        sk.chain(names_w)
        sk.chain(names_l)
    comp = sk.race(names_w, names_l)
    correct = names_w + names_l[1:-1]
    return _result(sk, "start", [comp], correct, f"race({l_win},{l_lose})")


_RACE = re.compile(r"^race\((\d+),\s*(\d+)\)$")


def build_fixture(name: str) -> GeneratedTas:
    """Fixture by name: one of ``FIXTURES`` or ``race(l,l')``."""
    m = _RACE.match(name.strip())
    if m:
        return race(int(m.group(1)), int(m.group(2)))
    builders = {
        "fig1": fig1,
        "fig2": fig2,
        "snd_demo": snd_demo,
        "conclusion_gadget": conclusion_gadget,
        "dd_but_disagree": dd_but_disagree,
    }
    try:
        return builders[name]()
    except KeyError:
        raise ValueError(f"unknown fixture {name!r}; expected one of {', '.join(FIXTURES)} or race(l,l')") from None
