"""Zigzag binary counter of fixed width ``K`` and height ``n``.

Rows of gadgets of height ``h`` alternate between increment rows, which
assemble right to left, and copy rows, which assemble left to right. Each bit
occupies a slot six columns wide. A read gadget guesses the bit below it by
racing a four-point path against a ``4h - 10`` point path; a one-bit is a
two-tile bump that blocks the short path, so reading a one is certain and only
zeros can be misread.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..competition import CompetitionSpec, theorem1_lower_bound
from ..core import TAS, Assembly, Point, TileSet, TileType, glue
from ..verifier import SndDeclaration
from .params import BuildParams, counter_params
from .result import GeneratedTas
from .templates import BuildError, Layout, Template

SLOT = 6

LSV = "least_significant_value_bit"
LSI = "least_significant_indicator_bit"
NLSV = "non_least_significant_value_bit"
NLSI = "non_least_significant_indicator_bit"
NMSI = "non_most_significant_indicator_bit"
MSI = "most_significant_indicator_bit"


def label(family: str, field: str, bit: int | None = None, **flags: int) -> str:
    head = field if bit is None else f"{field}={bit}"
    tail = "".join(f", {k}={v}" for k, v in flags.items())
    return f"{family}/⟨{head}{tail}⟩"


def inc(field, bit=None, carry=0):
    return label("inc", field, bit, carry=carry)


def cpy(field, bit=None, done=0):
    return label("copy", field, bit, done=done)


INC_START = inc(LSV, carry=1)


def to_copy(c):
    return f"inc/⟨inc_to_copy, carry={c}⟩"


TO_INC = "copy/⟨copy_to_inc⟩"
TO_LAST = "copy/⟨copy_to_last⟩"


# -- gadget shapes (drawn in increment orientation, mirrored for copy rows) ---


def mirrored(t: Template, width: int, name: str) -> Template:
    swap = {1: 3, 3: 1}
    out = Template(name)
    out.cells = [(width - 1 - x, y) for x, y in t.cells]
    out.parent = list(t.parent)
    out.labels = list(t.labels)
    out.extra = {c: {swap.get(s, s): lab for s, lab in ports.items()} for c, ports in t.extra.items()}
    return out


@dataclass
class ReadGadget:
    template: Template
    inp: str
    outs: tuple[str, str]
    x: int
    short: list[int]
    long: list[int]
    y0: int
    y1: int


@dataclass
class WriteGadget:
    template: Template
    inp: str
    bit: int
    out: str


def read_shape(name: str, h: int, inp: str, out0: str, out1: str, copy: bool) -> ReadGadget:
    t = Template(name)
    x = t.root((5, 0), "x")
    t.port(x, "e", inp)
    s1, s2 = t.walk(x, "ww")
    y0 = t.grow(s2, (2, 0), "y0")
    t.port(y0, "w", out0)
    body = t.walk(x, "n" * (h - 3) + ("w" + "s" * (h - 4) + "w" + "n" * (h - 4) + "w" + "s" * (h - 4)))
    y1 = t.grow(body[-1], (2, 0), "y1")
    t.port(y1, "w", out1)
    if copy:
        t = mirrored(t, SLOT, name)
    return ReadGadget(t, inp, (out0, out1), x, [x, s1, s2, y0], [x, *body, y1], y0, y1)


def write_shape(name: str, h: int, inp: str, bit: int, out: str, copy: bool) -> WriteGadget:
    t = Template(name)
    w = t.root((1, 0), "in")
    t.port(w, "e", inp)
    tip = t.walk(w, "n" * (h - 2) + "eeee" + "n" + "www" + ("nws" if bit else "w") + "w" + "s" * (h - 1))[-1]
    t.port(tip, "w", out)
    if copy:
        t = mirrored(t, SLOT, name)
    return WriteGadget(t, inp, bit, out)


def turn_shape(name: str, h: int, inp: str, out: str, copy: bool, last: bool = False) -> Template:
    """Climb from the end of one row to the start of the next, two columns wide."""
    t = Template(name)
    r = t.root((1, 0), "in")
    t.port(r, "e", inp)
    rise = 2 * h - 1 if last else 2 * h - 2
    top = t.walk(r, "sw" + "n" * (rise + 1) + "e")[-1]
    mouth = t.line(top, "s", rise - h)[-1]
    t.port(mouth, "e", out)
    t.line(mouth, "s", h - 1)
    return mirrored(t, 2, name) if copy else t


def last_shape(name: str, h: int, inp: str) -> Template:
    t = Template(name)
    r = t.root((0, 0), "in")
    t.port(r, "w", inp)
    corner = t.walk(r, "se" + "n" * (h - 1) + "w")[-1]
    t.line(corner, "s", h - 3)
    t.walk(corner, "ne")
    return t


def init_right_shape(name: str, h: int, inp: str, out: str) -> Template:
    t = Template(name)
    r = t.root((0, 0), "in")
    t.port(r, "w", inp)
    tip = t.walk(r, "e" + "n" * (h - 1) + "w" + "s" * (h - 2))[-1]
    t.port(tip, "w", out)
    return t


def init_slot_shape(name: str, inp: str, from_south: bool, bit: int, out: str) -> Template:
    t = Template(name)
    r = t.root((0, 0), "in")
    t.port(r, "s" if from_south else "w", inp)
    tip = t.walk(r, "eee" + ("nes" if bit else "e") + "e")[-1]
    t.port(tip, "e", out)
    return t


def seed_shape(name: str, e: int, out: str | None) -> Template:
    t = Template(name)
    if e >= 1:
        r = t.root((0, 0), "seed")
        tip = t.walk(r, "n" * (e - 1) + "ee")[-1]
    else:
        r = t.root((1, -1), "seed")
        tip = t.walk(r, "e")[-1]
    if out:
        t.port(tip, "n", out)
    return t


# -- the gadget catalogue ------------------------------------------------------


@dataclass
class Catalogue:
    reads: dict[str, ReadGadget]
    writes: dict[str, WriteGadget]
    turns: dict[str, Template]

    def read(self, inp: str) -> ReadGadget:
        try:
            return self.reads[inp]
        except KeyError:
            raise BuildError(f"no read gadget accepts {inp}") from None

    def write(self, inp: str) -> WriteGadget:
        try:
            return self.writes[inp]
        except KeyError:
            raise BuildError(f"no write gadget accepts {inp}") from None


def catalogue(k: int, h: int) -> Catalogue:
    reads: dict[str, ReadGadget] = {}
    writes: dict[str, WriteGadget] = {}

    def R(name, inp, out0, out1, copy):
        if inp in reads:
            raise BuildError(f"two read gadgets accept {inp}")
        reads[inp] = read_shape(name, h, inp, out0, out1, copy)

    def W(name, inp, bit, out, copy):
        if inp in writes:
            raise BuildError(f"two write gadgets accept {inp}")
        writes[inp] = write_shape(name, h, inp, bit, out, copy)

    one = k == 1
    # increment rows
    R("inc.read.lsv", INC_START, inc(LSV, 1, carry=0), inc(LSV, 0, carry=1), False)
    for b in (0, 1):
        W(f"inc.write.lsv.{b}", inc(LSV, b, carry=1 - b), b, inc(LSI, carry=1 - b), False)
    for c in (0, 1):
        # with a single bit the least significant indicator is also the most significant one
        nxt = inc(MSI, 1, carry=c) if one else inc(NMSI, 1, carry=c)
        R(f"inc.read.lsi.c{c}", inc(LSI, carry=c), nxt, nxt, False)
        for b in (0, 1):
            W(f"inc.write.nmsi.{b}.c{c}", inc(NMSI, b, carry=c), b, inc(NLSV, carry=c), False)
            W(f"inc.write.msi.{b}.c{c}", inc(MSI, b, carry=c), b, to_copy(c), False)
        R(f"inc.read.nlsv.c{c}", inc(NLSV, carry=c), inc(NLSV, c, carry=0), inc(NLSV, 1 - c, carry=c), False)
        R(f"inc.read.nlsi.c{c}", inc(NLSI, carry=c), inc(NMSI, 0, carry=c), inc(MSI, 0, carry=c), False)
    for b, c in ((0, 0), (0, 1), (1, 0)):
        W(f"inc.write.nlsv.{b}.c{c}", inc(NLSV, b, carry=c), b, inc(NLSI, carry=c), False)
    # copy rows
    for d in (0, 1):
        after_msi = cpy(LSV, done=d) if one else cpy(NLSV, done=d)
        R(f"copy.read.msi.d{d}", cpy(MSI, done=d), cpy(NLSI, 1 - d, done=d), cpy(NLSI, 1 - d, done=d), True)
        W(f"copy.write.nlsi.{1 - d}.d{d}", cpy(NLSI, 1 - d, done=d), 1 - d, after_msi, True)
        R(f"copy.read.nlsv.d{d}", cpy(NLSV, done=d), cpy(NLSV, 0, done=d), cpy(NLSV, 1 - d, done=d), True)
        R(f"copy.read.nmsi.d{d}", cpy(NMSI, done=d), cpy(NMSI, 0, done=d), cpy(LSI, 0, done=d), True)
        W(f"copy.write.nmsi.0.d{d}", cpy(NMSI, 0, done=d), 0, cpy(NLSV, done=d), True)
        W(f"copy.write.lsi.0.d{d}", cpy(LSI, 0, done=d), 0, cpy(LSV, done=d), True)
        R(f"copy.read.lsv.d{d}", cpy(LSV, done=d), cpy(LSV, 0, done=d), cpy(LSV, 1 - d, done=d), True)
    for b, d in ((0, 0), (1, 0), (0, 1)):
        W(f"copy.write.nlsv.{b}.d{d}", cpy(NLSV, b, done=d), b, cpy(NMSI, done=d), True)
    for b in (0, 1):
        W(f"copy.write.lsv.{b}.d0", cpy(LSV, b, done=0), b, TO_INC, True)
    W("copy.write.lsv.0.d1", cpy(LSV, 0, done=1), 0, TO_LAST, True)

    turns = {
        to_copy(0): turn_shape("inc.to_copy", h, to_copy(0), cpy(MSI, done=0), False),
        to_copy(1): turn_shape("inc.to_copy_last", h, to_copy(1), cpy(MSI, done=1), False, last=True),
        TO_INC: turn_shape("copy.to_inc", h, TO_INC, INC_START, True),
        TO_LAST: last_shape("copy.last", h, TO_LAST),
    }
    return Catalogue(reads, writes, turns)


# -- layout ----------------------------------------------------------------------


def slot_bits(value: int, k: int, indicator: int) -> list[int]:
    """Bits per slot from left to right: indicator b'_i then value b_i, for i = k..1."""
    bits = []
    for i in range(k, 0, -1):
        bits.append(1 if i == indicator else 0)
        bits.append((value >> (i - 1)) & 1)
    return bits


def expected_counter_domain(K: int, n: int, e: int) -> frozenset[Point]:
    pts = set(seed_domain(e))
    pts.update(Point(x, y) for x in range(K) for y in range(e, n))
    return frozenset(pts)


def seed_domain(e: int) -> list[Point]:
    if e >= 1:
        return [Point(0, y) for y in range(e)] + [Point(1, e - 1), Point(2, e - 1)]
    return [Point(1, -1), Point(2, -1)]


def build_counter(params: BuildParams, prefix: str = "") -> GeneratedTas:
    """Counter system for ``params`` with its declaration and intended terminal.

    ``prefix`` namespaces every tile and glue so several counters can share a
    tile set.
    """
    if params.small:
        return build_comb(params, prefix)
    h, k, m, e, K = params.h, params.k, params.m, params.e, params.K
    L = K - 2
    done = 0
    lay = Layout()
    comps: list[CompetitionSpec] = []
    cat = catalogue(k, h)

    def slot_x(j):
        return 2 + SLOT * j

    # seed and the row holding the start value
    first_init = f"init/⟨indicator_bit_{k}⟩"
    seed = seed_shape("seed", e, first_init)
    lay.place(seed, (0, 0))
    bits = slot_bits(params.s, k, indicator=k)
    for j, b in enumerate(bits):
        i = k - j // 2
        here = f"init/⟨{'indicator' if j % 2 == 0 else 'value'}_bit_{i}⟩"
        if j + 1 < len(bits):
            i2 = k - (j + 1) // 2
            nxt = f"init/⟨{'indicator' if (j + 1) % 2 == 0 else 'value'}_bit_{i2}⟩"
        else:
            nxt = "init/⟨init_right⟩"
        lay.place(init_slot_shape(f"init.slot{j}.{b}", here, j == 0, b, nxt), (slot_x(j), e))
    lay.place(init_right_shape("init.right", h, "init/⟨init_right⟩", INC_START), (L, e))

    for band in range(2 * m):
        Y = e + 1 + band * h
        copy_row = band % 2 == 1
        order = range(2 * k) if copy_row else range(2 * k - 1, -1, -1)
        lab = cpy(MSI, done=done) if copy_row else INC_START
        new_bits = list(bits)
        for step, j in enumerate(order):
            rd = cat.read(lab)
            b = bits[j]
            origin = (slot_x(j), Y)
            ox, oy = origin
            cells = rd.template.cells

            def at(c):
                return Point(ox + cells[c][0], oy + cells[c][1])

            if b:
                skip = set(rd.short[1:])
                winner = rd.y1
                win, lose = rd.long, rd.short
            else:
                skip = {rd.y1}
                winner = rd.y0
                win, lose = rd.short, rd.long
            lay.place(rd.template, origin, skip=skip)
            comps.append(
                CompetitionSpec(
                    start=at(rd.x),
                    poc=at(winner),
                    winning_path=tuple(at(c) for c in win),
                    losing_path=tuple(at(c) for c in lose),
                    winner_tile=rd.template.tile_name(winner),
                    rigged=bool(b),
                )
            )
            wr = cat.write(rd.outs[b])
            lay.place(wr.template, origin)
            new_bits[j] = wr.bit
            lab = wr.out
            final = step == 2 * k - 1
            if (lab in cat.turns) != final:
                raise BuildError(f"row {band}: transition label {lab} at slot {j}")
        bits = new_bits
        template = cat.turns[lab]
        if not copy_row:
            done = 1 if lab == to_copy(1) else 0
            if done != (band == 2 * m - 2):
                raise BuildError(f"counter overflowed after {band // 2 + 1} increments, expected {m}")
            lay.place(template, (0, Y))
        else:
            if (lab == TO_LAST) != (band == 2 * m - 1):
                raise BuildError(f"copy row {band} ended with {lab}")
            lay.place(template, (L, Y))

    for t in cat.reads.values():
        lay.register(t.template)
    for t in cat.writes.values():
        lay.register(t.template)
    for t in cat.turns.values():
        lay.register(t)

    tiles = lay.tile_types()
    seed_tile = seed.tile_name(0)
    seed_point = Point(*seed.cells[0])
    if prefix:
        tiles = [namespaced(t, prefix) for t in tiles]
        seed_tile = prefix + seed_tile
        cells = {p: namespaced(t, prefix) for p, t in lay.cells.items()}
        comps = [
            CompetitionSpec(c.start, c.poc, c.winning_path, c.losing_path, prefix + c.winner_tile, c.rigged)
            for c in comps
        ]
    else:
        cells = dict(lay.cells)
    check_success_bound(comps, params.delta)
    tas = TAS(TileSet(tiles), seed_point, seed_tile)
    return GeneratedTas(
        tas=tas,
        decl=SndDeclaration.from_competitions(comps),
        expected_domain=expected_counter_domain(K, params.n, e),
        provenance=tuple(f"{inst} [{name}]" for inst, name, _ in lay.instances),
        reference=Assembly(cells),
        params=params,
    )


def check_success_bound(comps, delta) -> None:
    """Raise unless the product of race probabilities is at least ``1 - delta``."""
    if delta is None or not comps:
        return
    bound = theorem1_lower_bound(comps)
    if bound < 1 - Fraction(delta):
        raise BuildError(f"race product {float(bound):.6g} is below 1 - delta = {float(1 - Fraction(delta)):.6g}")


def namespaced(t: TileType, prefix: str) -> TileType:
    gs = [glue(prefix + g.label, g.strength) if g.strength else g for g in t.glues]
    return TileType(prefix + t.name, *gs)


def build_comb(params: BuildParams, prefix: str = "") -> GeneratedTas:
    """Deterministic fallback for short counters: the seed column plus one spine row.

    With ``n`` below the minimum the shape is the seed column alone; otherwise
    a single row of width ``K`` sits on top of it.
    """
    n, e, K = params.n, params.e, params.K
    lay = Layout()
    seed = seed_shape("seed", e, "comb/⟨spine⟩" if n > e else None)
    lay.place(seed, (0, 0))
    if n > e:
        spine = Template("comb.spine")
        r = spine.root((2, 0), "in")
        spine.port(r, "s", "comb/⟨spine⟩")
        spine.line(r, "w", 2)
        spine.line(r, "e", K - 3)
        lay.place(spine, (0, e))
    tiles = lay.tile_types()
    cells = dict(lay.cells)
    seed_tile = seed.tile_name(0)
    if prefix:
        tiles = [namespaced(t, prefix) for t in tiles]
        cells = {p: namespaced(t, prefix) for p, t in cells.items()}
        seed_tile = prefix + seed_tile
    tas = TAS(TileSet(tiles), Point(*seed.cells[0]), seed_tile)
    domain = frozenset(seed_domain(e)) | {Point(x, y) for x in range(K) for y in range(e, n)}
    return GeneratedTas(
        tas=tas,
        decl=SndDeclaration.empty(),
        expected_domain=domain,
        provenance=tuple(f"{inst} [{name}]" for inst, name, _ in lay.instances),
        reference=Assembly(cells),
        params=params,
    )


def counter_for(n: int, h: int) -> GeneratedTas:
    return build_counter(counter_params(n, h))
