import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tileasm.builder import build_fixture
from tileasm.cli.formats import (
    DeclFile,
    ParseError,
    dump_decl,
    dump_shape,
    dump_tas,
    parse_decl,
    parse_shape,
    parse_tas,
)
from tileasm.core import TAS, Glue, Point, TileSet, TileType

labels = st.text(min_size=1, max_size=12)
glues = st.one_of(st.just(Glue()), st.builds(Glue, labels, st.integers(1, 3)))
names = st.text(min_size=1, max_size=12)


@st.composite
def systems(draw):
    tile_names = draw(st.lists(names, min_size=1, max_size=6, unique=True))
    tiles = [TileType(n, *draw(st.tuples(glues, glues, glues, glues))) for n in tile_names]
    seed = draw(st.sampled_from(tile_names))
    at = Point(draw(st.integers(-50, 50)), draw(st.integers(-50, 50)))
    return TAS(TileSet(tiles), at, seed)


@settings(max_examples=150)
@given(systems())
def test_tas_round_trip(tas):
    text = dump_tas(tas, ["generated"])
    back = parse_tas(text)
    assert back == tas
    assert dump_tas(back, ["generated"]) == text


def test_labels_with_spaces_and_brackets_survive():
    t = TileType("inc.read:y0", north=Glue("inc/⟨carry=1, x⟩", 1), east=Glue("100% a:b", 2))
    tas = TAS(TileSet([t]), Point(0, 0), t.name)
    text = dump_tas(tas)
    tile_line = text.splitlines()[1]
    assert "⟨" not in tile_line and len(tile_line.split()) == 6
    assert parse_tas(text) == tas


@given(st.sets(st.tuples(st.integers(-1000, 1000), st.integers(-1000, 1000)), min_size=1, max_size=40))
def test_shape_round_trip(points):
    pts = frozenset(Point(*p) for p in points)
    assert parse_shape(dump_shape(pts)) == pts


@pytest.mark.parametrize("name", ["fig1", "snd_demo", "conclusion_gadget", "race(4,6)"])
def test_decl_round_trip(name):
    g = build_fixture(name)
    text = dump_decl(g.decl)
    df = parse_decl(text)
    assert df.has_paths
    assert df.declaration() == g.decl
    assert dump_decl(df) == text
    assert DeclFile.of(g.decl) == df


def test_decl_without_paths_gives_bound_only():
    df = parse_decl("poc 0 0 winner=4 start=1 0 lwin=2 llose=4\npoc -2 -1 winner=7 start=-1 0 lwin=3 llose=3\n")
    assert not df.has_paths
    assert str(df.lower_bound()) == "7/16"
    with pytest.raises(ValueError):
        df.declaration()
    rigged = parse_decl("poc 0 0 winner=4 start=1 0 lwin=2 llose=4 rigged\n")
    assert rigged.lower_bound() == 1


BAD_TAS = [
    ("", 1, "empty"),
    ("tile a n=-:0 e=-:0 s=-:0 w=-:0\n", 1, "header"),
    ("tasfile v1\ntile a n=-:0 e=-:0 s=-:0\nseed a 0 0\n", 2, "four glues"),
    ("tasfile v1\ntile a n=x:0 e=-:0 s=-:0 w=-:0\nseed a 0 0\n", 2, "zero-strength"),
    ("tasfile v1\ntile a e=-:0 n=-:0 s=-:0 w=-:0\nseed a 0 0\n", 2, "expected n="),
    ("tasfile v1\ntile a n=-:0 e=-:0 s=-:0 w=-:0\n", 2, "missing seed"),
    ("tasfile v1\ntile a n=-:0 e=-:0 s=-:0 w=-:0\nseed b 0 0\n", 3, "not defined"),
    ("tasfile v1\ntile a n=-:0 e=-:0 s=-:0 w=-:0\nseed a 0 x\n", 3, "integer"),
    ("tasfile v1\ntile a n=-:0 e=-:0 s=-:0 w=-:0\nseed a 0 0\nseed a 1 1\n", 4, "more than one"),
    ("tasfile v1\ntile a n=-:0 e=-:0 s=-:0 w=-:0\ntile a n=-:0 e=-:0 s=-:0 w=-:0\nseed a 0 0\n", 4, "duplicate"),
    ("tasfile v1\nglue x\n", 2, "unknown record"),
]


@pytest.mark.parametrize("text,line,words", BAD_TAS)
def test_tas_parse_errors_carry_line_numbers(text, line, words):
    with pytest.raises(ParseError) as err:
        parse_tas(text, "f.tas")
    assert err.value.line == line
    assert str(err.value).startswith(f"f.tas:{line}:")
    assert words in str(err.value)


@pytest.mark.parametrize(
    "text,line",
    [
        ("0 0\n1\n", 2),
        ("# nothing\n", 1),
        ("0 0\na b\n", 2),
    ],
)
def test_shape_parse_errors(text, line):
    with pytest.raises(ParseError) as err:
        parse_shape(text)
    assert err.value.line == line


@pytest.mark.parametrize(
    "text",
    [
        "poc 0 0 winner=4 start=1 0 lwin=2\n",
        "poc 0 0 who=4 start=1 0 lwin=2 llose=4\n",
        "poc 0 0 winner=4 start=1 0 lwin=1 llose=4\n",
        "poc 0 0 winner=4 start=1 0 lwin=2 llose=4 colour=red\n",
        "poc 0 0 winner=4 start=1 0 lwin=2 llose=4 lwin=2\n",
        "poc 0 0 winner=4 start=1 0 lwin=2 llose=4 wpath=1,0;0,0;5,5\n",
        "poc 0 0 winner=4 start=1 0 lwin=2 llose=2 wpath=1,0;0,0 lpath=1,0;2,0\n",
        "poc 0 0 winner=4 start=1 0 lwin=2 llose=4 wpath=1,0;0\n",
        "race 0 0\n",
    ],
)
def test_decl_parse_errors(text):
    with pytest.raises(ParseError) as err:
        parse_decl("# header\n" + text, "d.decl")
    assert err.value.line == 2
