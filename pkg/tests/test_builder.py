import random
from fractions import Fraction

import pytest

from tileasm.builder import (
    BuildError,
    build_comb,
    build_comb_square,
    build_counter,
    build_fixture,
    build_square,
    counter_params,
    derive_parameters,
    height_for,
    race_paths,
    rotate_tileset,
)
from tileasm.builder.params import ceil_log2
from tileasm.builder.square import rotate_point, rotate_tile
from tileasm.builder.templates import Layout, Template
from tileasm.competition import theorem1_lower_bound
from tileasm.core import Point, TileSet, TileType, frontier, glue
from tileasm.dynamics import run_sequence
from tileasm.verifier import check_w_correct


def test_ceil_log2():
    assert [ceil_log2(x) for x in (1, 2, 3, 4, 5, 1024, 1025)] == [0, 1, 2, 2, 3, 10, 11]
    assert ceil_log2(Fraction(1, 2)) == -1
    assert ceil_log2(Fraction(1, 3)) == -1
    with pytest.raises(ValueError):
        ceil_log2(0)


def test_height_is_exact_for_decimal_delta():
    # 100^2 / 0.1 = 10^5 needs 17 bits
    assert height_for(100, "0.1") == 17 + 5
    assert height_for(100, Fraction(1, 10)) == height_for(100, "1/10")
    assert height_for(40, "1/2") == 17
    for bad in (0, 1, "3/2"):
        with pytest.raises(ValueError):
            height_for(10, bad)


def test_counter_parameters():
    p = derive_parameters(40, "1/2")
    assert (p.n, p.h, p.m, p.e, p.k, p.s, p.K) == (40, 17, 1, 5, 1, 1, 16)
    assert p.competitions == 4
    q = counter_params(100, 6)
    assert (q.m, q.e, q.k, q.s, q.K) == (8, 3, 4, 8, 52)
    assert counter_params(12, 6).small and counter_params(14, 7).small
    assert not counter_params(20, 6).small
    with pytest.raises(ValueError):
        derive_parameters(10, "1/2", n=11)
    with pytest.raises(ValueError):
        counter_params(20, 5)


@pytest.mark.parametrize("n,h", [(13, 6), (40, 6), (60, 7), (100, 6), (40, 17)])
def test_counter_reference_is_terminal_and_fills_shape(n, h):
    g = build_counter(counter_params(n, h))
    p = g.params
    assert g.r == 4 * p.k * p.m
    assert g.reference.domain == g.expected_domain
    assert frontier(g.tas, g.reference) == []
    assert g.reference.is_connected()
    assert check_w_correct(g.reference, g.decl)
    rows = {Point(x, y) for x in range(p.K) for y in range(p.e, n)}
    assert rows <= g.expected_domain
    below = {q for q in g.expected_domain if q.y < max(p.e, 0)}
    # the seed column; with no offset rows, a two-tile stub under row 0
    assert len(below) == (p.e + 2 if p.e else 2)
    assert sum(c.rigged for c in g.decl.competitions) > 0


def test_tile_count_grows_with_bits_not_height():
    counts = {k: build_counter(counter_params(1 + 2 * 6 * m, 6)).tile_count for k, m in ((1, 1), (2, 3), (3, 7))}
    steps = [counts[2] - counts[1], counts[3] - counts[2]]
    assert steps[0] == steps[1] > 0


def test_counter_samples_stay_inside_target():
    g = build_counter(counter_params(100, 6))
    bound = theorem1_lower_bound(g.decl.competitions)
    ok = w_ok = 0
    trials = 400
    for i in range(trials):
        res = run_sequence(g.tas, random.Random(f"inside:{i}"), 10**6)
        assert res.terminal
        d = res.final.domain
        assert d <= g.expected_domain
        ok += d == g.expected_domain
        if check_w_correct(res.final, g.decl):
            w_ok += 1
            assert res.final == g.reference
    # w-correct probability is at least the bound (about 0.76); allow sampling noise
    assert w_ok / trials > float(bound) - 0.08
    assert ok >= w_ok


@pytest.mark.xfail(strict=True, reason="some misreads of indicator and copy bits still complete their band")
def test_every_misread_terminates_early():
    g = build_counter(counter_params(100, 6))
    for i in range(400):
        res = run_sequence(g.tas, random.Random(f"inside:{i}"), 10**6)
        if not check_w_correct(res.final, g.decl):
            assert res.final.domain < g.expected_domain


def test_namespaced_counter_keeps_structure():
    base = build_counter(counter_params(40, 6))
    pref = build_counter(counter_params(40, 6), prefix="t9.")
    assert pref.tile_count == base.tile_count
    assert all(t.name.startswith("t9.") for t in pref.tas.tiles)
    assert all(g.label.startswith("t9.") for t in pref.tas.tiles for g in t.glues if not g.is_null)
    assert pref.expected_domain == base.expected_domain
    assert frontier(pref.tas, pref.reference) == []


@pytest.mark.parametrize("n,h", [(5, 6), (12, 6), (13, 7), (14, 7)])
def test_small_heights_use_a_comb(n, h):
    p = counter_params(n, h)
    g = build_counter(p)
    assert g.r == 0
    assert g.reference.domain == g.expected_domain
    assert frontier(g.tas, g.reference) == []
    res = run_sequence(g.tas, 1, 10**5)
    assert res.final.domain == g.expected_domain
    assert build_comb(p).tile_count == g.tile_count


def test_rotation():
    assert rotate_point((1, 0), 1) == Point(0, -1)
    assert rotate_point((1, 2), 4) == Point(1, 2)
    t = TileType("a", north=glue("x"))
    r = rotate_tile(t, 1)
    assert r.east == glue("x") and r.name == "a@r1"
    assert rotate_tile(r, 3) == t
    ts = rotate_tileset(TileSet([t]), 2)
    assert ts["a@r2"].south == glue("x")


@pytest.mark.parametrize("N", [1, 5, 20, 40])
def test_small_squares_fall_back_to_comb(N):
    g = build_square(N, "1/2")
    assert g.expected_domain == {Point(x, y) for x in range(N) for y in range(N)}
    assert g.r == 0
    assert g.tile_count == 2 * N - 1
    assert run_sequence(g.tas, 0, 10**6).final.domain == g.expected_domain
    assert build_comb_square(N).tile_count == g.tile_count


def test_square_reference():
    g = build_square(100, "1/2")
    assert g.r > 0
    assert g.reference.domain == g.expected_domain
    assert frontier(g.tas, g.reference) == []
    assert check_w_correct(g.reference, g.decl)
    for i in range(20):
        d = run_sequence(g.tas, i, 10**7).final.domain
        assert d <= g.expected_domain


def test_square_tile_growth_per_doubling_is_bounded():
    counts = [build_square(n, "1/2").tile_count for n in (128, 256, 512)]
    steps = [b - a for a, b in zip(counts, counts[1:])]
    # the comb would add N tiles per doubling; the counters add a few gadgets
    assert all(0 < s < 1000 for s in steps)


def test_templates_detect_overlap():
    t = Template("blk")
    r = t.root((0, 0), "a")
    t.line(r, "e", 2)
    lay = Layout()
    lay.place(t, (0, 0))
    with pytest.raises(BuildError):
        lay.place(t, (1, 0))


@pytest.mark.parametrize("lw,ll", [(2, 2), (2, 4), (3, 5), (6, 2), (5, 5)])
def test_race_paths(lw, ll):
    win, lose = race_paths(lw, ll)
    assert len(win) == lw and len(lose) == ll
    assert win[0] == lose[0] and win[-1] == lose[-1]


def test_race_paths_reject_mixed_parity():
    with pytest.raises(ValueError):
        race_paths(2, 3)
    with pytest.raises(ValueError):
        race_paths(1, 3)


def test_unknown_fixture():
    with pytest.raises(ValueError):
        build_fixture("fig9")
