import random

import pytest

from tileasm.builder import build_fixture
from tileasm.competition import CompetitionSpec
from tileasm.core import Point
from tileasm.dynamics import run_sequence
from tileasm.verifier import (
    CheckStatus,
    SndDeclaration,
    all_paths_through,
    check_poc_order,
    check_structure,
    check_w_correct,
    is_competing_tile,
    is_rigged_by,
    poc_order_violation,
    verify,
)


def test_declaration_validation():
    g = build_fixture("snd_demo")
    d = g.decl
    assert d.r == 2
    assert d.competition_at(d.pocs[1]) is d.competitions[1]
    assert d.competition_at((99, 99)) is None
    with pytest.raises(ValueError):
        SndDeclaration(d.pocs, d.starts[:1], d.winner, d.competitions)
    with pytest.raises(ValueError):
        SndDeclaration(d.pocs, d.starts, {d.pocs[0]: "4"}, d.competitions)
    with pytest.raises(ValueError):
        SndDeclaration(d.pocs, d.starts, {d.pocs[0]: "3", d.pocs[1]: "7"}, d.competitions)


def swapped(decl: SndDeclaration) -> SndDeclaration:
    return SndDeclaration.from_competitions(decl.competitions[::-1])


def test_swapped_order_fails_with_trace():
    g = build_fixture("snd_demo")
    res = check_poc_order(g.tas, swapped(g.decl), 200, 0, 100)
    assert res.status is CheckStatus.FAIL
    assert poc_order_violation(res.witness, swapped(g.decl)) is not None
    assert poc_order_violation(res.witness, g.decl) is None


def test_poc_order_inconclusive_without_coverage():
    g = build_fixture("snd_demo")
    far = CompetitionSpec((10, 10), (11, 10), ((10, 10), (11, 10)), ((10, 10), (11, 10)), "4")
    decl = SndDeclaration.from_competitions([far])
    assert check_poc_order(g.tas, decl, 20, 0, 100).status is CheckStatus.INCONCLUSIVE
    with pytest.raises(ValueError):
        check_poc_order(g.tas, decl, 0, 0, 100)


def test_w_correct():
    g = build_fixture("fig1")
    assert check_w_correct(g.reference, g.decl)
    for seed in range(50):
        lost = run_sequence(g.tas, seed, 100).final
        if lost[(0, 0)].name == "3":
            break
    assert not check_w_correct(lost, g.decl)


def test_structure_catches_inconsistencies():
    g = build_fixture("snd_demo")
    assert check_structure(g.tas, g.decl, g.expected_domain, g.reference).status is CheckStatus.PASS
    # a race point outside the shape
    shrunk = g.expected_domain - {Point(0, 1)}
    assert check_structure(g.tas, g.decl, shrunk).status is CheckStatus.FAIL
    # the reference no longer covers the shape
    off_path = g.expected_domain - {Point(-3, -1)}
    assert check_structure(g.tas, g.decl, off_path).status is CheckStatus.PASS
    assert check_structure(g.tas, g.decl, off_path, g.reference).status is CheckStatus.FAIL
    # a non-terminal reference is rejected
    partial = g.tas.seed_assembly()
    assert check_structure(g.tas, g.decl, None, partial).status is CheckStatus.FAIL
    other = build_fixture("fig2")
    assert check_structure(g.tas, other.decl, g.expected_domain).status is CheckStatus.PASS
    bad = SndDeclaration.from_competitions(
        [CompetitionSpec((1, 0), (0, 0), ((1, 0), (0, 0)), ((1, 0), (1, 1), (0, 1), (0, 0)), "nope")]
    )
    assert check_structure(g.tas, bad).status is CheckStatus.FAIL


def test_rigged_needs_start_in_prefix():
    g = build_fixture("snd_demo")
    first, second = g.decl.competitions
    with pytest.raises(ValueError):
        is_rigged_by(g.tas, second, [((1, 0), "s")])
    assert not is_rigged_by(g.tas, first, [((1, 0), "s")])


def test_competing_tiles_in_fig1():
    g = build_fixture("fig1")
    a = g.tas.seed_assembly()
    tiles = g.tas.tiles
    assert is_competing_tile(g.tas, g.decl, a, (1, 1), tiles["1"])
    assert is_competing_tile(g.tas, g.decl, a, (0, 0), tiles["4"])
    assert not is_competing_tile(g.tas, g.decl, a, (5, 5), tiles["4"])


def test_side_branches_do_not_compete():
    g = build_fixture("fig2")
    a = g.tas.seed_assembly()
    assert not is_competing_tile(g.tas, g.decl, a, (2, 0), g.tas.tiles["A"])


def test_all_paths_through():
    g = build_fixture("snd_demo")
    ref = g.reference
    assert all_paths_through(ref, Point(1, 0), Point(-2, -1), Point(-1, 0))
    assert not all_paths_through(ref, Point(1, 0), Point(-2, -1), Point(-2, 0))


def test_full_report():
    g = build_fixture("snd_demo")
    report = verify(g.tas, g.decl, expected_domain=g.expected_domain, trials=50, seed=random.Random(1).randrange(100))
    assert report.ok and not report.failed
    assert report["poc_order"].status is CheckStatus.PASS
    text = report.render()
    assert "directional_determinism: Pass" in text
    bad = verify(g.tas, swapped(g.decl), trials=100)
    assert not bad.ok
