import subprocess
import sys
from pathlib import Path

import pytest

from tileasm.cli import main
from tileasm.cli.main import domain_hash, rational


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def build(capsys, tmp_path: Path, kind: str, *extra):
    files = {k: str(tmp_path / f"{kind}.{k}") for k in ("tas", "decl", "shape")}
    code, out, err = run(
        capsys, kind, *extra, "--out", files["tas"], "--decl", files["decl"], "--shape", files["shape"]
    )
    assert code == 0, err
    return files, out


def test_rational_parsing():
    assert str(rational("1/3")) == "1/3"
    assert str(rational("0.1")) == "1/10"
    with pytest.raises(Exception):
        rational("abc")


def test_analyze(capsys, tmp_path):
    assert run(capsys, "analyze", "--lwin", "2", "--llose", "4")[1] == "7/8 (0.875)\n"
    assert run(capsys, "analyze", "--lwin", "3", "--llose", "3")[1] == "1/2 (0.5)\n"
    assert run(capsys, "analyze", "--h", "6")[1].startswith("32647/32768 ")
    files, _ = build(capsys, tmp_path, "build-fixture", "--name", "snd_demo")
    code, out, _ = run(capsys, "analyze", "--decl", files["decl"])
    assert code == 0
    assert out.splitlines()[-1] == "7/16 (0.4375)"


@pytest.mark.parametrize(
    "args",
    [
        ["analyze"],
        ["analyze", "--lwin", "2"],
        ["analyze", "--lwin", "2", "--llose", "4", "--h", "6"],
        ["analyze", "--h", "3"],
        ["analyze", "--lwin", "1", "--llose", "4"],
        ["frobnicate"],
        ["build-counter", "--N", "10", "--delta", "2", "--out", "a", "--decl", "b", "--shape", "c"],
        ["build-counter", "--N", "10", "--delta", "x", "--out", "a", "--decl", "b", "--shape", "c"],
        ["build-fixture", "--name", "nope", "--out", "a", "--decl", "b", "--shape", "c"],
    ],
)
def test_usage_errors_exit_1(capsys, args):
    code, out, err = run(capsys, *args)
    assert code == 1
    assert err.startswith("error:") and out == ""


def test_exact_on_fig1(capsys, tmp_path):
    files, out = build(capsys, tmp_path, "build-fixture", "--name", "fig1")
    assert out == "tiles=5 r=1\n"
    code, out, _ = run(capsys, "exact", "--tas", files["tas"])
    lines = out.splitlines()
    assert [ln.split()[2] for ln in lines] == ["7/8", "1/8"]
    assert all(ln.split()[1] == "4" for ln in lines)
    code, out, _ = run(capsys, "exact", "--tas", files["tas"], "--node-cap", "3")
    assert "partial" in out


def test_data_errors_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.tas"
    bad.write_text("tasfile v1\ntile a n=x:1\n")
    code, out, err = run(capsys, "exact", "--tas", str(bad))
    assert code == 2 and f"{bad}:2:" in err
    code, _, err = run(capsys, "exact", "--tas", str(tmp_path / "missing.tas"))
    assert code == 2
    decl = tmp_path / "x.decl"
    decl.write_text("poc 0 0 winner=4 start=1 0 lwin=2 llose=4\n")
    files, _ = build(capsys, tmp_path, "build-fixture", "--name", "fig1")
    code, _, err = run(capsys, "verify", "--tas", files["tas"], "--decl", str(decl))
    assert code == 2 and "paths" in err


def test_verify_exit_codes(capsys, tmp_path):
    good, _ = build(capsys, tmp_path, "build-fixture", "--name", "fig2")
    code, out, _ = run(capsys, "verify", "--tas", good["tas"], "--decl", good["decl"], "--shape", good["shape"])
    assert code == 0 and "directional_determinism: Pass" in out
    bad, _ = build(capsys, tmp_path, "build-fixture", "--name", "dd_but_disagree")
    code, out, _ = run(capsys, "verify", "--tas", bad["tas"], "--decl", bad["decl"])
    assert code == 3 and "directional_determinism: Fail" in out


def test_simulate_output_format(capsys, tmp_path):
    files, _ = build(capsys, tmp_path, "build-fixture", "--name", "fig1")
    code, out, _ = run(
        capsys, "simulate", "--tas", files["tas"], "--shape", files["shape"], "--trials", "50", "--seed", "3"
    )
    fields = out.split()
    assert code == 0 and len(fields) == 6
    assert fields[0] == "1.000000" and fields[3:] == ["50", "50", "0"]
    code, _, _ = run(
        capsys, "simulate", "--tas", files["tas"], "--shape", files["shape"], "--trials", "0", "--seed", "3"
    )
    assert code == 1
    code, _, _ = run(
        capsys,
        "simulate", "--tas", files["tas"], "--shape", files["shape"], "--trials", "5", "--seed", "3",
        "--confidence", "100",
    )
    assert code == 1


def test_builds_print_counts(capsys, tmp_path):
    _, out = build(capsys, tmp_path, "build-counter", "--N", "40", "--delta", "1/2")
    assert out == "tiles=2282 r=4\n"
    _, out = build(capsys, tmp_path, "build-counter", "--N", "40", "--delta", "0.5", "--n", "20")
    # 20 rows are fewer than two gadget bands at this height
    assert out == "tiles=25 r=0\n"
    _, out = build(capsys, tmp_path, "build-square", "--N", "30", "--delta", "1/2")
    assert out == "tiles=59 r=0\n"


def test_render_ascii_and_svg(capsys, tmp_path):
    files, _ = build(capsys, tmp_path, "build-fixture", "--name", "snd_demo")
    txt = tmp_path / "a.txt"
    assert run(capsys, "render", "--tas", files["tas"], "--sample-seed", "1", "--out", str(txt))[0] == 0
    assert txt.read_text().count("\n") > 3
    svg = tmp_path / "a.svg"
    code, _, _ = run(
        capsys,
        "render", "--tas", files["tas"], "--exact-correct", "--decl", files["decl"], "--format", "svg",
        "--out", str(svg),
    )
    text = svg.read_text()
    assert code == 0 and text.startswith("<?xml") and 'version="1.1"' in text
    assert text.count("<rect") == 9 and text.count("<circle") == 2
    assert run(capsys, "render", "--tas", files["tas"], "--out", str(txt))[0] == 1
    assert run(capsys, "render", "--tas", files["tas"], "--exact-correct", "--out", str(txt))[0] == 1
    assert (
        run(capsys, "render", "--tas", files["tas"], "--sample-seed", "1", "--exact-correct", "--out", str(txt))[0]
        == 1
    )


def test_domain_hash_ignores_order():
    assert domain_hash([(0, 0), (1, 0)]) == domain_hash([(1, 0), (0, 0)])


def test_console_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "tileasm.cli", "analyze", "--lwin", "2", "--llose", "4"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0 and res.stdout == "7/8 (0.875)\n"
