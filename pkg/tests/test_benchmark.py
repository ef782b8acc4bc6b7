import subprocess
import sys
from pathlib import Path

BENCH = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernel.py"


def test_benchmark_runs():
    res = subprocess.run(
        [sys.executable, str(BENCH), "--trials", "2", "--N", "30", "--square", "0"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert res.returncode == 0, res.stderr
    assert "python" in res.stdout and "tiles/s" in res.stdout
