import datetime as dt
import json
import subprocess
import sys

import numpy as np
import pytest

from clusterentropy.cli import main
from clusterentropy.io import read_series, write_series, write_ticks


def test_generate_entropy_mdi_ttest(tmp_path):
    s = tmp_path / "s.csv"
    assert main(["generate", "--model", "fbm", "--hurst", "0.7", "--length", "20000", "--seed", "3", "--out", str(s)]) == 0
    assert read_series(s).size == 20000
    assert main(["entropy", str(s), "--n", "10,40", "--out", str(tmp_path), "--dump-partition"]) == 0
    assert (tmp_path / "partition_M01_n40.csv").read_text().startswith("tau,count\n")
    assert main(["mdi", str(tmp_path / "curves.csv"), "--out", str(tmp_path)]) == 0
    assert (tmp_path / "mdi.csv").read_text().startswith("M,n,I,I_power,I_linear\n")
    assert main(["ttest", str(tmp_path / "curves.csv"), str(tmp_path / "curves.csv"), "--out", str(tmp_path)]) == 0
    assert (tmp_path / "ttest.csv").read_text().splitlines() == ["M,set,p", "1,curves,1.0"]
    summary = json.loads((tmp_path / "ttest.json").read_text())
    assert summary["curves"]["1"]["p"] == 1.0


def test_generate_preset_deterministic(tmp_path):
    args = ["generate", "--preset", "a1", "--length", "5000", "--out"]
    assert main(args + [str(tmp_path / "a.bin")]) == 0
    assert main(["--seed", "0"] + args + [str(tmp_path / "b.bin")]) == 0
    assert (tmp_path / "a.bin").read_bytes() == (tmp_path / "b.bin").read_bytes()


def test_horizons_from_series(tmp_path):
    s = tmp_path / "s.csv"
    main(["generate", "--model", "gbm", "--sigma", "0.01", "--scale", "0.015625", "--out", str(s)])
    assert main(["horizons", str(s), "--scale", "0.015625", "--out", str(tmp_path / "h")]) == 0
    files = sorted(p.name for p in (tmp_path / "h").iterdir())
    assert files[0] == "horizon_01.csv" and files[-1] == "spec.csv" and len(files) == 13
    assert read_series(tmp_path / "h" / "horizon_12.csv").size == 9170


def test_horizons_from_ticks(tmp_path):
    stamps, prices = [], []
    rng = np.random.default_rng(0)
    for month, count in [(1, 300), (2, 280), (3, 320)]:
        start = int(dt.datetime(2018, month, 1, tzinfo=dt.timezone.utc).timestamp() * 1000)
        stamps += [start + 1000 * i for i in range(count)]
    prices = 100 * np.exp(np.cumsum(0.001 * rng.standard_normal(len(stamps))))
    write_ticks(tmp_path / "t.csv", stamps, prices)
    assert main(["horizons", str(tmp_path / "t.csv"), "--ticks", "--out", str(tmp_path / "h")]) == 0
    spec = (tmp_path / "h" / "spec.csv").read_text().splitlines()
    assert spec[1:] == ["1,300,300,1.0000,1", "2,580,300,1.9333,1", "3,900,300,3.0000,3"]
    h3 = read_series(tmp_path / "h" / "horizon_03.csv")
    assert np.array_equal(h3, prices[::3][:300])


def test_entropy_on_horizons(tmp_path):
    s = tmp_path / "s.bin"
    main(["generate", "--model", "fbm", "--hurst", "0.5", "--scale", "0.015625", "--out", str(s)])
    assert main(["entropy", str(s), "--horizons", "--scale", "0.015625", "--n", "10,20", "--out", str(tmp_path)]) == 0
    rows = (tmp_path / "curves.csv").read_text().splitlines()[1:]
    assert {int(r.split(",")[0]) for r in rows} == set(range(1, 13))


def test_sweep_and_report(tmp_path):
    out = tmp_path / "sw"
    assert main(["sweep", "--presets", "gbm", "--seeds", "2", "--scale", "0.015625", "--out", str(out)]) == 0
    assert main(["report", str(out)]) == 0
    assert (out / "fig1.csv").exists() and (out / "table1.csv").exists()


def test_sweep_partial_failure_exit_code(tmp_path):
    code = main(["sweep", "--presets", "b2", "--seeds", "1", "--scale", "0.015625", "--out", str(tmp_path)])
    assert code == 3
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert man["failures"][0]["label"] == "b2"


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["generate"],
        ["generate", "--model", "fbm", "--hurst", "2.0"],
        ["sweep", "--presets", "nope"],
        ["sweep", "--group", "nope"],
        ["entropy", "x.csv", "--n", "a,b"],
        ["--jobs", "0", "mdi", "x.csv"],
        ["sweep", "--scale", "1e-6"],
    ],
)
def test_usage_errors_exit_1(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1


def test_data_errors_exit_2(tmp_path):
    assert main(["entropy", str(tmp_path / "missing.csv")]) == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("timestamp,price\n2,1\n1,1\n")
    assert main(["horizons", str(bad), "--ticks", "--out", str(tmp_path)]) == 2
    short = tmp_path / "short.csv"
    write_series(short, np.arange(100.0))
    assert main(["entropy", str(short), "--horizons", "--out", str(tmp_path)]) == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "clusterentropy", "--help"], capture_output=True, text=True)
    assert r.returncode == 0
    for cmd in ("generate", "horizons", "entropy", "mdi", "ttest", "sweep", "report"):
        assert cmd in r.stdout
