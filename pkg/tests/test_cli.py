import json
import subprocess
import sys

import pytest

from labskit.cli import run_cli


def payload(argv):
    code, out, err = run_cli(argv)
    assert code == 0, err
    env = json.loads(out)
    assert set(env) == {"command", "input_echo", "payload", "version"}
    assert env["command"] == argv[0]
    return env["payload"], out


def test_analyze():
    p, out = payload(["analyze", "+++-"])
    assert p["lags"] == [1, 0, -1]
    assert p["energy"] == 2 and p["e_min"] == 2 and p["deviation"] == 0
    assert '"merit": 4.0000' in out
    assert p["level_table"]["total_deviation"] == 0
    assert len(p["level_table"]["rows"]) == 3


def test_analyze_tokens_and_csv():
    code, out, _ = run_cli(["analyze", "1 1 1 -1", "--format", "csv"])
    assert code == 0
    assert out.splitlines()[0] == "lag,length,expected_minus,theoretical_max,minus_count,pair_minus,deviation"


def test_analyze_parse_error():
    code, out, err = run_cli(["analyze", "++0-"])
    assert code == 1 and out == "" and "position 3" in err


def test_search_exhaustive():
    p, out = payload(["search", "--n", "13", "--exhaustive"])
    assert p["best_energy"] == 6
    assert '"best_merit": 14.0833' in out


def test_search_heuristic_deterministic():
    argv = ["search", "--n", "20", "--heuristic", "--seed", "5", "--restarts", "30"]
    a, b = run_cli(argv), run_cli(argv)
    assert a == b and a[0] == 0


def test_search_heuristic_needs_seed():
    code, _, err = run_cli(["search", "--n", "20", "--heuristic"])
    assert code == 2 and "--seed" in err


def test_search_above_ceiling():
    code, _, err = run_cli(["search", "--n", "40"])
    assert code == 1 and "heuristic" in err


def test_search_options_agree():
    base, _ = payload(["search", "--n", "12"])
    for extra in (["--no-symmetry"], ["--minus-filter"], ["--no-symmetry", "--max-minus", "6"],
                  ["--workers", "2"]):
        p, _ = payload(["search", "--n", "12", *extra])
        assert (p["best_energy"], p["optimum_count"], p["canonical_best"]) == (
            base["best_energy"], base["optimum_count"], base["canonical_best"])


def test_search_progress(monkeypatch):
    monkeypatch.setenv("LABS_LOG", "progress")
    code, out, err = run_cli(["search", "--n", "10"])
    assert code == 0 and "examined=" in err and "best=13" in err
    json.loads(out)
    monkeypatch.setenv("LABS_LOG", "quiet")
    assert run_cli(["search", "--n", "10"])[2] == ""


def test_barker_roots():
    p, out = payload(["barker", "--roots", "--merit", "12.32"])
    assert '"root_even": 12.3200' in out
    assert "11.2222" in out and "1.0978" in out
    assert p["root_even_is_integer"] is False


def test_barker_check():
    p, _ = payload(["barker", "--check", "+++++--++-+-+"])
    assert p["is_barker"] and p["attains_e_min"]


def test_barker_usage():
    assert run_cli(["barker", "--roots"])[0] == 2
    assert run_cli(["barker"])[0] == 2


def test_verify():
    p, _ = payload(["verify", "--n-max", "12"])
    assert p["all_ok"]
    assert [r["n"] for r in p["lengths"]] == list(range(1, 13))
    assert all(r["on_lattice"] and r["max_is_e_max"] and r["min_at_least_e_min"] for r in p["lengths"])


def test_records(tmp_path):
    p, _ = payload(["records"])
    assert len(p["records"]) == 57
    p, _ = payload(["records", "--fit"])
    assert p["fit"]["fit_range"] == [4, 60]
    f = tmp_path / "more.csv"
    f.write_text("n,best_energy\n61,226\n")
    p, _ = payload(["records", "--file", str(f), "--extrapolate", "70"])
    assert p["fit"]["points"][-1]["n"] == 61 and p["fit"]["points"][-1]["extrapolated"]
    assert p["extrapolation"][-1]["n"] == 70


def test_records_csv():
    code, out, _ = run_cli(["records", "--extrapolate", "304", "--format", "csv"])
    lines = out.splitlines()
    assert code == 0 and lines[0] == "n,d_fit,d_observed,extrapolated"
    assert lines[-1].startswith("304,")
    code, out, _ = run_cli(["records", "--format", "csv"])
    assert out.splitlines()[1] == "4,2,2,0"


def test_records_bad_file(tmp_path):
    f = tmp_path / "bad.csv"
    f.write_text("n,best_energy\n10,12\n")
    code, _, err = run_cli(["records", "--file", str(f)])
    assert code == 1 and "row 2" in err


def test_space():
    p, out = payload(["space", "--n", "40", "--max-minus", "20"])
    assert p["full_size"] == 1_099_511_627_776
    assert p["filtered_size"] == 618_679_078_297
    assert '"reduction_ratio": 0.4373' in out


def test_unknown_subcommand():
    code, _, err = run_cli(["frobnicate"])
    assert code == 2 and "usage" in err


@pytest.mark.parametrize("argv", [
    ["analyze", "+++-"], ["space", "--n", "9"], ["barker", "--roots", "--merit", "3"],
    ["verify", "--n-max", "4"], ["records", "--fit"],
])
def test_csv_outputs_parse(argv):
    import csv
    import io
    code, out, _ = run_cli(argv + ["--format", "csv"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) >= 2 and all(len(r) == len(rows[0]) for r in rows)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "labskit.cli", "space", "--n", "4"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payload"]["filtered_size"] == 10
