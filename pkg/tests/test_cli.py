import json
import subprocess
import sys

import pytest

from partlab.cli import main


def run_cli(*argv, capsys=None):
    code = main(list(argv))
    out = capsys.readouterr().out if capsys else None
    return code, out


class TestCountAndEnumerate:
    def test_bell_twelve(self, capsys):
        code, out = run_cli("count", "--bell", "12", capsys=capsys)
        assert code == 0
        assert out.strip() == "4213597"

    def test_enumerate_three(self, capsys):
        code, out = run_cli("enumerate", "--n", "3", capsys=capsys)
        assert code == 0
        assert out.split() == ["0,0,0", "0,0,1", "0,1,0", "0,1,1", "0,1,2"]

    def test_enumerate_equipartitions(self, capsys):
        code, out = run_cli(
            "enumerate", "--k", "2", "--N", "2", "--m", "2", capsys=capsys
        )
        assert code == 0
        assert out.split() == ["0,1,0,1", "0,1,1,0"]

    def test_missing_parameters_is_usage_error(self, capsys):
        code, _ = run_cli("count", capsys=capsys)
        assert code == 2


class TestVerify:
    def test_comb_counterexample_exit(self, capsys):
        code, out = run_cli(
            "verify-comb", "--k", "2", "--m", "2", "--N", "1",
            "--strategy", "exhaustive", capsys=capsys,
        )
        assert code == 1
        doc = json.loads(out)
        assert doc["report"]["details"]["all_witnessed"] is False
        assert doc["config"]["k"] == 2

    def test_comb_pass_exit(self, capsys):
        code, out = run_cli(
            "verify-comb", "--k", "1", "--m", "0", "--N", "1",
            "--strategy", "exhaustive", capsys=capsys,
        )
        assert code == 0

    def test_tree_sampled(self, capsys):
        code, out = run_cli(
            "verify-tree", "--k", "2", "--N", "8",
            "--strategy", "sampled:40:3", capsys=capsys,
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["report"]["details"]["lemma"] == "tree"

    def test_budget_exit(self, capsys):
        code, _ = run_cli(
            "verify-tree", "--k", "2", "--N", "4",
            "--strategy", "exhaustive:10", capsys=capsys,
        )
        assert code == 3

    def test_reports_deterministic_up_to_timing(self, capsys):
        args = (
            "verify-comb", "--k", "2", "--m", "2", "--N", "2",
            "--strategy", "sampled:30:11",
        )
        _, out1 = run_cli(*args, capsys=capsys)
        _, out2 = run_cli(*args, capsys=capsys)
        d1, d2 = json.loads(out1), json.loads(out2)
        d1["report"].pop("elapsed_ms")
        d2["report"].pop("elapsed_ms")
        assert d1 == d2


class TestSmallCommands:
    def test_entropy_check(self, capsys):
        code, out = run_cli("entropy-check", "--b-max", "32", capsys=capsys)
        assert code == 0
        assert json.loads(out)["violations"] == []

    def test_ratio(self, capsys):
        code, out = run_cli(
            "ratio", "--a1", "1", "--a2", "1", "--b1", "0", "--b2", "0",
            "--N", "2", capsys=capsys,
        )
        assert code == 0
        assert out.strip() == "1/3"

    def test_blowup(self, capsys):
        code, out = run_cli(
            "blowup", "--a", "0,0,1,2", "--d", "0,1,0,1,2,3", capsys=capsys
        )
        assert code == 0
        assert out.strip() == "L=6;0,0,0,0,1,2"

    def test_encode(self, capsys):
        code, out = run_cli("encode", "--p", "0,1,0,1", capsys=capsys)
        assert code == 0
        assert out.split() == ["2", "4", "1010", "0101"]

    def test_reduce_e1(self, capsys):
        code, out = run_cli(
            "reduce-e1", "--L", "9", "--rows", "4", "--cols", "4",
            "--seed", "1", capsys=capsys,
        )
        assert code == 0
        assert out.startswith("L=9;")

    def test_fusion_demo(self, capsys):
        code, out = run_cli(
            "fusion-demo", "--L", "8", "--Mprime", "3", "--seed", "4",
            capsys=capsys,
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["approximation_kept"] and doc["trace_disjunction"]


class TestThresholdAndCheckpoint:
    def test_find_threshold_with_state_file(self, tmp_path, capsys):
        out_path = tmp_path / "thr.json"
        args = (
            "find-threshold", "--k", "2", "--m", "2", "--n-max", "4",
            "--samples", "50", "--seed", "1", "--out", str(out_path),
        )
        assert run_cli(*args, capsys=capsys)[0] == 0
        doc = json.loads(out_path.read_text())
        assert doc["threshold"] == 2
        assert doc["empirical"] is True
        state = json.loads((tmp_path / "thr.json.state").read_text())
        assert set(state) == {"1", "2"}
        # a resumed run reuses the recorded verdicts and agrees
        assert run_cli(*args, capsys=capsys)[0] == 0
        assert json.loads(out_path.read_text())["threshold"] == 2

    def test_chunked_campaign_checkpoints(self, tmp_path, capsys):
        out_path = tmp_path / "camp.json"
        code, _ = run_cli(
            "verify-comb", "--k", "2", "--m", "2", "--N", "2",
            "--strategy", "sampled:25000:3", "--out", str(out_path),
            capsys=capsys,
        )
        assert code == 0
        doc = json.loads(out_path.read_text())
        assert doc["report"]["details"]["tested"] == 25000
        state = json.loads((tmp_path / "camp.json.state").read_text())
        assert set(state) == {"0", "10000", "20000"}


class TestConsoleScript:
    def test_installed_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "partlab.cli", "count", "--bell", "5"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.strip() == "52"
