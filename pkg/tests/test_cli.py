import io
import json
import sys

import pytest

from padicq.cli import main


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    old_out, old_err = sys.stdout, sys.stderr
    sys.stdout, sys.stderr = out, err
    try:
        code = main(argv)
    finally:
        sys.stdout, sys.stderr = old_out, old_err
    return code, out.getvalue(), err.getvalue()


class TestEval:
    def test_classical_euler(self):
        code, out, _ = run_cli(["eval", "--quantity", "classical-euler", "--n", "3"])
        assert code == 0 and out.strip().endswith("1/4")

    def test_classical_bernoulli(self):
        code, out, _ = run_cli(["eval", "--quantity", "classical-bernoulli", "--n", "2"])
        assert code == 0 and out.strip().endswith("1/6")

    def test_q_euler_order_zero(self):
        code, out, _ = run_cli([
            "eval", "--quantity", "q-euler", "--p", "3", "--precision", "20",
            "--q", "1,2", "--n", "0",
        ])
        assert code == 0
        assert "3^0 * [1," in out and "O(3^20)" in out

    def test_bracket_of_two(self):
        # [2]_q = 1 + q = 11 = 2 + 0*3 + 1*9
        code, out, _ = run_cli([
            "eval", "--quantity", "bracket", "--p", "3", "--q", "1,2", "--x", "2/1",
        ])
        assert code == 0 and "3^0 * [2,0,1," in out

    def test_gamma_eval_json(self):
        code, out, _ = run_cli([
            "eval", "--quantity", "gamma", "--p", "3", "--q", "1,2",
            "--x", "1/3", "--format", "json",
        ])
        assert code == 0
        data = json.loads(out)
        assert data[0]["params"]["converged"] is True

    def test_missing_n_is_config_error(self):
        code, _, err = run_cli(["eval", "--quantity", "q-euler", "--p", "3"])
        assert code == 2 and "config error" in err


class TestVerify:
    def test_eq6_exact(self):
        code, out, _ = run_cli(["verify", "--suite", "eq6", "--K", "200", "--p", "3"])
        assert code == 0 and "PASS" in out

    def test_eq9_random_pairs(self):
        code, out, _ = run_cli(["verify", "--suite", "eq9", "--p", "3", "--q", "1,2"])
        assert code == 0
        assert "pairs=100" in out

    def test_eq8_grid(self):
        code, out, _ = run_cli(["verify", "--suite", "eq8", "--p", "3,5", "--q", "1,2"])
        assert code == 0 and "failed=0" in out

    def test_thmA_single_point(self):
        code, out, _ = run_cli([
            "verify", "--suite", "thmA", "--p", "3", "--q", "1,2", "--x", "1/3",
        ])
        assert code == 0 and "failed=0" in out

    def test_fail_exit_code(self):
        # precision 8 cannot support a 12-digit match: honest FAIL, exit 1
        code, out, _ = run_cli([
            "verify", "--suite", "eq3", "--p", "3", "--q", "1,2",
            "--precision", "8", "--target", "12",
        ])
        assert code == 1 and "FAIL" in out

    def test_strict_not_stabilized_exit(self):
        # enumerate with a tiny budget cannot reach 12 stable digits
        code, out, _ = run_cli([
            "verify", "--suite", "eq3", "--p", "3", "--q", "1,2",
            "--sum-strategy", "enumerate", "--max-sum-exponent", "3",
            "--strict",
        ])
        assert code == 3
        assert "NOT STABILIZED" in out

    def test_bad_prime_exit(self):
        code, _, err = run_cli(["verify", "--suite", "eq6", "--p", "9"])
        assert code == 2 and "config error" in err

    def test_bad_qspec_exit(self):
        code, _, err = run_cli(["verify", "--suite", "eq8", "--p", "3", "--q", "3,1"])
        assert code == 2


class TestReport:
    def test_stability_csv(self):
        code, out, _ = run_cli([
            "report", "--kind", "stability", "--quantity", "gamma",
            "--p", "3", "--q", "1,2", "--x", "1/3", "--depths", "2:6",
        ])
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("N,") or "diff_valuation" in lines[0]
        assert len(lines) == 6  # header + 5 depths

    def test_discrepancy_json(self):
        code, out, _ = run_cli([
            "report", "--kind", "discrepancy", "--p", "3", "--q", "1,2", "--x", "1/3",
        ])
        assert code == 0
        data = json.loads(out)
        kinds = {d["identity"] for d in data}
        assert kinds == {"eq3-variants", "eq11-variants"}
        eq11 = [d for d in data if d["identity"] == "eq11-variants"][0]
        assert eq11["gap_matches_qx_E1_term_valuation"] >= 12

    def test_t_conjecture_json_has_no_verdict(self):
        code, out, _ = run_cli([
            "report", "--kind", "t-conjecture", "--p", "3", "--q", "1,2",
            "--x", "1/3", "--target", "10",
        ])
        assert code == 0
        data = json.loads(out)
        assert data and all("verdict" not in d for d in data)
        assert all(d["diff_valuation"] is not None for d in data)


class TestOutputHandling:
    def test_out_file(self, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run_cli([
            "verify", "--suite", "eq6", "--p", "3", "--format", "json",
            "--out", str(target),
        ])
        assert code == 0 and out == ""
        data = json.loads(target.read_text())
        assert data[0]["identity"] == "eq6"

    def test_unwritable_path_exit_4(self):
        code, _, err = run_cli([
            "verify", "--suite", "eq6", "--p", "3",
            "--out", "/nonexistent-dir/report.json",
        ])
        assert code == 4 and "cannot write" in err


class TestConfigFile:
    def test_config_applies_and_flags_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "p = 3\n"
            "precision = 20\n"
            "q = 1,2 2,2\n"
            "target = 10   # comment\n"
        )
        code, out, _ = run_cli(["verify", "--suite", "eq9", "--config", str(cfg)])
        assert code == 0
        assert "q=1,2" in out and "q=2,2" in out and "target=10" in out
        # explicit flag overrides the config value
        code, out, _ = run_cli([
            "verify", "--suite", "eq9", "--config", str(cfg), "--q", "1,3",
        ])
        assert code == 0
        assert "q=1,3" in out and "q=2,2" not in out

    def test_malformed_config(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("just words\n")
        code, _, err = run_cli(["verify", "--suite", "eq6", "--config", str(cfg)])
        assert code == 2


class TestDeterminism:
    def test_verify_byte_identical(self):
        args = ["verify", "--suite", "eq9", "--p", "3,5", "--format", "json"]
        _, out1, _ = run_cli(args)
        _, out2, _ = run_cli(args)
        assert out1 == out2

    def test_worker_count_does_not_change_bytes(self):
        base = ["verify", "--suite", "thmA", "--p", "3", "--q", "1,2",
                "--x", "1/3", "--format", "json"]
        _, out1, _ = run_cli(base + ["--workers", "1"])
        _, out2, _ = run_cli(base + ["--workers", "3"])
        assert out1 == out2
