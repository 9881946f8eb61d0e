import json

import numpy as np
import pytest

from andreev.cli import main


def run_cli(*argv):
    return main(list(argv))


class TestEvalCommands:
    def test_eval_jack(self, capsys):
        assert run_cli("eval-jack", "--partition", "2,1", "--alpha", "1/2",
                       "--x", "0.3,0.2,0.1") == 0
        out = json.loads(capsys.readouterr().out)
        from andreev.symfunc import jack_eval
        from fractions import Fraction

        assert out["value"] == pytest.approx(
            jack_eval((2, 1), Fraction(1, 2), [0.3, 0.2, 0.1]))

    def test_eval_hfma_at_zero(self, capsys):
        assert run_cli("eval-hfma", "--a", "1.5", "--b", "0.5", "--c", "2.0",
                       "--alpha", "2", "--x", "0,0") == 0
        out = json.loads(capsys.readouterr().out)
        assert out["value"] == 1.0
        assert out["tail_estimate"] == 0.0
        assert out["converged"]

    def test_eval_hfma_two_argument(self, capsys):
        assert run_cli("eval-hfma", "--a", "2", "--b", "1.5", "--c", "3",
                       "--alpha", "2", "--x", "0.2,0.1", "--y", "0.3,0.05") == 0
        out = json.loads(capsys.readouterr().out)
        assert out["converged"] and out["value"] > 1.0

    def test_eval_jpdf(self, capsys):
        assert run_cli("eval-jpdf", "--kind", "PQE", "--n", "2", "--m", "2",
                       "--gamma", "0.4", "--r", "0.3,0.7") == 0
        out = json.loads(capsys.readouterr().out)
        from andreev.ensembles import EnsembleSpec, jpdf_semi_ideal

        expected = jpdf_semi_ideal(EnsembleSpec("PQE", 2, 2, (0.4,)), [0.3, 0.7])
        assert out["value"] == pytest.approx(expected, rel=1e-6)

    def test_eval_jpdf_from_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"spec": {"kind": "CRE", "n": 1, "m": 2}}))
        assert run_cli("eval-jpdf", "--config", str(cfg), "--r", "0.25") == 0
        out = json.loads(capsys.readouterr().out)
        assert out["value"] == pytest.approx(0.5 / np.sqrt(0.25))

    def test_usage_error_exit_code(self, capsys):
        assert run_cli("eval-jpdf", "--kind", "PRE", "--n", "2", "--m", "1",
                       "--gamma", "0.5", "--r", "0.5,0.5") == 2


class TestVerifyCommand:
    def test_filtered_run_writes_report(self, tmp_path, capsys):
        code = run_cli("verify", "--filter", "partitions", "--out", str(tmp_path))
        assert code == 0
        report = json.loads((tmp_path / "verify.json").read_text())
        assert report["failed"] == 0
        assert report["version"].startswith("andreev-")
        assert all(r["passed"] for r in report["results"])
        assert (tmp_path / "verify.png").exists()

    def test_no_figure_flag(self, tmp_path):
        run_cli("verify", "--filter", "partitions", "--out", str(tmp_path),
                "--no-figure")
        assert not (tmp_path / "verify.png").exists()

    def test_empty_filter_is_usage_error(self):
        assert run_cli("verify", "--filter", "zzz-no-such") == 2

    def test_failing_check_sets_exit_code_one(self, monkeypatch, capsys):
        from andreev import verify

        def failing():
            return False, 1.0, 0.5, "synthetic failure"

        monkeypatch.setattr(verify, "_REGISTRY",
                            [("synthetic.fail", ("synthetic",), failing)])
        assert run_cli("verify", "--filter", "synthetic") == 1
        assert "FAIL" in capsys.readouterr().out


class TestSampleCommand:
    def test_spool_and_provenance(self, tmp_path, capsys):
        code = run_cli("sample", "--kind", "PRE", "--n", "1", "--m", "2",
                       "--gamma", "0", "--samples", "1500", "--seed", "7",
                       "--burn-in", "100", "--thinning", "1",
                       "--out", str(tmp_path))
        assert code == 0
        meta = json.loads((tmp_path / "sample.json").read_text())
        assert meta["acceptance_rate"] == 1.0  # gamma = 0 accepts everything
        assert meta["kept_samples"] == 1500
        assert meta["config"]["spec"]["kind"] == "PRE"
        lines = (tmp_path / "samples.csv").read_text().splitlines()
        assert lines[0].startswith("# andreev-")
        assert lines[1] == "chain,index,R1"
        assert len(lines) == 1502

    def test_bit_identical_reruns(self, tmp_path):
        args = ["sample", "--kind", "PQE", "--n", "1", "--m", "1",
                "--gamma", "0.4", "--samples", "500", "--seed", "3",
                "--burn-in", "50", "--thinning", "2"]
        run_cli(*args, "--out", str(tmp_path / "a"))
        run_cli(*args, "--out", str(tmp_path / "b"))
        assert (tmp_path / "a" / "samples.csv").read_bytes() == \
            (tmp_path / "b" / "samples.csv").read_bytes()

    def test_multi_chain_deterministic(self, tmp_path, monkeypatch):
        args = ["sample", "--kind", "PRE", "--n", "1", "--m", "2",
                "--gamma", "0.3", "--samples", "600", "--seed", "5",
                "--burn-in", "50", "--chains", "3"]
        run_cli(*args, "--out", str(tmp_path / "a"))
        run_cli(*args, "--out", str(tmp_path / "b"))
        assert (tmp_path / "a" / "samples.csv").read_bytes() == \
            (tmp_path / "b" / "samples.csv").read_bytes()
        # threaded chains reduce deterministically too
        monkeypatch.setenv("ANDREEV_THREADS", "3")
        run_cli(*args, "--out", str(tmp_path / "c"))
        assert (tmp_path / "a" / "samples.csv").read_bytes() == \
            (tmp_path / "c" / "samples.csv").read_bytes()


class TestCompareCommand:
    def test_outputs_and_figure(self, tmp_path):
        code = run_cli("compare", "--kind", "PRE", "--n", "1", "--m", "2",
                       "--gamma", "0.5", "--samples", "20000", "--seed", "11",
                       "--burn-in", "500", "--thinning", "2", "--bins", "20",
                       "--out", str(tmp_path))
        assert code == 0
        stats = json.loads((tmp_path / "compare.json").read_text())
        assert stats["fraction_within_3sigma"] >= 0.85
        assert "acceptance_rate" in stats and "config" in stats
        csv_lines = (tmp_path / "compare.csv").read_text().splitlines()
        assert csv_lines[1].split(",") == [
            "bin_center", "empirical_density", "stderr", "analytic_density",
            "deviation_sigma"]
        assert len(csv_lines) == 22
        assert (tmp_path / "compare.png").exists()
        assert (tmp_path / "compare.png").stat().st_size > 5000

    def test_n2_marginal_path(self, tmp_path):
        # the PQE(2,2) kernel mixes slowly (acceptance ~ 0.06), so this
        # plumbing test thins hard and leaves the statistics to acceptance c9
        code = run_cli("compare", "--kind", "PQE", "--n", "2", "--m", "2",
                       "--gamma", "0.4", "--samples", "6000", "--seed", "13",
                       "--burn-in", "500", "--thinning", "20", "--bins", "12",
                       "--no-figure", "--out", str(tmp_path))
        assert code == 0
        stats = json.loads((tmp_path / "compare.json").read_text())
        assert stats["fraction_within_3sigma"] >= 0.75
