import json
import math
import os

import pytest

from conelab.cli import main
from conelab.config import ConfigError, RunConfig, load_config

SMALL = {"nr": 220, "nt": 48, "r_min": 4e-8, "alpha_decades": 2,
         "alpha_points": 3, "t_points": 3, "eps_list": [1e-2, 1e-3],
         "k_list": [2, 4], "p_list": [1.0, 1.5]}


@pytest.fixture()
def small_config(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(SMALL))
    return str(path)


class TestConfig:
    def test_defaults(self):
        cfg = load_config(None)
        assert cfg.nr == 600 and cfg.nt == 96
        assert cfg.omega == pytest.approx(math.pi / 4)

    def test_empty_file_means_defaults(self, tmp_path):
        p = tmp_path / "empty.json"
        p.write_text("")
        cfg = load_config(str(p))
        assert cfg.nr == 600

    def test_override(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text(json.dumps({"q": 0.95, "nr": 100}))
        cfg = load_config(str(p))
        assert cfg.grid().q == pytest.approx(0.95)

    def test_invalid_omega_rejected(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text(json.dumps({"omega": math.pi}))
        with pytest.raises(ConfigError):
            load_config(str(p))

    def test_unknown_key_rejected(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text(json.dumps({"bogus": 1}))
        with pytest.raises(ConfigError):
            load_config(str(p))

    def test_missing_file(self):
        with pytest.raises(ConfigError):
            load_config("/nonexistent/path.json")

    def test_infinity_exponent(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text(json.dumps({"p_list": [1, "inf"]}))
        cfg = load_config(str(p))
        assert cfg.p_list[-1] == float("inf")

    def test_tolerance_validation(self):
        with pytest.raises(ConfigError):
            RunConfig(tolerances={"x": -1.0})


class TestCommands:
    def test_hardy_exit_zero(self, tmp_path, small_config):
        out = tmp_path / "out"
        rc = main(["--config", small_config, "--out", str(out),
                   "hardy", "--p", "1", "--suite", "radial"])
        assert rc == 0
        text = (out / "hardy_n2_p1.csv").read_text()
        assert text.splitlines()[0] == "field,p,quotient,bound,ok"
        assert all(ln.endswith("True") for ln in text.splitlines()[1:])

    def test_hardy_rejects_critical_exponent(self, tmp_path, small_config):
        rc = main(["--config", small_config, "--out", str(tmp_path / "o"),
                   "hardy", "--p", "2"])
        assert rc == 2

    def test_determinism(self, tmp_path, small_config):
        outs = []
        for d in ("a", "b"):
            out = tmp_path / d
            main(["--config", small_config, "--out", str(out),
                  "hardy", "--p", "1", "--suite", "radial"])
            outs.append((out / "hardy_n2_p1.csv").read_bytes())
        assert outs[0] == outs[1]

    def test_worker_pool_keeps_output_identical(self, tmp_path, small_config,
                                                monkeypatch):
        ref = tmp_path / "ref"
        main(["--config", small_config, "--out", str(ref),
              "hardy", "--p", "1", "--suite", "radial"])
        monkeypatch.setenv("CONELAB_THREADS", "4")
        par = tmp_path / "par"
        main(["--config", small_config, "--out", str(par),
              "hardy", "--p", "1", "--suite", "radial"])
        assert (ref / "hardy_n2_p1.csv").read_bytes() == \
            (par / "hardy_n2_p1.csv").read_bytes()

    def test_norm_and_split(self, tmp_path, small_config):
        out = tmp_path / "out"
        assert main(["--config", small_config, "--out", str(out),
                     "norm", "--suite", "radial"]) == 0
        assert main(["--config", small_config, "--out", str(out),
                     "split", "--suite", "radial"]) == 0
        assert (out / "norms.csv").exists()
        assert (out / "split.csv").exists()

    def test_cz_command(self, tmp_path, small_config):
        out = tmp_path / "out"
        rc = main(["--config", small_config, "--out", str(out),
                   "cz", "--field", "logcounter", "--beta", "1.0",
                   "--dump-cover"])
        assert rc == 0
        csv = (out / "cz_logcounter(b=1).csv").read_text().splitlines()
        assert csv[0] == "alpha,n_balls,overlap_N,rec_err,eg_ratio,eb_ratio,eB_ratio"
        assert len(csv) == 4   # header + alpha_points rows
        covers = [p for p in os.listdir(out) if p.startswith("cover_")]
        assert covers
        head = (out / covers[0]).read_text().splitlines()[0]
        assert head == "x_r,x_theta,r_i,type"

    def test_density_command(self, tmp_path, small_config):
        out = tmp_path / "out"
        rc = main(["--config", small_config, "--out", str(out),
                   "density", "--field", "lipschitz_compact", "--p", "1",
                   "--mode", "plain"])
        assert rc == 0
        head = (out / "density_lipschitz_compact_plain.csv").read_text()
        assert head.splitlines()[0] == "eps,l_p_err,grad_err,trend"

    def test_counterexample_slope(self, tmp_path, capsys):
        out = tmp_path / "out"
        cfgp = tmp_path / "c.json"
        cfgp.write_text(json.dumps({"nr": 400, "nt": 32}))
        rc = main(["--config", str(cfgp), "--out", str(out),
                   "counterexample", "--beta", "0.25"])
        assert rc == 0
        data = json.loads((out / "counterexample_b0.25.json").read_text())
        assert abs(float(data["measured_slope"]) - 0.5) < 0.1

    def test_extend_and_restrict(self, tmp_path, small_config):
        out = tmp_path / "out"
        assert main(["--config", small_config, "--out", str(out),
                     "extend"]) == 0
        head = (out / "extension.csv").read_text().splitlines()[0]
        assert head == ("field,p,source_norm,target_norm,ratio,"
                        "roundtrip_err,gate")
        assert main(["--config", small_config, "--out", str(out),
                     "restrict"]) == 0

    def test_pierre(self, tmp_path, small_config):
        out = tmp_path / "out"
        assert main(["--config", small_config, "--out", str(out),
                     "pierre"]) == 0
        assert (out / "pierre.csv").exists()

    def test_verify_all_subset(self, tmp_path, small_config):
        out = tmp_path / "out"
        rc = main(["--out", str(out), "verify-all", "--checks", "hhat-gate"])
        assert rc == 0
        summary = json.loads((out / "verify_all.json").read_text())
        assert summary["passed"] is True and summary["n_checks"] == 1

    def test_verify_all_unknown_check(self, tmp_path):
        rc = main(["--out", str(tmp_path), "verify-all", "--checks", "nope"])
        assert rc == 2

    def test_unknown_subcommand_exits_2(self):
        with pytest.raises(SystemExit) as e:
            main(["frobnicate"])
        assert e.value.code == 2

    def test_bad_config_exits_2(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        rc = main(["--config", str(p), "--out", str(tmp_path), "norm"])
        assert rc == 2

    def test_kfunc_small(self, tmp_path):
        cfgp = tmp_path / "c.json"
        cfgp.write_text(json.dumps({"nr": 160, "nt": 24, "r_min": 4e-6,
                                    "t_lo": 0.1, "t_hi": 10.0, "t_points": 2}))
        out = tmp_path / "out"
        rc = main(["--config", str(cfgp), "--out", str(out), "kfunc"])
        assert rc == 0
        files = [p for p in os.listdir(out) if p.startswith("kfunc_")]
        assert len(files) == 5
        head = (out / files[0]).read_text().splitlines()[0]
        assert head == "t,K_estimate,K_upper_cz,ratio"
