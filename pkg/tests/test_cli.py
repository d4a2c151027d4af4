import json

import numpy as np
import pytest

from criticalgabor import CoefficientSet, atom, hermite_signal, signal_from_csv
from criticalgabor.cli import RunConfig, main


@pytest.fixture()
def workdir(tmp_path):
    hermite_signal(0).to_csv(tmp_path / "h0.csv")
    atom((0, 0)).to_csv(tmp_path / "e0.csv")
    atom((0.5, 0.5)).to_csv(tmp_path / "esharp.csv")
    (tmp_path / "disk.json").write_text(json.dumps({"type": "disk", "center": [0, 0], "radius": 1.5}))
    c = CoefficientSet({(0, 0, False): 1.0, (1, 0, False): 0.5j})
    (tmp_path / "c.json").write_text(c.to_json())
    return tmp_path


class TestConfig:
    def test_defaults_valid(self):
        RunConfig().validate()

    def test_odd_n_rejected(self):
        with pytest.raises(ValueError, match="midpoint"):
            RunConfig(N=33).validate()

    def test_incompatible_n_rejected(self):
        with pytest.raises(ValueError, match="even integer"):
            RunConfig(N=64).validate()  # 1/(N h) = 1 is odd at h = 1/64

    def test_order_cap(self):
        with pytest.raises(ValueError, match="m must be"):
            RunConfig(m=7).validate()

    def test_box_inside_grid(self):
        with pytest.raises(ValueError, match="box"):
            RunConfig(box=9.0).validate()

    def test_unknown_field_rejected(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"T": 8.0, "bogus": 1}))

        class Args:
            config = str(cfg)

        from criticalgabor.cli import load_config
        with pytest.raises(ValueError, match="unknown fields"):
            load_config(Args())

    def test_hash_stable(self):
        assert RunConfig().hash() == RunConfig().hash()
        assert RunConfig().hash() != RunConfig(Q=9).hash()

    def test_config_file_with_flag_override(self, workdir):
        cfg = workdir / "cfg.json"
        cfg.write_text(json.dumps({"Q": 10, "dlam": 0.125}))
        rc = main(["analyze", "--config", str(cfg), "--dlam", "0.25", "--box", "2.0",
                   "--input", str(workdir / "h0.csv"),
                   "--out-summary", str(workdir / "cfgsum.json")])
        assert rc == 0
        summary = json.loads((workdir / "cfgsum.json").read_text())
        # flag override (dlam=0.25) and file value (Q=10) both land in the hash
        assert summary["config_hash"] == RunConfig(Q=10, dlam=0.25, box=2.0).hash()


class TestAnalyze:
    def test_parseval_summary(self, workdir, capsys):
        rc = main(["analyze", "--input", str(workdir / "h0.csv"),
                   "--out-summary", str(workdir / "s.json")])
        assert rc == 0
        summary = json.loads((workdir / "s.json").read_text())
        assert 0.999 <= summary["parseval_ratio"] <= 1.001
        assert "config_hash" in summary

    def test_byte_identical_reruns(self, workdir):
        for name in ("s1.json", "s2.json"):
            assert main(["analyze", "--input", str(workdir / "h0.csv"),
                         "--out-summary", str(workdir / name)]) == 0
        assert (workdir / "s1.json").read_bytes() == (workdir / "s2.json").read_bytes()

    def test_empty_signal_is_input_error(self, workdir, capsys):
        (workdir / "empty.csv").write_text("x,re,im\n")
        rc = main(["analyze", "--input", str(workdir / "empty.csv")])
        assert rc == 2

    def test_malformed_reports_line_number(self, workdir, capsys):
        (workdir / "bad.csv").write_text("x,re,im\n0.0,nope,0.0\n")
        rc = main(["analyze", "--input", str(workdir / "bad.csv")])
        assert rc == 2
        assert "line 2" in capsys.readouterr().err

    def test_field_csv(self, workdir):
        rc = main(["analyze", "--input", str(workdir / "h0.csv"), "--box", "2.0",
                   "--dlam", "0.25", "--out-field", str(workdir / "f.csv")])
        assert rc == 0
        assert (workdir / "f.csv").read_text().startswith("p,theta,re,im")


class TestSynthesizeExpand:
    def test_roundtrip_atom(self, workdir):
        rc = main(["synthesize", "--coeffs", str(workdir / "c.json"),
                   "--out", str(workdir / "sig.csv")])
        assert rc == 0
        sig = signal_from_csv(workdir / "sig.csv")
        assert abs(sig.norm() - np.sqrt(1.0 + 0.25 + 2 * (0.5j * np.conj(
            np.exp(1j * np.pi * 0 - np.pi / 2))).real)) < 1.0  # sanity scale only

    def test_expand_gaussian_unit_coefficient(self, workdir):
        rc = main(["expand", "--input", str(workdir / "e0.csv"),
                   "--out", str(workdir / "exp.json")])
        assert rc == 0
        payload = json.loads((workdir / "exp.json").read_text())
        units = [(c["k"], c["j"], c["sharp"]) for c in payload["coefficients"]
                 if abs(complex(c["re"], c["im"])) > 0.5]
        assert units == [(0, 0, False)]
        assert payload["diagnostics"]["residual"] <= 2e-3

    def test_expand_sharp_atom(self, workdir):
        rc = main(["expand", "--input", str(workdir / "esharp.csv"),
                   "--out", str(workdir / "exps.json")])
        assert rc == 0
        payload = json.loads((workdir / "exps.json").read_text())
        sharp = [c for c in payload["coefficients"] if c["sharp"]]
        assert len(sharp) == 1
        assert abs(complex(sharp[0]["re"], sharp[0]["im"]) - 1.0) < 1e-5
        lattice = [abs(complex(c["re"], c["im"])) for c in payload["coefficients"] if not c["sharp"]]
        assert max(lattice) < 1e-3

    def test_expand_order_cap(self, workdir):
        assert main(["expand", "--input", str(workdir / "e0.csv"), "--m", "7"]) == 2

    def test_expand_order_m_payload(self, workdir):
        rc = main(["expand", "--input", str(workdir / "e0.csv"), "--m", "1",
                   "--R", "3", "--out", str(workdir / "expm.json")])
        assert rc == 0
        payload = json.loads((workdir / "expm.json").read_text())
        assert len(payload["sharp_block"]) == 2
        assert len(payload["nodes"]) == 2


class TestDecomposeRotate:
    def test_decompose_payload(self, workdir):
        rc = main(["decompose", "--input", str(workdir / "e0.csv"),
                   "--domain", str(workdir / "disk.json"), "--r", "3",
                   "--out", str(workdir / "dec.json"),
                   "--residual-csv", str(workdir / "res.csv")])
        assert rc == 0
        payload = json.loads((workdir / "dec.json").read_text())
        assert payload["report"]["residual_norm"] <= payload["report"]["bound_value"]
        assert (workdir / "res.csv").exists()

    def test_rotate_preserves_norm(self, workdir):
        rc = main(["rotate", "--input", str(workdir / "h0.csv"),
                   "--angle", str(np.pi / 4), "--out", str(workdir / "rot.csv")])
        assert rc == 0
        assert abs(signal_from_csv(workdir / "rot.csv").norm() - 1.0) < 1e-4


class TestTheta:
    def test_prints_values(self, capsys):
        assert main(["theta", "--z", "0,0", "--x", "0.0"]) == 0
        out = capsys.readouterr().out
        assert "1.2919960074815042" in out
        assert "0.5" in out

    def test_nothing_to_do(self, capsys):
        assert main(["theta"]) == 2


class TestVerify:
    def test_seeded_run_passes_and_is_deterministic(self, workdir, capsys):
        out1, out2 = workdir / "r1.json", workdir / "r2.json"
        assert main(["verify", "--seed", "7", "--out", str(out1)]) == 0
        assert main(["verify", "--seed", "7", "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        text = capsys.readouterr().out
        assert "FAIL" not in text

    def test_tiny_q_fails_theta_check(self, workdir, capsys):
        rc = main(["verify", "--Q", "2", "--out", str(workdir / "rq.json")])
        assert rc == 1
        report = json.loads((workdir / "rq.json").read_text())
        failed = {c["name"] for c in report["checks"] if not c["passed"]}
        assert "theta_vertical_periodicity" in failed
