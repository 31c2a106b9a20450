import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from qprivacy import qchannel as qc
from qprivacy.cli import SweepSpec, main
from qprivacy.entropy import von_neumann_entropy
from qprivacy.io import (
    DocumentError,
    channel_from_doc,
    channel_to_doc,
    save_channel,
    save_state,
    state_from_doc,
    state_to_doc,
)
from qprivacy.privacy import fano_privacy_bound
from qprivacy.qstate import basis_state, maximally_mixed, random_density


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    rho = random_density(2, 2, 3)
    paths = {
        "rho": tmp_path / "rho.json",
        "mixed": tmp_path / "mixed.json",
        "pure": tmp_path / "pure.json",
        "id": tmp_path / "id.json",
        "depol": tmp_path / "depol.json",
    }
    save_state(rho, paths["rho"])
    save_state(maximally_mixed(2), paths["mixed"])
    save_state(basis_state(2, 0).density(), paths["pure"])
    save_channel(qc.make_channel("identity", 2), paths["id"])
    save_channel(qc.make_channel("depolarizing", 2, [1.0]), paths["depol"])
    paths["rho_state"] = rho
    return paths


class TestDocuments:
    def test_state_round_trip(self):
        rho = random_density(4, 3, 1).with_dims((2, 2))
        back = state_from_doc(json.loads(json.dumps(state_to_doc(rho))))
        assert back.dims == (2, 2)
        np.testing.assert_array_equal(back.matrix, rho.matrix)

    def test_channel_round_trip(self):
        ch = qc.random_channel(3, 2, 0)
        back = channel_from_doc(json.loads(json.dumps(channel_to_doc(ch))))
        np.testing.assert_array_equal(back.kraus, ch.kraus)

    def test_encoding_layout(self):
        doc = state_to_doc(maximally_mixed(2))
        assert doc == {"dims": [2], "matrix": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}

    def test_malformed(self):
        with pytest.raises(DocumentError):
            state_from_doc({"dims": [2]})
        with pytest.raises(DocumentError):
            state_from_doc({"matrix": [[1, 0], [0, 1]]})
        with pytest.raises(DocumentError):
            channel_from_doc({"kraus": "nope"})


class TestBound:
    def test_identity(self, capsys, files):
        code, out, _ = run(capsys, "bound", "--state", str(files["rho"]), "--channel", str(files["id"]))
        assert code == 0
        doc = json.loads(out)
        assert doc["F"] == pytest.approx(1.0)
        assert doc["coherent_bound"] == pytest.approx(von_neumann_entropy(files["rho_state"]), abs=1e-12)

    def test_depolarizing(self, capsys, files):
        code, out, _ = run(capsys, "bound", "--state", str(files["mixed"]), "--channel", str(files["depol"]))
        assert code == 0
        doc = json.loads(out)
        assert doc["F"] == pytest.approx(0.25)
        assert doc["S_E"] == pytest.approx(2.0)

    def test_malformed_json(self, capsys, files, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _, err = run(capsys, "bound", "--state", str(bad), "--channel", str(files["id"]))
        assert code == 2 and err

    def test_invalid_state(self, capsys, files, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"dims": [2], "matrix": [[[1, 0], [0, 0]], [[0, 0], [0.01, 0]]]}))
        code, _, err = run(capsys, "bound", "--state", str(bad), "--channel", str(files["id"]))
        assert code == 3
        assert "TraceNotOne" in err

    def test_invalid_channel(self, capsys, files, tmp_path):
        bad = tmp_path / "bad.json"
        eye = [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]
        bad.write_text(json.dumps({"dim_in": 2, "dim_out": 2, "kraus": [eye, eye]}))
        code, _, err = run(capsys, "bound", "--state", str(files["mixed"]), "--channel", str(bad))
        assert code == 3
        assert "NotTracePreserving" in err

    def test_missing_file(self, capsys, files, tmp_path):
        code, _, _ = run(capsys, "bound", "--state", str(tmp_path / "none.json"), "--channel", str(files["id"]))
        assert code == 4


class TestFanoCurve:
    def read(self, path):
        with open(path) as fh:
            return list(csv.DictReader(fh))

    def test_default_peaks(self, capsys, tmp_path):
        out = tmp_path / "curve.csv"
        code, _, _ = run(capsys, "fano-curve", "--out", str(out))
        assert code == 0
        rows = self.read(out)
        assert len(rows) == 4 * 1000
        for d, peak in ((2, 0.75), (3, 0.889), (4, 0.9375), (8, 0.984)):
            sub = [r for r in rows if int(r["d"]) == d]
            best = max(sub, key=lambda r: float(r["p"]))
            assert float(best["F"]) == pytest.approx(peak, abs=1.5e-3)

    def test_round_trip(self, capsys, tmp_path):
        out = tmp_path / "curve.csv"
        run(capsys, "fano-curve", "--s-b", "1.5", "--dims", "2,5", "--samples", "777", "--out", str(out))
        for r in self.read(out):
            assert fano_privacy_bound(1.5, float(r["F"]), int(r["d"])) == pytest.approx(float(r["p"]), abs=1e-9)

    def test_single_dim_up_then_down(self, capsys, tmp_path):
        out = tmp_path / "curve.csv"
        run(capsys, "fano-curve", "--dims", "2", "--samples", "400", "--out", str(out))
        p = np.array([float(r["p"]) for r in self.read(out)])
        k = int(np.argmax(p))
        assert np.all(np.diff(p[: k + 1]) > 0)
        assert np.all(np.diff(p[k:]) < 0)

    def test_two_samples(self, capsys, tmp_path):
        out = tmp_path / "curve.csv"
        run(capsys, "fano-curve", "--samples", "2", "--out", str(out))
        rows = self.read(out)
        assert len(rows) == 8
        assert all(0 < float(r["F"]) < 1 for r in rows)

    def test_endpoints_on_request(self):
        assert SweepSpec(samples=3, include_endpoints=True).grid().tolist() == [0.0, 0.5, 1.0]
        assert SweepSpec(samples=3).grid().tolist() == [0.25, 0.5, 0.75]
        assert SweepSpec(f_min=0.2, f_max=0.6, samples=3).grid().tolist() == pytest.approx([0.2, 0.4, 0.6])

    def test_endpoints_csv(self, capsys, tmp_path):
        out = tmp_path / "curve.csv"
        run(capsys, "fano-curve", "--dims", "2", "--samples", "3", "--include-endpoints", "--out", str(out))
        rows = self.read(out)
        assert [float(r["F"]) for r in rows] == [0.0, 0.5, 1.0]
        assert float(rows[-1]["p"]) == 6.0

    def test_header_and_format(self, capsys):
        code, out, _ = run(capsys, "fano-curve", "--dims", "2", "--samples", "3")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "d,F,p"
        assert lines[3].startswith("2,0.75,6.41503749")

    def test_unwritable(self, capsys, tmp_path):
        code, _, _ = run(capsys, "fano-curve", "--out", str(tmp_path / "missing" / "x.csv"))
        assert code == 4

    def test_bad_dim(self, capsys):
        code, _, _ = run(capsys, "fano-curve", "--dims", "1")
        assert code == 3


class TestFuzz:
    def test_all(self, capsys):
        code, out, _ = run(capsys, "fuzz", "--all", "--trials", "10", "--seed", "42")
        assert code == 0
        lines = [json.loads(x) for x in out.splitlines()]
        assert len(lines) == 16
        assert "elapsed_ms" not in lines[0]

    def test_subset_and_timing(self, capsys):
        code, out, _ = run(capsys, "fuzz", "--checks", "quantum_fano,env_identity", "--trials", "5", "--dim", "3", "--timing")
        assert code == 0
        lines = [json.loads(x) for x in out.splitlines()]
        assert [x["spec"]["name"] for x in lines] == ["quantum_fano", "env_identity"]
        assert all(x["spec"]["dim"] == 3 for x in lines)
        assert "elapsed_ms" in lines[0]

    def test_unknown(self, capsys):
        code, _, err = run(capsys, "fuzz", "--checks", "bogus")
        assert code == 2 and "bogus" in err

    def test_violation_exit(self, capsys):
        code, _, _ = run(capsys, "fuzz", "--checks", "additivity", "--trials", "20", "--atol", "1e-30")
        assert code == 5

    def test_reproducible(self, capsys):
        _, a, _ = run(capsys, "fuzz", "--all", "--trials", "3", "--seed", "9")
        _, b, _ = run(capsys, "fuzz", "--all", "--trials", "3", "--seed", "9")
        assert a == b


class TestAsymptotic:
    def test_constant(self, capsys, files):
        code, out, _ = run(
            capsys, "asymptotic", "--base", str(files["rho"]), "--perturbation", str(files["rho"]), "--tol", "0"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["tail_min_diff"] == doc["limit_diff"]
        assert doc["tail_start"] == 100

    def test_harmonic_qubits(self, capsys, tmp_path):
        pair = lambda b, e: {"B": state_to_doc(b), "E": state_to_doc(e)}
        (tmp_path / "base.json").write_text(json.dumps(pair(random_density(2, 2, 1), random_density(2, 2, 2))))
        (tmp_path / "pert.json").write_text(json.dumps(pair(random_density(2, 2, 3), random_density(2, 2, 4))))
        code, out, _ = run(
            capsys, "asymptotic", "--base", str(tmp_path / "base.json"), "--perturbation", str(tmp_path / "pert.json"),
            "--schedule", "harmonic", "--n-max", "1000", "--tail-start", "100", "--tol", "0.05",
        )
        assert code == 0
        assert json.loads(out)["conditions_hold"] is True

    def test_geometric(self, capsys, files):
        code, _, _ = run(
            capsys, "asymptotic", "--base", str(files["mixed"]), "--perturbation", str(files["rho"]),
            "--schedule", "geometric:0.9", "--n-max", "300",
        )
        assert code == 0

    def test_undersized_star(self, capsys, files):
        code, _, err = run(
            capsys, "asymptotic", "--base", str(files["mixed"]), "--perturbation", str(files["pure"]),
            "--rho-star", str(files["pure"]),
        )
        assert code == 5
        assert "condition_ii_B" in err

    def test_explicit_sequence(self, capsys, tmp_path):
        rho, sigma = maximally_mixed(2), random_density(2, 2, 5)
        states = [state_to_doc(rho.__class__(0.9**n * sigma.matrix + (1 - 0.9**n) * rho.matrix, (2,)))
                  for n in range(1, 200)]
        part = {"limit": state_to_doc(rho), "states": states}
        (tmp_path / "seq.json").write_text(json.dumps({"B": part, "E": part}))
        code, out, _ = run(capsys, "asymptotic", "--sequence", str(tmp_path / "seq.json"), "--tail-start", "50")
        assert code == 0
        assert json.loads(out)["n_max"] == 199

    def test_bad_schedule(self, capsys, files):
        with pytest.raises(SystemExit) as info:
            main(["asymptotic", "--base", str(files["rho"]), "--perturbation", str(files["rho"]), "--schedule", "cubic"])
        assert info.value.code == 2


def test_module_entry_point_is_deterministic(tmp_path):
    cmd = [sys.executable, "-m", "qprivacy", "fuzz", "--checks", "araki_lieb", "--trials", "5", "--seed", "1"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
