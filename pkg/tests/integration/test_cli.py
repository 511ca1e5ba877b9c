"""
End-to-end tests of the gmelab command line
"""
import json
from pathlib import Path

import numpy as np
import pytest

from gmelab.core.exceptions import SolverError
from gmelab.main import main

pytestmark = pytest.mark.integration


def _report(path: Path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


class TestCheck:

    def test_ppt_on_one_cut(self, temp_dir):
        out = temp_dir / "ppt.json"
        code = main(["check", "--state", "isotropic:0.5", "--criterion", "ppt", "--cut", "1|2", "--out", str(out)])
        assert code == 0
        report = _report(out)
        assert report["status"] == "ok"
        assert report["command"][:2] == ["check", "--state"]
        assert {"version", "seed", "wall_time", "tolerances"} <= set(report)
        row = report["results"]["cuts"][0]
        assert row["cut"] == "1|2"
        assert row["value"] == pytest.approx(-0.125, abs=1e-12)
        assert row["verdict"] == "entangled-certified"

    def test_all_cuts_by_default(self, temp_dir):
        out = temp_dir / "neg.json"
        assert main(["check", "--state", "star_pen:3,0.4", "--criterion", "negativity", "--out", str(out)]) == 0
        cuts = {row["cut"]: row["value"] for row in _report(out)["results"]["cuts"]}
        assert list(cuts) == ["1|23", "12|3", "13|2"]
        assert cuts["12|3"] == pytest.approx(0.05, abs=1e-12)

    def test_sum_on_ghz(self, temp_dir):
        out = temp_dir / "sum.json"
        assert main(["check", "--state", "ghz:3", "--criterion", "sum", "--out", str(out)]) == 0
        results = _report(out)["results"]
        assert results["sum"] == pytest.approx(1.5, abs=5e-3)
        assert results["verdict"] == "no-violation"

    def test_witness_sidecar(self, temp_dir):
        out = temp_dir / "witness.json"
        code = main(["check", "--state", "ghz:3", "--criterion", "gme-witness", "--out", str(out), "--emit-matrices"])
        assert code == 0
        results = _report(out)["results"]
        assert results["witness"]["status"] == "gme-certified"
        with np.load(out.with_suffix(".npz")) as archive:
            assert {"state", "witness", "P_1_23", "Q_1_23"} <= set(archive.files)

    def test_unknown_state_is_input_error(self, temp_dir):
        out = temp_dir / "bad.json"
        assert main(["check", "--state", "werner:0.5", "--criterion", "ppt", "--out", str(out)]) == 2
        report = _report(out)
        assert report["status"] == "input-error"
        assert report["error"]["type"] == "StateSpecError"

    def test_cut_with_whole_state_criterion(self, temp_dir):
        out = temp_dir / "bad.json"
        code = main(["check", "--state", "ghz:3", "--criterion", "sum", "--cut", "1|23", "--out", str(out)])
        assert code == 2

    def test_solver_failure_exit_code(self, temp_dir, mocker):
        mocker.patch(
            "gmelab.cli.commands.check.ppt_mixture_witness",
            side_effect=SolverError("did not converge"),
        )
        out = temp_dir / "fail.json"
        assert main(["check", "--state", "ghz:3", "--criterion", "gme-witness", "--out", str(out)]) == 3
        report = _report(out)
        assert report["status"] == "solver-error"
        assert report["error"]["type"] == "SolverError"

    def test_tolerance_override_is_reported(self, temp_dir):
        out = temp_dir / "tol.json"
        code = main([
            "check", "--state", "isotropic:0.5", "--criterion", "ppt", "--out", str(out), "--tol-ppt", "1e-8",
        ])
        assert code == 0
        assert _report(out)["tolerances"]["ppt"] == 1e-8

    def test_evidence_tolerances_are_flags(self, temp_dir):
        out = temp_dir / "unit.json"
        code = main([
            "check", "--state", "isotropic:0.5", "--criterion", "ppt", "--out", str(out),
            "--tol-unit-norm", "1e-8", "--tol-weight-order", "1e-13",
        ])
        assert code == 0
        tolerances = _report(out)["tolerances"]
        assert tolerances["unit_norm"] == 1e-8
        assert tolerances["weight_order"] == 1e-13
        assert tolerances["fidelity_imaginary"] == 1e-12

    def test_malformed_tolerance_is_rejected(self):
        with pytest.raises(SystemExit) as exc:
            main(["check", "--state", "bell", "--criterion", "ppt", "--tol-ppt", "tiny"])
        assert exc.value.code == 2


class TestSweep:

    def _sweep(self, out: Path, *extra: str) -> int:
        return main(["sweep", "--n", "3", "--k", "1", "--p-grid", "0.30:0.40:0.05", "--out", str(out), *extra])

    def test_csv_layout(self, temp_dir):
        out = temp_dir / "sweep.csv"
        assert self._sweep(out) == 0
        text = out.read_bytes().decode("utf-8")
        lines = text.split("\r\n")
        assert lines[0] == "n,k,p,criterion,cut,value,verdict"
        rows = [line.split(",") for line in lines[1:] if line]
        assert len(rows) == 3
        values = [float(row[5]) for row in rows]
        # per-edge PPT changes sign once past 1/3
        assert values[0] > 0 > values[1] > values[2]
        assert _report(out.with_suffix(".json"))["results"]["rows"] == 3

    def test_byte_identical_reruns(self, temp_dir):
        first, second = temp_dir / "a.csv", temp_dir / "b.csv"
        assert self._sweep(first, "--criterion", "ppt", "--criterion", "activatable", "--seed", "5") == 0
        assert self._sweep(second, "--criterion", "ppt", "--criterion", "activatable", "--seed", "5") == 0
        assert first.read_bytes() == second.read_bytes()

    def test_rejects_two_parties(self, temp_dir):
        out = temp_dir / "bad.csv"
        assert main(["sweep", "--n", "2", "--p-grid", "0.1,0.2", "--out", str(out)]) == 2


class TestExport:

    def test_round_trip_through_check(self, temp_dir):
        state = temp_dir / "state.json"
        assert main(["export", "--state", "star_pen:3,0.4", "--out", str(state)]) == 0
        payload = _report(state)
        assert set(payload) == {"layout", "entries"}
        assert len(payload["entries"]) == 256

        out = temp_dir / "neg.json"
        code = main(["check", "--state", f"@{state}", "--criterion", "negativity", "--cut", "12|3", "--out", str(out)])
        assert code == 0
        assert _report(out)["results"]["cuts"][0]["value"] == pytest.approx(0.05, abs=1e-12)


class TestActivate:

    def test_single_copy(self, temp_dir):
        out = temp_dir / "activate.json"
        assert main(["activate", "--n", "3", "--k", "1", "--out", str(out), "--emit-matrices"]) == 0
        results = _report(out)["results"]
        assert results["p"] == pytest.approx(0.5)
        assert results["certificate_passed"]
        assert results["activatability"]["verdict"] == "activatable-certified"
        with np.load(out.with_suffix(".npz")) as archive:
            assert "target" in archive.files
            assert archive["target"].shape == (16, 16)

    def test_fixed_visibility_below_threshold(self, temp_dir):
        out = temp_dir / "activate.json"
        assert main(["activate", "--n", "3", "--p", "0.2", "--out", str(out)]) == 0
        results = _report(out)["results"]
        assert results["activation_relevant"] is False
        assert results["certificate_passed"]

    def test_empty_grid_is_solver_error(self, temp_dir):
        out = temp_dir / "activate.json"
        assert main(["activate", "--n", "3", "--grid-points", "0", "--out", str(out)]) == 3
        report = _report(out)
        assert report["error"]["stage"] == "p_hat-search"

    def test_two_parties_is_input_error(self, temp_dir):
        out = temp_dir / "activate.json"
        assert main(["activate", "--n", "2", "--out", str(out)]) == 2
