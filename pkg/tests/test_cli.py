import json

import numpy as np
import pytest

from retroking import OMEGA, Check
from retroking.cli import RunConfig, main
from retroking import protocol


def run_json(capsys, argv):
    code = main(argv + ["--format", "json"])
    report = json.loads(capsys.readouterr().out)
    return code, report


def strip_timing(report):
    trimmed = dict(report)
    trimmed.pop("timing")
    return trimmed


class TestRunConfig:
    def test_defaults(self):
        config = RunConfig(command="simulate")
        assert (config.rounds, config.seed, config.basis, config.format) == (
            10_000, 0, None, "text",
        )

    def test_rejects_bad_values(self):
        from retroking import ContractViolation

        with pytest.raises(ContractViolation):
            RunConfig(command="simulate", rounds=0)
        with pytest.raises(ContractViolation):
            RunConfig(command="simulate", basis=5)
        with pytest.raises(ContractViolation):
            RunConfig(command="nope")


class TestVerify:
    def test_passes_with_exit_zero(self, capsys):
        code, report = run_json(capsys, ["verify"])
        assert code == 0
        assert report["pass"] is True
        assert report["command"] == "verify"
        names = [c["name"] for c in report["checks"]]
        assert "qutrit-unbiasedness" in names
        assert "retrodiction-certainty" in names
        assert all(c["max_deviation"] < 1e-10 for c in report["checks"])

    def test_schema_fields(self, capsys):
        _, report = run_json(capsys, ["verify"])
        assert set(report) == {"command", "config", "checks", "pass", "data", "timing"}
        for check in report["checks"]:
            assert set(check) == {"name", "pass", "max_deviation"}

    def test_text_format(self, capsys):
        code = main(["verify"])
        out = capsys.readouterr().out
        assert code == 0
        assert "result: PASS" in out

    def test_text_and_json_carry_same_checks(self, capsys):
        main(["verify"])
        text = capsys.readouterr().out
        _, report = run_json(capsys, ["verify"])
        for check in report["checks"]:
            assert check["name"] in text

    def test_failed_check_gives_exit_one(self, capsys, monkeypatch):
        monkeypatch.setattr(
            protocol, "invariant_checks", lambda: [Check("forced-failure", False, 1.0)]
        )
        code, report = run_json(capsys, ["verify"])
        assert code == 1
        assert report["pass"] is False


class TestTables:
    def test_mixing_matrix_entry(self, capsys):
        _, report = run_json(capsys, ["tables"])
        re, im = report["data"]["mixing_matrix"][1][2]
        expected = OMEGA**2 / np.sqrt(3)
        assert complex(re, im) == pytest.approx(expected)

    def test_inference_row_for_outcome_three(self, capsys):
        _, report = run_json(capsys, ["tables"])
        assert report["data"]["inference_table"][3] == [1, 0, 1, 2]

    def test_overlap_summary(self, capsys):
        _, report = run_json(capsys, ["tables"])
        summary = report["data"]["overlap_by_matches"]
        assert summary["1"] == 0.0
        assert summary["0"] == pytest.approx(-1 / 3)
        assert summary["4"] == 1.0

    def test_text_mode_prints_symbolic_tags(self, capsys):
        code = main(["tables"])
        out = capsys.readouterr().out
        assert code == 0
        assert "x/√3" in out and "x^2/√3" in out and "1/√3" in out


class TestSimulate:
    def test_all_rounds_succeed(self, capsys):
        code, report = run_json(capsys, ["simulate", "--rounds", "500", "--seed", "7"])
        assert code == 0
        assert report["data"]["successes"] == 500
        assert sum(report["data"]["physicist_outcomes"]) == 500

    def test_identical_seeds_identical_reports(self, capsys):
        argv = ["simulate", "--rounds", "1000", "--seed", "42"]
        _, first = run_json(capsys, argv)
        _, second = run_json(capsys, argv)
        assert json.dumps(strip_timing(first)) == json.dumps(strip_timing(second))
        assert first["config"] == {
            "rounds": 1000, "seed": 42, "basis": None, "format": "json",
        }

    def test_forced_basis(self, capsys):
        _, report = run_json(capsys, ["simulate", "--rounds", "200", "--basis", "3"])
        assert report["data"]["basis_choices"] == [0, 0, 0, 200]

    def test_king_outcomes_near_uniform(self, capsys):
        n = 9000
        _, report = run_json(capsys, ["simulate", "--rounds", str(n), "--seed", "1"])
        grid = np.array(report["data"]["king_outcomes"])
        totals = grid.sum(axis=1)
        for m in range(4):
            bound = 4 * np.sqrt(totals[m] * (1 / 3) * (2 / 3))
            assert np.abs(grid[m] - totals[m] / 3).max() < bound

    def test_rejects_bad_flags(self):
        with pytest.raises(SystemExit):
            main(["simulate", "--basis", "9"])


class TestSearchBases:
    def test_count_reference_and_recertification(self, capsys):
        code, report = run_json(capsys, ["search-bases"])
        assert code == 0
        assert report["data"]["count"] == 72
        ref = report["data"]["reference_index"]
        assert ref is not None
        listed = [tuple(lab) for lab in report["data"]["bases"][ref]]
        assert set(listed) == set(map(tuple, map(list, protocol.PHYSICIST_LABELS)))
        names = {c["name"]: c["pass"] for c in report["checks"]}
        assert names["search-reference-present"]
        assert names["search-recertification"]


class TestTomography:
    def test_maximally_mixed(self, capsys):
        code, report = run_json(capsys, ["tomography", "--state", "mixed"])
        assert code == 0
        table = np.array(report["data"]["probabilities"])
        assert table == pytest.approx(np.full((4, 3), 1 / 3))
        assert report["data"]["reconstruction_error"] < 1e-12

    def test_pure_reference_state(self, capsys):
        _, report = run_json(capsys, ["tomography", "--state", "pure"])
        table = np.array(report["data"]["probabilities"])
        assert table[0] == pytest.approx([1, 0, 0])
        assert table[1:] == pytest.approx(np.full((3, 3), 1 / 3))

    def test_random_seed_round_trip(self, capsys):
        code, report = run_json(capsys, ["tomography", "--seed", "31"])
        assert code == 0
        assert report["data"]["source"] == "random"
        assert report["data"]["reconstruction_error"] < 1e-10
        assert report["config"]["state"] == "random"

    def test_density_encoding_is_re_im_pairs(self, capsys):
        _, report = run_json(capsys, ["tomography", "--state", "mixed"])
        density = report["data"]["density"]
        assert density[0][0] == [pytest.approx(1 / 3), 0.0]
