import json

import pytest

from gridbn.cli import main
from gridbn.model import load_network, validate


@pytest.fixture(scope="module")
def network_file(tmp_path_factory, survey_path, layout_path):
    out = tmp_path_factory.mktemp("cli") / "network.json"
    code = main(
        [
            "compile",
            "--survey", str(survey_path),
            "--layout", str(layout_path),
            "--out", str(out),
        ]
    )
    assert code == 0
    return out


class TestCompile:
    def test_fixture_survey_compiles_clean(self, network_file):
        network = load_network(network_file)
        assert validate(network).ok
        assert len(network) == 29

    def test_recompile_is_byte_identical(self, tmp_path, survey_path, layout_path, network_file):
        again = tmp_path / "again.json"
        code = main(
            [
                "compile",
                "--survey", str(survey_path),
                "--layout", str(layout_path),
                "--out", str(again),
            ]
        )
        assert code == 0
        assert again.read_bytes() == network_file.read_bytes()

    def test_missing_question_set_named(self, tmp_path, survey_path, layout_path, capsys):
        data = json.loads(survey_path.read_text())
        for entry in data["experts"]:
            del entry["qs4"]
        broken = tmp_path / "broken_survey.json"
        broken.write_text(json.dumps(data))
        code = main(
            [
                "compile",
                "--survey", str(broken),
                "--layout", str(layout_path),
                "--out", str(tmp_path / "never.json"),
            ]
        )
        assert code == 1
        assert "qs4" in capsys.readouterr().err

    def test_divorce_flag_bounds_parents(self, tmp_path, survey_path, layout_path):
        out = tmp_path / "divorced.json"
        code = main(
            [
                "compile",
                "--survey", str(survey_path),
                "--layout", str(layout_path),
                "--out", str(out),
                "--max-parents", "3",
            ]
        )
        assert code == 0
        network = load_network(out)
        assert validate(network).ok
        for node in network:
            if node.noisy_or is not None:
                assert len(node.parents) <= 3
        assert network.metadata["divorce"]["introduced_nodes"]


class TestInfer:
    def test_high_capacity_evidence(self, network_file, capsys):
        code = main(
            [
                "infer",
                "--network", str(network_file),
                "--set", "Bulk=ge13",
                "--set", "Balance=ge5",
                "--json",
            ]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["scenario"]["probabilities"]["B1"] == pytest.approx(0.532, abs=5e-4)

    def test_baseline_report(self, network_file, capsys):
        code = main(["infer", "--network", str(network_file), "--json"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["evidence"] == {}
        assert payload["evidence_probability"] == 1.0
        assert payload["scenario"]["probabilities"]["B1"] == pytest.approx(0.409, abs=0.0015)

    def test_unknown_node_is_usage_error(self, network_file, capsys):
        code = main(["infer", "--network", str(network_file), "--set", "Bogus=x"])
        assert code == 2
        assert "Bogus" in capsys.readouterr().err

    def test_unknown_state_is_usage_error(self, network_file, capsys):
        code = main(["infer", "--network", str(network_file), "--set", "Bulk=huge"])
        assert code == 2
        err = capsys.readouterr().err
        assert "huge" in err and "lt13" in err

    def test_text_report_mentions_scenarios(self, network_file, capsys):
        code = main(["infer", "--network", str(network_file)])
        assert code == 0
        out = capsys.readouterr().out
        assert "scenarios:" in out
        assert "B1=40.9%" in out

    def test_query_flag_restricts_nodes(self, network_file, capsys):
        code = main(
            ["infer", "--network", str(network_file), "--query", "Wind", "--json"]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert list(payload["posteriors"]) == ["Wind"]
        assert payload["posteriors"]["Wind"]["gw"] == pytest.approx(21.4, abs=0.05)


class TestOptimize:
    def test_fixture_plan_complete_and_monotone(self, network_file, capsys):
        code = main(
            [
                "optimize",
                "--network", str(network_file),
                "--target", "GridManagement=B1",
                "--json",
            ]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["steps"]) == 12
        cumulative = [payload["initial_probability"]] + [
            s["cumulative_probability"] for s in payload["steps"]
        ]
        assert all(b >= a - 1e-12 for a, b in zip(cumulative, cumulative[1:]))
        joints = [s["evidence_joint"] for s in payload["steps"]]
        assert all(b <= a + 1e-12 for a, b in zip(joints, joints[1:]))

    def test_zero_weight_is_usage_error(self, network_file, capsys):
        code = main(
            [
                "optimize",
                "--network", str(network_file),
                "--target", "GridManagement=B1",
                "--w1", "0",
            ]
        )
        assert code == 2
        assert "w1" in capsys.readouterr().err

    def test_unknown_target_state_lists_valid_states(self, network_file, capsys):
        code = main(
            [
                "optimize",
                "--network", str(network_file),
                "--target", "GridManagement=B9",
            ]
        )
        assert code == 2
        err = capsys.readouterr().err
        assert "B9" in err and "B1" in err


class TestReport:
    def test_json_report_sections(self, network_file, capsys):
        code = main(["report", "--network", str(network_file), "--json", "--include-import"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["survey_mix"]["bucket_totals_gw"]["bulk"] == pytest.approx(12.7, abs=0.05)
        assert payload["survey_mix"]["bucket_totals_gw"]["balancing"] == pytest.approx(7.8, abs=0.05)
        assert payload["availability"]["peak_hour_total_gw"] == pytest.approx(17.2, abs=0.1)
        assert payload["availability"]["import_gw"] == pytest.approx(5.8, abs=0.01)
        assert payload["scenario"]["probabilities"]["B1"] == pytest.approx(0.409, abs=0.0015)

    def test_unknown_flag_exits_2(self, network_file):
        with pytest.raises(SystemExit) as excinfo:
            main(["report", "--network", str(network_file), "--frobnicate"])
        assert excinfo.value.code == 2
