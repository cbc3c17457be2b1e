"""CLI subcommands: dispatch, exit codes, and stable JSON payloads."""

import json
import os

from limitknow.cli import main

MODEL = os.path.join(os.path.dirname(__file__), "fixtures", "model3.json")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out), err


def test_check_valid_formula(capsys):
    code, out, _ = run(capsys, "check", "-m", MODEL, "-f", "S[a] p -> p")
    assert code == 0 and out.strip() == "valid"


def test_check_invalid_formula_exits_one(capsys):
    code, payload, _ = run_json(capsys, "check", "-m", MODEL, "-f", "p -> C q")
    assert code == 1
    assert payload["valid"] is False
    assert payload["counterexamples"] == ["x", "z"]
    assert payload["schema"] == 1


def test_check_parse_error_exits_two(capsys):
    code, _, err = run(capsys, "check", "-m", MODEL, "-f", "p & ")
    assert code == 2 and "error" in err


def test_missing_model_file_exits_two(capsys):
    code, _, err = run(capsys, "check", "-m", "no-such.json", "-f", "p")
    assert code == 2 and "error" in err


def test_eval_reports_extension(capsys):
    code, payload, _ = run_json(capsys, "eval", "-m", MODEL, "-f", "C p")
    assert code == 0 and payload["extension"] == ["x", "z"]


def test_rank_matches_hierarchy_example(capsys):
    code, payload, _ = run_json(capsys, "rank", "-m", MODEL, "-a", "a", "-s", "x,z")
    assert code == 0
    assert payload["open_rank"] == 3
    assert payload["open_witness"] == [["x", "y", "z"], ["y", "z"], ["z"]]
    assert payload["closed_rank"] == 2


def test_rank_infinite_is_reported(capsys, tmp_path):
    indiscrete = tmp_path / "indiscrete.json"
    indiscrete.write_text(
        json.dumps(
            {
                "worlds": ["u", "v"],
                "agents": [{"name": "a", "tolerance": 1, "basis": [["u", "v"]]}],
            }
        )
    )
    code, payload, _ = run_json(capsys, "rank", "-m", str(indiscrete), "-a", "a", "-s", "u")
    assert code == 0 and payload["open_rank"] == "infinite"
    assert payload["open_witness"] is None


def test_ops_agrees_with_eval(capsys):
    code, by_ops, _ = run_json(capsys, "ops", "-m", MODEL, "-a", "a", "--op", "S", "-p", "x,z")
    assert code == 0
    code, by_eval, _ = run_json(capsys, "eval", "-m", MODEL, "-f", "S[a] p")
    assert code == 0
    assert by_ops["result"] == by_eval["extension"]


def test_ops_formula_operand_and_witness(capsys):
    code, payload, _ = run_json(
        capsys, "ops", "-m", MODEL, "-a", "a", "--op", "B", "-p", "z", "-w", "@p"
    )
    assert code == 0 and payload["result"] == ["z"]
    code, payload, _ = run_json(capsys, "ops", "-m", MODEL, "--op", "C", "-p", "@p")
    assert code == 0 and payload["result"] == ["x", "z"]


def test_ops_flag_validation(capsys):
    code, _, err = run(capsys, "ops", "-m", MODEL, "--op", "R", "-p", "x")
    assert code == 2 and "--agent" in err
    code, _, err = run(capsys, "ops", "-m", MODEL, "-a", "a", "--op", "I", "-p", "x")
    assert code == 2 and "--witness" in err
    code, _, err = run(capsys, "ops", "-m", MODEL, "-a", "a", "--op", "C", "-p", "x")
    assert code == 2


def test_synth_infeasible_names_the_rank(capsys):
    code, out, _ = run(capsys, "synth", "-m", MODEL, "-p", "p", "--target", "x,z")
    assert code == 1
    assert "3 opens" in out and "tolerance allows 2" in out


def test_synth_feasible_prints_tables(capsys):
    code, payload, _ = run_json(capsys, "synth", "-m", MODEL, "-p", "p", "--target", "z")
    assert code == 0
    assert payload["success_set"] == ["z"]
    rows = payload["strategies"]["a"]
    assert {"evidence": ["z"], "verdict": "yes"} in rows


def test_simulate_scenario(capsys, tmp_path):
    scenario = {
        "frame": MODEL,
        "target": "@p",
        "protocol": {"type": "synthesized", "success_target": "z"},
        "world": "z",
        "faults": [],
        "seed": 5,
    }
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(scenario))
    code, payload, _ = run_json(capsys, "simulate", "-s", str(path))
    assert code == 0
    assert payload["aggregator_limit"] == "yes"
    assert payload["limits"] == {"a": "yes"}
    code, out, _ = run(capsys, "simulate", "-s", str(path))
    assert code == 0 and "aggregator limit: yes" in out


def test_laws_clean_run_exits_zero(capsys):
    code, payload, _ = run_json(capsys, "laws", "-m", MODEL, "--trials", "4", "--seed", "9")
    assert code == 0 and payload["ok"] is True
    names = [r["name"] for r in payload["results"]]
    assert "ax_S4" in names and "rule_G" in names


def test_json_payloads_are_schema_stable(capsys):
    code, payload, _ = run_json(capsys, "rank", "-m", MODEL, "-a", "a", "-s", "y")
    assert code == 0
    assert sorted(payload) == [
        "closed_rank",
        "closed_witness",
        "open_rank",
        "open_witness",
        "schema",
        "set",
    ]


def test_world_set_fallback_reports_unknown_names(capsys):
    code, _, err = run(capsys, "rank", "-m", MODEL, "-a", "a", "-s", "x,ghost")
    assert code == 2 and "ghost" in err
