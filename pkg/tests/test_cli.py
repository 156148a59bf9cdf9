"""CLI: subcommands, flags, exit codes."""

import json

import pytest

import lintab.corpus as corpus
from lintab.cli import (
    EXIT_BUDGET,
    EXIT_NO_SOLUTIONS,
    EXIT_OK,
    EXIT_USAGE,
    main,
)


@pytest.fixture
def tc_file(tmp_path):
    path = tmp_path / "tc.pl"
    path.write_text(corpus.LEFT_RECURSIVE_TC)
    return str(path)


def test_run_prints_solutions(tc_file, capsys):
    assert main(["run", tc_file, "p(a,Y)"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["p(a,b)", "p(a,c)"]


def test_run_eager_duplicates(tmp_path, capsys):
    path = tmp_path / "join.pl"
    path.write_text(corpus.TWO_FACT_SELF_JOIN)
    assert main(["run", str(path), "p(X),p(Y)", "--strategy", "eager"]) == EXIT_OK
    assert len(capsys.readouterr().out.splitlines()) == 7


def test_run_no_solutions_exit_code(tc_file):
    assert main(["run", tc_file, "p(z,Y)"]) == EXIT_NO_SOLUTIONS


def test_run_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.pl"
    path.write_text("p(a\n")
    assert main(["run", str(path), "p(X)"]) == EXIT_USAGE
    assert "error:" in capsys.readouterr().err


def test_run_missing_file_exit_code(tmp_path):
    assert main(["run", str(tmp_path / "nope.pl"), "p(X)"]) == EXIT_USAGE


def test_run_invalid_option_combination(tc_file, capsys):
    code = main(
        [
            "run",
            tc_file,
            "p(a,Y)",
            "--semi-naive",
            "off",
            "--early-promotion",
            "on",
        ]
    )
    assert code == EXIT_USAGE
    assert "semi-naive" in capsys.readouterr().err


def test_run_step_budget_exit_code(tc_file, capsys):
    assert main(["run", tc_file, "p(X,Y)", "--step-budget", "4"]) == EXIT_BUDGET


def test_run_stats_block(tc_file, capsys):
    assert main(["run", tc_file, "p(a,Y)", "--stats"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "-- stats --" in out
    assert "answers_produced=2" in out
    assert "ave_its=3.00" in out


def test_run_dump_table(tc_file, capsys):
    assert main(["run", tc_file, "p(a,Y)", "--dump-table"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "p(a,_G0)  state=complete answers=[p(a,b),p(a,c)]" in out


def test_run_oracle_agreement(tc_file, capsys):
    assert main(["run", tc_file, "p(a,Y)", "--oracle"]) == EXIT_OK
    assert "oracle: agreement on 2 solutions" in capsys.readouterr().out


def test_run_limit_and_dedup(tc_file, capsys):
    assert main(["run", tc_file, "p(a,Y)", "--limit", "1", "--dedup"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["p(a,b)"]


def test_gen_chain(capsys):
    assert main(["gen", "chain", "3"]) == EXIT_OK
    assert capsys.readouterr().out == "e(1,2).\ne(2,3).\n"


def test_gen_ab_string(capsys):
    assert main(["gen", "ab-string", "4"]) == EXIT_OK
    assert capsys.readouterr().out == "c(0,a,1).\nc(1,b,2).\nc(2,a,3).\nc(3,b,4).\n"


def test_gen_random_graph_deterministic(capsys):
    assert main(["gen", "random-graph", "10", "--edges", "25", "--seed", "9"]) == EXIT_OK
    first = capsys.readouterr().out
    assert main(["gen", "random-graph", "10", "--edges", "25", "--seed", "9"]) == EXIT_OK
    assert capsys.readouterr().out == first


def test_gen_pred_flag(capsys):
    assert main(["gen", "chain", "3", "--pred", "edge"]) == EXIT_OK
    assert capsys.readouterr().out == "edge(1,2).\nedge(2,3).\n"


def test_gen_errors(capsys):
    assert main(["gen", "random-graph", "5"]) == EXIT_USAGE
    assert main(["gen", "chain", "0"]) == EXIT_USAGE


def test_analyze_report(tc_file, capsys):
    assert main(["analyze", tc_file]) == EXIT_OK
    out = capsys.readouterr().out
    assert "p/2 level=1" in out
    assert "rule#0 last_depending=0 base=false" in out


def test_bench_writes_json(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code = main(
        ["bench", "paper-examples", "--json", str(out_path)]
    )
    assert code == EXIT_OK
    payload = json.loads(out_path.read_text())
    names = {entry["name"] for entry in payload}
    assert "left-recursive-tc" in names
    assert all(entry["divergences"] == [] for entry in payload)
    # stats fields round-trip through the structured output
    row = payload[0]["rows"][0]
    assert {"config", "answers_consumed", "subgoals"} <= set(row)


def test_unknown_subcommand_is_usage_error(capsys):
    assert main(["frobnicate"]) == EXIT_USAGE
