"""End-to-end command-line behavior, including exit-code contracts."""

import json

import numpy as np
import pytest

from qdutch import cli
from qdutch.quantum import operator_to_json

UP = [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
PLUS = [[0.5, 0.0], [0.5, 0.0], [0.5, 0.0], [0.5, 0.0]]
DOWN = [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def mixed_state(tmp_path):
    return write_json(tmp_path / "rho.json", {"dim": 2, "entries": [[0.5, 0], [0, 0], [0, 0], [0.5, 0]]})


@pytest.fixture
def overround_book(tmp_path):
    doc = {
        "atoms": ["a", "b"],
        "bets": [
            {"target": "a", "condition": "TRUE", "quotient": "3/5", "stake": "1/1"},
            {"target": "!a", "condition": "TRUE", "quotient": "3/5", "stake": "1/1"},
        ],
    }
    return write_json(tmp_path / "book.json", doc)


class TestSuccessionCommand:
    def test_prints_exact_and_decimal(self, capsys):
        assert cli.main(["succession", "--measure", "bures", "--n", "1", "--k", "1"]) == 0
        out = capsys.readouterr().out
        assert "5/8" in out and "0.625" in out

    def test_comma_list_and_kfrac(self, capsys):
        assert cli.main(["succession", "--measure", "pure", "--n", "2,4", "--kfrac", "1/2"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines == ["1/2 0.5", "1/2 0.5"]

    def test_requires_exactly_one_of_k_and_kfrac(self, capsys):
        assert cli.main(["succession", "--measure", "flat", "--n", "2"]) == 2
        assert (
            cli.main(["succession", "--measure", "flat", "--n", "2", "--k", "1", "--kfrac", "1/2"])
            == 2
        )

    def test_decimal_kfrac_is_an_input_error(self, capsys):
        assert cli.main(["succession", "--measure", "flat", "--n", "2", "--kfrac", "0.5"]) == 2

    def test_unknown_measure_is_an_input_error(self, capsys):
        assert cli.main(["succession", "--measure", "haar", "--n", "1", "--k", "1"]) == 2

    def test_cap_violation_is_an_input_error(self, capsys):
        assert cli.main(["succession", "--measure", "flat", "--n", "5000", "--k", "1"]) == 2


class TestFigure1Command:
    def test_csv_grid(self, tmp_path, capsys):
        out = tmp_path / "fig1.csv"
        code = cli.main(
            ["figure1", "--measure", "flat", "--n", "10,20,40", "--kfrac", "1/2", "--out", str(out)]
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0].startswith("measure,n,k,correction_ratio_exact")
        assert len(lines) == 4
        assert lines[1].split(",")[0:3] == ["flat", "10", "5"]

    def test_pure_rows_are_exactly_one(self, tmp_path):
        out = tmp_path / "fig1.csv"
        cli.main(["figure1", "--measure", "pure", "--n", "1,7,33", "--kfrac", "1/3", "--out", str(out)])
        for line in out.read_text().strip().splitlines()[1:]:
            assert line.split(",")[3] == "1/1"

    def test_text_format(self, capsys):
        assert cli.main(["figure1", "--measure", "bures", "--n", "1", "--kfrac", "1/1", "--format", "text"]) == 0
        out = capsys.readouterr().out
        assert "15/16" in out

    def test_bad_n_list(self, capsys):
        assert cli.main(["figure1", "--measure", "flat", "--n", "10,x", "--kfrac", "1/2"]) == 2


class TestCoherenceCheckCommand:
    def test_dutch_book_detected_and_reported(self, overround_book, capsys):
        assert cli.main(["coherence-check", overround_book]) == 0
        out = capsys.readouterr().out
        assert out.startswith("DUTCH BOOK: stakes ")
        assert "payoff[a]" in out

    def test_coherent_book(self, tmp_path, capsys):
        doc = {
            "atoms": ["a", "b"],
            "bets": [
                {"target": "a", "condition": "TRUE", "quotient": "3/10", "stake": "1/1"},
                {"target": "!a", "condition": "TRUE", "quotient": "7/10", "stake": "1/1"},
            ],
        }
        path = write_json(tmp_path / "fair.json", doc)
        assert cli.main(["coherence-check", path]) == 0
        assert capsys.readouterr().out.startswith("COHERENT")

    def test_missing_file_is_an_input_error(self, capsys):
        assert cli.main(["coherence-check", "no-such-file.json"]) == 2

    def test_malformed_file_is_an_input_error(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{]")
        assert cli.main(["coherence-check", str(path)]) == 2


class TestAxiomsCheckCommand:
    def test_reports_violations(self, overround_book, capsys):
        assert cli.main(["axioms-check", overround_book]) == 0
        out = capsys.readouterr().out
        assert "VIOLATION additivity" in out

    def test_clean_book(self, tmp_path, capsys):
        doc = {
            "atoms": ["a", "b"],
            "bets": [
                {"target": "a", "condition": "TRUE", "quotient": "3/10"},
                {"target": "!a", "condition": "TRUE", "quotient": "7/10"},
                {"target": "a | !a", "condition": "TRUE", "quotient": "1/1"},
            ],
        }
        path = write_json(tmp_path / "clean.json", doc)
        assert cli.main(["axioms-check", path]) == 0
        assert capsys.readouterr().out.startswith("AXIOMS OK")


class TestLudersCommand:
    def test_updates_state_file(self, tmp_path, mixed_state, capsys):
        proj = write_json(tmp_path / "plus.json", {"dim": 2, "entries": PLUS})
        out = tmp_path / "updated.json"
        assert cli.main(["luders", "--state", mixed_state, "--projector", proj, "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        matrix = np.array([complex(re, im) for re, im in doc["entries"]]).reshape(2, 2)
        assert np.allclose(matrix, np.full((2, 2), 0.5))
        assert "q(condition) = 0.5" in capsys.readouterr().out

    def test_null_condition_is_a_domain_error(self, tmp_path, capsys):
        state = write_json(tmp_path / "up.json", {"dim": 2, "entries": UP})
        proj = write_json(tmp_path / "down.json", {"dim": 2, "entries": DOWN})
        assert cli.main(["luders", "--state", state, "--projector", proj]) == 1

    def test_invalid_state_is_an_input_error(self, tmp_path, capsys):
        bad = write_json(tmp_path / "bad.json", {"dim": 2, "entries": [[2.0, 0], [0, 0], [0, 0], [0, 0]]})
        proj = write_json(tmp_path / "p.json", {"dim": 2, "entries": UP})
        assert cli.main(["luders", "--state", bad, "--projector", proj]) == 2


class TestAggregateCommand:
    def test_complete_family_decoheres(self, tmp_path, capsys):
        state = write_json(
            tmp_path / "rho.json",
            {"dim": 2, "entries": [[0.5, 0], [0.4, 0.1], [0.4, -0.1], [0.5, 0]]},
        )
        p1 = write_json(tmp_path / "p1.json", {"dim": 2, "entries": UP})
        p2 = write_json(tmp_path / "p2.json", {"dim": 2, "entries": DOWN})
        assert cli.main(["aggregate", "--state", state, "--projectors", f"{p1},{p2}"]) == 0
        doc = json.loads(capsys.readouterr().out)
        matrix = np.array([complex(re, im) for re, im in doc["entries"]]).reshape(2, 2)
        assert np.allclose(matrix, np.diag([0.5, 0.5]))


class TestDefinettiVerifyCommand:
    def test_small_grid_reports_and_passes(self, capsys):
        code = cli.main(
            ["definetti-verify", "--measure", "flat", "--nmax", "2", "--samples", "40000", "--seed", "7"]
        )
        assert code == 0
        out = capsys.readouterr().out.strip().splitlines()
        rows = [json.loads(line) for line in out if line.startswith("{")]
        assert len(rows) == 6  # (n,k) pairs with n <= 2
        assert all(row["pass"] for row in rows)
        assert out[-1].endswith("passed at 4 sigma")

    def test_csv_format(self, tmp_path):
        out = tmp_path / "verify.csv"
        code = cli.main(
            ["definetti-verify", "--measure", "pure", "--nmax", "1", "--samples", "20000", "--out", str(out), "--format", "csv"]
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "measure,n,k,exact,estimate,stderr,z,pass"
        assert len(lines) == 5  # header + 3 rows + summary comment


class TestQuantumBookCommand:
    def test_fair_book_averages_to_zero(self, tmp_path, mixed_state, capsys):
        book = write_json(
            tmp_path / "qbook.json",
            {
                "dim": 2,
                "bets": [
                    {"target": UP, "condition": PLUS, "quotient": 0.5, "stake": 2.0},
                    {"target": DOWN, "condition": None, "stake": -1.0},
                ],
            },
        )
        assert cli.main(["quantum-book", "--state", mixed_state, "--book", book]) == 0
        out = capsys.readouterr().out
        value = float(out.splitlines()[0].split("=")[1])
        assert abs(value) < 1e-12
        assert "total |stake| = 3" in out


class TestArgumentHandling:
    def test_unknown_flag_exits_two(self, capsys):
        assert cli.main(["succession", "--nope", "1"]) == 2

    def test_unknown_command_exits_two(self, capsys):
        assert cli.main(["frobnicate"]) == 2
