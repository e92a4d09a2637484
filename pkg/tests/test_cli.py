"""The command-line interface: output contracts, the canonical JSON
envelope, exit codes, and flag wiring.  Everything runs in-process through
``cli.main`` so stdout/stderr and global state are under test control."""

import json

import pytest

from cohit import cli, config, dual, hit, tables


@pytest.fixture(autouse=True)
def _restore_global_state():
    cap = config.DEGREE_CAP
    yield
    config.set_degree_cap(cap)
    hit.set_cache_dir(None)


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    payload = json.loads(out)
    # canonical form: parse + re-serialize is byte-identical
    assert json.dumps(payload, indent=2, sort_keys=True) + "\n" == out
    assert set(payload) == {"command", "inputs", "result", "timing"}
    return code, payload, err


class TestSubcommands:
    def test_qp_human(self, capsys):
        code, out, _ = run(capsys, "qp", "--k", "2", "--d", "3")
        assert code == 0
        assert "dim (QP_2)_3 = 3" in out

    def test_qp_json_with_basis(self, capsys):
        code, payload, _ = run_json(
            capsys, "qp", "--k", "2", "--d", "3", "--basis")
        assert code == 0
        assert payload["command"] == "qp"
        assert payload["inputs"] == {"k": 2, "d": 3, "basis": True}
        assert payload["result"]["dim"] == 3
        assert len(payload["result"]["basis"]) == 3
        assert isinstance(payload["timing"], float)

    def test_invariants(self, capsys):
        code, payload, _ = run_json(
            capsys, "invariants", "--k", "2", "--d", "6",
            "--group", "gl", "--basis")
        assert code == 0
        assert payload["result"]["dim"] == 1
        assert len(payload["result"]["basis"]) == 1

    def test_primitives_and_coinvariants(self, capsys):
        code, payload, _ = run_json(capsys, "primitives", "--k", "3",
                                    "--d", "8")
        assert code == 0
        assert payload["result"]["dim"] == len(payload["result"]["basis"])

        code, payload, _ = run_json(capsys, "coinvariants", "--k", "3",
                                    "--d", "8")
        assert code == 0
        assert payload["result"]["dim"] == 1
        # the printed representative parses back to a degree-8 element
        rep = dual.parse_dual(payload["result"]["representatives"][0], k=3)
        assert rep.degree == 8

    def test_kameko(self, capsys):
        code, payload, _ = run_json(capsys, "kameko", "--k", "2", "--m", "3")
        assert code == 0
        r = payload["result"]
        assert r["iso"] == (r["rank"] == r["rows"] == r["cols"])
        assert len(r["matrix"]) == r["rows"]
        assert all(len(row) == r["cols"] for row in r["matrix"])

    def test_lambda_normalize(self, capsys):
        code, out, _ = run(capsys, "lambda", "normalize",
                           "--expr", "L1 L1 L6")
        assert code == 0
        assert out.strip() == "L2 L3 L3"

    def test_lambda_diff(self, capsys):
        code, out, _ = run(capsys, "lambda", "diff", "--expr", "L4 L5")
        assert code == 0
        assert out.strip() == "L2 L3 L3 + L3 L4 L1 + L4 L3 L1"

    def test_lambda_homology(self, capsys):
        code, payload, _ = run_json(capsys, "lambda", "homology",
                                    "--s", "3", "--w", "8")
        assert code == 0
        assert payload["result"]["dim"] == 1
        assert payload["result"]["names"] == ["c0"]

    def test_transfer(self, capsys):
        code, payload, _ = run_json(capsys, "transfer", "--k", "3",
                                    "--d", "8")
        assert code == 0
        assert payload["result"]["verdict"] == "iso"
        assert payload["result"]["image_names"] == ["c0"]

    def test_table_reproduces(self, capsys):
        for name in ("qp3", "md421"):
            code, out, _ = run(capsys, "table", "--name", name)
            assert code == 0
            assert "matches bundled expectations" in out


class TestExitCodes:
    def test_missing_argument(self, capsys):
        code, _, _ = run(capsys, "qp", "--k", "2")
        assert code == 2

    def test_unknown_subcommand(self, capsys):
        code, _, _ = run(capsys, "frobnicate")
        assert code == 2

    def test_bad_expression(self, capsys):
        code, _, err = run(capsys, "lambda", "normalize", "--expr", "Lx")
        assert code == 2
        assert "error" in err

    def test_bad_table_name(self, capsys):
        code, _, _ = run(capsys, "table", "--name", "nope")
        assert code == 2

    def test_bad_threads(self, capsys):
        code, _, err = run(capsys, "qp", "--k", "2", "--d", "3",
                           "--threads", "0")
        assert code == 2
        assert "threads" in err

    def test_cap_exceeded(self, capsys):
        code, _, err = run(capsys, "qp", "--k", "3", "--d", "20",
                           "--max-degree", "10")
        assert code == 3
        assert "cap" in err

    def test_table_mismatch(self, capsys, monkeypatch):
        real = tables.expected_table("qp3")
        fake = json.loads(json.dumps(real))
        fake["entries"][0]["dim"] += 1

        monkeypatch.setattr(tables, "expected_table", lambda name: fake)
        code, out, _ = run(capsys, "table", "--name", "qp3")
        assert code == 4
        assert "MISMATCH" in out


class TestFlags:
    def test_threads_do_not_change_output(self, capsys):
        _, out1, _ = run(capsys, "qp", "--k", "3", "--d", "8",
                         "--basis", "--threads", "1")
        _, out2, _ = run(capsys, "qp", "--k", "3", "--d", "8",
                         "--basis", "--threads", "4")
        assert out1 == out2

        _, p1, _ = run_json(capsys, "transfer", "--k", "2", "--d", "8",
                            "--threads", "1")
        _, p2, _ = run_json(capsys, "transfer", "--k", "2", "--d", "8",
                            "--threads", "3")
        del p1["timing"], p2["timing"]
        assert p1 == p2

    def test_max_degree_not_in_inputs_when_unset(self, capsys):
        _, payload, _ = run_json(capsys, "qp", "--k", "2", "--d", "4")
        assert "max_degree" not in payload["inputs"]

    def test_max_degree_recorded_when_set(self, capsys):
        _, payload, _ = run_json(capsys, "qp", "--k", "2", "--d", "4",
                                 "--max-degree", "50")
        assert payload["inputs"]["max_degree"] == 50

    def test_cache_flag_writes_cache_files(self, capsys, tmp_path):
        hit.clear_memo()
        code, _, _ = run(capsys, "qp", "--k", "2", "--d", "5",
                         "--cache", str(tmp_path))
        assert code == 0
        assert any(tmp_path.iterdir())
        hit.clear_memo()
