import json

import numpy as np
import pytest

from blindpsim.cli import EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_INVARIANT, EXIT_OK, main
from blindpsim.corpus import permuted_copy, petersen_graph
from blindpsim.io import parse_input, write_matrix


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def petersen_files(tmp_path):
    G = petersen_graph()
    p = np.array([3, 7, 1, 0, 9, 2, 5, 8, 4, 6])
    a = write_matrix(G, tmp_path / "petersen.dimacs")
    b = write_matrix(permuted_copy(G, p), tmp_path / "petersen_perm.dimacs")
    return a, b


class TestCheck:
    def test_petersen_self(self, capsys, petersen_files):
        a, _ = petersen_files
        code, out = run(capsys, "check", a, a)
        assert code == EXIT_OK
        assert out["psim"] is True and out["iterations"] <= 6
        assert out["config"]["engine"] == "exact"
        assert out["inputs"]["A"]["format"] == "dimacs"

    def test_two_by_two_pair(self, capsys, tmp_path):
        a = write_matrix(np.array([[0, 1], [1, 0]]), tmp_path / "a.mtx")
        b = write_matrix(np.array([[0, 0], [0, 0]]), tmp_path / "b.mtx")
        code, out = run(capsys, "check", a, b)
        assert code == EXIT_OK
        assert out["psim"] is False and out["divergence_iter"] == 1

    def test_direct_sum_and_primes(self, capsys, petersen_files, tmp_path):
        a, b = petersen_files
        code, out = run(capsys, "check", a, b, "--engine", "primes")
        assert code == EXIT_OK and out["psim"] is True
        C5 = np.roll(np.eye(5, dtype=int), 1, axis=1)
        a = write_matrix(C5 + C5.T, tmp_path / "c5.csv")
        b = write_matrix(permuted_copy(C5 + C5.T, np.array([2, 0, 4, 1, 3])), tmp_path / "c5p.csv")
        code, out = run(capsys, "check", a, b, "--direct-sum", "--max-iters", "10")
        assert code == EXIT_OK and out["mode"] == "direct-sum" and out["psim"] is True

    def test_trace_stream(self, capsys, petersen_files, tmp_path):
        a, b = petersen_files
        trace = tmp_path / "trace.jsonl"
        code, out = run(capsys, "check", a, b, "--trace", trace)
        lines = [json.loads(x) for x in trace.read_text().splitlines()]
        assert code == EXIT_OK
        assert len(lines) == out["iterations"]
        assert set(lines[0]) >= {"iteration", "symbols_S", "symbols_T", "mixes_equal", "stable_S", "stable_T"}

    def test_figures(self, capsys, petersen_files, tmp_path):
        a, b = petersen_files
        figs = tmp_path / "figs"
        code, out = run(capsys, "check", a, b, "--figures", figs)
        assert code == EXIT_OK
        names = {p.name for p in figs.iterdir()}
        assert {"trace.csv", "trajectory.png", "pattern_S.png", "pattern_T.png"} <= names
        assert (figs / "trajectory.png").read_bytes()[:4] == b"\x89PNG"

    def test_inconclusive(self, capsys, petersen_files):
        a, _ = petersen_files
        assert main(["check", str(a), str(a), "--max-iters", "1"]) == EXIT_INCONCLUSIVE

    def test_missing_file(self, capsys, tmp_path):
        assert main(["check", str(tmp_path / "nope.csv"), str(tmp_path / "nope.csv")]) == EXIT_INPUT

    def test_malformed_file(self, capsys, tmp_path):
        bad = tmp_path / "bad.dimacs"
        bad.write_text("p edge 2 1\ne 1 3\n")
        assert main(["check", str(bad), str(bad)]) == EXIT_INPUT
        assert "outside" in capsys.readouterr().err

    def test_dimension_mismatch(self, capsys, tmp_path):
        a = write_matrix(np.eye(2, dtype=int), tmp_path / "a.csv")
        b = write_matrix(np.eye(3, dtype=int), tmp_path / "b.csv")
        assert main(["check", str(a), str(b)]) == EXIT_INPUT


class TestOtherCommands:
    def test_find_perm(self, capsys, petersen_files):
        a, b = petersen_files
        code, out = run(capsys, "find-perm", a, b)
        assert code == EXIT_OK and out["verified"] is True
        p = np.array(out["perm"]) - 1
        G = petersen_graph()
        assert np.array_equal(G[np.ix_(p, p)], parse_input(b).matrix)

    def test_orbits(self, capsys, tmp_path):
        f = write_matrix(np.ones((3, 3), dtype=int), tmp_path / "j.csv")
        code, out = run(capsys, "orbits", f)
        assert code == EXIT_OK and out["cells"] == 2
        code, out = run(capsys, "orbits", f, "--pcm", "--symmetric")
        assert out["cells"] == 10

    def test_espp(self, capsys, tmp_path):
        f = write_matrix(np.eye(3, dtype=int), tmp_path / "i.csv")
        code, out = run(capsys, "espp", f)
        assert code == EXIT_OK and out["cells"] == 2

    def test_wspm_verify(self, capsys, tmp_path):
        f = write_matrix(np.array([[0, 1, 1], [1, 0, 2], [1, 2, 0]]), tmp_path / "w.csv")
        code, out = run(capsys, "wspm-verify", f)
        assert code == EXIT_OK and out["passed"] is True and out["recolored"] is False
        g = write_matrix(np.array([[1, 1, 2], [1, 1, 2], [2, 2, 1]]), tmp_path / "g.csv")
        code, out = run(capsys, "wspm-verify", g)
        assert code == EXIT_OK and out["passed"] is True and out["recolored"] is True

    def test_wspm_verify_non_symmetric(self, capsys, tmp_path):
        f = write_matrix(np.array([[0, 1], [2, 0]]), tmp_path / "w.csv")
        assert main(["wspm-verify", str(f)]) == EXIT_INPUT

    def test_validate(self, capsys, tmp_path):
        out_dir = tmp_path / "report"
        code, out = run(capsys, "validate", "--cap", "3", "--trials", "4", "--wspm-trials", "3",
                        "--out", out_dir, "--figures")
        assert code == EXIT_OK and out["passed"] is True
        names = {p.name for p in out_dir.iterdir()}
        assert {"report.json", "summary.csv", "campaigns.png", "iterations.png"} <= names
        report = json.loads((out_dir / "report.json").read_text())
        assert set(report["summary"]) == {"permuted", "oracle", "witness", "orbits", "wspm"}

    def test_validate_degenerate(self, capsys):
        code, out = run(capsys, "validate", "--cap", "1", "--trials", "2", "--wspm-trials", "1")
        assert code == EXIT_OK and out["counterexamples"] == 0

    def test_figures_need_out(self, capsys):
        assert main(["validate", "--figures"]) == EXIT_INPUT

    def test_exit_code_constants(self):
        assert (EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE, EXIT_INVARIANT) == (0, 2, 3, 4)
