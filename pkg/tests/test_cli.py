import json

import pytest

from eqsplit.cli import main
from eqsplit.graph import complete_graph, to_edge_list_text


@pytest.fixture
def k4_file(tmp_path):
    path = tmp_path / "k4.edges"
    path.write_text(to_edge_list_text(complete_graph(4)))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExactMode:
    def test_k4(self, capsys, k4_file):
        code, out, _ = run_cli(capsys, "--mode", "exact", "--input", k4_file)
        assert code == 0
        record = json.loads(out)
        assert record["k"] == 2
        assert record["checker"] == "pass"

    def test_missing_input(self, capsys):
        code, _, err = run_cli(capsys, "--mode", "exact")
        assert code == 2
        assert "error" in err

    def test_malformed_file(self, capsys, tmp_path):
        bad = tmp_path / "bad.edges"
        bad.write_text("3 1\n0 5\n")
        code, _, err = run_cli(capsys, "--mode", "exact", "--input", str(bad))
        assert code == 2
        assert "line 2" in err


class TestDpMode:
    def test_c4_family(self, capsys):
        code, out, _ = run_cli(capsys, "--mode", "dp-split", "--family", "cycle:n=4")
        assert code == 0
        record = json.loads(out)
        assert record["splittable"] is True

    def test_odd_graph(self, capsys):
        code, out, _ = run_cli(capsys, "--mode", "dp-split", "--family", "path:n=5")
        assert code == 0
        assert json.loads(out)["reason"] == "odd order"


class TestRandomizedMode:
    def test_gnp(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "--mode", "randomized",
            "--family", "gnp:n=300,p=0.5,seed=7",
            "--epsilon", "0.1",
            "--seed", "1",
        )
        assert code == 0
        record = json.loads(out)
        assert record["k"] >= 120
        assert record["checker"] == "pass"

    def test_trace_flag(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "--mode", "randomized",
            "--family", "forest:n=100,seed=2",
            "--trace",
        )
        assert code == 0
        record = json.loads(out)
        assert record["traces"]
        assert "branch" in record["traces"][0]

    def test_env_seed_override(self, capsys, monkeypatch):
        monkeypatch.setenv("SPLIT_SEED", "42")
        code1, out1, _ = run_cli(
            capsys, "--mode", "randomized", "--family", "gnp:n=200,p=0.3,seed=1", "--seed", "0"
        )
        monkeypatch.delenv("SPLIT_SEED")
        code2, out2, _ = run_cli(
            capsys, "--mode", "randomized", "--family", "gnp:n=200,p=0.3,seed=1", "--seed", "42"
        )
        r1, r2 = json.loads(out1), json.loads(out2)
        r1.pop("ms"), r2.pop("ms")
        assert r1 == r2

    def test_bad_env_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("SPLIT_SEED", "forty")
        code, _, err = run_cli(capsys, "--mode", "exact", "--family", "cycle:n=4")
        assert code == 2


class TestMinDeletionMode:
    def test_triangle_plus_isolated(self, capsys):
        code, out, _ = run_cli(
            capsys, "--mode", "min-deletion", "--family", "odd_cliques:sizes=3,seed=0", "--budget", "3"
        )
        assert code == 0
        record = json.loads(out)
        assert len(record["deleted"]) == 1  # K3 minus one vertex is splittable


class TestVerifyClaims:
    def test_single_claim(self, capsys):
        code, out, _ = run_cli(
            capsys, "--mode", "verify-claims", "--claim", "binparity",
            "--trials", "100000", "--seed", "3",
        )
        assert code == 0
        verdicts = json.loads(out)
        assert verdicts[0]["claim"] == "binparity"
        assert verdicts[0]["holds"] is True

    def test_deterministic_bytes(self, capsys):
        args = ("--mode", "verify-claims", "--claim", "bernstein", "--trials", "20000", "--seed", "5")
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2


class TestSweep:
    def test_row_count_and_header(self, capsys):
        families = []
        for n in (30, 40):
            for seed in range(2):
                families += ["--family", f"gnp:n={n},p=0.5,seed={seed}"]
        code, out, _ = run_cli(capsys, "--mode", "sweep", *families, "--jobs", "1")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "family,n,seed,k,gap,deletions,branch,ms"
        assert len(lines) == 5

    def test_exact_rows_match_oracle(self, capsys):
        from eqsplit.generators import FamilySpec, generate
        from eqsplit.oracle import exact_f

        code, out, _ = run_cli(
            capsys, "--mode", "sweep", "--family", "gnp:n=10,p=0.5,seed=3", "--jobs", "1"
        )
        assert code == 0
        row = out.strip().splitlines()[1].split(",")
        g = generate(FamilySpec.parse("gnp:n=10,p=0.5,seed=3"))
        assert int(row[3]) == exact_f(g).k
        assert row[6] == "exact"

    def test_needs_family(self, capsys):
        code, _, err = run_cli(capsys, "--mode", "sweep")
        assert code == 2

    def test_out_file(self, capsys, tmp_path):
        out_path = tmp_path / "rows.csv"
        code, out, _ = run_cli(
            capsys, "--mode", "sweep", "--family", "path:n=8,seed=0",
            "--jobs", "1", "--out", str(out_path),
        )
        assert code == 0
        assert out == ""
        assert out_path.read_text().startswith("family,")


class TestUsage:
    def test_unknown_mode(self, capsys):
        assert run_cli(capsys, "--mode", "magic")[0] == 2

    def test_both_input_and_family(self, capsys, k4_file):
        code, _, err = run_cli(
            capsys, "--mode", "exact", "--input", k4_file, "--family", "cycle:n=4"
        )
        assert code == 2
