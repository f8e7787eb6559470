"""Tests for the graphdist command line."""

import io
import json

import pandas as pd
import pytest

from app.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from app.services.generators.specs import ErSpec, read_spec_sidecar


def _run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _generate_er(capsys, path, n=40, p=0.3, seed=1, directed=False) -> str:
    argv = ["generate", "er", "--n", str(n), "--p", str(p), "--seed", str(seed), "--out", str(path)]
    if directed:
        argv.append("--directed")
    code, _, _ = _run(capsys, *argv)
    assert code == EXIT_OK
    return str(path)


# ---------- generate ----------


class TestGenerate:
    def test_er_writes_edge_list_and_sidecar(self, capsys, tmp_path):
        out = tmp_path / "er.txt"
        code, stdout, _ = _run(capsys, "generate", "er", "--n", "50", "--p", "0.2", "--seed", "7", "--out", str(out))
        assert code == EXIT_OK
        payload = json.loads(stdout)
        assert payload["nodes"] == 50
        assert payload["label"] == "ER 0.2"
        assert payload["spec_path"].endswith(".spec")
        assert out.exists()
        assert read_spec_sidecar(out) == ErSpec(n=50, p=0.2, seed=7)

    def test_sbm_with_explicit_blocks(self, capsys, tmp_path):
        out = tmp_path / "sbm.txt"
        code, stdout, _ = _run(
            capsys, "generate", "sbm", "--blocks", "10,15", "--pin", "0.9", "--pout", "0.1",
            "--directed", "--out", str(out),
        )
        assert code == EXIT_OK
        payload = json.loads(stdout)
        assert payload["nodes"] == 25
        assert payload["spec"]["directed"] is True

    def test_sbm_blocks_file(self, capsys, tmp_path):
        blocks = tmp_path / "blocks.txt"
        blocks.write_text("5, 6\n7\n", encoding="utf-8")
        out = tmp_path / "sbm.txt"
        code, stdout, _ = _run(
            capsys, "generate", "sbm", "--blocks-file", str(blocks), "--pin", "0.8", "--pout", "0.2",
            "--out", str(out),
        )
        assert code == EXIT_OK
        assert json.loads(stdout)["spec"]["block_sizes"] == [5, 6, 7]

    def test_sbm_bad_blocks_file(self, capsys, tmp_path):
        blocks = tmp_path / "blocks.txt"
        blocks.write_text("5 six\n", encoding="utf-8")
        code, _, stderr = _run(
            capsys, "generate", "sbm", "--blocks-file", str(blocks), "--pin", "0.8", "--pout", "0.2",
            "--out", str(tmp_path / "sbm.txt"),
        )
        assert code == EXIT_DATA
        assert "integers" in stderr

    def test_sbm_p_out_above_p_in_is_usage_error(self, capsys, tmp_path):
        code, _, _ = _run(
            capsys, "generate", "sbm", "--blocks", "5,5", "--pin", "0.1", "--pout", "0.9",
            "--out", str(tmp_path / "sbm.txt"),
        )
        assert code == EXIT_USAGE

    def test_cm(self, capsys, tmp_path):
        code, stdout, _ = _run(capsys, "generate", "cm", "--n", "200", "--seed", "3", "--out", str(tmp_path / "cm.txt"))
        assert code == EXIT_OK
        assert json.loads(stdout)["label"] == "CM200"

    def test_probability_out_of_range(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["generate", "er", "--n", "10", "--p", "1.5", "--out", str(tmp_path / "x.txt")])
        assert exc.value.code == EXIT_USAGE


# ---------- compare ----------


class TestCompare:
    def test_self_comparison(self, capsys, tmp_path):
        path = _generate_er(capsys, tmp_path / "g.txt")
        code, stdout, _ = _run(capsys, "compare", path, path)
        assert code == EXIT_OK
        payload = json.loads(stdout)
        assert payload["d"] == 0.0
        assert payload["p"] == 1.0
        assert payload["n1"] == payload["n2"] == 40 * 39 // 2

    def test_emit_cdf_and_hist(self, capsys, tmp_path):
        a = _generate_er(capsys, tmp_path / "a.txt", p=0.2, seed=1)
        b = _generate_er(capsys, tmp_path / "b.txt", p=0.4, seed=2)
        prefix = str(tmp_path / "plot")
        code, stdout, _ = _run(capsys, "compare", a, b, "--emit-cdf", prefix, "--emit-hist", prefix, "--bins", "20")
        assert code == EXIT_OK
        assert json.loads(stdout)["d"] > 0.0
        for i in (1, 2):
            assert len(pd.read_csv(f"{prefix}.g{i}.cdf.csv")) == 101
            assert len(pd.read_csv(f"{prefix}.g{i}.hist.csv")) == 20

    def test_no_sidecar_and_no_flag(self, capsys, write_edges):
        path = str(write_edges("0 1\n1 2\n"))
        code, _, stderr = _run(capsys, "compare", path, path)
        assert code == EXIT_USAGE
        assert "--directed or --undirected" in stderr

    def test_explicit_flag_without_sidecar(self, capsys, write_edges):
        path = str(write_edges("0 1\n1 2\n"))
        code, stdout, _ = _run(capsys, "compare", path, path, "--undirected")
        assert code == EXIT_OK
        assert json.loads(stdout)["d"] == 0.0

    def test_sidecars_disagree(self, capsys, tmp_path):
        a = _generate_er(capsys, tmp_path / "a.txt")
        b = _generate_er(capsys, tmp_path / "b.txt", directed=True)
        code, _, stderr = _run(capsys, "compare", a, b)
        assert code == EXIT_USAGE
        assert "disagree" in stderr

    def test_malformed_file_reports_line(self, capsys, write_edges):
        path = str(write_edges("0 1\n1 2 3\n"))
        code, _, stderr = _run(capsys, "compare", path, path, "--undirected")
        assert code == EXIT_DATA
        assert ":2:" in stderr

    def test_missing_file(self, capsys, tmp_path):
        missing = str(tmp_path / "nope.txt")
        code, _, _ = _run(capsys, "compare", missing, missing, "--undirected")
        assert code == EXIT_DATA


# ---------- sensitivity / reproduce ----------


class TestSensitivity:
    def test_zero_fraction_row(self, capsys, tmp_path):
        path = _generate_er(capsys, tmp_path / "g.txt")
        code, stdout, _ = _run(capsys, "sensitivity", path, "--kind", "node", "--fractions", "0")
        assert code == EXIT_OK
        df = pd.read_csv(io.StringIO(stdout), keep_default_na=False)
        assert len(df) == 1
        assert df["d_statistic"].iloc[0] == 0.0
        assert df["p_value"].iloc[0] == 1.0
        assert df["row"].iloc[0] == "g"

    def test_seeds_and_summary(self, capsys, tmp_path):
        path = _generate_er(capsys, tmp_path / "g.txt")
        out, summary = tmp_path / "sens.csv", tmp_path / "summary.csv"
        code, _, _ = _run(
            capsys, "sensitivity", path, "--kind", "edge", "--fractions", "0,0.1", "--seeds", "1,2,3",
            "--out", str(out), "--summary-out", str(summary),
        )
        assert code == EXIT_OK
        assert len(pd.read_csv(out)) == 6
        summary_df = pd.read_csv(summary)
        assert len(summary_df) == 2
        assert (summary_df["reps"] == 3).all()

    def test_bad_fraction_list(self, capsys, tmp_path):
        path = _generate_er(capsys, tmp_path / "g.txt")
        with pytest.raises(SystemExit) as exc:
            main(["sensitivity", path, "--kind", "node", "--fractions", "0,2"])
        assert exc.value.code == EXIT_USAGE


class TestReproduce:
    def test_small_synthetic_table(self, capsys, tmp_path):
        out = tmp_path / "t3.csv"
        code, _, _ = _run(capsys, "reproduce", "t3", "--n", "30", "--seed", "5", "--out", str(out))
        assert code == EXIT_OK
        df = pd.read_csv(out, keep_default_na=False)
        assert len(df) == 24
        zero = df[df["fraction"] == 0.0]
        assert (zero["check"] == "pass").all()

    def test_missing_dataset(self, capsys):
        code, _, stderr = _run(capsys, "reproduce", "rw-edges")
        assert code == EXIT_DATA
        assert "--dataset" in stderr

    def test_unknown_dataset_name(self):
        with pytest.raises(SystemExit) as exc:
            main(["reproduce", "rw-edges", "--dataset", "imdb=imdb.txt"])
        assert exc.value.code == EXIT_USAGE

    def test_unknown_table(self):
        with pytest.raises(SystemExit) as exc:
            main(["reproduce", "t7"])
        assert exc.value.code == EXIT_USAGE


# ---------- lcc / dist / drift ----------


class TestLcc:
    def test_extracts_component(self, capsys, tmp_path, write_edges):
        path = str(write_edges("0 1\n1 2\n5 6\n"))
        out = tmp_path / "lcc.txt"
        code, stdout, _ = _run(capsys, "lcc", path, "--undirected", "--out", str(out))
        assert code == EXIT_OK
        payload = json.loads(stdout)
        assert (payload["nodes"], payload["edges"], payload["source_nodes"]) == (3, 2, 5)
        assert out.exists()


class TestDist:
    def test_writes_all_outputs(self, capsys, tmp_path):
        path = _generate_er(capsys, tmp_path / "g.txt", n=20)
        dist, hist, cdf = tmp_path / "d.csv", tmp_path / "h.csv", tmp_path / "c.csv"
        code, stdout, _ = _run(
            capsys, "dist", path, "--out", str(dist), "--hist", str(hist), "--cdf", str(cdf), "--grid", "11",
        )
        assert code == EXIT_OK
        assert json.loads(stdout)["count"] == 190
        assert len(pd.read_csv(dist)) == 190
        assert len(pd.read_csv(hist)) == 100
        assert len(pd.read_csv(cdf)) == 11
        assert (tmp_path / "d.json").exists()


class TestDrift:
    def test_flags_changed_snapshot(self, capsys, tmp_path):
        a = _generate_er(capsys, tmp_path / "day1.txt", p=0.3, seed=1)
        b = _generate_er(capsys, tmp_path / "day2.txt", p=0.3, seed=1)
        c = _generate_er(capsys, tmp_path / "day3.txt", p=0.05, seed=2)
        code, stdout, _ = _run(capsys, "drift", a, b, c)
        assert code == EXIT_OK
        df = pd.read_csv(io.StringIO(stdout))
        assert df["to"].tolist() == ["day2", "day3"]
        assert df["flagged"].tolist() == [False, True]

    def test_needs_two_graphs(self, capsys, tmp_path):
        a = _generate_er(capsys, tmp_path / "day1.txt")
        code, _, _ = _run(capsys, "drift", a)
        assert code == EXIT_USAGE
