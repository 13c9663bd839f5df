import json

import pytest

from sdskit import cli, hadamard

GOOD_CORPUS = """\
entry demo-7
params v=7 k=2,2,2 lambda=1
status verified
provenance worked example
block 0 1
block 0 2
block 0 3
end
"""

BAD_CORPUS = GOOD_CORPUS.replace("block 0 3", "block 0 5")


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParams:
    def test_v7(self, capsys):
        code, out, _ = run(capsys, "params", "7")
        assert code == cli.EXIT_OK
        assert out.count("\n") == 2  # (3,3,1) and (2,2,2)

    def test_v239_json(self, capsys):
        code, out, _ = run(capsys, "params", "239", "--format", "json")
        assert code == cli.EXIT_OK
        rows = json.loads(out)
        assert {"v": 239, "k": [119, 112, 106], "lambda": 158, "n": 179} in rows

    def test_bad_modulus(self, capsys):
        code, _, err = run(capsys, "params", "12")
        assert code == cli.EXIT_BAD_INPUT
        assert "error" in err

    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["params"])
        assert exc.value.code == cli.EXIT_USAGE
        with pytest.raises(SystemExit) as exc:
            cli.main(["frobnicate"])
        assert exc.value.code == cli.EXIT_USAGE


class TestVerify:
    def test_catalog_id_pass(self, capsys):
        code, out, _ = run(capsys, "verify", "--id", "appx-11-4-4-3")
        assert code == cli.EXIT_OK
        assert "appx-11-4-4-3: PASS lambda=3" in out

    def test_unknown_id(self, capsys):
        code, _, err = run(capsys, "verify", "--id", "nope")
        assert code == cli.EXIT_BAD_INPUT

    def test_file_pass(self, capsys, tmp_path):
        f = tmp_path / "good.txt"
        f.write_text(GOOD_CORPUS)
        code, out, _ = run(capsys, "verify", "--file", str(f))
        assert code == cli.EXIT_OK
        assert "PASS" in out

    def test_tampered_file_fails(self, capsys, tmp_path):
        f = tmp_path / "bad.txt"
        f.write_text(BAD_CORPUS)
        code, out, _ = run(capsys, "verify", "--file", str(f))
        assert code == cli.EXIT_VERIFY_FAIL
        assert "FAIL" in out

    def test_wrong_lambda_fails(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--id", "appx-11-4-4-3", "--lambda", "4"
        )
        assert code == cli.EXIT_VERIFY_FAIL
        assert "worst deviation" in out

    def test_open_entry_skipped(self, capsys):
        code, out, _ = run(capsys, "verify", "--id", "open-107-49-48-46")
        assert code == cli.EXIT_OK
        assert "SKIP" in out


class TestSearch:
    def test_finds_and_appends(self, capsys, tmp_path):
        out_file = tmp_path / "found.txt"
        code, out, _ = run(
            capsys, "search", "19", "9,7,6", "--q", "3", "--seed", "1",
            "--out", str(out_file),
        )
        assert code == cli.EXIT_OK
        assert "found " in out
        from sdskit import catalog

        (e,) = catalog.load_catalog(out_file.read_text(), verify=True)
        assert e.params.sizes == (9, 7, 6)

    def test_infeasible(self, capsys):
        code, out, _ = run(
            capsys, "search", "107", "49,48,46", "--q", "53", "--seed", "0"
        )
        assert code == cli.EXIT_BAD_INPUT
        assert "infeasible" in out
        assert out.count("divides neither") == 3

    def test_q_not_dividing_group_order(self, capsys):
        code, _, err = run(
            capsys, "search", "107", "49,48,46", "--q", "3", "--seed", "0"
        )
        assert code == cli.EXIT_BAD_INPUT
        assert "does not divide" in err

    def test_no_integral_lambda(self, capsys):
        code, _, err = run(capsys, "search", "13", "3,2", "--q", "3")
        assert code == cli.EXIT_BAD_INPUT

    def test_seed_printed_when_omitted(self, capsys):
        code, out, _ = run(
            capsys, "search", "19", "9,7,6", "--q", "3", "--budget", "1000"
        )
        assert code == cli.EXIT_OK
        assert out.startswith("seed: ")

    def test_skew_gs(self, capsys):
        code, out, _ = run(
            capsys, "search", "19", "9,9,7,6", "--q", "3", "--seed", "1",
            "--skew-gs",
        )
        assert code == cli.EXIT_OK
        assert "found " in out


class TestHadamard:
    def test_section4_entry(self, capsys, tmp_path):
        out_file = tmp_path / "h1324.txt"
        code, out, _ = run(
            capsys, "hadamard", "--id", "gs1324-family1", "--out", str(out_file)
        )
        assert code == cli.EXIT_OK
        assert "PASS skew-Hadamard of order 1324" in out
        m = hadamard.read_matrix(out_file)
        assert m.n == 1324

    def test_section3_entry_with_paley_todd(self, capsys):
        code, out, _ = run(
            capsys, "hadamard", "--id", "gs956-family1", "--paley-todd"
        )
        assert code == cli.EXIT_OK
        assert "PASS skew-Hadamard of order 956" in out

    def test_three_block_entry_fails(self, capsys):
        code, out, _ = run(capsys, "hadamard", "--id", "appx-11-4-4-3")
        assert code == cli.EXIT_HADAMARD_FAIL
        assert "need 4 blocks" in out

    def test_non_skew_first_block_fails(self, capsys, tmp_path):
        f = tmp_path / "fam.txt"
        f.write_text(
            "entry flat\n"
            "params v=3 k=2,1,1,0 lambda=1\n"
            "status verified\n"
            "provenance test\n"
            "block 1 2\nblock 0\nblock 0\nblock\n"
            "end\n"
        )
        code, out, _ = run(capsys, "hadamard", "--file", str(f))
        assert code == cli.EXIT_HADAMARD_FAIL
        assert "FAIL" in out


class TestEquiv:
    def test_pairwise_output(self, capsys):
        code, out, _ = run(
            capsys, "equiv", "gs956-family1", "gs956-family2", "gs956-family3"
        )
        assert code == cli.EXIT_OK
        assert out.count("NONEQUIVALENT") == 3

    def test_equivalent_copies(self, capsys, tmp_path):
        f = tmp_path / "pair.txt"
        f.write_text(
            "entry a\n"
            "params v=7 k=3 lambda=1\n"
            "status verified\nprovenance test\n"
            "block 0 1 3\nend\n"
            "entry b\n"
            "params v=7 k=3 lambda=1\n"
            "status verified\nprovenance test\n"
            "block 0 2 6\nend\n"
        )
        code, out, _ = run(capsys, "equiv", str(f))
        assert code == cli.EXIT_OK
        assert "EQUIVALENT" in out and "NONEQUIVALENT" not in out


class TestTable1:
    def test_text(self, capsys):
        code, out, _ = run(capsys, "table1")
        assert code == cli.EXIT_OK
        lines = [l for l in out.splitlines() if l.startswith("v=")]
        assert len(lines) == 36
        assert "MISMATCH" not in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "table1", "--format", "json")
        assert code == cli.EXIT_OK
        rows = json.loads(out)
        assert len(rows) == 36
        assert sum(r["status"] == "yes" for r in rows) == 28
