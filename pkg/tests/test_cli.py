import csv
import io

import pytest

from qpack.cli import CSV_FIELDS, checksum, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_mulpoly_fqt_cost(capsys):
    code, out, _ = run(capsys, "mulpoly", "--p", "3", "--n", "500", "--d", "4", "--algo", "fqt", "--seed", "42")
    assert code == 0
    assert out.splitlines()[0] == ",".join(CSV_FIELDS)
    (row,) = rows(out)
    assert row["mul_add"] == "40401"
    assert (row["q"], row["k"], row["d"], row["N"], row["n_d"]) == ("32", "5", "4", "500", "")


def test_mulpoly_checksums_agree(capsys):
    sums = set()
    for algo in ["fqt", "delayed", "oracle"]:
        code, out, _ = run(capsys, "mulpoly", "--p", "5", "--n", "120", "--algo", algo, "--seed", "7")
        assert code == 0
        sums.add(rows(out)[0]["checksum"])
    assert len(sums) == 1


def test_mulpoly_fixed_input(capsys):
    code, out, _ = run(capsys, "mulpoly", "--p", "3", "--n", "1", "--algo", "oracle", "--a", "1,1", "--b", "2,1")
    assert code == 0
    assert rows(out)[0]["checksum"] == str(checksum([2, 0, 1]))


def test_mulpoly_bad_params(capsys):
    code, _, err = run(capsys, "mulpoly", "--p", "4")
    assert code == 2 and "not prime" in err
    code, _, err = run(capsys, "mulpoly", "--p", "3", "--d", "12")
    assert code == 2 and "error" in err
    code, _, err = run(capsys, "mulpoly", "--p", "4294967291", "--algo", "delayed", "--m", "24")
    assert code == 2


def test_mulpoly_csv_append(tmp_path, capsys):
    path = tmp_path / "bench.csv"
    for seed in ["1", "2"]:
        assert main(["mulpoly", "--p", "7", "--n", "30", "--seed", seed, "--repeat", "2", "--csv", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(CSV_FIELDS)
    assert len(lines) == 5
    assert sum(line.startswith("algo") for line in lines) == 1


def test_csv_deterministic_apart_from_time(tmp_path):
    outs = []
    for name in ["a.csv", "b.csv"]:
        path = tmp_path / name
        main(["mulpoly", "--p", "3", "--n", "50", "--seed", "9", "--csv", str(path)])
        main(["gfq", "--p", "3", "--k", "2", "--len", "30", "--seed", "9", "--csv", str(path)])
        outs.append([{k: v for k, v in r.items() if k != "wall_time_ns"} for r in rows(path.read_text())])
    assert outs[0] == outs[1]


def test_paper_examples(capsys):
    code, out, _ = run(capsys, "paper-examples")
    assert code == 0
    assert "FAIL" not in out
    code2, out2, _ = run(capsys, "paper-examples")
    assert out2 == out


def test_paper_examples_fault(capsys):
    code, out, _ = run(capsys, "paper-examples", "--inject-fault")
    assert code != 0
    assert "FAIL" in out and "expected" in out


def test_gfq_dot(capsys):
    code, out, err = run(capsys, "gfq", "--p", "3", "--k", "2", "--op", "dot", "--len", "100")
    assert code == 0
    fast, naive = rows(out)
    assert fast["algo"] == "fgdp" and naive["algo"] == "naive_dot"
    assert fast["checksum"] == naive["checksum"]
    n_q = int(fast["n_q"])
    assert int(fast["divisions"]) == -(-100 // n_q)


def test_gfq_prime_field(capsys):
    code, out, _ = run(capsys, "gfq", "--p", "2", "--k", "1", "--len", "40")
    assert code == 0


def test_gfq_matmul(capsys):
    code, out, _ = run(capsys, "gfq", "--p", "3", "--k", "2", "--op", "matmul", "--len", "8")
    assert code == 0
    fast, naive = rows(out)
    assert fast["checksum"] == naive["checksum"]


def test_gfq_refusal(capsys):
    code, _, err = run(capsys, "gfq", "--p", "7", "--k", "8")
    assert code == 2
    assert "refused" in err and "5764801" in err


def test_checksum_order_sensitive():
    assert checksum([1, 2]) != checksum([2, 1])
    assert checksum([]) == 0xCBF29CE484222325
