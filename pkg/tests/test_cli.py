import os

import numpy as np
import pytest

from jointfold.cli import main
from jointfold.ioutil import atomic_write, fmt_prob, read_matrix_tsv


@pytest.fixture
def tiny(data_dir):
    return ["--r-msa", str(data_dir / "tiny_r.fasta"), "--s-msa", str(data_dir / "tiny_s.fasta")]


@pytest.fixture
def pairing(data_dir):
    return ["--r-msa", str(data_dir / "pairing_r.fasta"),
            "--s-msa", str(data_dir / "pairing_s.fasta")]


def test_probs_two_by_two(tiny, tmp_path):
    assert main(["probs", *tiny, "--zero-energy", "--out", str(tmp_path)]) == 0
    text = (tmp_path / "p_ext.tsv").read_text()
    assert text.splitlines()[0] == "i\tj\tp"
    assert "1\t1\t0.5" in text.splitlines()
    pe = read_matrix_tsv(text, (2, 2))
    assert pe == pytest.approx(np.eye(2) * 0.5)
    hy = (tmp_path / "hybrids.tsv").read_text().splitlines()
    assert hy == ["i\tj\th\tl\tp", "1\t2\t1\t2\t0.5"]
    for name in ("p_interior_r.tsv", "p_interior_s.tsv"):
        assert (tmp_path / name).exists()


def test_fold_all_blocked(pairing, tmp_path):
    cons = tmp_path / "c.txt"
    cons.write_text("x" * 8 + "\n" + "x" * 6 + "\n")
    out = tmp_path / "o"
    out.mkdir()
    assert main(["fold", *pairing, "--constraints", str(cons), "--out", str(out)]) == 0
    lines = (out / "fold.txt").read_text().splitlines()
    assert lines[0] == "z\t1" and lines[1] == "free_energy\t0.000000"
    assert lines[-2:] == ["." * 8, "." * 6]


def test_sample_is_byte_identical(pairing, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir(), b.mkdir()
    for d in (a, b):
        assert main(["sample", *pairing, "--samples", "200", "--seed", "5", "--out", str(d)]) == 0
    assert (a / "samples.txt").read_bytes() == (b / "samples.txt").read_bytes()
    blocks = (a / "samples.txt").read_text().split(">")[1:]
    assert len(blocks) == 200


def test_enumerate_and_plot(tiny, tmp_path):
    assert main(["enumerate", *tiny, "--zero-energy", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "enumerate.txt").read_text().count(">") == 2
    assert main(["plot", *tiny, "--zero-energy", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "dotplot.svg").read_text().startswith("<svg")


def test_params_file(tiny, tmp_path):
    p = tmp_path / "p.txt"
    p.write_text("hybrid_init=-1.0\nbstar_ext=0\n")
    assert main(["fold", *tiny, "--params", str(p), "--out", str(tmp_path)]) == 0
    p.write_text("rt=0\n")
    assert main(["fold", *tiny, "--params", str(p), "--out", str(tmp_path)]) == 1


def test_usage_errors(tiny, tmp_path, capsys):
    with pytest.raises(SystemExit) as e:
        main(["fold", *tiny, "--out", str(tmp_path / "missing")])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["fold", "--r-msa", str(tmp_path / "nope.fa"), "--s-msa", "x", "--out", str(tmp_path)])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["bogus"])
    assert e.value.code == 2


def test_data_errors_exit_one(tmp_path, capsys):
    r = tmp_path / "r.fa"
    s = tmp_path / "s.fa"
    r.write_text(">a|t1\nACGU\n")
    s.write_text(">b|t2\nACGU\n")
    assert main(["fold", "--r-msa", str(r), "--s-msa", str(s), "--out", str(tmp_path)]) == 1
    assert "t1" in capsys.readouterr().err
    s.write_text(">b|t1\nAC\n>c|t1\nACG\n")
    assert main(["fold", "--r-msa", str(r), "--s-msa", str(s), "--out", str(tmp_path)]) == 1
    s.write_text(">b|t1\nACGU\n")
    c = tmp_path / "c.txt"
    c.write_text("(...\n....\n")
    assert main(["fold", "--r-msa", str(r), "--s-msa", str(s), "--constraints", str(c),
                 "--out", str(tmp_path)]) == 1


def test_atomic_write_leaves_no_temp(tmp_path):
    target = tmp_path / "f.txt"
    atomic_write(target, "one")
    atomic_write(target, "two")
    assert target.read_text() == "two"
    assert os.listdir(tmp_path) == ["f.txt"]


def test_fmt_prob():
    assert fmt_prob(0.5) == "0.5" and fmt_prob(1e-13) == "0" and fmt_prob(1 / 3) == "0.333333333333"
