"""Atomic text output and TSV helpers."""
from __future__ import annotations

import os
import tempfile

import numpy as np


def atomic_write(path, text: str) -> None:
    """Write to a temp file in the target directory, then rename over path."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def fmt_prob(p: float) -> str:
    """12 significant digits; anything below 1e-12 prints as 0."""
    return "0" if abs(p) < 1e-12 else f"{p:.12g}"


def matrix_tsv(mat: np.ndarray, upper: bool) -> str:
    lines = ["i\tj\tp"]
    n, m = mat.shape
    for i in range(n):
        for j in range(i + 1 if upper else 0, m):
            lines.append(f"{i + 1}\t{j + 1}\t{fmt_prob(float(mat[i, j]))}")
    return "\n".join(lines) + "\n"


def read_matrix_tsv(text: str, shape) -> np.ndarray:
    out = np.zeros(shape)
    rows = text.strip().splitlines()
    for line in rows[1:]:
        i, j, p = line.split("\t")
        out[int(i) - 1, int(j) - 1] = float(p)
    return out
