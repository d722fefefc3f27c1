"""Reader for the flat ``key=value`` parameter files."""
from __future__ import annotations

import os

from .errors import ParamsError


def read_kv(source) -> dict[str, str]:
    """Parse ``key=value`` lines. ``source`` is a path or the text itself.

    Blank lines and ``#`` comments are skipped.
    """
    if source is None:
        return {}
    if isinstance(source, os.PathLike) or (isinstance(source, str) and "\n" not in source
                                           and "=" not in source and os.path.exists(source)):
        with open(source) as fh:
            text = fh.read()
    else:
        text = str(source)
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParamsError(f"line {lineno}: expected key=value, got {raw!r}")
        key, val = (x.strip() for x in line.split("=", 1))
        if not key or not val:
            raise ParamsError(f"line {lineno}: empty key or value in {raw!r}")
        out[key] = val
    return out


def as_float(key: str, val: str) -> float:
    try:
        return float(val)
    except ValueError:
        raise ParamsError(f"{key}: not a number: {val!r}") from None
