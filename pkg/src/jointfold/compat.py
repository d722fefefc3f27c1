"""Covariance pair scores, compatibility masks and structure constraints.

Positions in the public API are 1-based; the boolean mask arrays are
0-based (entry ``[i-1, j-1]`` gates the arc between positions i and j).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, fields

import numpy as np

from .alignio import GAP, PairedAlignment
from .errors import BoundsError, ConstraintError, ParamsError
from .kvfile import as_float, read_kv

PAIRS = ("AU", "UA", "GC", "CG", "GU", "UG")

# pair type index for two symbol codes (A=0, C=1, G=2, U=3, gap=4); -1 if not a WC/GU pair
PAIR_TYPE = np.full((5, 5), -1, dtype=np.int64)
for _k, _p in enumerate(PAIRS):
    PAIR_TYPE["ACGU".index(_p[0]), "ACGU".index(_p[1])] = _k

# Hamming distance between valid pair types
_HAM = np.array([[sum(a != b for a, b in zip(p, q)) for q in PAIRS] for p in PAIRS],
                dtype=np.int64)


class Side(enum.Enum):
    R = "R"
    S = "S"
    Ext = "Ext"


@dataclass(frozen=True)
class FoldParams:
    phi1: float = 1.0
    bstar_r: float = -0.25
    bstar_s: float = -0.25
    bstar_ext: float = -0.25
    min_hairpin: int = 3

    def __post_init__(self):
        if self.phi1 < 0:
            raise ParamsError("phi1 must be non-negative")
        if self.min_hairpin < 0:
            raise ParamsError("min_hairpin must be non-negative")

    @classmethod
    def from_mapping(cls, kv: dict[str, str], strict: bool = False) -> "FoldParams":
        names = {f.name for f in fields(cls)}
        args = {}
        for key, val in kv.items():
            if key not in names:
                if strict:
                    raise ParamsError(f"unknown key {key!r}")
                continue
            if key == "min_hairpin":
                try:
                    args[key] = int(val)
                except ValueError:
                    raise ParamsError(f"min_hairpin: not an integer: {val!r}") from None
            else:
                args[key] = as_float(key, val)
        return cls(**args)


def load_fold_params(source) -> FoldParams:
    """Fold parameters from a key=value file; energy keys are ignored here."""
    return FoldParams.from_mapping(read_kv(source))


@dataclass
class CompatibilityMasks:
    interior_r: np.ndarray
    interior_s: np.ndarray
    exterior: np.ndarray
    must_pair_r: np.ndarray = None
    must_pair_s: np.ndarray = None

    def __post_init__(self):
        self.interior_r = np.triu(np.asarray(self.interior_r, dtype=bool), 1)
        self.interior_s = np.triu(np.asarray(self.interior_s, dtype=bool), 1)
        self.exterior = np.asarray(self.exterior, dtype=bool)
        n, m = self.exterior.shape
        if self.interior_r.shape != (n, n) or self.interior_s.shape != (m, m):
            raise BoundsError("mask shapes disagree")
        if self.must_pair_r is None:
            self.must_pair_r = np.zeros(n, dtype=bool)
        if self.must_pair_s is None:
            self.must_pair_s = np.zeros(m, dtype=bool)
        self.must_pair_r = np.asarray(self.must_pair_r, dtype=bool)
        self.must_pair_s = np.asarray(self.must_pair_s, dtype=bool)

    @property
    def n(self) -> int:
        return self.exterior.shape[0]

    @property
    def mlen(self) -> int:
        return self.exterior.shape[1]

    @classmethod
    def full(cls, n: int, m: int, min_hairpin: int = 3) -> "CompatibilityMasks":
        """Every arc allowed that respects the hairpin minimum."""
        def tri(k):
            i, j = np.indices((k, k))
            return (j - i) > min_hairpin
        return cls(tri(n), tri(m), np.ones((n, m), dtype=bool))

    @classmethod
    def empty(cls, n: int, m: int) -> "CompatibilityMasks":
        return cls(np.zeros((n, n), bool), np.zeros((m, m), bool), np.zeros((n, m), bool))

    def copy(self) -> "CompatibilityMasks":
        return CompatibilityMasks(self.interior_r.copy(), self.interior_s.copy(),
                                  self.exterior.copy(), self.must_pair_r.copy(),
                                  self.must_pair_s.copy())


@dataclass(frozen=True)
class ConstraintSet:
    """Per-position symbols plus explicit forced pairs (1-based).

    Symbols: '.' free, '-' no exterior arc, '^' no interior arc,
    'x' unpaired, '*' must pair.
    """
    r_line: str
    s_line: str
    forced_r: tuple = field(default=())
    forced_s: tuple = field(default=())
    forced_ext: tuple = field(default=())

    @classmethod
    def empty(cls, n: int, m: int) -> "ConstraintSet":
        return cls("." * n, "." * m)


_SYMBOLS = set(".x-^*")


def _match_parens(line: str, which: str) -> list[tuple[int, int]]:
    stack, out = [], []
    for k, ch in enumerate(line, 1):
        if ch == "(":
            stack.append(k)
        elif ch == ")":
            if not stack:
                raise ConstraintError(f"unbalanced ')' at {which} position {k}")
            out.append((stack.pop(), k))
        elif ch not in _SYMBOLS and ch not in "[]":
            raise ConstraintError(f"illegal constraint symbol {ch!r} on {which} line")
    if stack:
        raise ConstraintError(f"unbalanced '(' at {which} position {stack[-1]}")
    return sorted(out)


def parse_constraints(r_line: str, s_line: str) -> ConstraintSet:
    r_line = r_line.strip().replace("−", "-")
    s_line = s_line.strip().replace("−", "-")
    if "]" in r_line or "[" in s_line:
        raise ConstraintError("'[' belongs on the R line and ']' on the S line")
    fr = _match_parens(r_line, "R")
    fs = _match_parens(s_line, "S")
    opens = [k for k, ch in enumerate(r_line, 1) if ch == "["]
    closes = [k for k, ch in enumerate(s_line, 1) if ch == "]"]
    if len(opens) != len(closes):
        raise ConstraintError(f"{len(opens)} '[' on R but {len(closes)} ']' on S")
    strip = str.maketrans({c: "." for c in "()[]"})
    return ConstraintSet(r_line.translate(strip), s_line.translate(strip),
                         tuple(fr), tuple(fs), tuple(zip(opens, closes)))


def _columns(pa: PairedAlignment, side: Side, i: int, j: int):
    if side == Side.R:
        lim_a = lim_b = pa.n
        a, b = pa.rmatrix, pa.rmatrix
    elif side == Side.S:
        lim_a = lim_b = pa.mlen
        a, b = pa.smatrix, pa.smatrix
    else:
        lim_a, lim_b = pa.n, pa.mlen
        a, b = pa.rmatrix, pa.smatrix
    if not (1 <= i <= lim_a and 1 <= j <= lim_b):
        raise BoundsError(f"position ({i},{j}) out of range for side {side.value}")
    return a[:, i - 1].astype(np.int64), b[:, j - 1].astype(np.int64)


def _score_from_columns(x, y, m, phi1):
    pt = PAIR_TYPE[x, y]
    cnt = np.bincount(pt[pt >= 0], minlength=6)
    c = int(cnt @ _HAM @ cnt) / (m * m)
    good = int(np.sum(pt >= 0)) + int(np.sum((x == GAP) & (y == GAP)))
    q = (m - good) / m
    return c, q, c - phi1 * q


def pair_score(pa: PairedAlignment, side, i: int, j: int, p: FoldParams = FoldParams()):
    """Return (c, q, b) for columns i and j (1-based) on the given side."""
    side = Side(side) if not isinstance(side, Side) else side
    x, y = _columns(pa, side, i, j)
    return _score_from_columns(x, y, pa.m, p.phi1)


def score_matrix(a: np.ndarray, b: np.ndarray, phi1: float) -> np.ndarray:
    """All-pairs b-scores between the columns of a (m x N) and b (m x M)."""
    m = a.shape[0]
    pt = PAIR_TYPE[a.astype(np.int64)[:, :, None], b.astype(np.int64)[:, None, :]]
    onehot = np.stack([(pt == k).sum(axis=0) for k in range(6)]).astype(np.int64)
    c = np.einsum("pij,pq,qij->ij", onehot, _HAM, onehot) / (m * m)
    gg = ((a[:, :, None] == GAP) & (b[:, None, :] == GAP)).sum(axis=0)
    good = (pt >= 0).sum(axis=0) + gg
    q = (m - good) / m
    return c - phi1 * q


def score_masks(pa: PairedAlignment, p: FoldParams = FoldParams()) -> CompatibilityMasks:
    """Threshold masks before any constraint is applied."""
    br = score_matrix(pa.rmatrix, pa.rmatrix, p.phi1)
    bs = score_matrix(pa.smatrix, pa.smatrix, p.phi1)
    be = score_matrix(pa.rmatrix, pa.smatrix, p.phi1)
    ir, jr = np.indices(br.shape)
    is_, js = np.indices(bs.shape)
    mr = (br >= p.bstar_r) & ((jr - ir) > p.min_hairpin)
    ms = (bs >= p.bstar_s) & ((js - is_) > p.min_hairpin)
    return CompatibilityMasks(mr, ms, be >= p.bstar_ext)


def apply_constraints(masks: CompatibilityMasks, cs: ConstraintSet) -> CompatibilityMasks:
    """Restrict masks by a constraint set; raises ConstraintError on contradictions."""
    n, m = masks.n, masks.mlen
    if len(cs.r_line) != n or len(cs.s_line) != m:
        raise ConstraintError(
            f"constraint lengths ({len(cs.r_line)},{len(cs.s_line)}) != ({n},{m})")
    for line in (cs.r_line, cs.s_line):
        bad = set(line) - _SYMBOLS
        if bad:
            raise ConstraintError(f"illegal constraint symbols {sorted(bad)}")
    out = masks.copy()
    ir, is_, ex = out.interior_r, out.interior_s, out.exterior

    used_r, used_s = set(), set()
    for (i, j) in cs.forced_r:
        if not (1 <= i < j <= n):
            raise ConstraintError(f"forced R pair ({i},{j}) out of range")
        for k in (i, j):
            if k in used_r:
                raise ConstraintError(f"R position {k} carries two forced roles")
            used_r.add(k)
    for (h, l) in cs.forced_s:
        if not (1 <= h < l <= m):
            raise ConstraintError(f"forced S pair ({h},{l}) out of range")
        for k in (h, l):
            if k in used_s:
                raise ConstraintError(f"S position {k} carries two forced roles")
            used_s.add(k)
    for (i, j) in cs.forced_ext:
        if not (1 <= i <= n and 1 <= j <= m):
            raise ConstraintError(f"forced exterior pair [{i},{j}] out of range")
        if i in used_r or j in used_s:
            raise ConstraintError(f"forced exterior pair [{i},{j}] reuses a position")
        used_r.add(i)
        used_s.add(j)
    for fp in (cs.forced_r, cs.forced_s):
        for (a, b) in fp:
            for (c, d) in fp:
                if a < c < b < d:
                    raise ConstraintError(f"forced pairs ({a},{b}) and ({c},{d}) cross")
    fe = sorted(cs.forced_ext)
    for (a, b), (c, d) in zip(fe, fe[1:]):
        if d <= b:
            raise ConstraintError(f"forced exterior pairs [{a},{b}] and [{c},{d}] cross")

    for k, ch in enumerate(cs.r_line):
        if ch == "x":
            ir[k, :] = ir[:, k] = False
            ex[k, :] = False
        elif ch == "-":
            ex[k, :] = False
        elif ch == "^":
            ir[k, :] = ir[:, k] = False
        elif ch == "*":
            out.must_pair_r[k] = True
    for k, ch in enumerate(cs.s_line):
        if ch == "x":
            is_[k, :] = is_[:, k] = False
            ex[:, k] = False
        elif ch == "-":
            ex[:, k] = False
        elif ch == "^":
            is_[k, :] = is_[:, k] = False
        elif ch == "*":
            out.must_pair_s[k] = True

    for (i, j) in cs.forced_r:
        if not ir[i - 1, j - 1]:
            raise ConstraintError(f"forced R pair ({i},{j}) is not admissible")
    for (h, l) in cs.forced_s:
        if not is_[h - 1, l - 1]:
            raise ConstraintError(f"forced S pair ({h},{l}) is not admissible")
    for (i, j) in cs.forced_ext:
        if not ex[i - 1, j - 1]:
            raise ConstraintError(f"forced exterior pair [{i},{j}] is not admissible")

    for (i, j) in cs.forced_r:
        for k in (i - 1, j - 1):
            ir[k, :] = ir[:, k] = False
            ex[k, :] = False
            out.must_pair_r[k] = True
        ir[i - 1, j - 1] = True
    for (h, l) in cs.forced_s:
        for k in (h - 1, l - 1):
            is_[k, :] = is_[:, k] = False
            ex[:, k] = False
            out.must_pair_s[k] = True
        is_[h - 1, l - 1] = True
    for (i, j) in cs.forced_ext:
        ir[i - 1, :] = ir[:, i - 1] = False
        is_[j - 1, :] = is_[:, j - 1] = False
        ex[i - 1, :] = False
        ex[:, j - 1] = False
        ex[i - 1, j - 1] = True
        out.must_pair_r[i - 1] = True
        out.must_pair_s[j - 1] = True
    return out


def build_masks(pa: PairedAlignment, p: FoldParams = FoldParams(),
                cs: ConstraintSet | None = None) -> CompatibilityMasks:
    masks = score_masks(pa, p)
    if cs is None:
        return masks
    return apply_constraints(masks, cs)
