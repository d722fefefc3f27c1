"""Joint structures: validity, loop decomposition and two-line notation.

All positions are 1-based. An exterior arc ``(i, j)`` joins R_i and S_j.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import BoundsError, InvalidStructure, NotationError


@dataclass(frozen=True)
class JointStructure:
    n: int
    m_len: int
    arcs_r: tuple = ()
    arcs_s: tuple = ()
    ext: tuple = ()

    def __post_init__(self):
        for name in ("arcs_r", "arcs_s", "ext"):
            arcs = tuple(sorted((int(a), int(b)) for a, b in getattr(self, name)))
            object.__setattr__(self, name, arcs)

    @classmethod
    def empty(cls, n: int, m_len: int) -> "JointStructure":
        return cls(n, m_len)

    def key(self) -> tuple:
        return (self.arcs_r, self.arcs_s, self.ext)

    def __str__(self):
        r, s = to_notation(self)
        return f"{r}\n{s}"


class LoopKind(enum.Enum):
    Hairpin = "hairpin"
    Stack = "stack"
    Interior = "interior"
    Bulge = "bulge"
    Multi = "multi"
    Hybrid = "hybrid"
    Kissing = "kissing"
    External = "external"


@dataclass(frozen=True)
class Loop:
    kind: LoopKind
    strand: str  # 'R', 'S', or 'RS' for hybrid/external
    closing: tuple  # closing arc first, then inner arcs (hybrid: all its exterior arcs)
    unpaired_r: tuple = field(default=())
    unpaired_s: tuple = field(default=())


@dataclass
class ValidityReport:
    is_secondary: bool = True
    ext_noncrossing: bool = True
    zigzag_free: bool = True
    canonical_c1: bool = True
    canonical_c2: bool = True
    mask_compatible: bool = True
    offending: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (self.is_secondary and self.ext_noncrossing and self.zigzag_free
                and self.canonical_c1 and self.canonical_c2 and self.mask_compatible)

    @property
    def structural(self) -> bool:
        return self.is_secondary and self.ext_noncrossing

    def fail(self, flag: str, arc):
        if getattr(self, flag):
            setattr(self, flag, False)
            self.offending[flag] = arc


def _check_bounds(js: JointStructure):
    for a, b in js.arcs_r:
        if not (1 <= a <= js.n and 1 <= b <= js.n):
            raise BoundsError(f"R arc ({a},{b}) out of range")
    for a, b in js.arcs_s:
        if not (1 <= a <= js.m_len and 1 <= b <= js.m_len):
            raise BoundsError(f"S arc ({a},{b}) out of range")
    for a, b in js.ext:
        if not (1 <= a <= js.n and 1 <= b <= js.m_len):
            raise BoundsError(f"exterior arc ({a},{b}) out of range")


def _secondary_ok(arcs, rep: ValidityReport, ext_ends: set):
    seen = set()
    for a, b in arcs:
        if a >= b or a in seen or b in seen or a in ext_ends or b in ext_ends:
            rep.fail("is_secondary", (a, b))
        seen.update((a, b))
    for a, b in arcs:
        for c, d in arcs:
            if a < c < b < d:
                rep.fail("is_secondary", (c, d))


def enclosed_sets(js: JointStructure):
    """ES sets: for every interior arc, indices (into js.ext) of the exterior
    arcs whose endpoint on the same strand lies strictly inside it."""
    es_r = {(a, b): frozenset(k for k, (i, _) in enumerate(js.ext) if a < i < b)
            for a, b in js.arcs_r}
    es_s = {(a, b): frozenset(k for k, (_, j) in enumerate(js.ext) if a < j < b)
            for a, b in js.arcs_s}
    return es_r, es_s


def _hybrid_runs(js: JointStructure) -> list[list[tuple[int, int]]]:
    """Maximal runs of consecutive exterior arcs with single-stranded gaps."""
    ends_r = {p for a in js.arcs_r for p in a}
    ends_s = {p for a in js.arcs_s for p in a}
    runs = []
    for arc in js.ext:
        if runs:
            (i, h) = runs[-1][-1]
            (k, l) = arc
            if not any(i < p < k for p in ends_r) and not any(h < p < l for p in ends_s):
                runs[-1].append(arc)
                continue
        runs.append([arc])
    return runs


def validate(js: JointStructure, masks=None) -> ValidityReport:
    """Check every structural, canonicity and mask condition."""
    _check_bounds(js)
    rep = ValidityReport()
    ext_r = [i for i, _ in js.ext]
    ext_s = [j for _, j in js.ext]
    _secondary_ok(js.arcs_r, rep, set(ext_r))
    _secondary_ok(js.arcs_s, rep, set(ext_s))
    if len(set(ext_r)) != len(ext_r) or len(set(ext_s)) != len(ext_s):
        rep.fail("ext_noncrossing", next(
            a for a in js.ext if ext_r.count(a[0]) > 1 or ext_s.count(a[1]) > 1))
    for (a, b), (c, d) in zip(js.ext, js.ext[1:]):
        if d <= b:
            rep.fail("ext_noncrossing", (c, d))

    es_r, es_s = enclosed_sets(js)
    for al, ea in es_r.items():
        for be, eb in es_s.items():
            if ea & eb and not (ea <= eb or eb <= ea):
                rep.fail("zigzag_free", (al, be))

    for arcs in (js.arcs_r, js.arcs_s):
        aset = set(arcs)
        for a, b in arcs:
            if (a + 1, b - 1) not in aset and (a - 1, b + 1) not in aset:
                rep.fail("canonical_c1", (a, b))
    if rep.structural:
        for run in _hybrid_runs(js):
            if len(run) < 2:
                rep.fail("canonical_c2", run[0])

    if masks is not None:
        if masks.n != js.n or masks.mlen != js.m_len:
            raise BoundsError("mask dimensions do not match the structure")
        for a, b in js.arcs_r:
            if not (a < b and masks.interior_r[a - 1, b - 1]):
                rep.fail("mask_compatible", ("R", a, b))
        for a, b in js.arcs_s:
            if not (a < b and masks.interior_s[a - 1, b - 1]):
                rep.fail("mask_compatible", ("S", a, b))
        for a, b in js.ext:
            if not masks.exterior[a - 1, b - 1]:
                rep.fail("mask_compatible", ("E", a, b))
        paired_r = {p for a in js.arcs_r for p in a} | set(ext_r)
        paired_s = {p for a in js.arcs_s for p in a} | set(ext_s)
        for k in range(js.n):
            if masks.must_pair_r[k] and k + 1 not in paired_r:
                rep.fail("mask_compatible", ("R", k + 1))
        for k in range(js.m_len):
            if masks.must_pair_s[k] and k + 1 not in paired_s:
                rep.fail("mask_compatible", ("S", k + 1))
    return rep


def _strand_loops(arcs, length, ext_ends, es, strand):
    """Loops of one strand; exterior-arc endpoints count as unpaired."""
    partner = {}
    for a, b in arcs:
        partner[a], partner[b] = b, a
    loops = []
    for a, b in arcs:
        inner, unp = [], []
        p = a + 1
        while p < b:
            if p in partner:
                inner.append((p, partner[p]))
                p = partner[p] + 1
            else:
                unp.append(p)
                p += 1
        kiss = bool(es[(a, b)]) and all(es[c] != es[(a, b)] for c in inner)
        if kiss:
            kind = LoopKind.Kissing
        elif not inner:
            kind = LoopKind.Hairpin
        elif len(inner) == 1:
            (c, d) = inner[0]
            if c == a + 1 and d == b - 1:
                kind = LoopKind.Stack
            elif c == a + 1 or d == b - 1:
                kind = LoopKind.Bulge
            else:
                kind = LoopKind.Interior
        else:
            kind = LoopKind.Multi
        loops.append((kind, ((a, b), *inner), tuple(unp)))
    outer = [p for p in range(1, length + 1)
             if not any(a <= p <= b for a, b in arcs)]
    return loops, outer


def decompose_loops(js: JointStructure) -> list[Loop]:
    """Unique loop decomposition; raises InvalidStructure if not well formed."""
    rep = validate(js)
    if not (rep.structural and rep.zigzag_free):
        raise InvalidStructure(f"structure is not a joint structure: {rep.offending}")
    es_r, es_s = enclosed_sets(js)
    ext_r = {i for i, _ in js.ext}
    ext_s = {j for _, j in js.ext}
    out = []
    lr, outer_r = _strand_loops(js.arcs_r, js.n, ext_r, es_r, "R")
    ls, outer_s = _strand_loops(js.arcs_s, js.m_len, ext_s, es_s, "S")
    for kind, closing, unp in lr:
        out.append(Loop(kind, "R", closing, unpaired_r=unp))
    for kind, closing, unp in ls:
        out.append(Loop(kind, "S", closing, unpaired_s=unp))
    for run in _hybrid_runs(js):
        if len(run) >= 2:
            ur = tuple(p for (a, _), (b, _) in zip(run, run[1:]) for p in range(a + 1, b))
            us = tuple(p for (_, a), (_, b) in zip(run, run[1:]) for p in range(a + 1, b))
            out.append(Loop(LoopKind.Hybrid, "RS", tuple(run), ur, us))
    out.append(Loop(LoopKind.External, "RS", (), tuple(outer_r), tuple(outer_s)))
    return out


def to_notation(js: JointStructure) -> tuple[str, str]:
    r = ["."] * js.n
    s = ["."] * js.m_len
    for a, b in js.arcs_r:
        r[a - 1], r[b - 1] = "(", ")"
    for a, b in js.arcs_s:
        s[a - 1], s[b - 1] = "(", ")"
    for a, b in js.ext:
        r[a - 1], s[b - 1] = "[", "]"
    return "".join(r), "".join(s)


def _parens(line: str, which: str):
    stack, arcs = [], []
    for k, ch in enumerate(line, 1):
        if ch == "(":
            stack.append(k)
        elif ch == ")":
            if not stack:
                raise NotationError(f"unbalanced ')' on {which} line at {k}")
            arcs.append((stack.pop(), k))
        elif ch not in ".[]":
            raise NotationError(f"illegal character {ch!r} on {which} line")
    if stack:
        raise NotationError(f"unbalanced '(' on {which} line at {stack[-1]}")
    return arcs


def from_notation(r_line: str, s_line: str) -> JointStructure:
    r_line, s_line = r_line.strip(), s_line.strip()
    if "]" in r_line or "[" in s_line:
        raise NotationError("'[' belongs on the R line and ']' on the S line")
    ar = _parens(r_line, "R")
    as_ = _parens(s_line, "S")
    opens = [k for k, ch in enumerate(r_line, 1) if ch == "["]
    closes = [k for k, ch in enumerate(s_line, 1) if ch == "]"]
    if len(opens) != len(closes):
        raise NotationError("'[' and ']' counts differ")
    return JointStructure(len(r_line), len(s_line), ar, as_, tuple(zip(opens, closes)))
