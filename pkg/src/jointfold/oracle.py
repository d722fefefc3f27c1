"""Brute-force ground truth for small instances.

Structures are enumerated explicitly, so everything here is exponential.
It exists to pin the dynamic programming in ``engine`` to the definitions.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .alignio import PairedAlignment
from .compat import PAIR_TYPE, CompatibilityMasks
from .energy import EnergyModel, loop_energy
from .errors import BoundsError, TooLarge
from .jointstruct import JointStructure, decompose_loops, validate

DEFAULT_CAP = 14


@dataclass(frozen=True)
class Limits:
    max_len: int = DEFAULT_CAP
    max_structures: int | None = None


def strand_structures(cm: np.ndarray, must_pair=None) -> list[tuple]:
    """All canonical secondary structures allowed by an interior mask.

    ``must_pair`` is not applied here: positions may still pair across strands.
    """
    n = cm.shape[0]

    @lru_cache(maxsize=None)
    def seg(i, j):
        # structures on positions i..j (1-based, possibly empty)
        if i > j:
            return [()]
        out = list(seg(i + 1, j))  # i unpaired
        for k in range(i + 1, j + 1):
            if cm[i - 1, k - 1]:
                for inner in seg(i + 1, k - 1):
                    for rest in seg(k + 1, j):
                        out.append(((i, k),) + inner + rest)
        return out

    res = []
    for s in seg(1, n):
        arcs = set(s)
        if all((a + 1, b - 1) in arcs or (a - 1, b + 1) in arcs for a, b in arcs):
            res.append(tuple(sorted(s)))
    return res


def _free_positions(arcs, length):
    used = {p for a in arcs for p in a}
    return [p for p in range(1, length + 1) if p not in used]


def enumerate_structures(masks: CompatibilityMasks, limits: Limits = Limits()):
    """Yield every canonical, zig-zag-free, mask-compatible joint structure once."""
    n, m = masks.n, masks.mlen
    if n > limits.max_len or m > limits.max_len:
        raise TooLarge(f"instance {n}x{m} exceeds the oracle cap {limits.max_len}")
    sr_all = strand_structures(masks.interior_r)
    ss_all = strand_structures(masks.interior_s)
    must_r = {k + 1 for k in np.flatnonzero(masks.must_pair_r)}
    must_s = {k + 1 for k in np.flatnonzero(masks.must_pair_s)}
    count = 0
    for sr in sr_all:
        ends_r = sorted(p for a in sr for p in a)
        free_r = _free_positions(sr, n)
        lost_r = must_r & set(free_r)
        for ss in ss_all:
            ends_s = sorted(p for a in ss for p in a)
            free_s = _free_positions(ss, m)
            lost_s = must_s & set(free_s)
            for ext in _ext_sets(masks.exterior, free_r, free_s, ends_r, ends_s,
                                 lost_r, lost_s):
                js = JointStructure(n, m, sr, ss, ext)
                if validate(js).zigzag_free:
                    count += 1
                    if limits.max_structures and count > limits.max_structures:
                        raise TooLarge(f"more than {limits.max_structures} structures")
                    yield js


def _ext_sets(ex, free_r, free_s, ends_r, ends_s, must_r, must_s):
    """Noncrossing exterior arc sets whose hybrids all have >= 2 arcs.

    must_r/must_s are the must-pair positions left unpaired by the strand
    structures; each of them has to be covered by an exterior arc.
    """
    def broken(i, k, ends):
        return any(i < p < k for p in ends)

    def skipped_must(lo, hi, must):
        return any(lo < p < hi for p in must)

    out = []

    def rec(start_r, start_s, arcs, runlen):
        # close here
        if runlen != 1:
            last_r = arcs[-1][0] if arcs else 0
            last_s = arcs[-1][1] if arcs else 0
            if not skipped_must(last_r, len(ex) + 1, must_r) and \
                    not skipped_must(last_s, ex.shape[1] + 1, must_s):
                out.append(tuple(arcs))
        for a in range(start_r, len(free_r)):
            i = free_r[a]
            if arcs and skipped_must(arcs[-1][0], i, must_r):
                break
            if not arcs and skipped_must(0, i, must_r):
                break
            for b in range(start_s, len(free_s)):
                h = free_s[b]
                if arcs and skipped_must(arcs[-1][1], h, must_s):
                    break
                if not arcs and skipped_must(0, h, must_s):
                    break
                if not ex[i - 1, h - 1]:
                    continue
                if arcs:
                    pi, ph = arcs[-1]
                    joined = not broken(pi, i, ends_r) and not broken(ph, h, ends_s)
                    if not joined and runlen < 2:
                        continue
                    nrun = runlen + 1 if joined else 1
                else:
                    nrun = 1
                arcs.append((i, h))
                rec(a + 1, b + 1, arcs, nrun)
                arcs.pop()

    rec(0, 0, [], 0)
    return out


def naive_enumerate(masks: CompatibilityMasks, max_arcs: int = 18):
    """Generate-and-filter over all subsets of allowed arcs (tiny inputs only)."""
    n, m = masks.n, masks.mlen
    cand_r = [(i + 1, j + 1) for i, j in zip(*np.nonzero(masks.interior_r)) if i < j]
    cand_s = [(i + 1, j + 1) for i, j in zip(*np.nonzero(masks.interior_s)) if i < j]
    cand_e = [(i + 1, j + 1) for i, j in zip(*np.nonzero(masks.exterior))]
    total = len(cand_r) + len(cand_s) + len(cand_e)
    if total > max_arcs:
        raise TooLarge(f"{total} candidate arcs exceed the naive limit {max_arcs}")
    allc = [("r", a) for a in cand_r] + [("s", a) for a in cand_s] + [("e", a) for a in cand_e]
    for bits in itertools.product((0, 1), repeat=total):
        chosen = [c for c, b in zip(allc, bits) if b]
        js = JointStructure(n, m, [a for t, a in chosen if t == "r"],
                            [a for t, a in chosen if t == "s"],
                            [a for t, a in chosen if t == "e"])
        if validate(js, masks).ok:
            yield js


@dataclass
class ExactEnsemble:
    structures: list = field(default_factory=list)  # (JointStructure, energy, weight)
    z: float = 0.0
    p_interior_r: np.ndarray = None
    p_interior_s: np.ndarray = None
    p_ext: np.ndarray = None
    hybrid_probs: dict = field(default_factory=dict)
    count: int = 0

    def probability(self, pred) -> float:
        return sum(w for js, _, w in self.structures if pred(js)) / self.z


def hybrids_of(js: JointStructure) -> list[tuple[int, int, int, int]]:
    """(i, j, h, l) boundaries of every maximal hybrid with >= 2 arcs."""
    out = []
    for lp in decompose_loops(js):
        if lp.kind.value == "hybrid":
            (i, h), (j, l) = lp.closing[0], lp.closing[-1]
            out.append((i, j, h, l))
    return out


class _EnergyCache:
    def __init__(self, pa, em):
        self.pa, self.em, self.memo = pa, em, {}

    def __call__(self, js):
        e = 0.0
        for lp in decompose_loops(js):
            key = (lp.kind, lp.strand, lp.closing, len(lp.unpaired_r) + len(lp.unpaired_s))
            v = self.memo.get(key)
            if v is None:
                v = self.memo[key] = loop_energy(lp, self.pa, self.em).value
            e += v
        return e


def brute_force(masks: CompatibilityMasks, pa: PairedAlignment, em: EnergyModel,
                limits: Limits = Limits()) -> ExactEnsemble:
    if pa.n != masks.n or pa.mlen != masks.mlen:
        raise BoundsError("alignment and masks disagree in length")
    n, m = masks.n, masks.mlen
    energy = _EnergyCache(pa, em)
    ens = ExactEnsemble(p_interior_r=np.zeros((n, n)), p_interior_s=np.zeros((m, m)),
                        p_ext=np.zeros((n, m)))
    for js in enumerate_structures(masks, limits):
        e = energy(js)
        w = math.exp(-e / em.rt)
        ens.structures.append((js, e, w))
        ens.z += w
        for a, b in js.arcs_r:
            ens.p_interior_r[a - 1, b - 1] += w
        for a, b in js.arcs_s:
            ens.p_interior_s[a - 1, b - 1] += w
        for a, b in js.ext:
            ens.p_ext[a - 1, b - 1] += w
        for hy in hybrids_of(js):
            ens.hybrid_probs[hy] = ens.hybrid_probs.get(hy, 0.0) + w
    ens.count = len(ens.structures)
    ens.p_interior_r /= ens.z
    ens.p_interior_s /= ens.z
    ens.p_ext /= ens.z
    ens.hybrid_probs = {k: v / ens.z for k, v in ens.hybrid_probs.items()}
    return ens


def contact_region(ens: ExactEnsemble, strand: str, a: int, b: int) -> float:
    """Probability that some hybrid's span on the strand intersects [a, b]."""
    def hit(js):
        for i, j, h, l in hybrids_of(js):
            lo, hi = (i, j) if strand == "R" else (h, l)
            if lo <= b and a <= hi:
                return True
        return False
    return ens.probability(hit)


def strand_partition_function(seqs: np.ndarray, cm: np.ndarray, em: EnergyModel,
                              must_pair=None) -> float:
    """Canonical secondary-structure partition function of one strand alone.

    ``seqs`` is the m x n code matrix of that strand. The open chain costs 0,
    as the external loop does in the joint model.
    """
    m, n = seqs.shape
    must = np.zeros(n, bool) if must_pair is None else np.asarray(must_pair, bool)
    rt = em.rt

    def ptype(r, a, b):
        return PAIR_TYPE[int(seqs[r, a - 1]), int(seqs[r, b - 1])]

    def free(x, y):
        return not must[x - 1:y].any() if x <= y else True

    def two_loop(a, b, c, d):
        e = 0.0
        for r in range(m):
            p1, p2 = ptype(r, a, b), ptype(r, c, d)
            sa, sb = c - a - 1, b - d - 1
            if sa == 0 and sb == 0:
                e += em.stack[p1, p2] if p1 >= 0 and p2 >= 0 else 0.0
                continue
            if sa == 0 or sb == 0:
                e += em.bulge_base + em.bulge_per_nt * (sa + sb)
            else:
                e += em.interior_base + em.interior_per_nt * (sa + sb)
            if p1 >= 0 and p2 >= 0:
                e += em.terminal[p1] + em.terminal[p2]
        return math.exp(-e / m / rt)

    @lru_cache(maxsize=None)
    def closed(i, j, outer_stacked):
        # weight of everything on and inside arc (i, j)
        if not cm[i - 1, j - 1]:
            return 0.0
        tot = 0.0
        if j - i >= 2 and cm[i, j - 2]:
            tot += two_loop(i, j, i + 1, j - 1) * closed(i + 1, j - 1, True)
        if not outer_stacked:
            return tot
        if free(i + 1, j - 1):
            tot += math.exp(-(em.hairpin_base + em.hairpin_per_nt * (j - i - 1)) / rt)
        for k in range(i + 1, j):
            for l in range(k + 1, j):
                if (k, l) == (i + 1, j - 1) or not free(i + 1, k - 1) or not free(l + 1, j - 1):
                    continue
                tot += two_loop(i, j, k, l) * closed(k, l, False)
        tot += math.exp(-em.multi_close / rt) * multi(i + 1, j - 1, 2)
        return tot

    @lru_cache(maxsize=None)
    def multi(x, y, need):
        # multiloop interior on x..y with at least `need` branches
        if x > y:
            return 1.0 if need == 0 else 0.0
        tot = 0.0
        if not must[x - 1]:
            tot += math.exp(-em.multi_unpaired / rt) * multi(x + 1, y, need)
        for l in range(x + 1, y + 1):
            c = closed(x, l, False)
            if c:
                tot += math.exp(-em.multi_branch / rt) * c * multi(l + 1, y, max(need - 1, 0))
        return tot

    @lru_cache(maxsize=None)
    def ext(x):
        if x > n:
            return 1.0
        tot = 0.0 if must[x - 1] else ext(x + 1)
        for l in range(x + 1, n + 1):
            c = closed(x, l, False)
            if c:
                tot += c * ext(l + 1)
        return tot

    return ext(1)
