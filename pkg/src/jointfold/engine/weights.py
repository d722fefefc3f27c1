"""Boltzmann factors of individual loops, precomputed on padded 1-based grids."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from ..compat import PAIR_TYPE, CompatibilityMasks
from ..energy import EnergyModel


@njit(cache=True)
def _allowed(must, n):
    # al[x, y] = 1 when no must-pair position lies in [x, y]; empty ranges give 1
    al = np.ones((n + 2, n + 2))
    for x in range(1, n + 1):
        bad = False
        for y in range(x, n + 1):
            if must[y - 1]:
                bad = True
            if bad:
                al[x, y] = 0.0
    return al


@njit(cache=True)
def _gated(pt, a, b, c, d, stack, term, is_stack):
    # row-average of the sequence-dependent part of a two-pair loop
    m = pt.shape[0]
    s = 0.0
    for r in range(m):
        p1 = pt[r, a, b]
        p2 = pt[r, c, d]
        if p1 >= 0 and p2 >= 0:
            if is_stack:
                s += stack[p1, p2]
            else:
                s += term[p1] + term[p2]
    return s / m


@njit(cache=True)
def _two_loop_weights(pt, al, stack, term, ib, ip, bb, bp, rt):
    """w[i, j, k, l] for an arc (i, j) closing a two-pair loop with inner (k, l)."""
    n = pt.shape[1] - 2
    w = np.zeros((n + 2, n + 2, n + 2, n + 2))
    for i in range(1, n + 1):
        for j in range(i + 3, n + 1):
            for k in range(i + 1, j - 1):
                a1 = al[i + 1, k - 1]
                if a1 == 0.0:
                    break
                for l in range(k + 1, j):
                    a2 = al[l + 1, j - 1]
                    if a2 == 0.0:
                        continue
                    sa = k - i - 1
                    sb = j - l - 1
                    if sa == 0 and sb == 0:
                        e = _gated(pt, i, j, k, l, stack, term, True)
                    elif sa == 0 or sb == 0:
                        e = bb + bp * (sa + sb) + _gated(pt, i, j, k, l, stack, term, False)
                    else:
                        e = ib + ip * (sa + sb) + _gated(pt, i, j, k, l, stack, term, False)
                    w[i, j, k, l] = np.exp(-e / rt)
    return w


@njit(cache=True)
def _step_weights(pe, ex, alr, als, stack, term, ib, ip, bb, bp, rt):
    """w[i, h, k, g]: hybrid step from exterior arc (i, h) to the next arc (k, g)."""
    m = pe.shape[0]
    n = pe.shape[1] - 2
    mm = pe.shape[2] - 2
    w = np.zeros((n + 2, mm + 2, n + 2, mm + 2))
    for i in range(1, n + 1):
        for h in range(1, mm + 1):
            if not ex[i, h]:
                continue
            for k in range(i + 1, n + 1):
                a1 = alr[i + 1, k - 1]
                if a1 == 0.0:
                    break
                for g in range(h + 1, mm + 1):
                    if not ex[k, g]:
                        continue
                    a2 = als[h + 1, g - 1]
                    if a2 == 0.0:
                        break
                    sa = k - i - 1
                    sb = g - h - 1
                    s = 0.0
                    for r in range(m):
                        p1 = pe[r, i, h]
                        p2 = pe[r, k, g]
                        if p1 >= 0 and p2 >= 0:
                            if sa == 0 and sb == 0:
                                s += stack[p1, p2]
                            else:
                                s += term[p1] + term[p2]
                    s /= m
                    if sa == 0 and sb == 0:
                        e = s
                    elif sa == 0 or sb == 0:
                        e = bb + bp * (sa + sb) + s
                    else:
                        e = ib + ip * (sa + sb) + s
                    w[i, h, k, g] = np.exp(-e / rt)
    return w


def _pad_types(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pair types of every column pair, per row, on a padded 1-based grid."""
    m, n = a.shape
    mm = b.shape[1]
    out = np.full((m, n + 2, mm + 2), -1, dtype=np.int64)
    out[:, 1:n + 1, 1:mm + 1] = PAIR_TYPE[a.astype(np.int64)[:, :, None],
                                          b.astype(np.int64)[:, None, :]]
    return out


def _pad_mask(x: np.ndarray) -> np.ndarray:
    out = np.zeros((x.shape[0] + 2, x.shape[1] + 2), dtype=np.bool_)
    out[1:-1, 1:-1] = x
    return out


@dataclass
class Weights:
    """Everything the kernels read besides the tables themselves."""
    cm_r: np.ndarray
    cm_s: np.ndarray
    ex: np.ndarray
    al_r: np.ndarray
    al_s: np.ndarray
    uc_r: np.ndarray
    uc_s: np.ndarray
    wint_r: np.ndarray
    wint_s: np.ndarray
    wh_r: np.ndarray
    wh_s: np.ndarray
    wstep: np.ndarray
    consts: np.ndarray  # w_init, w_kiss, w_mc, w_mcb, w_b, scaled flag
    invs: np.ndarray  # scale ** -k
    region: np.ndarray  # strand code (0 none, 1 R, 2 S), lo, hi

    def as_tuple(self, region=None):
        reg = self.region if region is None else region
        return (self.cm_r, self.cm_s, self.ex, self.al_r, self.al_s, self.uc_r, self.uc_s,
                self.wint_r, self.wint_s, self.wh_r, self.wh_s, self.wstep, self.consts,
                self.invs, reg)


def _strand_parts(seqs, cm, must, em):
    n = seqs.shape[1]
    pt = _pad_types(seqs, seqs)
    al = _allowed(np.asarray(must, dtype=np.bool_), n)
    ln = np.arange(n + 2)
    size = ln[None, :] - ln[:, None] + 1  # y - x + 1
    uc = al * np.exp(-em.multi_unpaired * np.maximum(size, 0) / em.rt)
    uc[size < 0] = 0.0
    wh = np.zeros((n + 2, n + 2))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            wh[i, j] = np.exp(-(em.hairpin_base + em.hairpin_per_nt * (j - i - 1)) / em.rt) \
                * al[i + 1, j - 1]
    wint = _two_loop_weights(pt, al, em.stack, em.terminal, em.interior_base,
                             em.interior_per_nt, em.bulge_base, em.bulge_per_nt, em.rt)
    return _pad_mask(np.triu(cm, 1)), al, uc, wint, wh


def build_weights(rmat: np.ndarray, smat: np.ndarray, masks: CompatibilityMasks,
                  em: EnergyModel, scale: float = 1.0) -> Weights:
    cm_r, al_r, uc_r, wint_r, wh_r = _strand_parts(rmat, masks.interior_r, masks.must_pair_r, em)
    cm_s, al_s, uc_s, wint_s, wh_s = _strand_parts(smat, masks.interior_s, masks.must_pair_s, em)
    ex = _pad_mask(masks.exterior)
    pe = _pad_types(rmat, smat)
    wstep = _step_weights(pe, ex, al_r, al_s, em.stack, em.terminal, em.interior_base,
                          em.interior_per_nt, em.bulge_base, em.bulge_per_nt, em.rt)
    rt = em.rt
    consts = np.array([np.exp(-em.hybrid_init / rt), np.exp(-em.kissing_penalty / rt),
                       np.exp(-em.multi_close / rt),
                       np.exp(-(em.multi_close + em.multi_branch) / rt),
                       np.exp(-em.multi_branch / rt), 0.0 if scale == 1.0 else 1.0])
    n, m = masks.n, masks.mlen
    with np.errstate(over="ignore", under="ignore"):
        invs = float(scale) ** -np.arange(n + m + 8, dtype=np.float64)
    region = np.zeros(3, dtype=np.int64)
    return Weights(cm_r, cm_s, ex, al_r, al_s, uc_r, uc_s, wint_r, wint_s, wh_r, wh_s,
                   wstep, consts, invs, region)
