"""Grammar kernels.

A single ``expand`` enumerates the alternatives of one table cell. Each
alternative is a coefficient times at most three child cells. The same
enumeration drives three passes, selected by ``mode``:

  0  inside   st[0] accumulates the cell value
  1  outside  st[6] holds dZ/d(cell); adjoints are pushed to the children
  2  sample   alternatives are scanned until the running sum exceeds st[1]

Cells are visited in a fixed topological order (``fill_inside``) and its
exact reverse for the outside pass.

Grammar summary. Each nonempty set I of exterior arcs that some interior
arc encloses (ES set) is a node; the R arcs with ES = I form a nested chain,
likewise on S. Node kinds: R chain only (V), S chain only (T), both (X then
Y). A chain is a run of helices joined by interior or multi loops whose other
branches are plain secondary structure. Its innermost arc closes the kissing
loop, whose content is a left-to-right sequence of items (hybrids and child
nodes) separated by gaps of plain secondary structure.
"""
import numpy as np
from numba import njit

from .layout import (BLK, CLL, CLLP, CLT, CLTP, CTL, CTLP, CTT, FIRST_JOINT, HY, LAST_JOINT,
                     NTABLES, QE1_R, QEP_R, QH_R, QM1_R, QM_R, QP_R, RGB, RGH, RGHP, RGHU, RL,
                     S1B, S1H, S2B, S2H, SGA, SGB, SGH, STRAND_SHIFT, TH, TP, VH, VP, XH, XP,
                     YH, YP, ZZ, F)


# ---------------------------------------------------------------- indexing

@njit(cache=True)
def jx(G, t, i, j, h, l):
    m2 = G[3]
    return G[4 + t] + ((i * G[2] + j) * m2 + h) * m2 + l


@njit(cache=True)
def sx(G, t, i, j):
    # strand tables of R (t < 6) or S, and RL (i on R, j on S)
    if t < STRAND_SHIFT:
        return G[4 + t] + i * G[2] + j
    return G[4 + t] + i * G[3] + j


@njit(cache=True)
def decode(G, idx):
    """Flat index -> (table, a, b, c, d)."""
    t = NTABLES - 1
    while G[4 + t] > idx:
        t -= 1
    r = idx - G[4 + t]
    n2 = G[2]
    m2 = G[3]
    if t < STRAND_SHIFT:
        return t, r // n2, r % n2, 0, 0
    if t < FIRST_JOINT:
        return t, r // m2, r % m2, 0, 0
    if t <= LAST_JOINT:
        l = r % m2
        r //= m2
        h = r % m2
        r //= m2
        return t, r // n2, r % n2, h, l
    if t == RL:
        return t, r // m2, 0, r % m2, 0
    return t, 0, 0, 0, 0


@njit(cache=True)
def cell_len(G, idx):
    """Number of sequence positions covered by a cell (for scaling)."""
    if idx < 0:
        return 0
    t, a, b, c, d = decode(G, idx)
    if t < FIRST_JOINT:
        return b - a + 1
    if t <= LAST_JOINT:
        return (b - a + 1) + (d - c + 1)
    if t == RL:
        return (G[0] - a + 1) + (G[1] - c + 1)
    return G[0] + G[1]


# ---------------------------------------------------------------- emission

@njit(cache=True)
def emit(mode, T, O, st, ch, G, K, invs, lp, coef, x, y, z):
    if coef == 0.0:
        return
    vx = T[x] if x >= 0 else 1.0
    vy = T[y] if y >= 0 else 1.0
    vz = T[z] if z >= 0 else 1.0
    if K[5] != 0.0:
        coef *= invs[lp - cell_len(G, x) - cell_len(G, y) - cell_len(G, z)]
    if mode == 0:
        st[0] += coef * vx * vy * vz
    elif mode == 1:
        g = st[6] * coef
        if x >= 0:
            O[x] += g * vy * vz
        if y >= 0:
            O[y] += g * vx * vz
        if z >= 0:
            O[z] += g * vx * vy
    else:
        v = coef * vx * vy * vz
        if v > 0.0 and ch[3] == 0:
            st[0] += v
            ch[0] = x
            ch[1] = y
            ch[2] = z
            if st[1] < st[0]:
                ch[3] = 1


@njit(cache=True)
def emit_qe(mode, T, O, st, ch, G, K, invs, lp, coef, base, al, x, y, o1, o2):
    """coef * QE(x, y) * o1 * o2 where QE = al + QEP (base = QP table of the strand)."""
    emit(mode, T, O, st, ch, G, K, invs, lp, coef * al[x, y], o1, o2, -1)
    if x < y:
        emit(mode, T, O, st, ch, G, K, invs, lp, coef, sx(G, base + 5, x, y), o1, o2)


# ---------------------------------------------------------------- strand tables

@njit(cache=True)
def expand_strand(t, i, j, mode, T, O, st, ch, G, W):
    cm_r, cm_s, ex, al_r, al_s, uc_r, uc_s, wint_r, wint_s, wh_r, wh_s, wstep, K, invs, reg = W
    if t < STRAND_SHIFT:
        base = 0
        cm, al, uc, wint, wh = cm_r, al_r, uc_r, wint_r, wh_r
    else:
        base = STRAND_SHIFT
        cm, al, uc, wint, wh = cm_s, al_s, uc_s, wint_s, wh_s
    k = t - base
    lp = j - i + 1
    qp, qh, qm1, qm, qe1, qep = base, base + 1, base + 2, base + 3, base + 4, base + 5
    if k == 0:  # QP: (i, j) stacks on (i+1, j-1)
        if cm[i, j] and j - i >= 2:
            c = wint[i, j, i + 1, j - 1]
            emit(mode, T, O, st, ch, G, K, invs, lp, c, sx(G, qp, i + 1, j - 1), -1, -1)
            emit(mode, T, O, st, ch, G, K, invs, lp, c, sx(G, qh, i + 1, j - 1), -1, -1)
    elif k == 1:  # QH: (i, j) closes a hairpin, interior or multi loop
        if cm[i, j]:
            emit(mode, T, O, st, ch, G, K, invs, lp, wh[i, j], -1, -1, -1)
            for a in range(i + 1, j - 1):
                for b in range(a + 1, j):
                    if a == i + 1 and b == j - 1:
                        continue
                    if cm[a, b]:
                        emit(mode, T, O, st, ch, G, K, invs, lp, wint[i, j, a, b],
                             sx(G, qp, a, b), -1, -1)
            for a in range(i + 2, j):
                emit(mode, T, O, st, ch, G, K, invs, lp, K[2], sx(G, qm, i + 1, a - 1),
                     sx(G, qm1, a, j - 1), -1)
    elif k == 2:  # QM1: one branch starting at i, trailing unpaired up to j
        for b in range(i + 1, j + 1):
            if cm[i, b]:
                emit(mode, T, O, st, ch, G, K, invs, lp, K[4] * uc[b + 1, j],
                     sx(G, qp, i, b), -1, -1)
    elif k == 3:  # QM: at least one branch, with multiloop unpaired costs
        for a in range(i, j + 1):
            emit(mode, T, O, st, ch, G, K, invs, lp, uc[i, a - 1], sx(G, qm1, a, j), -1, -1)
            if a > i:
                emit(mode, T, O, st, ch, G, K, invs, lp, 1.0, sx(G, qm, i, a - 1),
                     sx(G, qm1, a, j), -1)
    elif k == 4:  # QE1: one helix starting at i, trailing free positions
        for b in range(i + 1, j + 1):
            if cm[i, b]:
                emit(mode, T, O, st, ch, G, K, invs, lp, al[b + 1, j], sx(G, qp, i, b), -1, -1)
    else:  # QEP: at least one helix, zero-cost context
        for a in range(i, j + 1):
            emit(mode, T, O, st, ch, G, K, invs, lp, al[i, a - 1], sx(G, qe1, a, j), -1, -1)
            if a > i:
                emit(mode, T, O, st, ch, G, K, invs, lp, 1.0, sx(G, qep, i, a - 1),
                     sx(G, qe1, a, j), -1)


# ---------------------------------------------------------------- joint tables

@njit(cache=True)
def _chain_r(t, i, j, h, l, mode, T, O, st, ch, G, W, lp):
    """VP/VH (R chain of a V node) and XP/XH (R chain of an X node)."""
    cm_r, cm_s, ex, al_r, al_s, uc_r, uc_s, wint_r, wint_s, wh_r, wh_s, wstep, K, invs, reg = W
    if not cm_r[i, j]:
        return
    if t == VP or t == XP:
        if j - i >= 2:
            c = wint_r[i, j, i + 1, j - 1]
            emit(mode, T, O, st, ch, G, K, invs, lp, c, jx(G, t, i + 1, j - 1, h, l), -1, -1)
            emit(mode, T, O, st, ch, G, K, invs, lp, c, jx(G, t + 1, i + 1, j - 1, h, l), -1, -1)
        return
    if j - i < 2:
        return
    nxt = t - 1  # VP or XP
    if t == VH:
        emit(mode, T, O, st, ch, G, K, invs, lp, K[1], jx(G, CLT, i + 1, j - 1, h, l), -1, -1)
    else:
        emit(mode, T, O, st, ch, G, K, invs, lp, K[1], jx(G, YP, i + 1, j - 1, h, l), -1, -1)
    for a in range(i + 1, j - 1):
        for b in range(a + 1, j):
            if not cm_r[a, b]:
                continue
            c = jx(G, nxt, a, b, h, l)
            if T[c] == 0.0 :
                continue
            if not (a == i + 1 and b == j - 1):
                emit(mode, T, O, st, ch, G, K, invs, lp, wint_r[i, j, a, b], c, -1, -1)
            if a > i + 1:
                qm_l = sx(G, QM_R, i + 1, a - 1)
                emit(mode, T, O, st, ch, G, K, invs, lp, K[3] * uc_r[b + 1, j - 1], qm_l, c, -1)
                if b + 1 < j - 1:
                    emit(mode, T, O, st, ch, G, K, invs, lp, K[3], qm_l,
                         sx(G, QM_R, b + 1, j - 1), c)
            if b + 1 < j - 1:
                emit(mode, T, O, st, ch, G, K, invs, lp, K[3] * uc_r[i + 1, a - 1],
                     sx(G, QM_R, b + 1, j - 1), c, -1)


@njit(cache=True)
def _chain_s(t, i, j, h, l, mode, T, O, st, ch, G, W, lp):
    """TP/TH (S chain of a T node) and YP/YH (S chain of an X node)."""
    cm_r, cm_s, ex, al_r, al_s, uc_r, uc_s, wint_r, wint_s, wh_r, wh_s, wstep, K, invs, reg = W
    if not cm_s[h, l]:
        return
    if t == TP or t == YP:
        if l - h >= 2:
            c = wint_s[h, l, h + 1, l - 1]
            emit(mode, T, O, st, ch, G, K, invs, lp, c, jx(G, t, i, j, h + 1, l - 1), -1, -1)
            emit(mode, T, O, st, ch, G, K, invs, lp, c, jx(G, t + 1, i, j, h + 1, l - 1), -1, -1)
        return
    if l - h < 2:
        return
    nxt = t - 1
    if t == TH:
        emit(mode, T, O, st, ch, G, K, invs, lp, K[1], jx(G, CTL, i, j, h + 1, l - 1), -1, -1)
    else:
        emit(mode, T, O, st, ch, G, K, invs, lp, K[1], jx(G, CLL, i, j, h + 1, l - 1), -1, -1)
    for a in range(h + 1, l - 1):
        for b in range(a + 1, l):
            if not cm_s[a, b]:
                continue
            c = jx(G, nxt, i, j, a, b)
            if T[c] == 0.0 :
                continue
            if not (a == h + 1 and b == l - 1):
                emit(mode, T, O, st, ch, G, K, invs, lp, wint_s[h, l, a, b], c, -1, -1)
            if a > h + 1:
                qm_l = sx(G, QM_R + STRAND_SHIFT, h + 1, a - 1)
                emit(mode, T, O, st, ch, G, K, invs, lp, K[3] * uc_s[b + 1, l - 1], qm_l, c, -1)
                if b + 1 < l - 1:
                    emit(mode, T, O, st, ch, G, K, invs, lp, K[3], qm_l,
                         sx(G, QM_R + STRAND_SHIFT, b + 1, l - 1), c)
            if b + 1 < l - 1:
                emit(mode, T, O, st, ch, G, K, invs, lp, K[3] * uc_s[h + 1, a - 1],
                     sx(G, QM_R + STRAND_SHIFT, b + 1, l - 1), c, -1)


@njit(cache=True)
def expand_joint(t, i, j, h, l, mode, T, O, st, ch, G, W):
    cm_r, cm_s, ex, al_r, al_s, uc_r, uc_s, wint_r, wint_s, wh_r, wh_s, wstep, K, invs, reg = W
    lp = (j - i + 1) + (l - h + 1)
    qs = STRAND_SHIFT
    if t == F:  # sub-hybrid from (i, h) to (j, l)
        if not ex[i, h]:
            return
        if i == j and h == l:
            emit(mode, T, O, st, ch, G, K, invs, lp, 1.0, -1, -1, -1)
        elif i < j and h < l:
            for a in range(i + 1, j + 1):
                for b in range(h + 1, l + 1):
                    if ex[a, b]:
                        emit(mode, T, O, st, ch, G, K, invs, lp, wstep[i, h, a, b],
                             jx(G, F, a, j, b, l), -1, -1)
    elif t == HY:  # maximal hybrid, at least two arcs
        if i < j and h < l:
            if reg[0] == 1 and i <= reg[2] and reg[1] <= j:
                return
            if reg[0] == 2 and h <= reg[2] and reg[1] <= l:
                return
            emit(mode, T, O, st, ch, G, K, invs, lp, K[0], jx(G, F, i, j, h, l), -1, -1)
    elif t == VP or t == VH or t == XP or t == XH:
        _chain_r(t, i, j, h, l, mode, T, O, st, ch, G, W, lp)
    elif t == TP or t == TH or t == YP or t == YH:
        _chain_s(t, i, j, h, l, mode, T, O, st, ch, G, W, lp)
    elif t == BLK:
        emit(mode, T, O, st, ch, G, K, invs, lp, 1.0, jx(G, VP, i, j, h, l), -1, -1)
        emit(mode, T, O, st, ch, G, K, invs, lp, 1.0, jx(G, TP, i, j, h, l), -1, -1)
        emit(mode, T, O, st, ch, G, K, invs, lp, 1.0, jx(G, XP, i, j, h, l), -1, -1)
    elif t == S2B or t == S2H:
        # prefix of >= 1 item plus gap, then a final block / hybrid
        for a in range(i + 1, j + 1):
            for b in range(h + 1, l + 1):
                if t == S2B:
                    last = jx(G, BLK, a, j, b, l)
                    if T[last] == 0.0 :
                        continue
                    emit(mode, T, O, st, ch, G, K, invs, lp, 1.0,
                         jx(G, SGA, i, a - 1, h, b - 1), last, -1)
                else:
                    last = jx(G, HY, a, j, b, l)
                    if T[last] == 0.0 :
                        continue
                    emit(mode, T, O, st, ch, G, K, invs, lp, 1.0,
                         jx(G, SGB, i, a - 1, h, b - 1), last, -1)
                    emit(mode, T, O, st, ch, G, K, invs, lp, 1.0,
                         jx(G, SGH, i, a - 1, h, b - 1), last, -1)
    elif t == S1B:
        emit(mode, T, O, st, ch, G, K, invs, lp, 1.0, jx(G, BLK, i, j, h, l), -1, -1)
        emit(mode, T, O, st, ch, G, K, invs, lp, 1.0, jx(G, S2B, i, j, h, l), -1, -1)
    elif t == S1H:
        emit(mode, T, O, st, ch, G, K, invs, lp, 1.0, jx(G, HY, i, j, h, l), -1, -1)
        emit(mode, T, O, st, ch, G, K, invs, lp, 1.0, jx(G, S2H, i, j, h, l), -1, -1)
    elif t == CTT:  # content of a kissing loop: not a single block
        emit(mode, T, O, st, ch, G, K, invs, lp, 1.0, jx(G, HY, i, j, h, l), -1, -1)
        emit(mode, T, O, st, ch, G, K, invs, lp, 1.0, jx(G, S2B, i, j, h, l), -1, -1)
        emit(mode, T, O, st, ch, G, K, invs, lp, 1.0, jx(G, S2H, i, j, h, l), -1, -1)
    elif t == RGB or t == RGH:  # items then an R gap
        src = S1B if t == RGB else S1H
        for a in range(i, j + 1):
            emit_qe(mode, T, O, st, ch, G, K, invs, lp, 1.0, QP_R, al_r, a + 1, j,
                    jx(G, src, i, a, h, l), -1)
    elif t == RGHP:  # R gap holding at least one arc
        for a in range(i, j):
            emit(mode, T, O, st, ch, G, K, invs, lp, 1.0, jx(G, S1H, i, a, h, l),
                 sx(G, QEP_R, a + 1, j), -1)
    elif t == RGHU:  # R gap without arcs
        for a in range(i, j + 1):
            emit(mode, T, O, st, ch, G, K, invs, lp, al_r[a + 1, j], jx(G, S1H, i, a, h, l),
                 -1, -1)
    elif t == SGA or t == SGB:  # then an S gap
        for b in range(h, l + 1):
            emit_qe(mode, T, O, st, ch, G, K, invs, lp, 1.0, qs, al_s, b + 1, l,
                    jx(G, RGB, i, j, h, b), -1)
            if t == SGA:
                emit_qe(mode, T, O, st, ch, G, K, invs, lp, 1.0, qs, al_s, b + 1, l,
                        jx(G, RGH, i, j, h, b), -1)
    elif t == SGH:  # after a hybrid the gap must hold an arc on some side
        for b in range(h, l + 1):
            emit_qe(mode, T, O, st, ch, G, K, invs, lp, 1.0, qs, al_s, b + 1, l,
                    jx(G, RGHP, i, j, h, b), -1)
            if b < l:
                emit(mode, T, O, st, ch, G, K, invs, lp, 1.0, jx(G, RGHU, i, j, h, b),
                     sx(G, QEP_R + qs, b + 1, l), -1)
    elif t == CLTP:  # loose R end
        for a in range(i, j + 1):
            emit_qe(mode, T, O, st, ch, G, K, invs, lp, 1.0, QP_R, al_r, a + 1, j,
                    jx(G, CTT, i, a, h, l), -1)
    elif t == CLT:  # loose R start
        for a in range(i, j + 1):
            emit_qe(mode, T, O, st, ch, G, K, invs, lp, 1.0, QP_R, al_r, i, a - 1,
                    jx(G, CLTP, a, j, h, l), -1)
    elif t == CTLP or t == CLLP:  # loose S end
        src = CTT if t == CTLP else CLT
        for b in range(h, l + 1):
            emit_qe(mode, T, O, st, ch, G, K, invs, lp, 1.0, qs, al_s, b + 1, l,
                    jx(G, src, i, j, h, b), -1)
    elif t == CTL or t == CLL:  # loose S start
        src = CTLP if t == CTL else CLLP
        for b in range(h, l + 1):
            emit_qe(mode, T, O, st, ch, G, K, invs, lp, 1.0, qs, al_s, h, b - 1,
                    jx(G, src, i, j, b, l), -1)


@njit(cache=True)
def expand_root(t, i, h, mode, T, O, st, ch, G, W):
    cm_r, cm_s, ex, al_r, al_s, uc_r, uc_s, wint_r, wint_s, wh_r, wh_s, wstep, K, invs, reg = W
    n = G[0]
    m = G[1]
    qs = STRAND_SHIFT
    if t == RL:  # items starting at (i, h), then free tails to the ends
        lp = (n - i + 1) + (m - h + 1)
        for j in range(i, n + 1):
            for l in range(h, m + 1):
                for src in (S1B, S1H):
                    c = jx(G, src, i, j, h, l)
                    if T[c] == 0.0 :
                        continue
                    emit_qe(mode, T, O, st, ch, G, K, invs, lp, al_r[j + 1, n], qs, al_s,
                            l + 1, m, c, -1)
                    if j < n:
                        emit_qe(mode, T, O, st, ch, G, K, invs, lp, 1.0, qs, al_s, l + 1, m,
                                c, sx(G, QEP_R, j + 1, n))
    else:  # Z
        lp = n + m
        emit_qe(mode, T, O, st, ch, G, K, invs, lp, al_r[1, n], qs, al_s, 1, m, -1, -1)
        emit_qe(mode, T, O, st, ch, G, K, invs, lp, 1.0, qs, al_s, 1, m,
                sx(G, QEP_R, 1, n), -1)
        for a in range(1, n + 1):
            for b in range(1, m + 1):
                c = sx(G, RL, a, b)
                if T[c] == 0.0 :
                    continue
                emit_qe(mode, T, O, st, ch, G, K, invs, lp, al_r[1, a - 1], qs, al_s, 1, b - 1,
                        c, -1)
                if a > 1:
                    emit_qe(mode, T, O, st, ch, G, K, invs, lp, 1.0, qs, al_s, 1, b - 1,
                            c, sx(G, QEP_R, 1, a - 1))


@njit(cache=True)
def expand(t, a, b, c, d, mode, T, O, st, ch, G, W):
    if t < FIRST_JOINT:
        expand_strand(t, a, b, mode, T, O, st, ch, G, W)
    elif t <= LAST_JOINT:
        expand_joint(t, a, b, c, d, mode, T, O, st, ch, G, W)
    elif t == RL:
        expand_root(t, a, c, mode, T, O, st, ch, G, W)
    else:
        expand_root(t, 0, 0, mode, T, O, st, ch, G, W)


# ---------------------------------------------------------------- drivers

@njit(cache=True)
def _inside_cell(T, st, ch, G, W, t, a, b, c, d, idx):
    st[0] = 0.0
    expand(t, a, b, c, d, 0, T, T, st, ch, G, W)
    T[idx] = st[0]


@njit(cache=True)
def fill_inside(G, W):
    n = G[0]
    m = G[1]
    T = np.zeros(G[4 + NTABLES])
    st = np.zeros(8)
    ch = np.zeros(4, dtype=np.int64)
    for base, ln in ((0, n), (STRAND_SHIFT, m)):
        for i in range(ln, 0, -1):
            for j in range(i, ln + 1):
                for t in range(base, base + 6):
                    _inside_cell(T, st, ch, G, W, t, i, j, 0, 0, sx(G, t, i, j))
    for i in range(n, 0, -1):
        for h in range(m, 0, -1):
            for j in range(i, n + 1):
                for l in range(h, m + 1):
                    for t in range(FIRST_JOINT, LAST_JOINT + 1):
                        _inside_cell(T, st, ch, G, W, t, i, j, h, l, jx(G, t, i, j, h, l))
            _inside_cell(T, st, ch, G, W, RL, i, 0, h, 0, sx(G, RL, i, h))
    _inside_cell(T, st, ch, G, W, ZZ, 0, 0, 0, 0, G[4 + ZZ])
    return T


@njit(cache=True)
def _outside_cell(T, O, st, ch, G, W, t, a, b, c, d, idx):
    if O[idx] == 0.0 or T[idx] == 0.0:
        return
    st[6] = O[idx]
    expand(t, a, b, c, d, 1, T, O, st, ch, G, W)


@njit(cache=True)
def fill_outside(T, G, W):
    """Adjoints dZ/dT for every cell, in reverse fill order."""
    n = G[0]
    m = G[1]
    O = np.zeros(T.shape[0])
    st = np.zeros(8)
    ch = np.zeros(4, dtype=np.int64)
    O[G[4 + ZZ]] = 1.0
    _outside_cell(T, O, st, ch, G, W, ZZ, 0, 0, 0, 0, G[4 + ZZ])
    for i in range(1, n + 1):
        for h in range(1, m + 1):
            _outside_cell(T, O, st, ch, G, W, RL, i, 0, h, 0, sx(G, RL, i, h))
            for j in range(n, i - 1, -1):
                for l in range(m, h - 1, -1):
                    for t in range(LAST_JOINT, FIRST_JOINT - 1, -1):
                        _outside_cell(T, O, st, ch, G, W, t, i, j, h, l, jx(G, t, i, j, h, l))
    for base, ln in ((STRAND_SHIFT, m), (0, n)):
        for i in range(1, ln + 1):
            for j in range(ln, i - 1, -1):
                for t in range(base + 5, base - 1, -1):
                    _outside_cell(T, O, st, ch, G, W, t, i, j, 0, 0, sx(G, t, i, j))
    return O


# arc kinds in sampled output
ARC_R, ARC_S, ARC_E = 0, 1, 2


@njit(cache=True)
def sample_many(T, G, W, nsamples, seed):
    """Stochastic backtrace. Returns (arcs[n, k, 3], counts[n]) with rows (kind, a, b)."""
    np.random.seed(seed)
    n = G[0]
    m = G[1]
    maxarcs = n + m + 2
    arcs = np.zeros((nsamples, maxarcs, 3), dtype=np.int64)
    counts = np.zeros(nsamples, dtype=np.int64)
    stack = np.zeros(4 * (n + 2) * (m + 2) + 16, dtype=np.int64)
    st = np.zeros(8)
    ch = np.zeros(4, dtype=np.int64)
    dummy = np.zeros(1)
    for s in range(nsamples):
        top = 0
        stack[0] = G[4 + ZZ]
        top = 1
        k = 0
        while top > 0:
            top -= 1
            idx = stack[top]
            t, a, b, c, d = decode(G, idx)
            if t == QP_R or t == QH_R or t == VP or t == VH or t == XP or t == XH:
                arcs[s, k, 0] = ARC_R
                arcs[s, k, 1] = a
                arcs[s, k, 2] = b
                k += 1
            elif t == QP_R + STRAND_SHIFT or t == QH_R + STRAND_SHIFT:
                arcs[s, k, 0] = ARC_S
                arcs[s, k, 1] = a
                arcs[s, k, 2] = b
                k += 1
            elif t == TP or t == TH or t == YP or t == YH:
                arcs[s, k, 0] = ARC_S
                arcs[s, k, 1] = c
                arcs[s, k, 2] = d
                k += 1
            elif t == F:
                arcs[s, k, 0] = ARC_E
                arcs[s, k, 1] = a
                arcs[s, k, 2] = c
                k += 1
            st[0] = 0.0
            st[1] = np.random.random() * T[idx]
            ch[0] = -1
            ch[1] = -1
            ch[2] = -1
            ch[3] = 0
            expand(t, a, b, c, d, 2, T, dummy, st, ch, G, W)
            for q in range(3):
                if ch[q] >= 0:
                    stack[top] = ch[q]
                    top += 1
        counts[s] = k
    return arcs, counts
