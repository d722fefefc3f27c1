"""Table identifiers and the flat memory layout shared by all kernels.

Every table lives in one float64 vector. Joint tables are indexed by
(i, j, h, l) with padded extents (N+2, N+2, M+2, M+2); strand tables by
(i, j) on their own strand; RL by (i, h); Z is a single cell.
"""
import numpy as np

# strand R
QP_R, QH_R, QM1_R, QM_R, QE1_R, QEP_R = 0, 1, 2, 3, 4, 5
# strand S (same order, shifted by 6)
QP_S, QH_S, QM1_S, QM_S, QE1_S, QEP_S = 6, 7, 8, 9, 10, 11
STRAND_SHIFT = 6

# joint tables in fill order within a cell
F, HY = 12, 13
VP, VH, TP, TH, YP, YH, XP, XH = 14, 15, 16, 17, 18, 19, 20, 21
BLK, S2B, S2H, S1B, S1H, CTT = 22, 23, 24, 25, 26, 27
RGB, RGH, RGHP, RGHU, SGA, SGB, SGH = 28, 29, 30, 31, 32, 33, 34
CLTP, CLT, CTLP, CTL, CLLP, CLL = 35, 36, 37, 38, 39, 40
FIRST_JOINT, LAST_JOINT = F, CLL
RL, ZZ = 41, 42
NTABLES = 43

NAMES = ("QP_R QH_R QM1_R QM_R QE1_R QEP_R QP_S QH_S QM1_S QM_S QE1_S QEP_S "
         "F HY VP VH TP TH YP YH XP XH BLK S2B S2H S1B S1H CTT "
         "RGB RGH RGHP RGHU SGA SGB SGH CLTp CLT CTLp CTL CLLp CLL RL Z").split()


def geometry(n: int, m: int) -> np.ndarray:
    """G[0]=N, G[1]=M, G[2]=N+2, G[3]=M+2, G[4+t]=offset of table t, G[4+NTABLES]=total."""
    n2, m2 = n + 2, m + 2
    sizes = []
    for t in range(NTABLES):
        if t < STRAND_SHIFT:
            sizes.append(n2 * n2)
        elif t < FIRST_JOINT:
            sizes.append(m2 * m2)
        elif t <= LAST_JOINT:
            sizes.append(n2 * n2 * m2 * m2)
        elif t == RL:
            sizes.append(n2 * m2)
        else:
            sizes.append(1)
    g = np.zeros(5 + NTABLES, dtype=np.int64)
    g[0], g[1], g[2], g[3] = n, m, n2, m2
    g[4:4 + NTABLES] = np.cumsum([0] + sizes[:-1])
    g[4 + NTABLES] = sum(sizes)
    return g


def joint_view(arr: np.ndarray, g: np.ndarray, t: int) -> np.ndarray:
    n2, m2 = int(g[2]), int(g[3])
    off = int(g[4 + t])
    return arr[off:off + n2 * n2 * m2 * m2].reshape(n2, n2, m2, m2)


def strand_view(arr: np.ndarray, g: np.ndarray, t: int) -> np.ndarray:
    k = int(g[2]) if t < STRAND_SHIFT else int(g[3])
    off = int(g[4 + t])
    return arr[off:off + k * k].reshape(k, k)
